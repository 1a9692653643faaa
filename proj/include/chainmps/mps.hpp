// mps.hpp — Matrix-product state with mixed-canonical form, SVD truncation,
// bond entropies, expectation values and a dense bridge for small instances
//
// Site tensor storage: site s holds a (left*d, right) matrix with row index
// l*d + p (left bond major). Site 0 is the system, sites 1..N+1 the chain
// modes.

#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <numeric>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "chainmps/errors.hpp"

namespace chainmps::mps {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr std::int64_t dense_bridge_cap = 1 << 14;

namespace detail {

// (l*d, r) -> (l, d*r)
inline Mat fold_left(const Mat& A, int l, int d, int r) {
    Mat B(l, d * r);
    for (int li = 0; li < l; ++li)
        for (int p = 0; p < d; ++p)
            B.block(li, p * r, 1, r) = A.block(li * d + p, 0, 1, r);
    return B;
}

// (l, d*r) -> (l*d, r)
inline Mat unfold_left(const Mat& B, int l, int d, int r) {
    Mat A(l * d, r);
    for (int li = 0; li < l; ++li)
        for (int p = 0; p < d; ++p)
            A.block(li * d + p, 0, 1, r) = B.block(li, p * r, 1, r);
    return A;
}

} // namespace detail

struct TruncationResult {
    int kept{0};
    double discarded{0.0}; // relative discarded squared weight
};

class MPSState {
  public:
    static MPSState product_state(const std::vector<int>& local_dims,
                                  const std::vector<int>& occupations) {
        if (local_dims.size() != occupations.size() || local_dims.empty())
            throw DimensionMismatch("one occupation per site required");
        MPSState s;
        s.dims_ = local_dims;
        for (std::size_t i = 0; i < local_dims.size(); ++i) {
            const int d = local_dims[i];
            const int occ = occupations[i];
            if (occ < 0 || occ >= d)
                throw InvalidParameter("occupation index out of range at site " +
                                       std::to_string(i));
            Mat A = Mat::Zero(d, 1);
            A(occ, 0) = 1.0;
            s.tensors_.push_back(std::move(A));
        }
        s.center_ = 0;
        return s;
    }

    // Adopts raw tensors (site s: (l*d, r) with row = l*d + p). The state is
    // not assumed canonical; call canonicalize() before center-dependent ops.
    static MPSState from_tensors(std::vector<Mat> tensors,
                                 std::vector<int> local_dims) {
        if (tensors.size() != local_dims.size() || tensors.empty())
            throw DimensionMismatch("tensor/dim count mismatch");
        MPSState s;
        s.tensors_ = std::move(tensors);
        s.dims_ = std::move(local_dims);
        int left = 1;
        for (std::size_t i = 0; i < s.tensors_.size(); ++i) {
            if (s.tensors_[i].rows() != std::int64_t(left) * s.dims_[i])
                throw DimensionMismatch("tensor row count mismatch at site " +
                                        std::to_string(i));
            left = static_cast<int>(s.tensors_[i].cols());
        }
        if (left != 1) throw DimensionMismatch("last tensor must end on bond dim 1");
        s.center_ = -1;
        return s;
    }

    int size() const { return static_cast<int>(tensors_.size()); }
    int local_dim(int s) const { return dims_[s]; }
    const std::vector<int>& local_dims() const { return dims_; }
    int center() const { return center_; }
    double discarded_weight() const { return discarded_; }
    int num_bonds() const { return size() - 1; }
    // bond b sits between sites b and b+1
    int bond_dim(int b) const { return static_cast<int>(tensors_[b].cols()); }
    int max_bond_dim() const {
        int m = 1;
        for (int b = 0; b < num_bonds(); ++b) m = std::max(m, bond_dim(b));
        return m;
    }
    const Mat& tensor(int s) const { return tensors_[s]; }

    int left_dim(int s) const { return s == 0 ? 1 : bond_dim(s - 1); }
    int right_dim(int s) const { return s == num_bonds() ? 1 : bond_dim(s); }

    double norm() const {
        if (center_ >= 0) return tensors_[center_].norm();
        return std::sqrt(std::abs(self_overlap()));
    }

    void normalize() {
        const double n = norm();
        if (n == 0.0) throw NumericalFailure("cannot normalize zero state");
        if (center_ >= 0)
            tensors_[center_] /= n;
        else
            tensors_[0] /= n;
    }

    void canonicalize(int center) {
        check_site(center);
        for (int s = 0; s < center; ++s) push_right(s);
        for (int s = size() - 1; s > center; --s) push_left(s);
        center_ = center;
    }

    void move_center_to(int c) {
        check_site(c);
        if (center_ < 0) {
            canonicalize(c);
            return;
        }
        while (center_ < c) push_right(center_++);
        while (center_ > c) push_left(center_--);
    }

    // Singular values across bond b (state must be normalizable; moves the
    // canonical center to b).
    Eigen::VectorXd bond_singular_values(int b) {
        check_bond(b);
        move_center_to(b);
        Eigen::JacobiSVD<Mat> svd(tensors_[b]);
        return svd.singularValues();
    }

    // Von Neumann entropy -sum p ln p of the normalized Schmidt spectrum.
    double bond_entropy(int b) {
        return entropy_from_singular_values(bond_singular_values(b));
    }

    // All bond entropies (and kept dims) in one left-to-right sweep.
    std::vector<double> all_bond_entropies() {
        move_center_to(0);
        std::vector<double> out(num_bonds());
        for (int b = 0; b < num_bonds(); ++b) {
            Eigen::BDCSVD<Mat> svd(tensors_[b],
                                   Eigen::ComputeThinU | Eigen::ComputeThinV);
            out[b] = entropy_from_singular_values(svd.singularValues());
            tensors_[b] = svd.matrixU();
            const Mat rest = svd.singularValues().asDiagonal() *
                             svd.matrixV().adjoint();
            absorb_from_left(b + 1, rest);
            center_ = b + 1;
        }
        return out;
    }

    static double entropy_from_singular_values(const Eigen::VectorXd& s) {
        const double total = s.squaredNorm();
        if (total == 0.0) return 0.0;
        double S = 0.0;
        for (int i = 0; i < s.size(); ++i) {
            const double p = s(i) * s(i) / total;
            if (p > 0.0) S -= p * std::log(p);
        }
        return std::max(S, 0.0);
    }

    // Discards squared singular values whose running sum stays below
    // cutoff * total, keeps at most max_bond, renormalizes to the
    // pre-truncation norm, accumulates the relative discarded weight.
    TruncationResult truncate_bond(int b, double cutoff, int max_bond) {
        check_bond(b);
        move_center_to(b);
        Mat theta = merge(b);
        return split(b, theta, /*move_right=*/false, cutoff, max_bond);
    }

    // <psi| prod_s op_s |psi> with identities at unlisted sites.
    Cplx expectation(const std::map<int, Mat>& site_ops) const {
        for (const auto& [s, op] : site_ops) {
            if (s < 0 || s >= size()) throw DimensionMismatch("site out of range");
            if (op.rows() != dims_[s] || op.cols() != dims_[s])
                throw DimensionMismatch("operator dim mismatch at site " +
                                        std::to_string(s));
        }
        Mat E = Mat::Ones(1, 1);
        for (int s = 0; s < size(); ++s) {
            const int d = dims_[s], r = right_dim(s);
            const auto it = site_ops.find(s);
            std::vector<Mat> blocks(d);
            for (int p = 0; p < d; ++p) blocks[p] = phys_block(s, p); // (l, r)
            Mat next = Mat::Zero(r, r);
            for (int p = 0; p < d; ++p) {
                if (it == site_ops.end()) {
                    next.noalias() += blocks[p].adjoint() * E * blocks[p];
                } else {
                    for (int q = 0; q < d; ++q) {
                        const Cplx w = it->second(p, q);
                        if (w != Cplx(0.0))
                            next.noalias() += w * (blocks[p].adjoint() * E * blocks[q]);
                    }
                }
            }
            E.swap(next);
        }
        return E(0, 0);
    }

    // Full state vector, index ordering site0-major. Tests only.
    Vec to_dense() const {
        std::int64_t dim = 1;
        for (int d : dims_) {
            dim *= d;
            if (dim > dense_bridge_cap)
                throw InvalidParameter("dense bridge capped at 2^14 amplitudes");
        }
        Mat acc = Mat::Ones(1, 1); // (prefix_dim, bond)
        for (int s = 0; s < size(); ++s) {
            const int d = dims_[s], r = right_dim(s), l = left_dim(s);
            const std::int64_t pre = acc.rows();
            Mat next = Mat::Zero(pre * d, r);
            for (std::int64_t i = 0; i < pre; ++i)
                for (int li = 0; li < l; ++li)
                    for (int p = 0; p < d; ++p)
                        next.row(i * d + p) +=
                            acc(i, li) * tensors_[s].row(li * d + p);
            acc.swap(next);
        }
        return Vec(acc.col(0));
    }

    // --- two-site machinery used by the integrator ---

    // Merge sites (s, s+1) into theta (l*d1, d2*r). Center must be at s or s+1.
    Mat merge(int s) const {
        if (center_ != s && center_ != s + 1)
            throw InvalidParameter("canonical center must be adjacent to the bond");
        const int l = left_dim(s), d1 = dims_[s];
        const int m = bond_dim(s), d2 = dims_[s + 1], r = right_dim(s + 1);
        return tensors_[s] * detail::fold_left(tensors_[s + 1], m, d2, r); // (l*d1, d2*r)
    }

    // Apply a (d1*d2)x(d1*d2) gate (row index p1*d2+p2) to theta in place.
    static void apply_gate(Mat& theta, const Mat& gate, int l, int d1, int d2,
                           int r) {
        Mat T(d1 * d2, std::int64_t(l) * r); // (p1 p2) x (l r)
        for (int li = 0; li < l; ++li)
            for (int p1 = 0; p1 < d1; ++p1)
                for (int p2 = 0; p2 < d2; ++p2)
                    T.block(p1 * d2 + p2, std::int64_t(li) * r, 1, r) =
                        theta.block(li * d1 + p1, std::int64_t(p2) * r, 1, r);
        T = gate * T;
        for (int li = 0; li < l; ++li)
            for (int p1 = 0; p1 < d1; ++p1)
                for (int p2 = 0; p2 < d2; ++p2)
                    theta.block(li * d1 + p1, std::int64_t(p2) * r, 1, r) =
                        T.block(p1 * d2 + p2, std::int64_t(li) * r, 1, r);
    }

    // Exchange the two physical indices of theta: (l,p1,p2,r) -> (l,p2,p1,r).
    static Mat swap_physical(const Mat& theta, int l, int d1, int d2, int r) {
        Mat out(std::int64_t(l) * d2, std::int64_t(d1) * r);
        for (int li = 0; li < l; ++li)
            for (int p1 = 0; p1 < d1; ++p1)
                for (int p2 = 0; p2 < d2; ++p2)
                    out.block(std::int64_t(li) * d2 + p2, std::int64_t(p1) * r, 1, r) =
                        theta.block(std::int64_t(li) * d1 + p1, std::int64_t(p2) * r, 1, r);
        return out;
    }

    // Split theta back into sites (s, s+1) with truncation. theta must be
    // (l*d1', d2'*r) where d1', d2' are the (possibly swapped) local dims,
    // which become the new local dims of the two sites.
    TruncationResult split(int s, const Mat& theta, bool move_right,
                           double cutoff, int max_bond, int d1 = -1,
                           int d2 = -1) {
        const int l = left_dim(s), r = right_dim(s + 1);
        if (d1 < 0) d1 = dims_[s];
        if (d2 < 0) d2 = dims_[s + 1];
        if (theta.rows() != std::int64_t(l) * d1 ||
            theta.cols() != std::int64_t(d2) * r)
            throw DimensionMismatch("theta shape mismatch in split");

        Eigen::BDCSVD<Mat> svd(theta, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const Eigen::VectorXd& sv = svd.singularValues();
        const double total = sv.squaredNorm();
        if (total == 0.0) throw NumericalFailure("zero state in split");

        const int full = static_cast<int>(sv.size());
        int keep = full;
        if (cutoff > 0.0) {
            double acc = 0.0;
            while (keep > 1) {
                const double next = acc + sv(keep - 1) * sv(keep - 1);
                if (next > cutoff * total) break;
                acc = next;
                --keep;
            }
        }
        if (max_bond > 0) keep = std::min(keep, max_bond);
        keep = std::max(keep, 1);

        double kept_sq = 0.0;
        for (int i = 0; i < keep; ++i) kept_sq += sv(i) * sv(i);
        const double rel_discarded = (total - kept_sq) / total;
        discarded_ += rel_discarded;
        const double rescale = std::sqrt(total / kept_sq);

        Eigen::VectorXd s_kept = sv.head(keep) * rescale;
        Mat U = svd.matrixU().leftCols(keep);
        Mat Vh = svd.matrixV().leftCols(keep).adjoint(); // (keep, d2*r)

        dims_[s] = d1;
        dims_[s + 1] = d2;
        if (move_right) {
            tensors_[s] = U;
            tensors_[s + 1] =
                detail::unfold_left(s_kept.asDiagonal() * Vh, keep, d2, r);
            center_ = s + 1;
        } else {
            tensors_[s] = U * s_kept.asDiagonal();
            tensors_[s + 1] = detail::unfold_left(Vh, keep, d2, r);
            center_ = s;
        }
        return {keep, rel_discarded};
    }

    // Apply a one-site operator at site s (center moves to s).
    void apply_one_site(int s, const Mat& op) {
        check_site(s);
        if (op.rows() != dims_[s] || op.cols() != dims_[s])
            throw DimensionMismatch("one-site operator dim mismatch");
        move_center_to(s);
        const int l = left_dim(s), d = dims_[s], r = right_dim(s);
        Mat A = Mat::Zero(l * d, r);
        for (int p = 0; p < d; ++p)
            for (int q = 0; q < d; ++q)
                if (op(p, q) != Cplx(0.0))
                    for (int li = 0; li < l; ++li)
                        A.row(li * d + p) += op(p, q) * tensors_[s].row(li * d + q);
        tensors_[s] = std::move(A);
    }

    bool is_finite() const {
        for (const auto& t : tensors_)
            if (!t.allFinite()) return false;
        return true;
    }

    // Max isometry residual over all strictly-left / strictly-right tensors.
    double isometry_residual() const {
        if (center_ < 0) throw InvalidParameter("state has no canonical center");
        double worst = 0.0;
        for (int s = 0; s < center_; ++s) {
            const Mat& A = tensors_[s];
            worst = std::max(worst, (A.adjoint() * A -
                                     Mat::Identity(A.cols(), A.cols()))
                                        .cwiseAbs()
                                        .maxCoeff());
        }
        for (int s = size() - 1; s > center_; --s) {
            const Mat B = detail::fold_left(tensors_[s], left_dim(s), dims_[s],
                                            right_dim(s));
            worst = std::max(worst, (B * B.adjoint() -
                                     Mat::Identity(B.rows(), B.rows()))
                                        .cwiseAbs()
                                        .maxCoeff());
        }
        return worst;
    }

  private:
    void check_site(int s) const {
        if (s < 0 || s >= size()) throw InvalidParameter("site index out of range");
    }
    void check_bond(int b) const {
        if (b < 0 || b >= num_bonds())
            throw InvalidParameter("bond index out of range");
    }

    Mat phys_block(int s, int p) const { // (l, r) slice at physical index p
        const int l = left_dim(s), d = dims_[s], r = right_dim(s);
        Mat B(l, r);
        for (int li = 0; li < l; ++li) B.row(li) = tensors_[s].row(li * d + p);
        return B;
    }

    void absorb_from_left(int s, const Mat& factor) {
        // tensor_s := factor * tensor_s contracted on the left bond
        const int d = dims_[s], r = right_dim(s);
        const int l_old = static_cast<int>(tensors_[s].rows()) / d;
        const int l_new = static_cast<int>(factor.rows());
        Mat folded = detail::fold_left(tensors_[s], l_old, d, r);
        tensors_[s] = detail::unfold_left(factor * folded, l_new, d, r);
    }

    void absorb_from_right(int s, const Mat& factor) {
        tensors_[s] = tensors_[s] * factor;
    }

    // Left-orthogonalize site s via thin QR, push the factor right.
    void push_right(int s) {
        Eigen::HouseholderQR<Mat> qr(tensors_[s]);
        const int rows = static_cast<int>(tensors_[s].rows());
        const int cols = static_cast<int>(tensors_[s].cols());
        const int k = std::min(rows, cols);
        Mat Q = qr.householderQ() * Mat::Identity(rows, k);
        Mat R = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
        tensors_[s] = std::move(Q);
        absorb_from_left(s + 1, R);
    }

    // Right-orthogonalize site s, push the factor left.
    void push_left(int s) {
        const int l = left_dim(s), d = dims_[s], r = right_dim(s);
        Mat folded = detail::fold_left(tensors_[s], l, d, r); // (l, d*r)
        Eigen::HouseholderQR<Mat> qr(folded.adjoint());
        const int rows = static_cast<int>(folded.cols());
        const int k = std::min(rows, l);
        Mat Q = qr.householderQ() * Mat::Identity(rows, k);
        Mat R = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
        // folded = R^H * Q^H, rows of Q^H orthonormal
        tensors_[s] = detail::unfold_left(Q.adjoint(), k, d, r);
        absorb_from_right(s - 1, R.adjoint());
    }

    Cplx self_overlap() const {
        Mat E = Mat::Ones(1, 1);
        for (int s = 0; s < size(); ++s) {
            const int d = dims_[s], r = right_dim(s);
            Mat next = Mat::Zero(r, r);
            for (int p = 0; p < d; ++p) {
                const Mat Ap = phys_block(s, p);
                next.noalias() += Ap.adjoint() * E * Ap;
            }
            E.swap(next);
        }
        return E(0, 0);
    }

    std::vector<Mat> tensors_;
    std::vector<int> dims_;
    int center_{-1};
    double discarded_{0.0};
};

// <a|b>; dense-free contraction, any bond dims.
inline Cplx overlap(const MPSState& a, const MPSState& b) {
    if (a.local_dims() != b.local_dims())
        throw DimensionMismatch("overlap between incompatible states");
    Mat E = Mat::Ones(1, 1);
    for (int s = 0; s < a.size(); ++s) {
        const int d = a.local_dim(s);
        const int la = a.left_dim(s), ra = a.right_dim(s);
        const int lb = b.left_dim(s), rb = b.right_dim(s);
        Mat next = Mat::Zero(ra, rb);
        for (int p = 0; p < d; ++p) {
            Mat Ap(la, ra), Bp(lb, rb);
            for (int li = 0; li < la; ++li) Ap.row(li) = a.tensor(s).row(li * d + p);
            for (int li = 0; li < lb; ++li) Bp.row(li) = b.tensor(s).row(li * d + p);
            next.noalias() += Ap.adjoint() * E * Bp;
        }
        E.swap(next);
    }
    return E(0, 0);
}

} // namespace chainmps::mps
