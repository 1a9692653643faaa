// chainmap.hpp — Lanczos / block-Lanczos chain mappings and the
// interaction-picture time-dependent couplings they induce

#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "chainmps/errors.hpp"
#include "chainmps/spectral.hpp"
#include "chainmps/units.hpp"

namespace chainmps::chainmap {

enum class MappingKind { Lanczos, BlockLanczos };

struct ChainMapping {
    MappingKind kind{MappingKind::Lanczos};
    Eigen::MatrixXd transform;          // columns are the new modes
    Eigen::VectorXd alpha;              // diagonal of T^T diag(w) T
    Eigen::VectorXd beta;               // first off-diagonal (size n-1)
    Eigen::VectorXd kappa;              // second off-diagonal (size n-2), zero for Lanczos
    Eigen::VectorXd source_frequencies; // copy of the star-basis frequencies

    int size() const { return static_cast<int>(source_frequencies.size()); }
    int bandwidth() const { return kind == MappingKind::Lanczos ? 1 : 2; }
};

namespace detail {

// Two-pass classical Gram-Schmidt against the first `ncols` columns of Q.
inline void reorthogonalize(const Eigen::MatrixXd& Q, int ncols,
                            Eigen::VectorXd& v) {
    for (int pass = 0; pass < 2; ++pass) {
        const auto head = Q.leftCols(ncols);
        v.noalias() -= head * (head.transpose() * v);
    }
}

inline void extract_band(ChainMapping& m) {
    const int n = m.size();
    const Eigen::MatrixXd band =
        m.transform.transpose() * m.source_frequencies.asDiagonal() * m.transform;
    m.alpha.resize(n);
    m.beta = Eigen::VectorXd::Zero(std::max(n - 1, 0));
    m.kappa = Eigen::VectorXd::Zero(std::max(n - 2, 0));
    for (int i = 0; i < n; ++i) m.alpha(i) = band(i, i);
    for (int i = 0; i + 1 < n; ++i) m.beta(i) = band(i + 1, i);
    if (m.kind == MappingKind::BlockLanczos)
        for (int i = 0; i + 2 < n; ++i) m.kappa(i) = band(i + 2, i);
}

} // namespace detail

// Orthogonal P with first column seed/||seed|| and P^T diag(w) P tridiagonal,
// beta_k > 0. Full reorthogonalization at every step.
inline ChainMapping lanczos_map(const Eigen::VectorXd& frequencies,
                                const Eigen::VectorXd& seed) {
    const int n = static_cast<int>(frequencies.size());
    if (n < 1) throw InvalidParameter("empty frequency vector");
    if (seed.size() != n)
        throw DimensionMismatch("seed length does not match frequency count");
    const double seed_norm = seed.norm();
    if (seed_norm == 0.0) throw InvalidParameter("zero seed vector");

    const double wmax = frequencies.cwiseAbs().maxCoeff();
    const double breakdown_tol = 1e-12 * std::max(wmax, 1.0);

    ChainMapping m;
    m.kind = MappingKind::Lanczos;
    m.source_frequencies = frequencies;
    m.transform.resize(n, n);
    m.transform.col(0) = seed / seed_norm;

    for (int k = 1; k < n; ++k) {
        Eigen::VectorXd v =
            frequencies.cwiseProduct(m.transform.col(k - 1));
        detail::reorthogonalize(m.transform, k, v);
        const double beta = v.norm();
        if (beta < breakdown_tol)
            throw BreakdownError(k, "Lanczos breakdown at step " +
                                        std::to_string(k));
        m.transform.col(k) = v / beta;
    }
    detail::extract_band(m);
    return m;
}

// Band Lanczos with block width 2: columns 0 and 1 span {seed_a, seed_b},
// column j+2 is w * q_j orthogonalized against everything before it. The
// congruence Q^T diag(w) Q is banded with bandwidth 2.
inline ChainMapping block_lanczos_map(const Eigen::VectorXd& frequencies,
                                      const Eigen::VectorXd& seed_a,
                                      const Eigen::VectorXd& seed_b) {
    const int n = static_cast<int>(frequencies.size());
    if (n < 2) throw InvalidParameter("block Lanczos needs at least two modes");
    if (seed_a.size() != n || seed_b.size() != n)
        throw DimensionMismatch("seed length does not match frequency count");
    const double na = seed_a.norm();
    const double nb = seed_b.norm();
    if (na == 0.0 || nb == 0.0) throw InvalidParameter("zero seed vector");

    Eigen::VectorXd q0 = seed_a / na;
    Eigen::VectorXd r = seed_b - q0 * q0.dot(seed_b);
    // sin(angle between seeds)
    if (r.norm() / nb < 1e-8)
        throw DegenerateSeedError(
            "seed vectors are (near-)parallel; the two channels share one "
            "chain mapping, use lanczos_map instead");

    const double wmax = frequencies.cwiseAbs().maxCoeff();
    const double breakdown_tol = 1e-12 * std::max(wmax, 1.0);

    ChainMapping m;
    m.kind = MappingKind::BlockLanczos;
    m.source_frequencies = frequencies;
    m.transform.resize(n, n);
    m.transform.col(0) = q0;
    m.transform.col(1) = r / r.norm();

    for (int j = 0; j + 2 < n; ++j) {
        Eigen::VectorXd v = frequencies.cwiseProduct(m.transform.col(j));
        detail::reorthogonalize(m.transform, j + 2, v);
        const double norm = v.norm();
        if (norm < breakdown_tol)
            throw BreakdownError(j + 2, "block Lanczos breakdown at step " +
                                            std::to_string(j + 2));
        m.transform.col(j + 2) = v / norm;
    }
    detail::extract_band(m);
    return m;
}

// Interaction-picture couplings c_k(t) = sum_j T_jk c_j exp(+i w_j t / hbar)
// (the coefficient of b_k^dag once exp(-i H_bath t / hbar) is factored out)
// for every registered channel.
class TimeDependentCouplings {
  public:
    TimeDependentCouplings(ChainMapping mapping,
                           std::vector<std::string> labels,
                           std::vector<Eigen::VectorXd> source_couplings)
        : mapping_(std::move(mapping)),
          labels_(std::move(labels)),
          source_(std::move(source_couplings)) {
        if (labels_.size() != source_.size())
            throw DimensionMismatch("one coupling vector per channel label required");
        for (const auto& c : source_)
            if (c.size() != mapping_.size())
                throw DimensionMismatch("channel coupling length mismatch");
    }

    TimeDependentCouplings(ChainMapping mapping,
                           const spectral::DiscretizedBath& bath)
        : TimeDependentCouplings(std::move(mapping), bath.labels, bath.channels) {}

    const ChainMapping& mapping() const { return mapping_; }
    const std::vector<std::string>& labels() const { return labels_; }

    const Eigen::VectorXd& source(std::string_view label) const {
        return source_[index_of(label)];
    }

    Eigen::VectorXcd at(std::string_view label, double t) const {
        if (!std::isfinite(t)) throw InvalidParameter("non-finite time");
        const Eigen::VectorXd& c = source_[index_of(label)];
        const int n = mapping_.size();
        Eigen::VectorXcd phased(n);
        for (int j = 0; j < n; ++j) {
            const double phi = mapping_.source_frequencies(j) * t / units::hbar_meV_ps;
            phased(j) = c(j) * std::complex<double>(std::cos(phi), std::sin(phi));
        }
        return mapping_.transform.transpose() * phased;
    }

    // |c_k(t)| sampled on a time grid; row-major by time.
    Eigen::MatrixXd wave_grid(std::string_view label,
                              const std::vector<double>& t_grid) const {
        if (t_grid.empty()) throw InvalidParameter("empty time grid");
        for (std::size_t i = 0; i + 1 < t_grid.size(); ++i)
            if (!(t_grid[i] < t_grid[i + 1]))
                throw InvalidParameter("time grid must be ascending");
        Eigen::MatrixXd grid(t_grid.size(), mapping_.size());
        for (std::size_t i = 0; i < t_grid.size(); ++i)
            grid.row(i) = at(label, t_grid[i]).cwiseAbs().transpose();
        return grid;
    }

  private:
    std::size_t index_of(std::string_view label) const {
        for (std::size_t i = 0; i < labels_.size(); ++i)
            if (labels_[i] == label) return i;
        throw InvalidParameter("unknown channel id '" + std::string(label) + "'");
    }

    ChainMapping mapping_;
    std::vector<std::string> labels_;
    std::vector<Eigen::VectorXd> source_;
};

// Smallest k whose cumulative |c|^2 mass reaches `fraction` of the total.
inline int front_index(const Eigen::VectorXcd& couplings, double fraction = 0.99) {
    const double total = couplings.squaredNorm();
    if (total == 0.0) return 0;
    double acc = 0.0;
    for (int k = 0; k < couplings.size(); ++k) {
        acc += std::norm(couplings(k));
        if (acc >= fraction * total) return k;
    }
    return static_cast<int>(couplings.size()) - 1;
}

} // namespace chainmps::chainmap
