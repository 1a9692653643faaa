// model.hpp — Open-system models (generalized spin-boson, singlet fission)
// and the chain-mapped interaction-picture Hamiltonian terms

#pragma once

#include <cmath>
#include <complex>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "chainmps/chainmap.hpp"
#include "chainmps/errors.hpp"
#include "chainmps/spectral.hpp"

namespace chainmps::model {

using Cplx = std::complex<double>;

inline Eigen::MatrixXcd sigma_x() {
    Eigen::MatrixXcd m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

inline Eigen::MatrixXcd sigma_z() {
    Eigen::MatrixXcd m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

struct Channel {
    std::string label;
    Eigen::MatrixXcd op;          // Hermitian system operator
    Eigen::VectorXd couplings;    // star-basis couplings over bath modes
};

struct OpenSystemModel {
    int system_dim{2};
    Eigen::MatrixXcd H_sys;
    std::vector<Channel> channels;
    spectral::DiscretizedBath bath;

    void validate() const {
        auto hermitian = [](const Eigen::MatrixXcd& m) {
            return (m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-12;
        };
        if (H_sys.rows() != system_dim || H_sys.cols() != system_dim)
            throw DimensionMismatch("H_sys does not match system_dim");
        if (!hermitian(H_sys)) throw InvalidParameter("H_sys is not Hermitian");
        for (const auto& c : channels) {
            if (c.op.rows() != system_dim || c.op.cols() != system_dim)
                throw DimensionMismatch("channel operator dim mismatch");
            if (!hermitian(c.op))
                throw InvalidParameter("channel operator '" + c.label +
                                       "' is not Hermitian");
            if (c.couplings.size() != bath.frequencies.size())
                throw DimensionMismatch("channel '" + c.label +
                                        "' coupling length mismatch");
        }
    }

    const Channel& channel(std::string_view label) const {
        for (const auto& c : channels)
            if (c.label == label) return c;
        throw InvalidParameter("unknown channel '" + std::string(label) + "'");
    }
};

// H_sys = dx * sigma_x + dz * sigma_z; channels "x" and "z" pick their
// couplings from the equally named bath channels.
inline OpenSystemModel build_spin_boson(double delta_x, double delta_z,
                                        spectral::DiscretizedBath bath) {
    OpenSystemModel m;
    m.system_dim = 2;
    m.H_sys = delta_x * sigma_x() + delta_z * sigma_z();
    m.channels.push_back({"x", sigma_x(), bath.channel("x")});
    m.channels.push_back({"z", sigma_z(), bath.channel("z")});
    m.bath = std::move(bath);
    m.validate();
    return m;
}

struct SingletFissionParams {
    double delta_z{100.0};  // meV, |S1> energy offset
    double delta_x{20.0};   // meV, electronic coupling
    double lambda_s1{0.0};  // meV
    double lambda_tt{0.0};  // meV
    double lambda_od{0.0};  // meV
};

// Basis: index 0 = |S1>, index 1 = |TT>.
// Diagonal channel "z": sqrt(l_s1)|S1><S1| + sqrt(l_tt)|TT><TT| with J_z
// couplings; off-diagonal channel "x": sqrt(l_od)(|S1><TT| + h.c.) with J_x.
inline OpenSystemModel build_singlet_fission(const SingletFissionParams& p,
                                             spectral::DiscretizedBath bath) {
    if (p.lambda_s1 < 0.0 || p.lambda_tt < 0.0 || p.lambda_od < 0.0)
        throw InvalidParameter("lambda values must be >= 0");
    Eigen::MatrixXcd s1s1 = Eigen::MatrixXcd::Zero(2, 2);
    s1s1(0, 0) = 1.0;
    Eigen::MatrixXcd tttt = Eigen::MatrixXcd::Zero(2, 2);
    tttt(1, 1) = 1.0;
    Eigen::MatrixXcd flip = Eigen::MatrixXcd::Zero(2, 2);
    flip(0, 1) = flip(1, 0) = 1.0;

    OpenSystemModel m;
    m.system_dim = 2;
    m.H_sys = p.delta_x * flip + p.delta_z * s1s1;
    m.channels.push_back(
        {"z", std::sqrt(p.lambda_s1) * s1s1 + std::sqrt(p.lambda_tt) * tttt,
         bath.channel("z")});
    m.channels.push_back({"x", std::sqrt(p.lambda_od) * flip, bath.channel("x")});
    m.bath = std::move(bath);
    m.validate();
    return m;
}

// One two-site term of the interaction-picture Hamiltonian:
// sys_op (site 0) tensor (coeff * b_mode^dag + conj(coeff) * b_mode).
struct TwoSiteTerm {
    int mode;                 // chain-mode index, lives at MPS site mode+1
    const Eigen::MatrixXcd* sys_op;
    Cplx coeff;
};

struct TermList {
    const Eigen::MatrixXcd* system_term; // H_sys, acts at site 0
    std::vector<TwoSiteTerm> two_site;
};

class InteractionHamiltonian {
  public:
    InteractionHamiltonian(OpenSystemModel model, chainmap::ChainMapping mapping)
        : model_(std::move(model)),
          couplings_(std::move(mapping), model_.bath) {
        model_.validate();
    }

    const OpenSystemModel& model() const { return model_; }
    const chainmap::TimeDependentCouplings& couplings() const { return couplings_; }
    int chain_length() const { return couplings_.mapping().size(); }

    TermList terms_at(double t) const {
        if (!std::isfinite(t)) throw InvalidParameter("non-finite time");
        TermList list;
        list.system_term = &model_.H_sys;
        const int n = chain_length();
        for (const auto& ch : model_.channels) {
            const Eigen::VectorXcd c = couplings_.at(ch.label, t);
            for (int k = 0; k < n; ++k)
                list.two_site.push_back({k, &ch.op, c(k)});
        }
        return list;
    }

    // Dense matrix of the generated terms on a truncated chain space with
    // d levels per mode, ordering system (x) mode0 (x) ... Used by tests
    // and the ED cross-checks; dimension system_dim * d^n.
    Eigen::MatrixXcd dense_matrix(double t, int d) const {
        const int n = chain_length();
        const int ds = model_.system_dim;
        std::int64_t dim = ds;
        for (int k = 0; k < n; ++k) {
            dim *= d;
            if (dim > (1 << 14))
                throw InvalidParameter("dense matrix dimension exceeds 2^14");
        }
        const Eigen::MatrixXcd b = lowering(d);
        Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(dim, dim);
        add_kron(H, model_.H_sys, -1, Eigen::MatrixXcd(), d, n);
        const TermList terms = terms_at(t);
        for (const auto& term : terms.two_site) {
            const Eigen::MatrixXcd bath_op =
                term.coeff * b.adjoint() + std::conj(term.coeff) * b;
            add_kron(H, *term.sys_op, term.mode, bath_op, d, n);
        }
        return H;
    }

    static Eigen::MatrixXcd lowering(int d) {
        Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(d, d);
        for (int i = 1; i < d; ++i) b(i - 1, i) = std::sqrt(double(i));
        return b;
    }

  private:
    // H += sys_op (x) [op at mode `mode`], identity elsewhere. mode = -1
    // means the pure system term.
    static void add_kron(Eigen::MatrixXcd& H, const Eigen::MatrixXcd& sys_op,
                         int mode, const Eigen::MatrixXcd& mode_op, int d,
                         int n_modes) {
        Eigen::MatrixXcd acc = sys_op;
        for (int k = 0; k < n_modes; ++k) {
            const Eigen::MatrixXcd& f = (k == mode)
                                            ? mode_op
                                            : Eigen::MatrixXcd(
                                                  Eigen::MatrixXcd::Identity(d, d));
            Eigen::MatrixXcd next(acc.rows() * d, acc.cols() * d);
            for (int i = 0; i < acc.rows(); ++i)
                for (int j = 0; j < acc.cols(); ++j)
                    next.block(i * d, j * d, d, d) = acc(i, j) * f;
            acc.swap(next);
        }
        H += acc;
    }

    OpenSystemModel model_;
    chainmap::TimeDependentCouplings couplings_;
};

} // namespace chainmps::model
