// evolve.hpp — Time evolution of the chain-mapped interaction-picture
// Hamiltonian: a symmetric two-site sweep integrator with swap gates, plus a
// dense exact-diagonalization reference for small instances
//
// One step: freeze all couplings at t + dt/2, then
//   exp(-i Hs dt/2), G_0..G_N (forward, system swept right),
//   G_N..G_0 (backward, system swept left), exp(-i Hs dt/2),
// each G_k = exp(-i h_k dt/2) on the (system, mode k) pair. The product is
// palindromic, so one step is second order in dt.

#pragma once

#include <chrono>
#include <cmath>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "chainmps/chainmap.hpp"
#include "chainmps/errors.hpp"
#include "chainmps/model.hpp"
#include "chainmps/mps.hpp"
#include "chainmps/units.hpp"

namespace chainmps::evolve {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

struct EvolutionConfig {
    double dt_ps{0.25e-3};       // 0.25 fs
    double t_final_ps{0.0};
    double svd_cutoff{1e-4};
    int max_bond{64};
    int d_bath{12};              // per-mode Fock truncation (160 at full scale)
    int measure_every{1};
    double term_skip_threshold{1e-10};

    void validate() const {
        if (!(dt_ps > 0.0)) throw InvalidParameter("dt must be > 0");
        if (t_final_ps < 0.0) throw InvalidParameter("t_final must be >= 0");
        if (d_bath < 2) throw InvalidParameter("d_bath must be >= 2");
        if (measure_every < 1) throw InvalidParameter("measure_every must be >= 1");
        if (svd_cutoff < 0.0) throw InvalidParameter("svd_cutoff must be >= 0");
    }
};

struct Trajectory {
    std::vector<double> times;                      // ps
    std::vector<std::vector<double>> populations;   // time x system basis state
    std::vector<std::vector<double>> entropies;     // time x bond (nats)
    std::vector<std::vector<int>> bond_dims;        // time x bond
    std::vector<double> discarded_weight;           // cumulative
    std::vector<double> wall_ms_per_step;           // averaged over the interval
};

// |system_index> (x) |0...0> on chain of length n with local dim d_bath.
inline mps::MPSState initial_state(const model::OpenSystemModel& m,
                                   int system_index,
                                   const EvolutionConfig& cfg) {
    const int n = m.bath.modes();
    std::vector<int> dims(n + 1, cfg.d_bath);
    dims[0] = m.system_dim;
    std::vector<int> occ(n + 1, 0);
    occ[0] = system_index;
    return mps::MPSState::product_state(dims, occ);
}

namespace detail {

inline Mat hermitian_exp(const Mat& h, double factor) {
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    const auto& lam = es.eigenvalues();
    Eigen::VectorXcd phases(lam.size());
    for (int i = 0; i < lam.size(); ++i) {
        const double phi = factor * lam(i);
        phases(i) = Cplx(std::cos(phi), std::sin(phi));
    }
    return es.eigenvectors() * phases.asDiagonal() *
           es.eigenvectors().adjoint();
}

inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
                a(i, j) * b;
    return out;
}

// Half-step gates for every mode, coefficients frozen at t_mid. Empty
// matrix means "no interaction here, pure swap".
struct StepGates {
    Mat system_half;        // exp(-i H_sys dt / (2 hbar))
    std::vector<Mat> pair;  // per mode, (sys x mode) ordering
};

inline StepGates build_gates(const model::InteractionHamiltonian& H,
                             double t_mid, double dt,
                             const EvolutionConfig& cfg) {
    const auto& m = H.model();
    const int n = H.chain_length();
    const int d = cfg.d_bath;
    const double factor = -0.5 * dt / units::hbar_meV_ps;

    StepGates g;
    g.system_half = hermitian_exp(m.H_sys, factor);
    g.pair.assign(n, Mat());

    const Mat b = model::InteractionHamiltonian::lowering(d);
    const Mat bdag = b.adjoint();

    // per-channel couplings at the midpoint
    std::vector<Eigen::VectorXcd> c;
    std::vector<double> cmax;
    for (const auto& ch : m.channels) {
        c.push_back(H.couplings().at(ch.label, t_mid));
        cmax.push_back(c.back().cwiseAbs().maxCoeff());
    }

    for (int k = 0; k < n; ++k) {
        Mat h;
        for (std::size_t ic = 0; ic < m.channels.size(); ++ic) {
            const Cplx ck = c[ic](k);
            if (cmax[ic] == 0.0 ||
                std::abs(ck) < cfg.term_skip_threshold * cmax[ic])
                continue;
            const Mat bath_op = ck * bdag + std::conj(ck) * b;
            if (h.size() == 0)
                h = kron(m.channels[ic].op, bath_op);
            else
                h += kron(m.channels[ic].op, bath_op);
        }
        if (h.size() != 0) g.pair[k] = hermitian_exp(h, factor);
    }
    return g;
}

} // namespace detail

// One symmetric step; the state returns with the system at site 0 and the
// canonical center there.
inline void step(mps::MPSState& state, const model::InteractionHamiltonian& H,
                 double t, double dt, const EvolutionConfig& cfg) {
    const int n = H.chain_length();
    if (state.size() != n + 1)
        throw DimensionMismatch("state length does not match chain length");
    const int ds = H.model().system_dim;

    const detail::StepGates gates =
        detail::build_gates(H, t + 0.5 * dt, dt, cfg);

    state.apply_one_site(0, gates.system_half);

    // forward: system swept from site 0 to site n
    for (int k = 0; k < n; ++k) {
        state.move_center_to(k);
        const int l = state.left_dim(k);
        const int dm = state.local_dim(k + 1);
        const int r = state.right_dim(k + 1);
        mps::Mat theta = state.merge(k); // (l*ds, dm*r)
        if (gates.pair[k].size() != 0)
            mps::MPSState::apply_gate(theta, gates.pair[k], l, ds, dm, r);
        theta = mps::MPSState::swap_physical(theta, l, ds, dm, r);
        state.split(k, theta, /*move_right=*/true, cfg.svd_cutoff, cfg.max_bond,
                    dm, ds);
    }

    // backward: system swept from site n back to site 0
    for (int k = n - 1; k >= 0; --k) {
        state.move_center_to(k + 1);
        const int l = state.left_dim(k);
        const int dm = state.local_dim(k);
        const int r = state.right_dim(k + 1);
        mps::Mat theta = state.merge(k); // (l*dm, ds*r), order (mode, sys)
        theta = mps::MPSState::swap_physical(theta, l, dm, ds, r);
        if (gates.pair[k].size() != 0)
            mps::MPSState::apply_gate(theta, gates.pair[k], l, ds, dm, r);
        state.split(k, theta, /*move_right=*/false, cfg.svd_cutoff, cfg.max_bond,
                    ds, dm);
    }

    state.apply_one_site(0, gates.system_half);

    if (!state.is_finite())
        throw NumericalFailure("non-finite tensor entries after step at t = " +
                               std::to_string(t) + " ps, dt = " +
                               std::to_string(dt) + " ps");
}

inline std::vector<double> system_populations(mps::MPSState& state,
                                              int system_dim) {
    state.move_center_to(0);
    const mps::Mat& A = state.tensor(0); // (ds, r), left dim 1
    std::vector<double> p(system_dim);
    for (int i = 0; i < system_dim; ++i) p[i] = A.row(i).squaredNorm();
    return p;
}

inline Trajectory run_trajectory(const model::InteractionHamiltonian& H,
                                 mps::MPSState state,
                                 const EvolutionConfig& cfg) {
    cfg.validate();
    const int ds = H.model().system_dim;
    Trajectory traj;

    auto measure = [&](double t, double wall_ms) {
        traj.times.push_back(t);
        traj.populations.push_back(system_populations(state, ds));
        traj.entropies.push_back(state.all_bond_entropies());
        std::vector<int> bd(state.num_bonds());
        for (int b = 0; b < state.num_bonds(); ++b) bd[b] = state.bond_dim(b);
        traj.bond_dims.push_back(std::move(bd));
        traj.discarded_weight.push_back(state.discarded_weight());
        traj.wall_ms_per_step.push_back(wall_ms);
    };

    measure(0.0, 0.0);
    const int nsteps =
        static_cast<int>(std::llround(cfg.t_final_ps / cfg.dt_ps));
    auto tic = std::chrono::steady_clock::now();
    int steps_in_interval = 0;
    for (int i = 0; i < nsteps; ++i) {
        step(state, H, i * cfg.dt_ps, cfg.dt_ps, cfg);
        ++steps_in_interval;
        if ((i + 1) % cfg.measure_every == 0 || i + 1 == nsteps) {
            auto toc = std::chrono::steady_clock::now();
            const double ms =
                std::chrono::duration<double, std::milli>(toc - tic).count() /
                steps_in_interval;
            measure((i + 1) * cfg.dt_ps, ms);
            tic = toc;
            steps_in_interval = 0;
        }
    }
    return traj;
}

// Dense Schroedinger-picture reference on the star-basis Hamiltonian,
// propagated by eigendecomposition. Basis ordering system-major, then mode 0
// outermost. No chain mapping involved.
inline Trajectory ed_reference(const model::OpenSystemModel& m,
                               int system_index,
                               const std::vector<double>& t_grid, int d_bath) {
    const int n = m.bath.modes();
    const int ds = m.system_dim;
    std::int64_t dim = ds;
    for (int k = 0; k < n; ++k) {
        dim *= d_bath;
        if (dim > mps::dense_bridge_cap)
            throw InvalidParameter("ed_reference dimension exceeds 2^14");
    }

    auto realize = [](const Eigen::MatrixXcd& c) {
        if (c.imag().cwiseAbs().maxCoeff() > 1e-14)
            throw InvalidParameter("ed_reference requires real model matrices");
        return Eigen::MatrixXd(c.real());
    };

    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(d_bath, d_bath); // b + b^dag
    Eigen::MatrixXd num = Eigen::MatrixXd::Zero(d_bath, d_bath);
    for (int i = 1; i < d_bath; ++i) {
        x(i - 1, i) = x(i, i - 1) = std::sqrt(double(i));
        num(i, i) = i;
    }

    auto add_term = [&](Eigen::MatrixXd& H, const Eigen::MatrixXd& sys_op,
                        int mode, const Eigen::MatrixXd& mode_op) {
        Eigen::MatrixXd acc = sys_op;
        for (int k = 0; k < n; ++k) {
            const Eigen::MatrixXd& f =
                (k == mode) ? mode_op
                            : Eigen::MatrixXd(
                                  Eigen::MatrixXd::Identity(d_bath, d_bath));
            Eigen::MatrixXd next(acc.rows() * d_bath, acc.cols() * d_bath);
            for (int i = 0; i < acc.rows(); ++i)
                for (int j = 0; j < acc.cols(); ++j)
                    next.block(i * d_bath, j * d_bath, d_bath, d_bath) =
                        acc(i, j) * f;
            acc.swap(next);
        }
        H += acc;
    };

    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
    add_term(H, realize(m.H_sys), -1, Eigen::MatrixXd());
    const Eigen::MatrixXd id_sys = Eigen::MatrixXd::Identity(ds, ds);
    for (int k = 0; k < n; ++k)
        add_term(H, id_sys, k, m.bath.frequencies(k) * num);
    for (const auto& ch : m.channels) {
        const Eigen::MatrixXd A = realize(ch.op);
        for (int k = 0; k < n; ++k)
            if (ch.couplings(k) != 0.0) add_term(H, A, k, ch.couplings(k) * x);
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    if (es.info() != Eigen::Success)
        throw NumericalFailure("dense eigendecomposition failed");

    if (system_index < 0 || system_index >= ds)
        throw InvalidParameter("system index out of range");
    const std::int64_t block = dim / ds;
    Eigen::VectorXd psi0 = Eigen::VectorXd::Zero(dim);
    psi0(system_index * block) = 1.0;
    const Eigen::VectorXd a = es.eigenvectors().transpose() * psi0;

    Trajectory traj;
    for (double t : t_grid) {
        Eigen::VectorXcd coeff(dim);
        for (std::int64_t i = 0; i < dim; ++i) {
            const double phi = -es.eigenvalues()(i) * t / units::hbar_meV_ps;
            coeff(i) = a(i) * Cplx(std::cos(phi), std::sin(phi));
        }
        const Eigen::VectorXcd psi = es.eigenvectors() * coeff;
        std::vector<double> p(ds);
        for (int s = 0; s < ds; ++s)
            p[s] = psi.segment(s * block, block).squaredNorm();
        traj.times.push_back(t);
        traj.populations.push_back(std::move(p));
    }
    return traj;
}

} // namespace chainmps::evolve
