// runner.hpp — Orchestration: build bath/model/mapping from a RunSpec, run
// trajectories and sweeps, emit the CSV and manifest files

#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "chainmps/chainmap.hpp"
#include "chainmps/config.hpp"
#include "chainmps/csv.hpp"
#include "chainmps/errors.hpp"
#include "chainmps/evolve.hpp"
#include "chainmps/model.hpp"
#include "chainmps/spectral.hpp"
#include "chainmps/units.hpp"

namespace chainmps::runner {

namespace fs = std::filesystem;

inline constexpr const char* version = "0.1.0";

inline spectral::DiscretizedBath build_bath(const config::RunSpec& spec) {
    const spectral::Interval window{spec.omega_min, spec.omega_max};
    std::vector<std::pair<std::string, spectral::SpectralDensity>> channels;
    if (spec.preset == "singlet_fission") {
        channels.emplace_back("z", spectral::SpectralDensity::sf_lorentzian(
                                       spec.omega_diag, spec.gamma_diag, window));
        channels.emplace_back("x", spectral::SpectralDensity::sf_lorentzian(
                                       spec.omega_od, spec.gamma_od, window));
    } else {
        channels.emplace_back("z", spectral::SpectralDensity::lorentzian_sum(
                                       spec.jz_lorentzians, window));
        channels.emplace_back("x", spectral::SpectralDensity::ohmic_exponential(
                                       spec.jx_lambda, spec.jx_omega_c, window));
    }
    return spectral::discretize_shared(channels, spec.modes - 1, window);
}

inline model::OpenSystemModel build_model(const config::RunSpec& spec,
                                          spectral::DiscretizedBath bath) {
    if (spec.preset == "singlet_fission") {
        model::SingletFissionParams p;
        p.delta_z = spec.delta_z;
        p.delta_x = spec.delta_x;
        p.lambda_s1 = spec.lambda_s1;
        p.lambda_tt = spec.lambda_tt;
        p.lambda_od = spec.lambda_od;
        return model::build_singlet_fission(p, std::move(bath));
    }
    return model::build_spin_boson(spec.sb_delta_x, spec.sb_delta_z,
                                   std::move(bath));
}

// Seed choice: lanczos_z from the diagonal couplings, lanczos_x from the
// off-diagonal ones, block_lanczos from (diagonal, off-diagonal).
inline chainmap::ChainMapping build_mapping(const std::string& kind,
                                            const spectral::DiscretizedBath& bath) {
    if (kind == "lanczos_z")
        return chainmap::lanczos_map(bath.frequencies, bath.channel("z"));
    if (kind == "lanczos_x")
        return chainmap::lanczos_map(bath.frequencies, bath.channel("x"));
    if (kind == "block_lanczos")
        return chainmap::block_lanczos_map(bath.frequencies, bath.channel("z"),
                                           bath.channel("x"));
    throw InvalidParameter("unknown mapping kind '" + kind + "'");
}

inline void write_bandcoeffs(const fs::path& path,
                             const chainmap::ChainMapping& m) {
    csv::Writer w(path.string());
    w.row("index,alpha_meV,beta_meV,kappa_meV");
    for (int i = 0; i < m.size(); ++i) {
        const double beta = i + 1 < m.size() ? m.beta(i) : 0.0;
        const double kappa = i + 2 < m.size() ? m.kappa(i) : 0.0;
        w.fields(i, m.alpha(i), beta, kappa);
    }
}

inline void write_couplings(const fs::path& path,
                            const chainmap::TimeDependentCouplings& tc,
                            const std::vector<double>& t_grid) {
    csv::Writer w(path.string());
    w.row("t_ps,mode,channel,abs_coupling");
    for (const auto& label : tc.labels()) {
        const Eigen::MatrixXd grid = tc.wave_grid(label, t_grid);
        for (int i = 0; i < grid.rows(); ++i)
            for (int k = 0; k < grid.cols(); ++k)
                w.fields(t_grid[i], k, label, grid(i, k));
    }
}

inline void write_populations(const fs::path& path,
                              const evolve::Trajectory& traj) {
    csv::Writer w(path.string());
    w.row("t_ps,P_state0,P_state1");
    for (std::size_t i = 0; i < traj.times.size(); ++i)
        w.fields(traj.times[i], traj.populations[i][0], traj.populations[i][1]);
}

inline void write_entropy(const fs::path& path, const evolve::Trajectory& traj) {
    csv::Writer w(path.string());
    w.row("t_ps,bond,S_nats,bond_dim");
    for (std::size_t i = 0; i < traj.times.size(); ++i)
        for (std::size_t b = 0; b < traj.entropies[i].size(); ++b)
            w.fields(traj.times[i], static_cast<int>(b), traj.entropies[i][b],
                     traj.bond_dims[i][b]);
}

inline nlohmann::json spec_manifest(const config::RunSpec& spec) {
    nlohmann::json j;
    j["preset"] = spec.preset;
    if (spec.preset == "singlet_fission") {
        j["model"] = {{"delta_z_meV", spec.delta_z},
                      {"delta_x_meV", spec.delta_x},
                      {"omega_diag_meV", spec.omega_diag},
                      {"omega_od_meV", spec.omega_od},
                      {"gamma_diag_meV", spec.gamma_diag},
                      {"gamma_od_meV", spec.gamma_od},
                      {"lambda_s1_meV", spec.lambda_s1},
                      {"lambda_tt_meV", spec.lambda_tt},
                      {"lambda_od_meV", spec.lambda_od}};
    } else {
        nlohmann::json lorentzians = nlohmann::json::array();
        for (const auto& L : spec.jz_lorentzians)
            lorentzians.push_back({{"Omega_meV", L.Omega},
                                   {"eta_meV", L.eta},
                                   {"lambda", L.lambda}});
        j["model"] = {{"delta_x_meV", spec.sb_delta_x},
                      {"delta_z_meV", spec.sb_delta_z},
                      {"jx_lambda", spec.jx_lambda},
                      {"jx_omega_c_meV", spec.jx_omega_c},
                      {"jz_lorentzians", lorentzians}};
    }
    j["bath"] = {{"omega_min_meV", spec.omega_min},
                 {"omega_max_meV", spec.omega_max},
                 {"modes", spec.modes}};
    j["mapping"] = {{"kind", spec.mapping_kind},
                    {"compare_with", spec.compare_with}};
    j["evolution"] = {{"dt_ps", spec.evolution.dt_ps},
                      {"t_final_ps", spec.evolution.t_final_ps},
                      {"svd_cutoff", spec.evolution.svd_cutoff},
                      {"max_bond", spec.evolution.max_bond},
                      {"d_bath", spec.evolution.d_bath},
                      {"measure_every", spec.evolution.measure_every}};
    j["rng_seed"] = spec.rng_seed;
    j["hbar_meV_ps"] = units::hbar_meV_ps;
    j["version"] = version;
    return j;
}

inline std::vector<double> measure_grid(const config::RunSpec& spec) {
    std::vector<double> t_grid{0.0};
    const int n = static_cast<int>(
        std::llround(spec.evolution.t_final_ps / spec.evolution.dt_ps));
    for (int i = spec.evolution.measure_every; i <= n;
         i += spec.evolution.measure_every)
        t_grid.push_back(i * spec.evolution.dt_ps);
    return t_grid;
}

struct RunResult {
    evolve::Trajectory trajectory;
    fs::path dir;
};

// One trajectory with the given mapping kind; writes the full file set.
inline RunResult run_single(const config::RunSpec& spec,
                            const std::string& mapping_kind,
                            const fs::path& dir) {
    fs::create_directories(dir);
    nlohmann::json manifest = spec_manifest(spec);
    manifest["mapping"]["kind"] = mapping_kind;
    manifest["status"] = "partial";
    std::vector<std::string> written;

    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             t0)
            .count();
    };

    try {
        spectral::DiscretizedBath bath = build_bath(spec);
        chainmap::ChainMapping mapping = build_mapping(mapping_kind, bath);
        write_bandcoeffs(dir / "bandcoeffs.csv", mapping);
        written.push_back("bandcoeffs.csv");

        model::OpenSystemModel m = build_model(spec, bath);
        model::InteractionHamiltonian H(m, mapping);
        const std::vector<double> t_grid = measure_grid(spec);
        write_couplings(dir / "couplings.csv", H.couplings(), t_grid);
        written.push_back("couplings.csv");
        manifest["timings_s"]["setup"] = elapsed();

        mps::MPSState psi = evolve::initial_state(m, 0, spec.evolution);
        evolve::Trajectory traj =
            evolve::run_trajectory(H, std::move(psi), spec.evolution);
        manifest["timings_s"]["evolution"] = elapsed();

        write_populations(dir / "populations.csv", traj);
        written.push_back("populations.csv");
        write_entropy(dir / "entropy.csv", traj);
        written.push_back("entropy.csv");

        manifest["final_discarded_weight"] = traj.discarded_weight.back();
        manifest["status"] = "ok";
        manifest["outputs"] = written;
        std::ofstream(dir / "run_manifest.json") << manifest.dump(2) << "\n";
        return {std::move(traj), dir};
    } catch (...) {
        manifest["outputs"] = written;
        manifest["timings_s"]["total"] = elapsed();
        std::ofstream(dir / "run_manifest.json") << manifest.dump(2) << "\n";
        throw;
    }
}

// `run` verb: one trajectory, or two plus a diff summary when
// mapping.compare_with is set.
inline void run(const config::RunSpec& spec) {
    const fs::path out(spec.out_dir);
    if (spec.compare_with.empty()) {
        run_single(spec, spec.mapping_kind, out);
        return;
    }
    RunResult a = run_single(spec, spec.mapping_kind, out / spec.mapping_kind);
    RunResult b = run_single(spec, spec.compare_with, out / spec.compare_with);
    double max_diff = 0.0;
    const std::size_t nt =
        std::min(a.trajectory.times.size(), b.trajectory.times.size());
    for (std::size_t i = 0; i < nt; ++i)
        max_diff = std::max(max_diff,
                            std::abs(a.trajectory.populations[i][0] -
                                     b.trajectory.populations[i][0]));
    csv::Writer w((out / "diff_summary.csv").string());
    w.row("mapping_a,mapping_b,max_abs_dP_state0");
    w.fields(spec.mapping_kind, spec.compare_with, max_diff);
}

// `couplings` verb: no evolution, Fig.-2-style coupling grid only.
inline void couplings_only(const config::RunSpec& spec) {
    const fs::path dir(spec.out_dir);
    fs::create_directories(dir);
    spectral::DiscretizedBath bath = build_bath(spec);
    chainmap::ChainMapping mapping = build_mapping(spec.mapping_kind, bath);
    chainmap::TimeDependentCouplings tc(mapping, bath);
    write_bandcoeffs(dir / "bandcoeffs.csv", mapping);
    write_couplings(dir / "couplings.csv", tc, measure_grid(spec));
    nlohmann::json manifest = spec_manifest(spec);
    manifest["status"] = "ok";
    manifest["outputs"] = {"bandcoeffs.csv", "couplings.csv"};
    std::ofstream(dir / "run_manifest.json") << manifest.dump(2) << "\n";
}

// `bandcoeffs` verb.
inline void bandcoeffs_only(const config::RunSpec& spec) {
    const fs::path dir(spec.out_dir);
    fs::create_directories(dir);
    spectral::DiscretizedBath bath = build_bath(spec);
    write_bandcoeffs(dir / "bandcoeffs.csv", build_mapping(spec.mapping_kind, bath));
}

struct SweepPoint {
    double omega_diag;
    double omega_od;
    std::string status; // "ok" or the error message
    std::vector<double> final_populations;
};

// `sweep` verb: grid over omega_diag x omega_od, one subdirectory per point,
// concurrent up to spec.workers, per-point failures recorded.
inline std::vector<SweepPoint> sweep(const config::RunSpec& spec) {
    const fs::path out(spec.out_dir);
    fs::create_directories(out);

    struct Job {
        config::RunSpec spec;
        fs::path dir;
        double wd, wo;
    };
    std::vector<Job> jobs;
    for (double wd : spec.sweep_omega_diag)
        for (double wo : spec.sweep_omega_od) {
            config::RunSpec point = spec;
            point.omega_diag = wd;
            point.omega_od = wo;
            point.lambda_s1 = spec.lambda_s1 / spec.omega_diag * wd;
            point.lambda_tt = spec.lambda_tt / spec.omega_diag * wd;
            point.lambda_od = spec.lambda_od / spec.omega_od * wo;
            char name[64];
            std::snprintf(name, sizeof(name), "wdiag_%gmeV_wod_%gmeV", wd, wo);
            jobs.push_back({std::move(point), out / name, wd, wo});
        }

    std::vector<SweepPoint> results(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < jobs.size();
             i = next.fetch_add(1)) {
            SweepPoint& r = results[i];
            r.omega_diag = jobs[i].wd;
            r.omega_od = jobs[i].wo;
            try {
                RunResult rr =
                    run_single(jobs[i].spec, jobs[i].spec.mapping_kind,
                               jobs[i].dir);
                r.status = "ok";
                r.final_populations = rr.trajectory.populations.back();
            } catch (const std::exception& e) {
                r.status = e.what();
            }
        }
    };
    std::vector<std::future<void>> pool;
    const int nworkers = std::max(1, std::min<int>(spec.workers,
                                                   static_cast<int>(jobs.size())));
    for (int i = 0; i < nworkers; ++i)
        pool.push_back(std::async(std::launch::async, worker));
    for (auto& f : pool) f.get();

    csv::Writer w((out / "summary.csv").string());
    w.row("omega_diag_meV,omega_od_meV,status,P_state0_final,P_state1_final");
    for (const auto& r : results) {
        const bool ok = r.status == "ok";
        w.fields(r.omega_diag, r.omega_od, ok ? "ok" : "failed",
                 ok ? r.final_populations[0] : 0.0,
                 ok ? r.final_populations[1] : 0.0);
    }
    return results;
}

} // namespace chainmps::runner
