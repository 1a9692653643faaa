// config.hpp — RunSpec, the sectioned key = value config format, and its
// validation. Every physical value carries an explicit unit suffix
// (e.g. "delta_z = 100 meV"); lambda values may use the relative units
// "w_diag" / "w_od" of the parameter table.

#pragma once

#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "chainmps/errors.hpp"
#include "chainmps/evolve.hpp"
#include "chainmps/model.hpp"
#include "chainmps/spectral.hpp"
#include "chainmps/units.hpp"

namespace chainmps::config {

struct RunSpec {
    std::string preset{"singlet_fission"};

    // singlet fission (all meV after resolution)
    double delta_z{100.0};
    double delta_x{20.0};
    double omega_diag{80.0};
    double omega_od{60.0};
    double gamma_diag{1.0 * units::hbar_meV_ps}; // 1 ps^-1
    double gamma_od{1.0 * units::hbar_meV_ps};
    double lambda_s1{0.0};
    double lambda_tt{0.0};
    double lambda_od{0.0};

    // spin boson
    double sb_delta_x{1.0};
    double sb_delta_z{0.0};
    double jx_lambda{2.0};
    double jx_omega_c{5.0};
    std::vector<spectral::Lorentzian> jz_lorentzians{
        {2.0, 1.5, 1.0}, {5.0, 1.5, 1.0}, {10.0, 1.5, 1.0}};

    // bath discretization
    double omega_min{0.0};
    double omega_max{800.0 / units::wavenumber_per_meV};
    int modes{300}; // N+1

    // mapping
    std::string mapping_kind{"lanczos_z"};
    std::string compare_with{}; // optional second mapping for comparison runs

    evolve::EvolutionConfig evolution{};

    std::string out_dir{"out"};
    int workers{1};
    std::uint64_t rng_seed{0}; // reserved; the pipeline is deterministic

    std::vector<double> sweep_omega_diag; // meV
    std::vector<double> sweep_omega_od;   // meV
};

namespace detail {

struct Entry {
    std::string value;
    int line{0};
    bool used{false};
};

using EntryMap = std::map<std::string, Entry>;

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

class Extractor {
  public:
    Extractor(EntryMap& entries, std::vector<std::string>& issues)
        : entries_(entries), issues_(issues) {}

    void issue(const std::string& key, int line, const std::string& msg) {
        std::ostringstream os;
        if (line > 0) os << "line " << line << ": ";
        os << key << ": " << msg;
        issues_.push_back(os.str());
    }

    std::optional<std::string> raw(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return std::nullopt;
        it->second.used = true;
        return it->second.value;
    }

    int line_of(const std::string& key) const {
        auto it = entries_.find(key);
        return it == entries_.end() ? 0 : it->second.line;
    }

    // "<number> <unit>"; accepted units constrain the dimension. Returns
    // the value converted to meV (energy) or ps (time).
    void quantity(const std::string& key, double& target,
                  units::Dimension dim,
                  const std::map<std::string, double>& relative = {}) {
        auto v = raw(key);
        if (!v) return;
        std::istringstream is(*v);
        double num;
        std::string unit;
        if (!(is >> num >> unit) || !(is >> std::ws).eof()) {
            issue(key, line_of(key), "expected '<number> <unit>', got '" + *v + "'");
            return;
        }
        if (auto it = relative.find(unit); it != relative.end()) {
            target = num * it->second;
            return;
        }
        try {
            units::Unit u = units::parse_unit(unit);
            if (units::dimension_of(u) != dim) {
                issue(key, line_of(key), "unit '" + unit + "' has the wrong dimension");
                return;
            }
            target = units::to_base(num, u);
        } catch (const InvalidParameter&) {
            issue(key, line_of(key), "unknown unit '" + unit + "'");
        }
    }

    void number(const std::string& key, double& target) {
        auto v = raw(key);
        if (!v) return;
        std::istringstream is(*v);
        double num;
        if (!(is >> num) || !(is >> std::ws).eof()) {
            issue(key, line_of(key), "expected a bare number, got '" + *v + "'");
            return;
        }
        target = num;
    }

    void integer(const std::string& key, int& target, int min_value) {
        double d = target;
        auto before = issues_.size();
        number(key, d);
        if (issues_.size() != before) return;
        if (d != std::floor(d) || d < min_value) {
            issue(key, line_of(key),
                  "expected an integer >= " + std::to_string(min_value));
            return;
        }
        target = static_cast<int>(d);
    }

    void word(const std::string& key, std::string& target) {
        auto v = raw(key);
        if (v) target = *v;
    }

    // "v1, v2, ... <unit>" -> values in meV
    void energy_list(const std::string& key, std::vector<double>& target) {
        auto v = raw(key);
        if (!v) return;
        const std::size_t pos = v->find_last_of(" \t");
        if (pos == std::string::npos) {
            issue(key, line_of(key), "expected '<v1,v2,...> <unit>'");
            return;
        }
        const std::string unit = trim(v->substr(pos + 1));
        std::string list = v->substr(0, pos);
        for (auto& c : list)
            if (c == ',') c = ' ';
        std::istringstream is(list);
        std::vector<double> vals;
        double x;
        while (is >> x) vals.push_back(x);
        if (vals.empty() || !(is >> std::ws).eof()) {
            issue(key, line_of(key), "could not parse value list");
            return;
        }
        try {
            units::Unit u = units::parse_unit(unit);
            if (units::dimension_of(u) != units::Dimension::Energy) {
                issue(key, line_of(key), "unit '" + unit + "' is not an energy");
                return;
            }
            for (auto& val : vals) val = units::to_base(val, u);
            target = std::move(vals);
        } catch (const InvalidParameter&) {
            issue(key, line_of(key), "unknown unit '" + unit + "'");
        }
    }

    // "Omega eta lambda ; Omega eta lambda ; ..." (meV, meV, dimensionless)
    void lorentzian_list(const std::string& key,
                         std::vector<spectral::Lorentzian>& target) {
        auto v = raw(key);
        if (!v) return;
        std::vector<spectral::Lorentzian> out;
        std::istringstream groups(*v);
        std::string group;
        while (std::getline(groups, group, ';')) {
            std::istringstream is(group);
            spectral::Lorentzian L{};
            if (!(is >> L.Omega >> L.eta >> L.lambda) || !(is >> std::ws).eof()) {
                issue(key, line_of(key),
                      "expected 'Omega eta lambda' triples separated by ';'");
                return;
            }
            out.push_back(L);
        }
        if (out.empty()) {
            issue(key, line_of(key), "empty lorentzian list");
            return;
        }
        target = std::move(out);
    }

    void report_unused() {
        for (auto& [key, e] : entries_)
            if (!e.used) issue(key, e.line, "unknown key");
    }

  private:
    EntryMap& entries_;
    std::vector<std::string>& issues_;
};

inline void parse_lines(std::istream& in, EntryMap& entries,
                        std::vector<std::string>& issues) {
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                issues.push_back("line " + std::to_string(lineno) +
                                 ": malformed section header");
                continue;
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            issues.push_back("line " + std::to_string(lineno) +
                             ": expected 'key = value'");
            continue;
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (!section.empty()) key = section + "." + key;
        entries[key] = Entry{value, lineno, false};
    }
}

} // namespace detail

// Applies file contents plus `overrides` ("section.key=value") and returns a
// fully resolved RunSpec. All violations are reported at once.
inline RunSpec parse_config_stream(std::istream& in,
                                   const std::vector<std::string>& overrides = {}) {
    detail::EntryMap entries;
    std::vector<std::string> issues;
    detail::parse_lines(in, entries, issues);
    for (const auto& o : overrides) {
        const std::size_t eq = o.find('=');
        if (eq == std::string::npos) {
            issues.push_back("override '" + o + "': expected key=value");
            continue;
        }
        entries[detail::trim(o.substr(0, eq))] =
            detail::Entry{detail::trim(o.substr(eq + 1)), 0, false};
    }

    RunSpec spec;
    detail::Extractor x(entries, issues);

    x.word("preset", spec.preset);
    if (spec.preset != "singlet_fission" && spec.preset != "spin_boson")
        x.issue("preset", x.line_of("preset"),
                "must be 'singlet_fission' or 'spin_boson'");

    using units::Dimension;
    x.quantity("model.delta_z", spec.delta_z, Dimension::Energy);
    x.quantity("model.delta_x", spec.delta_x, Dimension::Energy);
    x.quantity("model.omega_diag", spec.omega_diag, Dimension::Energy);
    x.quantity("model.omega_od", spec.omega_od, Dimension::Energy);
    x.quantity("model.gamma_diag", spec.gamma_diag, Dimension::Energy);
    x.quantity("model.gamma_od", spec.gamma_od, Dimension::Energy);

    // Table defaults 0.7 w_diag, 1.4 w_diag, 0.1 w_od unless set explicitly.
    const std::map<std::string, double> rel{{"w_diag", spec.omega_diag},
                                            {"w_od", spec.omega_od}};
    spec.lambda_s1 = 0.7 * spec.omega_diag;
    spec.lambda_tt = 1.4 * spec.omega_diag;
    spec.lambda_od = 0.1 * spec.omega_od;
    x.quantity("model.lambda_s1", spec.lambda_s1, Dimension::Energy, rel);
    x.quantity("model.lambda_tt", spec.lambda_tt, Dimension::Energy, rel);
    x.quantity("model.lambda_od", spec.lambda_od, Dimension::Energy, rel);
    if (spec.lambda_s1 < 0 || spec.lambda_tt < 0 || spec.lambda_od < 0)
        x.issue("model.lambda_*", 0, "lambda values must be >= 0");

    x.quantity("model.sb_delta_x", spec.sb_delta_x, Dimension::Energy);
    x.quantity("model.sb_delta_z", spec.sb_delta_z, Dimension::Energy);
    x.number("model.jx_lambda", spec.jx_lambda);
    x.quantity("model.jx_omega_c", spec.jx_omega_c, Dimension::Energy);
    x.lorentzian_list("model.jz_lorentzians", spec.jz_lorentzians);

    if (spec.preset == "spin_boson") {
        // Fig.-2 style defaults for the bath window
        spec.omega_min = 0.0;
        spec.omega_max = 20.0;
        spec.modes = 200;
    }
    x.quantity("bath.omega_min", spec.omega_min, Dimension::Energy);
    x.quantity("bath.omega_max", spec.omega_max, Dimension::Energy);
    x.integer("bath.modes", spec.modes, 2);
    if (!(spec.omega_min >= 0.0) || !(spec.omega_max > spec.omega_min))
        x.issue("bath.omega_min/omega_max", 0,
                "need 0 <= omega_min < omega_max");

    x.word("mapping.kind", spec.mapping_kind);
    x.word("mapping.compare_with", spec.compare_with);
    auto valid_kind = [](const std::string& k) {
        return k == "lanczos_x" || k == "lanczos_z" || k == "block_lanczos";
    };
    if (!valid_kind(spec.mapping_kind))
        x.issue("mapping.kind", x.line_of("mapping.kind"),
                "must be lanczos_x, lanczos_z or block_lanczos");
    if (!spec.compare_with.empty() && !valid_kind(spec.compare_with))
        x.issue("mapping.compare_with", x.line_of("mapping.compare_with"),
                "must be lanczos_x, lanczos_z or block_lanczos");

    const bool uses_block =
        spec.mapping_kind == "block_lanczos" || spec.compare_with == "block_lanczos";
    if (spec.preset == "singlet_fission" && uses_block &&
        spec.omega_diag == spec.omega_od)
        x.issue("model.omega_diag", 0,
                "omega_diag and omega_od must be distinct for block_lanczos "
                "(parallel coupling vectors make the block seeds degenerate)");

    double dt = spec.evolution.dt_ps, tf = spec.evolution.t_final_ps;
    x.quantity("evolution.dt", dt, Dimension::Time);
    x.quantity("evolution.t_final", tf, Dimension::Time);
    spec.evolution.dt_ps = dt;
    spec.evolution.t_final_ps = tf;
    x.number("evolution.svd_cutoff", spec.evolution.svd_cutoff);
    x.integer("evolution.max_bond", spec.evolution.max_bond, 1);
    x.integer("evolution.d_bath", spec.evolution.d_bath, 2);
    x.integer("evolution.measure_every", spec.evolution.measure_every, 1);
    if (!(spec.evolution.dt_ps > 0.0))
        x.issue("evolution.dt", 0, "dt must be > 0");
    if (spec.evolution.t_final_ps < 0.0)
        x.issue("evolution.t_final", 0, "t_final must be >= 0");
    if (spec.evolution.svd_cutoff < 0.0)
        x.issue("evolution.svd_cutoff", 0, "svd_cutoff must be >= 0");

    x.word("output.dir", spec.out_dir);
    x.integer("output.workers", spec.workers, 1);
    double seed = 0.0;
    x.number("run.seed", seed);
    spec.rng_seed = static_cast<std::uint64_t>(seed);

    spec.sweep_omega_diag = {20.0, 40.0, 60.0, 80.0};
    spec.sweep_omega_od = {30.0, 60.0};
    x.energy_list("sweep.omega_diag", spec.sweep_omega_diag);
    x.energy_list("sweep.omega_od", spec.sweep_omega_od);
    if (spec.sweep_omega_diag.empty() || spec.sweep_omega_od.empty())
        x.issue("sweep", 0, "sweep grids must be non-empty");

    x.report_unused();
    if (!issues.empty()) throw ConfigError(std::move(issues));
    return spec;
}

inline RunSpec parse_config(const std::string& path,
                            const std::vector<std::string>& overrides = {}) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError({"cannot open config file '" + path + "'"});
    return parse_config_stream(in, overrides);
}

} // namespace chainmps::config
