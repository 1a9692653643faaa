// test_config.cpp — Config parsing: defaults, unit handling, overrides, and
// aggregate error reporting.

#include <catch_amalgamated.hpp>

#include <sstream>
#include <string>

#include "chainmps/config.hpp"
#include "chainmps/units.hpp"

using namespace chainmps;

namespace {

config::RunSpec parse(const std::string& text,
                      const std::vector<std::string>& overrides = {}) {
    std::istringstream in(text);
    return config::parse_config_stream(in, overrides);
}

} // namespace

TEST_CASE("empty config resolves to the singlet-fission defaults", "[config]") {
    auto spec = parse("");
    REQUIRE(spec.preset == "singlet_fission");
    REQUIRE(spec.delta_z == Catch::Approx(100.0));
    REQUIRE(spec.delta_x == Catch::Approx(20.0));
    REQUIRE(spec.omega_diag == Catch::Approx(80.0));
    REQUIRE(spec.omega_od == Catch::Approx(60.0));
    // gamma = 1 ps^-1 expressed as an energy
    REQUIRE(spec.gamma_diag == Catch::Approx(units::hbar_meV_ps));
    // relative defaults 0.7 w_diag, 1.4 w_diag, 0.1 w_od
    REQUIRE(spec.lambda_s1 == Catch::Approx(56.0));
    REQUIRE(spec.lambda_tt == Catch::Approx(112.0));
    REQUIRE(spec.lambda_od == Catch::Approx(6.0));
    // window [0, 800 cm^-1], 300 shared modes
    REQUIRE(spec.omega_min == 0.0);
    REQUIRE(spec.omega_max ==
            Catch::Approx(800.0 / units::wavenumber_per_meV).epsilon(1e-12));
    REQUIRE(spec.modes == 300);
    REQUIRE(spec.mapping_kind == "lanczos_z");
    REQUIRE(spec.sweep_omega_diag == std::vector<double>{20.0, 40.0, 60.0, 80.0});
    REQUIRE(spec.sweep_omega_od == std::vector<double>{30.0, 60.0});
}

TEST_CASE("units are converted and relative lambdas track overridden omegas",
          "[config]") {
    auto spec = parse(
        "[model]\n"
        "delta_z = 806.5544 cm^-1\n"
        "omega_diag = 40 meV\n"
        "lambda_s1 = 0.5 w_diag\n"
        "lambda_od = 2 w_od\n"
        "[evolution]\n"
        "dt = 0.5 fs\n"
        "t_final = 1 ps\n");
    REQUIRE(spec.delta_z == Catch::Approx(100.0).epsilon(1e-6));
    REQUIRE(spec.lambda_s1 == Catch::Approx(20.0)); // 0.5 * 40 meV
    REQUIRE(spec.lambda_tt == Catch::Approx(56.0)); // default 1.4 * 40 meV
    REQUIRE(spec.lambda_od == Catch::Approx(120.0)); // 2 * default w_od
    REQUIRE(spec.evolution.dt_ps == Catch::Approx(0.5e-3));
    REQUIRE(spec.evolution.t_final_ps == Catch::Approx(1.0));
}

TEST_CASE("spin-boson preset switches the bath defaults", "[config]") {
    auto spec = parse("preset = spin_boson\n");
    REQUIRE(spec.omega_min == 0.0);
    REQUIRE(spec.omega_max == Catch::Approx(20.0));
    REQUIRE(spec.modes == 200);
    REQUIRE(spec.jz_lorentzians.size() == 3);
    REQUIRE(spec.jz_lorentzians[1].Omega == Catch::Approx(5.0));

    auto custom = parse(
        "preset = spin_boson\n"
        "[model]\n"
        "jz_lorentzians = 3 1 0.5 ; 7 2 1.5\n"
        "[bath]\n"
        "omega_max = 30 meV\n");
    REQUIRE(custom.jz_lorentzians.size() == 2);
    REQUIRE(custom.jz_lorentzians[1].eta == Catch::Approx(2.0));
    REQUIRE(custom.omega_max == Catch::Approx(30.0));
}

TEST_CASE("overrides take precedence over file contents", "[config]") {
    auto spec = parse("[model]\ndelta_x = 10 meV\n",
                      {"model.delta_x=7 meV", "evolution.d_bath=20"});
    REQUIRE(spec.delta_x == Catch::Approx(7.0));
    REQUIRE(spec.evolution.d_bath == 20);
}

TEST_CASE("all violations are reported at once with field names", "[config]") {
    try {
        parse(
            "preset = nonsense\n"
            "[model]\n"
            "delta_z = 100 meVs\n"
            "delta_x = 20 ps\n"
            "typo_key = 1\n"
            "[bath]\n"
            "modes = 2.5\n"
            "[evolution]\n"
            "dt = -1 fs\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        REQUIRE(e.issues.size() >= 6);
        const std::string all = e.what();
        REQUIRE(all.find("preset") != std::string::npos);
        REQUIRE(all.find("model.delta_z") != std::string::npos);
        REQUIRE(all.find("unknown unit 'meVs'") != std::string::npos);
        REQUIRE(all.find("model.delta_x") != std::string::npos);
        REQUIRE(all.find("wrong dimension") != std::string::npos);
        REQUIRE(all.find("model.typo_key") != std::string::npos);
        REQUIRE(all.find("bath.modes") != std::string::npos);
        REQUIRE(all.find("evolution.dt") != std::string::npos);
    }
}

TEST_CASE("degenerate block-Lanczos seeds are rejected up front", "[config]") {
    REQUIRE_THROWS_AS(parse("[mapping]\n"
                            "kind = block_lanczos\n"
                            "[model]\n"
                            "omega_diag = 60 meV\n"
                            "omega_od = 60 meV\n"),
                      ConfigError);
    // distinct peaks are fine
    auto ok = parse("[mapping]\nkind = block_lanczos\n");
    REQUIRE(ok.mapping_kind == "block_lanczos");
}

TEST_CASE("mapping kinds and comparison runs", "[config]") {
    auto spec = parse("[mapping]\nkind = lanczos_x\ncompare_with = block_lanczos\n");
    REQUIRE(spec.mapping_kind == "lanczos_x");
    REQUIRE(spec.compare_with == "block_lanczos");
    REQUIRE_THROWS_AS(parse("[mapping]\nkind = lancsoz\n"), ConfigError);
}

TEST_CASE("sweep grids parse with a shared unit suffix", "[config]") {
    auto spec = parse("[sweep]\nomega_diag = 10, 20, 30 meV\nomega_od = 806.5544 cm^-1\n");
    REQUIRE(spec.sweep_omega_diag == std::vector<double>{10.0, 20.0, 30.0});
    REQUIRE(spec.sweep_omega_od.size() == 1);
    REQUIRE(spec.sweep_omega_od[0] == Catch::Approx(100.0).epsilon(1e-6));
    REQUIRE_THROWS_AS(parse("[sweep]\nomega_diag = 10, 20 bogus\n"), ConfigError);
}

TEST_CASE("missing file raises a config error", "[config]") {
    REQUIRE_THROWS_AS(config::parse_config("/nonexistent/cfg.ini"), ConfigError);
}
