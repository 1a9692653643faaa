// test_mps.cpp — Canonical forms, truncation, entropies and expectation
// values checked against dense state-vector computations.

#include <catch_amalgamated.hpp>

#include <complex>
#include <map>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "chainmps/mps.hpp"
#include "oracles.hpp"

using namespace chainmps;
using mps::Cplx;
using mps::Mat;
using mps::MPSState;

namespace {

MPSState random_state(const std::vector<int>& dims, int max_bond,
                      unsigned seed) {
    auto s = MPSState::from_tensors(oracles::random_mps_tensors(dims, max_bond, seed),
                                    dims);
    s.canonicalize(0);
    s.normalize();
    return s;
}

} // namespace

TEST_CASE("product state is normalized and localized", "[mps]") {
    auto s = MPSState::product_state({2, 3, 3}, {1, 0, 2});
    REQUIRE(s.size() == 3);
    REQUIRE(s.norm() == Catch::Approx(1.0).margin(1e-15));
    REQUIRE(s.max_bond_dim() == 1);

    const auto psi = s.to_dense();
    // site0-major index: (1,0,2) -> 1*9 + 0*3 + 2
    for (int i = 0; i < psi.size(); ++i) {
        if (i == 11)
            REQUIRE(std::abs(psi(i) - Cplx(1.0)) < 1e-15);
        else
            REQUIRE(std::abs(psi(i)) < 1e-15);
    }

    REQUIRE_THROWS_AS(MPSState::product_state({2, 2}, {0, 2}), InvalidParameter);
    REQUIRE_THROWS_AS(MPSState::product_state({2, 2}, {0}), DimensionMismatch);
}

TEST_CASE("canonicalization preserves the state and yields isometries",
          "[mps]") {
    const std::vector<int> dims{2, 4, 3, 4, 2};
    auto s = random_state(dims, 6, 11);
    const auto psi0 = s.to_dense();

    for (int c : {0, 2, 4, 1}) {
        s.move_center_to(c);
        REQUIRE(s.center() == c);
        REQUIRE(s.isometry_residual() < 1e-12);
        const auto psi = s.to_dense();
        REQUIRE((psi - psi0).cwiseAbs().maxCoeff() < 1e-12);
        REQUIRE(s.norm() == Catch::Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("overlap agrees with dense inner product", "[mps]") {
    const std::vector<int> dims{3, 2, 4, 2};
    auto a = random_state(dims, 5, 3);
    auto b = random_state(dims, 4, 4);
    const Cplx dense = a.to_dense().dot(b.to_dense());
    const Cplx got = mps::overlap(a, b);
    REQUIRE(std::abs(got - dense) < 1e-12);

    auto c = random_state({3, 2, 4, 3}, 4, 5);
    REQUIRE_THROWS_AS(mps::overlap(a, c), DimensionMismatch);
}

TEST_CASE("bond singular values match dense Schmidt spectrum", "[mps]") {
    const std::vector<int> dims{2, 3, 3, 2};
    auto s = random_state(dims, 8, 21);
    const auto psi = s.to_dense();

    int dl = 1;
    for (int b = 0; b < s.num_bonds(); ++b) {
        dl *= dims[b];
        const auto sv = s.bond_singular_values(b);
        const auto ref = oracles::dense_schmidt_values(psi, dl);
        REQUIRE(sv.size() <= ref.size());
        for (int i = 0; i < sv.size(); ++i)
            REQUIRE(sv(i) == Catch::Approx(ref(i)).margin(1e-12));
        for (int i = static_cast<int>(sv.size()); i < ref.size(); ++i)
            REQUIRE(ref(i) < 1e-12);
    }
}

TEST_CASE("bond entropies match dense reduced density matrices", "[mps]") {
    const std::vector<int> dims{2, 3, 2, 3};
    auto s = random_state(dims, 8, 7);
    const auto psi = s.to_dense();

    auto all = s.all_bond_entropies();
    int dl = 1;
    for (int b = 0; b < s.num_bonds(); ++b) {
        dl *= dims[b];
        const double ref = oracles::dense_bipartition_entropy(psi, dl);
        REQUIRE(s.bond_entropy(b) == Catch::Approx(ref).margin(1e-10));
        REQUIRE(all[b] == Catch::Approx(ref).margin(1e-10));
    }
}

TEST_CASE("entropy of an explicit two-term Schmidt spectrum", "[mps]") {
    Eigen::VectorXd sv(2);
    sv << std::sqrt(0.999), std::sqrt(0.001);
    const double expected = -(0.999 * std::log(0.999) + 0.001 * std::log(0.001));
    REQUIRE(MPSState::entropy_from_singular_values(sv) ==
            Catch::Approx(expected).epsilon(1e-12));
    // scale invariance of the normalized spectrum
    REQUIRE(MPSState::entropy_from_singular_values(3.7 * sv) ==
            Catch::Approx(expected).epsilon(1e-12));
}

TEST_CASE("truncation discards relative weight and preserves norm", "[mps]") {
    // Two-site state with known Schmidt spectrum (sqrt(0.999), sqrt(0.001)).
    Mat A(2, 2), B(4, 1);
    A << std::sqrt(0.999), 0.0, 0.0, std::sqrt(0.001);
    B << 1.0, 0.0, 0.0, 1.0; // (l*d + p, r): site 1 mirrors the left bond
    auto s = MPSState::from_tensors({A, B}, {2, 2});
    s.canonicalize(0);
    REQUIRE(s.norm() == Catch::Approx(1.0).margin(1e-12));

    SECTION("cutoff below the smallest weight keeps both values") {
        auto r = s.truncate_bond(0, 1e-4, 0);
        REQUIRE(r.kept == 2);
        REQUIRE(r.discarded == 0.0);
    }
    SECTION("cutoff above the smallest weight drops it") {
        auto r = s.truncate_bond(0, 5e-3, 0);
        REQUIRE(r.kept == 1);
        REQUIRE(r.discarded == Catch::Approx(0.001).epsilon(1e-10));
        REQUIRE(s.discarded_weight() == Catch::Approx(0.001).epsilon(1e-10));
        // norm is restored after truncation
        REQUIRE(s.norm() == Catch::Approx(1.0).margin(1e-12));
        // the surviving state is the dominant Schmidt pair
        const auto psi = s.to_dense();
        REQUIRE(std::abs(psi(0)) == Catch::Approx(1.0).margin(1e-12));
    }
    SECTION("max_bond caps the kept rank even at zero cutoff") {
        auto r = s.truncate_bond(0, 0.0, 1);
        REQUIRE(r.kept == 1);
        REQUIRE(r.discarded == Catch::Approx(0.001).epsilon(1e-10));
    }
}

TEST_CASE("truncated state is the best low-rank approximation", "[mps]") {
    const std::vector<int> dims{2, 4, 4, 2};
    auto s = random_state(dims, 8, 31);
    const auto psi = s.to_dense();

    auto t = s;
    const auto r = t.truncate_bond(1, 0.0, 3);
    REQUIRE(r.kept == 3);
    REQUIRE(t.norm() == Catch::Approx(1.0).margin(1e-12));

    // Eckart-Young: squared distance of the (unnormalized) rank-3 cut equals
    // the discarded squared weight.
    const auto ref = oracles::dense_schmidt_values(psi, 8);
    double tail = 0.0;
    for (int i = 3; i < ref.size(); ++i) tail += ref(i) * ref(i);
    REQUIRE(r.discarded == Catch::Approx(tail).margin(1e-12));

    // overlap with the original reflects the kept weight
    const double ov = std::abs(mps::overlap(t, s));
    REQUIRE(ov == Catch::Approx(std::sqrt(1.0 - tail)).margin(1e-10));
}

TEST_CASE("discarded weight accumulates monotonically", "[mps]") {
    auto s = random_state({2, 3, 3, 2}, 8, 13);
    double prev = s.discarded_weight();
    REQUIRE(prev == 0.0);
    for (int b = 0; b < s.num_bonds(); ++b) {
        s.truncate_bond(b, 1e-3, 0);
        REQUIRE(s.discarded_weight() >= prev);
        prev = s.discarded_weight();
    }
}

TEST_CASE("expectation values match dense contraction", "[mps]") {
    const std::vector<int> dims{2, 3, 2};
    auto s = random_state(dims, 6, 17);
    const auto psi = s.to_dense();

    std::mt19937 rng(99);
    std::normal_distribution<double> g;
    auto rand_herm = [&](int d) {
        Mat M(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) M(i, j) = Cplx(g(rng), g(rng));
        return Mat((M + M.adjoint()) / 2.0);
    };
    const Mat O0 = rand_herm(2), O1 = rand_herm(3);

    // dense reference: (O0 x O1 x I) acting site0-major
    Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(12, 12);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 2; ++c)
                for (int a2 = 0; a2 < 2; ++a2)
                    for (int b2 = 0; b2 < 3; ++b2)
                        full(a * 6 + b * 2 + c, a2 * 6 + b2 * 2 + c) +=
                            O0(a, a2) * O1(b, b2);
    const Cplx ref = psi.dot(full * psi);
    const Cplx got = s.expectation({{0, O0}, {1, O1}});
    REQUIRE(std::abs(got - ref) < 1e-12);

    // identity everywhere gives the squared norm
    REQUIRE(std::abs(s.expectation({}) - Cplx(1.0)) < 1e-12);

    REQUIRE_THROWS_AS(s.expectation({{0, O1}}), DimensionMismatch);
    REQUIRE_THROWS_AS(s.expectation({{5, O0}}), DimensionMismatch);
}

TEST_CASE("one-site operator application", "[mps]") {
    auto s = random_state({2, 2, 2}, 4, 41);
    const auto psi = s.to_dense();
    Mat sx(2, 2);
    sx << 0, 1, 1, 0;
    s.apply_one_site(1, sx);
    const auto got = s.to_dense();
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                REQUIRE(std::abs(got(a * 4 + b * 2 + c) -
                                 psi(a * 4 + (1 - b) * 2 + c)) < 1e-12);
}

TEST_CASE("two-site gate, swap and split round-trip", "[mps]") {
    const std::vector<int> dims{2, 3, 2};
    auto s = random_state(dims, 6, 55);
    const auto psi = s.to_dense();

    s.move_center_to(1);
    const int l = s.left_dim(1), r = s.right_dim(2);
    Mat theta = s.merge(1); // sites 1,2: dims 3 and 2

    std::mt19937 rng(7);
    std::normal_distribution<double> g;
    Mat G(6, 6);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) G(i, j) = Cplx(g(rng), g(rng));
    Eigen::HouseholderQR<Mat> qr(G);
    Mat U = qr.householderQ() * Mat::Identity(6, 6); // unitary gate

    SECTION("gate application matches dense action") {
        Mat th = theta;
        MPSState::apply_gate(th, U, l, 3, 2, r);
        s.split(1, th, /*move_right=*/true, 0.0, 0);
        const auto got = s.to_dense();

        Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(12, 12);
        for (int a = 0; a < 2; ++a)
            for (int i = 0; i < 6; ++i)
                for (int j = 0; j < 6; ++j) full(a * 6 + i, a * 6 + j) = U(i, j);
        const Eigen::VectorXcd ref = full * psi;
        REQUIRE((got - ref).cwiseAbs().maxCoeff() < 1e-12);
    }

    SECTION("swap exchanges the local dimensions and amplitudes") {
        Mat sw = MPSState::swap_physical(theta, l, 3, 2, r);
        s.split(1, sw, /*move_right=*/false, 0.0, 0, 2, 3);
        REQUIRE(s.local_dim(1) == 2);
        REQUIRE(s.local_dim(2) == 3);
        const auto got = s.to_dense();
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 3; ++b)
                for (int c = 0; c < 2; ++c)
                    REQUIRE(std::abs(got(a * 6 + c * 3 + b) -
                                     psi(a * 6 + b * 2 + c)) < 1e-12);
    }
}

TEST_CASE("dense bridge refuses oversized states", "[mps]") {
    const std::vector<int> dims(15, 2); // 2^15 > cap
    auto s = MPSState::product_state(dims, std::vector<int>(15, 0));
    REQUIRE_THROWS_AS(s.to_dense(), InvalidParameter);
}
