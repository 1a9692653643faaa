// spectral.hpp — Parametric spectral densities and Gauss-Legendre discretization

#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "chainmps/errors.hpp"

namespace chainmps::spectral {

struct Lorentzian {
    double Omega;  // peak center (energy)
    double eta;    // width (energy)
    double lambda; // amplitude

    // L(w) = 2 lambda Omega^2 eta w / ((w^2 - Omega^2)^2 + eta^2 w^2)
    double operator()(double w) const {
        const double d = w * w - Omega * Omega;
        return 2.0 * lambda * Omega * Omega * eta * w / (d * d + eta * eta * w * w);
    }
};

struct Interval {
    double lo{0.0};
    double hi{0.0};
    bool operator==(const Interval&) const = default;
};

class SpectralDensity {
  public:
    enum class Kind { LorentzianSum, OhmicExponential };

    static SpectralDensity lorentzian_sum(std::vector<Lorentzian> terms,
                                          Interval support) {
        SpectralDensity J;
        J.kind_ = Kind::LorentzianSum;
        J.terms_ = std::move(terms);
        J.support_ = support;
        J.validate();
        return J;
    }

    // The singlet-fission form 4 g W^2 w / ((w^2-W^2)^2 + 4 g^2 w^2)
    // is the generic Lorentzian with eta = 2*gamma and lambda = 1.
    static SpectralDensity sf_lorentzian(double omega0, double gamma,
                                         Interval support) {
        return lorentzian_sum({{omega0, 2.0 * gamma, 1.0}}, support);
    }

    // J(w) = lambda * w * exp(-w / omega_c)
    static SpectralDensity ohmic_exponential(double lambda, double omega_c,
                                             Interval support) {
        SpectralDensity J;
        J.kind_ = Kind::OhmicExponential;
        J.ohmic_lambda_ = lambda;
        J.ohmic_cutoff_ = omega_c;
        J.support_ = support;
        J.validate();
        return J;
    }

    Kind kind() const { return kind_; }
    const Interval& support() const { return support_; }
    const std::vector<Lorentzian>& lorentzians() const { return terms_; }

    // Zero outside the support by convention.
    double operator()(double w) const {
        if (w < support_.lo || w > support_.hi) return 0.0;
        if (kind_ == Kind::OhmicExponential)
            return ohmic_lambda_ * w * std::exp(-w / ohmic_cutoff_);
        double s = 0.0;
        for (const auto& L : terms_) s += L(w);
        return s;
    }

    SpectralDensity scaled(double factor) const {
        SpectralDensity J = *this;
        if (factor < 0.0) throw InvalidParameter("scale factor must be >= 0");
        if (J.kind_ == Kind::OhmicExponential) {
            J.ohmic_lambda_ *= factor;
        } else {
            for (auto& L : J.terms_) L.lambda *= factor;
        }
        return J;
    }

  private:
    void validate() const {
        auto check = [](double x, const char* name) {
            if (!std::isfinite(x))
                throw InvalidParameter(std::string("non-finite spectral parameter ") + name);
        };
        check(support_.lo, "support.lo");
        check(support_.hi, "support.hi");
        if (support_.lo < 0.0 || support_.hi <= support_.lo)
            throw InvalidParameter("support must satisfy 0 <= lo < hi");
        if (kind_ == Kind::OhmicExponential) {
            check(ohmic_lambda_, "lambda");
            check(ohmic_cutoff_, "omega_c");
            if (ohmic_lambda_ < 0.0 || ohmic_cutoff_ <= 0.0)
                throw InvalidParameter("ohmic density needs lambda >= 0, omega_c > 0");
        } else {
            if (terms_.empty())
                throw InvalidParameter("lorentzian sum needs at least one term");
            for (const auto& L : terms_) {
                check(L.Omega, "Omega");
                check(L.eta, "eta");
                check(L.lambda, "lambda");
                if (L.Omega <= 0.0 || L.eta <= 0.0 || L.lambda < 0.0)
                    throw InvalidParameter(
                        "lorentzian term needs Omega > 0, eta > 0, lambda >= 0");
            }
        }
    }

    Kind kind_{Kind::LorentzianSum};
    std::vector<Lorentzian> terms_;
    double ohmic_lambda_{0.0};
    double ohmic_cutoff_{1.0};
    Interval support_;
};

inline constexpr int max_quadrature_nodes = 4096;

// Gauss-Legendre nodes/weights on [-1, 1] via the Golub-Welsch eigenproblem.
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int n) {
    if (n < 1) throw InvalidParameter("need at least one quadrature node");
    if (n > max_quadrature_nodes)
        throw InvalidParameter("quadrature node count exceeds limit of " +
                               std::to_string(max_quadrature_nodes));
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double b = k / std::sqrt(4.0 * k * k - 1.0);
        jacobi(k, k - 1) = b;
        jacobi(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
    Eigen::VectorXd nodes = es.eigenvalues();
    Eigen::VectorXd weights(n);
    for (int i = 0; i < n; ++i) {
        const double v0 = es.eigenvectors()(0, i);
        weights(i) = 2.0 * v0 * v0;
    }
    return {nodes, weights};
}

struct Discretization {
    Eigen::VectorXd frequencies; // strictly increasing, length N+1
    Eigen::VectorXd couplings;   // c_i >= 0, same length
};

// N+1 Gauss-Legendre nodes mapped onto [lo, hi];
// c_i = sqrt(J(w_i) * weight_i * (hi - lo) / (2 pi)).
inline Discretization discretize(const SpectralDensity& J, int N,
                                 Interval interval) {
    if (N < 1) throw InvalidParameter("discretize needs N >= 1");
    if (!(interval.lo >= 0.0) || !(interval.hi > interval.lo))
        throw InvalidParameter("degenerate discretization interval");
    auto [x, w] = gauss_legendre(N + 1);
    const double half = 0.5 * (interval.hi - interval.lo);
    const double mid = 0.5 * (interval.hi + interval.lo);
    Discretization d;
    d.frequencies.resize(N + 1);
    d.couplings.resize(N + 1);
    for (int i = 0; i <= N; ++i) {
        const double wi = mid + half * x(i);
        d.frequencies(i) = wi;
        const double Jw = J(wi);
        d.couplings(i) = std::sqrt(std::max(Jw, 0.0) * w(i) * half / M_PI);
    }
    return d;
}

struct DiscretizedBath {
    Eigen::VectorXd frequencies;             // shared across channels
    std::vector<std::string> labels;         // channel ids
    std::vector<Eigen::VectorXd> channels;   // coupling vectors, one per label

    int modes() const { return static_cast<int>(frequencies.size()); }

    const Eigen::VectorXd& channel(std::string_view label) const {
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == label) return channels[i];
        throw InvalidParameter("unknown bath channel '" + std::string(label) + "'");
    }
};

// Shared-node discretization: one frequency vector, per-channel couplings.
inline DiscretizedBath discretize_shared(
    const std::vector<std::pair<std::string, SpectralDensity>>& channels, int N,
    Interval interval) {
    if (channels.empty()) throw InvalidParameter("need at least one channel");
    for (const auto& [label, J] : channels)
        if (!(J.support() == interval))
            throw InvalidParameter("channel '" + label +
                                   "' support does not match the shared interval");
    DiscretizedBath bath;
    bool first = true;
    for (const auto& [label, J] : channels) {
        Discretization d = discretize(J, N, interval);
        if (first) {
            bath.frequencies = d.frequencies;
            first = false;
        }
        bath.labels.push_back(label);
        bath.channels.push_back(d.couplings);
    }
    return bath;
}

} // namespace chainmps::spectral
