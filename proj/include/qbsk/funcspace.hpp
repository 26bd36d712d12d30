#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qbsk/errors.hpp"
#include "qbsk/expr.hpp"
#include "qbsk/quadrature.hpp"

// Test-function registry and the modulus-of-continuity / smoothness
// estimators. All sup-type moduli are approximated from below on finite
// grids; consumers add the documented grid-resolution slack.

namespace qbsk {

enum class Smoothness { C0, Lipschitz, C1, C2 };

struct TestFunction {
    std::string name;
    std::function<double(double)> f;
    Smoothness tag = Smoothness::C0;
    std::function<double(double)> deriv;          // optional, analytic f'
    std::function<double(double)> deriv2;         // optional, analytic f''
    std::function<double(double)> known_modulus;  // optional, analytic omega(f; delta)
    std::function<double(double)> deriv_modulus;  // optional, analytic omega(f'; delta)

    /// f(t) for t in [0,1]. Values within 1e-12 of the endpoints are
    /// clamped; anything further out is a domain error.
    double operator()(double t) const {
        if (t < -1e-12 || t > 1.0 + 1e-12)
            throw DomainError(name + ": argument " + std::to_string(t) +
                              " outside [0,1]");
        return f(std::clamp(t, 0.0, 1.0));
    }

    [[nodiscard]] bool has_deriv() const { return static_cast<bool>(deriv); }
    [[nodiscard]] bool has_deriv2() const { return static_cast<bool>(deriv2); }
};

inline double eval_func(const TestFunction& fn, double t) { return fn(t); }

/// Built-in functions with analytic derivatives and moduli where known.
inline const std::vector<TestFunction>& registry() {
    static const double kPi = 3.14159265358979323846;
    static const std::vector<TestFunction> reg = {
        {"const1", [](double) { return 1.0; }, Smoothness::C2,
         [](double) { return 0.0; }, [](double) { return 0.0; },
         [](double) { return 0.0; }, [](double) { return 0.0; }},
        {"id", [](double t) { return t; }, Smoothness::C2,
         [](double) { return 1.0; }, [](double) { return 0.0; },
         [](double d) { return d; }, [](double) { return 0.0; }},
        {"sq", [](double t) { return t * t; }, Smoothness::C2,
         [](double t) { return 2.0 * t; }, [](double) { return 2.0; },
         [](double d) { return 2.0 * d - d * d; },
         [](double d) { return 2.0 * d; }},
        {"cube", [](double t) { return t * t * t; }, Smoothness::C2,
         [](double t) { return 3.0 * t * t; }, [](double t) { return 6.0 * t; },
         [](double d) { return 1.0 - (1.0 - d) * (1.0 - d) * (1.0 - d); },
         [](double d) { return 3.0 * (2.0 * d - d * d); }},
        {"absmid", [](double t) { return std::abs(t - 0.5); }, Smoothness::Lipschitz,
         nullptr, nullptr, [](double d) { return std::min(d, 0.5); }, nullptr},
        {"sinpi", [](double t) { return std::sin(kPi * t); }, Smoothness::C2,
         [](double t) { return kPi * std::cos(kPi * t); },
         [](double t) { return -kPi * kPi * std::sin(kPi * t); },
         // steepest increment hugs t = 0: sin(pi(t+d)) - sin(pi t) peaks there
         [](double d) { return std::sin(kPi * std::min(d, 0.5)); },
         [](double d) { return 2.0 * kPi * std::sin(kPi * d / 2.0); }},
        {"expt", [](double t) { return std::exp(t); }, Smoothness::C2,
         [](double t) { return std::exp(t); }, [](double t) { return std::exp(t); },
         [](double d) { return std::exp(1.0) - std::exp(1.0 - d); },
         [](double d) { return std::exp(1.0) - std::exp(1.0 - d); }},
    };
    return reg;
}

inline std::optional<TestFunction> lookup_function(const std::string& name) {
    for (const auto& fn : registry())
        if (fn.name == name) return fn;
    return std::nullopt;
}

/// Wrap a parsed expression as a TestFunction. Derivatives come from
/// central differences with step 1e-6; no analytic modulus.
inline TestFunction make_parsed_function(const std::string& src) {
    auto ast = std::make_shared<Expr>(parse_expr(src));
    auto ev = [ast](double t) { return ast->eval(t); };
    auto d1 = [ast](double t) {
        double h = 1e-6;
        double lo = std::max(t - h, 0.0), hi = std::min(t + h, 1.0);
        return (ast->eval(hi) - ast->eval(lo)) / (hi - lo);
    };
    auto d2 = [ast](double t) {
        double h = 1e-4;
        double tc = std::clamp(t, h, 1.0 - h);
        return (ast->eval(tc + h) - 2.0 * ast->eval(tc) + ast->eval(tc - h)) / (h * h);
    };
    return {src, ev, Smoothness::C0, d1, d2, nullptr};
}

/// f' as a TestFunction; analytic when available, central differences with
/// step 1e-6 otherwise.
inline TestFunction derivative_function(const TestFunction& fn) {
    if (!fn.has_deriv() && fn.tag != Smoothness::C0)
        throw MissingDerivative(fn.name + ": derivative unavailable");
    std::function<double(double)> d = fn.deriv;
    if (!d) {
        auto f = fn.f;
        d = [f](double t) {
            double h = 1e-6;
            double lo = std::max(t - h, 0.0), hi = std::min(t + h, 1.0);
            return (f(hi) - f(lo)) / (hi - lo);
        };
    }
    return {fn.name + "'", d, Smoothness::C0, fn.deriv2, nullptr, fn.deriv_modulus,
            nullptr};
}

/// Grid estimate of omega(f; delta) = sup_{|t1-t2|<=delta} |f(t1)-f(t2)|.
/// Lower estimate, converging from below as grid_n grows.
inline double modulus_continuity(const TestFunction& fn, double delta, int grid_n = 4096) {
    if (!(delta > 0.0) || delta > 1.0)
        throw DomainError("modulus_continuity: require 0 < delta <= 1");
    if (grid_n < 64) throw DomainError("modulus_continuity: grid_n >= 64");
    const double offsets[] = {delta, delta / 2.0, delta / 4.0, delta / 8.0};
    double best = 0.0;
    for (int i = 0; i < grid_n; ++i) {
        double t = static_cast<double>(i) / (grid_n - 1);
        double ft = fn(t);
        for (double h : offsets) {
            double u = t + h;
            if (u > 1.0) continue;
            best = std::max(best, std::abs(fn(u) - ft));
        }
    }
    return best;
}

/// omega(f; delta) using the analytic modulus when the registry has one,
/// the grid estimator otherwise.
inline double omega(const TestFunction& fn, double delta, int grid_n = 4096) {
    if (delta <= 0.0) return 0.0;
    if (fn.known_modulus) return fn.known_modulus(std::min(delta, 1.0));
    return modulus_continuity(fn, std::min(delta, 1.0), grid_n);
}

/// Integral modulus omega~_{1,p}(psi; t): sup over a geometric ladder of
/// shifts lambda <= t of ||psi(.+lambda) - psi||_{L_p[0,1-lambda]}.
inline double integral_modulus_1p(const TestFunction& psi, double t, double p,
                                  const QuadratureSpec& spec = {}) {
    if (!(t > 0.0) || t >= 1.0)
        throw DomainError("integral_modulus_1p: require 0 < t < 1");
    if (p < 1.0) throw DomainError("integral_modulus_1p: require finite p >= 1");
    double best = 0.0;
    for (double lam : {t, t / 2.0, t / 4.0, t / 8.0}) {
        auto diff = [&](double z) { return psi(z + lam) - psi(z); };
        best = std::max(best, lp_norm(diff, 0.0, 1.0 - lam, p, spec));
    }
    return best;
}

/// Weighted modulus of smoothness with beta(xi) = sqrt(xi - xi^2):
/// sup over rho in (0,delta] and xi of |f(xi + rho beta/2) - f(xi - rho beta/2)|,
/// restricted to arguments inside [0,1].
inline double modulus_smoothness_beta(const TestFunction& fn, double delta,
                                      int grid_n = 1024) {
    if (!(delta > 0.0) || delta > 1.0)
        throw DomainError("modulus_smoothness_beta: require 0 < delta <= 1");
    double best = 0.0;
    for (double rho : {delta, delta / 2.0, delta / 4.0, delta / 8.0}) {
        for (int i = 0; i <= grid_n; ++i) {
            double xi = static_cast<double>(i) / grid_n;
            double beta = std::sqrt(std::max(xi - xi * xi, 0.0));
            double hi = xi + rho * beta / 2.0;
            double lo = xi - rho * beta / 2.0;
            if (hi > 1.0 || lo < 0.0) continue;
            best = std::max(best, std::abs(fn(hi) - fn(lo)));
        }
    }
    return best;
}

/// Grid maximum of |f(t)-f(xi)| (alpha xi^2 + beta xi + t)^{sigma/2} / |t-xi|^sigma:
/// the smallest K certifying f in Lip_K^{(alpha,beta)}(sigma), up to grid
/// resolution.
inline double lipschitz_K_estimate(const TestFunction& fn, double sigma, double alpha,
                                   double beta, int grid_n = 128) {
    if (!(sigma > 0.0) || sigma > 1.0)
        throw DomainError("lipschitz_K_estimate: require sigma in (0,1]");
    if (alpha < 0.0 || beta < 0.0 || alpha + beta <= 0.0)
        throw DomainError("lipschitz_K_estimate: require alpha, beta >= 0, alpha+beta > 0");
    double best = 0.0;
    for (int i = 1; i <= grid_n; ++i) {
        double xi = static_cast<double>(i) / grid_n;
        double w = alpha * xi * xi + beta * xi;
        double fxi = fn(xi);
        for (int j = 1; j <= grid_n; ++j) {
            double t = static_cast<double>(j) / grid_n;
            if (t == xi) continue;
            double num = std::abs(fn(t) - fxi) * std::pow(w + t, sigma / 2.0);
            best = std::max(best, num / std::pow(std::abs(t - xi), sigma));
        }
    }
    return best;
}

/// Grid-resolution slack for the sup-type estimators: max|f'| / grid_n for
/// functions with an analytic derivative, a unit-Lipschitz default otherwise.
inline double estimator_resolution(const TestFunction& fn, int grid_n) {
    if (fn.known_modulus) return 1e-9;
    if (fn.has_deriv()) {
        double m = 0.0;
        for (int i = 0; i <= 256; ++i)
            m = std::max(m, std::abs(fn.deriv(static_cast<double>(i) / 256)));
        return m / grid_n;
    }
    return 1.0 / grid_n;
}

}  // namespace qbsk
