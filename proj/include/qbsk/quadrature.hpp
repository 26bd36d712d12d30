#pragma once

#include <cmath>
#include <concepts>

#include "qbsk/errors.hpp"

namespace qbsk {

struct QuadratureSpec {
    double abs_tol = 1e-12;
    int max_depth = 40;
};

namespace detail {

inline double simpson(double fa, double fm, double fb, double h) {
    return (fa + 4.0 * fm + fb) * (h / 6.0);
}

template <std::invocable<double> F>
double simpson_rec(F& f, double a, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth, int max_depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m);
    double rm = 0.5 * (m + b);
    double flm = f(lm);
    double frm = f(rm);
    double left = simpson(fa, flm, fm, m - a);
    double right = simpson(fm, frm, fb, b - m);
    double diff = left + right - whole;
    if (std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
    if (depth >= max_depth) throw DepthExceeded("adaptive Simpson: max depth reached");
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, max_depth) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace detail

/// Adaptive Simpson estimate of the integral of f over [a, b].
template <std::invocable<double> F>
double adaptive_quad(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
    if (a == b) return 0.0;
    double fa = f(a);
    double fb = f(b);
    double m = 0.5 * (a + b);
    double fm = f(m);
    double whole = detail::simpson(fa, fm, fb, b - a);
    return detail::simpson_rec(f, a, b, fa, fm, fb, whole, spec.abs_tol, 0,
                               spec.max_depth);
}

/// (∫_a^b |f|^p)^{1/p}, p >= 1 finite.
template <std::invocable<double> F>
double lp_norm(F&& f, double a, double b, double p, const QuadratureSpec& spec = {}) {
    if (p < 1.0) throw DomainError("lp_norm: p must be >= 1");
    auto g = [&](double t) { return std::pow(std::abs(f(t)), p); };
    double v = adaptive_quad(g, a, b, spec);
    return std::pow(std::max(v, 0.0), 1.0 / p);
}

}  // namespace qbsk
