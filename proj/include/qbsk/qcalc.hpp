#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>

#include "qbsk/errors.hpp"
#include "qbsk/quadrature.hpp"

// Scalar q-calculus primitives: q-integers, q-factorials, q-binomials, the
// shifted q-product used by the operator basis, and Jackson integration.
// All quantities take their classical limits at q = 1 (never by 0/0).

namespace qbsk {

struct QContext {
    double q = 1.0;

    [[nodiscard]] bool classical() const { return q == 1.0; }

    void validate() const {
        if (!(q > 0.0) || q > 1.0) throw DomainError("QContext: require 0 < q <= 1");
    }
};

struct TruncationPolicy {
    double tol = 1e-14;
    std::int64_t max_terms = 1'000'000;
};

/// [theta]_q = 1 + q + ... + q^{theta-1}. Empty sum for theta = 0.
inline double q_number(const QContext& ctx, int theta) {
    if (theta < 0) throw DomainError("q_number: theta must be >= 0");
    if (ctx.classical()) return static_cast<double>(theta);
    return (1.0 - std::pow(ctx.q, theta)) / (1.0 - ctx.q);
}

/// [n]_q! = prod_{k=1..n} [k]_q, with [0]_q! = 1.
inline double q_factorial(const QContext& ctx, int n) {
    if (n < 0) throw DomainError("q_factorial: n must be >= 0");
    double acc = 1.0;
    for (int k = 1; k <= n; ++k) acc *= q_number(ctx, k);
    return acc;
}

/// Gaussian binomial [r s]_q, computed multiplicatively as
/// prod_{i=1..s} [r-s+i]_q / [i]_q to avoid large-factorial quotients.
inline double q_binomial(const QContext& ctx, int r, int s) {
    if (s < 0 || s > r) throw DomainError("q_binomial: require 0 <= s <= r");
    double acc = 1.0;
    for (int i = 1; i <= s; ++i) acc *= q_number(ctx, r - s + i) / q_number(ctx, i);
    return acc;
}

/// (x - a)_q^m = prod_{i=0..m-1} (x - q^i a); the q-powers attach to the
/// subtrahend. Empty product is 1. Evaluates both basis factors of the
/// operator: (xi - a)_q^s directly, and (b - xi)_q^{r-s} as
/// shifted_qproduct(b, xi, ctx, r-s).
inline double shifted_qproduct(double x, double a, const QContext& ctx, int m) {
    if (m < 0) throw DomainError("shifted_qproduct: m must be >= 0");
    double acc = 1.0;
    double qa = a;
    for (int i = 0; i < m; ++i) {
        acc *= x - qa;
        qa *= ctx.q;
    }
    return acc;
}

namespace detail {

// Jackson sum from 0 to A: A(1-q) sum_{s>=0} f(A q^s) q^s, truncated when
// the geometric tail bound A * sup|f| * q^{s+1} drops below tol. sup|f| is
// taken over the sampled points, which dominates the tail for the monotone
// node sequence A q^s -> 0 used here.
template <std::invocable<double> F>
double jackson_from_zero(F& f, double A, const QContext& ctx,
                         const TruncationPolicy& pol) {
    if (A == 0.0) return 0.0;
    const double q = ctx.q;
    double sum = 0.0;
    double qs = 1.0;
    double fmax = 0.0;
    for (std::int64_t s = 0; s < pol.max_terms; ++s) {
        double fv = f(A * qs);
        fmax = std::max(fmax, std::abs(fv));
        sum += fv * qs;
        qs *= q;
        if (A * fmax * qs < pol.tol) return A * (1.0 - q) * sum;
    }
    throw NonConvergent("jackson_integral: max_terms reached before tail bound");
}

}  // namespace detail

/// q-Jackson integral of f over [A, B], 0 <= A <= B. At q = 1 this
/// delegates to classical adaptive quadrature.
template <std::invocable<double> F>
double jackson_integral(F&& f, double A, double B, const QContext& ctx,
                        const TruncationPolicy& pol = {}) {
    if (A < 0.0 || B < A) throw DomainError("jackson_integral: require 0 <= A <= B");
    if (ctx.classical()) return adaptive_quad(f, A, B, QuadratureSpec{pol.tol, 48});
    return detail::jackson_from_zero(f, B, ctx, pol) -
           detail::jackson_from_zero(f, A, ctx, pol);
}

/// Closed-form q-Jackson integral of t^alpha over the Kantorovich cell
///   [ (q[s]_q + mu1)/([r+1]_q + nu1), ([s+1]_q + mu1)/([r+1]_q + nu1) ],
/// alpha in {0,1,2}. Uses [s]_q in the alpha = 1, 2 numerators; the
/// binomial expansion [s+1]_q = 1 + q[s]_q forces this and the Jackson
/// series oracle confirms it.
inline double monomial_cell_integral(int alpha, int s, int r, const QContext& ctx,
                                     double mu1, double nu1) {
    if (s < 0 || s > r) throw DomainError("monomial_cell_integral: require 0 <= s <= r");
    const double q = ctx.q;
    const double d1 = q_number(ctx, r + 1) + nu1;
    const double sq = q_number(ctx, s);
    switch (alpha) {
        case 0:
            return 1.0 / d1;
        case 1:
            return (1.0 + 2.0 * mu1 + 2.0 * q * sq) / (q_number(ctx, 2) * d1 * d1);
        case 2:
            return (1.0 + 3.0 * mu1 + 3.0 * mu1 * mu1 +
                    3.0 * q * (1.0 + 2.0 * mu1) * sq + 3.0 * q * q * sq * sq) /
                   (q_number(ctx, 3) * d1 * d1 * d1);
        default:
            throw DomainError("monomial_cell_integral: alpha must be in {0,1,2}");
    }
}

/// The cell integral exactly as printed in the source lemma, with [r]_q in
/// place of [s]_q. Kept for the formula audit; do not use for computation.
inline double monomial_cell_integral_printed(int alpha, int s, int r,
                                             const QContext& ctx, double mu1,
                                             double nu1) {
    if (s < 0 || s > r) throw DomainError("monomial_cell_integral: require 0 <= s <= r");
    const double q = ctx.q;
    const double d1 = q_number(ctx, r + 1) + nu1;
    const double rq = q_number(ctx, r);
    switch (alpha) {
        case 0:
            return 1.0 / d1;
        case 1:
            return (1.0 + 2.0 * mu1 + 2.0 * q * rq) / (q_number(ctx, 2) * d1 * d1);
        case 2:
            return (1.0 + 3.0 * mu1 + 3.0 * mu1 * mu1 +
                    3.0 * q * (1.0 + 2.0 * mu1) * rq + 3.0 * q * q * rq * rq) /
                   (q_number(ctx, 3) * d1 * d1 * d1);
        default:
            throw DomainError("monomial_cell_integral: alpha must be in {0,1,2}");
    }
}

}  // namespace qbsk
