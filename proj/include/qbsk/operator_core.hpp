#pragma once

#include <cmath>
#include <concepts>
#include <vector>

#include "qbsk/errors.hpp"
#include "qbsk/qcalc.hpp"
#include "qbsk/quadrature.hpp"

// The operator family: shifted-knot domain, Kantorovich cells, q-Bernstein
// basis weights, and the three variants
//   B  — the base sequence of operators,
//   C  — the extension of B to all of [0,1] by f outside the domain,
//   D  — the rescaled auxiliary operators ([r+1]_q / ([r+1]_q + nu2)) B.

namespace qbsk {

struct ShiftParams {
    double mu1 = 0.0, nu1 = 0.0, mu2 = 0.0, nu2 = 0.0;

    void validate() const {
        if (!(0.0 <= mu2 && mu2 <= mu1 && mu1 <= nu1 && nu1 <= nu2))
            throw DomainError("ShiftParams: require 0 <= mu2 <= mu1 <= nu1 <= nu2");
    }
};

enum class IntegralMode { jackson, riemann };

struct OperatorSpec {
    int r = 1;
    QContext ctx;
    ShiftParams shifts;
    IntegralMode mode = IntegralMode::jackson;
    TruncationPolicy trunc;
    QuadratureSpec quad;

    void validate() const {
        if (r < 1) throw DomainError("OperatorSpec: r must be >= 1");
        ctx.validate();
        shifts.validate();
    }
};

struct DomainJr {
    double lo, hi;
    [[nodiscard]] bool contains(double xi, double slack = 1e-12) const {
        return xi >= lo - slack && xi <= hi + slack;
    }
};

struct Cell {
    int s;
    double lower, upper;
    [[nodiscard]] double width() const { return upper - lower; }
};

namespace detail {

struct SpecQuantities {
    double rp1;   // [r+1]_q
    double d1;    // [r+1]_q + nu1
    double d2;    // [r+1]_q + nu2
    double a;     // mu2 / d2 = left basis knot = DomainJr.lo
    double b;     // ([r+1]_q + mu2) / d2 = right basis knot = DomainJr.hi
    double pref;  // (d2 / [r+1]_q)^{r+1}, the ordinary (r+1)-th power
};

inline SpecQuantities quantities(const OperatorSpec& spec) {
    double rp1 = q_number(spec.ctx, spec.r + 1);
    double d1 = rp1 + spec.shifts.nu1;
    double d2 = rp1 + spec.shifts.nu2;
    return {rp1, d1, d2, spec.shifts.mu2 / d2, (rp1 + spec.shifts.mu2) / d2,
            std::pow(d2 / rp1, spec.r + 1)};
}

}  // namespace detail

inline DomainJr domain(const OperatorSpec& spec) {
    auto sq = detail::quantities(spec);
    return {sq.a, sq.b};
}

/// The r+1 Kantorovich cells; widths are all 1/([r+1]_q + nu1), forced by
/// [s+1]_q = 1 + q [s]_q.
inline std::vector<Cell> cells(const OperatorSpec& spec) {
    auto sq = detail::quantities(spec);
    std::vector<Cell> out;
    out.reserve(spec.r + 1);
    for (int s = 0; s <= spec.r; ++s) {
        double sqn = q_number(spec.ctx, s);
        out.push_back({s, (spec.ctx.q * sqn + spec.shifts.mu1) / sq.d1,
                       (q_number(spec.ctx, s + 1) + spec.shifts.mu1) / sq.d1});
    }
    return out;
}

inline std::pair<DomainJr, std::vector<Cell>> domain_and_cells(const OperatorSpec& spec) {
    return {domain(spec), cells(spec)};
}

/// Basis weights P_s(xi), s = 0..r. Nonnegative for mu2 = 0; for mu2 > 0
/// with q < 1 weights near the left endpoint can dip negative (measured by
/// min_basis_weight, not assumed away).
inline std::vector<double> basis_weights(const OperatorSpec& spec, double xi) {
    auto sq = detail::quantities(spec);
    if (xi < sq.a - 1e-12 || xi > sq.b + 1e-12)
        throw DomainError("basis_weights: xi outside the operator domain");
    std::vector<double> out(spec.r + 1);
    for (int s = 0; s <= spec.r; ++s)
        out[s] = q_binomial(spec.ctx, spec.r, s) *
                 shifted_qproduct(xi, sq.a, spec.ctx, s) *
                 shifted_qproduct(sq.b, xi, spec.ctx, spec.r - s);
    return out;
}

/// Cell integrals I_s(f) in the spec's integral mode. Independent of xi;
/// precompute once when evaluating over a grid.
template <std::invocable<double> F>
std::vector<double> cell_integrals(const OperatorSpec& spec, F&& f) {
    std::vector<double> out;
    out.reserve(spec.r + 1);
    for (const Cell& c : cells(spec)) {
        if (spec.mode == IntegralMode::jackson)
            out.push_back(jackson_integral(f, c.lower, c.upper, spec.ctx, spec.trunc));
        else
            out.push_back(adaptive_quad(f, c.lower, c.upper, spec.quad));
    }
    return out;
}

/// B(f; xi) given precomputed cell integrals.
inline double apply_B_cached(const OperatorSpec& spec,
                             const std::vector<double>& integrals, double xi) {
    auto sq = detail::quantities(spec);
    auto weights = basis_weights(spec, xi);
    double acc = 0.0;
    for (int s = 0; s <= spec.r; ++s) acc += weights[s] * integrals[s];
    return sq.d1 * sq.pref * acc;
}

template <std::invocable<double> F>
double apply_B(const OperatorSpec& spec, F&& f, double xi) {
    return apply_B_cached(spec, cell_integrals(spec, f), xi);
}

/// The extension operator: B on J_r, f itself elsewhere on [0,1].
template <std::invocable<double> F>
double extend_C(const OperatorSpec& spec, F&& f, double xi) {
    if (domain(spec).contains(xi)) return apply_B(spec, f, xi);
    return f(xi);
}

/// Scale factor relating D to B.
inline double d_scale(const OperatorSpec& spec) {
    auto sq = detail::quantities(spec);
    return sq.rp1 / sq.d2;
}

template <std::invocable<double> F>
double apply_D(const OperatorSpec& spec, F&& f, double xi) {
    return d_scale(spec) * apply_B(spec, f, xi);
}

inline double apply_D_cached(const OperatorSpec& spec,
                             const std::vector<double>& integrals, double xi) {
    return d_scale(spec) * apply_B_cached(spec, integrals, xi);
}

/// min over s and a xi-grid of P_s(xi); reports how far from positivity the
/// basis actually is for mu2 > 0, q < 1.
inline double min_basis_weight(const OperatorSpec& spec, int grid_n = 128) {
    auto dom = domain(spec);
    double worst = 0.0;
    for (int i = 0; i <= grid_n; ++i) {
        double xi = dom.lo + (dom.hi - dom.lo) * i / grid_n;
        for (double w : basis_weights(spec, xi)) worst = std::min(worst, w);
    }
    return worst;
}

/// Closed-form cell integral of t^alpha (alpha in {0,1,2}) for this spec.
inline double monomial_cell_integral(int alpha, int s, const OperatorSpec& spec) {
    return monomial_cell_integral(alpha, s, spec.r, spec.ctx, spec.shifts.mu1,
                                  spec.shifts.nu1);
}

}  // namespace qbsk
