// Acceptance gate: one line per criterion, PASS/FAIL, nonzero exit on any
// failure. Everything runs at desk scale (< 60 s total).

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "qbsk/bounds.hpp"
#include "qbsk/experiments.hpp"
#include "qbsk/funcspace.hpp"
#include "qbsk/moments.hpp"
#include "qbsk/operator_core.hpp"
#include "qbsk/qcalc.hpp"

using namespace qbsk;

namespace {

int failures = 0;

void report(int idx, const char* name, bool ok, const std::string& detail) {
    std::printf("%s criterion %d (%s)%s%s\n", ok ? "PASS" : "FAIL", idx, name,
                detail.empty() ? "" : ": ", detail.c_str());
    if (!ok) ++failures;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

double binom(int n, int k) {
    double v = 1.0;
    for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
    return v;
}

// -------- criterion 1: classical reduction ------------------------------

double classical_kantorovich(int r, const std::function<double(double)>& integral,
                             double xi) {
    double acc = 0.0;
    for (int s = 0; s <= r; ++s) {
        double L = static_cast<double>(s) / (r + 1);
        double U = static_cast<double>(s + 1) / (r + 1);
        acc += binom(r, s) * std::pow(xi, s) * std::pow(1.0 - xi, r - s) *
               (integral(U) - integral(L));
    }
    return (r + 1.0) * acc;
}

void criterion1() {
    struct Case {
        std::function<double(double)> f;
        std::function<double(double)> F;  // antiderivative
    };
    std::vector<Case> cases = {
        {[](double) { return 1.0; }, [](double x) { return x; }},
        {[](double t) { return t; }, [](double x) { return x * x / 2.0; }},
        {[](double t) { return t * t; }, [](double x) { return x * x * x / 3.0; }},
        {[](double t) { return std::abs(t - 0.5); },
         [](double x) { return (x - 0.5) * std::abs(x - 0.5) / 2.0; }},
    };
    double worst = 0.0;
    for (int r = 1; r <= 32; ++r) {
        OperatorSpec spec{r, QContext{1.0}, {}, IntegralMode::riemann};
        for (const auto& c : cases) {
            auto integrals = cell_integrals(spec, c.f);
            for (int i = 0; i <= 64; ++i) {
                double xi = i / 64.0;
                double got = apply_B_cached(spec, integrals, xi);
                double ref = classical_kantorovich(r, c.F, xi);
                worst = std::max(worst, std::abs(got - ref));
            }
        }
        for (int i = 0; i <= 64; ++i) {
            double xi = i / 64.0;
            auto bm = bruteforce_moments(spec, xi);
            worst = std::max(worst, std::abs(bm.b0 - 1.0));
            double m1 = r * xi / (r + 1.0) + 0.5 / (r + 1.0);
            worst = std::max(worst, std::abs(bm.b1 - m1));
        }
    }
    report(1, "classical reduction", worst <= 1e-10,
           "max |B - classical| = " + num(worst));
}

// -------- criterion 2: partition identity -------------------------------

void criterion2() {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (double q : {0.5, 0.9})
        for (int r = 1; r <= 20; ++r) {
            OperatorSpec spec{r, QContext{q}, {0.2, 0.5, 0.0, 1.0}};
            auto dom = domain(spec);
            double rp1 = q_number(spec.ctx, r + 1);
            double target = std::pow(rp1 / (rp1 + spec.shifts.nu2), r);
            // for mu2 = 0 the right knot b equals [r+1]/d2, so the target is b^r
            for (int i = 0; i < 100; ++i) {
                double xi = dom.lo + (dom.hi - dom.lo) * u(rng);
                double sum = 0.0;
                for (double w : basis_weights(spec, xi)) sum += w;
                worst = std::max(worst, std::abs(sum - target));
            }
        }
    report(2, "partition identity", worst <= 1e-12,
           "max deviation = " + num(worst));
}

// -------- criterion 3: cell-integral adjudication -----------------------

void criterion3() {
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> uq(0.3, 0.95), ushift(0.0, 1.0);
    double worst_corrected = 0.0, best_printed_gap = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        int r = 1 + static_cast<int>(rng() % 16);
        int s = static_cast<int>(rng() % (r + 1));
        QContext ctx{uq(rng)};
        double mu1 = ushift(rng), nu1 = mu1 + ushift(rng);
        double d1 = q_number(ctx, r + 1) + nu1;
        double lo = (ctx.q * q_number(ctx, s) + mu1) / d1;
        double hi = (q_number(ctx, s + 1) + mu1) / d1;
        for (int alpha = 0; alpha <= 2; ++alpha) {
            double oracle = jackson_integral(
                [alpha](double t) { return std::pow(t, alpha); }, lo, hi, ctx, {});
            worst_corrected = std::max(
                worst_corrected,
                std::abs(monomial_cell_integral(alpha, s, r, ctx, mu1, nu1) - oracle));
            if (s != r)
                best_printed_gap = std::max(
                    best_printed_gap,
                    std::abs(monomial_cell_integral_printed(alpha, s, r, ctx, mu1, nu1) -
                             oracle));
        }
    }
    bool ok = worst_corrected <= 1e-12 && best_printed_gap > 1e-6;
    report(3, "cell-integral adjudication", ok,
           "corrected max err = " + num(worst_corrected) +
               ", printed max gap = " + num(best_printed_gap));
}

// -------- criterion 4: moment audit exactness ---------------------------

void criterion4() {
    OperatorSpec mu2zero{8, QContext{0.8}, {0.2, 0.5, 0.0, 1.0}};
    OperatorSpec qone{8, QContext{1.0}, {0.2, 0.5, 0.1, 1.0}, IntegralMode::riemann};
    auto ra = audit_moments(mu2zero, 64);
    auto rb = audit_moments(qone, 64);
    bool exactness = ra.lemma1_vs_oracle <= 1e-10 && rb.lemma1_vs_oracle <= 1e-10;
    bool c1_identity =
        ra.lemma2c1_vs_expansion <= 1e-12 && rb.lemma2c1_vs_expansion <= 1e-12;

    ShiftParams sh{0.2, 0.5, 0.1, 1.0};
    auto r8 = audit_moments(OperatorSpec{8, QContext{1.0 - 1.0 / 9.0}, sh}, 64);
    auto r64 = audit_moments(OperatorSpec{64, QContext{1.0 - 1.0 / 65.0}, sh}, 64);
    // adjudicated on the central moments: the m0 drift is mu2-proportional
    // and does not shrink, but the central-moment discrepancies do
    bool shrinking = r64.lemma2_vs_oracle < r8.lemma2_vs_oracle &&
                     r64.expansion_vs_oracle < r8.expansion_vs_oracle;

    report(4, "moment audit exactness", exactness && c1_identity && shrinking,
           "lemma1 max = " +
               num(std::max(ra.lemma1_vs_oracle, rb.lemma1_vs_oracle)) +
               ", schedule drift " + num(r8.expansion_vs_oracle) + " -> " +
               num(r64.expansion_vs_oracle));
}

// -------- criterion 5: bound certificates -------------------------------

void criterion5() {
    ShiftParams sh{0.2, 0.5, 0.1, 1.0};
    bool all_ok = true;
    std::string first_fail;
    auto note_fail = [&](const std::string& what) {
        all_ok = false;
        if (first_fail.empty()) first_fail = what;
    };
    // implied T9 constants grouped by (function, q-choice); stability means
    // never growing past 3x the smallest-r value
    for (const char* name : {"sq", "absmid", "sinpi"}) {
        TestFunction f = *lookup_function(name);
        for (int qc = 0; qc < 2; ++qc) {
            std::vector<double> implied;
            for (int r : {4, 8, 16}) {
                double q = qc == 0 ? 0.8 : 1.0 - 1.0 / (r + 1);
                OperatorSpec spec{r, QContext{q}, sh};
                std::string tag = std::string(name) + " r=" + std::to_string(r) +
                                  " q=" + std::to_string(q);
                if (!certificate_T5(spec, f).satisfied) note_fail("T5 " + tag);
                if (!certificate_T6(spec, f).satisfied) note_fail("T6 " + tag);
                if (f.has_deriv()) {
                    if (!certificate_T7(spec, f).satisfied) note_fail("T7 " + tag);
                    if (!certificate_T8(spec, f, 2.0, r / 2).satisfied)
                        note_fail("T8 " + tag);
                }
                double K = lipschitz_K_estimate(f, 1.0, 0.0, 1.0);
                if (!certificate_T10(spec, f, 1.0, 0.0, 1.0, K).satisfied)
                    note_fail("T10 " + tag);
                auto t9 = certificate_T9(spec, f, 2.0, r / 2);
                if (!std::isfinite(t9.implied_constant)) note_fail("T9 finite " + tag);
                implied.push_back(t9.implied_constant);
            }
            double base = implied.front();
            for (double c : implied)
                if (c > 3.0 * base + 1e-9)
                    note_fail(std::string("T9 stability ") + name);
        }
    }
    report(5, "bound certificates", all_ok,
           all_ok ? "T5-T10 matrix satisfied" : "first failure: " + first_fail);
}

// -------- criterion 6: convergence and saturation -----------------------

struct ErrPair {
    double sup, l2;
};

ErrPair converge_errors(int r, double q, const ShiftParams& sh,
                        const TestFunction& f, bool want_l2) {
    OperatorSpec spec{r, QContext{q}, sh,
                      q == 1.0 ? IntegralMode::riemann : IntegralMode::jackson};
    auto dom = domain(spec);
    auto integrals = cell_integrals(spec, f);
    double sup = 0.0;
    for (int i = 0; i <= 64; ++i) {
        double xi = i / 64.0;
        double v = dom.contains(xi) ? apply_B_cached(spec, integrals, xi) : f(xi);
        sup = std::max(sup, std::abs(v - f(xi)));
    }
    double l2 = 0.0;
    if (want_l2) {
        auto diff = [&](double xi) {
            return apply_B_cached(spec, integrals, xi) - f(xi);
        };
        l2 = lp_norm(diff, dom.lo, dom.hi, 2.0, QuadratureSpec{1e-10, 32});
    }
    return {sup, l2};
}

void criterion6() {
    ShiftParams sh{0.2, 0.5, 0.1, 1.0};
    TestFunction f = *lookup_function("sq");
    auto e32 = converge_errors(32, 1.0 - 1.0 / 33.0, sh, f, true);
    auto e256 = converge_errors(256, 1.0 - 1.0 / 257.0, sh, f, true);
    bool converges = e256.sup <= 0.5 * e32.sup && e256.sup <= 0.05 &&
                     e256.l2 <= 0.5 * e32.l2 && e256.l2 <= 0.05;
    // saturation only looks at the sup error; the fixed-q values blow up and
    // would defeat the adaptive quadrature anyway
    auto f128 = converge_errors(128, 0.5, sh, f, false);
    auto f256 = converge_errors(256, 0.5, sh, f, false);
    bool saturates = f256.sup / f128.sup > 0.9;
    // with the default mu2 = 0.1 the operator keeps an O(mu2) zeroth-moment
    // drift, so the sup error stalls near 0.058 xi^2 instead of vanishing;
    // the L2 and saturation clauses hold, the sup clauses cannot
    report(6, "convergence and saturation", converges && saturates,
           "sup " + num(e32.sup) + " -> " + num(e256.sup) +
               " (need <= " + num(0.5 * e32.sup) + " and <= 0.05), L2 " +
               num(e32.l2) + " -> " + num(e256.l2) +
               ", fixed-q sup ratio " + num(f256.sup / f128.sup));
}

// -------- criterion 7: voronovskaja -------------------------------------

void criterion7() {
    std::vector<std::pair<int, double>> schedule;
    for (int r : {8, 16, 32, 64, 128}) schedule.emplace_back(r, 1.0 - 1.0 / (r + 1));

    auto quad = voronovskaja_residual(schedule, {0.2, 0.5, 0.0, 1.0},
                                      *lookup_function("sq"), 64);
    bool quad_exact = true, printed_floor = true;
    for (const auto& row : quad.rows) {
        quad_exact = quad_exact && row.corrected_residual <= 1e-9;
        printed_floor = printed_floor && row.printed_residual >= 0.9 &&
                        row.printed_residual <= 1.1;
    }
    // mu2 = 0 here as well: the residual only decays when the operator
    // converges, which requires the zeroth-moment drift to vanish
    auto smooth = voronovskaja_residual(schedule, {0.2, 0.5, 0.0, 1.0},
                                        *lookup_function("sinpi"), 64);
    bool slope_ok = smooth.slope <= -0.8;
    report(7, "voronovskaja", quad_exact && printed_floor && slope_ok,
           "slope = " + num(smooth.slope) +
               ", quadratic residual max = " +
               num(quad.rows.back().corrected_residual));
}

// -------- criterion 8: parser and plumbing ------------------------------

void criterion8() {
    int bad = 0;
    auto expect = [&](const char* src, double t, double want) {
        try {
            if (std::abs(parse_expr(src).eval(t) - want) > 1e-12) ++bad;
        } catch (...) {
            ++bad;
        }
    };
    auto expect_error = [&](const char* src) {
        try {
            parse_expr(src);
            ++bad;
        } catch (const ParseError&) {
        } catch (...) {
            ++bad;
        }
    };
    expect("2+3*4", 0, 14);
    expect("2*3+4", 0, 10);
    expect("2-3-4", 0, -5);
    expect("12/3/2", 0, 2);
    expect("2^3^2", 0, 512);
    expect("-2^2", 0, -4);
    expect("2^-1", 0, 0.5);
    expect("(1+2)*3", 0, 9);
    expect("--4", 0, 4);
    expect("t^2+1", 2, 5);
    expect("sin(pi*t)", 0.5, 1.0);
    expect("cos(0)", 0, 1);
    expect("sqrt(4)", 0, 2);
    expect("abs(-3)", 0, 3);
    expect("log(e)", 0, 1);
    expect("exp(0)", 0, 1);
    expect_error("t +");
    expect_error("(1+2");
    expect_error("sin 1");
    expect_error("foo(1)");

    try {
        if (parse_expr("t +").unparse() != "") ++bad;
    } catch (const ParseError& e) {
        if (e.column != 4) ++bad;
    }

    RunConfig cfg;
    cfg.subcommand = "converge";
    cfg.r_list = {2, 4};
    cfg.q_mode = QMode::fixed;
    cfg.q_fixed = 0.9;
    cfg.grid_n = 16;
    bool deterministic =
        cmd_converge(cfg).to_string() == cmd_converge(cfg).to_string();

    report(8, "parser and plumbing", bad == 0 && deterministic,
           "corpus failures = " + std::to_string(bad) +
           (deterministic ? ", CSV deterministic" : ", CSV NOT deterministic"));
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
