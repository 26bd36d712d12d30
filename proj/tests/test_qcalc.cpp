#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "qbsk/qcalc.hpp"

using namespace qbsk;

TEST_CASE("q_number basics") {
    QContext q5{0.5}, q1{1.0};
    CHECK(q_number(q5, 2) == Catch::Approx(1.5).epsilon(1e-15));
    CHECK(q_number(q5, 3) == Catch::Approx(1.75).epsilon(1e-15));
    CHECK(q_number(q5, 0) == 0.0);  // empty sum, not the printed 1
    CHECK(q_number(QContext{0.123}, 0) == 0.0);
    CHECK(q_number(q1, 5) == 5.0);
    CHECK_THROWS_AS(q_number(q5, -1), DomainError);
}

TEST_CASE("q_number recurrence [s+1] = 1 + q[s]") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> uq(0.05, 1.0);
    for (int i = 0; i < 50; ++i) {
        QContext ctx{uq(rng)};
        for (int theta = 0; theta < 20; ++theta)
            CHECK(q_number(ctx, theta + 1) ==
                  Catch::Approx(1.0 + ctx.q * q_number(ctx, theta)).margin(1e-13));
    }
}

TEST_CASE("q_number continuity at q -> 1") {
    // [theta]_{1-eps} = theta - eps theta(theta-1)/2 + O(eps^2)
    QContext near{1.0 - 1e-8};
    for (int theta = 0; theta <= 64; ++theta)
        CHECK(std::abs(q_number(near, theta) - theta) <
              1.1e-8 * theta * (theta - 1.0) / 2.0 + 1e-9);
}

TEST_CASE("q_factorial") {
    CHECK(q_factorial(QContext{0.5}, 0) == 1.0);
    CHECK(q_factorial(QContext{0.5}, 3) == Catch::Approx(2.625).epsilon(1e-15));
    CHECK(q_factorial(QContext{1.0}, 4) == 24.0);
}

TEST_CASE("q_binomial") {
    CHECK(q_binomial(QContext{0.3}, 7, 0) == 1.0);
    CHECK(q_binomial(QContext{1.0}, 5, 2) == Catch::Approx(10.0).epsilon(1e-14));
    // Gaussian polynomial 1 + q + 2q^2 + q^3 + q^4 at q = 0.5
    CHECK(q_binomial(QContext{0.5}, 4, 2) == Catch::Approx(2.1875).epsilon(1e-14));
    CHECK_THROWS_AS(q_binomial(QContext{0.5}, 4, -1), DomainError);
    CHECK_THROWS_AS(q_binomial(QContext{0.5}, 4, 5), DomainError);
}

TEST_CASE("q-Pascal rule") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> uq(0.1, 1.0);
    for (int i = 0; i < 20; ++i) {
        QContext ctx{uq(rng)};
        for (int r = 2; r <= 12; ++r)
            for (int s = 1; s < r; ++s) {
                double lhs = q_binomial(ctx, r, s);
                double rhs = q_binomial(ctx, r - 1, s - 1) +
                             std::pow(ctx.q, s) * q_binomial(ctx, r - 1, s);
                CHECK(lhs == Catch::Approx(rhs).epsilon(1e-12));
            }
    }
}

TEST_CASE("shifted_qproduct") {
    QContext ctx{0.5};
    CHECK(shifted_qproduct(0.7, 0.0, ctx, 3) ==
          Catch::Approx(0.7 * 0.7 * 0.7).epsilon(1e-15));
    CHECK(shifted_qproduct(0.6, 0.1, ctx, 2) == Catch::Approx(0.275).epsilon(1e-15));
    CHECK(shifted_qproduct(0.3, 0.9, ctx, 0) == 1.0);
}

TEST_CASE("jackson_integral examples") {
    QContext ctx{0.5};
    auto one = [](double) { return 1.0; };
    auto ident = [](double t) { return t; };
    CHECK(jackson_integral(one, 0.0, 0.7, ctx) == Catch::Approx(0.7).margin(1e-12));
    CHECK(jackson_integral(ident, 0.0, 1.0, ctx) ==
          Catch::Approx(2.0 / 3.0).margin(1e-12));  // B^2/[2]_q
    CHECK(jackson_integral(one, 0.2, 0.7, ctx) == Catch::Approx(0.5).margin(1e-12));
    CHECK_THROWS_AS(jackson_integral(one, -0.1, 0.5, ctx), DomainError);
}

TEST_CASE("jackson_integral reports non-convergence") {
    QContext ctx{0.999};
    TruncationPolicy tight{1e-14, 10};
    auto one = [](double) { return 1.0; };
    CHECK_THROWS_AS(jackson_integral(one, 0.0, 1.0, ctx, tight), NonConvergent);
}

TEST_CASE("fundamental theorem: monomials integrate to power differences") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> uq(0.2, 0.95), ub(0.0, 1.0);
    TruncationPolicy pol;
    for (int i = 0; i < 40; ++i) {
        QContext ctx{uq(rng)};
        double A = ub(rng), B = ub(rng);
        if (A > B) std::swap(A, B);
        for (int alpha = 0; alpha <= 3; ++alpha) {
            double got = jackson_integral(
                [alpha](double t) { return std::pow(t, alpha); }, A, B, ctx, pol);
            double want = (std::pow(B, alpha + 1) - std::pow(A, alpha + 1)) /
                          q_number(ctx, alpha + 1);
            CHECK(std::abs(got - want) < 10.0 * pol.tol + 1e-13);
        }
    }
}

TEST_CASE("monomial_cell_integral examples") {
    // alpha = 0 row: 1 / ([4]_{0.5} + 2) = 1 / 3.875
    CHECK(monomial_cell_integral(0, 1, 3, QContext{0.5}, 0.0, 2.0) ==
          Catch::Approx(1.0 / 3.875).epsilon(1e-14));
    // classical Riemann integral of t over [1/4, 1/2]
    CHECK(monomial_cell_integral(1, 1, 3, QContext{1.0}, 0.0, 0.0) ==
          Catch::Approx(3.0 / 32.0).epsilon(1e-14));
    CHECK_THROWS_AS(monomial_cell_integral(3, 1, 3, QContext{0.5}, 0.0, 0.0),
                    DomainError);
}

TEST_CASE("printed variant agrees only at s = r") {
    QContext ctx{0.6};
    for (int alpha = 1; alpha <= 2; ++alpha) {
        CHECK(monomial_cell_integral(alpha, 5, 5, ctx, 0.2, 0.7) ==
              Catch::Approx(monomial_cell_integral_printed(alpha, 5, 5, ctx, 0.2, 0.7))
                  .epsilon(1e-15));
        CHECK(std::abs(monomial_cell_integral(alpha, 1, 5, ctx, 0.2, 0.7) -
                       monomial_cell_integral_printed(alpha, 1, 5, ctx, 0.2, 0.7)) >
              1e-6);
    }
}

TEST_CASE("monomial_cell_integral matches the Jackson-series oracle") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> uq(0.3, 0.95), ushift(0.0, 1.0);
    TruncationPolicy pol;
    for (int trial = 0; trial < 60; ++trial) {
        int r = 1 + static_cast<int>(rng() % 16);
        int s = static_cast<int>(rng() % (r + 1));
        QContext ctx{uq(rng)};
        double mu1 = ushift(rng);
        double nu1 = mu1 + ushift(rng);
        double d1 = q_number(ctx, r + 1) + nu1;
        double lo = (ctx.q * q_number(ctx, s) + mu1) / d1;
        double hi = (q_number(ctx, s + 1) + mu1) / d1;
        for (int alpha = 0; alpha <= 2; ++alpha) {
            double oracle = jackson_integral(
                [alpha](double t) { return std::pow(t, alpha); }, lo, hi, ctx, pol);
            CHECK(std::abs(monomial_cell_integral(alpha, s, r, ctx, mu1, nu1) - oracle) <
                  10.0 * pol.tol + 1e-13);
        }
    }
}
