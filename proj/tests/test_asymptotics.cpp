#include "doctest.h"

#include "flatdisc/asymptotics.hpp"
#include "flatdisc/numeric.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>

using namespace flatdisc;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("Hurwitz zeta against frozen high-precision values") {
    CHECK(hurwitz_zeta(1.25, 0.3) == Approx(8.6646645305778644761).epsilon(1e-12));
    CHECK(hurwitz_zeta(2.5, 1.0) == Approx(1.3414872572509171798).epsilon(1e-12));
    CHECK(hurwitz_zeta(1.75, 0.05) == Approx(191.00663157682410307).epsilon(1e-12));
    CHECK(hurwitz_zeta(3.0, 2.5) == Approx(0.1181020258208637015).epsilon(1e-12));
    CHECK(hurwitz_zeta(-0.25, 0.7) == Approx(-0.081201869998409883924).epsilon(1e-11));
    CHECK(hurwitz_zeta(2.0, 1.0) == Approx(kPi * kPi / 6.0).epsilon(1e-14));
}

TEST_CASE("a_series closed forms") {
    CHECK(std::abs(a_series(1.0, 0.0) + kPi * kPi / 6.0) <= 1e-8);
    CHECK(std::abs(a_series(1.0, 0.5) - kPi * kPi / 12.0) <= 1e-8);
    CHECK(std::abs(a_series(2.0, 0.25) + kPi * kPi * kPi / 32.0) <= 1e-8);
    // frozen sums for fractional a
    CHECK(a_series(0.25, 0.3) == Approx(0.80425477558036760455).epsilon(1e-10));
    CHECK(a_series(0.5, 0.1) == Approx(0.28557124971980438389).epsilon(1e-10));
    CHECK(a_series(1.0 / 3.0, 0.77) == Approx(-0.67056734086728467576).epsilon(1e-10));
    CHECK(a_series(1.5, 0.4) == Approx(0.20054087394969875481).epsilon(1e-10));
}

TEST_CASE("a_series properties") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int i = 0; i < 40; ++i) {
        double a = 0.6 + 2.0 * U(rng), x = U(rng);
        // closed form against direct truncation, within the integral tail bound K^-a / a
        const std::size_t K0 = 200000;
        CHECK(std::abs(a_series_closed(a, x) - a_series_partial(a, x, K0)) <= std::pow(double(K0), -a) / a + 1e-10);
        // truncation stability at the derived K
        const double tol = 1e-3;
        std::size_t K = std::size_t(a_series_terms(a, tol));
        CHECK(std::abs(a_series_partial(a, x, K) - a_series_partial(a, x, 4 * K)) <= tol);
        CHECK(std::abs(a_series(a, x) - a_series(a, x + 1.0)) <= 1e-10);
        SeriesParams sp{a, 1.3, 1.0, +1};
        CHECK(std::abs(series_value(sp, x)) <= sp.prefactor() * hurwitz_zeta(1.0 + a, 1.0) * (1.0 + 1e-12));
    }
    CHECK_THROWS_AS(a_series(0.0, 0.1), DomainError);
    CHECK_THROWS_AS(a_series(-1.0, 0.1), DomainError);
}

TEST_CASE("main term of gen_ellipse(4)") {
    Body2D e = Body2D::gen_ellipse(4.0);
    MainTerm mt = MainTerm::from_body(e);
    REQUIRE(mt.pairs().size() == 1);
    CHECK(mt.growth_exponent() == Approx(0.75));
    CHECK_FALSE(mt.depends_on_z1());
    const auto& fp = mt.pairs()[0];
    CHECK(fp.sp.prefactor() == Approx(2.0 * std::pow(2.0, 1.25) * std::tgamma(1.25) / std::pow(2.0 * kPi, 1.25)));
    for (double R : {10.0, 37.0}) {
        for (double z2 : {0.1, 0.55}) {
            Vec2 z{0.3, z2};
            // integer R: the shifts R m0.P and R m0.Q are integers and drop out
            double direct = std::pow(R, 0.75) * (series_value(fp.sp, z2) + series_value(fp.sq, z2));
            CHECK(mt(R, z) == Approx(direct).epsilon(1e-12));
            CHECK(mt(R, {0.9, z2}) == mt(R, z));
            CHECK(mt(R, {z.x + 2.0, z.y - 1.0}) == Approx(mt(R, z)).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(MainTerm::from_body(Body2D::disk()), DomainError);
    CHECK_THROWS_AS(MainTerm::from_body(e.rotated(0.5)), DomainError);
    MainTerm sq = MainTerm::from_body(Body2D::superellipse(4.0));
    CHECK(sq.pairs().size() == 2);
    CHECK(sq.depends_on_z1());
}

TEST_CASE("main term norm against a dense midpoint rule") {
    MainTerm mt = MainTerm::from_body(Body2D::gen_ellipse(4.0));
    const auto& fp = mt.pairs()[0];
    for (double R : {16.0, 16.3}) {
        const int n = 200000;
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            double w = (i + 0.5) / n;
            double v = series_value(fp.sp, w + R) + series_value(fp.sq, w - R);
            s += v * v;
        }
        CHECK(main_term_norm(mt, R, 2.0) == Approx(std::sqrt(s / n)).epsilon(1e-4));
    }
}

TEST_CASE("corollary interference") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    SUBCASE("sum and product forms agree on 1000 draws") {
        double worst = 0.0;
        bool nonzero = false;
        for (int i = 0; i < 1000; ++i) {
            double a = 0.15 + 2.85 * U(rng);
            SeriesParams sp{a, 1.0 + U(rng), 1.0, +1}, sq = sp;
            sq.phase_sign = -1;
            auto f = corollary_interference(sp, sq, -U(rng), U(rng), 1.0 + 300.0 * U(rng), U(rng));
            worst = std::max(worst, std::abs(f.sum_form - f.product_form));
            nonzero = nonzero || std::abs(f.sum_form) > 1e-6;
        }
        CHECK(worst <= 1e-10);
        CHECK(nonzero);
    }
    SUBCASE("even a with integer R m0.(Q - P) cancels") {
        SeriesParams sp{2.0, 1.7, 1.0, +1}, sq = sp;
        sq.phase_sign = -1;
        for (double R : {1.0, 4.0, 13.0}) {
            auto f = corollary_interference(sp, sq, -1.0, 1.0, R, U(rng));
            CHECK(std::abs(f.sum_form) <= 1e-10);
            CHECK(std::abs(f.product_form) <= 1e-10);
        }
    }
    SUBCASE("half-period shift of v negates the product for odd u-patterns") {
        // u = 1/2 and a = 2: only odd k survive in sin(pi(k/2 - 1)), and cos(2 pi k (v + 1/2)) flips for odd k
        SeriesParams sp{2.0, 1.0, 1.0, +1}, sq = sp;
        sq.phase_sign = -1;
        for (double z : {0.1, 0.33}) {
            auto f0 = corollary_interference(sp, sq, -0.25, 0.25, 1.0, z);
            auto f1 = corollary_interference(sp, sq, -0.25, 0.25, 1.0, z + 0.5);
            CHECK(f1.sum_form == Approx(-f0.sum_form).epsilon(1e-10));
        }
    }
    SUBCASE("vector form reduces to projections") {
        SeriesParams sp{0.25, 2.0, std::sqrt(5.0), +1}, sq = sp;
        sq.phase_sign = -1;
        IntVec2 m0{1, 2};
        Vec2 P{-0.2, -0.4}, Q{0.2, 0.4}, z{0.3, 0.8};
        auto v = corollary_interference(sp, sq, P, Q, m0, 7.0, z);
        auto s = corollary_interference(sp, sq, m0.as_vec().dot(P), m0.as_vec().dot(Q), 7.0, m0.as_vec().dot(z));
        CHECK(v.sum_form == Approx(s.sum_form).epsilon(1e-14));
    }
    SUBCASE("mismatched parameters are rejected") {
        SeriesParams sp{0.5, 1.0, 1.0, +1}, sq{0.25, 1.0, 1.0, -1};
        CHECK_THROWS_AS(corollary_interference(sp, sq, -1.0, 1.0, 2.0, 0.1), DomainError);
    }
}

TEST_CASE("t^alpha lemma") {
    auto p0 = lemma_alpha_pair(0.0, 10.0);
    CHECK(std::abs(p0.closed_form) == Approx(0.0159154943).epsilon(1e-8));
    CHECK(std::arg(p0.closed_form) == Approx(-kPi / 2.0));
    auto p1 = lemma_alpha_pair(1.0, 10.0);
    CHECK(p1.closed_form.real() == Approx(-1.0 / (4.0 * kPi * kPi * 100.0)));
    CHECK(std::abs(p1.closed_form.imag()) <= 1e-18);
    for (double a : {0.0, 1.0 / 3.0, 1.5})
        for (double s : {-30.0, 7.0}) {
            double sg = s > 0 ? 1.0 : -1.0;
            double expect = std::remainder(-kPi * (a + 1.0) / 2.0 * sg, 2.0 * kPi);
            CHECK(std::remainder(std::arg(lemma_alpha_pair(a, s).closed_form) - expect, 2.0 * kPi) ==
                  Approx(0.0).epsilon(1e-12));
        }
    // the O(|s|^-N) remainder is negligible once the cutoff transition is resolved
    for (double a : {0.0, 1.0 / 3.0, 1.0, 1.5})
        for (double s : {64.0, 256.0}) CHECK(lemma_alpha_pair(a, s, {1.0}).relative_gap() <= 1e-3);
    CHECK(eta_cutoff(0.2, {}) == 1.0);
    CHECK(eta_cutoff(0.6, {}) == 0.0);
    CHECK(eta_cutoff(0.375, {}) == Approx(0.5));
    CHECK_THROWS_AS(lemma_alpha_pair(-1.0, 3.0), DomainError);
    CHECK_THROWS_AS(lemma_alpha_pair(0.5, 0.0), DomainError);
}

TEST_CASE("mollifier coefficients") {
    CHECK(mollifier_coeffs(0).c == std::vector<double>{1.0});
    auto m1 = mollifier_coeffs(1);
    REQUIRE(m1.c.size() == 2);
    CHECK(std::abs(m1.c[0] + 1.0) <= 1e-12);
    CHECK(std::abs(m1.c[1] - 2.0) <= 1e-12);
    // independent LU solve of sum_k c_k 2^(-k m) = [m == 0]; the system is too ill-conditioned beyond small M
    for (int M : {2, 3, 5}) {
        auto m = mollifier_coeffs(M);
        Eigen::MatrixXd V(M + 1, M + 1);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(M + 1);
        rhs(0) = 1.0;
        for (int r = 0; r <= M; ++r)
            for (int k = 0; k <= M; ++k) V(r, k) = std::pow(2.0, -double(k * r));
        Eigen::VectorXd c = V.fullPivLu().solve(rhs);
        for (int k = 0; k <= M; ++k) CHECK(m.c[std::size_t(k)] == Approx(c(k)).epsilon(1e-8));
    }
    // defining equations re-evaluated in extended precision
    for (int M : {8, 15, 30}) {
        auto m = mollifier_coeffs(M);
        REQUIRE(m.c.size() == std::size_t(M + 1));
        for (int r = 0; r <= M; ++r) {
            long double acc = 0.0L;
            for (int k = 0; k <= M; ++k) acc += (long double)m.c[std::size_t(k)] * std::pow(2.0L, -(long double)(k * r));
            CHECK(std::abs(double(acc) - (r == 0 ? 1.0 : 0.0)) <= 1e-9);
        }
        CHECK(m.residual <= 1e-9);
    }
    CHECK_THROWS_AS(mollifier_coeffs(-1), DomainError);
}

TEST_CASE("g0 from the Hessian") {
    const double a1[1] = {2.0};
    const double a2[4] = {2.0, 0.0, 0.0, 2.0};
    const double a3[4] = {2.0, 0.0, 0.0, 8.0};
    CHECK(std::abs(g0_from_hessian(a1, 2) - 2.0) <= 1e-12);
    CHECK(std::abs(g0_from_hessian(a2, 3) - kPi) <= 1e-12);
    CHECK(std::abs(g0_from_hessian(a3, 3) - kPi / 2.0) <= 1e-12);
    CHECK(unit_ball_volume(3) == Approx(4.0 * kPi / 3.0));
    const double bad[4] = {1.0, 2.0, 0.0, 1.0};
    CHECK_THROWS_AS(g0_from_hessian(bad, 3), DomainError);
    const double neg[1] = {-1.0};
    CHECK_THROWS_AS(g0_from_hessian(neg, 2), DomainError);
}

TEST_CASE("badly approximable check") {
    auto g = badly_approximable_check(golden_conjugate(), 100000, 0.0, 1000);
    CHECK(g.min_value == Approx(1.0 / std::sqrt(5.0)).epsilon(1e-3));
    auto all = badly_approximable_check(golden_conjugate(), 100000, 0.0);
    CHECK(all.min_value == Approx(0.3819660112501051).epsilon(1e-9));
    CHECK(all.argmin_n == 1);
    auto half = badly_approximable_check(ExactRational{1, 2}, 1000, 0.0);
    CHECK(half.min_value == 0.0);
    CHECK(half.argmin_n == 2);
    auto liou = badly_approximable_check(liouville_truncation(3), 10000000, 1.0);
    CHECK(liou.min_value < 1e-3);
    // float fallback agrees with the symbolic path on the golden number
    auto fl = badly_approximable_check((std::sqrt(5.0L) - 1.0L) / 2.0L, 100000, 0.0, 1000);
    CHECK(fl.min_value == Approx(g.min_value).epsilon(1e-6));
}

TEST_CASE("predicted exponents") {
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(predicted_exponent(2, 4.0, 2.0) == Approx(0.75));
    CHECK(predicted_exponent(2, 2.0, 2.0) == Approx(0.5));
    CHECK(predicted_exponent(3, 2.5, 6.0) == Approx(1.3));
    CHECK(predicted_exponent(2, 4.0, inf) == Approx(0.75));
    // continuity at p = 2d/(d+1-gamma) and at gamma = d+1
    for (int d : {2, 3, 4})
        for (double g : {2.3, 2.7}) {
            if (g >= d + 1) continue;
            double pc = 2.0 * d / (d + 1 - g);
            CHECK(predicted_exponent(d, g, pc * (1 - 1e-9)) == Approx(predicted_exponent(d, g, pc * (1 + 1e-9))));
        }
    for (int d : {2, 3}) {
        double g = d + 1.0;
        CHECK(predicted_exponent(d, g * (1 - 1e-12), 50.0) == Approx(predicted_exponent(d, g * (1 + 1e-12), 50.0)));
    }
    CHECK_THROWS_AS(predicted_exponent(1, 2.0, 2.0), DomainError);
    CHECK_THROWS_AS(predicted_exponent(2, 1.0, 2.0), DomainError);
    CHECK_THROWS_AS(predicted_exponent(2, 2.0, 0.5), DomainError);
}

TEST_CASE("counter RNG and threading helpers") {
    CHECK(counter_uniform(1, 2, 3) == counter_uniform(1, 2, 3));
    CHECK(counter_uniform(1, 2, 3) != counter_uniform(1, 2, 4));
    std::vector<double> out(1000);
    parallel_for(out.size(), 4, [&](std::size_t i) { out[i] = counter_uniform(9, 0, i); });
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == counter_uniform(9, 0, i));
    CHECK_THROWS(parallel_for(10, 2, [](std::size_t i) {
        if (i == 7) throw std::runtime_error("boom");
    }));
}
