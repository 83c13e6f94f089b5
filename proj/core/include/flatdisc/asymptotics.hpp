#pragma once

#include "flatdisc/bodies.hpp"
#include "flatdisc/geometry.hpp"

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace flatdisc {

// ---- series ---------------------------------------------------------------

struct SeriesParams {
    double a = 0.5;        // (d-1)/gamma
    double g0 = 1.0;
    double m0_norm = 1.0;
    int phase_sign = +1;   // +1: P variant, -1: Q variant
    double prefactor() const;  // 2 g0 Gamma(a+1) / (2 pi |m0|)^(a+1)
};

// Hurwitz zeta(s, q) for s != 1, q > 0 (Euler-Maclaurin).
double hurwitz_zeta(double s, double q);

// Number of terms K = ceil((a tol)^(-1/a)) whose tail bound K^-a / a is <= tol.
double a_series_terms(double a, double tol);
// Direct partial sum of sum_{k<=K} k^(-1-a) sin(2 pi k x - pi a / 2).
double a_series_partial(double a, double x, std::size_t K);
// Full series through the Hurwitz closed form.
double a_series_closed(double a, double x);
// Picks direct truncation when K is small, otherwise the closed form. Throws for a <= 0.
double a_series(double a, double x, double tol = 1e-12);

// A_P(w) for phase_sign +1 (argument x = m0 . w) and A_Q(w) for phase_sign -1.
double series_value(const SeriesParams& sp, double m0_dot_w, double tol = 1e-12);

// ---- main term ------------------------------------------------------------

struct FlatPair {
    FlatPoint p;        // outward normal -theta
    FlatPoint q;        // outward normal +theta
    IntVec2 m0;         // along theta
    SeriesParams sp;
    SeriesParams sq;
};

class MainTerm {
public:
    // One pair per rational flat-normal direction; throws DomainError if none.
    static MainTerm from_body(const Body2D& body);

    double operator()(double R, Vec2 z) const;
    // Sum of the pair terms without the R power, for one pair.
    double pair_value(std::size_t i, double R, Vec2 z) const;
    double growth_exponent() const;  // largest (d-1)(1 - 1/gamma) over pairs
    bool depends_on_z1() const;
    const std::vector<FlatPair>& pairs() const { return pairs_; }

private:
    std::vector<FlatPair> pairs_;
};

double main_term_Y(const Body2D& body, double R, Vec2 z);

// || Y(., R) ||_{L^p(T^2)} / R^growth by graded quadrature. p = inf gives the max.
double main_term_norm(const MainTerm& mt, double R, double p);

// ---- corollary ------------------------------------------------------------

struct InterferenceForms {
    double sum_form = 0.0;
    double product_form = 0.0;
};

// Works with the projections m0.P, m0.Q, m0.z so any dimension reduces to scalars.
InterferenceForms corollary_interference(const SeriesParams& params_p, const SeriesParams& params_q,
                                         double m0_dot_p, double m0_dot_q, double R,
                                         double m0_dot_z, double tol = 1e-13);
InterferenceForms corollary_interference(const SeriesParams& params_p, const SeriesParams& params_q,
                                         Vec2 P, Vec2 Q, IntVec2 m0, double R, Vec2 z,
                                         double tol = 1e-13);

// ---- t^alpha lemma --------------------------------------------------------

// eta = 1 on [0, eps], 0 beyond 2 eps, C-infinity step f(x)/(f(x)+f(1-x)), f(x) = exp(-1/x).
struct EtaSpec {
    double eps = 0.25;
};

double eta_cutoff(double t, const EtaSpec& eta);

struct LemmaPair {
    std::complex<double> quadrature;
    std::complex<double> closed_form;
    double relative_gap() const;
};

LemmaPair lemma_alpha_pair(double alpha, double s, const EtaSpec& eta = {});

// ---- mollifier, hessian ---------------------------------------------------

struct MollifierCoeffs {
    int M = 0;
    std::vector<double> c;
    double residual = 0.0;  // max row residual of the Vandermonde system
};

MollifierCoeffs mollifier_coeffs(int M);

// A is (d-1)x(d-1), row-major, symmetric positive definite.
double g0_from_hessian(std::span<const double> A, int d);
double unit_ball_volume(int n);

// ---- diophantine ----------------------------------------------------------

// (P + sqrt(D)) / Q with D > 0 not a perfect square.
struct QuadraticIrrational {
    std::int64_t P = 0;
    std::int64_t D = 5;
    std::int64_t Q = 1;
    long double value() const;
};

struct ExactRational {
    __int128 num = 0;
    __int128 den = 1;
};

using RealNumber = std::variant<QuadraticIrrational, ExactRational, long double>;

RealNumber golden_conjugate();             // (sqrt 5 - 1)/2
RealNumber liouville_truncation(int terms); // sum_{k<=terms} 10^(-k!)

struct ApproxReport {
    double min_value = 0.0;
    std::uint64_t argmin_n = 0;
    std::vector<std::uint64_t> denominators;  // convergent denominators inspected
};

// min over n_min <= n <= N of n^(1+delta) ||n omega|| via convergent denominators.
ApproxReport badly_approximable_check(const RealNumber& omega, std::uint64_t N, double delta,
                                      std::uint64_t n_min = 1);

// ---- exponents ------------------------------------------------------------

double predicted_exponent(int d, double gamma, double p);

}  // namespace flatdisc
