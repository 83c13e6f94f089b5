#include "flatdisc/asymptotics.hpp"
#include "flatdisc/numeric.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <boost/math/special_functions/bernoulli.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

namespace flatdisc {

namespace {

constexpr double kPi = std::numbers::pi;
// Direct truncation above this many terms is replaced by the closed form.
constexpr double kDirectLimit = 5e4;

double frac01(double x) { return x - std::floor(x); }

}  // namespace

double SeriesParams::prefactor() const {
    return 2.0 * g0 * std::tgamma(a + 1.0) / std::pow(2.0 * kPi * m0_norm, a + 1.0);
}

double hurwitz_zeta(double s, double q) {
    if (s == 1.0) throw DomainError("hurwitz_zeta: pole at s = 1");
    if (!(q > 0.0)) throw DomainError("hurwitz_zeta: q must be positive");
    constexpr int N = 10;
    constexpr int J = 15;
    CompensatedSum sum;
    for (int n = 0; n < N; ++n) sum.add(std::pow(n + q, -s));
    const double x = N + q;
    sum.add(std::pow(x, 1.0 - s) / (s - 1.0));
    sum.add(0.5 * std::pow(x, -s));
    // B_2j / (2j)! * s(s+1)...(s+2j-2) * x^(-s-2j+1)
    double rising = s;             // (s)_1
    double xp = std::pow(x, -s - 1.0);
    double fact = 2.0;             // (2j)!
    for (int j = 1; j <= J; ++j) {
        double term = boost::math::bernoulli_b2n<double>(j) / fact * rising * xp;
        sum.add(term);
        rising *= (s + 2 * j - 1) * (s + 2 * j);
        xp /= x * x;
        fact *= double(2 * j + 1) * double(2 * j + 2);
    }
    return sum.value();
}

double a_series_terms(double a, double tol) {
    if (!(a > 0.0)) throw DomainError("a_series: a must be positive");
    if (!(tol > 0.0)) throw DomainError("a_series: tol must be positive");
    return std::ceil(std::pow(a * tol, -1.0 / a));
}

double a_series_partial(double a, double x, std::size_t K) {
    CompensatedSum sum;
    const double shift = 0.5 * kPi * a;
    for (std::size_t k = 1; k <= K; ++k) {
        double kd = double(k);
        double r = frac01(kd * x);
        sum.add(std::pow(kd, -1.0 - a) * std::sin(2.0 * kPi * r - shift));
    }
    return sum.value();
}

// sum_k k^(-1-a) sin(2 pi k x - pi a/2) = (2 pi)^a pi / Gamma(1+a) * zeta(-a, {x}), {x} in (0, 1].
double a_series_closed(double a, double x) {
    if (!(a > 0.0)) throw DomainError("a_series: a must be positive");
    double y = frac01(x);
    if (y <= 0.0) y = 1.0;
    return std::pow(2.0 * kPi, a) * kPi / std::tgamma(1.0 + a) * hurwitz_zeta(-a, y);
}

double a_series(double a, double x, double tol) {
    double K = a_series_terms(a, tol);
    if (K <= kDirectLimit) return a_series_partial(a, x, std::size_t(K));
    return a_series_closed(a, x);
}

double series_value(const SeriesParams& sp, double m0_dot_w, double tol) {
    double x = sp.phase_sign >= 0 ? m0_dot_w : -m0_dot_w;
    return sp.prefactor() * a_series(sp.a, x, tol);
}

// ---- main term ------------------------------------------------------------

MainTerm MainTerm::from_body(const Body2D& body) {
    MainTerm mt;
    const auto& fl = body.flat_points();
    for (const auto& q : fl) {
        if (!q.m0) continue;
        const IntVec2 m = *q.m0;
        bool canonical = m.y > 0 || (m.y == 0 && m.x > 0);
        if (!canonical) continue;
        const FlatPoint* partner = nullptr;
        for (const auto& p : fl)
            if (p.m0 && p.m0->x == -m.x && p.m0->y == -m.y) partner = &p;
        if (!partner)
            throw DomainError("main term: flat point without an opposite rational partner on " + body.name());
        FlatPair fp;
        fp.p = *partner;
        fp.q = q;
        fp.m0 = m;
        fp.sp = {1.0 / fp.p.order, fp.p.g0, m.norm(), +1};
        fp.sq = {1.0 / fp.q.order, fp.q.g0, m.norm(), -1};
        mt.pairs_.push_back(fp);
    }
    if (mt.pairs_.empty()) throw DomainError("main term: " + body.name() + " has no rational flat normal");
    return mt;
}

double MainTerm::pair_value(std::size_t i, double R, Vec2 z) const {
    const FlatPair& f = pairs_.at(i);
    const Vec2 m = f.m0.as_vec();
    const double mz = m.dot(z);
    const double xp = mz - R * m.dot(f.p.location);
    const double xq = mz - R * m.dot(f.q.location);
    const double ep = 1.0 - f.sp.a, eq = 1.0 - f.sq.a;  // d = 2
    return std::pow(R, ep) * series_value(f.sp, xp) + std::pow(R, eq) * series_value(f.sq, xq);
}

double MainTerm::operator()(double R, Vec2 z) const {
    double y = 0.0;
    for (std::size_t i = 0; i < pairs_.size(); ++i) y += pair_value(i, R, z);
    return y;
}

double MainTerm::growth_exponent() const {
    double e = 0.0;
    for (const auto& f : pairs_) e = std::max({e, 1.0 - f.sp.a, 1.0 - f.sq.a});
    return e;
}

bool MainTerm::depends_on_z1() const {
    for (const auto& f : pairs_)
        if (f.m0.x != 0) return true;
    return false;
}

double main_term_Y(const Body2D& body, double R, Vec2 z) {
    return MainTerm::from_body(body)(R, z);
}

namespace {

// Gauss nodes on [0, 1] graded toward every cut point (both sides).
void graded_rule(std::vector<double> cuts, std::vector<double>& x, std::vector<double>& w) {
    for (double& c : cuts) c = frac01(c);
    cuts.push_back(0.0);
    cuts.push_back(1.0);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(), [](double a, double b) { return b - a < 1e-14; }),
               cuts.end());
    if (cuts.back() < 1.0) cuts.push_back(1.0);
    const GaussRule& g = gauss_rule(16);
    auto panel = [&](double a, double b) {
        for (std::size_t j = 0; j < g.nodes.size(); ++j) {
            x.push_back(a + (b - a) * g.nodes[j]);
            w.push_back((b - a) * g.weights[j]);
        }
    };
    constexpr int levels = 40;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double a = cuts[i], b = cuts[i + 1];
        double half = 0.5 * (b - a);
        if (!(half > 0.0)) continue;
        for (int side = 0; side < 2; ++side) {
            double e = side == 0 ? a : b;
            double dir = side == 0 ? 1.0 : -1.0;
            double h = half;
            for (int j = 0; j < levels; ++j) {
                double lo = h * 0.5, hi = h;
                double p0 = e + dir * lo, p1 = e + dir * hi;
                panel(std::min(p0, p1), std::max(p0, p1));
                h = lo;
            }
            double p1 = e + dir * h;
            panel(std::min(e, p1), std::max(e, p1));
        }
    }
}

}  // namespace

double main_term_norm(const MainTerm& mt, double R, double p) {
    if (!(p >= 1.0)) throw DomainError("main_term_norm: p must be >= 1");
    const double scale = std::pow(R, -mt.growth_exponent());
    const bool inf = std::isinf(p);
    if (mt.pairs().size() == 1) {
        const FlatPair& f = mt.pairs()[0];
        const Vec2 m = f.m0.as_vec();
        // Y depends on w = m0.z only; w mod 1 is uniform on T^2 for primitive m0.
        const double xp0 = R * m.dot(f.p.location), xq0 = R * m.dot(f.q.location);
        std::vector<double> x, w;
        graded_rule({xp0, xq0}, x, w);
        const double ep = 1.0 - f.sp.a, eq = 1.0 - f.sq.a;
        CompensatedSum acc;
        double mx = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            double y = std::pow(R, ep) * series_value(f.sp, x[i] - xp0) +
                       std::pow(R, eq) * series_value(f.sq, x[i] - xq0);
            double v = std::abs(y) * scale;
            if (inf) mx = std::max(mx, v);
            else acc.add(w[i] * std::pow(v, p));
        }
        return inf ? mx : std::pow(acc.value(), 1.0 / p);
    }
    // Several directions: tensor Gauss on the torus.
    const GaussRule& g = gauss_rule(8);
    constexpr int panels = 128;
    std::vector<double> x;
    std::vector<double> w;
    for (int k = 0; k < panels; ++k)
        for (std::size_t j = 0; j < g.nodes.size(); ++j) {
            x.push_back((k + g.nodes[j]) / panels);
            w.push_back(g.weights[j] / panels);
        }
    CompensatedSum acc;
    double mx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) {
            double v = std::abs(mt(R, {x[i], x[j]})) * scale;
            if (inf) mx = std::max(mx, v);
            else acc.add(w[i] * w[j] * std::pow(v, p));
        }
    return inf ? mx : std::pow(acc.value(), 1.0 / p);
}

// ---- corollary ------------------------------------------------------------

InterferenceForms corollary_interference(const SeriesParams& sp, const SeriesParams& sq, double m0p,
                                         double m0q, double R, double m0z, double tol) {
    if (std::abs(sp.a - sq.a) > 1e-12 || std::abs(sp.g0 - sq.g0) > 1e-12 * std::abs(sp.g0) ||
        std::abs(sp.m0_norm - sq.m0_norm) > 1e-12 * sp.m0_norm)
        throw DomainError("corollary_interference: P and Q parameters must match");
    const double a = sp.a;
    const double C = sp.prefactor();
    InterferenceForms out;
    out.sum_form = C * a_series(a, m0z - R * m0p, tol) + C * a_series(a, -(m0z - R * m0q), tol);

    const double u = R * (m0q - m0p);
    const double v = m0z - 0.5 * R * (m0p + m0q);
    const double K = a_series_terms(a, tol);
    if (K <= kDirectLimit) {
        CompensatedSum sum;
        const std::size_t n = std::size_t(K);
        for (std::size_t k = 1; k <= n; ++k) {
            double kd = double(k);
            double r1 = std::fmod(kd * u, 2.0);
            double r2 = frac01(kd * v);
            sum.add(std::pow(kd, -1.0 - a) * std::sin(kPi * r1 - 0.5 * kPi * a) * std::cos(2.0 * kPi * r2));
        }
        out.product_form = 2.0 * C * sum.value();
    } else {
        // sin(pi(ku - a/2)) cos(2 pi k v) splits into the two half-angle series
        out.product_form = C * (a_series_closed(a, v + 0.5 * u) + a_series_closed(a, 0.5 * u - v));
    }
    return out;
}

InterferenceForms corollary_interference(const SeriesParams& sp, const SeriesParams& sq, Vec2 P, Vec2 Q,
                                         IntVec2 m0, double R, Vec2 z, double tol) {
    Vec2 m = m0.as_vec();
    return corollary_interference(sp, sq, m.dot(P), m.dot(Q), R, m.dot(z), tol);
}

// ---- t^alpha lemma --------------------------------------------------------

double eta_cutoff(double t, const EtaSpec& eta) {
    const double e = eta.eps;
    if (t <= e) return 1.0;
    if (t >= 2.0 * e) return 0.0;
    double x = (t - e) / e;
    double f0 = std::exp(-1.0 / x), f1 = std::exp(-1.0 / (1.0 - x));
    return f1 / (f0 + f1);
}

double LemmaPair::relative_gap() const { return std::abs(quadrature - closed_form) / std::abs(closed_form); }

LemmaPair lemma_alpha_pair(double alpha, double s, const EtaSpec& eta) {
    if (!(alpha > -1.0)) throw DomainError("lemma_alpha_pair: alpha must exceed -1");
    if (s == 0.0) throw DomainError("lemma_alpha_pair: s must be nonzero");
    if (!(eta.eps > 0.0)) throw DomainError("lemma_alpha_pair: eps must be positive");
    const double as = std::abs(s), sg = s > 0 ? 1.0 : -1.0;
    LemmaPair out;
    out.closed_form = std::tgamma(alpha + 1.0) * std::pow(2.0 * kPi * as, -alpha - 1.0) *
                      std::polar(1.0, -0.5 * kPi * (alpha + 1.0) * sg);

    const GaussRule& g = gauss_rule(16);
    CompensatedSum re, im;
    auto panel = [&](double a, double b) {
        for (std::size_t j = 0; j < g.nodes.size(); ++j) {
            double t = a + (b - a) * g.nodes[j];
            double f = (b - a) * g.weights[j] * std::pow(t, alpha) * eta_cutoff(t, eta);
            double ph = -2.0 * kPi * s * t;
            re.add(f * std::cos(ph));
            im.add(f * std::sin(ph));
        }
    };
    const double e = eta.eps;
    const double width = 1.0 / (8.0 * as);
    const double w0 = std::min(e, width);
    // graded toward the algebraic endpoint
    double h = w0;
    for (int j = 0; j < 60; ++j) {
        panel(0.5 * h, h);
        h *= 0.5;
    }
    panel(0.0, h);
    auto uniform = [&](double a, double b, double maxw) {
        if (!(b > a)) return;
        std::size_t n = std::size_t(std::max(1.0, std::ceil((b - a) / maxw)));
        for (std::size_t k = 0; k < n; ++k)
            panel(a + (b - a) * double(k) / double(n), a + (b - a) * double(k + 1) / double(n));
    };
    uniform(w0, e, width);
    uniform(e, 2.0 * e, std::min(width, e / 32.0));
    out.quadrature = {re.value(), im.value()};
    return out;
}

// ---- mollifier, hessian ---------------------------------------------------

MollifierCoeffs mollifier_coeffs(int M) {
    if (M < 0 || M > 30) throw DomainError("mollifier_coeffs: M must lie in [0, 30]");
    // c_k are the coefficients of prod_{m=1..M} (x - 2^-m) / (1 - 2^-m)
    std::vector<double> c{1.0};
    for (int m = 1; m <= M; ++m) {
        double r = std::ldexp(1.0, -m);
        double inv = 1.0 / (1.0 - r);
        std::vector<double> next(c.size() + 1, 0.0);
        for (std::size_t k = 0; k < c.size(); ++k) {
            next[k + 1] += c[k] * inv;
            next[k] -= c[k] * r * inv;
        }
        c = std::move(next);
    }
    MollifierCoeffs out;
    out.M = M;
    out.c = c;
    for (int m = 0; m <= M; ++m) {
        double x = std::ldexp(1.0, -m);
        double acc = 0.0, xp = 1.0;
        for (double ck : c) {
            acc += ck * xp;
            xp *= x;
        }
        out.residual = std::max(out.residual, std::abs(acc - (m == 0 ? 1.0 : 0.0)));
    }
    return out;
}

double unit_ball_volume(int n) {
    if (n < 0) throw DomainError("unit_ball_volume: negative dimension");
    return std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double g0_from_hessian(std::span<const double> A, int d) {
    if (d < 2) throw DomainError("g0_from_hessian: d must be >= 2");
    const int n = d - 1;
    if (A.size() != std::size_t(n) * std::size_t(n))
        throw DomainError("g0_from_hessian: matrix must be (d-1)x(d-1)");
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = A[std::size_t(i * n + j)];
    double scale = m.cwiseAbs().maxCoeff();
    if (!((m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * std::max(scale, 1.0)))
        throw DomainError("g0_from_hessian: matrix is not symmetric");
    Eigen::LLT<Eigen::MatrixXd> llt(m * 0.5);
    if (llt.info() != Eigen::Success) throw DomainError("g0_from_hessian: matrix is not positive definite");
    double det = 1.0;
    for (int i = 0; i < n; ++i) {
        double l = llt.matrixL()(i, i);
        if (!(l > 0.0)) throw DomainError("g0_from_hessian: matrix is not positive definite");
        det *= l * l;
    }
    return unit_ball_volume(n) / std::sqrt(det);
}

// ---- diophantine ----------------------------------------------------------

long double QuadraticIrrational::value() const {
    return (static_cast<long double>(P) + std::sqrt(static_cast<long double>(D))) / static_cast<long double>(Q);
}

RealNumber golden_conjugate() { return QuadraticIrrational{-1, 5, 2}; }

RealNumber liouville_truncation(int terms) {
    if (terms < 1 || terms > 4) throw DomainError("liouville_truncation: 1..4 terms fit in 128 bits");
    auto fact = [](int k) { int f = 1; for (int i = 2; i <= k; ++i) f *= i; return f; };
    int top = fact(terms);
    __int128 den = 1;
    for (int i = 0; i < top; ++i) den *= 10;
    __int128 num = 0;
    for (int k = 1; k <= terms; ++k) {
        __int128 t = 1;
        for (int i = 0; i < top - fact(k); ++i) t *= 10;
        num += t;
    }
    return ExactRational{num, den};
}

namespace {

std::int64_t isqrt64(std::int64_t D) {
    auto s = std::int64_t(std::sqrt(double(D)));
    while (s * s > D) --s;
    while ((s + 1) * (s + 1) <= D) ++s;
    return s;
}

__int128 floor_div(__int128 a, __int128 b) {
    __int128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

struct Convergent {
    std::uint64_t q;
    long double err;  // |q omega - p| = ||q omega|| for k >= 1
};

// Partial quotients and errors for each variant.
std::vector<Convergent> convergents(const RealNumber& omega, std::uint64_t N) {
    std::vector<Convergent> out;
    if (const auto* qi = std::get_if<QuadraticIrrational>(&omega)) {
        if (qi->D <= 0 || qi->Q == 0) throw DomainError("quadratic irrational: need D > 0, Q != 0");
        std::int64_t s = isqrt64(qi->D);
        if (s * s == qi->D) throw DomainError("quadratic irrational: D is a perfect square");
        __int128 P = qi->P, Q = qi->Q, D = qi->D;
        if ((D - P * P) % Q != 0) {
            __int128 aq = Q < 0 ? -Q : Q;
            P *= aq;
            D *= aq * aq;
            Q *= aq;
        }
        __int128 sD = isqrt64(std::int64_t(D));
        const long double rD = std::sqrt(static_cast<long double>(D));
        auto complete = [&](__int128 p, __int128 q) {
            return (static_cast<long double>(p) + rD) / static_cast<long double>(q);
        };
        auto partial = [&](__int128 p, __int128 q) {
            return q > 0 ? floor_div(p + sD, q) : floor_div(p + sD + 1, q);
        };
        __int128 a = partial(P, Q);
        __int128 qm1 = 0, q0 = 1;  // q_{-1}, q_0
        for (int k = 0; k < 200; ++k) {
            __int128 Pn = a * Q - P;
            __int128 Qn = (D - Pn * Pn) / Q;
            P = Pn;
            Q = Qn;
            long double alpha = complete(P, Q);  // alpha_{k+1}
            long double err = 1.0L / (static_cast<long double>(q0) * alpha + static_cast<long double>(qm1));
            if (q0 > __int128(N)) break;
            out.push_back({std::uint64_t(q0), std::min(err, 1.0L - err)});
            a = partial(P, Q);
            __int128 qn = a * q0 + qm1;
            qm1 = q0;
            q0 = qn;
        }
        return out;
    }
    if (const auto* r = std::get_if<ExactRational>(&omega)) {
        if (r->den <= 0) throw DomainError("exact rational: denominator must be positive");
        __int128 num = r->num, den = r->den;
        __int128 x = num, y = den;
        __int128 qm1 = 0, q0 = 1;
        __int128 a = floor_div(x, y);
        for (int k = 0; k < 400; ++k) {
            if (q0 > __int128(N)) break;
            __int128 m = (q0 * num) % den;
            if (m < 0) m += den;
            __int128 dist = std::min(m, den - m);
            out.push_back({std::uint64_t(q0), static_cast<long double>(dist) / static_cast<long double>(den)});
            __int128 rem = x - a * y;
            if (rem == 0) break;
            x = y;
            y = rem;
            a = floor_div(x, y);
            __int128 qn = a * q0 + qm1;
            qm1 = q0;
            q0 = qn;
        }
        return out;
    }
    const long double w = std::get<long double>(omega);
    long double x = w;
    std::uint64_t qm1 = 0, q0 = 1;
    long double a = std::floor(x);
    for (int k = 0; k < 80 && q0 <= N; ++k) {
        long double t = static_cast<long double>(q0) * w;
        long double d = std::abs(t - std::round(t));
        out.push_back({q0, d});
        long double f = x - a;
        if (f < 1e-18L) break;
        x = 1.0L / f;
        a = std::floor(x);
        long double qn = a * static_cast<long double>(q0) + static_cast<long double>(qm1);
        if (qn > 1.8e19L) break;
        qm1 = q0;
        q0 = std::uint64_t(qn);
    }
    return out;
}

long double distance_to_int(const RealNumber& omega, std::uint64_t n) {
    if (const auto* r = std::get_if<ExactRational>(&omega)) {
        __int128 m = (__int128(n) * r->num) % r->den;
        if (m < 0) m += r->den;
        return static_cast<long double>(std::min(m, r->den - m)) / static_cast<long double>(r->den);
    }
    long double w = std::holds_alternative<long double>(omega) ? std::get<long double>(omega)
                                                              : std::get<QuadraticIrrational>(omega).value();
    long double t = static_cast<long double>(n) * w;
    return std::abs(t - std::round(t));
}

}  // namespace

ApproxReport badly_approximable_check(const RealNumber& omega, std::uint64_t N, double delta,
                                      std::uint64_t n_min) {
    if (N < 1 || N > 10000000ULL) throw DomainError("badly_approximable_check: N must lie in [1, 1e7]");
    if (!(delta >= 0.0)) throw DomainError("badly_approximable_check: delta must be >= 0");
    if (n_min < 1) n_min = 1;
    ApproxReport rep;
    rep.min_value = std::numeric_limits<double>::infinity();
    auto consider = [&](std::uint64_t n, long double dist) {
        double v = double(std::pow(static_cast<long double>(n), 1.0L + delta) * dist);
        if (v < rep.min_value) {
            rep.min_value = v;
            rep.argmin_n = n;
        }
    };
    auto cs = convergents(omega, N);
    // Between consecutive convergent denominators ||n omega|| >= ||q_k omega||, so the
    // minimum sits on a convergent, except below the first admissible one.
    std::uint64_t first = 0;
    for (const auto& c : cs) {
        rep.denominators.push_back(c.q);
        if (c.q >= n_min) {
            if (first == 0) first = c.q;
            consider(c.q, c.err);
        }
    }
    std::uint64_t scan_end = first == 0 ? N : std::min<std::uint64_t>(first, N);
    for (std::uint64_t n = n_min; n < scan_end; ++n) consider(n, distance_to_int(omega, n));
    return rep;
}

// ---- exponents ------------------------------------------------------------

double predicted_exponent(int d, double gamma, double p) {
    if (d < 2) throw DomainError("predicted_exponent: d must be >= 2");
    if (!(gamma > 1.0)) throw DomainError("predicted_exponent: gamma must exceed 1");
    if (!(p >= 1.0)) throw DomainError("predicted_exponent: p must be >= 1");
    const double dd = d;
    const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
    if (gamma <= 2.0) {
        double pc = 2.0 * dd / (dd - 1.0);
        if (p <= pc) return (dd - 1.0) / 2.0;
        return dd * (dd - 1.0) / (dd + 1.0) * (1.0 - inv_p);
    }
    if (gamma <= dd + 1.0) {
        double flat = (dd - 1.0) * (1.0 - 1.0 / gamma);
        if (gamma == dd + 1.0) return flat;
        double pc = 2.0 * dd / (dd + 1.0 - gamma);
        if (p <= pc) return flat;
        return dd * (dd - 1.0) / (dd + 1.0) * (1.0 - 2.0 * inv_p / gamma);
    }
    return (dd - 1.0) * (1.0 - 1.0 / gamma);
}

}  // namespace flatdisc
