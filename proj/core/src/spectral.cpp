#include "flatdisc/spectral.hpp"
#include "flatdisc/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>

namespace flatdisc {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

ScalingFit decay_fit(const std::vector<FitSample>& samples, Interval window) {
    std::vector<double> lx, ly;
    for (const auto& s : samples) {
        if (s.x < window.lo || s.x > window.hi) continue;
        if (!(s.x > 0.0) || !(s.y > 0.0)) throw DomainError("decay_fit: samples must be positive");
        lx.push_back(std::log(s.x));
        ly.push_back(std::log(s.y));
    }
    if (lx.size() < 8) throw DomainError("decay_fit: fewer than 8 samples in window");
    const double n = double(lx.size());
    CompensatedSum sx, sy;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx.add(lx[i]);
        sy.add(ly[i]);
    }
    const double mx = sx.value() / n, my = sy.value() / n;
    CompensatedSum sxx, sxy, syy;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        double dx = lx[i] - mx, dy = ly[i] - my;
        sxx.add(dx * dx);
        sxy.add(dx * dy);
        syy.add(dy * dy);
    }
    ScalingFit f;
    f.window = window;
    f.count = lx.size();
    if (!(sxx.value() > 0.0)) throw DomainError("decay_fit: x values are all equal");
    f.exponent = sxy.value() / sxx.value();
    f.intercept = my - f.exponent * mx;
    CompensatedSum res;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        double e = ly[i] - (f.intercept + f.exponent * lx[i]);
        res.add(e * e);
    }
    f.r2 = syy.value() > 0.0 ? std::clamp(1.0 - res.value() / syy.value(), 0.0, 1.0) : 1.0;
    return f;
}

ScalingFit decay_fit(const std::vector<FitSample>& samples) {
    Interval w{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& s : samples) {
        w.lo = std::min(w.lo, s.x);
        w.hi = std::max(w.hi, s.x);
    }
    return decay_fit(samples, w);
}

std::complex<double> chi_hat_slice(const Body2D& body, double s) {
    if (!(std::abs(s) <= 1e5)) throw DomainError("chi_hat_slice: |s| must be <= 1e5");
    std::complex<double> prev = slice_transform(body, s, 0);
    for (int level = 1; level <= 4; ++level) {
        std::complex<double> cur = slice_transform(body, s, level);
        bool done = std::abs(cur - prev) <= 1e-8 * std::abs(cur) + 1e-15 * body.area();
        prev = cur;
        if (done) break;
    }
    return prev;
}

BoundaryTransform::BoundaryTransform(const Body2D& body, double max_freq, int level) : max_freq_(max_freq) {
    if (!(max_freq > 0.0)) throw DomainError("BoundaryTransform: max_freq must be positive");
    // speed bound |z'(phi)|
    double speed = 0.0;
    for (int k = 0; k < 512; ++k) {
        double phi = kTwoPi * (k + 0.5) / 512.0;
        speed = std::max(speed, std::hypot(body.radial(phi), body.radial_derivative(phi)));
    }
    speed *= 1.25;
    const double per_rad = std::max(8.0, max_freq * speed) * std::ldexp(1.0, level);

    std::vector<double> cuts{0.0, kTwoPi};
    for (double a : body.boundary_angles()) {
        double w = std::fmod(a, kTwoPi);
        if (w < 0) w += kTwoPi;
        cuts.push_back(w);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(), [](double a, double b) { return b - a < 1e-12; }), cuts.end());
    if (cuts.back() < kTwoPi - 1e-12) cuts.push_back(kTwoPi);
    else cuts.back() = kTwoPi;

    const GaussRule& g = gauss_rule(16);
    if (double(g.nodes.size()) * per_rad * kTwoPi > 1e8) throw ResolutionError("BoundaryTransform: node budget exceeded");
    auto node = [&](double phi, double w) {
        double r = body.radial(phi);
        Vec2 e{std::cos(phi), std::sin(phi)};
        Vec2 g = body.gradient(e * r);
        double rp = -r * g.dot(e.perp()) / g.dot(e);
        Vec2 d = e * rp + e.perp() * r;  // z'(phi)
        x_.push_back(r * e.x);
        y_.push_back(r * e.y);
        nx_.push_back(w * d.y);
        ny_.push_back(-w * d.x);
    };
    auto panel = [&](double a, double b) {
        for (std::size_t j = 0; j < g.nodes.size(); ++j) node(a + (b - a) * g.nodes[j], (b - a) * g.weights[j]);
    };
    constexpr int grade = 8;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double a = cuts[i], b = cuts[i + 1];
        std::size_t n = std::size_t(std::max(2.0, std::ceil((b - a) * per_rad)));
        double h = (b - a) / double(n);
        for (std::size_t k = 0; k < n; ++k) {
            double p0 = a + h * double(k), p1 = a + h * double(k + 1);
            if (k == 0 || k + 1 == n) {
                // geometric grading toward the segment end
                bool left = (k == 0);
                double e = left ? p0 : p1, len = h;
                for (int j = 0; j < grade; ++j) {
                    double lo = 0.5 * len;
                    if (left) panel(e + lo, e + len); else panel(e - len, e - lo);
                    len = lo;
                }
                if (left) panel(e, e + len); else panel(e - len, e);
                if (n == 1) break;
            } else {
                panel(p0, p1);
            }
        }
    }
}

std::complex<double> BoundaryTransform::operator()(Vec2 zeta) const {
    const double z2 = zeta.dot(zeta);
    if (!(z2 > 0.0)) throw DomainError("chi_hat_2d: zeta = 0, use area()");
    if (std::sqrt(z2) > max_freq_ * (1.0 + 1e-9)) throw DomainError("BoundaryTransform: frequency above resolution");
    CompensatedSum re, im;
    for (std::size_t i = 0; i < x_.size(); ++i) {
        double f = zeta.x * nx_[i] + zeta.y * ny_[i];
        double ph = -kTwoPi * (zeta.x * x_[i] + zeta.y * y_[i]);
        re.add(f * std::cos(ph));
        im.add(f * std::sin(ph));
    }
    // -1/(2 pi i |zeta|^2) = i / (2 pi |zeta|^2)
    std::complex<double> sum{re.value(), im.value()};
    return std::complex<double>(0.0, 1.0) * sum / (kTwoPi * z2);
}

std::complex<double> chi_hat_2d(const Body2D& body, Vec2 zeta, int level) {
    double f = zeta.norm();
    if (!(f > 0.0)) throw DomainError("chi_hat_2d: zeta = 0, use area()");
    return BoundaryTransform(body, f, level)(zeta);
}

SezioniTerms sezioni_expansion(const FlatPoint& P, const FlatPoint& Q, double s) {
    if (s == 0.0) throw DomainError("sezioni_expansion: s must be nonzero");
    const Vec2 theta = Q.normal;
    const double sg = s > 0 ? 1.0 : -1.0, as = std::abs(s);
    auto term = [&](const FlatPoint& F, double phase_sign) {
        double a = 1.0 / F.order;
        double mag = F.g0 * std::tgamma(a + 1.0) * std::pow(kTwoPi, -a - 1.0) * std::pow(as, -1.0 - a);
        double ph = -kTwoPi * s * theta.dot(F.location) + phase_sign * 0.5 * kPi * (a + 1.0) * sg;
        return std::polar(mag, ph);
    };
    return {term(P, -1.0), term(Q, +1.0)};
}

double regime_bound(double gamma, const std::string& regime) {
    if (regime == "normal") return gamma > 2.0 ? -1.0 - 1.0 / gamma : -1.5;
    if (regime == "intermediate" || regime == "tangential") return -1.5;
    throw DomainError("regime_bound: unknown regime " + regime);
}

RegimeReport regime_report(const Body2D& body, double gamma, const RegimeOptions& opt_in) {
    RegimeOptions opt = opt_in;
    if (opt.centers.empty()) opt.centers = log_grid(16.0, 1024.0, 16);
    if (opt.per_window < 2) throw DomainError("regime_report: need at least 2 samples per window");
    if (opt.centers.size() < 8) throw DomainError("regime_report: need at least 8 windows");
    Vec2 theta{0.0, 1.0};
    for (const auto& f : body.flat_points())
        if (f.normal.y > 0.0 || (f.normal.y == 0.0 && f.normal.x > 0.0)) {
            theta = f.normal;
            break;
        }
    const Vec2 perp = theta.perp();
    Vec2 mid = theta + perp * opt.intermediate_ratio;
    mid = mid * (1.0 / mid.norm());
    const std::pair<std::string, Vec2> dirs[3] = {{"normal", theta}, {"intermediate", mid}, {"tangential", perp}};

    RegimeReport rep;
    rep.pass = true;
    for (const auto& [name, dir] : dirs) {
        RegimeResult rr;
        rr.regime = name;
        rr.direction = dir;
        rr.bound = regime_bound(gamma, name);
        for (double c : opt.centers) {
            double lo = std::max(c - 0.5 * opt.window_width, 1e-3);
            double hi = c + 0.5 * opt.window_width;
            BoundaryTransform bt(body, hi);
            double best = 0.0;
            for (std::size_t k = 0; k < opt.per_window; ++k) {
                double f = lo + (hi - lo) * double(k) / double(opt.per_window - 1);
                Vec2 z = dir * f;
                auto v = bt(z);
                rr.samples.push_back({z, v});
                best = std::max(best, std::abs(v));
            }
            rr.envelope.push_back({c, best});
        }
        rr.fit = decay_fit(rr.envelope);
        rr.pass = rr.fit.exponent <= rr.bound + opt.slack;
        rep.pass = rep.pass && rr.pass;
        rep.regimes.push_back(std::move(rr));
    }
    return rep;
}

ParsevalResult parseval_l2(const Body2D& body, double R, int K) {
    if (!(R > 0.0)) throw DomainError("parseval_l2: R must be positive");
    if (K < 16) throw DomainError("parseval_l2: K must be >= 16");
    if (K > 512) throw DomainError("parseval_l2: K above the quadrature budget");
    constexpr double f0 = 16.0;
    std::map<int, std::unique_ptr<BoundaryTransform>> cache;
    auto transform_for = [&](double f) -> const BoundaryTransform& {
        int L = std::max(0, int(std::ceil(std::log2(f / f0))));
        auto& slot = cache[L];
        if (!slot) slot = std::make_unique<BoundaryTransform>(body, f0 * std::ldexp(1.0, L));
        return *slot;
    };
    const double R4 = R * R * R * R;
    CompensatedSum sum, shell;
    std::size_t shell_n = 0;
    ParsevalResult out;
    // half plane; chi_hat(-zeta) = conj chi_hat(zeta)
    for (int m2 = 0; m2 <= K; ++m2)
        for (int m1 = -K; m1 <= K; ++m1) {
            if (m2 == 0 && m1 <= 0) continue;
            double n2 = double(m1) * m1 + double(m2) * m2;
            if (n2 > double(K) * K) continue;
            Vec2 z{R * m1, R * m2};
            double v = std::norm(transform_for(R * std::sqrt(n2))(z));
            sum.add(2.0 * R4 * v);
            out.terms += 2;
            double m = std::sqrt(n2);
            if (m > 0.5 * K) {
                shell.add(R4 * v * m * m * m);
                ++shell_n;
            }
        }
    out.value = sum.value();
    // sum_{|m|>K} c |m|^-3 ~ c 2 pi / K
    if (shell_n > 0) out.tail = shell.value() / double(shell_n) * kTwoPi / double(K);
    return out;
}

}  // namespace flatdisc
