#include "flatdisc/bodies.hpp"
#include "flatdisc/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace flatdisc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBisectTol = 1e-13;

std::string fmt_num(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

double angle_of(Vec2 v) { return std::atan2(v.y, v.x); }

}  // namespace

std::string to_string(BodyKind k) {
    switch (k) {
        case BodyKind::disk: return "disk";
        case BodyKind::gen_ellipse: return "gen_ellipse";
        case BodyKind::superellipse: return "superellipse";
        case BodyKind::rotated: return "rotated";
        case BodyKind::profile: return "profile";
    }
    return "unknown";
}

namespace detail {

class Shape {
public:
    virtual ~Shape() = default;
    virtual BodyKind kind() const = 0;
    virtual std::string name() const = 0;
    virtual double gamma() const { return 2.0; }
    virtual Interval t_range() const = 0;
    virtual std::optional<Interval> slice(double t) const = 0;
    virtual double residual(Vec2 p) const = 0;
    virtual Vec2 gradient(Vec2 p) const = 0;
    virtual double bounding_radius() const = 0;
    virtual std::pair<double, double> pole_orders() const = 0;
    virtual std::vector<double> slice_breaks() const { return {}; }
    virtual double rotation() const { return 0.0; }

    virtual std::vector<double> boundary_angles() const {
        std::vector<double> a;
        for (const auto& f : flats) a.push_back(angle_of(f.location));
        return a;
    }

    // Safeguarded Newton on r -> F(r e); F is convex along rays and F(0) < 0.
    virtual double radial(double phi) const {
        Vec2 e{std::cos(phi), std::sin(phi)};
        double lo = 0.0, hi = bounding_radius() * 1.001 + 1e-9;
        double r = hi;
        for (int it = 0; it < 200; ++it) {
            double h = residual(e * r);
            if (h == 0.0) return r;
            if (h > 0.0) hi = r; else lo = r;
            double dh = gradient(e * r).dot(e);
            double next = (dh > 0.0) ? r - h / dh : 0.5 * (lo + hi);
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            if (std::abs(next - r) <= 1e-16 * r || hi - lo <= 1e-16 * hi) return next;
            r = next;
        }
        return r;
    }

    double radial_derivative(double phi) const {
        double r = radial(phi);
        Vec2 e{std::cos(phi), std::sin(phi)};
        Vec2 g = gradient(e * r);
        return -r * g.dot(e.perp()) / g.dot(e);
    }

    std::vector<FlatPoint> flats;
};

namespace {

class DiskShape final : public Shape {
public:
    BodyKind kind() const override { return BodyKind::disk; }
    std::string name() const override { return "disk"; }
    Interval t_range() const override { return {-1.0, 1.0}; }
    std::optional<Interval> slice(double t) const override {
        if (!(std::abs(t) <= 1.0)) return std::nullopt;
        double w = std::sqrt((1.0 - t) * (1.0 + t));
        return Interval{-w, w};
    }
    double residual(Vec2 p) const override { return p.x * p.x + p.y * p.y - 1.0; }
    Vec2 gradient(Vec2 p) const override { return {2.0 * p.x, 2.0 * p.y}; }
    double radial(double) const override { return 1.0; }
    double bounding_radius() const override { return 1.0; }
    std::pair<double, double> pole_orders() const override { return {2.0, 2.0}; }
};

class GenEllipseShape final : public Shape {
public:
    explicit GenEllipseShape(double g) : g_(g) {
        double g0 = std::pow(2.0, 1.0 + 1.0 / g);
        flats.push_back({{0.0, -1.0}, {0.0, -1.0}, g, g0, IntVec2{0, -1}});
        flats.push_back({{0.0, 1.0}, {0.0, 1.0}, g, g0, IntVec2{0, 1}});
    }
    BodyKind kind() const override { return BodyKind::gen_ellipse; }
    std::string name() const override { return "gen_ellipse(" + fmt_num(g_) + ")"; }
    double gamma() const override { return g_; }
    Interval t_range() const override { return {-1.0, 1.0}; }
    std::optional<Interval> slice(double t) const override {
        if (!(std::abs(t) <= 1.0)) return std::nullopt;
        double u = (1.0 - t) * (1.0 + t);
        double w = (g_ == 2.0) ? std::sqrt(u) : (g_ == 4.0 ? std::sqrt(std::sqrt(u)) : std::pow(u, 1.0 / g_));
        return Interval{-w, w};
    }
    double residual(Vec2 p) const override { return pow_abs(p.x, g_) + p.y * p.y - 1.0; }
    Vec2 gradient(Vec2 p) const override {
        double gx = (p.x == 0.0) ? 0.0 : g_ * pow_abs(p.x, g_ - 1.0) * (p.x > 0 ? 1.0 : -1.0);
        return {gx, 2.0 * p.y};
    }
    double bounding_radius() const override { return std::sqrt(2.0); }
    std::pair<double, double> pole_orders() const override { return {g_, g_}; }

private:
    double g_;
};

class SuperellipseShape final : public Shape {
public:
    SuperellipseShape(double g, bool flat) : g_(g) {
        if (flat) {
            double g0 = 2.0 * std::pow(g, 1.0 / g);
            const Vec2 dirs[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
            for (Vec2 d : dirs)
                flats.push_back({d, d, g, g0, IntVec2{std::int64_t(d.x), std::int64_t(d.y)}});
        }
    }
    BodyKind kind() const override { return BodyKind::superellipse; }
    std::string name() const override { return "superellipse(" + fmt_num(g_) + ")"; }
    double gamma() const override { return g_; }
    Interval t_range() const override { return {-1.0, 1.0}; }
    std::optional<Interval> slice(double t) const override {
        if (!(std::abs(t) <= 1.0)) return std::nullopt;
        double w = std::pow(std::max(0.0, 1.0 - pow_abs(t, g_)), 1.0 / g_);
        return Interval{-w, w};
    }
    double residual(Vec2 p) const override { return pow_abs(p.x, g_) + pow_abs(p.y, g_) - 1.0; }
    Vec2 gradient(Vec2 p) const override {
        auto d = [&](double v) { return v == 0.0 ? 0.0 : g_ * pow_abs(v, g_ - 1.0) * (v > 0 ? 1.0 : -1.0); };
        return {d(p.x), d(p.y)};
    }
    double radial(double phi) const override {
        return std::pow(pow_abs(std::cos(phi), g_) + pow_abs(std::sin(phi), g_), -1.0 / g_);
    }
    double bounding_radius() const override { return std::sqrt(2.0); }
    std::pair<double, double> pole_orders() const override { return {g_, g_}; }
    std::vector<double> slice_breaks() const override { return {0.0}; }
    std::vector<double> boundary_angles() const override { return {0.0, 0.5 * kPi, kPi, -0.5 * kPi}; }

private:
    double g_;
};

class ProfileShape final : public Shape {
public:
    explicit ProfileShape(ProfileSpec spec) : s_(std::move(spec)) {
        if (!s_.phi || !s_.dphi || !s_.d2phi) throw DomainError("profile: phi, phi' and phi'' are all required");
        if (!(s_.gamma > 1.0)) throw DomainError("profile: gamma must exceed 1");
        if (!(s_.domain > 0.0)) throw DomainError("profile: domain must be positive");
        xr_ = solve_side(+1.0, 1.0);
        xl_ = solve_side(-1.0, 1.0);
        if (s_.leading_coeff) {
            double c = *s_.leading_coeff;
            if (!(c > 0.0)) throw DomainError("profile: leading coefficient must be positive");
            double g0 = 2.0 * std::pow(2.0 / c, 1.0 / s_.gamma);
            flats.push_back({{0.0, -1.0}, {0.0, -1.0}, s_.gamma, g0, IntVec2{0, -1}});
            flats.push_back({{0.0, 1.0}, {0.0, 1.0}, s_.gamma, g0, IntVec2{0, 1}});
        }
    }
    BodyKind kind() const override { return BodyKind::profile; }
    std::string name() const override { return "profile(" + fmt_num(s_.gamma) + ")"; }
    double gamma() const override { return s_.gamma; }
    Interval t_range() const override { return {-1.0, 1.0}; }
    std::optional<Interval> slice(double t) const override {
        if (!(std::abs(t) <= 1.0)) return std::nullopt;
        double level = (1.0 - t) * (1.0 + t);
        return Interval{solve_side(-1.0, level), solve_side(1.0, level)};
    }
    double residual(Vec2 p) const override { return phi(p.x) + p.y * p.y - 1.0; }
    Vec2 gradient(Vec2 p) const override { return {dphi(p.x), 2.0 * p.y}; }
    double bounding_radius() const override { return std::hypot(std::max(xr_, -xl_), 1.0); }
    std::pair<double, double> pole_orders() const override { return {s_.gamma, s_.gamma}; }
    std::vector<double> boundary_angles() const override { return {0.5 * kPi, -0.5 * kPi}; }

private:
    // Linear extension past the trusted domain keeps the residual convex.
    double phi(double x) const {
        if (x == 0.0) return 0.0;
        double d = s_.domain;
        if (x > d) return s_.phi(d) + s_.dphi(d) * (x - d);
        if (x < -d) return s_.phi(-d) + s_.dphi(-d) * (x + d);
        return s_.phi(x);
    }
    double dphi(double x) const {
        if (x == 0.0) return 0.0;
        double d = s_.domain;
        if (x > d) return s_.dphi(d);
        if (x < -d) return s_.dphi(-d);
        return s_.dphi(x);
    }
    // Solves phi(x) = level on one side of 0 by bisection.
    double solve_side(double sign, double level) const {
        if (level <= 0.0) return 0.0;
        double lo = 0.0, hi = 1.0;
        while (phi(sign * hi) < level) {
            hi *= 2.0;
            if (hi > 1e6) throw DomainError("profile: phi never reaches 1");
        }
        while (hi - lo > 1e-15 * std::max(1.0, hi)) {
            double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            if (phi(sign * mid) < level) lo = mid; else hi = mid;
        }
        return sign * 0.5 * (lo + hi);
    }

    ProfileSpec s_;
    double xr_ = 1.0, xl_ = -1.0;
};

// Exact rotation for quarter turns, otherwise cos/sin of the angle.
struct Rotation {
    double c = 1.0, s = 0.0;
    double theta = 0.0;
    int quarter = -1;                      // k in theta = k pi/2 when exact, else -1
    std::optional<RationalAngle> rational; // tan(theta) = q/p
};

class RotatedShape final : public Shape {
public:
    RotatedShape(std::shared_ptr<const Shape> inner, Rotation rot) : in_(std::move(inner)), r_(rot) {
        rho_ = in_->bounding_radius() * 1.001 + 1e-9;
        for (const auto& f : in_->flats) {
            FlatPoint g = f;
            g.location = apply(f.location);
            g.normal = apply(f.normal);
            g.m0 = rotate_m0(f.m0);
            flats.push_back(g);
        }
        tr_.hi = find_extent(+1.0);
        tr_.lo = -find_extent(-1.0);
    }
    BodyKind kind() const override { return BodyKind::rotated; }
    std::string name() const override { return "rotated(" + in_->name() + "," + fmt_num(r_.theta) + ")"; }
    double gamma() const override { return in_->gamma(); }
    Interval t_range() const override { return tr_; }
    double rotation() const override { return r_.theta + in_->rotation(); }

    std::optional<Interval> slice(double t) const override {
        if (!(t >= tr_.lo - 1e-12 && t <= tr_.hi + 1e-12)) return std::nullopt;
        return chord(t);
    }
    double residual(Vec2 p) const override { return in_->residual(unapply(p)); }
    Vec2 gradient(Vec2 p) const override { return apply(in_->gradient(unapply(p))); }
    double radial(double phi) const override { return in_->radial(phi - r_.theta); }
    double bounding_radius() const override { return in_->bounding_radius(); }

    std::pair<double, double> pole_orders() const override {
        double lo = 2.0, hi = 2.0;
        for (const auto& f : flats) {
            if (std::abs(f.normal.y - 1.0) < 1e-12) hi = f.order;
            if (std::abs(f.normal.y + 1.0) < 1e-12) lo = f.order;
        }
        return {lo, hi};
    }
    std::vector<double> slice_breaks() const override {
        std::vector<double> b;
        for (const auto& f : flats)
            if (f.location.y > tr_.lo + 1e-9 && f.location.y < tr_.hi - 1e-9) b.push_back(f.location.y);
        return b;
    }
    std::vector<double> boundary_angles() const override {
        auto a = in_->boundary_angles();
        for (double& v : a) v += r_.theta;
        return a;
    }

private:
    Vec2 apply(Vec2 v) const { return {r_.c * v.x - r_.s * v.y, r_.s * v.x + r_.c * v.y}; }
    Vec2 unapply(Vec2 v) const { return {r_.c * v.x + r_.s * v.y, -r_.s * v.x + r_.c * v.y}; }

    std::optional<IntVec2> rotate_m0(const std::optional<IntVec2>& m) const {
        if (!m) return std::nullopt;
        if (r_.quarter >= 0) {
            IntVec2 v = *m;
            for (int k = 0; k < r_.quarter; ++k) v = IntVec2{-v.y, v.x};
            return v;
        }
        if (r_.rational) {
            std::int64_t p = r_.rational->p, q = r_.rational->q;
            std::int64_t x = m->x * p - m->y * q;
            std::int64_t y = m->x * q + m->y * p;
            std::int64_t g = std::gcd(x < 0 ? -x : x, y < 0 ? -y : y);
            if (g == 0) return std::nullopt;
            return IntVec2{x / g, y / g};
        }
        return std::nullopt;
    }

    // Row y = t in world coordinates; g(X) = F(unapply(X, t)) is convex in X.
    double row_value(double X, double t) const { return in_->residual(unapply({X, t})); }
    double row_slope(double X, double t) const {
        return in_->gradient(unapply({X, t})).dot(Vec2{r_.c, -r_.s});
    }

    // Returns the minimizer of the row function and its value.
    std::pair<double, double> row_min(double t) const {
        double lo = -rho_, hi = rho_;
        while (hi - lo > kBisectTol) {
            double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            if (row_slope(mid, t) > 0.0) hi = mid; else lo = mid;
        }
        double x = 0.5 * (lo + hi);
        return {x, row_value(x, t)};
    }

    std::optional<Interval> chord(double t) const {
        auto [xm, vm] = row_min(t);
        if (vm > 0.0) return std::nullopt;
        // left: g > 0 at -rho, <= 0 at xm
        double lo = -rho_, hi = xm;
        while (hi - lo > kBisectTol) {
            double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            if (row_value(mid, t) > 0.0) lo = mid; else hi = mid;
        }
        double a = 0.5 * (lo + hi);
        lo = xm;
        hi = rho_;
        while (hi - lo > kBisectTol) {
            double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            if (row_value(mid, t) > 0.0) hi = mid; else lo = mid;
        }
        double b = 0.5 * (lo + hi);
        if (a > b) a = b = xm;
        return Interval{a, b};
    }

    // Largest |t| in direction sign with a nonempty row (origin is interior).
    double find_extent(double sign) const {
        double lo = 0.0, hi = rho_;
        while (hi - lo > 1e-15) {
            double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            if (row_min(sign * mid).second <= 0.0) lo = mid; else hi = mid;
        }
        return lo;
    }

    std::shared_ptr<const Shape> in_;
    Rotation r_;
    double rho_;
    Interval tr_;
};

}  // namespace
}  // namespace detail

Body2D::Body2D(std::shared_ptr<const detail::Shape> s) : shape_(std::move(s)) {
    area_ = 0.0;
    double prev = slice_transform(*this, 0.0, 0).real();
    for (int level = 1; level <= 8; ++level) {
        double cur = slice_transform(*this, 0.0, level).real();
        bool done = std::abs(cur - prev) <= 1e-13 * std::abs(cur);
        prev = cur;
        if (done) break;
    }
    area_ = prev;
}

Body2D Body2D::disk() { return Body2D(std::make_shared<detail::DiskShape>()); }

Body2D Body2D::gen_ellipse(double gamma) {
    if (!(gamma > 1.0)) throw DomainError("gen_ellipse: gamma must exceed 1");
    return Body2D(std::make_shared<detail::GenEllipseShape>(gamma));
}

Body2D Body2D::superellipse(double gamma, bool flat) {
    if (!(gamma > 1.0)) throw DomainError("superellipse: gamma must exceed 1");
    if (flat && !(gamma > 2.0))
        throw DomainError("superellipse: gamma <= 2 has no flat points; pass flat = false");
    return Body2D(std::make_shared<detail::SuperellipseShape>(gamma, flat));
}

Body2D Body2D::profile(ProfileSpec spec) {
    return Body2D(std::make_shared<detail::ProfileShape>(std::move(spec)));
}

Body2D Body2D::rotated(double theta) const {
    detail::Rotation r;
    r.theta = theta;
    const double half_pi = kPi / 2.0;
    double k = std::round(theta / half_pi);
    if (k * half_pi == theta) {
        int q = int(((long long)k % 4 + 4) % 4);
        static const double cs[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        r.c = cs[q][0];
        r.s = cs[q][1];
        r.quarter = q;
    } else {
        r.c = std::cos(theta);
        r.s = std::sin(theta);
    }
    return Body2D(std::make_shared<detail::RotatedShape>(shape_, r));
}

Body2D Body2D::rotated(RationalAngle a) const {
    if (a.p == 0 && a.q == 0) throw DomainError("rotated: angle (0, 0) is undefined");
    detail::Rotation r;
    double h = std::hypot(double(a.p), double(a.q));
    r.c = double(a.p) / h;
    r.s = double(a.q) / h;
    r.theta = std::atan2(double(a.q), double(a.p));
    r.rational = a;
    return Body2D(std::make_shared<detail::RotatedShape>(shape_, r));
}

BodyKind Body2D::kind() const { return shape_->kind(); }
std::string Body2D::name() const { return shape_->name(); }
double Body2D::gamma() const { return shape_->gamma(); }
Interval Body2D::t_range() const { return shape_->t_range(); }
std::optional<Interval> Body2D::slice_extents(double t) const { return shape_->slice(t); }
double Body2D::slice_width(double t) const {
    auto s = shape_->slice(t);
    return s ? s->width() : 0.0;
}
const std::vector<FlatPoint>& Body2D::flat_points() const { return shape_->flats; }
double Body2D::residual(Vec2 p) const { return shape_->residual(p); }
Vec2 Body2D::gradient(Vec2 p) const { return shape_->gradient(p); }
double Body2D::radial(double phi) const { return shape_->radial(phi); }
double Body2D::radial_derivative(double phi) const { return shape_->radial_derivative(phi); }
double Body2D::bounding_radius() const { return shape_->bounding_radius(); }
std::pair<double, double> Body2D::pole_orders() const { return shape_->pole_orders(); }
std::vector<double> Body2D::slice_breaks() const { return shape_->slice_breaks(); }
std::vector<double> Body2D::boundary_angles() const { return shape_->boundary_angles(); }
double Body2D::rotation() const { return shape_->rotation(); }

Body2D make_body(BodyKind kind, double gamma) {
    switch (kind) {
        case BodyKind::disk: return Body2D::disk();
        case BodyKind::gen_ellipse: return Body2D::gen_ellipse(gamma);
        case BodyKind::superellipse: return Body2D::superellipse(gamma, gamma > 2.0);
        default: throw DomainError("make_body: " + to_string(kind) + " needs its own constructor");
    }
}

Body2D make_body(const std::string& kind, double gamma) {
    if (kind == "disk") return Body2D::disk();
    if (kind == "gen_ellipse") return Body2D::gen_ellipse(gamma);
    if (kind == "superellipse") return Body2D::superellipse(gamma, gamma > 2.0);
    throw DomainError("make_body: unknown body kind '" + kind + "'");
}

Body2D rotate_body(const Body2D& body, double theta) { return body.rotated(theta); }
Body2D rotate_body(const Body2D& body, RationalAngle angle) { return body.rotated(angle); }

std::complex<double> slice_transform(const Body2D& body, double s, int level) {
    const Interval tr = body.t_range();
    const double len = tr.hi - tr.lo;
    if (!(len > 0.0)) return {0.0, 0.0};
    const double h = len / 8.0;
    const auto [q_lo, q_hi] = body.pole_orders();
    const double scale = std::ldexp(1.0, level);
    const double dens = std::max(8.0 * std::abs(s), 4.0) * scale;  // panels per unit t
    const GaussRule& g = gauss_rule(16);

    std::vector<double> cuts{tr.lo + h};
    for (double b : body.slice_breaks())
        if (b > tr.lo + h && b < tr.hi - h) cuts.push_back(b);
    cuts.push_back(tr.hi - h);
    std::sort(cuts.begin(), cuts.end());

    auto panels = [](double x) { return std::max<double>(2.0, std::ceil(x)); };
    double total = panels(dens * q_lo * h) + panels(dens * q_hi * h);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total += panels((cuts[i + 1] - cuts[i]) * dens);
    if (total * double(g.nodes.size()) > 1e8)
        throw ResolutionError("slice_transform: more than 1e8 nodes needed at s = " + fmt_num(s));

    CompensatedSum re, im;
    const double w2 = -2.0 * kPi * s;
    auto add = [&](double t, double w) {
        double S = body.slice_width(t);
        if (S == 0.0) return;
        double ph = w2 * t;
        re.add(w * S * std::cos(ph));
        im.add(w * S * std::sin(ph));
    };
    // pole zones: t = pole -+ h v^q, v in [0, 1]
    auto pole_zone = [&](double pole, double dir, double q) {
        std::size_t n = std::size_t(panels(dens * q * h));
        for (std::size_t k = 0; k < n; ++k) {
            double v0 = double(k) / double(n), dv = 1.0 / double(n);
            for (std::size_t j = 0; j < g.nodes.size(); ++j) {
                double v = v0 + dv * g.nodes[j];
                double t = pole + dir * h * std::pow(v, q);
                add(t, g.weights[j] * dv * q * h * std::pow(v, q - 1.0));
            }
        }
    };
    pole_zone(tr.lo, +1.0, q_lo);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double a = cuts[i], b = cuts[i + 1];
        std::size_t n = std::size_t(panels((b - a) * dens));
        double dt = (b - a) / double(n);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < g.nodes.size(); ++j)
                add(a + dt * (double(k) + g.nodes[j]), g.weights[j] * dt);
    }
    pole_zone(tr.hi, -1.0, q_hi);
    return {re.value(), im.value()};
}

ProfileSpec power_profile(double c, double e) {
    if (!(c > 0.0) || !(e > 1.0)) throw DomainError("power_profile: need c > 0 and e > 1");
    ProfileSpec p;
    p.phi = [=](double x) { return c * std::pow(std::abs(x), e); };
    p.dphi = [=](double x) {
        if (x == 0.0) return 0.0;
        return c * e * std::pow(std::abs(x), e - 1.0) * (x > 0 ? 1.0 : -1.0);
    };
    p.d2phi = [=](double x) { return c * e * (e - 1.0) * std::pow(std::abs(x), e - 2.0); };
    p.gamma = e;
    p.leading_coeff = c;
    return p;
}

ProfileSpec log_oscillation_profile() {
    ProfileSpec p;
    p.phi = [](double x) {
        if (x == 0.0) return 0.0;
        double L = std::log(std::abs(x));
        return x * x * (1.0 + (std::sin(L) - 3.0 * std::cos(L)) / 10.0);
    };
    // phi' = x (2 g + g'), g = 1 + (sin L - 3 cos L)/10
    p.dphi = [](double x) {
        if (x == 0.0) return 0.0;
        double L = std::log(std::abs(x));
        double g = 1.0 + (std::sin(L) - 3.0 * std::cos(L)) / 10.0;
        double g1 = (std::cos(L) + 3.0 * std::sin(L)) / 10.0;
        return x * (2.0 * g + g1);
    };
    p.d2phi = [](double x) { return x == 0.0 ? 2.0 : 2.0 + std::sin(std::log(std::abs(x))); };
    p.gamma = 2.0;
    return p;
}

std::vector<double> class_grid(double b, std::size_t n, double lo) {
    return log_grid(lo, b, n);
}

ClassReport verify_flat_class(const ProfileSpec& p, double gamma, const std::vector<double>& grid) {
    if (grid.size() < 100) throw DomainError("verify_flat_class: grid needs at least 100 points");
    if (!(gamma > 1.0)) throw DomainError("verify_flat_class: gamma must exceed 1");
    if (!p.phi || !p.dphi || !p.d2phi) throw DomainError("verify_flat_class: phi, phi', phi'' required");
    ClassReport r;
    r.min_hessian_ratio = std::numeric_limits<double>::infinity();
    for (double ax : grid) {
        if (!(ax > 0.0)) throw DomainError("verify_flat_class: grid values must be positive");
        for (double x : {ax, -ax}) {
            double f = p.phi(x), f1 = p.dphi(x), f2 = p.d2phi(x);
            if (!std::isfinite(f) || !std::isfinite(f1) || !std::isfinite(f2)) {
                r.pass = false;
                r.diagnostic = "evaluator failure at x = " + fmt_num(x);
                return r;
            }
            double h = std::pow(ax, 2.0 - gamma) * f2;
            r.min_hessian_ratio = std::min(r.min_hessian_ratio, h);
            r.max_phi_ratio = std::max(r.max_phi_ratio, std::pow(ax, -gamma) * std::abs(f));
            r.max_dphi_ratio = std::max(r.max_dphi_ratio, std::pow(ax, 1.0 - gamma) * std::abs(f1));
            r.max_d2phi_ratio = std::max(r.max_d2phi_ratio, std::abs(h));
            ++r.points;
        }
    }
    bool lower = r.min_hessian_ratio > kClassMinThreshold;
    bool upper = r.max_phi_ratio < kClassMaxThreshold && r.max_dphi_ratio < kClassMaxThreshold &&
                 r.max_d2phi_ratio < kClassMaxThreshold;
    r.pass = lower && upper;
    if (!lower) r.diagnostic = "hessian ratio degenerates: min " + fmt_num(r.min_hessian_ratio);
    else if (!upper) r.diagnostic = "derivative ratios unbounded";
    return r;
}

}  // namespace flatdisc
