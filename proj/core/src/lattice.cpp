#include "flatdisc/lattice.hpp"
#include "flatdisc/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace flatdisc {

namespace {

constexpr std::uint64_t kStreamZ2 = 0x7a32;        // z2 jitter
constexpr std::uint64_t kStreamAngle = 0x616e67;   // rotation jitter
constexpr std::uint64_t kStreamAngleSeed = 0x726f74;
constexpr double kDedup = 1e-12;

void check_R(double R) {
    if (!(R > 0.0) || !std::isfinite(R)) throw DomainError("R must be positive and finite");
}

struct RowRange {
    double lo, hi;
};

RowRange rows_for(const Body2D& body, double R, double z2) {
    Interval tr = body.t_range();
    RowRange r{std::ceil(R * tr.lo - z2) - 1.0, std::floor(R * tr.hi - z2) + 1.0};
    if (r.hi - r.lo > kMaxRows) throw ResolutionError("row count exceeds 1e9");
    return r;
}

// Integers m with a <= m + r <= b for r in [0, 1).
std::int64_t row_count(double a, double b, double r) {
    double A = std::floor(a), B = std::floor(b);
    double f = b - B, g = a - A;
    auto c = std::int64_t(B - A) + 1 - (r > f ? 1 : 0) - (g > r ? 1 : 0);
    return c;
}

double pow_p(double x, double p) {
    x = std::abs(x);
    if (p == 1.0) return x;
    if (p == 2.0) return x * x;
    if (p == 4.0) { double s = x * x; return s * s; }
    return std::pow(x, p);
}

}  // namespace

std::int64_t count_points(const Body2D& body, double R, Vec2 z) {
    check_R(R);
    RowRange rr = rows_for(body, R, z.y);
    const double r = z.x - std::floor(z.x);
    std::int64_t total = 0;
    for (double n = rr.lo; n <= rr.hi; n += 1.0) {
        auto s = body.slice_extents((n + z.y) / R);
        if (!s) continue;
        total += row_count(R * s->lo, R * s->hi, r);
    }
    return total;
}

double discrepancy(const Body2D& body, double R, Vec2 z) {
    return double(count_points(body, R, z)) - R * R * body.area();
}

double BreakpointProfile::interval_length(std::size_t i) const {
    double end = (i + 1 < bps_.size()) ? bps_[i + 1] : 1.0;
    return end - bps_[i];
}

std::int64_t BreakpointProfile::count_at(double z1) const {
    double r = z1 - std::floor(z1);
    auto f_below = std::lower_bound(upper_.begin(), upper_.end(), r) - upper_.begin();
    auto g_above = lower_.end() - std::upper_bound(lower_.begin(), lower_.end(), r);
    return c0_ - std::int64_t(f_below) - std::int64_t(g_above);
}

BreakpointProfile sweep_profile(const Body2D& body, double R, double z2) {
    check_R(R);
    if (!(z2 >= 0.0 && z2 < 1.0)) throw DomainError("sweep_profile: z2 must lie in [0, 1)");
    BreakpointProfile prof;
    prof.R_ = R;
    prof.z2_ = z2;
    prof.base_ = R * R * body.area();
    RowRange rr = rows_for(body, R, z2);
    CompensatedSum rows_len;
    std::size_t cap = std::size_t(std::max(0.0, rr.hi - rr.lo + 1.0));
    prof.upper_.reserve(cap);
    prof.lower_.reserve(cap);
    for (double n = rr.lo; n <= rr.hi; n += 1.0) {
        auto s = body.slice_extents((n + z2) / R);
        if (!s) continue;
        double a = R * s->lo, b = R * s->hi;
        double A = std::floor(a), B = std::floor(b);
        prof.c0_ += std::int64_t(B - A) + 1;
        prof.upper_.push_back(b - B);
        prof.lower_.push_back(a - A);
        rows_len.add(b - a);
        ++prof.rows_;
    }
    prof.row_sum_ = rows_len.value();
    std::sort(prof.upper_.begin(), prof.upper_.end());
    std::sort(prof.lower_.begin(), prof.lower_.end());

    // Walk the jumps: past frac(b) a row loses a point, past frac(a) it gains one.
    struct Event {
        double x;
        int step;
    };
    std::vector<Event> ev;
    ev.reserve(prof.upper_.size() + prof.lower_.size());
    for (double f : prof.upper_) ev.push_back({f, -1});
    std::int64_t start = prof.c0_;
    for (double g : prof.lower_) {
        if (g > 0.0) {
            ev.push_back({g, +1});
            --start;
        }
    }
    std::sort(ev.begin(), ev.end(), [](const Event& a, const Event& b) { return a.x < b.x; });

    std::int64_t cur = start;
    std::size_t i = 0;
    while (i < ev.size() && ev[i].x <= kDedup) cur += ev[i++].step;
    prof.bps_.push_back(0.0);
    prof.vals_.push_back(cur);
    while (i < ev.size()) {
        double x0 = ev[i].x;
        while (i < ev.size() && ev[i].x - x0 <= kDedup) cur += ev[i++].step;
        if (x0 >= 1.0) break;
        prof.bps_.push_back(x0);
        prof.vals_.push_back(cur);
    }
    return prof;
}

double profile_lp_integral(const BreakpointProfile& prof, double p, double shift) {
    if (!(p >= 1.0)) throw DomainError("profile_lp_integral: p must be >= 1");
    const auto& v = prof.values();
    const double off = prof.base() + shift;
    if (std::isinf(p)) {
        double m = 0.0;
        for (std::int64_t c : v) m = std::max(m, std::abs(double(c) - off));
        return m;
    }
    CompensatedSum acc;
    for (std::size_t i = 0; i < v.size(); ++i) acc.add(prof.interval_length(i) * pow_p(double(v[i]) - off, p));
    return acc.value();
}

double profile_lp_integral(const BreakpointProfile& prof, double p, const std::function<double(double)>& shift) {
    if (!(p >= 1.0)) throw DomainError("profile_lp_integral: p must be >= 1");
    const auto& v = prof.values();
    const auto& b = prof.breakpoints();
    const GaussRule& g = gauss_rule(8);
    const bool inf = std::isinf(p);
    CompensatedSum acc;
    double m = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        double len = prof.interval_length(i);
        double d0 = double(v[i]) - prof.base();
        for (std::size_t j = 0; j < g.nodes.size(); ++j) {
            double z1 = b[i] + len * g.nodes[j];
            double d = d0 - shift(z1);
            if (inf) m = std::max(m, std::abs(d));
            else acc.add(len * g.weights[j] * pow_p(d, p));
        }
    }
    return inf ? m : acc.value();
}

double profile_signed_integral(const BreakpointProfile& prof, double shift) {
    const auto& v = prof.values();
    const double off = prof.base() + shift;
    CompensatedSum acc;
    for (std::size_t i = 0; i < v.size(); ++i) acc.add(prof.interval_length(i) * (double(v[i]) - off));
    return acc.value();
}

std::vector<double> z2_samples(std::size_t M, std::uint64_t seed) {
    std::vector<double> z(M);
    for (std::size_t j = 0; j < M; ++j) {
        double u = counter_uniform(seed, kStreamZ2, j);
        double v = (double(j) + u) / double(M);
        z[j] = v < 1.0 ? v : std::nextafter(1.0, 0.0);
    }
    return z;
}

namespace {

// Mean of per-stratum values and the variance of that mean from adjacent-stratum pairs.
std::pair<double, double> stratified_mean(const std::vector<double>& I) {
    const std::size_t M = I.size();
    CompensatedSum s;
    for (double v : I) s.add(v);
    double mean = s.value() / double(M);
    std::size_t pairs = M / 2;
    CompensatedSum q;
    for (std::size_t k = 0; k < pairs; ++k) {
        double d = I[2 * k] - I[2 * k + 1];
        q.add(d * d);
    }
    double var = pairs > 0 ? q.value() / double(M) / double(M) * double(M) / double(2 * pairs) : 0.0;
    return {mean, var};
}

void check_samples(std::size_t M) {
    if (M < 16) throw DomainError("lp_norm: at least 16 z2 samples are required");
}

}  // namespace

std::vector<LpEstimate> lp_norms(const Body2D& body, double R, const std::vector<double>& ps, const LpOptions& opt) {
    check_R(R);
    check_samples(opt.samples);
    for (double p : ps)
        if (!(p >= 1.0)) throw DomainError("lp_norm: p must be >= 1 (or inf)");
    const std::size_t M = opt.samples;
    const auto z2 = z2_samples(M, opt.seed);
    std::vector<std::vector<double>> I(ps.size(), std::vector<double>(M, 0.0));
    const MainTerm* mt = opt.main_term;
    parallel_for(M, opt.threads, [&](std::size_t j) {
        BreakpointProfile prof = sweep_profile(body, R, z2[j]);
        for (std::size_t k = 0; k < ps.size(); ++k) {
            if (mt && mt->depends_on_z1()) {
                double zz = z2[j];
                I[k][j] = profile_lp_integral(prof, ps[k], [&](double z1) { return (*mt)(R, {z1, zz}); });
            } else {
                double shift = mt ? (*mt)(R, {0.0, z2[j]}) : 0.0;
                I[k][j] = profile_lp_integral(prof, ps[k], shift);
            }
        }
    });
    std::vector<LpEstimate> out;
    for (std::size_t k = 0; k < ps.size(); ++k) {
        LpEstimate e;
        e.p = ps[k];
        e.R = R;
        e.samples = M;
        e.seed = opt.seed;
        if (std::isinf(ps[k])) {
            e.value = *std::max_element(I[k].begin(), I[k].end());
            e.std_error = 0.0;
        } else {
            auto [mean, var] = stratified_mean(I[k]);
            e.value = std::pow(mean, 1.0 / ps[k]);
            e.std_error = mean > 0.0 ? std::pow(mean, 1.0 / ps[k] - 1.0) / ps[k] * std::sqrt(var) : 0.0;
        }
        out.push_back(e);
    }
    return out;
}

LpEstimate lp_norm(const Body2D& body, double R, double p, const LpOptions& opt) {
    return lp_norms(body, R, {p}, opt).front();
}

LpEstimate signed_mean(const Body2D& body, double R, const LpOptions& opt) {
    check_R(R);
    check_samples(opt.samples);
    const std::size_t M = opt.samples;
    const auto z2 = z2_samples(M, opt.seed);
    std::vector<double> I(M);
    parallel_for(M, opt.threads, [&](std::size_t j) { I[j] = profile_signed_integral(sweep_profile(body, R, z2[j])); });
    auto [mean, var] = stratified_mean(I);
    LpEstimate e;
    e.p = 1.0;
    e.R = R;
    e.value = mean;
    e.std_error = std::sqrt(var);
    e.samples = M;
    e.seed = opt.seed;
    return e;
}

std::vector<double> rotation_angles(std::size_t K, std::uint64_t seed) {
    std::vector<double> a(K);
    for (std::size_t k = 0; k < K; ++k)
        a[k] = (double(k) + counter_uniform(seed, kStreamAngle, k)) * (std::numbers::pi / 2.0) / double(K);
    return a;
}

RotationAverage rotation_average_l2(const Body2D& body, double R, std::size_t K, std::uint64_t seed,
                                    std::size_t samples, unsigned threads) {
    if (K < 8) throw DomainError("rotation_average_l2: at least 8 angles are required");
    RotationAverage out;
    out.angles = rotation_angles(K, seed);
    out.l2.resize(K);
    CompensatedSum sq;
    for (std::size_t k = 0; k < K; ++k) {
        Body2D b = body.rotated(out.angles[k]);
        LpOptions o;
        o.samples = samples;
        o.seed = counter_hash(seed, kStreamAngleSeed, k);
        o.threads = threads;
        out.l2[k] = lp_norm(b, R, 2.0, o).value;
        sq.add(out.l2[k] * out.l2[k]);
    }
    out.value = std::sqrt(sq.value() / double(K));
    return out;
}

}  // namespace flatdisc
