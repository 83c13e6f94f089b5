#include "flatdisc/lab.hpp"
#include "flatdisc/asymptotics.hpp"
#include "flatdisc/lattice.hpp"
#include "flatdisc/numeric.hpp"

#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace flatdisc {

using nlohmann::json;

// ---- config ---------------------------------------------------------------

ConfigError::ConfigError(int line, std::string key, const std::string& msg)
    : std::runtime_error("config line " + std::to_string(line) + (key.empty() ? "" : ", key '" + key + "'") +
                         ": " + msg),
      line_(line),
      key_(std::move(key)) {}

namespace {

const std::set<std::string>& experiment_kinds() {
    static const std::set<std::string> k{"exponent_scan",       "mainterm_residual", "fourier_decay",
                                         "rotation_scan",       "diophantine_compare", "identity_suite"};
    return k;
}

std::set<std::string> allowed_keys(const std::string& kind) {
    std::set<std::string> common{"experiment", "body", "gamma", "rotate", "rotate_pq", "out", "threads"};
    std::set<std::string> grid{"R_min", "R_max", "R_count", "R_integer", "M", "seed"};
    auto add = [](std::set<std::string>& s, std::initializer_list<const char*> l) {
        for (auto* k : l) s.insert(k);
    };
    std::set<std::string> keys = common;
    if (kind == "exponent_scan") {
        keys.insert(grid.begin(), grid.end());
        add(keys, {"p", "tolerance", "expected"});
    } else if (kind == "mainterm_residual") {
        keys.insert(grid.begin(), grid.end());
        add(keys, {"ratio_tolerance", "residual_slope_max"});
    } else if (kind == "fourier_decay") {
        add(keys, {"s_min", "s_max", "windows", "per_window", "window_width", "intermediate_ratio", "slack"});
    } else if (kind == "rotation_scan") {
        keys.insert(grid.begin(), grid.end());
        add(keys, {"angles", "slope_max"});
    } else if (kind == "diophantine_compare") {
        keys.insert(grid.begin(), grid.end());
        add(keys, {"slope_max", "min_gap", "min_ratio"});
    } else if (kind == "identity_suite") {
        keys = {"experiment", "out", "tolerance", "seed"};
    }
    return keys;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool parse_number(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

ConfigValue parse_value(const std::string& raw, int line, const std::string& key) {
    ConfigValue v;
    v.line = line;
    if (raw.empty()) throw ConfigError(line, key, "missing value");
    if (raw.front() == '"') {
        if (raw.size() < 2 || raw.back() != '"') throw ConfigError(line, key, "unterminated string");
        v.value = raw.substr(1, raw.size() - 2);
        return v;
    }
    if (raw.front() == '[') {
        if (raw.back() != ']') throw ConfigError(line, key, "unterminated array");
        std::vector<double> arr;
        std::string body = raw.substr(1, raw.size() - 2);
        std::stringstream ss(body);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            double d;
            if (item == "inf") d = std::numeric_limits<double>::infinity();
            else if (!parse_number(item, d)) throw ConfigError(line, key, "array element '" + item + "' is not a number");
            arr.push_back(d);
        }
        v.value = arr;
        return v;
    }
    if (raw == "true" || raw == "false") {
        v.value = (raw == "true");
        return v;
    }
    double d;
    if (raw == "inf") v.value = std::numeric_limits<double>::infinity();
    else if (parse_number(raw, d)) v.value = d;
    else v.value = raw;  // bare word
    return v;
}

const ConfigValue& get(const ExperimentConfig& c, const std::string& key) {
    auto it = c.values.find(key);
    if (it == c.values.end()) throw ConfigError(c.line, key, "required key is missing");
    return it->second;
}

}  // namespace

double ExperimentConfig::number(const std::string& key) const {
    const auto& v = get(*this, key);
    if (auto* d = std::get_if<double>(&v.value)) return *d;
    throw ConfigError(v.line, key, "expected a number");
}

double ExperimentConfig::number(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
}

std::string ExperimentConfig::text(const std::string& key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    const auto& v = get(*this, key);
    if (auto* s = std::get_if<std::string>(&v.value)) return *s;
    throw ConfigError(v.line, key, "expected a string");
}

bool ExperimentConfig::flag(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const auto& v = get(*this, key);
    if (auto* b = std::get_if<bool>(&v.value)) return *b;
    throw ConfigError(v.line, key, "expected true or false");
}

std::vector<double> ExperimentConfig::numbers(const std::string& key, const std::vector<double>& fallback) const {
    if (!has(key)) return fallback;
    const auto& v = get(*this, key);
    if (auto* a = std::get_if<std::vector<double>>(&v.value)) return *a;
    if (auto* d = std::get_if<double>(&v.value)) return {*d};
    throw ConfigError(v.line, key, "expected a number or an array of numbers");
}

std::uint64_t ExperimentConfig::seed() const {
    double s = number("seed");
    if (s < 0 || s != std::floor(s) || s > 9.007199254740992e15)
        throw ConfigError(get(*this, "seed").line, "seed", "seed must be a non-negative integer");
    return std::uint64_t(s);
}

std::vector<ExperimentConfig> parse_config(const std::string& text) {
    std::vector<ExperimentConfig> out;
    std::stringstream ss(text);
    std::string raw;
    int line = 0;
    while (std::getline(ss, raw)) {
        ++line;
        std::string s = trim(strip_comment(raw));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError(line, "", "malformed table header");
            ExperimentConfig c;
            c.name = trim(s.substr(1, s.size() - 2));
            if (c.name.empty()) throw ConfigError(line, "", "empty table name");
            c.experiment = c.name.substr(0, c.name.find('.'));
            c.line = line;
            for (const auto& o : out)
                if (o.name == c.name) throw ConfigError(line, "", "duplicate table [" + c.name + "]");
            out.push_back(std::move(c));
            continue;
        }
        auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError(line, "", "expected 'key = value'");
        std::string key = trim(s.substr(0, eq));
        std::string val = trim(s.substr(eq + 1));
        if (key.empty()) throw ConfigError(line, "", "empty key");
        if (out.empty()) throw ConfigError(line, key, "key outside of any table");
        auto& cur = out.back();
        if (cur.values.count(key)) throw ConfigError(line, key, "duplicate key");
        cur.values[key] = parse_value(val, line, key);
    }
    for (auto& c : out) {
        if (c.has("experiment")) c.experiment = c.text("experiment", c.experiment);
        if (!experiment_kinds().count(c.experiment))
            throw ConfigError(c.line, "experiment", "unknown experiment '" + c.experiment + "'");
        auto keys = allowed_keys(c.experiment);
        for (const auto& [k, v] : c.values)
            if (!keys.count(k)) throw ConfigError(v.line, k, "not a valid key for " + c.experiment);
        if (c.experiment != "fourier_decay" && c.experiment != "identity_suite") {
            (void)c.seed();  // no implicit randomness
            double M = c.number("M", 256);
            if (M < 16 || M != std::floor(M)) throw ConfigError(get(c, "M").line, "M", "M must be an integer >= 16");
            (void)r_grid(c);
        }
        if (c.experiment != "identity_suite") (void)body_spec_from(c);
    }
    return out;
}

std::vector<ExperimentConfig> load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(0, "", "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

double golden_rotation_angle() {
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    // rotated normal (-sin t, cos t) ~ (1, phi)
    return -std::atan2(1.0, phi);
}

BodySpec body_spec_from(const ExperimentConfig& cfg) {
    BodySpec b;
    b.kind = cfg.text("body", "disk");
    if (b.kind != "disk" && b.kind != "gen_ellipse" && b.kind != "superellipse")
        throw ConfigError(cfg.values.count("body") ? cfg.values.at("body").line : cfg.line, "body",
                          "unknown body '" + b.kind + "'");
    b.gamma = cfg.number("gamma", b.kind == "disk" ? 2.0 : 4.0);
    if (b.kind != "disk" && !(b.gamma > 1.0))
        throw ConfigError(get(cfg, "gamma").line, "gamma", "gamma must exceed 1");
    if (cfg.has("rotate")) {
        const auto& v = get(cfg, "rotate");
        if (auto* s = std::get_if<std::string>(&v.value)) {
            if (*s != "golden") throw ConfigError(v.line, "rotate", "expected radians or \"golden\"");
            b.golden = true;
        } else {
            b.rotate = cfg.number("rotate");
        }
    }
    if (cfg.has("rotate_pq")) {
        auto pq = cfg.numbers("rotate_pq", {});
        const auto& v = get(cfg, "rotate_pq");
        if (pq.size() != 2 || pq[0] != std::floor(pq[0]) || pq[1] != std::floor(pq[1]) || (pq[0] == 0 && pq[1] == 0))
            throw ConfigError(v.line, "rotate_pq", "expected [p, q] integers, not both zero");
        b.rotate_pq = RationalAngle{std::int64_t(pq[0]), std::int64_t(pq[1])};
    }
    return b;
}

Body2D build_body(const BodySpec& spec) {
    Body2D b = make_body(spec.kind, spec.gamma);
    if (spec.golden) b = b.rotated(golden_rotation_angle());
    if (spec.rotate) b = b.rotated(*spec.rotate);
    if (spec.rotate_pq) b = b.rotated(*spec.rotate_pq);
    return b;
}

std::string body_label(const BodySpec& spec) {
    std::string s = spec.kind == "disk" ? "disk" : spec.kind + "(" + format_double(spec.gamma) + ")";
    if (spec.golden) s += "@golden";
    if (spec.rotate) s += "@" + format_double(*spec.rotate);
    if (spec.rotate_pq) s += "@" + std::to_string(spec.rotate_pq->p) + ":" + std::to_string(spec.rotate_pq->q);
    return s;
}

std::vector<double> r_grid(const ExperimentConfig& cfg) {
    double lo = cfg.number("R_min", 64), hi = cfg.number("R_max", 4096);
    double n = cfg.number("R_count", 12);
    if (!(lo > 0) || !(hi > lo)) throw ConfigError(cfg.line, "R_min", "need 0 < R_min < R_max");
    if (n < 2 || n != std::floor(n)) throw ConfigError(cfg.line, "R_count", "R_count must be an integer >= 2");
    auto g = log_grid(lo, hi, std::size_t(n));
    if (cfg.flag("R_integer", true)) {
        for (double& r : g) r = std::round(r);
        for (std::size_t i = 1; i < g.size(); ++i)
            if (!(g[i] > g[i - 1])) throw ConfigError(cfg.line, "R_count", "integer R grid has duplicates");
    }
    return g;
}

// ---- experiments ----------------------------------------------------------

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

Check check_le(const std::string& name, double v, double thr) { return {name, v, thr, "<=", 0.0, v <= thr}; }
Check check_ge(const std::string& name, double v, double thr) { return {name, v, thr, ">=", 0.0, v >= thr}; }
Check check_within(const std::string& name, double v, double target, double tol) {
    return {name, v, tol, "within", target, std::abs(v - target) <= tol};
}

std::vector<FitSample> as_samples(const Series& s) {
    std::vector<FitSample> out;
    for (const auto& p : s.points) out.push_back({p.R, p.value});
    return out;
}

unsigned threads_for(const ExperimentConfig& cfg, const RunOptions& opt) {
    if (opt.threads > 0) return opt.threads;
    return unsigned(cfg.number("threads", 0));
}

double flat_order(const Body2D& b) {
    double g = 2.0;
    for (const auto& f : b.flat_points()) g = std::max(g, f.order);
    return g;
}

void run_exponent_scan(const ExperimentConfig& cfg, RunReport& rep, const RunOptions& opt) {
    auto t0 = Clock::now();
    BodySpec bs = body_spec_from(cfg);
    Body2D body = build_body(bs);
    auto grid = r_grid(cfg);
    auto ps = cfg.numbers("p", {2.0});
    LpOptions lo;
    lo.samples = std::size_t(cfg.number("M", 256));
    lo.seed = cfg.seed();
    lo.threads = threads_for(cfg, opt);
    std::vector<Series> series(ps.size());
    for (std::size_t k = 0; k < ps.size(); ++k) {
        series[k].label = "exponent_scan";
        series[k].body = body_label(bs);
        series[k].gamma = bs.gamma;
        series[k].p = ps[k];
        series[k].samples = lo.samples;
        series[k].seed = lo.seed;
    }
    for (double R : grid) {
        auto est = lp_norms(body, R, ps, lo);
        for (std::size_t k = 0; k < ps.size(); ++k) series[k].points.push_back({R, est[k].value, est[k].std_error});
    }
    rep.timings.push_back({"lp_norms", seconds_since(t0)});
    double tol = cfg.number("tolerance", 0.05);
    for (auto& s : series) {
        s.fit = decay_fit(as_samples(s));
        double expected = cfg.has("expected") ? cfg.number("expected") : predicted_exponent(2, flat_order(body), s.p);
        rep.checks.push_back(check_within("slope p=" + format_double(s.p), s.fit->exponent, expected, tol));
        rep.series.push_back(s);
    }
}

void run_mainterm_residual(const ExperimentConfig& cfg, RunReport& rep, const RunOptions& opt) {
    auto t0 = Clock::now();
    BodySpec bs = body_spec_from(cfg);
    Body2D body = build_body(bs);
    MainTerm mt = MainTerm::from_body(body);
    const double e = mt.growth_exponent();
    auto grid = r_grid(cfg);
    LpOptions lo;
    lo.samples = std::size_t(cfg.number("M", 256));
    lo.seed = cfg.seed();
    lo.threads = threads_for(cfg, opt);
    Series norm, resid;
    for (Series* s : {&norm, &resid}) {
        s->body = body_label(bs);
        s->gamma = bs.gamma;
        s->p = 2.0;
        s->samples = lo.samples;
        s->seed = lo.seed;
    }
    norm.label = "mainterm_residual:norm";
    resid.label = "mainterm_residual:residual";
    for (double R : grid) {
        double sc = std::pow(R, -e);
        auto d = lp_norm(body, R, 2.0, lo);
        LpOptions lr = lo;
        lr.main_term = &mt;
        auto r = lp_norm(body, R, 2.0, lr);
        norm.points.push_back({R, d.value * sc, d.std_error * sc});
        resid.points.push_back({R, r.value * sc, r.std_error * sc});
    }
    rep.timings.push_back({"lp_norms", seconds_since(t0)});
    auto t1 = Clock::now();
    const double Rmax = grid.back();
    const double a_norm = main_term_norm(mt, Rmax, 2.0);
    rep.timings.push_back({"series_norm", seconds_since(t1)});
    norm.fit = decay_fit(as_samples(norm));
    resid.fit = decay_fit(as_samples(resid));
    double ratio = norm.points.back().value / a_norm;
    rep.checks.push_back(check_within("norm ratio at R_max", ratio, 1.0, cfg.number("ratio_tolerance", 0.10)));
    rep.checks.push_back(check_le("residual slope", resid.fit->exponent, cfg.number("residual_slope_max", -0.05)));
    rep.checks.push_back({"series L2 norm", a_norm, 0.0, "info", 0.0, true});
    rep.series.push_back(norm);
    rep.series.push_back(resid);
}

void run_fourier_decay(const ExperimentConfig& cfg, RunReport& rep, const RunOptions&) {
    auto t0 = Clock::now();
    BodySpec bs = body_spec_from(cfg);
    Body2D body = build_body(bs);
    RegimeOptions ro;
    ro.centers = log_grid(cfg.number("s_min", 16), cfg.number("s_max", 1024), std::size_t(cfg.number("windows", 16)));
    ro.per_window = std::size_t(cfg.number("per_window", 24));
    ro.window_width = cfg.number("window_width", 1.0);
    ro.intermediate_ratio = cfg.number("intermediate_ratio", 0.5);
    ro.slack = cfg.number("slack", 0.15);
    double g = bs.kind == "disk" ? 2.0 : bs.gamma;
    RegimeReport rr = regime_report(body, g, ro);
    rep.timings.push_back({"regime_report", seconds_since(t0)});
    for (const auto& r : rr.regimes) {
        Series s;
        s.label = "fourier_decay:" + r.regime;
        s.body = body_label(bs);
        s.gamma = g;
        s.p = 0.0;
        for (const auto& e : r.envelope) s.points.push_back({e.x, e.y, 0.0});
        s.fit = r.fit;
        rep.checks.push_back(check_le(r.regime + " exponent", r.fit.exponent, r.bound + ro.slack));
        rep.series.push_back(s);
    }
}

void run_rotation_scan(const ExperimentConfig& cfg, RunReport& rep, const RunOptions& opt) {
    auto t0 = Clock::now();
    BodySpec bs = body_spec_from(cfg);
    Body2D body = build_body(bs);
    auto grid = r_grid(cfg);
    std::size_t K = std::size_t(cfg.number("angles", 8));
    std::size_t M = std::size_t(cfg.number("M", 64));
    std::uint64_t seed = cfg.seed();
    Series s;
    s.label = "rotation_scan";
    s.body = body_label(bs);
    s.gamma = bs.gamma;
    s.p = 2.0;
    s.samples = M;
    s.seed = seed;
    for (double R : grid) {
        auto ra = rotation_average_l2(body, R, K, seed, M, threads_for(cfg, opt));
        s.points.push_back({R, ra.value, 0.0});
    }
    rep.timings.push_back({"rotation_average", seconds_since(t0)});
    s.fit = decay_fit(as_samples(s));
    rep.checks.push_back(check_le("rotation-average slope", s.fit->exponent, cfg.number("slope_max", 0.65)));
    rep.series.push_back(s);
}

void run_diophantine(const ExperimentConfig& cfg, RunReport& rep, const RunOptions& opt) {
    BodySpec plain = body_spec_from(cfg);
    plain.golden = false;
    plain.rotate.reset();
    plain.rotate_pq.reset();
    BodySpec gold = plain;
    gold.golden = true;
    auto grid = r_grid(cfg);
    LpOptions lo;
    lo.samples = std::size_t(cfg.number("M", 256));
    lo.seed = cfg.seed();
    lo.threads = threads_for(cfg, opt);
    Series su, sg;
    for (auto [s, spec, tag] : {std::tuple{&su, &plain, "unrotated"}, std::tuple{&sg, &gold, "golden"}}) {
        auto t0 = Clock::now();
        Body2D body = build_body(*spec);
        s->label = std::string("diophantine_compare:") + tag;
        s->body = body_label(*spec);
        s->gamma = spec->gamma;
        s->p = 2.0;
        s->samples = lo.samples;
        s->seed = lo.seed;
        for (double R : grid) {
            auto e = lp_norm(body, R, 2.0, lo);
            s->points.push_back({R, e.value, e.std_error});
        }
        s->fit = decay_fit(as_samples(*s));
        rep.timings.push_back({std::string("lp_norms ") + tag, seconds_since(t0)});
    }
    rep.checks.push_back(check_le("golden slope", sg.fit->exponent, cfg.number("slope_max", 0.60)));
    rep.checks.push_back(check_ge("slope gap", su.fit->exponent - sg.fit->exponent, cfg.number("min_gap", 0.12)));
    rep.checks.push_back(check_ge("L2 ratio at R_max", su.points.back().value / sg.points.back().value,
                                  cfg.number("min_ratio", 1.5)));
    rep.series.push_back(su);
    rep.series.push_back(sg);
}

void run_identity_suite(const ExperimentConfig& cfg, RunReport& rep) {
    auto t0 = Clock::now();
    const double tol = cfg.number("tolerance", 1e-8);
    const double pi = std::numbers::pi;
    rep.checks.push_back(check_le("a_series(1, 0) + zeta(2)", std::abs(a_series(1.0, 0.0) + pi * pi / 6.0), tol));
    rep.checks.push_back(check_le("a_series(1, 1/2) - pi^2/12", std::abs(a_series(1.0, 0.5) - pi * pi / 12.0), tol));
    rep.checks.push_back(check_le("a_series(2, 1/4) + pi^3/32", std::abs(a_series(2.0, 0.25) + pi * pi * pi / 32.0), tol));

    auto mc = mollifier_coeffs(1);
    rep.checks.push_back(check_le("mollifier M=1 coefficients",
                                  std::max(std::abs(mc.c[0] + 1.0), std::abs(mc.c[1] - 2.0)), 1e-12));
    rep.checks.push_back(check_le("mollifier M=1 residual", mc.residual, 1e-12));
    rep.checks.push_back(check_le("mollifier M=12 residual", mollifier_coeffs(12).residual, 1e-10));

    const double A3[4] = {2, 0, 0, 2};
    const double A2[1] = {2};
    const double A3b[4] = {2, 0, 0, 8};
    rep.checks.push_back(check_le("g0 d=3 2I", std::abs(g0_from_hessian(A3, 3) - pi), 1e-12));
    rep.checks.push_back(check_le("g0 d=2 (2)", std::abs(g0_from_hessian(A2, 2) - 2.0), 1e-12));
    rep.checks.push_back(check_le("g0 d=3 diag(2,8)", std::abs(g0_from_hessian(A3b, 3) - pi / 2.0), 1e-12));

    auto good = verify_flat_class(log_oscillation_profile(), 2.0, class_grid());
    rep.checks.push_back(check_ge("class check 2+sin(log|x|) passes", good.pass ? 1.0 : 0.0, 1.0));
    rep.checks.push_back(check_ge("class check 2+sin(log|x|) min", good.min_hessian_ratio, 1.0 - 1e-9));
    auto bad = verify_flat_class(power_profile(1.0, 1.5), 2.0, class_grid());
    rep.checks.push_back(check_le("class check |x|^1.5 as gamma=2 fails", bad.pass ? 1.0 : 0.0, 0.0));

    // corollary: random draws and the even-a cancellation
    std::uint64_t seed = cfg.has("seed") ? cfg.seed() : 11;
    double worst = 0.0;
    for (std::uint64_t j = 0; j < 1000; ++j) {
        double g = 1.2 + 6.8 * counter_uniform(seed, 1, j);
        double a = 1.0 / g;
        SeriesParams sp{a, 2.0 * std::pow(2.0, 1.0 / g), 1.0, +1}, sq = sp;
        sq.phase_sign = -1;
        double R = 1.0 + 200.0 * counter_uniform(seed, 2, j);
        double z = counter_uniform(seed, 3, j);
        auto f = corollary_interference(sp, sq, -1.0, 1.0, R, z, 1e-12);
        worst = std::max(worst, std::abs(f.sum_form - f.product_form));
    }
    rep.checks.push_back(check_le("corollary forms agree", worst, 1e-10));
    SeriesParams s9{2.0, 1.0, 1.0, +1}, q9 = s9;
    q9.phase_sign = -1;
    auto z9 = corollary_interference(s9, q9, -0.5, 0.5, 7.0, 0.3137, 1e-12);
    rep.checks.push_back(check_le("corollary cancellation d=9 gamma=4",
                                  std::max(std::abs(z9.sum_form), std::abs(z9.product_form)), 1e-10));

    auto gold = badly_approximable_check(golden_conjugate(), 100000, 0.0, 1000);
    rep.checks.push_back(check_within("golden n||n w|| tail minimum", gold.min_value, 1.0 / std::sqrt(5.0), 1e-3));
    rep.checks.push_back(check_within("predicted exponent d=3 gamma=2.5 p=6", predicted_exponent(3, 2.5, 6.0), 1.3, 1e-12));
    rep.timings.push_back({"identities", seconds_since(t0)});
}

}  // namespace

RunReport run_experiment(const ExperimentConfig& cfg, const RunOptions& opt) {
    RunReport rep;
    rep.config = cfg;
    auto t0 = Clock::now();
    const std::string& k = cfg.experiment;
    if (k == "exponent_scan") run_exponent_scan(cfg, rep, opt);
    else if (k == "mainterm_residual") run_mainterm_residual(cfg, rep, opt);
    else if (k == "fourier_decay") run_fourier_decay(cfg, rep, opt);
    else if (k == "rotation_scan") run_rotation_scan(cfg, rep, opt);
    else if (k == "diophantine_compare") run_diophantine(cfg, rep, opt);
    else if (k == "identity_suite") run_identity_suite(cfg, rep);
    else throw ConfigError(cfg.line, "experiment", "unknown experiment '" + k + "'");
    rep.timings.push_back({"total", seconds_since(t0)});
    rep.pass = std::all_of(rep.checks.begin(), rep.checks.end(), [](const Check& c) { return c.pass; });
    return rep;
}

// ---- output ---------------------------------------------------------------

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string report_csv(const RunReport& rep) {
    std::string out = "experiment,body,gamma,R,p,value,stderr,M,seed\n";
    for (const auto& s : rep.series)
        for (const auto& p : s.points) {
            out += s.label + "," + s.body + "," + format_double(s.gamma) + "," + format_double(p.R) + "," +
                   format_double(s.p) + "," + format_double(p.value) + "," + format_double(p.std_error) + "," +
                   std::to_string(s.samples) + "," + std::to_string(s.seed) + "\n";
        }
    return out;
}

namespace {

json value_json(const ConfigValue& v) {
    return std::visit([](const auto& x) -> json { return json(x); }, v.value);
}

json fit_json(const ScalingFit& f) {
    return {{"exponent", f.exponent}, {"intercept", f.intercept}, {"r2", f.r2},
            {"window", {f.window.lo, f.window.hi}}, {"count", f.count}};
}

json num(double v) { return std::isfinite(v) ? json(v) : json(format_double(v)); }

}  // namespace

std::string report_json(const RunReport& rep) {
    json j;
    json cfg;
    cfg["name"] = rep.config.name;
    cfg["experiment"] = rep.config.experiment;
    for (const auto& [k, v] : rep.config.values) cfg["values"][k] = value_json(v);
    j["config"] = cfg;
    j["series"] = json::array();
    for (const auto& s : rep.series) {
        json js{{"label", s.label}, {"body", s.body}, {"gamma", s.gamma}, {"p", num(s.p)},
                {"samples", s.samples}, {"seed", s.seed}};
        js["points"] = json::array();
        for (const auto& p : s.points) js["points"].push_back({{"R", p.R}, {"value", p.value}, {"stderr", p.std_error}});
        js["fit"] = s.fit ? fit_json(*s.fit) : json(nullptr);
        j["series"].push_back(js);
    }
    j["checks"] = json::array();
    for (const auto& c : rep.checks)
        j["checks"].push_back({{"name", c.name}, {"value", num(c.value)}, {"threshold", num(c.threshold)},
                               {"relation", c.relation}, {"target", num(c.target)}, {"pass", c.pass}});
    j["timings"] = json::object();
    for (const auto& [k, v] : rep.timings) j["timings"][k] = v;
    j["pass"] = rep.pass;
    return j.dump(2) + "\n";
}

void write_report(const RunReport& rep, const std::string& prefix) {
    std::filesystem::path base(prefix);
    if (base.has_parent_path()) std::filesystem::create_directories(base.parent_path());
    std::ofstream csv(prefix + ".csv", std::ios::binary);
    csv << report_csv(rep);
    std::ofstream js(prefix + ".json", std::ios::binary);
    js << report_json(rep);
    if (!csv || !js) throw std::runtime_error("write_report: cannot write " + prefix);
}

std::vector<CsvRow> parse_csv(const std::string& text) {
    std::vector<CsvRow> rows;
    std::stringstream ss(text);
    std::string line;
    int n = 0;
    while (std::getline(ss, line)) {
        ++n;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (n == 1 && line.rfind("experiment,", 0) == 0) continue;
        std::vector<std::string> f;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) f.push_back(cell);
        if (!line.empty() && line.back() == ',') f.push_back("");
        if (f.size() != 9)
            throw std::runtime_error("csv line " + std::to_string(n) + ": expected 9 columns, got " + std::to_string(f.size()));
        CsvRow r;
        r.experiment = f[0];
        r.body = f[1];
        double* dst[5] = {&r.gamma, &r.R, &r.p, &r.value, &r.std_error};
        for (int i = 0; i < 5; ++i) {
            const std::string& c = f[std::size_t(i + 2)];
            if (c == "inf") { *dst[i] = std::numeric_limits<double>::infinity(); continue; }
            if (!parse_number(c, *dst[i]))
                throw std::runtime_error("csv line " + std::to_string(n) + ": bad number '" + c + "'");
        }
        double m, sd;
        if (!parse_number(f[7], m) || !parse_number(f[8], sd))
            throw std::runtime_error("csv line " + std::to_string(n) + ": bad M or seed");
        r.M = std::size_t(m);
        r.seed = std::strtoull(f[8].c_str(), nullptr, 10);
        rows.push_back(r);
    }
    return rows;
}

ScalingFit fit_scaling(const std::vector<CsvRow>& rows, std::optional<Interval> window) {
    std::vector<FitSample> s;
    for (const auto& r : rows) s.push_back({r.R, r.value});
    if (window) return decay_fit(s, *window);
    return decay_fit(s);
}

std::vector<SeriesRefit> refit_csv(const std::string& text, std::optional<Interval> window) {
    auto rows = parse_csv(text);
    std::vector<SeriesRefit> out;
    std::vector<std::vector<CsvRow>> groups;
    for (const auto& r : rows) {
        std::size_t g = 0;
        for (; g < out.size(); ++g)
            if (out[g].experiment == r.experiment && out[g].body == r.body && out[g].gamma == r.gamma && out[g].p == r.p)
                break;
        if (g == out.size()) {
            out.push_back({r.experiment, r.body, r.gamma, r.p, {}});
            groups.emplace_back();
        }
        groups[g].push_back(r);
    }
    for (std::size_t g = 0; g < out.size(); ++g) out[g].fit = fit_scaling(groups[g], window);
    return out;
}

}  // namespace flatdisc
