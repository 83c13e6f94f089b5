#include "flatdisc/bodies.hpp"
#include "flatdisc/lab.hpp"
#include "flatdisc/lattice.hpp"
#include "flatdisc/spectral.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace flatdisc;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFail = 2;

struct BodyArgs {
    std::string kind = "disk";
    double gamma = 4.0;
    double rotate = 0.0;
};

Body2D body_from(const BodyArgs& a) {
    Body2D b = make_body(a.kind, a.kind == "disk" ? 2.0 : a.gamma);
    return a.rotate != 0.0 ? b.rotated(a.rotate) : b;
}

void add_body_flags(CLI::App* app, BodyArgs& a) {
    app->add_option("--body", a.kind, "disk | gen_ellipse | superellipse")
        ->check(CLI::IsMember({"disk", "gen_ellipse", "superellipse"}));
    app->add_option("--gamma", a.gamma, "flat order for gen_ellipse and superellipse");
    app->add_option("--rotate", a.rotate, "rotation angle in radians");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"flatdisc: lattice discrepancy and Fourier decay for planar bodies with flat points"};
    app.require_subcommand(1);

    BodyArgs body;
    double R = 64.0;
    std::vector<double> z{0.0, 0.0};
    std::vector<double> ps{2.0};
    std::size_t samples = 256;
    std::uint64_t seed = 7;
    unsigned threads = 0;
    std::string out;
    std::vector<double> zeta{0.0, 16.0};
    std::string config_path, csv_path;
    std::vector<double> window;

    auto* count = app.add_subcommand("count", "exact count and discrepancy at one translate");
    add_body_flags(count, body);
    count->add_option("--R", R, "dilation")->required();
    count->add_option("--z", z, "translate z1 z2")->expected(2);

    auto* lp = app.add_subcommand("lpnorm", "L^p norms of the discrepancy over the torus");
    add_body_flags(lp, body);
    lp->add_option("--R", R, "dilation")->required();
    lp->add_option("--p", ps, "exponents, inf allowed")->expected(1, 16);
    lp->add_option("--samples", samples, "z2 samples (>= 16)");
    lp->add_option("--seed", seed, "seed")->required();
    lp->add_option("--threads", threads, "worker threads");

    auto* fourier = app.add_subcommand("fourier", "Fourier transform of the indicator");
    add_body_flags(fourier, body);
    fourier->add_option("--zeta", zeta, "frequency zeta1 zeta2")->expected(2);

    auto* run = app.add_subcommand("run", "run every experiment in a config file");
    run->add_option("config", config_path, "config file")->required();
    run->add_option("--out", out, "output prefix; overrides per-table out");
    run->add_option("--threads", threads, "worker threads");

    auto* refit = app.add_subcommand("refit", "refit scaling laws from an emitted CSV");
    refit->add_option("csv", csv_path, "CSV file")->required();
    refit->add_option("--window", window, "R window lo hi")->expected(2);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitPass : kExitUsage;
    }

    try {
        if (*count) {
            Body2D b = body_from(body);
            Vec2 zz{z[0], z[1]};
            std::int64_t n = count_points(b, R, zz);
            std::printf("count %lld\ndiscrepancy %s\n", static_cast<long long>(n),
                        format_double(double(n) - R * R * b.area()).c_str());
        } else if (*lp) {
            LpOptions o;
            o.samples = samples;
            o.seed = seed;
            o.threads = threads;
            auto est = lp_norms(body_from(body), R, ps, o);
            for (const auto& e : est)
                std::printf("p %s value %s stderr %s\n", format_double(e.p).c_str(), format_double(e.value).c_str(),
                            format_double(e.std_error).c_str());
        } else if (*fourier) {
            Body2D b = body_from(body);
            Vec2 zz{zeta[0], zeta[1]};
            std::complex<double> v = (zz.x == 0.0 && zz.y == 0.0) ? std::complex<double>(b.area(), 0.0)
                                                                  : chi_hat_2d(b, zz);
            std::printf("re %s\nim %s\nabs %s\n", format_double(v.real()).c_str(), format_double(v.imag()).c_str(),
                        format_double(std::abs(v)).c_str());
        } else if (*run) {
            auto cfgs = load_config(config_path);
            RunOptions ro;
            ro.threads = threads;
            bool all = true;
            for (const auto& c : cfgs) {
                RunReport rep = run_experiment(c, ro);
                std::string prefix = !out.empty() ? (cfgs.size() > 1 ? out + "_" + c.name : out) : c.text("out", "");
                if (prefix.empty()) prefix = "results/" + c.name;
                write_report(rep, prefix);
                std::printf("[%s] %s\n", c.name.c_str(), rep.pass ? "pass" : "FAIL");
                for (const auto& k : rep.checks)
                    std::printf("  %-40s %s %s %s\n", k.name.c_str(), format_double(k.value).c_str(), k.relation.c_str(),
                                format_double(k.relation == "within" ? k.target : k.threshold).c_str());
                all = all && rep.pass;
            }
            return all ? kExitPass : kExitFail;
        } else if (*refit) {
            std::optional<Interval> w;
            if (window.size() == 2) w = Interval{window[0], window[1]};
            for (const auto& r : refit_csv(read_file(csv_path), w))
                std::printf("%s,%s,%s,%s,exponent=%s,intercept=%s,r2=%s,n=%zu\n", r.experiment.c_str(), r.body.c_str(),
                            format_double(r.gamma).c_str(), format_double(r.p).c_str(),
                            format_double(r.fit.exponent).c_str(), format_double(r.fit.intercept).c_str(),
                            format_double(r.fit.r2).c_str(), r.fit.count);
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
    return kExitPass;
}
