#include "flatdisc/numeric.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

namespace flatdisc {

namespace {

template <unsigned N>
GaussRule build_rule() {
    using G = boost::math::quadrature::gauss<double, N>;
    const auto& x = G::abscissa();
    const auto& w = G::weights();
    GaussRule r;
    // boost stores the non-negative half; N is even here so there is no zero node
    for (std::size_t i = x.size(); i-- > 0;) {
        r.nodes.push_back(0.5 - 0.5 * x[i]);
        r.weights.push_back(0.5 * w[i]);
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        r.nodes.push_back(0.5 + 0.5 * x[i]);
        r.weights.push_back(0.5 * w[i]);
    }
    return r;
}

}  // namespace

const GaussRule& gauss_rule(int order) {
    static const GaussRule g8 = build_rule<8>();
    static const GaussRule g16 = build_rule<16>();
    static const GaussRule g32 = build_rule<32>();
    switch (order) {
        case 8: return g8;
        case 16: return g16;
        case 32: return g32;
        default: throw std::invalid_argument("gauss_rule: unsupported order " + std::to_string(order));
    }
}

unsigned resolve_threads(unsigned requested) {
    if (const char* env = std::getenv("FLATDISC_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return unsigned(v);
    }
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
    unsigned t = resolve_threads(threads);
    if (t <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    if (t > n) t = unsigned(n);
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lk(err_mu);
                if (!err) err = std::current_exception();
                next.store(n);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(t - 1);
    for (unsigned k = 1; k < t; ++k) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
    if (!(lo > 0.0) || !(hi >= lo) || count == 0)
        throw std::invalid_argument("log_grid: need 0 < lo <= hi and count >= 1");
    std::vector<double> g(count);
    if (count == 1) {
        g[0] = lo;
        return g;
    }
    double a = std::log(lo), b = std::log(hi);
    for (std::size_t i = 0; i < count; ++i)
        g[i] = std::exp(a + (b - a) * double(i) / double(count - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

}  // namespace flatdisc
