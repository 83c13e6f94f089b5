#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace flatdisc {

// Neumaier compensated sum. Order of add() calls fixes the result.
class CompensatedSum {
public:
    void add(double v) {
        double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// |x|^g with cheap paths for the small integer orders used by the built-in bodies.
inline double pow_abs(double x, double g) {
    double a = std::abs(x);
    if (g == 2.0) return a * a;
    if (g == 4.0) { double s = a * a; return s * s; }
    if (g == 3.0) return a * a * a;
    if (g == 6.0) { double s = a * a * a; return s * s; }
    if (g == 8.0) { double s = a * a; s *= s; return s * s; }
    if (a == 0.0) return 0.0;
    return std::pow(a, g);
}

// Gauss-Legendre rule mapped to [0, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Supported orders: 8, 16, 32.
const GaussRule& gauss_rule(int order);

// Counter-based generator: value depends only on (seed, stream, index).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ index);
}

// Uniform in [0, 1) with 53 random bits.
inline double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    return double(counter_hash(seed, stream, index) >> 11) * 0x1.0p-53;
}

// Worker count: FLATDISC_THREADS overrides the requested value; 0 means hardware concurrency.
unsigned resolve_threads(unsigned requested);

// Calls fn(i) for i in [0, n). Results must be written by index; scheduling never
// affects output.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

std::vector<double> log_grid(double lo, double hi, std::size_t count);

}  // namespace flatdisc
