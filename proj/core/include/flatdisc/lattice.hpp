#pragma once

#include "flatdisc/asymptotics.hpp"
#include "flatdisc/bodies.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace flatdisc {

// Rows beyond this count are refused.
inline constexpr double kMaxRows = 1e9;

// Exact count of m in Z^2 with z + m in R B (closed body).
std::int64_t count_points(const Body2D& body, double R, Vec2 z);
double discrepancy(const Body2D& body, double R, Vec2 z);

// z1 -> count(z1, z2) as a right-continuous step function on [0, 1).
class BreakpointProfile {
public:
    double R() const { return R_; }
    double z2() const { return z2_; }
    double base() const { return base_; }
    std::size_t rows() const { return rows_; }
    const std::vector<double>& breakpoints() const { return bps_; }
    const std::vector<std::int64_t>& values() const { return vals_; }
    double interval_length(std::size_t i) const;

    // Exact count at any z1, ties included; z1 is reduced mod 1.
    std::int64_t count_at(double z1) const;
    double discrepancy_at(double z1) const { return double(count_at(z1)) - base_; }
    // Sum over rows of (b_n - a_n): the exact z1-average of the count.
    double row_length_sum() const { return row_sum_; }

private:
    friend BreakpointProfile sweep_profile(const Body2D&, double, double);
    double R_ = 0.0, z2_ = 0.0, base_ = 0.0, row_sum_ = 0.0;
    std::size_t rows_ = 0;
    std::int64_t c0_ = 0;
    std::vector<double> upper_;  // sorted frac(b_n)
    std::vector<double> lower_;  // sorted frac(a_n)
    std::vector<double> bps_;
    std::vector<std::int64_t> vals_;
};

BreakpointProfile sweep_profile(const Body2D& body, double R, double z2);

// Exact integral over z1 in [0, 1) of |D - shift|^p; p = inf gives the max.
double profile_lp_integral(const BreakpointProfile& prof, double p, double shift = 0.0);
// Same with a z1-dependent shift, integrated by Gauss points on each interval.
double profile_lp_integral(const BreakpointProfile& prof, double p, const std::function<double(double)>& shift);
// Exact integral of D - shift (signed).
double profile_signed_integral(const BreakpointProfile& prof, double shift = 0.0);

struct LpEstimate {
    double p = 2.0;
    double R = 1.0;
    double value = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
};

struct LpOptions {
    std::size_t samples = 256;
    std::uint64_t seed = 7;
    const MainTerm* main_term = nullptr;  // residual norms || D - Y ||
    unsigned threads = 0;
};

// Stratified-jittered z2 points; stratum j uses a counter keyed by (seed, j).
std::vector<double> z2_samples(std::size_t M, std::uint64_t seed);

LpEstimate lp_norm(const Body2D& body, double R, double p, const LpOptions& opt = {});
// Several p from the same profiles.
std::vector<LpEstimate> lp_norms(const Body2D& body, double R, const std::vector<double>& ps,
                                 const LpOptions& opt = {});
// Signed mean of D over the torus with its standard error.
LpEstimate signed_mean(const Body2D& body, double R, const LpOptions& opt = {});

struct RotationAverage {
    double value = 0.0;
    std::vector<double> angles;
    std::vector<double> l2;  // per-angle L^2 norms
};

// K jittered-equispaced angles in [0, pi/2); each rotated body gets p = 2 over M samples.
RotationAverage rotation_average_l2(const Body2D& body, double R, std::size_t K, std::uint64_t seed,
                                    std::size_t samples = 64, unsigned threads = 0);
std::vector<double> rotation_angles(std::size_t K, std::uint64_t seed);

}  // namespace flatdisc
