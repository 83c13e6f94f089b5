#pragma once

#include "flatdisc/bodies.hpp"

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace flatdisc {

struct FourierSample {
    Vec2 zeta;
    std::complex<double> value;
};

struct FitSample {
    double x = 0.0;
    double y = 0.0;
};

struct ScalingFit {
    double exponent = 0.0;
    double intercept = 0.0;  // log y at log x = 0
    double r2 = 0.0;
    Interval window;
    std::size_t count = 0;
};

// OLS of log y on log x over samples with x in window. Needs 8 points, y > 0.
ScalingFit decay_fit(const std::vector<FitSample>& samples, Interval window);
ScalingFit decay_fit(const std::vector<FitSample>& samples);

// chi_hat at (0, s) by slice quadrature, refined until successive levels agree.
std::complex<double> chi_hat_slice(const Body2D& body, double s);

// Boundary nodes for the divergence form of chi_hat, resolved up to max_freq.
class BoundaryTransform {
public:
    BoundaryTransform(const Body2D& body, double max_freq, int level = 0);
    std::complex<double> operator()(Vec2 zeta) const;
    double max_freq() const { return max_freq_; }
    std::size_t nodes() const { return x_.size(); }

private:
    double max_freq_;
    std::vector<double> x_, y_, nx_, ny_;  // nx_, ny_ carry the quadrature weight
};

std::complex<double> chi_hat_2d(const Body2D& body, Vec2 zeta, int level = 0);

struct SezioniTerms {
    std::complex<double> p_term;
    std::complex<double> q_term;
    std::complex<double> total() const { return p_term + q_term; }
};

// Two-term expansion of chi_hat(s theta), theta = Q.normal.
SezioniTerms sezioni_expansion(const FlatPoint& P, const FlatPoint& Q, double s);

struct RegimeOptions {
    std::vector<double> centers;        // |zeta| window centres; default log grid 16..1024
    double window_width = 1.0;
    std::size_t per_window = 24;
    double intermediate_ratio = 0.5;    // |xi| / |s|
    double slack = 0.15;
};

struct RegimeResult {
    std::string regime;                 // normal, intermediate, tangential
    Vec2 direction;
    double bound = 0.0;                 // bound exponent in |zeta|
    ScalingFit fit;
    bool pass = false;
    std::vector<FitSample> envelope;    // (centre, window max)
    std::vector<FourierSample> samples;
};

struct RegimeReport {
    std::vector<RegimeResult> regimes;
    bool pass = false;
};

// Envelope fits of |chi_hat| per direction regime against the decay bounds for order gamma.
RegimeReport regime_report(const Body2D& body, double gamma, const RegimeOptions& opt = {});
double regime_bound(double gamma, const std::string& regime);

struct ParsevalResult {
    double value = 0.0;   // R^4 sum_{0<|m|<=K} |chi_hat(R m)|^2
    double tail = 0.0;    // estimated contribution of |m| > K
    std::size_t terms = 0;
};

ParsevalResult parseval_l2(const Body2D& body, double R, int K);

}  // namespace flatdisc
