#pragma once

#include "flatdisc/geometry.hpp"

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace flatdisc {

enum class BodyKind { disk, gen_ellipse, superellipse, rotated, profile };

std::string to_string(BodyKind k);

struct FlatPoint {
    Vec2 location;
    Vec2 normal;                 // outward unit normal
    double order = 2.0;          // gamma
    double g0 = 0.0;             // limit of S(t_pole -+ u) / u^(1/gamma)
    std::optional<IntVec2> m0;   // shortest integer vector along normal, if rational
};

// Boundary near the poles is y = +-sqrt(1 - phi(x)); the body is {phi(x) + y^2 <= 1}.
struct ProfileSpec {
    std::function<double(double)> phi;
    std::function<double(double)> dphi;
    std::function<double(double)> d2phi;
    double gamma = 2.0;                  // claimed order at x = 0
    std::optional<double> leading_coeff; // c in phi(x) ~ c|x|^gamma; enables flat-point metadata
    double domain = 4.0;                 // evaluators are trusted on [-domain, domain]
};

struct ClassReport {
    double min_hessian_ratio = 0.0;  // min |x|^(2-g) phi''
    double max_phi_ratio = 0.0;      // max |x|^(-g) |phi|
    double max_dphi_ratio = 0.0;     // max |x|^(1-g) |phi'|
    double max_d2phi_ratio = 0.0;    // max |x|^(2-g) |phi''|
    std::size_t points = 0;
    bool pass = false;
    std::string diagnostic;
};

inline constexpr double kClassMinThreshold = 1e-6;
inline constexpr double kClassMaxThreshold = 1e6;

// phi(x) = c |x|^e with matching derivatives; leading_coeff = c, claimed order e.
ProfileSpec power_profile(double c, double e);
// phi(x) = x^2 + x^2 (sin log|x| - 3 cos log|x|) / 10, whose phi'' = 2 + sin log|x|.
ProfileSpec log_oscillation_profile();

// Log-spaced |x| grid on [lo, b], both signs are probed by verify_flat_class.
std::vector<double> class_grid(double b = 0.5, std::size_t n = 200, double lo = 1e-15);

ClassReport verify_flat_class(const ProfileSpec& profile, double gamma,
                              const std::vector<double>& grid);

// tan(theta) = q / p, theta = atan2(q, p).
struct RationalAngle {
    std::int64_t p = 1;
    std::int64_t q = 0;
};

namespace detail {
class Shape;
}

class Body2D {
public:
    static Body2D disk();
    static Body2D gen_ellipse(double gamma);
    // flat = true requires gamma > 2 and attaches the four axis flat points.
    static Body2D superellipse(double gamma, bool flat = true);
    static Body2D profile(ProfileSpec spec);

    BodyKind kind() const;
    std::string name() const;
    double gamma() const;

    Interval t_range() const;
    std::optional<Interval> slice_extents(double t) const;
    double slice_width(double t) const;
    double area() const { return area_; }
    const std::vector<FlatPoint>& flat_points() const;

    // Convex defining function: negative inside, zero on the boundary.
    double residual(Vec2 p) const;
    Vec2 gradient(Vec2 p) const;
    bool contains(Vec2 p) const { return residual(p) <= 0.0; }

    // Polar boundary r(phi) about the origin and its derivative.
    double radial(double phi) const;
    double radial_derivative(double phi) const;
    double bounding_radius() const;

    // Grading exponents for S near t_min and t_max (S ~ u^(1/q)).
    std::pair<double, double> pole_orders() const;
    // Interior t values where the slice extents lose smoothness.
    std::vector<double> slice_breaks() const;
    // Polar angles where the boundary parametrization loses smoothness.
    std::vector<double> boundary_angles() const;

    double rotation() const;  // accumulated rotation angle, 0 for unrotated kinds

    Body2D rotated(double theta) const;
    Body2D rotated(RationalAngle angle) const;

private:
    explicit Body2D(std::shared_ptr<const detail::Shape> s);
    std::shared_ptr<const detail::Shape> shape_;
    double area_ = 0.0;
};

Body2D make_body(BodyKind kind, double gamma = 2.0);
Body2D make_body(const std::string& kind, double gamma = 2.0);
Body2D rotate_body(const Body2D& body, double theta);
Body2D rotate_body(const Body2D& body, RationalAngle angle);

inline std::optional<Interval> slice_extents(const Body2D& b, double t) { return b.slice_extents(t); }
inline double slice_width(const Body2D& b, double t) { return b.slice_width(t); }
inline double area(const Body2D& b) { return b.area(); }
inline const std::vector<FlatPoint>& flat_points(const Body2D& b) { return b.flat_points(); }

// Graded composite Gauss quadrature of S(t) e^{-2 pi i s t}. Poles use t = pole -+ h v^q.
// level doubles the panel density per step. Throws ResolutionError beyond 1e8 nodes.
std::complex<double> slice_transform(const Body2D& body, double s, int level = 0);

}  // namespace flatdisc
