#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace flatdisc {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2 operator*(double c) const { return {c * x, c * y}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
    // counter-clockwise quarter turn
    Vec2 perp() const { return {-y, x}; }
};

inline Vec2 operator*(double c, Vec2 v) { return v * c; }

struct IntVec2 {
    std::int64_t x = 0;
    std::int64_t y = 0;

    bool operator==(const IntVec2&) const = default;
    Vec2 as_vec() const { return {double(x), double(y)}; }
    double norm() const { return std::hypot(double(x), double(y)); }
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double width() const { return hi - lo; }
};

// Bad input to an operation (non-positive R, gamma <= 1, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A numerical scheme would exceed its node or row budget.
class ResolutionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace flatdisc
