#pragma once

// Exact arithmetic on the three-dimensional Heisenberg group H^1 in
// coordinates (x, y, t) ~ (z, t) with z = x + iy:
//
//   (z,t)(w,s) = (z+w, t+s+2Im(z conj(w))),   r(z,t) = (rz, r^2 t).
//
// Invariant frames of order 1:
//   X_L = d/dx + 2y d/dt,  Y_L = d/dy - 2x d/dt   (left invariant)
//   X_R = d/dx - 2y d/dt,  Y_R = d/dy + 2x d/dt   (right invariant)
// with [X_L,Y_L] = -4 d/dt = -[X_R,Y_R]; d/dt spans the order-2 layer.
// Homogeneous dimension Q = 4.

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace carnot {

inline constexpr int kHomogeneousDimension = 4;

struct GroupPoint {
    double x = 0.0;
    double y = 0.0;
    double t = 0.0;

    friend bool operator==(const GroupPoint& a, const GroupPoint& b) {
        return a.x == b.x && a.y == b.y && a.t == b.t;
    }
};

inline GroupPoint identity() { return {0.0, 0.0, 0.0}; }

inline GroupPoint multiply(const GroupPoint& p, const GroupPoint& q) {
    // 2 Im(z conj(w)) = 2 (y_p x_q - x_p y_q)
    return {p.x + q.x, p.y + q.y, p.t + q.t + 2.0 * (p.y * q.x - p.x * q.y)};
}

inline GroupPoint inverse(const GroupPoint& p) { return {-p.x, -p.y, -p.t}; }

inline GroupPoint dilate(double r, const GroupPoint& p) {
    if (!(r > 0.0)) throw std::invalid_argument("dilate: r must be positive");
    return {r * p.x, r * p.y, r * r * p.t};
}

/// |z| = sqrt(x^2+y^2) of the horizontal part.
inline double horizontal_norm(const GroupPoint& p) { return std::hypot(p.x, p.y); }

/// Smooth homogeneous norm (|z|^4 + t^2)^(1/4).
inline double hom_norm(const GroupPoint& p) {
    const double z2 = p.x * p.x + p.y * p.y;
    return std::pow(z2 * z2 + p.t * p.t, 0.25);
}

enum class FieldId { XL, YL, XR, YR, T };

inline constexpr std::array<FieldId, 5> kAllFields = {FieldId::XL, FieldId::YL, FieldId::XR,
                                                      FieldId::YR, FieldId::T};

/// Formal degree: 2 for the center direction, 1 otherwise.
inline int field_degree(FieldId id) { return id == FieldId::T ? 2 : 1; }

/// Coefficient vector of the field in the coordinate frame (d/dx, d/dy, d/dt)
/// at p.  Single source of truth for the coordinate expressions; both the
/// finite-difference evaluator and the Lambda_Y minors read from here.
inline std::array<double, 3> field_coefficients(FieldId id, const GroupPoint& p) {
    switch (id) {
        case FieldId::XL: return {1.0, 0.0, 2.0 * p.y};
        case FieldId::YL: return {0.0, 1.0, -2.0 * p.x};
        case FieldId::XR: return {1.0, 0.0, -2.0 * p.y};
        case FieldId::YR: return {0.0, 1.0, 2.0 * p.x};
        case FieldId::T: return {0.0, 0.0, 1.0};
    }
    throw std::logic_error("field_coefficients: bad FieldId");
}

inline double default_fd_step(const GroupPoint& p) { return 1e-4 * (1.0 + hom_norm(p)); }

/// Centered finite difference of f along the frozen coefficient vector of the
/// field at p; O(h^2) for C^3 functions.
inline double apply_field(FieldId id, const std::function<double(const GroupPoint&)>& f,
                          const GroupPoint& p, double h) {
    const auto c = field_coefficients(id, p);
    const GroupPoint plus{p.x + h * c[0], p.y + h * c[1], p.t + h * c[2]};
    const GroupPoint minus{p.x - h * c[0], p.y - h * c[1], p.t - h * c[2]};
    return (f(plus) - f(minus)) / (2.0 * h);
}

inline double apply_field(FieldId id, const std::function<double(const GroupPoint&)>& f,
                          const GroupPoint& p) {
    return apply_field(id, f, p, default_fd_step(p));
}

/// Exact integral curve of a single invariant field through p, time s.
inline GroupPoint flow(FieldId id, double s, const GroupPoint& p) {
    switch (id) {
        case FieldId::XL: return {p.x + s, p.y, p.t + 2.0 * p.y * s};
        case FieldId::YL: return {p.x, p.y + s, p.t - 2.0 * p.x * s};
        case FieldId::XR: return {p.x + s, p.y, p.t - 2.0 * p.y * s};
        case FieldId::YR: return {p.x, p.y + s, p.t + 2.0 * p.x * s};
        case FieldId::T: return {p.x, p.y, p.t + s};
    }
    throw std::logic_error("flow: bad FieldId");
}

inline double max_abs_component(const GroupPoint& p) {
    return std::max(std::abs(p.t), std::max(std::abs(p.x), std::abs(p.y)));
}

}  // namespace carnot
