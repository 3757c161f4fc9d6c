#pragma once

// Shared quadrature core for two-point kernels of the form
//
//   K(x,y) = r_L^Q r_R^Q  Int  phi(r_L (z^{-1} x)) psi(r_R (z y^{-1})) dz
//
// (the kernel of Op_L(phi^(r_L)) Op_R(psi^(r_R))).  The integration domain
// is the intersection of the two support boxes; node counts are chosen to
// resolve the finer of the two scales and an explicit failure is raised
// when that would exceed the node cap.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "carnot/group.hpp"
#include "carnot/profile.hpp"

namespace carnot {

struct QuadratureOptions {
    int points_per_scale = 8;
    std::uint64_t node_cap = 1ULL << 22;
};

struct Box3 {
    std::array<double, 3> lo{0, 0, 0};
    std::array<double, 3> hi{0, 0, 0};
    bool empty() const {
        for (int a = 0; a < 3; ++a)
            if (!(hi[a] > lo[a])) return true;
        return false;
    }
};

inline Box3 intersect(const Box3& a, const Box3& b) {
    Box3 r;
    for (int i = 0; i < 3; ++i) {
        r.lo[i] = std::max(a.lo[i], b.lo[i]);
        r.hi[i] = std::min(a.hi[i], b.hi[i]);
    }
    return r;
}

/// Box containing { z : hom_norm(z^{-1} x) <= R }  (equivalently x b^{-1},
/// b in the hom-ball of radius R).
inline Box3 left_translate_box(const GroupPoint& x, double R) {
    Box3 b;
    const double te = R * R + 2.0 * (std::abs(x.x) + std::abs(x.y)) * R;
    b.lo = {x.x - R, x.y - R, x.t - te};
    b.hi = {x.x + R, x.y + R, x.t + te};
    return b;
}

/// Box containing { z : hom_norm(z y^{-1}) <= R }.
inline Box3 right_translate_box(const GroupPoint& y, double R) {
    Box3 b;
    const double te = R * R + 2.0 * (std::abs(y.x) + std::abs(y.y)) * R;
    b.lo = {y.x - R, y.y - R, y.t - te};
    b.hi = {y.x + R, y.y + R, y.t + te};
    return b;
}

struct ResolutionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::array<int, 3> quad_counts(const Box3& box, double sxy, double st,
                                      const QuadratureOptions& opt) {
    std::array<int, 3> n;
    const std::array<double, 3> target{sxy, sxy, st};
    for (int a = 0; a < 3; ++a) {
        const double extent = box.hi[a] - box.lo[a];
        n[a] = std::max(2, static_cast<int>(std::ceil(extent / target[a])));
    }
    const std::uint64_t total = static_cast<std::uint64_t>(n[0]) * n[1] * n[2];
    if (total > opt.node_cap)
        throw ResolutionError("two_point_kernel: resolving both scales needs " +
                              std::to_string(total) + " nodes, above the cap");
    return n;
}

}  // namespace detail

/// Quadrature value of the two-point kernel with profiles phi (left factor)
/// and psi (right factor) at scales r_L, r_R.
inline double two_point_kernel(const ProfileFunction& phi, const ProfileFunction& psi, double r_L,
                               double r_R, const GroupPoint& x, const GroupPoint& y,
                               const QuadratureOptions& opt = {}) {
    if (!(r_L > 0.0 && r_R > 0.0))
        throw std::invalid_argument("two_point_kernel: scales must be positive");
    const double R1 = phi.support_radius / r_L;
    const double R2 = psi.support_radius / r_R;
    const Box3 box = intersect(left_translate_box(x, R1), right_translate_box(y, R2));
    if (box.empty()) return 0.0;

    const double sxy = std::min(R1, R2) / opt.points_per_scale;
    const double st = std::min(R1 * R1, R2 * R2) / opt.points_per_scale;
    const auto n = detail::quad_counts(box, sxy, st, opt);

    const double hx = (box.hi[0] - box.lo[0]) / n[0];
    const double hy = (box.hi[1] - box.lo[1]) / n[1];
    const double ht = (box.hi[2] - box.lo[2]) / n[2];
    double acc = 0.0;
    for (int i = 0; i < n[0]; ++i) {
        const double zx = box.lo[0] + (i + 0.5) * hx;
        for (int j = 0; j < n[1]; ++j) {
            const double zy = box.lo[1] + (j + 0.5) * hy;
            for (int k = 0; k < n[2]; ++k) {
                const double zt = box.lo[2] + (k + 0.5) * ht;
                const GroupPoint z{zx, zy, zt};
                const GroupPoint u = multiply(inverse(z), x);
                const double a = phi(dilate(r_L, u));
                if (a == 0.0) continue;
                const GroupPoint v = multiply(z, inverse(y));
                acc += a * psi(dilate(r_R, v));
            }
        }
    }
    const double scale =
        std::pow(r_L, kHomogeneousDimension) * std::pow(r_R, kHomogeneousDimension);
    return scale * acc * hx * hy * ht;
}

/// Group convolution of two analytic profiles evaluated at a point:
/// (a * b)(x) = Int a(y) b(y^{-1} x) dy, integrating over the support of the
/// narrower factor (change of variables keeps nodes proportionate).
inline double profile_convolution_value(const ProfileFunction& a, const ProfileFunction& b,
                                        const GroupPoint& x, const QuadratureOptions& opt = {}) {
    // Integrate in v = y^{-1} x over the support ball of b: y = x v^{-1}.
    const double Rb = b.support_radius;
    const double Ra = a.support_radius;
    if (Rb <= Ra) {
        const Box3 box{{-Rb, -Rb, -Rb * Rb}, {Rb, Rb, Rb * Rb}};
        const auto n = detail::quad_counts(box, Rb / opt.points_per_scale,
                                           Rb * Rb / opt.points_per_scale, opt);
        const double hx = (box.hi[0] - box.lo[0]) / n[0];
        const double hy = (box.hi[1] - box.lo[1]) / n[1];
        const double ht = (box.hi[2] - box.lo[2]) / n[2];
        double acc = 0.0;
        for (int i = 0; i < n[0]; ++i)
            for (int j = 0; j < n[1]; ++j)
                for (int k = 0; k < n[2]; ++k) {
                    const GroupPoint v{box.lo[0] + (i + 0.5) * hx, box.lo[1] + (j + 0.5) * hy,
                                       box.lo[2] + (k + 0.5) * ht};
                    const double bv = b(v);
                    if (bv == 0.0) continue;
                    acc += a(multiply(x, inverse(v))) * bv;
                }
        return acc * hx * hy * ht;
    }
    // Otherwise integrate in y over the support ball of a.
    const Box3 box{{-Ra, -Ra, -Ra * Ra}, {Ra, Ra, Ra * Ra}};
    const auto n =
        detail::quad_counts(box, Ra / opt.points_per_scale, Ra * Ra / opt.points_per_scale, opt);
    const double hx = (box.hi[0] - box.lo[0]) / n[0];
    const double hy = (box.hi[1] - box.lo[1]) / n[1];
    const double ht = (box.hi[2] - box.lo[2]) / n[2];
    double acc = 0.0;
    for (int i = 0; i < n[0]; ++i)
        for (int j = 0; j < n[1]; ++j)
            for (int k = 0; k < n[2]; ++k) {
                const GroupPoint y{box.lo[0] + (i + 0.5) * hx, box.lo[1] + (j + 0.5) * hy,
                                   box.lo[2] + (k + 0.5) * ht};
                const double ay = a(y);
                if (ay == 0.0) continue;
                acc += ay * b(multiply(inverse(y), x));
            }
    return acc * hx * hy * ht;
}

}  // namespace carnot
