#pragma once

// Profile functions: smooth scalar test functions with declared support and
// vanishing-moment metadata.  Generators cover the two families used
// throughout: iterated left divergences of Gaussian tuples (moment
// cancellation) and compactly supported spline bumps.

#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>

#include "carnot/group.hpp"
#include "carnot/poly.hpp"
#include "carnot/rng.hpp"

namespace carnot {

struct ProfileFunction {
    std::function<double(const GroupPoint&)> eval;
    /// Support bound in the homogeneous norm: eval vanishes (or is negligible,
    /// for Gaussian tails) outside {hom_norm <= support_radius}.
    double support_radius = 1.0;
    /// Declared vanishing-moment order m: homogeneous moments of degree
    /// <= m-1 vanish under quadrature.
    int moment_order = 0;

    double operator()(const GroupPoint& p) const { return eval(p); }
};

/// Homogeneous-norm radius covering a Euclidean coordinate ball of radius r.
inline double hom_radius_of_box(double r) {
    const double r2 = r * r;
    return std::pow(4.0 * r2 * r2 + r2, 0.25) + 1e-12;
}

/// Coordinate extents (xy, t) of the hom-ball of radius rho.
inline std::pair<double, double> box_of_hom_radius(double rho) {
    return {rho, rho * rho};
}

/// phi^(r)(p) = r^Q phi(r p); integral-invariant dyadic rescaling.
inline ProfileFunction dilate_profile(const ProfileFunction& phi, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("dilate_profile: r must be positive");
    if (r == 1.0) return phi;
    ProfileFunction out;
    const auto inner = phi.eval;
    const double scale = std::pow(r, kHomogeneousDimension);
    out.eval = [inner, r, scale](const GroupPoint& p) { return scale * inner(dilate(r, p)); };
    out.support_radius = phi.support_radius / r;
    out.moment_order = phi.moment_order;
    return out;
}

inline ProfileFunction profile_from_gauss(const GaussProfile& g, int moment_order) {
    ProfileFunction out;
    auto shared = std::make_shared<GaussProfile>(g);
    out.eval = [shared](const GroupPoint& p) { return (*shared)(p); };
    const double rxy = shared->max_xy_radius();
    const double rt = shared->max_t_radius();
    const double r4 = 4.0 * rxy * rxy * rxy * rxy + rt * rt;
    out.support_radius = std::pow(r4, 0.25) + 1e-12;
    out.moment_order = moment_order;
    return out;
}

inline ProfileFunction profile_from_spline(const SplineProfile& s, int moment_order = 0) {
    ProfileFunction out;
    auto shared = std::make_shared<SplineProfile>(s);
    out.eval = [shared](const GroupPoint& p) { return (*shared)(p); };
    out.support_radius = 1.0;
    out.moment_order = moment_order;
    return out;
}

namespace detail {

inline GaussProfile random_gauss_mix(double width, Rng& rng) {
    GaussProfile mix;
    const int pieces = 1 + rng.uniform_int(2);
    for (int i = 0; i < pieces; ++i) {
        GroupPoint c{rng.uniform(-0.4, 0.4) * width, rng.uniform(-0.4, 0.4) * width,
                     rng.uniform(-0.4, 0.4) * width};
        const double w = width * rng.uniform(0.7, 1.3);
        mix += GaussProfile::gaussian(c, w, rng.uniform(0.5, 1.5));
    }
    return mix;
}

inline GaussProfile divergence_profile(double width, int order, Rng& rng) {
    if (order == 0) return random_gauss_mix(width, rng);
    GaussProfile a = divergence_profile(width, order - 1, rng);
    GaussProfile b = divergence_profile(width, order - 1, rng);
    GaussProfile out = a.apply_field(FieldId::XL);
    out += b.apply_field(FieldId::YL);
    return out;
}

}  // namespace detail

inline constexpr int kMaxMomentOrder = 6;

/// m-fold left divergence of compactly truncated Gaussian tuples; quadrature
/// moments of homogeneous degree <= m-1 vanish.  m = 0 gives a positive
/// Gaussian mix.
inline ProfileFunction make_vanishing_moment(double width, int order, std::uint64_t seed) {
    if (order < 0 || order > kMaxMomentOrder)
        throw std::invalid_argument("make_vanishing_moment: order outside [0, 6]");
    if (!(width > 0.0)) throw std::invalid_argument("make_vanishing_moment: width must be positive");
    Rng rng(seed ^ 0x6d6f6d656e74ULL);
    return profile_from_gauss(detail::divergence_profile(width, order, rng), order);
}

/// Unit-integral spline bump on the unit hom-ball: (1-g)+^p normalized.
inline ProfileFunction unit_spline_bump(int p = 8) {
    static thread_local int cached_p = -1;
    static thread_local double cached_integral = 0.0;
    SplineProfile base = SplineProfile::bump(p);
    if (cached_p != p) {
        // Midpoint integral over the support box; the integrand is C^(p-1)
        // so this converges fast.  Cached per order.
        const int n = 80;
        double acc = 0.0;
        const double hxy = 2.0 / n, ht = 2.0 / n;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    acc += base({-1.0 + (i + 0.5) * hxy, -1.0 + (j + 0.5) * hxy,
                                 -1.0 + (k + 0.5) * ht});
        cached_integral = acc * hxy * hxy * ht;
        cached_p = p;
    }
    ProfileFunction out = profile_from_spline(base.scaled(1.0 / cached_integral));
    out.support_radius = 1.0;
    out.moment_order = 0;
    return out;
}

}  // namespace carnot
