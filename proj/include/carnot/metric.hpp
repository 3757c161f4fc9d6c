#pragma once

// Interpolated control metrics on H^1.
//
// rho_eps^L is the Carnot-Caratheodory metric of {grad_L, eps grad_R} and
// rho_eps^R its mirror.  The closed-form surrogate used everywhere is the
// two-regime formula
//
//   rho_hat(p,q) = |z-w| + min( |tau|^{1/2}, |tau| / (eps max(|z|,|w|)) )
//
// with tau the central coordinate of q^{-1}p (left side) or p q^{-1}
// (right side).  A ratio of zero over zero selects the square-root branch.
//
// Ball volumes use the dominant minors of the Lambda_Y sum:
//   V_hat(center, delta) = delta^4 + eps |z| delta^3.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "carnot/group.hpp"

namespace carnot {

enum class Side { Left, Right };

struct MetricParams {
    Side side = Side::Left;
    double eps = 1.0;  // in [0,1]

    MetricParams() = default;
    MetricParams(Side s, double e) : side(s), eps(e) {
        if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("MetricParams: eps must lie in [0,1]");
    }
};

/// Central coordinate tau of q^{-1} p (left) or p q^{-1} (right).
inline double central_offset(Side side, const GroupPoint& p, const GroupPoint& q) {
    const double twist = 2.0 * (p.y * q.x - p.x * q.y);  // 2 Im(z conj(w))
    return side == Side::Left ? p.t - q.t + twist : p.t - q.t - twist;
}

inline double dist_surrogate(const MetricParams& mp, const GroupPoint& p, const GroupPoint& q) {
    const double dz = std::hypot(p.x - q.x, p.y - q.y);
    const double tau = std::abs(central_offset(mp.side, p, q));
    const double root = std::sqrt(tau);
    const double denom = mp.eps * std::max(horizontal_norm(p), horizontal_norm(q));
    double branch = root;
    if (denom > 0.0) branch = std::min(root, tau / denom);
    return dz + branch;
}

inline double volume(const MetricParams& mp, const GroupPoint& center, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("volume: delta must be positive");
    const double d3 = delta * delta * delta;
    return d3 * delta + mp.eps * horizontal_norm(center) * d3;
}

/// A finite list of polynomial-coefficient vector fields with formal degrees
/// (finite homogeneous type data).  Coefficient maps return the frame
/// components in (d/dx, d/dy, d/dt).
struct WeightedFieldList {
    struct Entry {
        std::function<std::array<double, 3>(const GroupPoint&)> coefficients;
        int degree = 1;
    };
    std::vector<Entry> entries;
};

/// Lambda_Y(x, delta) = sum over 3-row selections I of |det| * delta^{d(I)}.
inline double lambda_general(const WeightedFieldList& fields, const GroupPoint& x, double delta) {
    const std::size_t q = fields.entries.size();
    if (q < 3) return 0.0;
    std::vector<std::array<double, 3>> rows(q);
    for (std::size_t i = 0; i < q; ++i) rows[i] = fields.entries[i].coefficients(x);
    double total = 0.0;
    for (std::size_t i = 0; i + 2 < q; ++i)
        for (std::size_t j = i + 1; j + 1 < q; ++j)
            for (std::size_t k = j + 1; k < q; ++k) {
                const auto& a = rows[i];
                const auto& b = rows[j];
                const auto& c = rows[k];
                const double det = a[0] * (b[1] * c[2] - b[2] * c[1]) -
                                   a[1] * (b[0] * c[2] - b[2] * c[0]) +
                                   a[2] * (b[0] * c[1] - b[1] * c[0]);
                const int deg = fields.entries[i].degree + fields.entries[j].degree +
                                fields.entries[k].degree;
                total += std::abs(det) * std::pow(delta, deg);
            }
    return total;
}

/// The H^1 list for {grad_L, eps grad_R}: four order-1 rows plus the two
/// order-2 center rows (normalized to d/dt and eps^2 d/dt).
inline WeightedFieldList interpolation_field_list(Side side, double eps) {
    const double el = side == Side::Left ? 1.0 : eps;
    const double er = side == Side::Left ? eps : 1.0;
    WeightedFieldList list;
    auto scaled = [](FieldId id, double c) {
        return [id, c](const GroupPoint& p) {
            auto v = field_coefficients(id, p);
            return std::array<double, 3>{c * v[0], c * v[1], c * v[2]};
        };
    };
    list.entries.push_back({scaled(FieldId::XL, el), 1});
    list.entries.push_back({scaled(FieldId::YL, el), 1});
    list.entries.push_back({scaled(FieldId::XR, er), 1});
    list.entries.push_back({scaled(FieldId::YR, er), 1});
    list.entries.push_back({scaled(FieldId::T, el * el), 2});
    list.entries.push_back({scaled(FieldId::T, er * er), 2});
    return list;
}

inline WeightedFieldList left_field_list() {
    WeightedFieldList list;
    auto plain = [](FieldId id) {
        return [id](const GroupPoint& p) { return field_coefficients(id, p); };
    };
    list.entries.push_back({plain(FieldId::XL), 1});
    list.entries.push_back({plain(FieldId::YL), 1});
    list.entries.push_back({plain(FieldId::T), 2});
    return list;
}

using DistanceFn = std::function<double(const GroupPoint&, const GroupPoint&)>;

/// Candidate midpoints for the composed distance: a rectangular lattice plus
/// explicitly appended extra points (the endpoints are always candidates).
struct MidpointLattice {
    std::array<double, 3> lo{-1.0, -1.0, -1.0};
    std::array<double, 3> hi{1.0, 1.0, 1.0};
    std::array<int, 3> n{9, 9, 9};
    std::vector<GroupPoint> extra;

    std::vector<GroupPoint> points() const {
        std::vector<GroupPoint> out;
        out.reserve(static_cast<std::size_t>(n[0]) * n[1] * n[2] + extra.size() + 2);
        for (int i = 0; i < n[0]; ++i)
            for (int j = 0; j < n[1]; ++j)
                for (int k = 0; k < n[2]; ++k) {
                    auto coord = [&](int axis, int idx) {
                        if (n[axis] == 1) return 0.5 * (lo[axis] + hi[axis]);
                        return lo[axis] + (hi[axis] - lo[axis]) * idx / (n[axis] - 1);
                    };
                    out.push_back({coord(0, i), coord(1, j), coord(2, k)});
                }
        out.insert(out.end(), extra.begin(), extra.end());
        return out;
    }
};

/// min over lattice midpoints z of max(rho1(p,z), rho2(z,q)); first index
/// wins ties.  The endpoints p, q are appended as candidates so that the
/// trivial bounds composed(p,p)=0 and composed <= rho1(p,q) hold exactly.
inline double dist_composed(const DistanceFn& rho1, const DistanceFn& rho2, const GroupPoint& p,
                            const GroupPoint& q, const MidpointLattice& lattice) {
    auto pts = lattice.points();
    pts.push_back(p);
    pts.push_back(q);
    if (pts.empty()) throw std::invalid_argument("dist_composed: empty midpoint lattice");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& z : pts) {
        const double v = std::max(rho1(p, z), rho2(z, q));
        if (v < best) best = v;
    }
    return best;
}

}  // namespace carnot
