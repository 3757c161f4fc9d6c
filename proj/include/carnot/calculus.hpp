#pragma once

// Group convolution on grids, two-sided operators, transference, and the
// generated test functions (normalized bumps, annular partitions of unity).

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <thread>
#include <vector>

#include "carnot/grid.hpp"
#include "carnot/group.hpp"
#include "carnot/metric.hpp"
#include "carnot/profile.hpp"
#include "carnot/quadrature.hpp"

namespace carnot {

inline constexpr std::uint64_t kConvolvePairCap = 1ULL << 30;

namespace detail {

template <typename Fn>
void parallel_over(int count, Fn&& fn) {
    unsigned workers = std::min<unsigned>(std::thread::hardware_concurrency(), 4);
    if (workers <= 1 || count < 64) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::size_t chunk = (count + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const int begin = static_cast<int>(w * chunk);
        const int end = std::min<int>(count, static_cast<int>((w + 1) * chunk));
        if (begin >= end) break;
        pool.emplace_back([begin, end, &fn] {
            for (int i = begin; i < end; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace detail

/// (f * g)(x) = Int f(y) g(y^{-1} x) dy by midpoint quadrature over all grid
/// nodes y; g is read through trilinear interpolation.  Output nodes are
/// independent, so worker count does not affect the result.
inline GridFunction convolve(const GridFunction& f, const GridFunction& g) {
    if (!(f.spec == g.spec)) throw std::invalid_argument("convolve: operands must share a GridSpec");
    const GridSpec& s = f.spec;
    const std::uint64_t pairs = s.total_points() * s.total_points();
    if (pairs > kConvolvePairCap)
        throw std::invalid_argument("convolve: point-pair count exceeds cap 2^30");
    GridFunction out(s);
    const double cell = s.cell_volume();
    const int nx = s.n[0];
    detail::parallel_over(nx, [&](int i) {
        for (int j = 0; j < s.n[1]; ++j)
            for (int k = 0; k < s.n[2]; ++k) {
                const GroupPoint x = s.node(i, j, k);
                double acc = 0.0;
                std::size_t idx = 0;
                for (int yi = 0; yi < nx; ++yi)
                    for (int yj = 0; yj < s.n[1]; ++yj)
                        for (int yk = 0; yk < s.n[2]; ++yk) {
                            const double fy = f.values[idx++];
                            if (fy == 0.0) continue;
                            const GroupPoint y = s.node(yi, yj, yk);
                            acc += fy * interpolate(g, multiply(inverse(y), x));
                        }
                out.at(i, j, k) = acc * cell;
            }
    });
    return out;
}

/// Op_L(k) f = f * k with the analytic profile k evaluated exactly at the
/// shifted arguments (no interpolation of k).
inline GridFunction op_left(const GridFunction& f, const ProfileFunction& k) {
    const GridSpec& s = f.spec;
    GridFunction out(s);
    const double cell = s.cell_volume();
    detail::parallel_over(s.n[0], [&](int i) {
        for (int j = 0; j < s.n[1]; ++j)
            for (int kk = 0; kk < s.n[2]; ++kk) {
                const GroupPoint x = s.node(i, j, kk);
                double acc = 0.0;
                std::size_t idx = 0;
                for (int yi = 0; yi < s.n[0]; ++yi)
                    for (int yj = 0; yj < s.n[1]; ++yj)
                        for (int yk = 0; yk < s.n[2]; ++yk) {
                            const double fy = f.values[idx++];
                            if (fy == 0.0) continue;
                            acc += fy * k(multiply(inverse(s.node(yi, yj, yk)), x));
                        }
                out.at(i, j, kk) = acc * cell;
            }
    });
    return out;
}

/// Op_R(k) f = k * f = Int k(x u^{-1}) f(u) du.
inline GridFunction op_right(const ProfileFunction& k, const GridFunction& f) {
    const GridSpec& s = f.spec;
    GridFunction out(s);
    const double cell = s.cell_volume();
    detail::parallel_over(s.n[0], [&](int i) {
        for (int j = 0; j < s.n[1]; ++j)
            for (int kk = 0; kk < s.n[2]; ++kk) {
                const GroupPoint x = s.node(i, j, kk);
                double acc = 0.0;
                std::size_t idx = 0;
                for (int ui = 0; ui < s.n[0]; ++ui)
                    for (int uj = 0; uj < s.n[1]; ++uj)
                        for (int uk = 0; uk < s.n[2]; ++uk) {
                            const double fu = f.values[idx++];
                            if (fu == 0.0) continue;
                            acc += fu * k(multiply(x, inverse(s.node(ui, uj, uk))));
                        }
                out.at(i, j, kk) = acc * cell;
            }
    });
    return out;
}

/// One k1 (x) k2 tensor summand of a two-sided kernel, at scales (r_L, r_R).
struct TensorTerm {
    ProfileFunction left;
    ProfileFunction right;
    double r_L = 1.0;
    double r_R = 1.0;
};

/// Op_T applied through the tensor decomposition: Op_R(k2) then Op_L(k1) per
/// term (the two commute), summed over terms.
inline GridFunction op_two_sided(const std::vector<TensorTerm>& terms, const GridFunction& f) {
    GridFunction out(f.spec);
    for (const auto& term : terms) {
        const ProfileFunction kl = dilate_profile(term.left, term.r_L);
        const ProfileFunction kr = dilate_profile(term.right, term.r_R);
        GridFunction mid = op_right(kr, f);
        GridFunction one = op_left(mid, kl);
        for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += one.values[i];
    }
    return out;
}

/// Raw (non-tensor) two-variable kernels are rejected: only finite dyadic
/// families of tensor profiles are admissible carriers.
struct RawTwoVariableKernel {
    std::function<double(const GroupPoint&, const GroupPoint&)> eval;
};

inline GridFunction op_two_sided(const RawTwoVariableKernel&, const GridFunction&) {
    throw std::invalid_argument(
        "op_two_sided: raw two-variable kernels are not accepted; supply tensor terms");
}

/// Transference lift (Ef)(x,y) = f(y^{-1} x), read through interpolation.
inline std::function<double(const GroupPoint&, const GroupPoint&)> transfer_E(
    const GridFunction& f) {
    auto shared = std::make_shared<GridFunction>(f);
    return [shared](const GroupPoint& x, const GroupPoint& y) {
        return interpolate(*shared, multiply(inverse(y), x));
    };
}

struct BumpOptions {
    int tab_nodes = 32;            // tabulation nodes per axis
    int max_tab_nodes = 96;        // refuse to tabulate beyond this
    double support_constant = 2.5; // half-width of the tabulation box in units of 1/r_small
    QuadratureOptions quad;
};

/// Normalized bump centered at x built from the intersection kernel
/// Ker(Op_L(chi^(r_L)) Op_R(chi^(r_R)))(x, .) with the unit spline chi; the
/// construction follows the r_L <= r_R side (mirrored otherwise).  Values
/// are tabulated once on a box covering the support and then interpolated.
inline ProfileFunction make_normalized_bump(const GroupPoint& x, double r_L, double r_R,
                                            int order, const BumpOptions& opt = {}) {
    if (!(r_L > 0.0 && r_R > 0.0))
        throw std::invalid_argument("make_normalized_bump: scales must be positive");
    (void)order;  // derivative bounds are verified by the caller up to this order
    const ProfileFunction chi = unit_spline_bump();
    const double r_small = std::min(r_L, r_R);
    const double r_big = std::max(r_L, r_R);
    const double half_xy = opt.support_constant / r_small;
    // t extent of the surrogate ball of radius C/r_small around x.
    const double rho = opt.support_constant / r_small;
    const double eps = r_small / r_big;
    const double tau = std::max(rho * rho, rho * eps * (horizontal_norm(x) + rho));
    const double half_t = tau + 2.0 * (std::abs(x.x) + std::abs(x.y)) * rho + rho * rho;

    int n = opt.tab_nodes;
    const int needed = static_cast<int>(std::ceil(4.0 * half_xy * r_big));
    n = std::max(n, needed);
    if (n > opt.max_tab_nodes)
        throw ResolutionError("make_normalized_bump: grid too coarse to resolve 1/max(r_L,r_R)");

    GridSpec spec({x.x - half_xy, x.y - half_xy, x.t - half_t},
                  {x.x + half_xy, x.y + half_xy, x.t + half_t}, {n, n, n});
    auto tab = std::make_shared<GridFunction>(sample(
        [&](const GroupPoint& y) { return two_point_kernel(chi, chi, r_L, r_R, x, y, opt.quad); },
        spec));
    ProfileFunction out;
    out.eval = [tab](const GroupPoint& p) { return interpolate(*tab, p); };
    out.support_radius = hom_radius_of_box(std::max(half_xy, std::sqrt(half_t)));
    out.moment_order = 0;
    return out;
}

/// C^2 cutoff: 1 on (-inf,1], 0 on [2,inf).
inline double shell_cutoff(double s) {
    if (s <= 1.0) return 1.0;
    if (s >= 2.0) return 0.0;
    const double u = s - 1.0;
    const double su = u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
    return 1.0 - su;
}

/// Annular partition of unity subordinate to surrogate shells
/// rho_hat ~ 2^(l-j), l = 0..count-1: psi_0 covers the core ball and
/// sum_l psi_l = 1 wherever rho_hat(center, .) <= 2^(count-2-j).
inline std::vector<ProfileFunction> partition_annuli(const GroupPoint& center,
                                                     const MetricParams& mp, int j, int count) {
    if (count < 1) throw std::invalid_argument("partition_annuli: count must be >= 1");
    std::vector<ProfileFunction> out;
    out.reserve(count);
    auto level = [center, mp, j](int l) {
        const double scale = std::ldexp(1.0, l - j);
        return [center, mp, scale](const GroupPoint& p) {
            return shell_cutoff(dist_surrogate(mp, center, p) / scale);
        };
    };
    for (int l = 0; l < count; ++l) {
        ProfileFunction psi;
        if (l == 0) {
            auto u0 = level(0);
            psi.eval = [u0](const GroupPoint& p) { return u0(p); };
        } else {
            auto ul = level(l);
            auto um = level(l - 1);
            psi.eval = [ul, um](const GroupPoint& p) { return ul(p) - um(p); };
        }
        const double rho_max = 2.0 * std::ldexp(1.0, l - j);
        psi.support_radius = hom_radius_of_box(rho_max + rho_max * rho_max);
        psi.moment_order = 0;
        out.push_back(std::move(psi));
    }
    return out;
}

}  // namespace carnot
