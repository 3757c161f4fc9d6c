#pragma once

// Rectangular sampling grids: the carrier for every discretized operator.
// Samples live at cell centers; integrate is the midpoint rule with a fixed
// summation order; interpolate is trilinear and returns 0 outside the box
// (compact-support convention).

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "carnot/group.hpp"

namespace carnot {

inline constexpr std::uint64_t kGridPointCap = 1ULL << 24;

struct GridSpec {
    std::array<double, 3> lo{-1.0, -1.0, -1.0};
    std::array<double, 3> hi{1.0, 1.0, 1.0};
    std::array<int, 3> n{16, 16, 16};

    GridSpec() = default;
    GridSpec(std::array<double, 3> lo_, std::array<double, 3> hi_, std::array<int, 3> n_)
        : lo(lo_), hi(hi_), n(n_) {
        validate();
    }
    static GridSpec cube(double half_width, int nodes) {
        return GridSpec({-half_width, -half_width, -half_width},
                        {half_width, half_width, half_width}, {nodes, nodes, nodes});
    }

    void validate() const {
        for (int a = 0; a < 3; ++a) {
            if (n[a] <= 0) throw std::invalid_argument("GridSpec: sample counts must be positive");
            if (!(hi[a] > lo[a])) throw std::invalid_argument("GridSpec: empty box interval");
        }
        if (total_points() > kGridPointCap)
            throw std::invalid_argument("GridSpec: point count exceeds cap 2^24");
    }

    std::uint64_t total_points() const {
        return static_cast<std::uint64_t>(n[0]) * static_cast<std::uint64_t>(n[1]) *
               static_cast<std::uint64_t>(n[2]);
    }

    double spacing(int axis) const { return (hi[axis] - lo[axis]) / n[axis]; }
    double cell_volume() const { return spacing(0) * spacing(1) * spacing(2); }

    double coord(int axis, int idx) const { return lo[axis] + (idx + 0.5) * spacing(axis); }

    GroupPoint node(int i, int j, int k) const { return {coord(0, i), coord(1, j), coord(2, k)}; }

    std::size_t flat_index(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * n[1] + j) * n[2] + k;
    }

    friend bool operator==(const GridSpec& a, const GridSpec& b) {
        return a.lo == b.lo && a.hi == b.hi && a.n == b.n;
    }
};

struct GridFunction {
    GridSpec spec;
    std::vector<double> values;

    GridFunction() = default;
    explicit GridFunction(const GridSpec& s) : spec(s), values(s.total_points(), 0.0) {}

    double& at(int i, int j, int k) { return values[spec.flat_index(i, j, k)]; }
    double at(int i, int j, int k) const { return values[spec.flat_index(i, j, k)]; }

    void check_consistent() const {
        if (values.size() != spec.total_points())
            throw std::invalid_argument("GridFunction: value count does not match spec");
        for (double v : values)
            if (std::isnan(v)) throw std::runtime_error("GridFunction: NaN sample");
    }
};

inline GridFunction sample(const std::function<double(const GroupPoint&)>& f, const GridSpec& spec) {
    spec.validate();
    GridFunction g(spec);
    std::size_t idx = 0;
    for (int i = 0; i < spec.n[0]; ++i)
        for (int j = 0; j < spec.n[1]; ++j)
            for (int k = 0; k < spec.n[2]; ++k) g.values[idx++] = f(spec.node(i, j, k));
    g.check_consistent();
    return g;
}

/// Midpoint-rule integral; plain left-to-right accumulation so results are
/// bit-identical run to run.
inline double integrate(const GridFunction& g) {
    double acc = 0.0;
    for (double v : g.values) acc += v;
    return acc * g.spec.cell_volume();
}

inline double interpolate(const GridFunction& g, const GroupPoint& p) {
    const GridSpec& s = g.spec;
    const std::array<double, 3> pos{p.x, p.y, p.t};
    double w[3][2];
    int base[3];
    for (int a = 0; a < 3; ++a) {
        const double u = (pos[a] - s.lo[a]) / s.spacing(a) - 0.5;
        if (u < -0.5 || u > s.n[a] - 0.5) return 0.0;  // outside the box
        double fl = std::floor(u);
        int i0 = static_cast<int>(fl);
        double frac = u - fl;
        // Clamp edge cells so boundary queries reuse the nearest sample.
        if (i0 < 0) {
            i0 = 0;
            frac = 0.0;
        }
        if (i0 >= s.n[a] - 1) {
            i0 = s.n[a] - 2;
            frac = 1.0;
        }
        if (s.n[a] == 1) {
            i0 = 0;
            frac = 0.0;
        }
        base[a] = i0;
        w[a][0] = 1.0 - frac;
        w[a][1] = frac;
    }
    double acc = 0.0;
    for (int di = 0; di < 2; ++di)
        for (int dj = 0; dj < 2; ++dj)
            for (int dk = 0; dk < 2; ++dk) {
                const int i = std::min(base[0] + di, s.n[0] - 1);
                const int j = std::min(base[1] + dj, s.n[1] - 1);
                const int k = std::min(base[2] + dk, s.n[2] - 1);
                acc += w[0][di] * w[1][dj] * w[2][dk] * g.at(i, j, k);
            }
    return acc;
}

inline double l2_norm(const GridFunction& g) {
    double acc = 0.0;
    for (double v : g.values) acc += v * v;
    return std::sqrt(acc * g.spec.cell_volume());
}

inline double linf_norm(const GridFunction& g) {
    double m = 0.0;
    for (double v : g.values) m = std::max(m, std::abs(v));
    return m;
}

inline double l1_norm(const GridFunction& g) {
    double acc = 0.0;
    for (double v : g.values) acc += std::abs(v);
    return acc * g.spec.cell_volume();
}

}  // namespace carnot
