#pragma once

// Control-metric oracle: best-first search over exact single-field flows.
//
// Moves of arc length h along X_L, Y_L cost h; moves along X_R, Y_R cost
// h / max(eps, eps_floor) (mirrored for Side::Right).  Below the eps floor
// the cross-side fields are priced as unusable and omitted from the move
// set.  States keep exact coordinates; deduplication works on cells of a
// lattice of pitch h/2, each cell remembering the cheapest exact
// representative seen so far.  The returned value is the cost of the
// cheapest admissible path ending within half a cell of the target, hence
// an upper bound for the true control distance up to snapping tolerance.

#include <cmath>
#include <cstdint>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "carnot/group.hpp"
#include "carnot/metric.hpp"

namespace carnot {

inline constexpr double kOracleEpsFloor = 9.5367431640625e-07;  // 2^-20

struct OracleOptions {
    double h = 1.0 / 16.0;
    std::int64_t node_budget = 1 << 20;
    double cost_cap = 0.0;  // abandon once the search lower bound exceeds this; 0 = none
};

struct OracleStats {
    std::int64_t popped = 0;
    std::int64_t cells = 0;
};

struct OracleUnreached : std::runtime_error {
    double lower_bound;
    explicit OracleUnreached(double lb)
        : std::runtime_error("dist_oracle: target not reached (best lower bound " +
                             std::to_string(lb) + ")"),
          lower_bound(lb) {}
};

namespace detail {

inline std::uint64_t lattice_key(const GroupPoint& p, double pitch) {
    auto cell = [pitch](double v) {
        const auto c = static_cast<std::int64_t>(std::floor(v / pitch));
        return static_cast<std::uint64_t>(c + (1LL << 20)) & ((1ULL << 21) - 1);
    };
    return cell(p.x) | (cell(p.y) << 21) | (cell(p.t) << 42);
}

}  // namespace detail

inline double dist_oracle(const MetricParams& mp, const GroupPoint& p, const GroupPoint& q,
                          const OracleOptions& opt = {}, OracleStats* stats = nullptr) {
    if (!(opt.h > 0.0)) throw std::invalid_argument("dist_oracle: h must be positive");
    const double h = opt.h;
    const double pitch = 0.5 * h;
    const double tol = pitch + 1e-12;

    const std::uint64_t goal_key = detail::lattice_key(q, pitch);
    auto near_goal = [&](const GroupPoint& s) {
        if (detail::lattice_key(s, pitch) == goal_key) return true;
        return std::abs(s.x - q.x) <= tol && std::abs(s.y - q.y) <= tol &&
               std::abs(s.t - q.t) <= tol;
    };
    if (near_goal(p)) return 0.0;

    const bool left = mp.side == Side::Left;
    const bool cross_usable = mp.eps >= kOracleEpsFloor;
    const double cross_cost = cross_usable ? h / mp.eps : 0.0;

    // Admissible lower bound on the remaining cost: every move changes x or y
    // by exactly h at cost >= h.
    auto heuristic = [&](const GroupPoint& s) {
        return std::max(std::abs(s.x - q.x), std::abs(s.y - q.y));
    };

    struct Move {
        FieldId id;
        double s;
        double cost;
    };
    std::vector<Move> moves;
    const FieldId own_a = left ? FieldId::XL : FieldId::XR;
    const FieldId own_b = left ? FieldId::YL : FieldId::YR;
    const FieldId cross_a = left ? FieldId::XR : FieldId::XL;
    const FieldId cross_b = left ? FieldId::YR : FieldId::YL;
    moves.push_back({own_a, h, h});
    moves.push_back({own_a, -h, h});
    moves.push_back({own_b, h, h});
    moves.push_back({own_b, -h, h});
    if (cross_usable) {
        moves.push_back({cross_a, h, cross_cost});
        moves.push_back({cross_a, -h, cross_cost});
        moves.push_back({cross_b, h, cross_cost});
        moves.push_back({cross_b, -h, cross_cost});
    }

    struct Cell {
        GroupPoint repr;
        double g;
    };
    std::unordered_map<std::uint64_t, Cell> cells;
    cells.reserve(1 << 14);
    cells[detail::lattice_key(p, pitch)] = {p, 0.0};

    struct Node {
        double f;
        double g;
        std::uint64_t key;
        bool operator<(const Node& o) const { return f > o.f; }
    };
    std::priority_queue<Node> open;
    open.push({heuristic(p), 0.0, detail::lattice_key(p, pitch)});

    std::int64_t popped = 0;
    double best_lb = heuristic(p);
    while (!open.empty()) {
        const Node node = open.top();
        open.pop();
        auto it = cells.find(node.key);
        if (it == cells.end() || node.g > it->second.g + 1e-15) continue;  // stale entry
        const GroupPoint s = it->second.repr;
        best_lb = std::max(best_lb, node.f);
        if (stats) {
            stats->popped = popped;
            stats->cells = static_cast<std::int64_t>(cells.size());
        }
        if (near_goal(s)) return node.g;
        if (opt.cost_cap > 0.0 && node.f > opt.cost_cap) throw OracleUnreached(node.f);
        if (++popped > opt.node_budget) throw OracleUnreached(best_lb);

        for (const auto& mv : moves) {
            const GroupPoint nxt = flow(mv.id, mv.s, s);
            const double g2 = node.g + mv.cost;
            const auto k2 = detail::lattice_key(nxt, pitch);
            auto found = cells.find(k2);
            if (found != cells.end() && found->second.g <= g2 + 1e-15) continue;
            cells[k2] = {nxt, g2};
            open.push({g2 + heuristic(nxt), g2, k2});
        }
    }
    throw OracleUnreached(best_lb);
}

}  // namespace carnot
