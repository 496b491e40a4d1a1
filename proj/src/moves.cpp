#include "rcpsp/moves.hpp"

#include <algorithm>
#include <cassert>

namespace rcpsp {

bool is_topological(const ProjectInstance& instance, std::span<const ActivityId> order) {
    const std::size_t n = instance.activity_count();
    if (order.size() != n) return false;
    if (order.front() != 0 || order.back() != static_cast<ActivityId>(n - 1)) return false;
    std::vector<std::int32_t> position(n, -1);
    for (std::size_t p = 0; p < n; ++p) {
        const ActivityId a = order[p];
        if (a < 0 || static_cast<std::size_t>(a) >= n || position[static_cast<std::size_t>(a)] != -1) return false;
        position[static_cast<std::size_t>(a)] = static_cast<std::int32_t>(p);
    }
    for (std::size_t i = 0; i < n; ++i)
        for (ActivityId j : instance.successors(static_cast<ActivityId>(i)))
            if (position[i] >= position[static_cast<std::size_t>(j)]) return false;
    return true;
}

ActivityOrder initial_order(const ProjectInstance& instance, bool shuffle, Rng& rng) {
    std::vector<ActivityId> order;
    order.reserve(instance.activity_count());
    for (auto& level : compute_levels(instance)) {
        if (shuffle) std::shuffle(level.begin(), level.end(), rng);
        order.insert(order.end(), level.begin(), level.end());
    }
    return ActivityOrder(std::move(order));
}

bool is_swap_feasible(const ActivityOrder& order, SwapMove move, const ProjectInstance& instance) {
    const ActivityId first = order[static_cast<std::size_t>(move.u)];
    const ActivityId last = order[static_cast<std::size_t>(move.v)];
    for (auto x = move.u + 1; x <= move.v; ++x)
        if (instance.has_edge(first, order[static_cast<std::size_t>(x)])) return false;
    for (auto x = move.u; x < move.v; ++x)
        if (instance.has_edge(order[static_cast<std::size_t>(x)], last)) return false;
    return true;
}

std::vector<SwapMove> generate_reduced_neighborhood(std::size_t activity_count, std::size_t delta) {
    std::vector<SwapMove> moves;
    if (activity_count < 4 || delta == 0) return moves;
    const auto last = static_cast<std::int32_t>(activity_count) - 2;
    const auto reach = static_cast<std::int32_t>(std::min(delta, activity_count));
    for (std::int32_t u = 1; u < last; ++u)
        for (std::int32_t v = u + 1; v <= std::min(last, u + reach); ++v) moves.push_back({u, v});
    return moves;
}

void filter_infeasible(std::vector<SwapMove>& moves, const ActivityOrder& order,
                       const ProjectInstance& instance) {
    const auto n = static_cast<std::int32_t>(order.size());
    const auto at = [&](std::int32_t pos) { return order[static_cast<std::size_t>(pos)]; };

    // Phase 1: w_u may travel right only up to (excluding) its first successor.
    std::vector<std::int32_t> first_successor(static_cast<std::size_t>(n), n);
    for (std::int32_t u = 1; u < n - 1; ++u) {
        for (std::int32_t x = u + 1; x < n; ++x) {
            if (instance.has_edge(at(u), at(x))) {
                first_successor[static_cast<std::size_t>(u)] = x;
                break;
            }
        }
    }
    auto kept = std::stable_partition(moves.begin(), moves.end(), [&](SwapMove m) {
        return m.v < first_successor[static_cast<std::size_t>(m.u)];
    });
    moves.erase(kept, moves.end());

    // Phase 2: w_v may travel left only down to (excluding) its last predecessor.
    std::vector<std::int32_t> last_predecessor(static_cast<std::size_t>(n), -1);
    for (std::int32_t v = n - 2; v > 0; --v) {
        for (std::int32_t x = v - 1; x >= 0; --x) {
            if (instance.has_edge(at(x), at(v))) {
                last_predecessor[static_cast<std::size_t>(v)] = x;
                break;
            }
        }
    }
    kept = std::stable_partition(moves.begin(), moves.end(), [&](SwapMove m) {
        return m.u > last_predecessor[static_cast<std::size_t>(m.v)];
    });
    moves.erase(kept, moves.end());
}

ActivityOrder apply_swap(const ActivityOrder& order, SwapMove move) {
    assert(move.u >= 1 && move.u < move.v && static_cast<std::size_t>(move.v) + 1 < order.size());
    ActivityOrder out = order;
    out.swap_positions(move.u, move.v);
    return out;
}

}  // namespace rcpsp
