#pragma once

#include <random>
#include <span>
#include <vector>

#include "rcpsp/instance.hpp"

namespace rcpsp {

using Rng = std::mt19937_64;

/// Swap of order positions u < v. Dummies (positions 0 and N-1) never move.
struct SwapMove {
    std::int32_t u = 0;
    std::int32_t v = 0;

    friend auto operator<=>(const SwapMove&, const SwapMove&) = default;
};

/// Precedence-feasible permutation of activities, source first and sink last.
class ActivityOrder {
public:
    ActivityOrder() = default;
    explicit ActivityOrder(std::vector<ActivityId> activities) : activities_(std::move(activities)) {}

    std::size_t size() const noexcept { return activities_.size(); }
    ActivityId operator[](std::size_t pos) const { return activities_[pos]; }
    std::span<const ActivityId> activities() const noexcept { return activities_; }

    void swap_positions(std::int32_t u, std::int32_t v) {
        std::swap(activities_[static_cast<std::size_t>(u)], activities_[static_cast<std::size_t>(v)]);
    }

    friend bool operator==(const ActivityOrder&, const ActivityOrder&) = default;

private:
    std::vector<ActivityId> activities_;
};

/// True iff the order is a permutation with 0 first, N-1 last and every
/// edge pointing forward.
bool is_topological(const ProjectInstance& instance, std::span<const ActivityId> order);

/// Levels concatenated; shuffle permutes each level uniformly from rng.
ActivityOrder initial_order(const ProjectInstance& instance, bool shuffle, Rng& rng);

/// Direct check of both no-edge conditions over the window u..v.
bool is_swap_feasible(const ActivityOrder& order, SwapMove move, const ProjectInstance& instance);

/// All (u,v) with 1 <= u < v <= N-2 and v-u <= delta, lexicographic.
std::vector<SwapMove> generate_reduced_neighborhood(std::size_t activity_count, std::size_t delta);

/// Two-phase filter: drops moves breaking the w_u-side condition and
/// compacts, then drops moves breaking the w_v-side condition and compacts.
/// Both compactions are stable. Works in place and returns the survivors.
void filter_infeasible(std::vector<SwapMove>& moves, const ActivityOrder& order,
                       const ProjectInstance& instance);

/// Caller guarantees feasibility (asserted in debug builds).
ActivityOrder apply_swap(const ActivityOrder& order, SwapMove move);

}  // namespace rcpsp
