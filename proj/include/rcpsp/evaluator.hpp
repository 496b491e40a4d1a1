#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rcpsp/instance.hpp"
#include "rcpsp/moves.hpp"

namespace rcpsp {

enum class EvalMode { kCapacity, kTime };

std::string_view to_string(EvalMode mode);

struct Schedule {
    std::vector<Time> start_times;
    Time makespan = 0;
};

/**
 * Capacity-indexed resource state. For resource k the array c_k has R_k
 * entries sorted in descending order; c_k[R_k - r] is the earliest time at
 * which r units of k are free from then on.
 */
class CapacityResourceState {
public:
    explicit CapacityResourceState(const ProjectInstance& instance);

    /// State with explicit per-resource arrays (each of length R_k).
    static CapacityResourceState from_levels(const ProjectInstance& instance,
                                             std::vector<std::vector<Time>> levels);

    void reset();

    /// max over used resources of c_k[R_k - r_ik], or 0 for no demand.
    Time earliest_start(const ProjectInstance& instance, ActivityId activity) const;

    /// Adds activity at `start`. start must not precede earliest_start().
    void add(const ProjectInstance& instance, ActivityId activity, Time start);

    std::span<const Time> levels(std::size_t k) const {
        return {levels_.data() + offsets_[k], offsets_[k + 1] - offsets_[k]};
    }

    /// Per-resource update; `scratch` must hold at least levels.size() entries.
    static void add_to_resource(std::span<Time> levels, std::span<Time> scratch, Units demand,
                                Time duration, Time start);

private:
    CapacityResourceState() = default;

    std::vector<Time> levels_;
    std::vector<std::size_t> offsets_;
    std::vector<Time> copy_;
};

/// Time-indexed resource state: free units of every resource for each time
/// slot 0..UB. Stored slot-major so one scan step reads all resources.
class TimeResourceState {
public:
    explicit TimeResourceState(const ProjectInstance& instance);

    void reset();

    /// First start >= es_prec with d_i consecutive slots covering the demand.
    /// Throws std::logic_error when no window exists before the horizon.
    Time earliest_start(const ProjectInstance& instance, ActivityId activity, Time es_prec) const;

    /// Subtracts the demand over [start, start + d_i). Throws std::logic_error
    /// if any slot would go negative.
    void add(const ProjectInstance& instance, ActivityId activity, Time start);

    Units free_units(std::size_t k, Time t) const {
        return free_[static_cast<std::size_t>(t) * resources_ + k];
    }
    Time horizon() const noexcept { return horizon_; }

private:
    std::size_t resources_;
    Time horizon_;
    std::vector<Units> capacities_;
    std::vector<Units> free_;
    Time dirty_until_ = 0;
};

/**
 * Serial schedule generation: places activities in the given order at
 * max(precedence earliest start, resource earliest start). One evaluator per
 * worker; the scratch states are reused between calls.
 */
class ScheduleEvaluator {
public:
    explicit ScheduleEvaluator(const ProjectInstance& instance);

    const ProjectInstance& instance() const noexcept { return *instance_; }

    /// Makespan only; start times are kept in the scratch buffer.
    Time makespan(std::span<const ActivityId> order, EvalMode mode);

    Schedule evaluate(std::span<const ActivityId> order, EvalMode mode);

    std::span<const Time> last_start_times() const noexcept { return starts_; }

private:
    template <typename State, typename EarliestFn>
    Time run(std::span<const ActivityId> order, State& state, EarliestFn&& earliest);

    const ProjectInstance* instance_;
    CapacityResourceState capacity_;
    TimeResourceState time_;
    std::vector<Time> starts_;
};

Schedule evaluate(const ProjectInstance& instance, const ActivityOrder& order, EvalMode mode);

struct FeasibilityReport {
    bool feasible = true;
    std::vector<std::string> violations;
};

/// Independent check of the precedence and resource constraints using a
/// per-slot demand profile.
FeasibilityReport check_schedule_feasible(const ProjectInstance& instance, const Schedule& schedule);

/// Left-right shaking: a backward pass packs activities as late as possible,
/// a forward pass packs them early again; repeats while the makespan drops.
std::pair<ActivityOrder, Schedule> forward_backward_improve(const ProjectInstance& instance,
                                                            const ActivityOrder& order, EvalMode mode);

}  // namespace rcpsp
