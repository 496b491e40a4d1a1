#include "rcpsp/evaluator.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>

namespace rcpsp {

std::string_view to_string(EvalMode mode) {
    return mode == EvalMode::kCapacity ? "capacity" : "time";
}

// --- capacity-indexed -------------------------------------------------------

CapacityResourceState::CapacityResourceState(const ProjectInstance& instance) {
    offsets_.push_back(0);
    for (Units cap : instance.capacities()) offsets_.push_back(offsets_.back() + static_cast<std::size_t>(cap));
    levels_.assign(offsets_.back(), 0);
    copy_.assign(static_cast<std::size_t>(instance.max_capacity()), 0);
}

CapacityResourceState CapacityResourceState::from_levels(const ProjectInstance& instance,
                                                         std::vector<std::vector<Time>> levels) {
    if (levels.size() != instance.resource_count())
        throw std::invalid_argument("one level array per resource expected");
    CapacityResourceState state;
    state.offsets_.push_back(0);
    for (std::size_t k = 0; k < levels.size(); ++k) {
        if (levels[k].size() != static_cast<std::size_t>(instance.capacity(k)))
            throw std::invalid_argument("level array " + std::to_string(k) + " must have R_k entries");
        state.levels_.insert(state.levels_.end(), levels[k].begin(), levels[k].end());
        state.offsets_.push_back(state.levels_.size());
    }
    state.copy_.assign(static_cast<std::size_t>(instance.max_capacity()), 0);
    return state;
}

void CapacityResourceState::reset() { std::fill(levels_.begin(), levels_.end(), 0); }

Time CapacityResourceState::earliest_start(const ProjectInstance& instance, ActivityId activity) const {
    Time es = 0;
    const auto demand = instance.requirements(activity);
    for (std::size_t k = 0; k < demand.size(); ++k) {
        if (demand[k] > 0) {
            const std::size_t cap = offsets_[k + 1] - offsets_[k];
            es = std::max(es, levels_[offsets_[k] + cap - static_cast<std::size_t>(demand[k])]);
        }
    }
    return es;
}

void CapacityResourceState::add_to_resource(std::span<Time> c, std::span<Time> copy, Units demand,
                                            Time duration, Time start) {
    Time required_effort = demand * duration;
    if (required_effort <= 0) return;
    std::size_t copy_idx = 0;
    Time new_time = start + duration;
    for (std::size_t res_idx = 0; required_effort > 0 && res_idx < c.size(); ++res_idx) {
        if (c[res_idx] >= new_time) continue;
        if (copy_idx >= static_cast<std::size_t>(demand)) new_time = copy[copy_idx - static_cast<std::size_t>(demand)];
        const Time time_diff = new_time - std::max(c[res_idx], start);
        if (required_effort - time_diff > 0) {
            required_effort -= time_diff;
            copy[copy_idx++] = c[res_idx];
            c[res_idx] = new_time;
        } else {
            c[res_idx] = std::max(c[res_idx], start) + required_effort;
            required_effort = 0;
        }
    }
    assert(required_effort == 0);
}

void CapacityResourceState::add(const ProjectInstance& instance, ActivityId activity, Time start) {
    const Time d = instance.duration(activity);
    const auto demand = instance.requirements(activity);
    for (std::size_t k = 0; k < demand.size(); ++k) {
        std::span<Time> c(levels_.data() + offsets_[k], offsets_[k + 1] - offsets_[k]);
        add_to_resource(c, copy_, demand[k], d, start);
    }
}

// --- time-indexed -----------------------------------------------------------

TimeResourceState::TimeResourceState(const ProjectInstance& instance)
    : resources_(instance.resource_count()),
      horizon_(makespan_upper_bound(instance)),
      capacities_(instance.capacities().begin(), instance.capacities().end()) {
    free_.resize((static_cast<std::size_t>(horizon_) + 1) * resources_);
    for (std::size_t t = 0; t <= static_cast<std::size_t>(horizon_); ++t)
        std::copy(capacities_.begin(), capacities_.end(), free_.begin() + static_cast<std::ptrdiff_t>(t * resources_));
}

void TimeResourceState::reset() {
    for (std::size_t t = 0; t < static_cast<std::size_t>(dirty_until_); ++t)
        std::copy(capacities_.begin(), capacities_.end(), free_.begin() + static_cast<std::ptrdiff_t>(t * resources_));
    dirty_until_ = 0;
}

Time TimeResourceState::earliest_start(const ProjectInstance& instance, ActivityId activity, Time es_prec) const {
    const Time d = instance.duration(activity);
    if (d == 0) return es_prec;
    const auto demand = instance.requirements(activity);
    Time load_time = 0;
    Time t = es_prec;
    for (; t < horizon_ && load_time < d; ++t) {
        const Units* slot = free_.data() + static_cast<std::size_t>(t) * resources_;
        bool sufficient = true;
        for (std::size_t k = 0; k < resources_; ++k) {
            if (slot[k] < demand[k]) {
                sufficient = false;
                break;
            }
        }
        load_time = sufficient ? load_time + 1 : 0;
    }
    if (load_time < d)
        throw std::logic_error("no resource window for activity " + std::to_string(activity) +
                               " before the makespan upper bound");
    return t - load_time;
}

void TimeResourceState::add(const ProjectInstance& instance, ActivityId activity, Time start) {
    const Time d = instance.duration(activity);
    const auto demand = instance.requirements(activity);
    if (d == 0) return;
    if (start < 0 || start + d > horizon_ + 1)
        throw std::logic_error("activity " + std::to_string(activity) + " placed outside the horizon");
    for (Time t = start; t < start + d; ++t) {
        Units* slot = free_.data() + static_cast<std::size_t>(t) * resources_;
        for (std::size_t k = 0; k < resources_; ++k) {
            slot[k] -= demand[k];
            if (slot[k] < 0)
                throw std::logic_error("resource " + std::to_string(k) + " overloaded at t=" + std::to_string(t) +
                                       " by activity " + std::to_string(activity));
        }
    }
    dirty_until_ = std::max(dirty_until_, start + d);
}

// --- serial evaluation ------------------------------------------------------

ScheduleEvaluator::ScheduleEvaluator(const ProjectInstance& instance)
    : instance_(&instance), capacity_(instance), time_(instance), starts_(instance.activity_count(), 0) {}

template <typename State, typename EarliestFn>
Time ScheduleEvaluator::run(std::span<const ActivityId> order, State& state, EarliestFn&& earliest) {
    const ProjectInstance& inst = *instance_;
    state.reset();
    Time makespan = 0;
    for (ActivityId a : order) {
        Time es_prec = 0;
        for (ActivityId p : inst.predecessors(a))
            es_prec = std::max(es_prec, starts_[static_cast<std::size_t>(p)] + inst.duration(p));
        const Time d = inst.duration(a);
        Time start = es_prec;
        if (d > 0) {
            start = std::max(es_prec, earliest(a, es_prec));
            state.add(inst, a, start);
        }
        starts_[static_cast<std::size_t>(a)] = start;
        makespan = std::max(makespan, start + d);
    }
    return makespan;
}

Time ScheduleEvaluator::makespan(std::span<const ActivityId> order, EvalMode mode) {
    if (mode == EvalMode::kCapacity)
        return run(order, capacity_, [this](ActivityId a, Time) { return capacity_.earliest_start(*instance_, a); });
    return run(order, time_, [this](ActivityId a, Time es) { return time_.earliest_start(*instance_, a, es); });
}

Schedule ScheduleEvaluator::evaluate(std::span<const ActivityId> order, EvalMode mode) {
    Schedule s;
    s.makespan = makespan(order, mode);
    s.start_times = starts_;
    return s;
}

Schedule evaluate(const ProjectInstance& instance, const ActivityOrder& order, EvalMode mode) {
    ScheduleEvaluator evaluator(instance);
    return evaluator.evaluate(order.activities(), mode);
}

// --- feasibility oracle -----------------------------------------------------

FeasibilityReport check_schedule_feasible(const ProjectInstance& instance, const Schedule& schedule) {
    FeasibilityReport report;
    auto fail = [&](std::string why) {
        report.feasible = false;
        report.violations.push_back(std::move(why));
    };
    const std::size_t n = instance.activity_count();
    const auto& s = schedule.start_times;
    if (s.size() != n) {
        fail("schedule has " + std::to_string(s.size()) + " start times, expected " + std::to_string(n));
        return report;
    }
    Time horizon = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (s[i] < 0) fail("activity " + std::to_string(i) + " starts before 0");
        horizon = std::max(horizon, s[i] + instance.duration(static_cast<ActivityId>(i)));
    }
    if (!report.feasible) return report;
    if (s.front() != 0) fail("source activity does not start at 0");
    if (schedule.makespan != horizon)
        fail("makespan " + std::to_string(schedule.makespan) + " differs from last finish " + std::to_string(horizon));

    for (std::size_t i = 0; i < n; ++i) {
        const auto id = static_cast<ActivityId>(i);
        for (ActivityId j : instance.successors(id))
            if (s[static_cast<std::size_t>(j)] < s[i] + instance.duration(id))
                fail("precedence (" + std::to_string(i) + "," + std::to_string(j) + ") violated");
    }

    const std::size_t m = instance.resource_count();
    std::vector<long> used(static_cast<std::size_t>(horizon) * m, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto id = static_cast<ActivityId>(i);
        for (Time t = s[i]; t < s[i] + instance.duration(id); ++t)
            for (std::size_t k = 0; k < m; ++k) used[static_cast<std::size_t>(t) * m + k] += instance.requirement(id, k);
    }
    for (Time t = 0; t < horizon; ++t)
        for (std::size_t k = 0; k < m; ++k)
            if (used[static_cast<std::size_t>(t) * m + k] > instance.capacity(k))
                fail("resource " + std::to_string(k) + " overloaded at t=" + std::to_string(t) + " (" +
                     std::to_string(used[static_cast<std::size_t>(t) * m + k]) + " > " +
                     std::to_string(instance.capacity(k)) + ")");
    return report;
}

// --- forward-backward improvement -------------------------------------------

namespace {

// Activities sorted by key ascending; ties keep their relative position in
// `tie_order`, which must itself be topological for the relevant graph.
std::vector<ActivityId> sort_by_key(std::span<const ActivityId> tie_order, const std::vector<Time>& key) {
    std::vector<ActivityId> out(tie_order.begin(), tie_order.end());
    std::stable_sort(out.begin(), out.end(), [&](ActivityId a, ActivityId b) {
        return key[static_cast<std::size_t>(a)] < key[static_cast<std::size_t>(b)];
    });
    return out;
}

}  // namespace

std::pair<ActivityOrder, Schedule> forward_backward_improve(const ProjectInstance& instance,
                                                            const ActivityOrder& order, EvalMode mode) {
    const ProjectInstance reversed = instance.reversed();
    ScheduleEvaluator forward(instance);
    ScheduleEvaluator backward(reversed);
    const std::size_t n = instance.activity_count();

    ActivityOrder best_order = order;
    Schedule best = forward.evaluate(order.activities(), mode);

    std::vector<Time> key(n);
    while (true) {
        // Backward pass: latest finish first. Reversing a topological order
        // gives a valid tie order for the reversed graph.
        std::vector<ActivityId> tie(best_order.activities().rbegin(), best_order.activities().rend());
        for (std::size_t i = 0; i < n; ++i)
            key[i] = -(best.start_times[i] + instance.duration(static_cast<ActivityId>(i)));
        const auto back_order = sort_by_key(tie, key);
        backward.makespan(back_order, mode);
        const auto back_starts = backward.last_start_times();

        // Forward pass: earliest start in the backward schedule first, i.e.
        // latest reversed finish first.
        std::vector<ActivityId> back_tie(back_order.rbegin(), back_order.rend());
        for (std::size_t i = 0; i < n; ++i)
            key[i] = -(back_starts[i] + instance.duration(static_cast<ActivityId>(i)));
        const auto fwd_order = sort_by_key(back_tie, key);
        Schedule fwd = forward.evaluate(fwd_order, mode);
        if (fwd.makespan >= best.makespan) break;

        // Re-sort by the forward start times so the order reflects the schedule.
        ActivityOrder candidate(sort_by_key(fwd_order, fwd.start_times));
        Schedule resorted = forward.evaluate(candidate.activities(), mode);
        if (resorted.makespan <= fwd.makespan) {
            best_order = std::move(candidate);
            best = std::move(resorted);
        } else {
            best_order = ActivityOrder(fwd_order);
            best = std::move(fwd);
        }
    }
    return {std::move(best_order), std::move(best)};
}

}  // namespace rcpsp
