#pragma once

#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rcpsp/evaluator.hpp"

namespace rcpsp {

enum class Feature { kMinCapacity, kAvgCapacity, kMaxCapacity, kAvgDuration, kAvgBranchFactor, kCriticalPathLength };
enum class Comparator { kLess, kLessEqual, kGreater, kGreaterEqual, kEqual };

struct RulePredicate {
    Feature feature;
    Comparator op;
    double threshold;
    EvalMode mode;
};

/**
 * Ordered decision list: the first predicate that matches picks the mode,
 * otherwise the default applies.
 *
 * Text form, one rule per line, `#` starts a comment:
 *
 *     maxCapacity <= 4 -> CAPACITY
 *     avgDuration >= 30 -> CAPACITY
 *     default TIME
 */
struct SelectionRule {
    std::vector<RulePredicate> predicates;
    EvalMode default_mode = EvalMode::kTime;

    /// Throws std::runtime_error naming the offending line.
    static SelectionRule parse(std::istream& in);
    static SelectionRule load(const std::string& path);
    /// Rules shipped with the solver (rules/default.rules).
    static SelectionRule builtin();
};

EvalMode decide_static(const InstanceFeatures& features, const SelectionRule& rules);

struct DynamicDecision {
    EvalMode mode = EvalMode::kTime;
    double capacity_seconds = 0;
    double time_seconds = 0;
};

/// Times the same batch of evaluations under both modes and returns the
/// faster one. Each mode runs `repetitions` times; the minimum is kept.
DynamicDecision decide_dynamic(ScheduleEvaluator& evaluator, std::span<const ActivityOrder> sample,
                               int repetitions = 3);

std::optional<Feature> feature_from_name(std::string_view name);
std::optional<EvalMode> mode_from_name(std::string_view name);

}  // namespace rcpsp
