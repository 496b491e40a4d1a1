#include "rcpsp/selector.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace rcpsp {

namespace {

constexpr std::pair<std::string_view, Feature> kFeatureNames[] = {
    {"minCapacity", Feature::kMinCapacity},       {"avgCapacity", Feature::kAvgCapacity},
    {"maxCapacity", Feature::kMaxCapacity},       {"avgDuration", Feature::kAvgDuration},
    {"avgBranchFactor", Feature::kAvgBranchFactor}, {"criticalPathLength", Feature::kCriticalPathLength},
};

constexpr std::pair<std::string_view, Comparator> kComparatorNames[] = {
    {"<=", Comparator::kLessEqual}, {">=", Comparator::kGreaterEqual}, {"<", Comparator::kLess},
    {">", Comparator::kGreater},    {"==", Comparator::kEqual},
};

// Capacity-indexed updates cost O(R_k) per resource, time-indexed scans cost
// O(d_i) slots, so small capacities and long activities favour CAPACITY.
constexpr std::string_view kBuiltinRules = R"(# builtin evaluator selection rules
avgCapacity <= 22 -> CAPACITY
avgDuration >= 8 -> CAPACITY
avgCapacity >= 50 -> TIME
avgDuration >= 4.5 -> CAPACITY
default TIME
)";

// Keeps timed evaluations from being optimised away.
volatile Time g_makespan_sink = 0;

double feature_value(const InstanceFeatures& f, Feature feature) {
    switch (feature) {
        case Feature::kMinCapacity: return f.minCapacity;
        case Feature::kAvgCapacity: return f.avgCapacity;
        case Feature::kMaxCapacity: return f.maxCapacity;
        case Feature::kAvgDuration: return f.avgDuration;
        case Feature::kAvgBranchFactor: return f.avgBranchFactor;
        case Feature::kCriticalPathLength: return f.criticalPathLength;
    }
    return 0;
}

bool compare(double lhs, Comparator op, double rhs) {
    switch (op) {
        case Comparator::kLess: return lhs < rhs;
        case Comparator::kLessEqual: return lhs <= rhs;
        case Comparator::kGreater: return lhs > rhs;
        case Comparator::kGreaterEqual: return lhs >= rhs;
        case Comparator::kEqual: return lhs == rhs;
    }
    return false;
}

}  // namespace

std::optional<Feature> feature_from_name(std::string_view name) {
    for (auto [text, f] : kFeatureNames)
        if (text == name) return f;
    return std::nullopt;
}

std::optional<EvalMode> mode_from_name(std::string_view name) {
    if (name == "CAPACITY" || name == "capacity") return EvalMode::kCapacity;
    if (name == "TIME" || name == "time") return EvalMode::kTime;
    return std::nullopt;
}

SelectionRule SelectionRule::parse(std::istream& in) {
    SelectionRule rules;
    bool have_default = false;
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& why) {
        throw std::runtime_error("rules line " + std::to_string(line_no) + ": " + why);
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream tokens(line);
        std::string first;
        if (!(tokens >> first)) continue;
        if (have_default) fail("rules after the default line");
        if (first == "default") {
            std::string mode;
            if (!(tokens >> mode)) fail("default needs a mode");
            auto m = mode_from_name(mode);
            if (!m) fail("unknown mode '" + mode + "'");
            rules.default_mode = *m;
            have_default = true;
        } else {
            auto feature = feature_from_name(first);
            if (!feature) fail("unknown feature '" + first + "'");
            std::string op, value, arrow, mode;
            if (!(tokens >> op >> value >> arrow >> mode) || arrow != "->")
                fail("expected '<feature> <op> <value> -> <CAPACITY|TIME>'");
            std::optional<Comparator> cmp;
            for (auto [text, c] : kComparatorNames)
                if (text == op) cmp = c;
            if (!cmp) fail("unknown comparator '" + op + "'");
            double threshold = 0;
            try {
                std::size_t used = 0;
                threshold = std::stod(value, &used);
                if (used != value.size()) throw std::invalid_argument(value);
            } catch (const std::exception&) {
                fail("threshold '" + value + "' is not a number");
            }
            if (!std::isfinite(threshold)) fail("threshold must be finite");
            auto m = mode_from_name(mode);
            if (!m) fail("unknown mode '" + mode + "'");
            rules.predicates.push_back({*feature, *cmp, threshold, *m});
        }
        std::string extra;
        if (tokens >> extra) fail("unexpected trailing token '" + extra + "'");
    }
    if (!have_default) fail("missing 'default <mode>' line");
    return rules;
}

SelectionRule SelectionRule::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open rules file '" + path + "'");
    return parse(in);
}

SelectionRule SelectionRule::builtin() {
    std::istringstream in{std::string(kBuiltinRules)};
    return parse(in);
}

EvalMode decide_static(const InstanceFeatures& features, const SelectionRule& rules) {
    for (const auto& p : rules.predicates)
        if (compare(feature_value(features, p.feature), p.op, p.threshold)) return p.mode;
    return rules.default_mode;
}

DynamicDecision decide_dynamic(ScheduleEvaluator& evaluator, std::span<const ActivityOrder> sample,
                               int repetitions) {
    using Clock = std::chrono::steady_clock;
    auto time_mode = [&](EvalMode mode) {
        double best = std::numeric_limits<double>::infinity();
        for (int rep = 0; rep < std::max(1, repetitions); ++rep) {
            const auto start = Clock::now();
            Time sink = 0;
            for (const auto& order : sample) sink += evaluator.makespan(order.activities(), mode);
            const std::chrono::duration<double> took = Clock::now() - start;
            best = std::min(best, took.count());
            g_makespan_sink = sink;
        }
        return best;
    };
    DynamicDecision d;
    d.capacity_seconds = time_mode(EvalMode::kCapacity);
    d.time_seconds = time_mode(EvalMode::kTime);
    d.mode = d.capacity_seconds < d.time_seconds ? EvalMode::kCapacity : EvalMode::kTime;
    return d;
}

}  // namespace rcpsp
