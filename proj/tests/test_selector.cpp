#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "rcpsp/selector.hpp"
#include "support/fixtures.hpp"

using namespace rcpsp;
using namespace rcpsp::testing;

namespace {

SelectionRule parse_rules(const std::string& text) {
    std::istringstream in(text);
    return SelectionRule::parse(in);
}

InstanceFeatures features_with(double avg_capacity, double avg_duration) {
    InstanceFeatures f{};
    f.minCapacity = f.maxCapacity = f.avgCapacity = avg_capacity;
    f.avgDuration = avg_duration;
    return f;
}

ProjectInstance low_capacity_long_durations(std::mt19937_64& rng) {
    return random_instance(rng, {.middle = 60, .resources = 4, .max_duration = 60, .min_capacity = 1, .max_capacity = 4});
}

std::vector<ActivityOrder> sample_orders(const ProjectInstance& p, std::mt19937_64& rng, int count) {
    std::vector<ActivityOrder> out;
    for (int i = 0; i < count; ++i) out.emplace_back(random_topological_order(p, rng));
    return out;
}

}  // namespace

TEST_CASE("rule files parse") {
    const auto r = parse_rules(R"(# comment
maxCapacity <= 4 -> CAPACITY   # trailing comment
avgDuration > 2.5 -> time

default TIME
)");
    REQUIRE(r.predicates.size() == 2);
    CHECK(r.predicates[0].feature == Feature::kMaxCapacity);
    CHECK(r.predicates[0].op == Comparator::kLessEqual);
    CHECK(r.predicates[0].threshold == 4);
    CHECK(r.predicates[0].mode == EvalMode::kCapacity);
    CHECK(r.predicates[1].op == Comparator::kGreater);
    CHECK(r.predicates[1].threshold == 2.5);
    CHECK(r.predicates[1].mode == EvalMode::kTime);
    CHECK(r.default_mode == EvalMode::kTime);

    for (auto name : {"minCapacity", "avgCapacity", "maxCapacity", "avgDuration", "avgBranchFactor",
                      "criticalPathLength"})
        CHECK(feature_from_name(name).has_value());
    CHECK_FALSE(feature_from_name("width"));
}

TEST_CASE("rule file errors name the line") {
    auto fails_with = [](const std::string& text, const std::string& needle) {
        try {
            parse_rules(text);
        } catch (const std::runtime_error& e) {
            return std::string(e.what()).find(needle) != std::string::npos;
        }
        return false;
    };
    CHECK(fails_with("maxCapacity <= 4 -> CAPACITY\n", "missing 'default"));
    CHECK(fails_with("default TIME\nmaxCapacity <= 4 -> CAPACITY\n", "rules line 2: rules after the default"));
    CHECK(fails_with("width <= 4 -> CAPACITY\ndefault TIME\n", "rules line 1: unknown feature 'width'"));
    CHECK(fails_with("maxCapacity =< 4 -> CAPACITY\ndefault TIME\n", "unknown comparator"));
    CHECK(fails_with("maxCapacity <= four -> CAPACITY\ndefault TIME\n", "not a number"));
    CHECK(fails_with("maxCapacity <= inf -> CAPACITY\ndefault TIME\n", "finite"));
    CHECK(fails_with("maxCapacity <= 4 -> GPU\ndefault TIME\n", "unknown mode 'GPU'"));
    CHECK(fails_with("maxCapacity <= 4 CAPACITY\ndefault TIME\n", "expected"));
    CHECK(fails_with("default TIME extra\n", "trailing"));
    CHECK(fails_with("default\n", "default needs a mode"));
    CHECK_THROWS_WITH(SelectionRule::load("/nonexistent/r.rules"), doctest::Contains("/nonexistent/r.rules"));
}

TEST_CASE("shipped rule file matches the builtin rules") {
    const auto file = SelectionRule::load(RCPSP_RULES_FILE);
    const auto builtin = SelectionRule::builtin();
    REQUIRE(file.predicates.size() == builtin.predicates.size());
    for (std::size_t i = 0; i < file.predicates.size(); ++i) {
        CHECK(file.predicates[i].feature == builtin.predicates[i].feature);
        CHECK(file.predicates[i].op == builtin.predicates[i].op);
        CHECK(file.predicates[i].threshold == builtin.predicates[i].threshold);
        CHECK(file.predicates[i].mode == builtin.predicates[i].mode);
    }
    CHECK(file.default_mode == builtin.default_mode);
}

TEST_CASE("static decisions") {
    CHECK(decide_static(features_with(10, 3), parse_rules("default TIME\n")) == EvalMode::kTime);
    CHECK(decide_static(features_with(10, 3), parse_rules("default CAPACITY\n")) == EvalMode::kCapacity);
    const auto r = parse_rules("avgCapacity >= 20 -> TIME\ndefault CAPACITY\n");
    CHECK(decide_static(features_with(25, 3), r) == EvalMode::kTime);
    CHECK(decide_static(features_with(15, 3), r) == EvalMode::kCapacity);

    const auto first_wins = parse_rules("avgDuration >= 1 -> CAPACITY\navgDuration >= 1 -> TIME\ndefault TIME\n");
    CHECK(decide_static(features_with(5, 5), first_wins) == EvalMode::kCapacity);

    std::mt19937_64 rng(1);
    const auto builtin = SelectionRule::builtin();
    for (int i = 0; i < 20; ++i)
        CHECK(decide_static(extract_features(low_capacity_long_durations(rng)), builtin) == EvalMode::kCapacity);
    CHECK(decide_static(features_with(70, 2), builtin) == EvalMode::kTime);
}

TEST_CASE("dynamic decision picks the faster mode") {
    std::mt19937_64 rng(2);
    const auto p = random_instance(rng, {.middle = 30});
    ScheduleEvaluator ev(p);
    const auto sample = sample_orders(p, rng, 16);
    const auto d = decide_dynamic(ev, sample);
    CHECK(d.capacity_seconds > 0);
    CHECK(d.time_seconds > 0);
    CHECK(d.mode == (d.capacity_seconds < d.time_seconds ? EvalMode::kCapacity : EvalMode::kTime));
}

TEST_CASE("low capacities and long activities favour the capacity-indexed evaluator") {
    std::mt19937_64 rng(3);
    int capacity_wins = 0, calls = 0;
    for (int i = 0; i < 5; ++i) {
        const auto p = low_capacity_long_durations(rng);
        ScheduleEvaluator ev(p);
        const auto sample = sample_orders(p, rng, 32);
        for (int rep = 0; rep < 4; ++rep, ++calls) {
            const auto d = decide_dynamic(ev, sample);
            MESSAGE("time/capacity ratio " << d.time_seconds / d.capacity_seconds);
            if (d.mode == EvalMode::kCapacity) ++capacity_wins;
        }
    }
    CHECK(capacity_wins * 10 >= calls * 9);
}
