#pragma once

// Shared test instances, generators and brute-force oracles. Nothing here
// calls the scheduling code under test.

#include <algorithm>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "rcpsp/instance.hpp"
#include "rcpsp/moves.hpp"

namespace rcpsp::testing {

#ifndef RCPSP_TEST_DATA_DIR
#define RCPSP_TEST_DATA_DIR "tests/data"
#endif

inline std::string data_path(const std::string& file) { return std::string(RCPSP_TEST_DATA_DIR) + "/" + file; }

/// The 12-activity, 2-resource worked example (capacities 6 and 6).
inline ProjectInstance example_instance(std::vector<Units> capacities = {6, 6}) {
    std::vector<Time> d{0, 4, 3, 5, 5, 3, 2, 4, 2, 3, 4, 0};
    std::vector<Units> r{0, 0, 5, 3, 2, 1, 3, 2, 2, 3, 3, 4, 4, 1, 2, 2, 4, 5, 1, 2, 2, 2, 0, 0};
    std::vector<std::vector<ActivityId>> succ{{1, 2}, {3, 6}, {4, 5}, {5, 10}, {7},  {8, 9},
                                              {7, 9}, {8, 10}, {11},  {11},    {11}, {}};
    return ProjectInstance("example", d, std::move(capacities), r, succ);
}

inline const std::vector<ActivityId> kExampleOrder{0, 1, 2, 3, 4, 6, 5, 7, 9, 10, 8, 11};

inline ProjectInstance dummy_only(Units capacity = 1) {
    return ProjectInstance("dummy", {0, 0}, {capacity}, {0, 0}, {{1}, {}});
}

/// 0 -> a -> b -> 3 with d_a = 3, d_b = 7.
inline ProjectInstance chain_instance() {
    return ProjectInstance("chain", {0, 3, 7, 0}, {2}, {0, 1, 1, 0}, {{1}, {2}, {3}, {}});
}

/// Capacity 2: P(d=5, r=0) -> A(d=5, r=2); B(d=3, r=2) independent.
/// Activities: 0 source, 1 P, 2 A, 3 B, 4 sink.
inline ProjectInstance gap_instance() {
    return ProjectInstance("gap", {0, 5, 5, 3, 0}, {2}, {0, 0, 2, 2, 0}, {{1, 3}, {2}, {4}, {4}, {}});
}

/// Middle activities with no edges among them.
inline ProjectInstance parallel_instance(std::size_t middle, Units capacity = 3) {
    const std::size_t n = middle + 2;
    std::vector<Time> d(n, 0);
    std::vector<Units> r(n, 0);
    std::vector<std::vector<ActivityId>> succ(n);
    for (std::size_t i = 1; i <= middle; ++i) {
        d[i] = static_cast<Time>(1 + i % 4);
        r[i] = static_cast<Units>(1 + i % capacity);
        succ[0].push_back(static_cast<ActivityId>(i));
        succ[i].push_back(static_cast<ActivityId>(n - 1));
    }
    return ProjectInstance("parallel", d, {capacity}, r, succ);
}

/// Same instance with every capacity large enough that resources never bind.
inline ProjectInstance unlimited(const ProjectInstance& inst) {
    const std::size_t n = inst.activity_count(), m = inst.resource_count();
    std::vector<Units> r;
    std::vector<std::vector<ActivityId>> succ;
    Units total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < m; ++k) {
            r.push_back(inst.requirement(static_cast<ActivityId>(i), k));
            total += r.back();
        }
        auto s = inst.successors(static_cast<ActivityId>(i));
        succ.emplace_back(s.begin(), s.end());
    }
    std::vector<Time> d(inst.durations().begin(), inst.durations().end());
    return ProjectInstance(inst.name() + "-unlimited", d, std::vector<Units>(m, std::max<Units>(total, 1)), r, succ);
}

struct GeneratorSpec {
    std::size_t middle = 30;
    std::size_t resources = 4;
    Time max_duration = 10;
    Units min_capacity = 4;
    Units max_capacity = 20;
    double edge_probability = 0.08;
    double demand_probability = 0.6;
};

/// Random valid instance: edges only go from lower to higher ids, every
/// middle activity gets at least one predecessor and one successor.
inline ProjectInstance random_instance(std::mt19937_64& rng, const GeneratorSpec& spec = {}) {
    const std::size_t n = spec.middle + 2;
    const std::size_t m = spec.resources;
    std::uniform_int_distribution<Time> dur(1, spec.max_duration);
    std::uniform_int_distribution<Units> cap(spec.min_capacity, spec.max_capacity);
    std::bernoulli_distribution edge(spec.edge_probability), uses(spec.demand_probability);

    std::vector<Units> capacities(m);
    for (auto& c : capacities) c = cap(rng);
    std::vector<Time> d(n, 0);
    std::vector<Units> r(n * m, 0);
    std::vector<std::vector<ActivityId>> succ(n);
    std::vector<bool> has_pred(n, false);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        d[i] = dur(rng);
        for (std::size_t k = 0; k < m; ++k)
            if (uses(rng)) r[i * m + k] = std::uniform_int_distribution<Units>(1, capacities[k])(rng);
        for (std::size_t j = i + 1; j + 1 < n; ++j)
            if (edge(rng)) {
                succ[i].push_back(static_cast<ActivityId>(j));
                has_pred[j] = true;
            }
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!has_pred[i]) succ[0].push_back(static_cast<ActivityId>(i));
        if (succ[i].empty()) succ[i].push_back(static_cast<ActivityId>(n - 1));
    }
    if (n == 2) succ[0].push_back(1);
    return ProjectInstance("random", d, capacities, r, succ);
}

/// Uniformly chooses among ready activities at each step.
inline std::vector<ActivityId> random_topological_order(const ProjectInstance& inst, std::mt19937_64& rng) {
    const std::size_t n = inst.activity_count();
    std::vector<std::size_t> missing(n);
    for (std::size_t i = 0; i < n; ++i) missing[i] = inst.predecessors(static_cast<ActivityId>(i)).size();
    std::vector<ActivityId> ready{0}, order;
    while (!ready.empty()) {
        std::uniform_int_distribution<std::size_t> pick(0, ready.size() - 1);
        const std::size_t at = pick(rng);
        const ActivityId a = ready[at];
        ready.erase(ready.begin() + static_cast<std::ptrdiff_t>(at));
        order.push_back(a);
        for (ActivityId s : inst.successors(a))
            if (--missing[static_cast<std::size_t>(s)] == 0) ready.push_back(s);
    }
    return order;
}

/// Plain position-map check, independent of is_topological().
inline bool respects_precedences(const ProjectInstance& inst, const std::vector<ActivityId>& order) {
    std::vector<std::size_t> pos(inst.activity_count());
    for (std::size_t p = 0; p < order.size(); ++p) pos[static_cast<std::size_t>(order[p])] = p;
    for (std::size_t i = 0; i < inst.activity_count(); ++i)
        for (ActivityId j : inst.successors(static_cast<ActivityId>(i)))
            if (pos[i] >= pos[static_cast<std::size_t>(j)]) return false;
    return true;
}

/// Textbook serial SGS over a per-slot free-capacity profile.
inline Time reference_sgs(const ProjectInstance& inst, const std::vector<ActivityId>& order) {
    const std::size_t n = inst.activity_count(), m = inst.resource_count();
    Time horizon = 0;
    for (Time d : inst.durations()) horizon += d;
    std::vector<std::vector<Units>> free(m, std::vector<Units>(static_cast<std::size_t>(horizon) + 1));
    for (std::size_t k = 0; k < m; ++k) std::fill(free[k].begin(), free[k].end(), inst.capacity(k));
    std::vector<Time> s(n, 0);
    Time makespan = 0;
    for (ActivityId a : order) {
        Time t = 0;
        for (ActivityId p : inst.predecessors(a)) t = std::max(t, s[static_cast<std::size_t>(p)] + inst.duration(p));
        auto fits = [&](Time at) {
            for (Time x = at; x < at + inst.duration(a); ++x)
                for (std::size_t k = 0; k < m; ++k)
                    if (free[k][static_cast<std::size_t>(x)] < inst.requirement(a, k)) return false;
            return true;
        };
        while (!fits(t)) ++t;
        s[static_cast<std::size_t>(a)] = t;
        for (Time x = t; x < t + inst.duration(a); ++x)
            for (std::size_t k = 0; k < m; ++k) free[k][static_cast<std::size_t>(x)] -= inst.requirement(a, k);
        makespan = std::max(makespan, t + inst.duration(a));
    }
    return makespan;
}

/// Visits every linear extension of the precedence graph.
inline void for_each_linear_extension(const ProjectInstance& inst,
                                      const std::function<void(const std::vector<ActivityId>&)>& visit) {
    const std::size_t n = inst.activity_count();
    std::vector<std::size_t> missing(n);
    for (std::size_t i = 0; i < n; ++i) missing[i] = inst.predecessors(static_cast<ActivityId>(i)).size();
    std::vector<bool> used(n, false);
    std::vector<ActivityId> order;
    std::function<void()> rec = [&] {
        if (order.size() == n) {
            visit(order);
            return;
        }
        for (std::size_t a = 0; a < n; ++a) {
            if (used[a] || missing[a] != 0) continue;
            used[a] = true;
            order.push_back(static_cast<ActivityId>(a));
            for (ActivityId s : inst.successors(static_cast<ActivityId>(a))) --missing[static_cast<std::size_t>(s)];
            rec();
            for (ActivityId s : inst.successors(static_cast<ActivityId>(a))) ++missing[static_cast<std::size_t>(s)];
            order.pop_back();
            used[a] = false;
        }
    };
    rec();
}

/// Optimal makespan by serial SGS over all linear extensions (serial SGS
/// reaches every active schedule, and some active schedule is optimal).
inline Time brute_force_optimum(const ProjectInstance& inst) {
    Time best = std::numeric_limits<Time>::max();
    for_each_linear_extension(inst, [&](const std::vector<ActivityId>& o) { best = std::min(best, reference_sgs(inst, o)); });
    return best;
}

}  // namespace rcpsp::testing
