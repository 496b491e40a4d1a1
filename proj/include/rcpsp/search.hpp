#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rcpsp/evaluator.hpp"
#include "rcpsp/moves.hpp"
#include "rcpsp/tabu.hpp"

namespace rcpsp {

enum class ModeSelection { kTime, kCapacity, kAutoRule, kAutoMeasure };

struct SearchParams {
    std::size_t delta = 30;
    std::size_t tabu_length = 60;
    std::size_t phi_steps = 20;
    std::size_t phi_max = 3;
    std::size_t pool_size = 16;
    std::size_t workers = 1;
    std::size_t total_iterations = 10000;
    ModeSelection mode_selection = ModeSelection::kTime;
    /// Re-measure period for kAutoMeasure.
    std::size_t measure_window = 1000;
    std::uint64_t seed = 1;

    std::size_t block_iterations() const { return std::max<std::size_t>(1, total_iterations / workers); }

    /// Throws std::invalid_argument for zero-valued sizes.
    void validate() const;

    /// Per-size-class defaults: delta 30 for N <= 32 else 60, tabu list
    /// 60/250/600/800 for 32/62/92/122+ activities, 20 diversification
    /// swaps, 3 unimproved reads and 16 pooled solutions.
    static SearchParams defaults_for(std::size_t activity_count);
};

struct MoveCandidate {
    SwapMove move;
    Time makespan;
};

/// Lowest makespan among non-tabu moves and tabu moves beating
/// `global_best`; ties go to the lexicographically smallest move.
std::optional<MoveCandidate> select_best_move(std::span<const MoveCandidate> candidates, const TabuList& tabu,
                                              Time global_best);

/// Applies `steps` random feasible swaps drawn from the reduced neighborhood.
/// Steps with no feasible swap are skipped and counted in `skipped`.
ActivityOrder diversify(const ActivityOrder& order, std::size_t steps, std::size_t delta,
                        const ProjectInstance& instance, Rng& rng, std::size_t* skipped = nullptr);

/// One Tabu Search instance. Holds the current order, its tabu list and the
/// scratch state needed to evaluate neighbourhoods.
class SearchWorker {
public:
    SearchWorker(const ProjectInstance& instance, const SearchParams& params, std::size_t index, EvalMode mode);

    struct Step {
        bool moved = false;
        bool forced_tabu = false;
        Time makespan = 0;
    };

    /// Generate, filter, evaluate and apply the best reduced-neighbourhood move.
    Step step(Time global_best);

    /// Takes over an order and its tabu list; re-evaluates the makespan.
    void adopt(ActivityOrder order, TabuList tabu);

    /// Re-times both evaluators on the current neighbourhood.
    EvalMode remeasure();

    const ActivityOrder& order() const noexcept { return order_; }
    Time makespan() const noexcept { return makespan_; }
    const TabuList& tabu() const noexcept { return tabu_; }
    TabuList& tabu() noexcept { return tabu_; }
    Rng& rng() noexcept { return rng_; }
    EvalMode mode() const noexcept { return mode_; }
    void set_mode(EvalMode mode) noexcept { mode_ = mode; }
    ScheduleEvaluator& evaluator() noexcept { return evaluator_; }
    std::uint64_t evaluated_schedules() const noexcept { return evaluated_; }

private:
    const ProjectInstance* instance_;
    const SearchParams* params_;
    ScheduleEvaluator evaluator_;
    Rng rng_;
    EvalMode mode_;
    ActivityOrder order_;
    Time makespan_ = 0;
    TabuList tabu_;
    std::vector<SwapMove> all_moves_;
    std::vector<SwapMove> moves_;
    std::vector<MoveCandidate> candidates_;
    std::uint64_t evaluated_ = 0;
};

}  // namespace rcpsp
