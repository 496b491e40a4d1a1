#include "rcpsp/search.hpp"

#include <cassert>
#include <stdexcept>

#include "rcpsp/selector.hpp"

namespace rcpsp {

void SearchParams::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(what);
    };
    require(delta > 0, "delta must be positive");
    require(tabu_length > 0, "tabu list length must be positive");
    require(phi_max > 0, "phi_max must be positive");
    require(pool_size > 0, "working set size must be positive");
    require(workers > 0, "worker count must be positive");
    require(total_iterations > 0, "iteration budget must be positive");
    require(measure_window > 0, "measurement window must be positive");
}

SearchParams SearchParams::defaults_for(std::size_t activity_count) {
    SearchParams p;
    p.delta = activity_count <= 32 ? 30 : 60;
    if (activity_count <= 32)
        p.tabu_length = 60;
    else if (activity_count <= 62)
        p.tabu_length = 250;
    else if (activity_count <= 92)
        p.tabu_length = 600;
    else
        p.tabu_length = 800;
    p.phi_steps = 20;
    p.phi_max = 3;
    p.pool_size = 16;
    return p;
}

std::optional<MoveCandidate> select_best_move(std::span<const MoveCandidate> candidates, const TabuList& tabu,
                                              Time global_best) {
    std::optional<MoveCandidate> best;
    for (const auto& c : candidates) {
        if (tabu.is_tabu(c.move) && c.makespan >= global_best) continue;
        if (!best || c.makespan < best->makespan || (c.makespan == best->makespan && c.move < best->move)) best = c;
    }
    return best;
}

ActivityOrder diversify(const ActivityOrder& order, std::size_t steps, std::size_t delta,
                        const ProjectInstance& instance, Rng& rng, std::size_t* skipped) {
    ActivityOrder out = order;
    const auto all = generate_reduced_neighborhood(instance.activity_count(), delta);
    std::vector<SwapMove> moves;
    for (std::size_t step = 0; step < steps; ++step) {
        moves = all;
        filter_infeasible(moves, out, instance);
        if (moves.empty()) {
            if (skipped) ++*skipped;
            continue;
        }
        std::uniform_int_distribution<std::size_t> pick(0, moves.size() - 1);
        const SwapMove m = moves[pick(rng)];
        out.swap_positions(m.u, m.v);
    }
    return out;
}

SearchWorker::SearchWorker(const ProjectInstance& instance, const SearchParams& params, std::size_t index,
                           EvalMode mode)
    : instance_(&instance),
      params_(&params),
      evaluator_(instance),
      rng_(params.seed ^ static_cast<std::uint64_t>(index)),
      mode_(mode),
      tabu_(instance.activity_count(), params.tabu_length),
      all_moves_(generate_reduced_neighborhood(instance.activity_count(), params.delta)) {
    moves_.reserve(all_moves_.size());
    candidates_.reserve(all_moves_.size());
}

void SearchWorker::adopt(ActivityOrder order, TabuList tabu) {
    order_ = std::move(order);
    tabu_ = std::move(tabu);
    makespan_ = evaluator_.makespan(order_.activities(), mode_);
    ++evaluated_;
}

SearchWorker::Step SearchWorker::step(Time global_best) {
    moves_.assign(all_moves_.begin(), all_moves_.end());
    filter_infeasible(moves_, order_, *instance_);

    candidates_.clear();
    for (const SwapMove m : moves_) {
        order_.swap_positions(m.u, m.v);
        candidates_.push_back({m, evaluator_.makespan(order_.activities(), mode_)});
        order_.swap_positions(m.u, m.v);
    }
    evaluated_ += candidates_.size();

    Step result;
    result.makespan = makespan_;
    if (candidates_.empty()) return result;

    auto chosen = select_best_move(candidates_, tabu_, global_best);
    if (!chosen) {
        // Everything is tabu and nothing aspirates: take the best tabu move
        // rather than stall.
        chosen = candidates_.front();
        for (const auto& c : candidates_)
            if (c.makespan < chosen->makespan || (c.makespan == chosen->makespan && c.move < chosen->move)) chosen = c;
        result.forced_tabu = true;
    }
    order_.swap_positions(chosen->move.u, chosen->move.v);
    makespan_ = chosen->makespan;
    tabu_.add_move(chosen->move);
    assert(is_topological(*instance_, order_.activities()));

    result.moved = true;
    result.makespan = makespan_;
    return result;
}

EvalMode SearchWorker::remeasure() {
    moves_.assign(all_moves_.begin(), all_moves_.end());
    filter_infeasible(moves_, order_, *instance_);
    std::vector<ActivityOrder> sample;
    sample.push_back(order_);
    for (std::size_t i = 0; i < moves_.size() && sample.size() < 32; ++i) sample.push_back(apply_swap(order_, moves_[i]));
    mode_ = decide_dynamic(evaluator_, sample).mode;
    return mode_;
}

}  // namespace rcpsp
