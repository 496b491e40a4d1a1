#include "rcpsp/cooperation.hpp"

#include <chrono>
#include <cmath>
#include <thread>

namespace rcpsp {

std::size_t assigned_iterations(Time entry_makespan, std::size_t iteration_counter, std::size_t block_iterations,
                                Time global_best) {
    const double block = static_cast<double>(block_iterations);
    double quality = 0.0;
    if (global_best > 0)
        quality = 0.8 * std::exp(-100.0 * (static_cast<double>(entry_makespan) / static_cast<double>(global_best) - 1.0));
    else if (entry_makespan == global_best)
        quality = 0.8;
    const double intactness = 0.2 * std::exp(-4.0 * static_cast<double>(iteration_counter) / block);
    const double assigned = std::floor(block / 5.0 * (quality + intactness));
    return std::max<std::size_t>(1, static_cast<std::size_t>(assigned));
}

WorkingSet::WorkingSet(const ProjectInstance& instance, const SearchParams& params,
                       std::vector<WorkingSetEntry> entries)
    : instance_(&instance), params_(&params), entries_(std::move(entries)) {
    if (entries_.empty()) throw std::invalid_argument("working set needs at least one entry");
    refresh_best_locked();
}

void WorkingSet::refresh_best_locked() {
    best_index_ = 0;
    for (std::size_t i = 1; i < entries_.size(); ++i)
        if (entries_[i].schedule.makespan < entries_[best_index_].schedule.makespan) best_index_ = i;
    global_best_.store(entries_[best_index_].schedule.makespan, std::memory_order_release);
}

void WorkingSet::write_back_locked(const WriteBack& back) {
    auto& entry = entries_.at(back.index);
    entry.iteration_counter += back.iterations_spent;
    if (back.improvement && back.improvement->second.makespan < entry.schedule.makespan) {
        entry.order = back.improvement->first;
        entry.schedule = back.improvement->second;
        entry.tabu = back.tabu;
        entry.reads_without_improvement = 0;
        if (entry.schedule.makespan < global_best_.load(std::memory_order_relaxed)) {
            best_index_ = back.index;
            global_best_.store(entry.schedule.makespan, std::memory_order_release);
        }
    }
}

void WorkingSet::write_back(const WriteBack& back) {
    std::lock_guard lock(mutex_);
    write_back_locked(back);
}

Adoption WorkingSet::exchange(const WriteBack* back, Rng& rng) {
    std::lock_guard lock(mutex_);
    if (back) write_back_locked(*back);

    Adoption a;
    a.index = cursor_;
    cursor_ = (cursor_ + 1) % entries_.size();
    auto& entry = entries_[a.index];
    ++entry.reads_without_improvement;
    a.order = entry.order;
    a.stored_makespan = entry.schedule.makespan;
    a.tabu = entry.tabu;
    if (entry.reads_without_improvement > params_->phi_max) {
        a.order = diversify(entry.order, params_->phi_steps, params_->delta, *instance_, rng);
        a.diversified = true;
        entry.reads_without_improvement = 0;
    }
    a.global_best = global_best();
    a.budget = assigned_iterations(entry.schedule.makespan, entry.iteration_counter, params_->block_iterations(),
                                   a.global_best);
    return a;
}

std::pair<ActivityOrder, Schedule> WorkingSet::best() const {
    std::lock_guard lock(mutex_);
    return {entries_[best_index_].order, entries_[best_index_].schedule};
}

std::vector<WorkingSetEntry> WorkingSet::snapshot() const {
    std::lock_guard lock(mutex_);
    return entries_;
}

bool WorkingSet::pool_min_holds() const {
    std::lock_guard lock(mutex_);
    Time lowest = entries_.front().schedule.makespan;
    for (const auto& e : entries_) lowest = std::min(lowest, e.schedule.makespan);
    return lowest == global_best();
}

std::vector<WorkingSetEntry> initialize_working_set(const ProjectInstance& instance, const SearchParams& params,
                                                    EvalMode mode, Rng& rng) {
    std::vector<WorkingSetEntry> entries;
    entries.reserve(params.pool_size);
    for (std::size_t k = 0; k < params.pool_size; ++k) {
        WorkingSetEntry e;
        ActivityOrder order = initial_order(instance, true, rng);
        if (k % 2 == 0) {
            std::tie(e.order, e.schedule) = forward_backward_improve(instance, order, mode);
        } else {
            e.schedule = evaluate(instance, order, mode);
            e.order = std::move(order);
        }
        e.tabu = TabuList(instance.activity_count(), params.tabu_length);
        entries.push_back(std::move(e));
    }
    return entries;
}

namespace {

bool claim_iteration(RunControl& control) {
    if (control.stop.load(std::memory_order_relaxed)) return false;
    if (control.consumed.fetch_add(1, std::memory_order_relaxed) >= control.total_iterations) {
        control.stop.store(true, std::memory_order_relaxed);
        return false;
    }
    return true;
}

}  // namespace

WorkerOutcome run_worker(SearchWorker& worker, const SearchParams& params, WorkingSet& pool, RunControl& control,
                         std::vector<Time>* trace) {
    WorkerOutcome out;
    const bool measure = params.mode_selection == ModeSelection::kAutoMeasure;
    const std::uint64_t evaluated_before = worker.evaluated_schedules();

    Adoption adopted = pool.exchange(nullptr, worker.rng());
    worker.adopt(std::move(adopted.order), std::move(adopted.tabu));
    std::size_t spent = 0;
    Time global_view = adopted.global_best;

    while (claim_iteration(control)) {
        if (measure && out.iterations % params.measure_window == 0) worker.remeasure();

        const auto step = worker.step(global_view);
        ++out.iterations;
        ++spent;
        if (step.forced_tabu) ++out.forced_tabu;
        if (trace) trace->push_back(step.makespan);

        const bool improved = worker.makespan() < adopted.stored_makespan;
        if (!improved && spent <= adopted.budget) continue;

        WriteBack back;
        back.index = adopted.index;
        back.iterations_spent = spent;
        if (improved) {
            back.improvement.emplace(worker.order(), worker.evaluator().evaluate(worker.order().activities(), worker.mode()));
            ++out.evaluated;
            back.tabu = worker.tabu();
        }
        if (control.stop.load(std::memory_order_relaxed) ||
            control.consumed.load(std::memory_order_relaxed) >= control.total_iterations) {
            pool.write_back(back);
            spent = 0;
            break;
        }
        adopted = pool.exchange(&back, worker.rng());
        ++out.exchanges;
        if (adopted.global_best <= control.lower_bound) control.stop.store(true, std::memory_order_relaxed);
        worker.adopt(std::move(adopted.order), std::move(adopted.tabu));
        spent = 0;
        global_view = adopted.global_best;
    }
    if (spent > 0) {
        WriteBack back;
        back.index = adopted.index;
        back.iterations_spent = spent;
        pool.write_back(back);
    }
    if (pool.global_best() <= control.lower_bound) control.stop.store(true, std::memory_order_relaxed);
    out.evaluated += worker.evaluated_schedules() - evaluated_before;
    return out;
}

RunStats orchestrate(const ProjectInstance& instance, const SearchParams& params, const RunOptions& options) {
    params.validate();
    const auto started = std::chrono::steady_clock::now();
    Rng rng(params.seed);

    RunStats stats;
    stats.workers = params.workers;

    EvalMode mode = EvalMode::kTime;
    switch (params.mode_selection) {
        case ModeSelection::kTime: mode = EvalMode::kTime; break;
        case ModeSelection::kCapacity: mode = EvalMode::kCapacity; break;
        case ModeSelection::kAutoRule: {
            const SelectionRule rules = options.rules ? *options.rules : SelectionRule::builtin();
            mode = decide_static(extract_features(instance), rules);
            break;
        }
        case ModeSelection::kAutoMeasure: {
            ScheduleEvaluator probe(instance);
            Rng sample_rng(params.seed);
            std::vector<ActivityOrder> sample;
            for (int i = 0; i < 16; ++i) sample.push_back(initial_order(instance, true, sample_rng));
            mode = decide_dynamic(probe, sample).mode;
            break;
        }
    }
    stats.initial_mode = mode;

    WorkingSet pool(instance, params, initialize_working_set(instance, params, mode, rng));
    stats.evaluated_schedules = params.pool_size;

    RunControl control;
    control.total_iterations = params.total_iterations;
    control.lower_bound = critical_path_length(instance);
    if (pool.global_best() <= control.lower_bound) control.stop = true;

    std::vector<SearchWorker> workers;
    workers.reserve(params.workers);
    for (std::size_t b = 0; b < params.workers; ++b) workers.emplace_back(instance, params, b, mode);

    std::vector<WorkerOutcome> outcomes(params.workers);
    if (params.workers == 1) {
        outcomes[0] = run_worker(workers[0], params, pool, control, options.record_trace ? &stats.trace : nullptr);
    } else {
        std::vector<std::jthread> threads;
        threads.reserve(params.workers);
        for (std::size_t b = 0; b < params.workers; ++b)
            threads.emplace_back([&, b] { outcomes[b] = run_worker(workers[b], params, pool, control); });
    }

    for (const auto& o : outcomes) {
        stats.iterations += o.iterations;
        stats.evaluated_schedules += o.evaluated;
        stats.forced_tabu_moves += o.forced_tabu;
        stats.exchanges += o.exchanges;
    }
    std::tie(stats.best_order, stats.best) = pool.best();
    stats.stopped_at_lower_bound = stats.best.makespan <= control.lower_bound;
    stats.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return stats;
}

}  // namespace rcpsp
