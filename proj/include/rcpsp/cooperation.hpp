#pragma once

#include <atomic>
#include <cstdint>
#include <mutex>
#include <optional>
#include <vector>

#include "rcpsp/evaluator.hpp"
#include "rcpsp/search.hpp"
#include "rcpsp/selector.hpp"

namespace rcpsp {

struct WorkingSetEntry {
    ActivityOrder order;
    Schedule schedule;
    TabuList tabu;
    /// Iterations invested in this solution so far.
    std::size_t iteration_counter = 0;
    std::size_t reads_without_improvement = 0;
};

/// Worker result handed back during an exchange.
struct WriteBack {
    std::size_t index = 0;
    std::size_t iterations_spent = 0;
    /// Set when the worker beat the entry it adopted.
    std::optional<std::pair<ActivityOrder, Schedule>> improvement;
    TabuList tabu;
};

struct Adoption {
    std::size_t index = 0;
    ActivityOrder order;
    /// Makespan stored with the entry (before any diversification).
    Time stored_makespan = 0;
    TabuList tabu;
    std::size_t budget = 0;
    bool diversified = false;
    Time global_best = 0;
};

/// floor(I_block/5 * (0.8 exp(-100 (C/C* - 1)) + 0.2 exp(-4 IC/I_block))),
/// at least 1.
std::size_t assigned_iterations(Time entry_makespan, std::size_t iteration_counter, std::size_t block_iterations,
                                Time global_best);

/**
 * Shared pool of solutions. exchange() is the only mutating entry point and
 * runs under one lock; global_best() may be read without it and lags by at
 * most one transaction.
 */
class WorkingSet {
public:
    WorkingSet(const ProjectInstance& instance, const SearchParams& params, std::vector<WorkingSetEntry> entries);

    /// Writes back (if given) and adopts the next entry round-robin,
    /// diversifying it when it has been read more than phi_max times without
    /// improvement.
    Adoption exchange(const WriteBack* back, Rng& rng);

    /// Write-back without adopting anything (used when a worker stops).
    void write_back(const WriteBack& back);

    Time global_best() const noexcept { return global_best_.load(std::memory_order_acquire); }
    std::size_t size() const noexcept { return entries_.size(); }

    std::pair<ActivityOrder, Schedule> best() const;
    std::vector<WorkingSetEntry> snapshot() const;

    /// True iff the cached global best equals the pool minimum.
    bool pool_min_holds() const;

private:
    void write_back_locked(const WriteBack& back);
    void refresh_best_locked();

    const ProjectInstance* instance_;
    const SearchParams* params_;
    mutable std::mutex mutex_;
    std::vector<WorkingSetEntry> entries_;
    std::size_t cursor_ = 0;
    std::size_t best_index_ = 0;
    std::atomic<Time> global_best_{0};
};

/// |F| level-shuffled orders; every even-indexed one goes through
/// forward-backward improvement.
std::vector<WorkingSetEntry> initialize_working_set(const ProjectInstance& instance, const SearchParams& params,
                                                    EvalMode mode, Rng& rng);

struct RunStats {
    ActivityOrder best_order;
    Schedule best;
    std::uint64_t evaluated_schedules = 0;
    std::uint64_t iterations = 0;
    std::uint64_t forced_tabu_moves = 0;
    std::uint64_t exchanges = 0;
    double wall_seconds = 0;
    EvalMode initial_mode = EvalMode::kTime;
    std::size_t workers = 1;
    bool stopped_at_lower_bound = false;
    /// Current makespan after each iteration; filled only for one worker.
    std::vector<Time> trace;
};

struct RunOptions {
    bool record_trace = false;
    /// Used when mode_selection is kAutoRule.
    const SelectionRule* rules = nullptr;
};

/// Shared budget and stop flag for the workers of one run.
struct RunControl {
    std::size_t total_iterations = 0;
    Time lower_bound = 0;
    std::atomic<std::uint64_t> consumed{0};
    std::atomic<bool> stop{false};
};

struct WorkerOutcome {
    std::uint64_t iterations = 0;
    std::uint64_t evaluated = 0;
    std::uint64_t forced_tabu = 0;
    std::uint64_t exchanges = 0;
};

/// Tabu Search loop of one worker cooperating through `pool`.
WorkerOutcome run_worker(SearchWorker& worker, const SearchParams& params, WorkingSet& pool, RunControl& control,
                         std::vector<Time>* trace = nullptr);

/// Builds the pool, launches params.workers workers and returns the best
/// schedule found.
RunStats orchestrate(const ProjectInstance& instance, const SearchParams& params, const RunOptions& options = {});

}  // namespace rcpsp
