#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rcpsp/cooperation.hpp"

namespace rcpsp {

/// instance name -> best known makespan (optimum or upper bound).
using BoundsTable = std::map<std::string, Time>;

/// CSV with header `instance,bound`. Throws std::runtime_error on duplicate
/// names or non-integer bounds.
BoundsTable load_bounds(const std::string& path);
BoundsTable parse_bounds(std::istream& in);

/// Converts a PSPLIB optimum/upper-bound listing (`Par Inst Makespan ...`
/// rows) into `instance,bound` rows named `<prefix><par>_<inst>`.
void convert_psplib_bounds(std::istream& in, std::ostream& out, const std::string& prefix);

enum class BoundKind { kOptimum, kUpperBound };

struct InstanceRecord {
    std::string name;
    std::size_t activities = 0;
    Time makespan = 0;
    Time critical_path = 0;
    std::optional<Time> bound;
    bool feasible = false;
    std::uint64_t iterations = 0;
    std::uint64_t evaluated_schedules = 0;
    double wall_seconds = 0;
    std::string mode;
    std::string error;
};

struct BenchmarkSummary {
    std::size_t instances = 0;
    std::size_t solved = 0;
    std::size_t failed = 0;
    double cpm_dev = 0;
    /// Against the bounds table; OPT dev or UB dev depending on the kind.
    std::optional<double> bound_dev;
    std::size_t bounded = 0;
    std::size_t best_sol = 0;
    double comp_time = 0;
    double sched_sec = 0;
};

struct BenchmarkReport {
    std::vector<InstanceRecord> records;
    BenchmarkSummary summary;
    BoundKind bound_kind = BoundKind::kOptimum;
    SearchParams params;
};

/// Aggregates over feasible records: deviations are percentages averaged
/// over those records (CPM dev skips instances with zero critical path).
BenchmarkSummary summarize(const std::vector<InstanceRecord>& records);

void write_csv(std::ostream& out, const BenchmarkReport& report);
void write_json(std::ostream& out, const BenchmarkReport& report);
void write_text(std::ostream& out, const BenchmarkReport& report);

/// Explicit settings; anything unset falls back to the size-class defaults.
struct ParamOverrides {
    std::optional<std::size_t> delta;
    std::optional<std::size_t> tabu_length;
    std::optional<std::size_t> phi_steps;
    std::optional<std::size_t> phi_max;
    std::optional<std::size_t> pool_size;
    std::optional<std::size_t> workers;
    std::optional<std::size_t> iterations;
    std::optional<std::uint64_t> seed;
    std::optional<ModeSelection> mode;
};

SearchParams resolve_params(std::size_t activity_count, const ParamOverrides& overrides);

struct BenchOptions {
    ParamOverrides overrides;
    std::optional<BoundsTable> bounds;
    BoundKind bound_kind = BoundKind::kOptimum;
    const SelectionRule* rules = nullptr;
    /// Instances solved concurrently; only honoured with one worker each.
    std::size_t instance_parallelism = 1;
};

/// Solves one instance and checks the result with the feasibility oracle.
InstanceRecord solve_record(const ProjectInstance& instance, const SearchParams& params,
                            const SelectionRule* rules, RunStats* stats = nullptr);

/// Solves every `.sm` file of `directory` (sorted by name) with identical
/// settings. Per-instance failures are recorded and the sweep continues.
BenchmarkReport run_benchmark(const std::string& directory, const BenchOptions& options);

/// Same over an explicit list of instance files, reported in the given order.
BenchmarkReport run_benchmark_files(const std::vector<std::string>& files, const BenchOptions& options);

/// Fixed CSV column order for per-instance rows.
inline constexpr const char* kCsvHeader =
    "instance,activities,makespan,critical_path,bound,feasible,iterations,evaluated_schedules,wall_seconds,mode,error";

}  // namespace rcpsp
