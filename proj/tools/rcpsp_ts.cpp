// rcpsp_ts: parallel Tabu Search for single-mode RCPSP instances.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "rcpsp/report.hpp"

namespace {

using namespace rcpsp;

struct Common {
    std::optional<std::size_t> iters, workers, delta, tabu_size, phi_steps, phi_max, pool_size;
    std::optional<std::uint64_t> seed;
    std::string eval = "auto-rule";
    std::string rules_path;
    std::string format = "text";
    std::string out_path;
};

std::size_t default_workers() {
    if (const char* env = std::getenv("RCPSP_WORKERS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
        }
        std::cerr << "warning: ignoring RCPSP_WORKERS='" << env << "'\n";
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void add_common(CLI::App& cmd, Common& c) {
    cmd.add_option("--iters", c.iters, "Total iteration budget shared by all workers")->check(CLI::PositiveNumber);
    cmd.add_option("--workers", c.workers, "Parallel search workers (default: $RCPSP_WORKERS or hardware threads)")
        ->check(CLI::PositiveNumber);
    cmd.add_option("--delta", c.delta, "Maximal distance of swapped positions")->check(CLI::PositiveNumber);
    cmd.add_option("--tabu-size", c.tabu_size, "Tabu list length")->check(CLI::PositiveNumber);
    cmd.add_option("--phi-steps", c.phi_steps, "Random swaps per diversification");
    cmd.add_option("--phi-max", c.phi_max, "Unimproved reads before an entry is diversified")
        ->check(CLI::PositiveNumber);
    cmd.add_option("--pool-size", c.pool_size, "Working set size")->check(CLI::PositiveNumber);
    cmd.add_option("--seed", c.seed, "Random seed");
    cmd.add_option("--eval", c.eval, "Resource evaluation: time, capacity, auto-rule or auto-measure")
        ->check(CLI::IsMember({"time", "capacity", "auto-rule", "auto-measure"}));
    cmd.add_option("--rules", c.rules_path, "Evaluator selection rules for auto-rule")->check(CLI::ExistingFile);
    cmd.add_option("--format", c.format, "Report format")->check(CLI::IsMember({"text", "csv", "json"}));
    cmd.add_option("--out", c.out_path, "Write the report here instead of stdout");
}

ParamOverrides overrides_from(const Common& c) {
    ParamOverrides o;
    o.iterations = c.iters;
    o.workers = c.workers ? c.workers : std::optional<std::size_t>(default_workers());
    o.delta = c.delta;
    o.tabu_length = c.tabu_size;
    o.phi_steps = c.phi_steps;
    o.phi_max = c.phi_max;
    o.pool_size = c.pool_size;
    o.seed = c.seed;
    if (c.eval == "time") o.mode = ModeSelection::kTime;
    if (c.eval == "capacity") o.mode = ModeSelection::kCapacity;
    if (c.eval == "auto-rule") o.mode = ModeSelection::kAutoRule;
    if (c.eval == "auto-measure") o.mode = ModeSelection::kAutoMeasure;
    return o;
}

std::optional<SelectionRule> rules_from(const Common& c) {
    if (c.rules_path.empty()) return std::nullopt;
    return SelectionRule::load(c.rules_path);
}

// Runs `write` against the chosen sink.
template <typename Fn>
void emit(const std::string& out_path, Fn&& write) {
    if (out_path.empty()) {
        write(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
    write(out);
}

void write_solve_text(std::ostream& out, const ProjectInstance& inst, const InstanceRecord& r, const RunStats& s,
                      const SearchParams& p) {
    out << "instance        " << r.name << '\n'
        << "activities      " << inst.activity_count() << '\n'
        << "resources       " << inst.resource_count() << '\n'
        << "critical path   " << r.critical_path << '\n'
        << "makespan        " << r.makespan << '\n'
        << "feasible        " << (r.feasible ? "yes" : "no") << '\n'
        << "mode            " << r.mode << '\n'
        << "workers         " << p.workers << '\n'
        << "seed            " << p.seed << '\n'
        << "iterations      " << r.iterations << '\n'
        << "evaluated       " << r.evaluated_schedules << '\n'
        << "forced tabu     " << s.forced_tabu_moves << '\n'
        << "start times    ";
    for (Time t : s.best.start_times) out << ' ' << t;
    out << '\n' << "order          ";
    for (ActivityId a : s.best_order.activities()) out << ' ' << a;
    out << '\n';
    if (!r.error.empty()) out << "error           " << r.error << '\n';
}

void write_solve_json(std::ostream& out, const ProjectInstance& inst, const InstanceRecord& r, const RunStats& s,
                      const SearchParams& p) {
    nlohmann::ordered_json j;
    j["instance"] = r.name;
    j["activities"] = inst.activity_count();
    j["resources"] = inst.resource_count();
    j["critical_path"] = r.critical_path;
    j["makespan"] = r.makespan;
    j["feasible"] = r.feasible;
    j["mode"] = r.mode;
    j["params"] = {{"iterations", p.total_iterations}, {"workers", p.workers},     {"delta", p.delta},
                   {"tabu_size", p.tabu_length},      {"phi_steps", p.phi_steps}, {"phi_max", p.phi_max},
                   {"pool_size", p.pool_size},        {"seed", p.seed}};
    j["iterations"] = r.iterations;
    j["evaluated_schedules"] = r.evaluated_schedules;
    j["forced_tabu_moves"] = s.forced_tabu_moves;
    j["start_times"] = s.best.start_times;
    j["order"] = std::vector<ActivityId>(s.best_order.activities().begin(), s.best_order.activities().end());
    if (!r.error.empty()) j["error"] = r.error;
    out << j.dump(2) << '\n';
}

int run_solve(const std::string& file, const Common& c, const std::string& trace_path) {
    const ProjectInstance inst = load_psplib(file);
    const auto rules = rules_from(c);
    const SearchParams params = resolve_params(inst.activity_count(), overrides_from(c));

    RunOptions options;
    options.rules = rules ? &*rules : nullptr;
    options.record_trace = !trace_path.empty();
    if (options.record_trace && params.workers != 1)
        std::cerr << "warning: --trace is only recorded with one worker\n";

    InstanceRecord r;
    r.name = inst.name();
    r.critical_path = critical_path_length(inst);
    r.activities = inst.activity_count();
    const RunStats stats = orchestrate(inst, params, options);
    r.makespan = stats.best.makespan;
    r.iterations = stats.iterations;
    r.evaluated_schedules = stats.evaluated_schedules;
    r.wall_seconds = stats.wall_seconds;
    r.mode = std::string(to_string(stats.initial_mode));
    const auto check = check_schedule_feasible(inst, stats.best);
    r.feasible = check.feasible && r.makespan >= r.critical_path;
    if (!check.feasible) r.error = "infeasible schedule: " + check.violations.front();

    emit(c.out_path, [&](std::ostream& out) {
        if (c.format == "json") {
            write_solve_json(out, inst, r, stats, params);
        } else if (c.format == "csv") {
            BenchmarkReport single;
            single.records.push_back(r);
            single.records.back().wall_seconds = 0;
            write_csv(out, single);
        } else {
            write_solve_text(out, inst, r, stats, params);
        }
    });
    if (!trace_path.empty()) {
        emit(trace_path, [&](std::ostream& out) {
            out << "iteration,makespan\n";
            for (std::size_t i = 0; i < stats.trace.size(); ++i) out << i + 1 << ',' << stats.trace[i] << '\n';
        });
    }
    // Timing goes to stderr so reports stay reproducible.
    std::cerr << std::fixed << std::setprecision(3) << "solved " << r.name << " in " << stats.wall_seconds << " s ("
              << std::setprecision(0)
              << (stats.wall_seconds > 0 ? static_cast<double>(stats.evaluated_schedules) / stats.wall_seconds : 0.0)
              << " schedules/s)\n";
    if (!r.feasible) {
        std::cerr << "error: " << (r.error.empty() ? "makespan below the critical path" : r.error) << '\n';
        return 1;
    }
    return 0;
}

int run_bench(const std::string& dir, const Common& c, const std::string& bounds_path, const std::string& bound_kind,
              std::size_t jobs) {
    const auto rules = rules_from(c);
    BenchOptions options;
    options.overrides = overrides_from(c);
    options.rules = rules ? &*rules : nullptr;
    options.bound_kind = bound_kind == "ub" ? BoundKind::kUpperBound : BoundKind::kOptimum;
    options.instance_parallelism = jobs;
    if (!bounds_path.empty()) options.bounds = load_bounds(bounds_path);

    const BenchmarkReport report = run_benchmark(dir, options);
    emit(c.out_path, [&](std::ostream& out) {
        if (c.format == "json")
            write_json(out, report);
        else if (c.format == "csv")
            write_csv(out, report);
        else
            write_text(out, report);
    });
    for (const auto& r : report.records)
        if (!r.error.empty()) std::cerr << "error: " << r.name << ": " << r.error << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Parallel Tabu Search for the resource-constrained project scheduling problem"};
    app.require_subcommand(1);

    Common solve_opts;
    std::string solve_file, trace_path;
    auto* solve = app.add_subcommand("solve", "Solve one PSPLIB .sm instance");
    solve->add_option("file", solve_file, "Instance file")->required();
    solve->add_option("--trace", trace_path, "Write the per-iteration makespan as CSV (one worker only)");
    add_common(*solve, solve_opts);

    Common bench_opts;
    std::string bench_dir, bounds_path, bound_kind = "opt";
    std::size_t jobs = 1;
    auto* bench = app.add_subcommand("bench", "Solve every .sm file of a directory and aggregate");
    bench->add_option("dir", bench_dir, "Directory with .sm files")->required();
    bench->add_option("--bounds", bounds_path, "CSV with header instance,bound")->check(CLI::ExistingFile);
    bench->add_option("--bound-kind", bound_kind, "Bounds are optima (opt) or upper bounds (ub)")
        ->check(CLI::IsMember({"opt", "ub"}));
    bench->add_option("--jobs", jobs, "Instances solved at once when each uses one worker")
        ->check(CLI::PositiveNumber);
    add_common(*bench, bench_opts);

    std::string listing, prefix, convert_out;
    auto* convert = app.add_subcommand("convert-bounds", "Turn a PSPLIB optimum/bound listing into a bounds CSV");
    convert->add_option("listing", listing, "PSPLIB listing (Par Inst Makespan ...)")->required()->check(CLI::ExistingFile);
    convert->add_option("--prefix", prefix, "Instance name prefix, e.g. j30")->required();
    convert->add_option("--out", convert_out, "Output CSV (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*solve) return run_solve(solve_file, solve_opts, trace_path);
        if (*bench) return run_bench(bench_dir, bench_opts, bounds_path, bound_kind, jobs);
        if (*convert) {
            std::ifstream in(listing);
            emit(convert_out, [&](std::ostream& out) { convert_psplib_bounds(in, out, prefix); });
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
