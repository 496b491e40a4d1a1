#include "rcpsp/report.hpp"

#include <atomic>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace rcpsp {

namespace {

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

std::optional<long> parse_long(const std::string& s) {
    long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

BoundsTable parse_bounds(std::istream& in) {
    BoundsTable table;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("bounds line " + std::to_string(line_no) + ": expected 'instance,bound'");
        const std::string name = trim(line.substr(0, comma));
        const std::string value = trim(line.substr(comma + 1));
        if (!header_seen) {
            header_seen = true;
            if (name == "instance" && value == "bound") continue;
            throw std::runtime_error("bounds file must start with the header 'instance,bound'");
        }
        const auto bound = parse_long(value);
        if (!bound || *bound < 0)
            throw std::runtime_error("bounds line " + std::to_string(line_no) + ": bound '" + value +
                                     "' for instance '" + name + "' is not a non-negative integer");
        if (!table.emplace(name, static_cast<Time>(*bound)).second)
            throw std::runtime_error("bounds line " + std::to_string(line_no) + ": duplicate instance '" + name + "'");
    }
    if (!header_seen) throw std::runtime_error("bounds file is empty");
    return table;
}

BoundsTable load_bounds(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open bounds file '" + path + "'");
    return parse_bounds(in);
}

void convert_psplib_bounds(std::istream& in, std::ostream& out, const std::string& prefix) {
    out << "instance,bound\n";
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream tokens(line);
        std::string par, inst, value;
        if (!(tokens >> par >> inst >> value)) continue;
        if (!parse_long(par) || !parse_long(inst) || !parse_long(value)) continue;
        out << prefix << par << '_' << inst << ',' << value << '\n';
    }
}

BenchmarkSummary summarize(const std::vector<InstanceRecord>& records) {
    BenchmarkSummary s;
    s.instances = records.size();
    double cpm_sum = 0;
    std::size_t cpm_count = 0;
    double bound_sum = 0;
    std::uint64_t evaluated = 0;
    for (const auto& r : records) {
        if (!r.error.empty() || !r.feasible) {
            ++s.failed;
            continue;
        }
        ++s.solved;
        if (r.critical_path > 0) {
            cpm_sum += static_cast<double>(r.makespan - r.critical_path) / r.critical_path;
            ++cpm_count;
        }
        if (r.bound && *r.bound > 0) {
            bound_sum += static_cast<double>(r.makespan - *r.bound) / *r.bound;
            ++s.bounded;
            if (r.makespan <= *r.bound) ++s.best_sol;
        }
        s.comp_time += r.wall_seconds;
        evaluated += r.evaluated_schedules;
    }
    if (cpm_count > 0) s.cpm_dev = 100.0 * cpm_sum / static_cast<double>(cpm_count);
    if (s.bounded > 0) s.bound_dev = 100.0 * bound_sum / static_cast<double>(s.bounded);
    if (s.comp_time > 0) s.sched_sec = static_cast<double>(evaluated) / s.comp_time;
    return s;
}

void write_csv(std::ostream& out, const BenchmarkReport& report) {
    out << kCsvHeader << '\n';
    out << std::fixed;
    for (const auto& r : report.records) {
        out << csv_escape(r.name) << ',' << r.activities << ',' << r.makespan << ',' << r.critical_path << ',';
        if (r.bound) out << *r.bound;
        out << ',' << (r.feasible ? 1 : 0) << ',' << r.iterations << ',' << r.evaluated_schedules << ','
            << std::setprecision(6) << r.wall_seconds << ',' << r.mode << ',' << csv_escape(r.error) << '\n';
    }
}

void write_json(std::ostream& out, const BenchmarkReport& report) {
    const auto& s = report.summary;
    nlohmann::ordered_json j;
    j["params"] = {{"iterations", report.params.total_iterations},
                   {"workers", report.params.workers},
                   {"delta", report.params.delta},
                   {"tabu_size", report.params.tabu_length},
                   {"phi_steps", report.params.phi_steps},
                   {"phi_max", report.params.phi_max},
                   {"pool_size", report.params.pool_size},
                   {"seed", report.params.seed}};
    nlohmann::ordered_json summary = {{"instances", s.instances},   {"solved", s.solved},
                                      {"failed", s.failed},         {"cpm_dev", s.cpm_dev},
                                      {"bounded", s.bounded},       {"best_sol", s.best_sol},
                                      {"comp_time", s.comp_time},   {"sched_sec", s.sched_sec}};
    const char* bound_key = report.bound_kind == BoundKind::kOptimum ? "opt_dev" : "ub_dev";
    summary[bound_key] = s.bound_dev ? nlohmann::ordered_json(*s.bound_dev) : nlohmann::ordered_json(nullptr);
    j["summary"] = summary;
    auto& rows = j["instances"] = nlohmann::ordered_json::array();
    for (const auto& r : report.records) {
        nlohmann::ordered_json row = {{"instance", r.name},
                                      {"activities", r.activities},
                                      {"makespan", r.makespan},
                                      {"critical_path", r.critical_path},
                                      {"bound", r.bound ? nlohmann::ordered_json(*r.bound) : nullptr},
                                      {"feasible", r.feasible},
                                      {"iterations", r.iterations},
                                      {"evaluated_schedules", r.evaluated_schedules},
                                      {"wall_seconds", r.wall_seconds},
                                      {"mode", r.mode}};
        if (!r.error.empty()) row["error"] = r.error;
        rows.push_back(std::move(row));
    }
    out << j.dump(2) << '\n';
}

void write_text(std::ostream& out, const BenchmarkReport& report) {
    const auto& s = report.summary;
    out << std::fixed << std::setprecision(2);
    out << "instances   " << s.instances << " (solved " << s.solved << ", failed " << s.failed << ")\n";
    out << "CPM dev     " << s.cpm_dev << " %\n";
    if (s.bound_dev) {
        out << (report.bound_kind == BoundKind::kOptimum ? "OPT dev     " : "UB dev      ") << *s.bound_dev << " %\n";
        out << "Best_sol    " << s.best_sol << " / " << s.bounded << '\n';
    }
    out << "Comp_time   " << s.comp_time << " s\n";
    out << std::setprecision(0) << "Sched_sec   " << s.sched_sec << '\n';
    for (const auto& r : report.records) {
        if (!r.error.empty()) out << "error       " << r.name << ": " << r.error << '\n';
    }
}

SearchParams resolve_params(std::size_t activity_count, const ParamOverrides& o) {
    SearchParams p = SearchParams::defaults_for(activity_count);
    if (o.delta) p.delta = *o.delta;
    if (o.tabu_length) p.tabu_length = *o.tabu_length;
    if (o.phi_steps) p.phi_steps = *o.phi_steps;
    if (o.phi_max) p.phi_max = *o.phi_max;
    if (o.pool_size) p.pool_size = *o.pool_size;
    if (o.workers) p.workers = *o.workers;
    if (o.iterations) p.total_iterations = *o.iterations;
    if (o.seed) p.seed = *o.seed;
    p.mode_selection = o.mode.value_or(ModeSelection::kAutoRule);
    return p;
}

InstanceRecord solve_record(const ProjectInstance& instance, const SearchParams& params, const SelectionRule* rules,
                            RunStats* stats_out) {
    InstanceRecord r;
    r.name = instance.name();
    r.activities = instance.activity_count();
    r.critical_path = critical_path_length(instance);
    RunOptions options;
    options.rules = rules;
    RunStats stats = orchestrate(instance, params, options);
    r.makespan = stats.best.makespan;
    r.iterations = stats.iterations;
    r.evaluated_schedules = stats.evaluated_schedules;
    r.wall_seconds = stats.wall_seconds;
    r.mode = std::string(to_string(stats.initial_mode));
    const auto check = check_schedule_feasible(instance, stats.best);
    r.feasible = check.feasible && r.makespan >= r.critical_path;
    if (!check.feasible) r.error = "infeasible schedule: " + check.violations.front();
    if (stats_out) *stats_out = std::move(stats);
    return r;
}

BenchmarkReport run_benchmark(const std::string& directory, const BenchOptions& options) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(directory)) throw std::runtime_error("'" + directory + "' is not a directory");
    std::vector<std::string> files;
    for (const auto& e : fs::directory_iterator(directory))
        if (e.is_regular_file() && e.path().extension() == ".sm") files.push_back(e.path().string());
    std::sort(files.begin(), files.end());
    return run_benchmark_files(files, options);
}

BenchmarkReport run_benchmark_files(const std::vector<std::string>& files, const BenchOptions& options) {
    namespace fs = std::filesystem;
    BenchmarkReport report;
    report.bound_kind = options.bound_kind;
    report.params = resolve_params(32, options.overrides);
    report.records.resize(files.size());

    auto solve_one = [&](std::size_t i) {
        InstanceRecord& rec = report.records[i];
        rec.name = fs::path(files[i]).stem().string();
        try {
            const ProjectInstance instance = load_psplib(files[i]);
            rec = solve_record(instance, resolve_params(instance.activity_count(), options.overrides), options.rules);
        } catch (const std::exception& e) {
            rec.error = e.what();
        }
        if (options.bounds) {
            if (auto it = options.bounds->find(rec.name); it != options.bounds->end()) rec.bound = it->second;
        }
    };

    // Size-class defaults in the report follow the first readable instance.
    for (const auto& f : files) {
        try {
            report.params = resolve_params(load_psplib(f).activity_count(), options.overrides);
            break;
        } catch (const std::exception&) {
        }
    }

    const std::size_t lanes =
        report.params.workers == 1 ? std::max<std::size_t>(1, std::min(options.instance_parallelism, files.size())) : 1;
    if (lanes == 1) {
        for (std::size_t i = 0; i < files.size(); ++i) solve_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> threads;
        for (std::size_t t = 0; t < lanes; ++t)
            threads.emplace_back([&] {
                for (std::size_t i = next++; i < files.size(); i = next++) solve_one(i);
            });
    }
    report.summary = summarize(report.records);
    return report;
}

}  // namespace rcpsp
