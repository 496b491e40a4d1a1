#include "rcpsp/instance.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <queue>
#include <sstream>

namespace rcpsp {

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

ProjectInstance::ProjectInstance(std::string name,
                                 std::vector<Time> durations,
                                 std::vector<Units> capacities,
                                 std::vector<Units> requirements,
                                 std::vector<std::vector<ActivityId>> successors)
    : name_(std::move(name)),
      durations_(std::move(durations)),
      capacities_(std::move(capacities)),
      requirements_(std::move(requirements)),
      successors_(std::move(successors)) {
    const std::size_t n = durations_.size();
    if (n < 2) throw std::invalid_argument("an instance needs at least the two dummy activities");
    if (capacities_.empty()) throw std::invalid_argument("an instance needs at least one resource");
    if (requirements_.size() != n * capacities_.size())
        throw std::invalid_argument("requirement matrix must be N x M");
    if (successors_.size() != n) throw std::invalid_argument("successor lists must be N long");

    predecessors_.assign(n, {});
    adjacency_.assign(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        auto& succ = successors_[i];
        std::sort(succ.begin(), succ.end());
        succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
        for (ActivityId j : succ) {
            if (j < 0 || static_cast<std::size_t>(j) >= n)
                throw std::invalid_argument("successor id " + std::to_string(j) + " of activity " +
                                            std::to_string(i) + " is out of range");
            predecessors_[static_cast<std::size_t>(j)].push_back(static_cast<ActivityId>(i));
            adjacency_[i * n + static_cast<std::size_t>(j)] = 1;
            ++edge_count_;
        }
    }
    max_capacity_ = *std::max_element(capacities_.begin(), capacities_.end());
}

ProjectInstance ProjectInstance::reversed() const {
    return ProjectInstance(name_ + "-reversed", durations_, capacities_, requirements_, predecessors_);
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

std::optional<long> to_int(std::string_view token) {
    long value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) return std::nullopt;
    return value;
}

struct Row {
    std::size_t line;
    std::vector<long> values;
};

class SmReader {
public:
    explicit SmReader(std::istream& in) {
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            lines_.push_back(std::move(line));
        }
    }

    std::size_t find_header(std::string_view header) const {
        for (std::size_t i = 0; i < lines_.size(); ++i)
            if (lines_[i].find(header) != std::string::npos) return i;
        throw ParseError(lines_.size(), "missing section header '" + std::string(header) + "'");
    }

    /// Integer rows following a header, skipping column captions, up to the
    /// next '*' separator line or the end of input.
    std::vector<Row> table(std::string_view header) const {
        const std::size_t at = find_header(header);
        std::vector<Row> rows;
        bool in_data = false;
        for (std::size_t i = at + 1; i < lines_.size(); ++i) {
            const auto tokens = split_ws(lines_[i]);
            if (tokens.empty()) {
                if (in_data) break;
                continue;
            }
            if (tokens.front().front() == '*') break;
            if (!in_data && !to_int(tokens.front())) continue;  // caption or dashes
            in_data = true;
            Row row{i + 1, {}};
            for (auto tok : tokens) {
                auto v = to_int(tok);
                if (!v) throw ParseError(i + 1, "non-integer token '" + std::string(tok) + "'");
                row.values.push_back(*v);
            }
            rows.push_back(std::move(row));
        }
        if (rows.empty()) throw ParseError(at + 1, "section '" + std::string(header) + "' has no data rows");
        return rows;
    }

    /// Value after the ':' of a "key : value" line, when present.
    std::optional<std::pair<std::size_t, long>> keyed_value(std::string_view key) const {
        for (std::size_t i = 0; i < lines_.size(); ++i) {
            const auto& l = lines_[i];
            if (l.find(key) == std::string::npos) continue;
            const auto colon = l.find(':');
            if (colon == std::string::npos) continue;
            const auto tokens = split_ws(std::string_view(l).substr(colon + 1));
            if (tokens.empty()) continue;
            if (auto v = to_int(tokens.front())) return std::pair{i + 1, *v};
            throw ParseError(i + 1, "non-integer token '" + std::string(tokens.front()) + "'");
        }
        return std::nullopt;
    }

private:
    std::vector<std::string> lines_;
};

}  // namespace

ProjectInstance parse_psplib(std::istream& in, std::string name) {
    SmReader reader(in);

    if (auto nonrenewable = reader.keyed_value("- nonrenewable"); nonrenewable && nonrenewable->second != 0)
        throw ParseError(nonrenewable->first, "non-renewable resources are not supported");

    const auto precedence = reader.table("PRECEDENCE RELATIONS:");
    const auto requests = reader.table("REQUESTS/DURATIONS:");
    const auto availability = reader.table("RESOURCEAVAILABILITIES:");

    const std::size_t n = precedence.size();
    const std::size_t m = availability.front().values.size();
    if (availability.size() != 1)
        throw ParseError(availability[1].line, "expected a single line of resource capacities");

    std::vector<std::vector<ActivityId>> successors(n);
    for (std::size_t row = 0; row < n; ++row) {
        const auto& r = precedence[row];
        if (r.values.size() < 3)
            throw ParseError(r.line, "precedence row needs jobnr, #modes and #successors");
        if (r.values[0] != static_cast<long>(row + 1))
            throw ParseError(r.line, "expected job " + std::to_string(row + 1) + ", found " +
                                         std::to_string(r.values[0]));
        if (r.values[1] != 1)
            throw ParseError(r.line, "job " + std::to_string(row + 1) + " has " +
                                         std::to_string(r.values[1]) + " modes; only single-mode is supported");
        const long count = r.values[2];
        if (count < 0 || static_cast<std::size_t>(count) != r.values.size() - 3)
            throw ParseError(r.line, "successor count " + std::to_string(count) + " does not match the row");
        for (std::size_t s = 3; s < r.values.size(); ++s) {
            const long job = r.values[s];
            if (job < 1 || static_cast<std::size_t>(job) > n)
                throw ParseError(r.line, "successor " + std::to_string(job) + " is out of range 1.." +
                                             std::to_string(n));
            successors[row].push_back(static_cast<ActivityId>(job - 1));
        }
    }

    if (requests.size() != n)
        throw ParseError(requests.back().line, "REQUESTS/DURATIONS lists " + std::to_string(requests.size()) +
                                                   " jobs, PRECEDENCE RELATIONS lists " + std::to_string(n));
    std::vector<Time> durations(n);
    std::vector<Units> requirements(n * m);
    for (std::size_t row = 0; row < n; ++row) {
        const auto& r = requests[row];
        if (r.values.size() != 3 + m)
            throw ParseError(r.line, "expected jobnr, mode, duration and " + std::to_string(m) + " demands");
        if (r.values[0] != static_cast<long>(row + 1))
            throw ParseError(r.line, "expected job " + std::to_string(row + 1));
        if (r.values[1] != 1) throw ParseError(r.line, "only mode 1 is supported");
        if (r.values[2] < 0) throw ParseError(r.line, "negative duration");
        durations[row] = static_cast<Time>(r.values[2]);
        for (std::size_t k = 0; k < m; ++k) {
            if (r.values[3 + k] < 0) throw ParseError(r.line, "negative resource demand");
            requirements[row * m + k] = static_cast<Units>(r.values[3 + k]);
        }
    }

    std::vector<Units> capacities(m);
    for (std::size_t k = 0; k < m; ++k) {
        if (availability.front().values[k] <= 0)
            throw ParseError(availability.front().line, "resource capacities must be positive");
        capacities[k] = static_cast<Units>(availability.front().values[k]);
    }

    ProjectInstance instance(std::move(name), std::move(durations), std::move(capacities),
                             std::move(requirements), std::move(successors));
    if (auto problems = validate(instance); !problems.empty())
        throw ParseError(precedence.front().line, "invalid instance: " + problems.front());
    return instance;
}

ProjectInstance load_psplib(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file '" + path + "'");
    try {
        return parse_psplib(in, std::filesystem::path(path).stem().string());
    } catch (const ParseError& e) {
        throw ParseError(e.line(), path + ": " + e.what());
    }
}

void write_psplib(std::ostream& out, const ProjectInstance& instance) {
    const std::size_t n = instance.activity_count();
    const std::size_t m = instance.resource_count();
    const std::string stars(72, '*');
    out << stars << '\n'
        << "file with basedata            : " << instance.name() << ".bas\n"
        << stars << '\n'
        << "projects                      :  1\n"
        << "jobs (incl. supersource/sink ):  " << n << '\n'
        << "horizon                       :  " << makespan_upper_bound(instance) << '\n'
        << "RESOURCES\n"
        << "  - renewable                 :  " << m << "   R\n"
        << "  - nonrenewable              :  0   N\n"
        << "  - doubly constrained        :  0   D\n"
        << stars << '\n'
        << "PRECEDENCE RELATIONS:\n"
        << "jobnr.    #modes  #successors   successors\n";
    for (std::size_t i = 0; i < n; ++i) {
        const auto succ = instance.successors(static_cast<ActivityId>(i));
        out << "  " << i + 1 << "        1          " << succ.size() << "       ";
        for (ActivityId j : succ) out << ' ' << j + 1;
        out << '\n';
    }
    out << stars << '\n' << "REQUESTS/DURATIONS:\n" << "jobnr. mode duration";
    for (std::size_t k = 0; k < m; ++k) out << "  R " << k + 1;
    out << '\n' << std::string(72, '-') << '\n';
    for (std::size_t i = 0; i < n; ++i) {
        const auto id = static_cast<ActivityId>(i);
        out << "  " << i + 1 << "      1     " << instance.duration(id);
        for (std::size_t k = 0; k < m; ++k) out << "    " << instance.requirement(id, k);
        out << '\n';
    }
    out << stars << '\n' << "RESOURCEAVAILABILITIES:\n";
    for (std::size_t k = 0; k < m; ++k) out << "  R " << k + 1;
    out << '\n';
    for (std::size_t k = 0; k < m; ++k) out << "   " << instance.capacity(k);
    out << '\n' << stars << '\n';
}

std::vector<ActivityId> topological_order(const ProjectInstance& instance) {
    const std::size_t n = instance.activity_count();
    std::vector<std::size_t> indegree(n);
    for (std::size_t i = 0; i < n; ++i) indegree[i] = instance.predecessors(static_cast<ActivityId>(i)).size();
    std::priority_queue<ActivityId, std::vector<ActivityId>, std::greater<>> ready;
    for (std::size_t i = 0; i < n; ++i)
        if (indegree[i] == 0) ready.push(static_cast<ActivityId>(i));
    std::vector<ActivityId> order;
    order.reserve(n);
    while (!ready.empty()) {
        const ActivityId a = ready.top();
        ready.pop();
        order.push_back(a);
        for (ActivityId s : instance.successors(a))
            if (--indegree[static_cast<std::size_t>(s)] == 0) ready.push(s);
    }
    if (order.size() != n) order.clear();
    return order;
}

namespace {

// One cycle through the subgraph left over by Kahn's algorithm.
std::vector<ActivityId> find_cycle(const ProjectInstance& instance) {
    const std::size_t n = instance.activity_count();
    enum class Mark : std::uint8_t { kNew, kOpen, kDone };
    std::vector<Mark> mark(n, Mark::kNew);
    std::vector<ActivityId> stack;
    std::vector<std::size_t> cursor(n, 0);
    for (std::size_t root = 0; root < n; ++root) {
        if (mark[root] != Mark::kNew) continue;
        stack.push_back(static_cast<ActivityId>(root));
        mark[root] = Mark::kOpen;
        while (!stack.empty()) {
            const ActivityId v = stack.back();
            const auto succ = instance.successors(v);
            auto& c = cursor[static_cast<std::size_t>(v)];
            if (c == succ.size()) {
                mark[static_cast<std::size_t>(v)] = Mark::kDone;
                stack.pop_back();
                continue;
            }
            const ActivityId w = succ[c++];
            if (mark[static_cast<std::size_t>(w)] == Mark::kOpen) {
                auto from = std::find(stack.begin(), stack.end(), w);
                return {from, stack.end()};
            }
            if (mark[static_cast<std::size_t>(w)] == Mark::kNew) {
                mark[static_cast<std::size_t>(w)] = Mark::kOpen;
                stack.push_back(w);
            }
        }
    }
    return {};
}

std::vector<bool> reachable(const ProjectInstance& instance, ActivityId from, bool forward) {
    std::vector<bool> seen(instance.activity_count(), false);
    std::vector<ActivityId> todo{from};
    seen[static_cast<std::size_t>(from)] = true;
    while (!todo.empty()) {
        const ActivityId v = todo.back();
        todo.pop_back();
        for (ActivityId w : forward ? instance.successors(v) : instance.predecessors(v)) {
            if (!seen[static_cast<std::size_t>(w)]) {
                seen[static_cast<std::size_t>(w)] = true;
                todo.push_back(w);
            }
        }
    }
    return seen;
}

}  // namespace

std::vector<std::string> validate(const ProjectInstance& instance) {
    std::vector<std::string> out;
    const std::size_t n = instance.activity_count();
    const std::size_t m = instance.resource_count();
    const auto sink = static_cast<ActivityId>(n - 1);

    for (ActivityId dummy : {ActivityId{0}, sink}) {
        if (instance.duration(dummy) != 0)
            out.push_back("dummy activity " + std::to_string(dummy) + " has non-zero duration");
        for (std::size_t k = 0; k < m; ++k)
            if (instance.requirement(dummy, k) != 0)
                out.push_back("dummy activity " + std::to_string(dummy) + " requires resource " +
                              std::to_string(k));
    }
    for (std::size_t k = 0; k < m; ++k)
        if (instance.capacity(k) <= 0) out.push_back("resource " + std::to_string(k) + " has no capacity");
    for (std::size_t i = 0; i < n; ++i) {
        const auto id = static_cast<ActivityId>(i);
        if (instance.duration(id) < 0) out.push_back("activity " + std::to_string(i) + " has negative duration");
        for (std::size_t k = 0; k < m; ++k) {
            const Units r = instance.requirement(id, k);
            if (r < 0)
                out.push_back("activity " + std::to_string(i) + " has negative demand on resource " +
                              std::to_string(k));
            else if (r > instance.capacity(k))
                out.push_back("capacity: activity " + std::to_string(i) + " requires " + std::to_string(r) +
                              " units of resource " + std::to_string(k) + " (capacity " +
                              std::to_string(instance.capacity(k)) + ")");
        }
        for (ActivityId j : instance.successors(id)) {
            const auto preds = instance.predecessors(j);
            if (!std::binary_search(preds.begin(), preds.end(), id))
                out.push_back("edge (" + std::to_string(i) + "," + std::to_string(j) +
                              ") missing from predecessor lists");
        }
    }

    if (auto cycle = find_cycle(instance); !cycle.empty()) {
        std::string text = "cycle:";
        for (ActivityId a : cycle) text += " " + std::to_string(a);
        text += " " + std::to_string(cycle.front());
        out.push_back(text);
        return out;
    }
    const auto from_source = reachable(instance, 0, true);
    const auto to_sink = reachable(instance, sink, false);
    for (std::size_t i = 0; i < n; ++i) {
        if (!from_source[i]) out.push_back("activity " + std::to_string(i) + " is not reachable from activity 0");
        if (!to_sink[i])
            out.push_back("activity " + std::to_string(i) + " does not reach activity " + std::to_string(sink));
    }
    return out;
}

Time critical_path_length(const ProjectInstance& instance) {
    const auto order = topological_order(instance);
    if (order.empty()) throw std::invalid_argument("precedence graph has a cycle");
    std::vector<Time> earliest(instance.activity_count(), 0);
    for (ActivityId a : order) {
        const Time finish = earliest[static_cast<std::size_t>(a)] + instance.duration(a);
        for (ActivityId s : instance.successors(a))
            earliest[static_cast<std::size_t>(s)] = std::max(earliest[static_cast<std::size_t>(s)], finish);
    }
    const auto sink = static_cast<ActivityId>(instance.activity_count() - 1);
    return earliest.back() + instance.duration(sink);
}

Time makespan_upper_bound(const ProjectInstance& instance) {
    const auto d = instance.durations();
    return std::accumulate(d.begin(), d.end(), Time{0});
}

std::vector<std::vector<ActivityId>> compute_levels(const ProjectInstance& instance) {
    const auto order = topological_order(instance);
    if (order.empty()) throw std::invalid_argument("precedence graph has a cycle");
    std::vector<std::size_t> level(instance.activity_count(), 0);
    std::size_t deepest = 0;
    for (ActivityId a : order) {
        const std::size_t next = level[static_cast<std::size_t>(a)] + 1;
        for (ActivityId s : instance.successors(a))
            level[static_cast<std::size_t>(s)] = std::max(level[static_cast<std::size_t>(s)], next);
        deepest = std::max(deepest, level[static_cast<std::size_t>(a)]);
    }
    std::vector<std::vector<ActivityId>> levels(deepest + 1);
    for (std::size_t i = 0; i < level.size(); ++i) levels[level[i]].push_back(static_cast<ActivityId>(i));
    return levels;
}

InstanceFeatures extract_features(const ProjectInstance& instance) {
    const auto caps = instance.capacities();
    const auto n = static_cast<double>(instance.activity_count());
    InstanceFeatures f;
    f.minCapacity = *std::min_element(caps.begin(), caps.end());
    f.maxCapacity = *std::max_element(caps.begin(), caps.end());
    f.avgCapacity = std::accumulate(caps.begin(), caps.end(), 0.0) / static_cast<double>(caps.size());
    f.avgDuration = static_cast<double>(makespan_upper_bound(instance)) / n;
    f.avgBranchFactor = static_cast<double>(instance.edge_count()) / n;
    f.criticalPathLength = critical_path_length(instance);
    return f;
}

}  // namespace rcpsp
