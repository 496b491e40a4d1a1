#pragma once

#include <cstdint>
#include <istream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rcpsp {

using ActivityId = std::int32_t;
using Time = std::int32_t;
using Units = std::int32_t;

/// Raised by parse_psplib; carries the 1-based input line that failed.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/**
 * Single-mode RCPSP instance: activities 0..N-1 with durations, renewable
 * resource capacities, an N x M demand matrix and the precedence graph.
 * Activities 0 and N-1 are the dummy source and sink.
 *
 * Immutable once built. The constructor checks only shapes and id ranges;
 * graph and capacity rules are reported by validate().
 */
class ProjectInstance {
public:
    ProjectInstance(std::string name,
                    std::vector<Time> durations,
                    std::vector<Units> capacities,
                    std::vector<Units> requirements,  // row-major N x M
                    std::vector<std::vector<ActivityId>> successors);

    const std::string& name() const noexcept { return name_; }
    std::size_t activity_count() const noexcept { return durations_.size(); }
    std::size_t resource_count() const noexcept { return capacities_.size(); }

    Time duration(ActivityId i) const { return durations_[static_cast<std::size_t>(i)]; }
    std::span<const Time> durations() const noexcept { return durations_; }

    Units capacity(std::size_t k) const { return capacities_[k]; }
    std::span<const Units> capacities() const noexcept { return capacities_; }
    Units max_capacity() const noexcept { return max_capacity_; }

    Units requirement(ActivityId i, std::size_t k) const {
        return requirements_[static_cast<std::size_t>(i) * capacities_.size() + k];
    }
    /// Demand row of activity i, one entry per resource.
    std::span<const Units> requirements(ActivityId i) const {
        return {requirements_.data() + static_cast<std::size_t>(i) * capacities_.size(),
                capacities_.size()};
    }

    std::span<const ActivityId> successors(ActivityId i) const {
        return successors_[static_cast<std::size_t>(i)];
    }
    std::span<const ActivityId> predecessors(ActivityId i) const {
        return predecessors_[static_cast<std::size_t>(i)];
    }
    /// O(1) lookup in the dense adjacency matrix.
    bool has_edge(ActivityId from, ActivityId to) const {
        return adjacency_[static_cast<std::size_t>(from) * durations_.size() +
                          static_cast<std::size_t>(to)] != 0;
    }
    std::size_t edge_count() const noexcept { return edge_count_; }

    /// Same activities and demands with every precedence edge reversed.
    ProjectInstance reversed() const;

private:
    std::string name_;
    std::vector<Time> durations_;
    std::vector<Units> capacities_;
    std::vector<Units> requirements_;
    std::vector<std::vector<ActivityId>> successors_;
    std::vector<std::vector<ActivityId>> predecessors_;
    std::vector<std::uint8_t> adjacency_;
    std::size_t edge_count_ = 0;
    Units max_capacity_ = 0;
};

struct InstanceFeatures {
    double minCapacity = 0;
    double avgCapacity = 0;
    double maxCapacity = 0;
    double avgDuration = 0;
    double avgBranchFactor = 0;
    double criticalPathLength = 0;
};

/// Parses the PSPLIB single-mode `.sm` format. Job j (1-based) becomes
/// activity j-1. Throws ParseError on malformed input or a failed validation.
ProjectInstance parse_psplib(std::istream& in, std::string name = {});
ProjectInstance load_psplib(const std::string& path);

/// Writes the instance back out in PSPLIB `.sm` layout.
void write_psplib(std::ostream& out, const ProjectInstance& instance);

/// Human-readable rule violations; empty iff the instance is well formed.
std::vector<std::string> validate(const ProjectInstance& instance);

/// Topological order (Kahn, smallest ready id first). Empty if cyclic.
std::vector<ActivityId> topological_order(const ProjectInstance& instance);

/// Longest 0 -> N-1 path with edge (i,j) weighted by d_i.
Time critical_path_length(const ProjectInstance& instance);

/// Sum of all durations.
Time makespan_upper_bound(const ProjectInstance& instance);

/// Activities grouped by longest unit-weight distance from activity 0,
/// ascending ids inside each level.
std::vector<std::vector<ActivityId>> compute_levels(const ProjectInstance& instance);

InstanceFeatures extract_features(const ProjectInstance& instance);

}  // namespace rcpsp
