#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "rcpsp/moves.hpp"

namespace rcpsp {

/// N x N membership table mirroring the tabu list. Cells count copies so a
/// pair added twice stays tabu until both copies are evicted.
class TabuCache {
public:
    explicit TabuCache(std::size_t activity_count = 0)
        : n_(activity_count), counts_(activity_count * activity_count, 0) {}

    bool is_tabu(std::int32_t u, std::int32_t v) const { return counts_[index(u, v)] != 0; }

    void insert(SwapMove m) { ++counts_[index(m.u, m.v)]; }
    void erase(SwapMove m) {
        auto& c = counts_[index(m.u, m.v)];
        if (c > 0) --c;
    }
    void clear() { std::fill(counts_.begin(), counts_.end(), 0); }

    std::size_t dimension() const noexcept { return n_; }

private:
    std::size_t index(std::int32_t u, std::int32_t v) const {
        return static_cast<std::size_t>(u) * n_ + static_cast<std::size_t>(v);
    }

    std::size_t n_;
    std::vector<std::uint32_t> counts_;
};

/// Fixed-size circular buffer of recent swaps plus its cache. (0,0) marks
/// an empty slot.
class TabuList {
public:
    TabuList() = default;
    TabuList(std::size_t activity_count, std::size_t length);

    bool is_tabu(std::int32_t u, std::int32_t v) const { return cache_.is_tabu(u, v); }
    bool is_tabu(SwapMove m) const { return cache_.is_tabu(m.u, m.v); }

    /// Evicts the slot under the cursor, stores the move there, advances.
    void add_move(SwapMove m);
    void reset();

    std::size_t length() const noexcept { return entries_.size(); }
    std::size_t write_index() const noexcept { return write_index_; }
    const std::vector<SwapMove>& entries() const noexcept { return entries_; }
    const TabuCache& cache() const noexcept { return cache_; }

private:
    std::vector<SwapMove> entries_;
    std::size_t write_index_ = 0;
    TabuCache cache_;
};

}  // namespace rcpsp
