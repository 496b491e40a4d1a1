#include "rcpsp/tabu.hpp"

#include <stdexcept>

namespace rcpsp {

TabuList::TabuList(std::size_t activity_count, std::size_t length)
    : entries_(length, SwapMove{0, 0}), cache_(activity_count) {
    if (length == 0) throw std::invalid_argument("tabu list length must be positive");
}

void TabuList::add_move(SwapMove m) {
    const SwapMove old = entries_[write_index_];
    if (old != SwapMove{0, 0}) cache_.erase(old);
    entries_[write_index_] = m;
    cache_.insert(m);
    write_index_ = (write_index_ + 1) % entries_.size();
}

void TabuList::reset() {
    std::fill(entries_.begin(), entries_.end(), SwapMove{0, 0});
    cache_.clear();
    write_index_ = 0;
}

}  // namespace rcpsp
