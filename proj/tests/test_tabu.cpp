#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <deque>
#include <map>
#include <random>

#include "rcpsp/tabu.hpp"

using namespace rcpsp;

namespace {

// Naive model: a FIFO of the last `length` moves and a multiset over it.
struct ReferenceTabu {
    std::size_t length;
    std::deque<SwapMove> queue;
    std::map<SwapMove, int> counts;

    void add(SwapMove m) {
        if (queue.size() == length) {
            const SwapMove old = queue.front();
            queue.pop_front();
            if (--counts[old] == 0) counts.erase(old);
        }
        queue.push_back(m);
        ++counts[m];
    }
    void reset() {
        queue.clear();
        counts.clear();
    }
    bool contains(SwapMove m) const { return counts.count(m) == 1; }
};

bool all_clear(const TabuList& t, std::size_t n) {
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v)
            if (t.is_tabu(static_cast<std::int32_t>(u), static_cast<std::int32_t>(v))) return false;
    return true;
}

}  // namespace

TEST_CASE("fresh list holds nothing") {
    TabuList t(12, 5);
    CHECK(all_clear(t, 12));
    CHECK(t.write_index() == 0);
    CHECK(t.length() == 5);
    for (auto e : t.entries()) CHECK(e == SwapMove{0, 0});
    CHECK_THROWS_AS(TabuList(12, 0), std::invalid_argument);
}

TEST_CASE("add_move stores, marks and advances") {
    TabuList t(12, 4);
    t.add_move({2, 5});
    CHECK(t.entries()[0] == SwapMove{2, 5});
    CHECK(t.write_index() == 1);
    CHECK(t.is_tabu(2, 5));
    CHECK_FALSE(t.is_tabu(5, 2));
    t.add_move({3, 7});
    CHECK(t.is_tabu(SwapMove{3, 7}));
}

TEST_CASE("oldest move is evicted") {
    TabuList t(10, 2);
    t.add_move({1, 2});
    t.add_move({3, 4});
    t.add_move({5, 6});
    CHECK_FALSE(t.is_tabu(1, 2));
    CHECK(t.is_tabu(3, 4));
    CHECK(t.is_tabu(5, 6));
    CHECK(t.write_index() == 1);

    TabuList u(20, 5);
    for (std::int32_t i = 1; i <= 6; ++i) u.add_move({i, i + 1});
    CHECK_FALSE(u.is_tabu(1, 2));
    for (std::int32_t i = 2; i <= 6; ++i) CHECK(u.is_tabu(i, i + 1));
}

TEST_CASE("duplicates stay tabu until every copy is evicted") {
    TabuList t(12, 4);
    t.add_move({2, 5});
    t.add_move({2, 5});
    t.add_move({1, 3});
    t.add_move({1, 4});
    t.add_move({1, 5});  // evicts the first copy
    CHECK(t.is_tabu(2, 5));
    t.add_move({1, 6});  // evicts the second copy
    CHECK_FALSE(t.is_tabu(2, 5));
    t.add_move({1, 7});
    t.add_move({1, 8});
    CHECK_FALSE(t.is_tabu(2, 5));
}

TEST_CASE("reset clears everything") {
    std::mt19937_64 rng(1);
    TabuList t(30, 50);
    std::uniform_int_distribution<std::int32_t> pos(1, 28);
    for (int i = 0; i < 1000; ++i) {
        const auto a = pos(rng), b = pos(rng);
        if (a != b) t.add_move({std::min(a, b), std::max(a, b)});
    }
    t.reset();
    CHECK(all_clear(t, 30));
    CHECK(t.write_index() == 0);
    const TabuList fresh(30, 50);
    CHECK(t.entries() == fresh.entries());
    t.reset();
    CHECK(all_clear(t, 30));
}

TEST_CASE("cache mirrors a reference model") {
    std::mt19937_64 rng(77);
    std::size_t ops = 0;
    for (std::size_t length : {1u, 2u, 7u, 60u, 250u}) {
        const std::size_t n = 14;
        TabuList t(n, length);
        ReferenceTabu ref{length, {}, {}};
        // Few distinct pairs so duplicates are frequent.
        std::uniform_int_distribution<std::int32_t> pos(1, 6);
        for (int i = 0; i < 40000; ++i) {
            if (std::uniform_int_distribution<int>(0, 999)(rng) == 0) {
                t.reset();
                ref.reset();
            } else {
                const auto a = pos(rng);
                const auto b = std::uniform_int_distribution<std::int32_t>(a + 1, 12)(rng);
                t.add_move({a, b});
                ref.add({a, b});
            }
            ++ops;
            for (std::int32_t u = 1; u <= 6; ++u)
                for (std::int32_t v = u + 1; v <= 12; ++v)
                    if (t.is_tabu(u, v) != ref.contains({u, v})) FAIL("cache and model disagree");
        }
    }
    CHECK(ops >= 100000);
}

TEST_CASE("copies carry their own state") {
    TabuList a(10, 3);
    a.add_move({1, 2});
    TabuList b = a;
    b.add_move({3, 4});
    CHECK_FALSE(a.is_tabu(3, 4));
    CHECK(b.is_tabu(1, 2));
}
