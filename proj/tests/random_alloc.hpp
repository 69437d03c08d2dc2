#ifndef MIXFAIR_TESTS_RANDOM_ALLOC_HPP
#define MIXFAIR_TESTS_RANDOM_ALLOC_HPP

#include "mixfair/mixfair.hpp"

#include <random>

namespace mixfair::ref {

/// Complete allocation: goods to uniform owners, the cake cut on a grid of
/// `cells` with each cell to a uniform owner.
inline Allocation random_allocation(const Instance& inst, std::mt19937_64& rng, long cells = 12)
{
    const std::size_t n = inst.agent_count();
    Allocation a = Allocation::empty(n);
    a.unallocated_cake = IntervalSet();
    for (GoodIndex g = 0; g < inst.good_count(); ++g) a[rng() % n].add_good(g);
    // Some rounds keep the whole cake with one agent so cake-free bundles appear.
    const bool lump = rng() % 3 == 0;
    const AgentIndex holder = rng() % n;
    std::vector<std::vector<Interval>> parts(n);
    for (long t = 0; t < cells; ++t) {
        const AgentIndex who = lump ? holder : rng() % n;
        parts[who].push_back({make_scalar(t, cells), make_scalar(t + 1, cells)});
    }
    for (AgentIndex i = 0; i < n; ++i) a[i].cake = IntervalSet(parts[i]);
    return a;
}

} // namespace mixfair::ref

#endif // MIXFAIR_TESTS_RANDOM_ALLOC_HPP
