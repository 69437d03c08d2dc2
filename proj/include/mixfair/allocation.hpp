#ifndef MIXFAIR_ALLOCATION_HPP
#define MIXFAIR_ALLOCATION_HPP

#include "mixfair/errors.hpp"
#include "mixfair/instance.hpp"
#include "mixfair/interval_set.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace mixfair {

/// M_i ∪ C_i: a sorted set of goods plus a piece of cake.
struct Bundle
{
    std::vector<GoodIndex> goods;
    IntervalSet cake;

    bool empty() const { return goods.empty() && cake.empty(); }

    void add_good(GoodIndex g)
    {
        goods.insert(std::upper_bound(goods.begin(), goods.end(), g), g);
    }

    bool operator==(const Bundle&) const = default;
};

/// Possibly partial allocation; cake nobody holds yet sits in `unallocated_cake`.
struct Allocation
{
    std::vector<Bundle> bundles;
    IntervalSet unallocated_cake;

    /// n empty bundles with the whole cake unallocated.
    static Allocation empty(std::size_t n)
    {
        Allocation a;
        a.bundles.resize(n);
        a.unallocated_cake = IntervalSet::unit();
        return a;
    }

    std::size_t agent_count() const { return bundles.size(); }

    const Bundle& operator[](AgentIndex i) const { return bundles[i]; }
    Bundle& operator[](AgentIndex i) { return bundles[i]; }

    bool operator==(const Allocation&) const = default;
};

/// Throws std::invalid_argument describing the first inconsistency: unknown or
/// duplicated goods, cake outside [0, 1), overlapping cake.  With
/// `require_complete`, every good must be assigned and the cake fully covered
/// (unless no agent values the cake).
inline void validate_allocation(const Instance& inst, const Allocation& alloc, bool require_complete)
{
    if (alloc.bundles.size() != inst.agent_count())
        throw std::invalid_argument("allocation has " + std::to_string(alloc.bundles.size())
                                    + " bundles for " + std::to_string(inst.agent_count()) + " agents");
    std::vector<int> owner(inst.good_count(), -1);
    IntervalSet covered = alloc.unallocated_cake;
    if (!covered.subset_of(IntervalSet::unit()))
        throw std::invalid_argument("unallocated cake lies outside [0, 1)");
    for (std::size_t i = 0; i < alloc.bundles.size(); ++i) {
        const auto& b = alloc.bundles[i];
        for (GoodIndex g : b.goods) {
            if (g >= inst.good_count())
                throw std::invalid_argument("bundle of '" + inst.agent_names()[i] + "' holds unknown good #"
                                            + std::to_string(g));
            if (owner[g] >= 0)
                throw std::invalid_argument("good '" + inst.good_names()[g] + "' assigned to both '"
                                            + inst.agent_names()[owner[g]] + "' and '"
                                            + inst.agent_names()[i] + "'");
            owner[g] = static_cast<int>(i);
        }
        if (!b.cake.subset_of(IntervalSet::unit()))
            throw std::invalid_argument("cake of '" + inst.agent_names()[i] + "' lies outside [0, 1)");
        if (!b.cake.disjoint_from(covered))
            throw std::invalid_argument("cake of '" + inst.agent_names()[i] + "' overlaps another piece");
        covered.absorb(b.cake);
    }
    if (!require_complete) return;
    for (std::size_t g = 0; g < owner.size(); ++g)
        if (owner[g] < 0) throw std::invalid_argument("good '" + inst.good_names()[g] + "' is unassigned");
    // A cake nobody values is not a resource; it may stay unallocated.
    if (inst.cake_is_null()) return;
    if (!alloc.unallocated_cake.empty()) throw std::invalid_argument("some cake is unallocated");
    if (covered != IntervalSet::unit()) throw std::invalid_argument("cake pieces do not cover [0, 1)");
}

} // namespace mixfair

#endif // MIXFAIR_ALLOCATION_HPP
