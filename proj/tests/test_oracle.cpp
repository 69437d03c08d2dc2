#include "support.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace mixfair;

namespace {

Scalar q(long a, long b = 1) { return make_scalar(a, static_cast<unsigned long>(b)); }

// Every assignment of goods and grid atoms, atom by atom (no classes).
template <typename Visit>
void naive_grid(const Instance& inst, std::size_t r, Visit visit)
{
    const std::size_t n = inst.agent_count(), m = inst.good_count();
    std::vector<AgentIndex> owner(m + r, 0);
    while (true) {
        Allocation a = Allocation::empty(n);
        a.unallocated_cake = IntervalSet();
        std::vector<std::vector<Interval>> cake(n);
        for (std::size_t g = 0; g < m; ++g) a[owner[g]].add_good(g);
        for (std::size_t t = 0; t < r; ++t)
            cake[owner[m + t]].push_back({q(static_cast<long>(t), static_cast<long>(r)),
                                          q(static_cast<long>(t) + 1, static_cast<long>(r))});
        for (AgentIndex i = 0; i < n; ++i) a[i].cake = IntervalSet(cake[i]);
        visit(a);
        std::size_t k = 0;
        while (k < owner.size() && ++owner[k] == n) owner[k++] = 0;
        if (k == owner.size()) return;
    }
}

std::vector<Scalar> utilities(const Instance& inst, const Allocation& a)
{
    std::vector<Scalar> u;
    for (AgentIndex i = 0; i < inst.agent_count(); ++i) u.push_back(ref::bundle_value(inst, i, a[i]));
    return u;
}

std::pair<std::size_t, Scalar> nash_key(const std::vector<Scalar>& u)
{
    std::size_t positive = 0;
    Scalar product = 1;
    for (const auto& x : u)
        if (sgn(x) > 0) {
            ++positive;
            product *= x;
        }
    return {positive, product};
}

} // namespace

TEST(Oracle, EfxBruteForceFindsAnEfxAllocation)
{
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto inst = ref::generated(2 + seed % 2, 1 + seed % 6, DensityKind::None, seed);
        const auto a = efx_brute_force(inst);
        ASSERT_TRUE(a.has_value());
        for (AgentIndex i = 0; i < inst.agent_count(); ++i)
            for (AgentIndex j = 0; j < inst.agent_count(); ++j)
                for (GoodIndex g : (*a)[j].goods)
                    EXPECT_GE(ref::bundle_value(inst, i, (*a)[i]),
                              ref::bundle_value(inst, i, (*a)[j]) - inst.utility(i, g));
    }
}

TEST(Oracle, BudgetIsEnforced)
{
    const auto inst = ref::generated(3, 16, DensityKind::None, 1);
    EXPECT_THROW(efx_brute_force(inst, 1000), BudgetExceeded);
    const auto cake = ref::generated(4, 2, DensityKind::Constant, 1);
    EXPECT_THROW(mnw_search(cake, {40}, 1000), BudgetExceeded);
}

TEST(Oracle, MnwMatchesAtomByAtomEnumeration)
{
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const auto inst = ref::generated(2 + seed % 2, seed % 3, DensityKind::Constant, seed, 3);
        const std::size_t r = 4;
        std::pair<std::size_t, Scalar> best{0, Scalar(0)};
        bool first = true;
        naive_grid(inst, r, [&](const Allocation& a) {
            const auto key = nash_key(utilities(inst, a));
            if (first || key.first > best.first || (key.first == best.first && key.second > best.second)) best = key;
            first = false;
        });
        const auto got = mnw_search(inst, {r});
        EXPECT_TRUE(ref::is_partition(inst, got));
        EXPECT_EQ(nash_key(utilities(inst, got)), best) << seed;
    }
}

TEST(Oracle, EfmSetMatchesAtomByAtomEnumeration)
{
    // The oracle lists one allocation per class composition; atoms of a class
    // are interchangeable, so compare the distinct (goods, values) outcomes.
    using Outcome = std::pair<std::vector<std::vector<GoodIndex>>, std::vector<Scalar>>;
    auto outcome = [](const Instance& inst, const Allocation& a) {
        Outcome o;
        for (AgentIndex j = 0; j < inst.agent_count(); ++j) {
            o.first.push_back(a[j].goods);
            for (AgentIndex i = 0; i < inst.agent_count(); ++i) o.second.push_back(ref::bundle_value(inst, i, a[j]));
        }
        return o;
    };
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto inst = ref::generated(2, 1 + seed % 2, DensityKind::Constant, 300 + seed, 2);
        const std::size_t r = 5;
        std::set<Outcome> naive;
        naive_grid(inst, r, [&](const Allocation& a) {
            if (ref::efm(inst, a, 0, 0)) naive.insert(outcome(inst, a));
        });
        std::set<Outcome> got;
        for (const auto& a : efm_exhaustive_check(inst, {r})) {
            EXPECT_TRUE(ref::efm(inst, a, 0, 0));
            EXPECT_TRUE(ref::is_partition(inst, a));
            got.insert(outcome(inst, a));
        }
        EXPECT_EQ(got, naive) << seed;
    }
}

TEST(Oracle, ParetoDominatorReallyDominates)
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto inst = ref::generated(2, 2, DensityKind::Constant, seed, 3);
        const auto base = solve_efm(inst).allocation;
        const auto dom = pareto_dominance_search(inst, base, {6});
        const auto u0 = utilities(inst, base);
        bool naive_found = false;
        naive_grid(inst, 6, [&](const Allocation& a) {
            const auto u = utilities(inst, a);
            bool weak = true, strict = false;
            for (std::size_t i = 0; i < u.size(); ++i) {
                weak = weak && u[i] >= u0[i];
                strict = strict || u[i] > u0[i];
            }
            naive_found = naive_found || (weak && strict);
        });
        EXPECT_EQ(dom.has_value(), naive_found) << seed;
        if (dom) {
            const auto u = utilities(inst, *dom);
            for (std::size_t i = 0; i < u.size(); ++i) EXPECT_GE(u[i], u0[i]);
            EXPECT_NE(u, u0);
        }
    }
}

TEST(Oracle, ExampleOneEfmAllocationsGiveAllCakeToTheGoodlessAgent)
{
    const auto inst = load_instance(ref::data_file("example1.json"));
    const auto found = efm_exhaustive_check(inst, {10});
    ASSERT_FALSE(found.empty());
    for (const auto& a : found) {
        const AgentIndex holder = a[0].goods.empty() ? 0 : 1;
        EXPECT_EQ(a[holder].cake, IntervalSet::unit());
        EXPECT_TRUE(a[1 - holder].cake.empty());
        EXPECT_TRUE(pareto_dominance_search(inst, a, {10}).has_value());
    }
}

TEST(Oracle, ExampleTwoMnwIsNotWeakEfm)
{
    const auto inst = load_instance(ref::data_file("example2.json"));
    const auto a = mnw_search(inst, {10});
    const AgentIndex first = 0;
    EXPECT_EQ(a[first].goods.size(), 1u);
    EXPECT_EQ(a[first].cake, IntervalSet::unit());
    EXPECT_FALSE(ref::efm(inst, a, 0, 0, true));
}
