#include "random_alloc.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace mixfair;

namespace {

EnvyGraph random_graph(std::mt19937_64& rng, std::size_t n)
{
    std::vector<std::vector<EdgeKind>> k(n, std::vector<EdgeKind>(n, EdgeKind::None));
    const unsigned density = 1 + rng() % 6; // sparse to dense
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j || rng() % 8 >= density) continue;
            k[i][j] = rng() % 3 == 0 ? EdgeKind::Envy : EdgeKind::Eq;
        }
    return EnvyGraph(std::move(k));
}

// Addable by definition: no envy edge inside S, no edge of any kind into S
// from outside.
bool addable(const EnvyGraph& g, std::uint32_t mask)
{
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j) {
            const bool in_i = mask >> i & 1, in_j = mask >> j & 1;
            if (in_i && in_j && g.edge(i, j) == EdgeKind::Envy) return false;
            if (!in_i && in_j && g.has_edge(i, j)) return false;
        }
    return true;
}

} // namespace

TEST(EnvyGraph, EdgeKindsFollowTheSlack)
{
    using V = std::vector<std::vector<Scalar>>;
    const V value{{Scalar(5), Scalar(6), Scalar(5)}, {Scalar(1), Scalar(2), Scalar(3)}, {Scalar(0), Scalar(0), Scalar(0)}};
    EnvyGraph plain(value, Scalar(0));
    EXPECT_EQ(plain.edge(0, 1), EdgeKind::Envy);
    EXPECT_EQ(plain.edge(0, 2), EdgeKind::Eq);
    EXPECT_EQ(plain.edge(1, 0), EdgeKind::None);
    EXPECT_EQ(plain.edge(1, 2), EdgeKind::Envy);
    EXPECT_EQ(plain.edge(2, 0), EdgeKind::Eq);
    EnvyGraph loose(value, Scalar(1));
    EXPECT_EQ(loose.edge(0, 1), EdgeKind::Eq);
    EXPECT_EQ(loose.edge(1, 2), EdgeKind::Eq);
    EXPECT_EQ(loose.envy_edge_count(), 0u);
}

TEST(EnvyGraph, MaximalAddableSetMatchesSubsetEnumeration)
{
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 400; ++trial) {
        const std::size_t n = 1 + rng() % 8;
        const auto g = random_graph(rng, n);
        std::uint32_t join = 0;
        std::vector<std::uint32_t> all;
        for (std::uint32_t m = 1; m < (1u << n); ++m)
            if (addable(g, m)) {
                all.push_back(m);
                join |= m;
            }
        // The family is closed under union, so its join is its unique maximum.
        if (join) {
            EXPECT_TRUE(addable(g, join));
        }
        std::uint32_t got = 0;
        for (AgentIndex v : maximal_addable_set(g)) got |= 1u << v;
        EXPECT_EQ(got, join);
        for (auto m : all) EXPECT_EQ(m & ~got, 0u);
    }
}

TEST(EnvyGraph, FoundCyclesAreRealAndCarryEnvy)
{
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 400; ++trial) {
        const std::size_t n = 2 + rng() % 7;
        const auto g = random_graph(rng, n);
        const auto cycle = find_envy_cycle(g);
        // Reference: an envy edge i -> j lies on a cycle iff i is reachable from j.
        bool exists = false;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (g.edge(i, j) == EdgeKind::Envy && g.reachable_from(j)[i]) exists = true;
        ASSERT_EQ(cycle.has_value(), exists);
        if (!cycle) continue;
        bool envy = false;
        std::vector<bool> seen(n, false);
        for (std::size_t t = 0; t < cycle->size(); ++t) {
            const AgentIndex a = (*cycle)[t], b = (*cycle)[(t + 1) % cycle->size()];
            EXPECT_TRUE(g.has_edge(a, b));
            EXPECT_FALSE(seen[a]);
            seen[a] = true;
            envy = envy || g.edge(a, b) == EdgeKind::Envy;
        }
        EXPECT_TRUE(envy);
    }
}

TEST(EnvyGraph, NoAddableSetImpliesAnEnvyCycle)
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 500; ++trial) {
        const auto g = random_graph(rng, 1 + rng() % 8);
        if (maximal_addable_set(g).empty()) {
            EXPECT_TRUE(find_envy_cycle(g).has_value());
        }
    }
}

TEST(EnvyGraph, EliminationRotatesBundlesAndRemovesEnvy)
{
    std::mt19937_64 rng(17);
    int rotations = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto inst = ref::generated(2 + seed % 4, 5, DensityKind::Constant, seed);
        const auto a = ref::random_allocation(inst, rng, 8);
        const auto g = build_envy_graph(inst, a, Scalar(0));
        const auto cycle = find_envy_cycle(g);
        if (!cycle) continue;
        ++rotations;
        const auto b = eliminate_envy_cycle(a, *cycle);
        for (std::size_t t = 0; t < cycle->size(); ++t)
            EXPECT_EQ(b[(*cycle)[t]], a[(*cycle)[(t + 1) % cycle->size()]]);
        EXPECT_LT(build_envy_graph(inst, b, Scalar(0)).envy_edge_count(), g.envy_edge_count());
        for (AgentIndex i = 0; i < inst.agent_count(); ++i)
            EXPECT_GE(ref::bundle_value(inst, i, b[i]), ref::bundle_value(inst, i, a[i]));
    }
    EXPECT_GT(rotations, 20);
}
