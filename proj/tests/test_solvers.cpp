#include "support.hpp"

#include <gtest/gtest.h>

using namespace mixfair;

namespace {

Scalar q(long a, long b = 1) { return make_scalar(a, static_cast<unsigned long>(b)); }

std::size_t envy_edges_of(const Instance& inst, const Allocation& a)
{
    std::size_t c = 0;
    for (AgentIndex i = 0; i < inst.agent_count(); ++i)
        for (AgentIndex j = 0; j < inst.agent_count(); ++j)
            if (ref::bundle_value(inst, i, a[i]) < ref::bundle_value(inst, i, a[j])) ++c;
    return c;
}

} // namespace

TEST(RoundRobin, IsEf1AndFollowsPickingOrder)
{
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto inst = ref::generated(2 + seed % 4, seed % 9, DensityKind::None, seed);
        const auto a = round_robin_ef1(inst);
        EXPECT_TRUE(ref::ef1(inst, a));
        EXPECT_TRUE(ref::is_partition(inst, a));
        EXPECT_EQ(a.unallocated_cake, IntervalSet::unit());
    }
    const auto inst = ref::instance_from(R"({"agents": ["a", "b"], "goods": [
        {"id": "x", "utilities": {"a": 1, "b": 3}}, {"id": "y", "utilities": {"a": 2, "b": 3}},
        {"id": "z", "utilities": {"a": 2, "b": 1}}], "normalize": false})");
    const auto a = round_robin_ef1(inst);
    EXPECT_EQ(a[0].goods, (std::vector<GoodIndex>{1, 2})); // a takes y (tie with z, lower index), then z
    EXPECT_EQ(a[1].goods, (std::vector<GoodIndex>{0}));
}

TEST(SolveEfm, ConstantInstancesAreExactlyEfm)
{
    for (std::uint64_t seed = 0; seed < 80; ++seed) {
        const auto inst = ref::generated(2 + seed % 4, seed % 9, DensityKind::Constant, 100 + seed, 6);
        const auto r = solve_efm(inst);
        EXPECT_TRUE(ref::is_partition(inst, r.allocation)) << seed;
        EXPECT_TRUE(ref::efm(inst, r.allocation, 0, 0)) << seed;
        EXPECT_EQ(r.trace.round_count + 1, r.trace.rounds.size());
    }
}

TEST(SolveEfm, LinearInstancesAreEfmWithinTolerance)
{
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const std::size_t n = 2 + seed % 3;
        const auto inst = ref::generated(n, seed % 6, DensityKind::Linear, 500 + seed, 4);
        const auto r = solve_efm(inst);
        EXPECT_TRUE(ref::is_partition(inst, r.allocation));
        EXPECT_TRUE(ref::efm(inst, r.allocation, 0, Scalar(static_cast<long>(n)) * pow2(-64))) << seed;
    }
}

TEST(SolveEfm, TraceObeysTheRoundInvariants)
{
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const std::size_t n = 2 + seed % 4;
        const auto inst = ref::generated(n, seed % 7, seed % 2 ? DensityKind::Linear : DensityKind::Constant, seed);
        const auto r = solve_efm(inst);
        const auto& rounds = r.trace.rounds;
        ASSERT_FALSE(rounds.empty());
        EXPECT_EQ(rounds.front().phase, Phase::Init);
        for (std::size_t k = 1; k < rounds.size(); ++k) {
            const auto& rec = rounds[k];
            EXPECT_TRUE(rec.dichotomy_holds);
            EXPECT_TRUE(rec.partial_fair);
            EXPECT_EQ(rec.envy_edges_before, rounds[k - 1].envy_edges_after);
            if (rec.phase == Phase::CycleElim) {
                EXPECT_LT(rec.envy_edges_after, rec.envy_edges_before);
                EXPECT_TRUE(rec.addable_set.empty());
            } else {
                EXPECT_LE(rec.envy_edges_after, rec.envy_edges_before);
                EXPECT_EQ(rec.perfect_residual, 0);
                if (!rec.whole_cake) {
                    EXPECT_TRUE(rec.envy_edges_after < rec.envy_edges_before
                                || rec.addable_size_after < rec.addable_set.size());
                }
            }
        }
        EXPECT_LE(r.trace.totals.perfect_oracle_calls, n * n * n + 1);
    }
}

TEST(SolveEfm, GoodsOnlyReturnsRoundRobinVerbatim)
{
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto inst = ref::generated(2 + seed % 4, 1 + seed % 8, DensityKind::None, seed);
        const auto r = solve_efm(inst);
        EXPECT_EQ(r.allocation, round_robin_ef1(inst));
        EXPECT_EQ(r.trace.round_count, 0u);
    }
}

TEST(SolveEfm, CakeOnlyIsEnvyFree)
{
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto inst = ref::generated(2 + seed % 4, 0, DensityKind::Mixed, seed);
        const auto r = solve_efm(inst);
        EXPECT_TRUE(ref::ef(inst, r.allocation, Scalar(static_cast<long>(inst.agent_count())) * pow2(-64)));
    }
}

TEST(SolveEfm, UncheckedRunGivesTheSameAllocation)
{
    const auto inst = ref::generated(4, 5, DensityKind::Mixed, 77);
    SolverOptions quick;
    quick.check_invariants = false;
    quick.keep_trace = false;
    const auto fast = solve_efm(inst, quick);
    const auto full = solve_efm(inst);
    EXPECT_EQ(fast.allocation, full.allocation);
    EXPECT_TRUE(fast.trace.rounds.empty());
    EXPECT_EQ(fast.trace.round_count, full.trace.round_count);
}

TEST(SolveEfm, CycleEliminationRoundsAreExercised)
{
    std::size_t cycles = 0, partial = 0;
    for (std::uint64_t seed = 0; seed < 120; ++seed) {
        const auto inst = ref::generated(2 + seed % 4, seed % 9, DensityKind::Constant, seed, 6);
        for (const auto& rec : solve_efm(inst).trace.rounds) {
            cycles += rec.phase == Phase::CycleElim;
            partial += rec.phase == Phase::CakeAdd && !rec.whole_cake;
        }
    }
    EXPECT_GT(cycles, 0u);
    EXPECT_GT(partial, 0u);
}

TEST(SolveTwoAgents, EfmWithAnEnvyFreeChooser)
{
    for (std::uint64_t seed = 0; seed < 120; ++seed) {
        const auto kind = seed % 3 == 0 ? DensityKind::Linear : DensityKind::Constant;
        const auto inst = ref::generated(2, seed % 9, kind, 900 + seed);
        const Scalar slack = inst.is_piecewise_constant() ? Scalar(0) : 2 * pow2(-64);
        for (auto base : {TwoAgentBase::EF1, TwoAgentBase::EFX}) {
            const auto a = solve_two_agents(inst, base);
            EXPECT_TRUE(ref::is_partition(inst, a));
            EXPECT_TRUE(ref::efm(inst, a, 0, slack)) << seed;
            EXPECT_GE(ref::bundle_value(inst, 1, a[1]), ref::bundle_value(inst, 1, a[0])) << seed;
            if (base == TwoAgentBase::EFX) {
                EXPECT_TRUE(check_efx_mixed(compute_value_matrix(inst, a), slack).pass) << seed;
            }
        }
    }
}

TEST(SolveTwoAgents, RequiresTwoAgents)
{
    EXPECT_THROW(solve_two_agents(ref::generated(3, 2, DensityKind::Constant, 1)), PreconditionError);
}

TEST(SolveEpsEfm, EpsEfmOnRandomInstances)
{
    for (std::uint64_t seed = 0; seed < 24; ++seed) {
        const std::size_t n = 2 + seed % 3;
        const auto inst = ref::generated(n, seed % 5, seed % 2 ? DensityKind::Linear : DensityKind::Constant, seed);
        const Scalar eps = q(1, 5);
        const auto r = solve_eps_efm(inst, eps);
        EXPECT_TRUE(ref::is_partition(inst, r.allocation));
        EXPECT_TRUE(ref::efm(inst, r.allocation, eps, 0)) << seed;
        ASSERT_TRUE(r.trace.eps_prime.has_value());
        EXPECT_EQ(*r.trace.eps_prime, eps * eps / (8 * static_cast<long>(n)));
        for (const auto& rec : r.trace.rounds) {
            EXPECT_LE(rec.eps_hat, eps);
            if (rec.subroutine_eps) {
                EXPECT_LE(rec.subroutine_envy, *rec.subroutine_eps);
            }
            if (rec.phase == Phase::CycleElim) {
                EXPECT_GE(rec.welfare_after - rec.welfare_before, rec.graph_slack_before);
            }
        }
    }
}

TEST(SolveEpsEfm, RejectsNonPositiveEps)
{
    const auto inst = ref::generated(2, 1, DensityKind::Constant, 3);
    EXPECT_THROW(solve_eps_efm(inst, Scalar(0)), PreconditionError);
    EXPECT_THROW(solve_eps_efm(inst, q(-1, 2)), PreconditionError);
}

TEST(SolveEfm, EnvyEdgesNeverGrowAcrossTheRun)
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto inst = ref::generated(3, 4, DensityKind::Constant, 40 + seed);
        const auto r = solve_efm(inst);
        EXPECT_LE(envy_edges_of(inst, r.allocation), r.trace.rounds.front().envy_edges_after);
    }
}
