#ifndef MIXFAIR_SOLVERS_HPP
#define MIXFAIR_SOLVERS_HPP

// Allocation algorithms for mixed goods:
//   round_robin_ef1   EF1 allocation of the indivisible goods
//   solve_efm         EFM for any n, piecewise-linear densities (perfect division oracle)
//   solve_two_agents  EFM for two agents by cut-and-choose on top of EF1/EFX goods
//   solve_eps_efm     eps-EFM through eps-EF cake divisions
//
// solve_efm and solve_eps_efm grow a partial allocation in rounds.  Each round
// either hands cake to the maximal addable set of the envy graph or rotates
// bundles along an envy cycle.  Lemma-level invariants are checked after every
// round unless SolverOptions::check_invariants is off.

#include "mixfair/allocation.hpp"
#include "mixfair/cake_ops.hpp"
#include "mixfair/envy_graph.hpp"
#include "mixfair/errors.hpp"
#include "mixfair/fairness.hpp"
#include "mixfair/instance.hpp"
#include "mixfair/oracle.hpp"
#include "mixfair/rw_oracle.hpp"
#include "mixfair/trace.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mixfair {

struct SolverOptions
{
    bool check_invariants = true;
    bool keep_trace = true;
    CutTolerance tolerance;
};

struct SolverResult
{
    Allocation allocation;
    SolverTrace trace;
};

/// Agents in index order repeatedly take their most valued remaining good
/// (lowest good index on ties).
inline Allocation round_robin_ef1(const Instance& inst)
{
    const std::size_t n = inst.agent_count();
    Allocation a = Allocation::empty(n);
    std::vector<bool> taken(inst.good_count(), false);
    std::size_t left = inst.good_count();
    for (AgentIndex turn = 0; left > 0; turn = (turn + 1) % n) {
        std::optional<GoodIndex> pick;
        for (GoodIndex g = 0; g < inst.good_count(); ++g)
            if (!taken[g] && (!pick || inst.utility(turn, g) > inst.utility(turn, *pick))) pick = g;
        taken[*pick] = true;
        a.bundles[turn].add_good(*pick);
        --left;
    }
    return a;
}

namespace detail {

// Allocation plus a ValueMatrix kept in sync with it, so rounds never
// re-evaluate whole bundles.
class SolverState
{
public:
    SolverState(const Instance& inst, Allocation start, const RwOracle& rw)
        : inst_(&inst), rw_(&rw), alloc_(std::move(start))
    {
        const std::size_t n = inst.agent_count();
        vm_ = compute_value_matrix(inst, alloc_, rw.counter());
        (void)n;
    }

    const Allocation& allocation() const { return alloc_; }
    Allocation& allocation() { return alloc_; }
    const ValueMatrix& values() const { return vm_; }
    const IntervalSet& remaining() const { return alloc_.unallocated_cake; }

    /// Adds `piece` (part of the remaining cake) to agent j's bundle; returns
    /// u_i(piece) for every agent i.
    std::vector<Scalar> give(AgentIndex j, const IntervalSet& piece)
    {
        std::vector<Scalar> worth(vm_.n);
        if (piece.empty()) return worth;
        for (AgentIndex i = 0; i < vm_.n; ++i) {
            worth[i] = rw_->eval(i, piece);
            vm_.value[i][j] += worth[i];
            vm_.cake_value[i][j] += worth[i];
        }
        vm_.has_cake[j] = true;
        alloc_.bundles[j].cake.absorb(piece);
        alloc_.unallocated_cake = alloc_.unallocated_cake.minus(piece);
        return worth;
    }

    void rotate(const std::vector<AgentIndex>& cycle)
    {
        alloc_ = eliminate_envy_cycle(std::move(alloc_), cycle);
        auto rotate_cols = [&](auto& matrix) {
            for (auto& row : matrix) {
                auto first = std::move(row[cycle.front()]);
                for (std::size_t t = 0; t + 1 < cycle.size(); ++t) row[cycle[t]] = std::move(row[cycle[t + 1]]);
                row[cycle.back()] = std::move(first);
            }
        };
        rotate_cols(vm_.value);
        rotate_cols(vm_.cake_value);
        rotate_cols(vm_.best_good);
        rotate_cols(vm_.best_good_value);
        rotate_cols(vm_.worst_good_value);
        auto rotate_flags = [&](std::vector<bool>& v) {
            const bool first = v[cycle.front()];
            for (std::size_t t = 0; t + 1 < cycle.size(); ++t) v[cycle[t]] = v[cycle[t + 1]];
            v[cycle.back()] = first;
        };
        rotate_flags(vm_.has_cake);
        rotate_flags(vm_.has_goods);
    }

    Scalar welfare() const
    {
        Scalar w = 0;
        for (AgentIndex i = 0; i < vm_.n; ++i) w += vm_.value[i][i];
        return w;
    }

    /// Σ_i u_i(remaining cake), uncounted: bookkeeping for the trace only.
    Scalar remaining_value_sum() const
    {
        RwOracle quiet(*inst_, nullptr, rw_->tolerance());
        Scalar s = 0;
        for (AgentIndex i = 0; i < vm_.n; ++i) s += quiet.eval(i, alloc_.unallocated_cake);
        return s;
    }

private:
    const Instance* inst_;
    const RwOracle* rw_;
    Allocation alloc_;
    ValueMatrix vm_;
};

inline void fail(const std::string& algorithm, std::size_t round, const std::string& what)
{
    throw InvariantViolation(algorithm + ", round " + std::to_string(round) + ": " + what);
}

inline std::vector<AgentIndex> complement(std::size_t n, const std::vector<AgentIndex>& s)
{
    std::vector<bool> in(n, false);
    for (AgentIndex a : s) in[a] = true;
    std::vector<AgentIndex> out;
    for (AgentIndex a = 0; a < n; ++a)
        if (!in[a]) out.push_back(a);
    return out;
}

inline void stamp(RoundRecord& rec, const QueryCounter& q)
{
    rec.perfect_oracle_calls = q.perfect_oracle_calls;
    rec.eval_queries = q.eval_count;
    rec.cut_queries = q.cut_count;
}

inline RoundRecord init_record(SolverState& state, const EnvyGraph& g, const QueryCounter& q)
{
    RoundRecord rec;
    rec.phase = Phase::Init;
    rec.envy_edges_before = rec.envy_edges_after = g.envy_edge_count();
    rec.addable_set = maximal_addable_set(g);
    rec.addable_size_after = rec.addable_set.size();
    rec.graph_slack_before = rec.graph_slack_after = g.slack();
    rec.remaining_value_before = rec.remaining_value_after = state.remaining_value_sum();
    rec.welfare_before = rec.welfare_after = state.welfare();
    stamp(rec, q);
    return rec;
}

// Cuts the prefix of the remaining cake at the leftmost cut point
// x_i = cut(i, target_i) over the agents whose target is reachable; returns
// the prefix and i*.  Ties go to the lowest agent index.
inline std::pair<IntervalSet, AgentIndex> capped_prefix(const RwOracle& rw, const IntervalSet& remaining,
                                                        const std::vector<AgentIndex>& cutters,
                                                        const std::vector<Scalar>& targets)
{
    std::optional<Scalar> best;
    AgentIndex who = cutters.front();
    for (std::size_t k = 0; k < cutters.size(); ++k) {
        const Scalar x = rw.cut_in(cutters[k], remaining, targets[k], CutRounding::AtLeast);
        if (!best || x < *best) {
            best = x;
            who = cutters[k];
        }
    }
    return {remaining.split_at(*best).first, who};
}

} // namespace detail

/// EFM allocation of goods and cake for any number of agents.
inline SolverResult solve_efm(const Instance& inst, const SolverOptions& opt = {})
{
    const std::string algo = "efm";
    const std::size_t n = inst.agent_count();
    QueryCounter q;
    RwOracle rw(inst, &q, opt.tolerance);
    // Sloped densities give tau-approximate cut points; equality edges then
    // absorb the overshoot (see README, "Numerics").
    const Scalar slack = inst.is_piecewise_constant() ? Scalar(0) : opt.tolerance.tau();

    SolverResult out;
    out.trace.algorithm = algo;
    detail::SolverState state(inst, round_robin_ef1(inst), rw);
    EnvyGraph graph(state.values().value, slack);
    if (opt.keep_trace) out.trace.rounds.push_back(detail::init_record(state, graph, q));

    const std::uint64_t oracle_ceiling = static_cast<std::uint64_t>(n) * n * n + 1;
    // A worthless cake is left unallocated: the goods allocation is final.
    const bool cake_is_null = inst.cake_is_null();
    std::size_t round = 0;
    while (!cake_is_null && !state.remaining().empty()) {
        ++round;
        RoundRecord rec;
        rec.round = round;
        rec.envy_edges_before = graph.envy_edge_count();
        rec.addable_set = maximal_addable_set(graph);
        rec.graph_slack_before = rec.graph_slack_after = slack;
        if (opt.keep_trace) {
            rec.remaining_value_before = state.remaining_value_sum();
            rec.welfare_before = state.welfare();
        }
        const auto& S = rec.addable_set;

        if (!S.empty()) {
            const IntervalSet remaining = state.remaining();
            IntervalSet piece;
            if (S.size() == n) {
                rec.phase = Phase::FinalEf;
                piece = remaining;
            } else {
                rec.phase = Phase::CakeAdd;
                const auto outside = detail::complement(n, S);
                const Scalar size_s(static_cast<long>(S.size()));
                std::vector<AgentIndex> cutters;
                std::vector<Scalar> targets;
                for (AgentIndex i : outside) {
                    std::optional<Scalar> delta;
                    for (AgentIndex j : S) {
                        const Scalar gap = state.values().value[i][i] - state.values().value[i][j];
                        if (!delta || gap < *delta) delta = gap;
                    }
                    const Scalar target = size_s * *delta;
                    if (rw.eval(i, remaining) >= target) {
                        cutters.push_back(i);
                        targets.push_back(target);
                    }
                }
                if (cutters.empty()) {
                    piece = remaining;
                } else {
                    auto [prefix, who] = detail::capped_prefix(rw, remaining, cutters, targets);
                    piece = std::move(prefix);
                    rec.cutter = who;
                }
            }
            rec.whole_cake = piece == remaining;
            const auto parts = perfect_allocation(inst, piece, S.size(), &q);
            std::vector<Scalar> whole_worth(n);
            for (std::size_t t = 0; t < S.size(); ++t) {
                const auto worth = state.give(S[t], parts[t]);
                for (AgentIndex i = 0; i < n; ++i) whole_worth[i] += worth[i];
            }
            // Residual against the piece's value, re-read from the parts.
            Scalar residual = 0;
            RwOracle quiet(inst, nullptr, opt.tolerance);
            for (std::size_t t = 0; t < S.size(); ++t)
                for (AgentIndex i = 0; i < n; ++i) {
                    Scalar d = quiet.eval(i, parts[t]) - whole_worth[i] / static_cast<long>(S.size());
                    if (sgn(d) < 0) d = -d;
                    if (d > residual) residual = d;
                }
            rec.perfect_residual = residual;
            if (opt.keep_trace) rec.piece = std::move(piece);
        } else {
            rec.phase = Phase::CycleElim;
            auto cycle = find_envy_cycle(graph);
            if (!cycle) {
                rec.dichotomy_holds = false;
                detail::fail(algo, round, "no addable set and no envy cycle");
            }
            rec.cycle = *cycle;
            state.rotate(*cycle);
        }

        EnvyGraph next(state.values().value, slack);
        rec.envy_edges_after = next.envy_edge_count();
        rec.addable_size_after = maximal_addable_set(next).size();
        rec.partial_fair = check_efm(state.values(), default_verify_slack(inst, opt.tolerance)).pass;
        if (opt.keep_trace) {
            rec.remaining_value_after = state.remaining_value_sum();
            rec.welfare_after = state.welfare();
        }
        detail::stamp(rec, q);

        if (opt.check_invariants) {
            if (!rec.partial_fair) detail::fail(algo, round, "partial allocation is not EFM");
            if (rec.phase == Phase::CycleElim) {
                if (rec.envy_edges_after >= rec.envy_edges_before)
                    detail::fail(algo, round, "cycle elimination did not remove an envy edge");
            } else {
                if (rec.envy_edges_after > rec.envy_edges_before)
                    detail::fail(algo, round, "cake-adding round created an envy edge");
                if (!rec.whole_cake && rec.envy_edges_after == rec.envy_edges_before
                    && rec.addable_size_after >= rec.addable_set.size())
                    detail::fail(algo, round, "partial cake round shrank neither envy edges nor the addable set");
                if (sgn(rec.perfect_residual) != 0) detail::fail(algo, round, "perfect division is not exact");
            }
            if (q.perfect_oracle_calls > oracle_ceiling)
                detail::fail(algo, round, "perfect-division calls exceed n^3 + 1");
        }
        if (opt.keep_trace) out.trace.rounds.push_back(std::move(rec));
        graph = std::move(next);
    }
    out.trace.round_count = round;
    out.trace.totals = q;
    out.allocation = state.allocation();
    return out;
}

enum class TwoAgentBase
{
    EF1,
    EFX,
};

/// Two-agent EFM: agent 0 splits the goods, balances the two bundles with the
/// cake, agent 1 picks.  Agent 1 ends up envy-free.
///
/// The goods split is EF1 (or EFX) between two copies of agent 0, so agent 0
/// sees M2 as at least M1 minus one good (any good for EFX) whichever bundle
/// is larger.  That is exactly what agent 0 needs when it keeps M2 plus cake.
inline Allocation solve_two_agents(const Instance& inst, TwoAgentBase base = TwoAgentBase::EF1,
                                   const SolverOptions& opt = {}, QueryCounter* counter = nullptr)
{
    if (inst.agent_count() != 2)
        throw PreconditionError("two-agent solver needs exactly 2 agents, got " + std::to_string(inst.agent_count()));
    RwOracle rw(inst, counter, opt.tolerance);

    const Instance cutter_twins({inst.agent_names()[0], inst.agent_names()[0] + "'"}, inst.good_names(),
                                {inst.valuation(0), inst.valuation(0)}, inst.cake_offsets());
    Allocation goods;
    if (base == TwoAgentBase::EF1) {
        goods = round_robin_ef1(cutter_twins);
    } else {
        auto efx = efx_brute_force(cutter_twins);
        if (!efx) throw InvariantViolation("no EFX split found for two identical agents");
        goods = std::move(*efx);
    }
    auto worth = [&](AgentIndex i, const Bundle& b) {
        Scalar v = 0;
        for (GoodIndex g : b.goods) v += inst.utility(i, g);
        return v;
    };
    Bundle m1 = goods.bundles[0];
    Bundle m2 = goods.bundles[1];
    if (worth(0, m1) < worth(0, m2)) std::swap(m1, m2);

    const IntervalSet cake = inst.cake_is_null() ? IntervalSet() : IntervalSet::unit();
    const Scalar cake_worth = rw.eval(0, Scalar(0), Scalar(1));
    const Scalar u_m1 = worth(0, m1);
    const Scalar u_m2 = worth(0, m2);
    if (u_m1 <= u_m2 + cake_worth) {
        // u_0(M1 ∪ [0,y)) = u_0(M2 ∪ [y,1))
        const Scalar target = (cake_worth + u_m2 - u_m1) / 2;
        const Scalar y = rw.cut(0, Scalar(0), target, CutRounding::AtLeast);
        auto [left, right] = cake.split_at(y);
        m1.cake = std::move(left);
        m2.cake = std::move(right);
    } else {
        m2.cake = cake;
    }

    const Scalar chooser_1 = worth(1, m1) + rw.eval(1, m1.cake);
    const Scalar chooser_2 = worth(1, m2) + rw.eval(1, m2.cake);
    Allocation out = Allocation::empty(2);
    out.unallocated_cake = IntervalSet::unit().minus(cake);
    if (chooser_1 > chooser_2) {
        out.bundles[1] = std::move(m1);
        out.bundles[0] = std::move(m2);
    } else {
        out.bundles[1] = std::move(m2);
        out.bundles[0] = std::move(m1);
    }
    return out;
}

/// eps-EFM allocation.  eps-hat starts at eps/4 and grows by eps^2/(8n) per
/// partial cake round and by eps/4 on the final division; it never exceeds eps.
inline SolverResult solve_eps_efm(const Instance& inst, const Scalar& eps, const SolverOptions& opt = {})
{
    const std::string algo = "eps-efm";
    if (sgn(eps) <= 0) throw PreconditionError("eps must be positive, got " + to_string(eps));
    const std::size_t n = inst.agent_count();
    QueryCounter q;
    RwOracle rw(inst, &q, opt.tolerance);
    const Scalar quarter = eps / 4;
    const Scalar eps_prime = eps * eps / (8 * static_cast<long>(n));
    const Scalar verify_slack = default_verify_slack(inst, opt.tolerance);
    Scalar eps_hat = quarter;

    SolverResult out;
    out.trace.algorithm = algo;
    out.trace.eps = eps;
    out.trace.eps_prime = eps_prime;
    detail::SolverState state(inst, round_robin_ef1(inst), rw);
    EnvyGraph graph(state.values().value, eps_hat);
    if (opt.keep_trace) {
        auto rec = detail::init_record(state, graph, q);
        rec.eps_hat = eps_hat;
        out.trace.rounds.push_back(std::move(rec));
    }

    // A worthless cake is left unallocated: the goods allocation is final.
    const bool cake_is_null = inst.cake_is_null();
    std::size_t round = 0;
    while (!cake_is_null && !state.remaining().empty()) {
        ++round;
        RoundRecord rec;
        rec.round = round;
        rec.envy_edges_before = graph.envy_edge_count();
        rec.addable_set = maximal_addable_set(graph);
        rec.graph_slack_before = eps_hat;
        rec.remaining_value_before = state.remaining_value_sum();
        rec.welfare_before = state.welfare();
        const auto& S = rec.addable_set;
        const Scalar eps_hat_before = eps_hat;

        if (!S.empty()) {
            const IntervalSet remaining = state.remaining();
            IntervalSet piece;
            Scalar sub_eps;
            if (S.size() == n) {
                rec.phase = Phase::FinalEf;
                piece = remaining;
                sub_eps = quarter;
                eps_hat += quarter;
            } else {
                rec.phase = Phase::CakeAdd;
                std::vector<AgentIndex> cutters;
                for (AgentIndex i : detail::complement(n, S))
                    if (rw.eval(i, remaining) >= eps_hat) cutters.push_back(i);
                if (cutters.empty()) {
                    piece = remaining;
                } else {
                    std::vector<Scalar> targets(cutters.size(), eps_hat);
                    auto [prefix, who] = detail::capped_prefix(rw, remaining, cutters, targets);
                    piece = std::move(prefix);
                    rec.cutter = who;
                }
                sub_eps = eps_prime;
                eps_hat += eps_prime;
            }
            rec.whole_cake = piece == remaining;
            const auto parts = eps_ef_allocation(rw, piece, S, sub_eps);
            // Envy inside the division, measured on the parts alone.
            std::vector<std::vector<Scalar>> part_worth(S.size());
            for (std::size_t t = 0; t < S.size(); ++t) {
                const auto worth = state.give(S[t], parts[t]);
                part_worth[t] = worth;
            }
            Scalar envy = 0;
            for (std::size_t a = 0; a < S.size(); ++a)
                for (std::size_t b = 0; b < S.size(); ++b) {
                    const Scalar d = part_worth[b][S[a]] - part_worth[a][S[a]];
                    if (d > envy) envy = d;
                }
            rec.subroutine_eps = sub_eps;
            rec.subroutine_envy = envy;
            if (opt.keep_trace) rec.piece = std::move(piece);
        } else {
            rec.phase = Phase::CycleElim;
            auto cycle = find_envy_cycle(graph);
            if (!cycle) {
                rec.dichotomy_holds = false;
                detail::fail(algo, round, "no addable set and no eps-hat envy cycle");
            }
            rec.cycle = *cycle;
            state.rotate(*cycle);
        }

        EnvyGraph next(state.values().value, eps_hat);
        rec.graph_slack_after = eps_hat;
        rec.eps_hat = eps_hat;
        rec.envy_edges_after = next.envy_edge_count();
        rec.addable_size_after = maximal_addable_set(next).size();
        rec.partial_fair = check_eps_efm(state.values(), eps_hat, verify_slack).pass;
        rec.remaining_value_after = state.remaining_value_sum();
        rec.welfare_after = state.welfare();
        detail::stamp(rec, q);

        if (opt.check_invariants) {
            if (!rec.partial_fair) detail::fail(algo, round, "partial allocation is not eps-hat-EFM");
            if (eps_hat > eps) detail::fail(algo, round, "eps-hat exceeds eps");
            if (rec.subroutine_eps && rec.subroutine_envy > *rec.subroutine_eps)
                detail::fail(algo, round, "eps-EF division exceeds its envy bound");
            if (rec.phase == Phase::CycleElim) {
                if (rec.welfare_after - rec.welfare_before < eps_hat_before)
                    detail::fail(algo, round, "cycle elimination raised welfare by less than eps-hat");
                if (rec.envy_edges_after >= rec.envy_edges_before)
                    detail::fail(algo, round, "cycle elimination did not remove an envy edge");
            } else if (!rec.whole_cake && rec.phase == Phase::CakeAdd) {
                if (rec.remaining_value_before - rec.remaining_value_after < eps_hat_before)
                    detail::fail(algo, round, "remaining cake value dropped by less than eps-hat");
            }
        }
        if (opt.keep_trace) out.trace.rounds.push_back(std::move(rec));
        graph = std::move(next);
    }
    out.trace.round_count = round;
    out.trace.totals = q;
    out.allocation = state.allocation();
    return out;
}

} // namespace mixfair

#endif // MIXFAIR_SOLVERS_HPP
