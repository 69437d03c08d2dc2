#ifndef MIXFAIR_TRACE_HPP
#define MIXFAIR_TRACE_HPP

#include "mixfair/instance.hpp"
#include "mixfair/interval_set.hpp"
#include "mixfair/rw_oracle.hpp"
#include "mixfair/scalar.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mixfair {

enum class Phase
{
    Init,      ///< EF1 allocation of the goods
    CakeAdd,   ///< cake handed to a proper addable subset
    CycleElim, ///< bundles rotated along an envy cycle
    FinalEf,   ///< addable set is everyone: remaining cake divided among all
};

inline const char* phase_name(Phase p)
{
    switch (p) {
    case Phase::Init: return "INIT";
    case Phase::CakeAdd: return "CAKE_ADD";
    case Phase::CycleElim: return "CYCLE_ELIM";
    case Phase::FinalEf: return "FINAL_EF";
    }
    return "?";
}

/// One loop iteration of a solver.  Counters are cumulative at the end of
/// the round.
struct RoundRecord
{
    std::size_t round = 0;
    Phase phase = Phase::Init;
    std::size_t envy_edges_before = 0;
    std::size_t envy_edges_after = 0;
    std::vector<AgentIndex> addable_set;  ///< maximal addable set at round start
    std::size_t addable_size_after = 0;   ///< its size on the graph after the round
    std::vector<AgentIndex> cycle;        ///< CYCLE_ELIM only
    std::optional<AgentIndex> cutter;     ///< i*, when the piece was capped by a cut
    bool whole_cake = false;              ///< piece was the entire remaining cake
    IntervalSet piece;
    Scalar graph_slack_before;            ///< slack of the envy graph the round acted on
    Scalar graph_slack_after;
    Scalar eps_hat;                       ///< eps-EFM solver only
    Scalar remaining_value_before;        ///< Σ_i u_i(remaining cake)
    Scalar remaining_value_after;
    Scalar welfare_before;                ///< Σ_i u_i(A_i)
    Scalar welfare_after;
    Scalar perfect_residual;              ///< max_{i,j} |u_i(piece_j) − u_i(piece)/k|
    std::optional<Scalar> subroutine_eps; ///< eps handed to the eps-EF division
    Scalar subroutine_envy;               ///< max envy inside that division
    bool dichotomy_holds = true;          ///< addable set non-empty or envy cycle exists
    bool partial_fair = true;             ///< partial allocation (eps-hat-)EFM after the round
    std::uint64_t perfect_oracle_calls = 0;
    std::uint64_t eval_queries = 0;
    std::uint64_t cut_queries = 0;
};

struct SolverTrace
{
    std::string algorithm;
    std::optional<Scalar> eps;
    std::optional<Scalar> eps_prime;
    std::vector<RoundRecord> rounds;
    QueryCounter totals;
    std::size_t round_count = 0; ///< loop iterations, kept even when rounds are not retained

    std::size_t cake_rounds() const
    {
        std::size_t c = 0;
        for (const auto& r : rounds)
            if (r.phase == Phase::CakeAdd || r.phase == Phase::FinalEf) ++c;
        return c;
    }
};

} // namespace mixfair

#endif // MIXFAIR_TRACE_HPP
