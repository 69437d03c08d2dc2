#ifndef MIXFAIR_RW_ORACLE_HPP
#define MIXFAIR_RW_ORACLE_HPP

// Robertson-Webb style access to the cake: evaluation and cut queries with
// query accounting.

#include "mixfair/errors.hpp"
#include "mixfair/instance.hpp"
#include "mixfair/interval_set.hpp"
#include "mixfair/scalar.hpp"

#include <cmath>
#include <cstdint>
#include <string>

namespace mixfair {

struct QueryCounter
{
    std::uint64_t eval_count = 0;
    std::uint64_t cut_count = 0;
    std::uint64_t perfect_oracle_calls = 0;

    bool operator==(const QueryCounter&) const = default;
};

/// Which side of an irrational cut point to return.  Cuts whose exact
/// answer is rational ignore this and are exact.
enum class CutRounding
{
    AtLeast, ///< value in [target, target + tau]
    AtMost,  ///< value in [target - tau, target]
};

/// tau = 2^-bits, the value tolerance of approximated cut points.
struct CutTolerance
{
    long bits = 64;

    Scalar tau() const { return pow2(-bits); }
};

namespace detail {

// Smallest y in [from, seg.end] with ∫_from^y f = need (need > 0, reachable
// inside the segment).
inline Scalar solve_in_segment(const DensitySegment& seg, const Scalar& from, const Scalar& need,
                               CutRounding rounding, const CutTolerance& tol)
{
    const Scalar f0 = seg.at(from);
    if (seg.is_constant()) return from + need / f0;

    const Scalar b = seg.slope();
    const Scalar disc = f0 * f0 + 2 * b * need;
    if (auto root = exact_sqrt(disc)) return from + 2 * need / (f0 + *root);

    // Irrational root: bracket it on the dyadic grid of step 2^-K, chosen so
    // that one grid step is worth at most tau/2 to this agent.
    const long K = tol.bits + ceil_bit_length(seg.max_value()) + 1;
    const Scalar scale = pow2(K);
    const Scalar step = pow2(-K);
    auto point = [&](const mpz_class& idx) {
        Scalar y(idx);
        y *= step;
        if (y < from) return from;
        if (y > seg.end) return seg.end;
        return y;
    };
    const Scalar half_b = b / 2;
    auto at_most = [&](const mpz_class& idx) {
        // ∫_from^y f = d·(f0 + b/2·d), d = y − from
        Scalar d = point(idx) - from;
        Scalar rate = half_b * d;
        rate += f0;
        d *= rate;
        return d <= need;
    };

    mpz_class idx;
    bool seeded = false;
    {
        const double zd = 2.0 * need.get_d() / (f0.get_d() + std::sqrt(disc.get_d()));
        if (std::isfinite(zd) && zd >= 0) {
            Scalar z(zd);
            for (int it = 0; it < 1; ++it) { // double seed is ~2^-52 relative; one step squares that
                const Scalar deriv = b * z + f0;
                if (sgn(deriv) <= 0) break;
                z -= (b / 2 * z * z + f0 * z - need) / deriv;
                Scalar zs = z * scale;
                z = Scalar(floor_of(zs)) * step; // keep denominators bounded
            }
            idx = floor_of((from + z) * scale);
            for (int adjust = 0; adjust < 4; ++adjust) {
                if (!at_most(idx)) { idx -= 1; continue; }
                if (at_most(idx + 1)) { idx += 1; continue; }
                seeded = true;
                break;
            }
        }
    }
    if (!seeded) {
        mpz_class lo = floor_of(from * scale) - 1; // point(lo) == from: value 0 <= need
        mpz_class hi = ceil_of(seg.end * scale) + 1; // point(hi) == end: value > need
        while (hi - lo > 1) {
            mpz_class mid = (lo + hi) / 2;
            if (at_most(mid)) lo = mid; else hi = mid;
        }
        idx = lo;
    }
    return rounding == CutRounding::AtMost ? point(idx) : point(idx + 1);
}

} // namespace detail

/// Query interface over a piecewise-linear Instance.  Counting is skipped when
/// no counter is attached.
class RwOracle
{
public:
    explicit RwOracle(const Instance& inst, QueryCounter* counter = nullptr, CutTolerance tol = {})
        : inst_(&inst), counter_(counter), tol_(tol)
    {}

    const Instance& instance() const { return *inst_; }
    QueryCounter* counter() const { return counter_; }
    const CutTolerance& tolerance() const { return tol_; }
    std::size_t agent_count() const { return inst_->agent_count(); }

    /// u_agent([x, y]).
    Scalar eval(AgentIndex agent, const Scalar& x, const Scalar& y) const
    {
        if (sgn(x) < 0 || y > 1 || x > y)
            throw PreconditionError("eval_query: interval [" + to_string(x) + ", " + to_string(y)
                                    + "] is not inside [0, 1]");
        if (counter_) ++counter_->eval_count;
        if (x == y) return Scalar(0);
        const auto& v = inst_->valuation(agent);
        if (sgn(x) == 0) return v.cumulative(y);
        return v.cumulative(y) - v.cumulative(x);
    }

    Scalar eval(AgentIndex agent, const IntervalSet& s) const
    {
        Scalar total = 0;
        for (const auto& iv : s) total += eval(agent, iv.start, iv.end);
        return total;
    }

    /// Smallest y with u_agent([start, y]) = target, up to tau for
    /// irrational points (see CutRounding).
    Scalar cut(AgentIndex agent, const Scalar& start, const Scalar& target,
               CutRounding rounding = CutRounding::AtLeast) const
    {
        if (sgn(start) < 0 || start > 1)
            throw PreconditionError("cut_query: start " + to_string(start) + " outside [0, 1]");
        if (sgn(target) < 0) throw PreconditionError("cut_query: negative target");
        if (counter_) ++counter_->cut_count;
        const auto& v = inst_->valuation(agent);
        const Scalar base = v.cumulative(start);
        const Scalar goal = base + target;
        if (goal > v.cake_total())
            throw PreconditionError("cut_query: target " + to_string(target)
                                    + " exceeds the value available right of " + to_string(start));
        if (sgn(target) == 0) return start;

        const auto& segs = v.density();
        std::size_t k = v.segment_of(start);
        while (v.prefix(k + 1) < goal) ++k;
        const Scalar from = segs[k].start > start ? segs[k].start : start;
        const Scalar need = goal - (from == start ? base : v.prefix(k));
        return detail::solve_in_segment(segs[k], from, need, rounding, tol_);
    }

    /// Cut measured along `piece` read left to right as one concatenated
    /// stretch.  Returns p such that u_agent(piece ∩ [0, p)) ≈ target.
    Scalar cut_in(AgentIndex agent, const IntervalSet& piece, const Scalar& target,
                  CutRounding rounding = CutRounding::AtLeast) const
    {
        if (sgn(target) < 0) throw PreconditionError("cut_query: negative target");
        Scalar remaining = target;
        Scalar position = piece.empty() ? Scalar(0) : piece.intervals().front().start;
        for (const auto& iv : piece) {
            if (sgn(remaining) == 0) return position;
            const Scalar worth = eval(agent, iv.start, iv.end);
            if (remaining <= worth) return cut(agent, iv.start, remaining, rounding);
            remaining -= worth;
            position = iv.end;
        }
        if (sgn(remaining) == 0) return position;
        throw PreconditionError("cut_query: target exceeds the value of the piece");
    }

private:
    const Instance* inst_;
    QueryCounter* counter_;
    CutTolerance tol_;
};

/// u_agent([x, y]).  Pass a counter to account the query.
inline Scalar eval_query(const Instance& inst, AgentIndex agent, const Scalar& x, const Scalar& y,
                         QueryCounter* counter = nullptr)
{
    return RwOracle(inst, counter).eval(agent, x, y);
}

inline Scalar cut_query(const Instance& inst, AgentIndex agent, const Scalar& start,
                        const Scalar& target, QueryCounter* counter = nullptr,
                        CutRounding rounding = CutRounding::AtLeast, CutTolerance tol = {})
{
    return RwOracle(inst, counter, tol).cut(agent, start, target, rounding);
}

inline Scalar value_of_interval_set(const Instance& inst, AgentIndex agent, const IntervalSet& s,
                                    QueryCounter* counter = nullptr)
{
    return RwOracle(inst, counter).eval(agent, s);
}

} // namespace mixfair

#endif // MIXFAIR_RW_ORACLE_HPP
