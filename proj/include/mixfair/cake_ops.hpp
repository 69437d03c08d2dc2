#ifndef MIXFAIR_CAKE_OPS_HPP
#define MIXFAIR_CAKE_OPS_HPP

// Cake-division subroutines: exact perfect allocation for piecewise-linear
// densities and an eps-envy-free division through cut/eval queries.

#include "mixfair/errors.hpp"
#include "mixfair/instance.hpp"
#include "mixfair/interval_set.hpp"
#include "mixfair/rw_oracle.hpp"

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <iterator>
#include <numeric>
#include <vector>

namespace mixfair {

/// Splits `piece` into k parts that every agent of `inst` values at exactly
/// u_i(piece)/k.
///
/// The piece is refined at all density breakpoints, so every agent's density
/// is linear on each refined segment.  Each segment is cut into 2k equal
/// slices and part j takes slices j and 2k-1-j: a linear function integrates
/// to the same amount over every such mirrored pair.  Every cut point is
/// rational, so the result is exact.
inline std::vector<IntervalSet> perfect_allocation(const Instance& inst, const IntervalSet& piece, std::size_t k,
                                                   QueryCounter* counter = nullptr)
{
    if (k == 0) throw PreconditionError("perfect_allocation: k must be at least 1");
    if (counter) ++counter->perfect_oracle_calls;
    std::vector<std::vector<Interval>> parts(k);
    if (piece.empty()) return std::vector<IntervalSet>(k);

    const auto cuts = inst.breakpoints();
    const Scalar slices(static_cast<long>(2 * k));
    for (const auto& iv : piece) {
        std::vector<Scalar> edges{iv.start};
        auto it = std::upper_bound(cuts.begin(), cuts.end(), iv.start);
        for (; it != cuts.end() && *it < iv.end; ++it) edges.push_back(*it);
        edges.push_back(iv.end);
        for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
            const Scalar& lo = edges[s];
            const Scalar width = (edges[s + 1] - lo) / slices;
            auto slice = [&](std::size_t t) { // t in [0, 2k)
                Scalar a = lo + width * static_cast<long>(t);
                Scalar b = t + 1 == 2 * k ? edges[s + 1] : Scalar(lo + width * static_cast<long>(t + 1));
                return Interval{std::move(a), std::move(b)};
            };
            for (std::size_t j = 0; j < k; ++j) {
                parts[j].push_back(slice(j));
                parts[j].push_back(slice(2 * k - 1 - j));
            }
        }
    }
    std::vector<IntervalSet> out;
    out.reserve(k);
    for (auto& p : parts) out.emplace_back(std::move(p));
    return out;
}

/// Anything answering Robertson-Webb queries the way RwOracle does.
template <typename O>
concept CakeOracle = requires(const O& o, AgentIndex i, const Scalar& x, const IntervalSet& s) {
    { o.eval(i, x, x) } -> std::convertible_to<Scalar>;
    { o.eval(i, s) } -> std::convertible_to<Scalar>;
    { o.cut(i, x, x, CutRounding::AtMost) } -> std::convertible_to<Scalar>;
    { o.tolerance() } -> std::convertible_to<CutTolerance>;
};

/// Cut points agent `agent` makes every `eps` of value along `piece`, read
/// left to right as one stretch.  Consecutive marks enclose value in
/// [eps - tau, eps]; the tail after the last mark is worth at most eps.
template <CakeOracle Oracle>
std::vector<Scalar> value_marks(const Oracle& oracle, AgentIndex agent, const IntervalSet& piece, const Scalar& eps)
{
    std::vector<Scalar> marks;
    Scalar after_mark = oracle.eval(agent, piece); // value right of the last mark
    Scalar since = 0;                              // value between the last mark and the current interval
    const Scalar origin = 0;
    for (const auto& iv : piece) {
        if (after_mark <= eps) break;
        Scalar x = iv.start;
        Scalar at_x = oracle.eval(agent, origin, x); // u([0, x])
        Scalar avail = oracle.eval(agent, origin, iv.end) - at_x;
        while (after_mark > eps) {
            const Scalar need = eps - since;
            if (avail < need) {
                since += avail;
                break;
            }
            Scalar y = oracle.cut(agent, x, need, CutRounding::AtMost);
            Scalar at_y = oracle.eval(agent, origin, y);
            const Scalar got = at_y - at_x;
            after_mark -= since + got;
            avail -= got;
            since = 0;
            x = y;
            at_x = std::move(at_y);
            marks.push_back(std::move(y));
        }
    }
    return marks;
}

/// eps-envy-free division of `piece` among `agents` (result in the same
/// order).  Every agent marks the piece at value steps of eps; in the common
/// refinement each atom is worth at most eps to everyone, and a round-robin
/// over the atoms (agents in the given order, each taking their most valued
/// remaining atom, leftmost on ties) leaves envy of at most one atom.
template <CakeOracle Oracle>
std::vector<IntervalSet> eps_ef_allocation(const Oracle& oracle, const IntervalSet& piece,
                                           const std::vector<AgentIndex>& agents, const Scalar& eps)
{
    if (sgn(eps) <= 0) throw PreconditionError("eps_ef_allocation: eps must be positive");
    if (agents.empty()) throw PreconditionError("eps_ef_allocation: no agents");
    if (eps <= 2 * oracle.tolerance().tau())
        throw PreconditionError("eps_ef_allocation: eps must exceed twice the cut tolerance");
    if (agents.size() == 1 || piece.empty()) {
        std::vector<IntervalSet> out(agents.size());
        out.front() = piece;
        return out;
    }

    // Each agent's marks come out sorted: merge instead of sorting.
    std::vector<Scalar> marks;
    for (AgentIndex a : agents) {
        auto m = value_marks(oracle, a, piece, eps);
        const auto middle = static_cast<std::ptrdiff_t>(marks.size());
        marks.insert(marks.end(), std::make_move_iterator(m.begin()), std::make_move_iterator(m.end()));
        std::inplace_merge(marks.begin(), marks.begin() + middle, marks.end());
    }
    marks.erase(std::unique(marks.begin(), marks.end()), marks.end());

    // Cells are the piece cut at every mark: cell c spans [points[c.lo], points[c.lo + 1]).
    // Atoms are runs of consecutive cells between marks.
    std::vector<Scalar> points;
    std::vector<std::uint32_t> cell_lo;
    std::vector<std::uint32_t> atom_begin; // first cell of each atom
    bool atom_open = false;
    std::size_t next = 0;
    auto new_atom = [&] {
        if (atom_open) atom_begin.push_back(static_cast<std::uint32_t>(cell_lo.size()));
        atom_open = false;
    };
    atom_begin.push_back(0);
    for (const auto& iv : piece) {
        while (next < marks.size() && marks[next] <= iv.start) {
            new_atom();
            ++next;
        }
        points.push_back(iv.start);
        while (next < marks.size() && marks[next] < iv.end) {
            cell_lo.push_back(static_cast<std::uint32_t>(points.size() - 1));
            atom_open = true;
            points.push_back(marks[next]);
            new_atom();
            ++next;
        }
        cell_lo.push_back(static_cast<std::uint32_t>(points.size() - 1));
        atom_open = true;
        points.push_back(iv.end);
    }
    if (!atom_open) atom_begin.pop_back();
    const std::size_t atoms = atom_begin.size();
    atom_begin.push_back(static_cast<std::uint32_t>(cell_lo.size()));

    // Per agent: exact atom values from cumulative values at the points, then
    // the preference order (double keys decide unless equal, which is exact
    // because rational-to-double truncation is monotone).
    const std::size_t k = agents.size();
    std::vector<std::vector<std::uint32_t>> order(k);
    {
        std::vector<Scalar> cumulative(points.size());
        std::vector<Scalar> worth(atoms);
        std::vector<double> key(atoms);
        for (std::size_t a = 0; a < k; ++a) {
            const Scalar origin = 0;
            for (std::size_t p = 0; p < points.size(); ++p) cumulative[p] = oracle.eval(agents[a], origin, points[p]);
            for (std::size_t t = 0; t < atoms; ++t) {
                Scalar w = 0;
                for (std::uint32_t c = atom_begin[t]; c < atom_begin[t + 1]; ++c)
                    w += cumulative[cell_lo[c] + 1] - cumulative[cell_lo[c]];
                key[t] = w.get_d();
                worth[t] = std::move(w);
            }
            order[a].resize(atoms);
            std::iota(order[a].begin(), order[a].end(), std::uint32_t{0});
            std::stable_sort(order[a].begin(), order[a].end(), [&](std::uint32_t x, std::uint32_t y) {
                if (key[x] != key[y]) return key[x] > key[y];
                return worth[x] > worth[y];
            });
        }
    }

    std::vector<bool> taken(atoms, false);
    std::vector<std::size_t> cursor(k, 0);
    std::vector<std::vector<std::uint32_t>> picked(k);
    std::size_t left = atoms;
    for (std::size_t turn = 0; left > 0; turn = (turn + 1) % k) {
        auto& c = cursor[turn];
        while (taken[order[turn][c]]) ++c;
        const std::uint32_t t = order[turn][c];
        taken[t] = true;
        --left;
        picked[turn].push_back(t);
    }

    std::vector<IntervalSet> out;
    out.reserve(k);
    for (auto& atoms_of : picked) {
        std::sort(atoms_of.begin(), atoms_of.end());
        std::vector<Interval> ivs;
        for (std::uint32_t t : atoms_of)
            for (std::uint32_t c = atom_begin[t]; c < atom_begin[t + 1]; ++c)
                ivs.push_back({points[cell_lo[c]], points[cell_lo[c] + 1]});
        out.emplace_back(std::move(ivs));
    }
    return out;
}

} // namespace mixfair

#endif // MIXFAIR_CAKE_OPS_HPP
