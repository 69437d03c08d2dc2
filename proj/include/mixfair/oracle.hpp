#ifndef MIXFAIR_ORACLE_HPP
#define MIXFAIR_ORACLE_HPP

// Brute-force ground truth for small instances.  The cake is discretised into
// r equal atoms; atoms every agent values identically are interchangeable, so
// the search runs over how many atoms of each such class each agent gets.
// Utilities, and therefore every fairness and welfare verdict, depend only on
// those counts.

#include "mixfair/allocation.hpp"
#include "mixfair/errors.hpp"
#include "mixfair/fairness.hpp"
#include "mixfair/instance.hpp"
#include "mixfair/rw_oracle.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mixfair {

inline constexpr std::uint64_t kDefaultEnumerationBudget = 10'000'000;

namespace detail {

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, std::uint64_t cap)
{
    if (a == 0 || b == 0) return 0;
    if (a > cap / b) return cap + 1;
    return a * b;
}

inline std::uint64_t checked_pow(std::uint64_t base, std::size_t exp, std::uint64_t cap)
{
    std::uint64_t r = 1;
    for (std::size_t k = 0; k < exp; ++k) {
        r = checked_mul(r, base, cap);
        if (r > cap) return r;
    }
    return r;
}

} // namespace detail

/// n^m, saturating just above `cap`.
inline std::uint64_t count_good_allocations(const Instance& inst, std::uint64_t cap = kDefaultEnumerationBudget)
{
    return detail::checked_pow(inst.agent_count(), inst.good_count(), cap);
}

/// Calls `visit(owner)` for every assignment of goods to agents, owner[g]
/// being g's agent, in lexicographic order of `owner`.  `visit` may return
/// false to stop early.
inline void enumerate_good_allocations(const Instance& inst,
                                       const std::function<bool(const std::vector<AgentIndex>&)>& visit,
                                       std::uint64_t budget = kDefaultEnumerationBudget)
{
    const std::size_t n = inst.agent_count();
    const std::size_t m = inst.good_count();
    if (count_good_allocations(inst, budget) > budget)
        throw BudgetExceeded("enumerating " + std::to_string(n) + "^" + std::to_string(m)
                             + " goods allocations exceeds the budget of " + std::to_string(budget));
    std::vector<AgentIndex> owner(m, 0);
    while (true) {
        if (!visit(owner)) return;
        std::size_t pos = m;
        while (pos > 0) {
            --pos;
            if (++owner[pos] < n) break;
            owner[pos] = 0;
            if (pos == 0) return;
        }
        if (m == 0) return;
    }
}

inline Allocation goods_allocation_from_owner(const Instance& inst, const std::vector<AgentIndex>& owner)
{
    Allocation a = Allocation::empty(inst.agent_count());
    for (GoodIndex g = 0; g < owner.size(); ++g) a.bundles[owner[g]].add_good(g);
    return a;
}

/// EFX among goods: ∀i,j ∀g ∈ A_j: u_i(A_i) ≥ u_i(A_j \ {g}).  Cake is ignored.
inline bool is_efx_goods(const Instance& inst, const std::vector<AgentIndex>& owner)
{
    const std::size_t n = inst.agent_count();
    for (AgentIndex i = 0; i < n; ++i) {
        std::vector<Scalar> worth(n);
        std::vector<std::optional<Scalar>> cheapest(n);
        for (GoodIndex g = 0; g < owner.size(); ++g) {
            const Scalar& u = inst.utility(i, g);
            worth[owner[g]] += u;
            if (!cheapest[owner[g]] || u < *cheapest[owner[g]]) cheapest[owner[g]] = u;
        }
        for (AgentIndex j = 0; j < n; ++j)
            if (j != i && cheapest[j] && worth[i] < worth[j] - *cheapest[j]) return false;
    }
    return true;
}

/// First enumerated goods-only allocation that is EFX, if any.
inline std::optional<Allocation> efx_brute_force(const Instance& inst,
                                                 std::uint64_t budget = kDefaultEnumerationBudget)
{
    std::optional<Allocation> found;
    enumerate_good_allocations(
        inst,
        [&](const std::vector<AgentIndex>& owner) {
            if (!is_efx_goods(inst, owner)) return true;
            found = goods_allocation_from_owner(inst, owner);
            return false;
        },
        budget);
    return found;
}

/// EFX toward cake-free bundles, EF toward the rest.
inline NotionCheck check_efx_mixed(const ValueMatrix& vm, const Scalar& slack = 0)
{
    NotionCheck out;
    for (std::size_t i = 0; i < vm.n; ++i)
        for (std::size_t j = 0; j < vm.n; ++j) {
            if (i == j) continue;
            const bool ok = vm.has_cake[j] ? ef_clause(vm, i, j, Scalar(0), slack) : efx_clause(vm, i, j, slack);
            if (!ok) {
                out.pass = false;
                out.violations.push_back({i, j});
            }
        }
    return out;
}

/// The unit cake cut into `resolution` equal atoms [t/r, (t+1)/r).
struct GridCakeModel
{
    std::size_t resolution = 10;

    Interval atom(std::size_t t) const
    {
        const long r = static_cast<long>(resolution);
        return {make_scalar(static_cast<long>(t), r), make_scalar(static_cast<long>(t) + 1, r)};
    }
};

/// One point of the grid allocation space: goods owners plus, per atom
/// class, how many of its atoms each agent receives.
struct GridPoint
{
    std::vector<AgentIndex> owner;
    std::vector<std::vector<std::size_t>> class_counts; ///< [class][agent]
};

/// Enumerates a GridCakeModel allocation space.
class GridSpace
{
public:
    GridSpace(const Instance& inst, GridCakeModel grid, std::uint64_t budget = kDefaultEnumerationBudget)
        : inst_(&inst), grid_(grid), budget_(budget)
    {
        if (grid.resolution == 0) throw PreconditionError("grid resolution must be at least 1");
        const std::size_t n = inst.agent_count();
        RwOracle rw(inst);
        std::map<std::vector<Scalar>, std::size_t> class_of;
        for (std::size_t t = 0; t < grid.resolution; ++t) {
            const Interval iv = grid.atom(t);
            std::vector<Scalar> worth(n);
            for (AgentIndex i = 0; i < n; ++i) worth[i] = rw.eval(i, iv.start, iv.end);
            auto [it, fresh] = class_of.try_emplace(worth, class_atoms_.size());
            if (fresh) {
                class_atoms_.emplace_back();
                class_worth_.push_back(worth);
            }
            class_atoms_[it->second].push_back(t);
        }
        std::uint64_t total = count_good_allocations(inst, budget);
        for (const auto& atoms : class_atoms_) {
            compositions_.push_back(compositions(atoms.size(), n));
            total = detail::checked_mul(total, compositions_.back().size(), budget);
        }
        size_ = total;
        if (total > budget)
            throw BudgetExceeded("grid allocation space at r = " + std::to_string(grid.resolution)
                                 + " exceeds the budget of " + std::to_string(budget));
    }

    std::uint64_t size() const { return size_; }
    std::size_t class_count() const { return class_atoms_.size(); }

    /// Visits every point: goods owners outermost, then class compositions,
    /// each in lexicographic order.  `visit` returns false to stop.
    void for_each(const std::function<bool(const GridPoint&)>& visit) const
    {
        GridPoint p;
        p.class_counts.resize(class_atoms_.size());
        std::vector<std::size_t> pick(class_atoms_.size(), 0);
        enumerate_good_allocations(
            *inst_,
            [&](const std::vector<AgentIndex>& owner) {
                p.owner = owner;
                std::fill(pick.begin(), pick.end(), 0);
                while (true) {
                    for (std::size_t c = 0; c < pick.size(); ++c) p.class_counts[c] = compositions_[c][pick[c]];
                    if (!visit(p)) return false;
                    std::size_t c = pick.size();
                    bool carried_out = true;
                    while (c > 0) {
                        --c;
                        if (++pick[c] < compositions_[c].size()) {
                            carried_out = false;
                            break;
                        }
                        pick[c] = 0;
                    }
                    if (carried_out) return true;
                }
            },
            budget_);
    }

    /// Exact value matrix of a grid point without materialising the cake.
    ValueMatrix values(const GridPoint& p) const
    {
        const std::size_t n = inst_->agent_count();
        ValueMatrix vm = ValueMatrix::sized(n);
        std::vector<std::vector<GoodIndex>> goods(n);
        for (GoodIndex g = 0; g < p.owner.size(); ++g) goods[p.owner[g]].push_back(g);
        for (AgentIndex j = 0; j < n; ++j) {
            vm.set_goods(*inst_, j, goods[j]);
            for (std::size_t c = 0; c < class_atoms_.size(); ++c)
                if (p.class_counts[c][j] > 0) vm.has_cake[j] = true;
            for (AgentIndex i = 0; i < n; ++i) {
                Scalar cake = 0;
                for (std::size_t c = 0; c < class_atoms_.size(); ++c)
                    if (p.class_counts[c][j] > 0)
                        cake += class_worth_[c][i] * static_cast<long>(p.class_counts[c][j]);
                Scalar total = cake;
                for (GoodIndex g : goods[j]) total += inst_->utility(i, g);
                vm.cake_value[i][j] = std::move(cake);
                vm.value[i][j] = std::move(total);
            }
        }
        return vm;
    }

    /// Own utilities u_i(A_i) of a grid point.
    std::vector<Scalar> utilities(const GridPoint& p) const
    {
        const std::size_t n = inst_->agent_count();
        std::vector<Scalar> u(n);
        for (GoodIndex g = 0; g < p.owner.size(); ++g) u[p.owner[g]] += inst_->utility(p.owner[g], g);
        for (std::size_t c = 0; c < class_atoms_.size(); ++c)
            for (AgentIndex i = 0; i < n; ++i)
                if (p.class_counts[c][i] > 0) u[i] += class_worth_[c][i] * static_cast<long>(p.class_counts[c][i]);
        return u;
    }

    /// Concrete allocation: inside each class, atoms go to agents in index
    /// order by count.
    Allocation materialize(const GridPoint& p) const
    {
        Allocation a = goods_allocation_from_owner(*inst_, p.owner);
        a.unallocated_cake = IntervalSet();
        std::vector<std::vector<Interval>> cake(inst_->agent_count());
        for (std::size_t c = 0; c < class_atoms_.size(); ++c) {
            std::size_t next = 0;
            for (AgentIndex i = 0; i < cake.size(); ++i)
                for (std::size_t k = 0; k < p.class_counts[c][i]; ++k)
                    cake[i].push_back(grid_.atom(class_atoms_[c][next++]));
        }
        for (AgentIndex i = 0; i < cake.size(); ++i) a.bundles[i].cake = IntervalSet(std::move(cake[i]));
        return a;
    }

private:
    // All ways to split `total` identical atoms among n agents, lexicographic.
    static std::vector<std::vector<std::size_t>> compositions(std::size_t total, std::size_t n)
    {
        std::vector<std::vector<std::size_t>> out;
        std::vector<std::size_t> cur(n, 0);
        std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t left) {
            if (pos + 1 == n) {
                cur[pos] = left;
                out.push_back(cur);
                return;
            }
            for (std::size_t k = 0; k <= left; ++k) {
                cur[pos] = k;
                rec(pos + 1, left - k);
            }
        };
        rec(0, total);
        return out;
    }

    const Instance* inst_;
    GridCakeModel grid_;
    std::uint64_t budget_;
    std::vector<std::vector<std::size_t>> class_atoms_;
    std::vector<std::vector<Scalar>> class_worth_; ///< [class][agent] value of one atom
    std::vector<std::vector<std::vector<std::size_t>>> compositions_;
    std::uint64_t size_ = 0;
};

/// Maximum Nash welfare over the grid space.  When the best product is zero,
/// first maximise the number of agents with positive utility, then the
/// product over those agents.  Ties keep the first point enumerated.
inline Allocation mnw_search(const Instance& inst, GridCakeModel grid,
                             std::uint64_t budget = kDefaultEnumerationBudget)
{
    GridSpace space(inst, grid, budget);
    std::optional<GridPoint> best;
    std::size_t best_positive = 0;
    Scalar best_product = 0;
    space.for_each([&](const GridPoint& p) {
        const auto u = space.utilities(p);
        std::size_t positive = 0;
        Scalar product = 1;
        for (const auto& x : u)
            if (sgn(x) > 0) {
                ++positive;
                product *= x;
            }
        if (!best || positive > best_positive || (positive == best_positive && product > best_product)) {
            best = p;
            best_positive = positive;
            best_product = product;
        }
        return true;
    });
    return space.materialize(*best);
}

/// First grid allocation (enumeration order) that Pareto-dominates `alloc`.
/// No result only rules out dominators on this grid.
inline std::optional<Allocation> pareto_dominance_search(const Instance& inst, const Allocation& alloc,
                                                         GridCakeModel grid,
                                                         std::uint64_t budget = kDefaultEnumerationBudget)
{
    const ValueMatrix base = compute_value_matrix(inst, alloc);
    GridSpace space(inst, grid, budget);
    std::optional<Allocation> found;
    space.for_each([&](const GridPoint& p) {
        const auto u = space.utilities(p);
        bool strict = false;
        for (AgentIndex i = 0; i < u.size(); ++i) {
            if (u[i] < base.value[i][i]) return true;
            if (u[i] > base.value[i][i]) strict = true;
        }
        if (!strict) return true;
        found = space.materialize(p);
        return false;
    });
    return found;
}

/// Every grid allocation that is EFM (exact, zero slack).
inline std::vector<Allocation> efm_exhaustive_check(const Instance& inst, GridCakeModel grid,
                                                    std::uint64_t budget = kDefaultEnumerationBudget)
{
    GridSpace space(inst, grid, budget);
    std::vector<Allocation> out;
    space.for_each([&](const GridPoint& p) {
        if (check_efm(space.values(p)).pass) out.push_back(space.materialize(p));
        return true;
    });
    return out;
}

} // namespace mixfair

#endif // MIXFAIR_ORACLE_HPP
