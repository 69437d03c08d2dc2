#ifndef MIXFAIR_FAIRNESS_HPP
#define MIXFAIR_FAIRNESS_HPP

// Fairness checkers for mixed goods: EF, EF1, EFM, eps-EFM and weak EFM.
// All of them reduce to per-pair clauses over a ValueMatrix, so the solvers
// can run the same checks on their cached bundle values.

#include "mixfair/allocation.hpp"
#include "mixfair/errors.hpp"
#include "mixfair/instance.hpp"
#include "mixfair/rw_oracle.hpp"
#include "mixfair/scalar.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mixfair {

/// u_i(A_j) and the pieces of it the clauses need.
struct ValueMatrix
{
    std::size_t n = 0;
    std::vector<std::vector<Scalar>> value;      ///< u_i(A_j)
    std::vector<std::vector<Scalar>> cake_value; ///< u_i(C_j)
    std::vector<bool> has_cake;                  ///< C_j non-empty
    std::vector<bool> has_goods;                 ///< M_j non-empty
    /// Most valuable good of A_j in i's eyes (lowest index on ties) and its value.
    std::vector<std::vector<std::optional<GoodIndex>>> best_good;
    std::vector<std::vector<Scalar>> best_good_value;
    std::vector<std::vector<Scalar>> worst_good_value; ///< min_{g ∈ M_j} u_i(g), 0 if none

    static ValueMatrix sized(std::size_t n)
    {
        ValueMatrix vm;
        vm.n = n;
        vm.value.assign(n, std::vector<Scalar>(n));
        vm.cake_value.assign(n, std::vector<Scalar>(n));
        vm.has_cake.assign(n, false);
        vm.has_goods.assign(n, false);
        vm.best_good.assign(n, std::vector<std::optional<GoodIndex>>(n));
        vm.best_good_value.assign(n, std::vector<Scalar>(n));
        vm.worst_good_value.assign(n, std::vector<Scalar>(n));
        return vm;
    }

    /// Fills the goods-derived columns for bundle j.
    void set_goods(const Instance& inst, AgentIndex j, const std::vector<GoodIndex>& goods)
    {
        has_goods[j] = !goods.empty();
        for (std::size_t i = 0; i < n; ++i) {
            best_good[i][j].reset();
            best_good_value[i][j] = 0;
            worst_good_value[i][j] = 0;
            bool first = true;
            for (GoodIndex g : goods) {
                const Scalar& u = inst.utility(i, g);
                if (!best_good[i][j] || u > best_good_value[i][j]) {
                    best_good[i][j] = g;
                    best_good_value[i][j] = u;
                }
                if (first || u < worst_good_value[i][j]) worst_good_value[i][j] = u;
                first = false;
            }
        }
    }
};

inline ValueMatrix compute_value_matrix(const Instance& inst, const Allocation& alloc,
                                        QueryCounter* counter = nullptr)
{
    const std::size_t n = inst.agent_count();
    ValueMatrix vm = ValueMatrix::sized(n);
    RwOracle rw(inst, counter);
    for (std::size_t j = 0; j < n; ++j) {
        const auto& bundle = alloc.bundles[j];
        vm.has_cake[j] = !bundle.cake.empty();
        vm.set_goods(inst, j, bundle.goods);
        for (std::size_t i = 0; i < n; ++i) {
            Scalar goods_value = 0;
            for (GoodIndex g : bundle.goods) goods_value += inst.utility(i, g);
            vm.cake_value[i][j] = bundle.cake.empty() ? Scalar(0) : rw.eval(i, bundle.cake);
            vm.value[i][j] = goods_value + vm.cake_value[i][j];
        }
    }
    return vm;
}

/// Numerical slack for verifying allocations: n·tau on instances with a
/// sloped density segment (their cut points are tau-approximate), 0 otherwise.
inline Scalar default_verify_slack(const Instance& inst, CutTolerance tol = {})
{
    if (inst.is_piecewise_constant()) return Scalar(0);
    return Scalar(static_cast<long>(inst.agent_count())) * tol.tau();
}

// ---- per-pair clauses ------------------------------------------------------

/// u_i(A_i) ≥ u_i(A_j) − eps − slack.
inline bool ef_clause(const ValueMatrix& vm, AgentIndex i, AgentIndex j, const Scalar& eps,
                      const Scalar& slack)
{
    return vm.value[i][i] + eps + slack >= vm.value[i][j];
}

/// ∃g ∈ A_j: u_i(A_i) ≥ u_i(A_j \ {g}).  An empty A_j is never envied
/// (u_i(∅) = 0); a goods-free A_j is compared whole.
inline bool ef1_clause(const ValueMatrix& vm, AgentIndex i, AgentIndex j, const Scalar& slack)
{
    return vm.value[i][i] + slack >= vm.value[i][j] - vm.best_good_value[i][j];
}

/// ∀g ∈ A_j: u_i(A_i) ≥ u_i(A_j \ {g}).
inline bool efx_clause(const ValueMatrix& vm, AgentIndex i, AgentIndex j, const Scalar& slack)
{
    return vm.value[i][i] + slack >= vm.value[i][j] - vm.worst_good_value[i][j];
}

// ---- reports ---------------------------------------------------------------

enum class Notion
{
    EF,
    EF1,
    EFM,
    WeakEFM,
    EpsEFM,
};

inline std::string notion_name(Notion n)
{
    switch (n) {
    case Notion::EF: return "EF";
    case Notion::EF1: return "EF1";
    case Notion::EFM: return "EFM";
    case Notion::WeakEFM: return "weakEFM";
    case Notion::EpsEFM: return "epsEFM";
    }
    return "?";
}

inline std::optional<Notion> parse_notion(const std::string& s)
{
    for (Notion n : {Notion::EF, Notion::EF1, Notion::EFM, Notion::WeakEFM, Notion::EpsEFM})
        if (notion_name(n) == s) return n;
    if (s == "eps-EFM" || s == "eps-efm") return Notion::EpsEFM;
    if (s == "weak-EFM") return Notion::WeakEFM;
    return std::nullopt;
}

/// Good g whose removal from A_j settles i's envy.
struct Witness
{
    AgentIndex envier;
    AgentIndex envied;
    GoodIndex good;

    bool operator==(const Witness&) const = default;
};

struct PairViolation
{
    AgentIndex envier;
    AgentIndex envied;

    bool operator==(const PairViolation&) const = default;
};

/// Verdict of one notion plus its witnesses and the failing pairs.
struct NotionCheck
{
    bool pass = true;
    std::vector<Witness> witnesses;
    std::vector<PairViolation> violations;

    explicit operator bool() const { return pass; }
};

namespace detail {

enum class Clause
{
    Ef,
    Ef1,
};

template <typename ClauseFor>
NotionCheck run_pairs(const ValueMatrix& vm, const Scalar& eps, const Scalar& slack, ClauseFor clause_for)
{
    NotionCheck out;
    for (std::size_t i = 0; i < vm.n; ++i) {
        for (std::size_t j = 0; j < vm.n; ++j) {
            if (i == j) continue;
            bool ok;
            if (clause_for(i, j) == Clause::Ef) {
                ok = ef_clause(vm, i, j, eps, slack);
            } else {
                ok = ef1_clause(vm, i, j, slack);
                const bool envious = vm.value[i][i] + slack < vm.value[i][j];
                if (ok && envious && vm.best_good[i][j])
                    out.witnesses.push_back({i, j, *vm.best_good[i][j]});
            }
            if (!ok) {
                out.pass = false;
                out.violations.push_back({i, j});
            }
        }
    }
    return out;
}

} // namespace detail

inline NotionCheck check_ef(const ValueMatrix& vm, const Scalar& slack = 0)
{
    return detail::run_pairs(vm, Scalar(0), slack, [](auto, auto) { return detail::Clause::Ef; });
}

/// Throws PreconditionError when any bundle holds cake.
inline NotionCheck check_ef1(const ValueMatrix& vm, const Scalar& slack = 0)
{
    for (std::size_t j = 0; j < vm.n; ++j)
        if (vm.has_cake[j]) throw PreconditionError("EF1 is defined for indivisible goods only; bundle holds cake");
    return detail::run_pairs(vm, Scalar(0), slack, [](auto, auto) { return detail::Clause::Ef1; });
}

/// eps = 0 gives EFM.  The EF1 clause for cake-free bundles is never relaxed.
inline NotionCheck check_eps_efm(const ValueMatrix& vm, const Scalar& eps, const Scalar& slack = 0)
{
    if (sgn(eps) < 0) throw PreconditionError("eps must be non-negative");
    return detail::run_pairs(vm, eps, slack, [&](auto, auto j) {
        return vm.has_cake[j] ? detail::Clause::Ef : detail::Clause::Ef1;
    });
}

inline NotionCheck check_efm(const ValueMatrix& vm, const Scalar& slack = 0)
{
    return check_eps_efm(vm, Scalar(0), slack);
}

/// Like EFM, but cake that i values at zero does not trigger the EF clause.
inline NotionCheck check_weak_efm(const ValueMatrix& vm, const Scalar& slack = 0)
{
    return detail::run_pairs(vm, Scalar(0), slack, [&](auto i, auto j) {
        const bool ef1_applies = !vm.has_cake[j] || sgn(vm.cake_value[i][j]) == 0;
        return ef1_applies ? detail::Clause::Ef1 : detail::Clause::Ef;
    });
}

// ---- instance-level entry points -------------------------------------------

struct CheckOptions
{
    std::optional<Scalar> slack; ///< defaults to default_verify_slack(inst)
    QueryCounter* counter = nullptr;
};

inline Scalar resolve_slack(const Instance& inst, const CheckOptions& opt)
{
    return opt.slack ? *opt.slack : default_verify_slack(inst);
}

inline NotionCheck is_ef(const Instance& inst, const Allocation& alloc, const CheckOptions& opt = {})
{
    return check_ef(compute_value_matrix(inst, alloc, opt.counter), resolve_slack(inst, opt));
}

inline NotionCheck is_ef1(const Instance& inst, const Allocation& alloc, const CheckOptions& opt = {})
{
    return check_ef1(compute_value_matrix(inst, alloc, opt.counter), resolve_slack(inst, opt));
}

inline NotionCheck is_efm(const Instance& inst, const Allocation& alloc, const CheckOptions& opt = {})
{
    return check_efm(compute_value_matrix(inst, alloc, opt.counter), resolve_slack(inst, opt));
}

inline NotionCheck is_eps_efm(const Instance& inst, const Allocation& alloc, const Scalar& eps,
                              const CheckOptions& opt = {})
{
    return check_eps_efm(compute_value_matrix(inst, alloc, opt.counter), eps, resolve_slack(inst, opt));
}

inline NotionCheck is_weak_efm(const Instance& inst, const Allocation& alloc, const CheckOptions& opt = {})
{
    return check_weak_efm(compute_value_matrix(inst, alloc, opt.counter), resolve_slack(inst, opt));
}

/// Full verdict table for one allocation.
struct FairnessReport
{
    Scalar slack;
    std::optional<Scalar> eps;
    std::vector<std::vector<Scalar>> pairwise_envy; ///< u_i(A_j) − u_i(A_i)
    std::vector<Scalar> utilities;                  ///< u_i(A_i)
    bool ef = false;
    std::optional<bool> ef1; ///< absent when some bundle holds cake
    bool efm = false;
    bool weak_efm = false;
    std::optional<bool> eps_efm;
    std::vector<Witness> witnesses;                  ///< from the EFM check
    std::vector<std::pair<Notion, PairViolation>> violations;

    std::optional<bool> verdict(Notion n) const
    {
        switch (n) {
        case Notion::EF: return ef;
        case Notion::EF1: return ef1;
        case Notion::EFM: return efm;
        case Notion::WeakEFM: return weak_efm;
        case Notion::EpsEFM: return eps_efm;
        }
        return std::nullopt;
    }
};

inline FairnessReport fairness_report(const ValueMatrix& vm, const Scalar& slack,
                                      const std::optional<Scalar>& eps = std::nullopt)
{
    FairnessReport r;
    r.slack = slack;
    r.eps = eps;
    r.pairwise_envy.assign(vm.n, std::vector<Scalar>(vm.n));
    for (std::size_t i = 0; i < vm.n; ++i) {
        r.utilities.push_back(vm.value[i][i]);
        for (std::size_t j = 0; j < vm.n; ++j) r.pairwise_envy[i][j] = vm.value[i][j] - vm.value[i][i];
    }
    auto note = [&](Notion n, const NotionCheck& c) {
        for (const auto& v : c.violations) r.violations.push_back({n, v});
        return c.pass;
    };
    r.ef = note(Notion::EF, check_ef(vm, slack));
    bool any_cake = false;
    for (bool c : vm.has_cake) any_cake = any_cake || c;
    if (!any_cake) r.ef1 = note(Notion::EF1, check_ef1(vm, slack));
    const auto efm = check_efm(vm, slack);
    r.efm = note(Notion::EFM, efm);
    r.witnesses = efm.witnesses;
    r.weak_efm = note(Notion::WeakEFM, check_weak_efm(vm, slack));
    if (eps) r.eps_efm = note(Notion::EpsEFM, check_eps_efm(vm, *eps, slack));
    return r;
}

inline FairnessReport fairness_report(const Instance& inst, const Allocation& alloc,
                                      const std::optional<Scalar>& eps = std::nullopt,
                                      const CheckOptions& opt = {})
{
    return fairness_report(compute_value_matrix(inst, alloc, opt.counter), resolve_slack(inst, opt), eps);
}

} // namespace mixfair

#endif // MIXFAIR_FAIRNESS_HPP
