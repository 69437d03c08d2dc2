#ifndef MIXFAIR_TOOLS_COMMANDS_HPP
#define MIXFAIR_TOOLS_COMMANDS_HPP

// Command implementations behind the mixfair CLI.  Each returns an exit code:
//   0 ok, 1 the requested notion fails, 2 bad instance or allocation data,
//   3 precondition violated, 4 solver invariant violated.
// Errors propagate as exceptions; run_guarded maps them to codes.

#include "mixfair/mixfair.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace mixfair::cli {

enum ExitCode : int
{
    kOk = 0,
    kNotionFails = 1,
    kDataError = 2,
    kPrecondition = 3,
    kInvariant = 4,
};

struct RunConfig
{
    std::string command;
    std::string instance_path;
    std::string allocation_path;
    std::string algorithm = "efm"; ///< efm | two | eps-efm
    std::optional<std::string> eps;
    std::optional<std::string> base; ///< ef1 | efx, two only
    std::string notion = "EFM";
    std::optional<std::string> slack;
    std::string task = "mnw"; ///< oracle: efx | mnw | efm-set | pareto
    std::size_t grid = 10;
    std::uint64_t budget = kDefaultEnumerationBudget;
    std::uint64_t seed = 0;
    std::size_t agents = 2;
    std::size_t goods = 0;
    std::size_t segments = 3;
    std::string kind = "constant";
    std::string output_path;
    std::string trace_path;
    // bench sweep
    std::string n_range = "2..4";
    std::string m_range = "3";
    std::string eps_list = "1/10";
    std::string algorithms = "efm,eps-efm";
    std::size_t seeds = 3;
    // flags
    bool normalize = false;
    bool no_normalize = false;
    bool no_trace = false;
    bool unchecked = false;
    bool count_verifier_queries = false;
    bool decimal = false;
};

namespace detail {

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InstanceError(path, "cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_output(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw PreconditionError("cannot write '" + path + "'");
    out << text;
}

inline std::string dump(const OrderedJson& doc) { return doc.dump(2) + "\n"; }

inline Instance load(const RunConfig& cfg)
{
    if (cfg.normalize && cfg.no_normalize) throw PreconditionError("--normalize and --no-normalize conflict");
    LoadOptions opt;
    if (cfg.normalize) opt.normalize = true;
    if (cfg.no_normalize) opt.normalize = false;
    const auto text = read_file(cfg.instance_path);
    try {
        return load_instance(text, opt);
    } catch (const InstanceError& e) {
        throw InstanceError(cfg.instance_path + (e.where().empty() ? "" : " " + e.where()), e.message());
    }
}

inline Scalar parse_rational_option(const std::string& text, const char* name)
{
    auto v = parse_scalar(text);
    if (!v) throw PreconditionError(std::string("--") + name + ": malformed rational '" + text + "'");
    return *v;
}

inline std::pair<std::size_t, std::size_t> parse_range(const std::string& text, const char* name)
{
    auto to_size = [&](const std::string& s) {
        std::size_t pos = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(s, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != s.size() || s.empty())
            throw PreconditionError(std::string("--") + name + ": expected N or A..B, got '" + text + "'");
        return static_cast<std::size_t>(v);
    };
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
        const auto v = to_size(text);
        return {v, v};
    }
    const auto lo = to_size(text.substr(0, dots));
    const auto hi = to_size(text.substr(dots + 2));
    if (hi < lo) throw PreconditionError(std::string("--") + name + ": empty range '" + text + "'");
    return {lo, hi};
}

inline std::vector<std::string> split_list(const std::string& text)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, ','))
        if (!cur.empty()) out.push_back(cur);
    return out;
}

struct SolveOutcome
{
    Allocation allocation;
    SolverTrace trace;
    QueryCounter queries;
};

inline SolveOutcome run_solver(const Instance& inst, const std::string& algorithm, const std::optional<Scalar>& eps,
                               const std::string& base, const SolverOptions& opt)
{
    if (algorithm == "efm") {
        auto r = solve_efm(inst, opt);
        const QueryCounter q = r.trace.totals;
        return {std::move(r.allocation), std::move(r.trace), q};
    }
    if (algorithm == "eps-efm") {
        if (!eps) throw PreconditionError("--eps is required with --alg eps-efm");
        auto r = solve_eps_efm(inst, *eps, opt);
        const QueryCounter q = r.trace.totals;
        return {std::move(r.allocation), std::move(r.trace), q};
    }
    if (algorithm == "two") {
        QueryCounter q;
        SolveOutcome out;
        out.allocation = solve_two_agents(inst, base == "efx" ? TwoAgentBase::EFX : TwoAgentBase::EF1, opt, &q);
        out.trace.algorithm = "two";
        out.trace.totals = q;
        out.queries = q;
        return out;
    }
    throw PreconditionError("unknown algorithm '" + algorithm + "' (expected efm, two or eps-efm)");
}

inline void check_config(const RunConfig& cfg)
{
    if (cfg.algorithm == "eps-efm" && !cfg.eps) throw PreconditionError("--eps is required with --alg eps-efm");
    if (cfg.algorithm != "eps-efm" && cfg.eps) throw PreconditionError("--eps applies only to --alg eps-efm");
    if (cfg.algorithm != "two" && cfg.base) throw PreconditionError("--base applies only to --alg two");
    if (cfg.base && *cfg.base != "ef1" && *cfg.base != "efx")
        throw PreconditionError("--base must be ef1 or efx, got '" + *cfg.base + "'");
}

} // namespace detail

/// Loads and validates an instance; prints a short summary.
inline int cmd_validate(const RunConfig& cfg)
{
    const Instance inst = detail::load(cfg);
    OrderedJson doc;
    doc["valid"] = true;
    doc["agents"] = inst.agent_count();
    doc["goods"] = inst.good_count();
    doc["piecewise_constant"] = inst.is_piecewise_constant();
    doc["cake_is_null"] = inst.cake_is_null();
    OrderedJson totals = OrderedJson::object();
    for (AgentIndex i = 0; i < inst.agent_count(); ++i)
        totals[inst.agent_names()[i]] = to_string(inst.valuation(i).goods_total() + inst.valuation(i).cake_total());
    doc["total_utility"] = std::move(totals);
    detail::write_output(cfg.output_path, detail::dump(doc));
    return kOk;
}

/// Runs one algorithm and writes allocation, report and trace.  Exit 0 iff
/// the algorithm's claimed notion verifies on its output.
inline int cmd_solve(const RunConfig& cfg)
{
    detail::check_config(cfg);
    const Instance inst = detail::load(cfg);
    std::optional<Scalar> eps;
    if (cfg.eps) eps = detail::parse_rational_option(*cfg.eps, "eps");
    SolverOptions opt;
    opt.check_invariants = !cfg.unchecked;
    opt.keep_trace = !cfg.no_trace;
    auto out = detail::run_solver(inst, cfg.algorithm, eps, cfg.base.value_or("ef1"), opt);

    QueryCounter verifier;
    CheckOptions check;
    if (cfg.count_verifier_queries) check.counter = &verifier;
    validate_allocation(inst, out.allocation, true);
    const auto vm = compute_value_matrix(inst, out.allocation, check.counter);
    const Scalar slack = resolve_slack(inst, check);
    const auto report = fairness_report(vm, slack, eps);

    bool pass = false;
    OrderedJson claims;
    if (cfg.algorithm == "efm") {
        pass = report.efm;
        claims["EFM"] = report.efm;
    } else if (cfg.algorithm == "eps-efm") {
        pass = report.eps_efm.value_or(false);
        claims["eps-EFM"] = pass;
    } else {
        bool chooser_ef = true; // agent 1 picks, so it must be exactly envy-free
        for (AgentIndex j = 0; j < inst.agent_count(); ++j)
            if (j != 1 && !ef_clause(vm, 1, j, Scalar(0), Scalar(0))) chooser_ef = false;
        claims["EFM"] = report.efm;
        claims["chooser_EF"] = chooser_ef;
        pass = report.efm && chooser_ef;
        if (cfg.base.value_or("ef1") == "efx") {
            const bool strong = check_efx_mixed(vm, slack).pass;
            claims["EFX_mixed"] = strong;
            pass = pass && strong;
        }
    }

    const OutputOptions fmt{cfg.decimal};
    OrderedJson doc = allocation_to_json(inst, out.allocation, fmt);
    doc["algorithm"] = cfg.algorithm;
    doc["claims"] = std::move(claims);
    doc["report"] = report_to_json(inst, report, fmt);
    doc["queries"] = counter_to_json(out.queries);
    if (cfg.count_verifier_queries) doc["verifier_queries"] = counter_to_json(verifier);
    if (cfg.algorithm != "two") {
        if (cfg.trace_path.empty()) doc["trace"] = trace_to_json(inst, out.trace);
        else detail::write_output(cfg.trace_path, detail::dump(trace_to_json(inst, out.trace)));
    }
    detail::write_output(cfg.output_path, detail::dump(doc));
    return pass ? kOk : kNotionFails;
}

/// Checks one notion on an allocation file.  Exit 0 iff it passes on a
/// complete allocation.
inline int cmd_verify(const RunConfig& cfg)
{
    const Instance inst = detail::load(cfg);
    const auto notion = parse_notion(cfg.notion);
    if (!notion) throw PreconditionError("unknown notion '" + cfg.notion + "' (EF, EF1, EFM, weak-EFM, eps-EFM)");
    std::optional<Scalar> eps;
    if (cfg.eps) eps = detail::parse_rational_option(*cfg.eps, "eps");
    if (*notion == Notion::EpsEFM && !eps) throw PreconditionError("--eps is required for eps-EFM");

    Allocation alloc;
    try {
        alloc = load_allocation(inst, detail::read_file(cfg.allocation_path));
    } catch (const InstanceError& e) {
        throw InstanceError(cfg.allocation_path + (e.where().empty() ? "" : " " + e.where()), e.message());
    }
    bool complete = true;
    std::string incomplete_reason;
    try {
        validate_allocation(inst, alloc, true);
    } catch (const std::invalid_argument& e) {
        complete = false;
        incomplete_reason = e.what();
    }

    QueryCounter verifier;
    CheckOptions check;
    if (cfg.slack) check.slack = detail::parse_rational_option(*cfg.slack, "slack");
    if (cfg.count_verifier_queries) check.counter = &verifier;
    const auto vm = compute_value_matrix(inst, alloc, check.counter);
    const auto report = fairness_report(vm, resolve_slack(inst, check), eps);
    const auto verdict = report.verdict(*notion);
    if (!verdict) throw PreconditionError(notion_name(*notion) + " is undefined here: some bundle holds cake");

    OrderedJson doc;
    doc["notion"] = notion_name(*notion);
    doc["pass"] = *verdict && complete;
    doc["complete"] = complete;
    if (!complete) doc["incomplete_reason"] = incomplete_reason;
    OrderedJson failing = OrderedJson::array();
    for (const auto& [n, v] : report.violations) {
        if (n != *notion) continue;
        OrderedJson pair;
        pair["envier"] = inst.agent_names()[v.envier];
        pair["envied"] = inst.agent_names()[v.envied];
        failing.push_back(std::move(pair));
    }
    doc["violating_pairs"] = std::move(failing);
    doc["report"] = report_to_json(inst, report, OutputOptions{cfg.decimal});
    if (cfg.count_verifier_queries) doc["verifier_queries"] = counter_to_json(verifier);
    detail::write_output(cfg.output_path, detail::dump(doc));
    return *verdict && complete ? kOk : kNotionFails;
}

/// Reproducible random normalized instance.
inline int cmd_gen(const RunConfig& cfg)
{
    const auto kind = parse_density_kind(cfg.kind);
    if (!kind) throw PreconditionError("--kind must be constant, linear, mixed or none");
    GeneratorParams p;
    p.agents = cfg.agents;
    p.goods = cfg.goods;
    p.max_segments = cfg.segments;
    p.kind = *kind;
    p.seed = cfg.seed;
    OrderedJson doc = instance_to_json(generate_instance(p));
    detail::write_output(cfg.output_path, detail::dump(doc));
    return kOk;
}

/// Brute-force searches over goods assignments and grid cake divisions.
inline int cmd_oracle(const RunConfig& cfg)
{
    const Instance inst = detail::load(cfg);
    const GridCakeModel grid{cfg.grid};
    const OutputOptions fmt{cfg.decimal};
    OrderedJson doc;
    doc["task"] = cfg.task;
    auto with_verdicts = [&](const Allocation& a) {
        OrderedJson x = allocation_to_json(inst, a, fmt);
        const auto report = fairness_report(compute_value_matrix(inst, a, nullptr), Scalar(0));
        x["verdicts"] = report_to_json(inst, report, fmt)["verdicts"];
        return x;
    };
    if (cfg.task == "efx") {
        auto a = efx_brute_force(inst, cfg.budget);
        doc["allocations"] = OrderedJson::array();
        if (a) doc["allocations"].push_back(with_verdicts(*a));
    } else if (cfg.task == "mnw") {
        doc["grid"] = cfg.grid;
        doc["allocations"] = OrderedJson::array({with_verdicts(mnw_search(inst, grid, cfg.budget))});
    } else if (cfg.task == "efm-set") {
        doc["grid"] = cfg.grid;
        OrderedJson list = OrderedJson::array();
        for (const auto& a : efm_exhaustive_check(inst, grid, cfg.budget)) list.push_back(with_verdicts(a));
        doc["allocations"] = std::move(list);
    } else if (cfg.task == "pareto") {
        if (cfg.allocation_path.empty()) throw PreconditionError("--allocation is required for the pareto task");
        const Allocation base = load_allocation(inst, detail::read_file(cfg.allocation_path));
        doc["grid"] = cfg.grid;
        auto dom = pareto_dominance_search(inst, base, grid, cfg.budget);
        doc["allocations"] = OrderedJson::array();
        if (dom) doc["allocations"].push_back(with_verdicts(*dom));
    } else {
        throw PreconditionError("unknown oracle task '" + cfg.task + "' (efx, mnw, efm-set, pareto)");
    }
    detail::write_output(cfg.output_path, detail::dump(doc));
    return kOk;
}

/// Sweeps generated instances and prints one CSV row per run.
inline int cmd_bench(const RunConfig& cfg)
{
    const auto [n_lo, n_hi] = detail::parse_range(cfg.n_range, "n");
    const auto [m_lo, m_hi] = detail::parse_range(cfg.m_range, "m");
    const auto kind = parse_density_kind(cfg.kind);
    if (!kind) throw PreconditionError("--kind must be constant, linear, mixed or none");
    const auto algorithms = detail::split_list(cfg.algorithms);
    std::vector<Scalar> eps_values;
    for (const auto& e : detail::split_list(cfg.eps_list)) eps_values.push_back(detail::parse_rational_option(e, "eps"));

    std::ostringstream csv;
    csv << "n,m,algorithm,eps,eval_queries,cut_queries,perfect_calls,rounds,wall_ms";
    if (cfg.decimal) csv << ",eps_decimal";
    csv << "\n";
    SolverOptions opt;
    opt.check_invariants = !cfg.unchecked;
    opt.keep_trace = false;
    for (std::size_t n = n_lo; n <= n_hi; ++n)
        for (std::size_t m = m_lo; m <= m_hi; ++m)
            for (std::size_t s = 0; s < cfg.seeds; ++s) {
                GeneratorParams p;
                p.agents = n;
                p.goods = m;
                p.max_segments = cfg.segments;
                p.kind = *kind;
                p.seed = cfg.seed + s;
                const Instance inst = generate_instance(p);
                for (const auto& alg : algorithms) {
                    if (alg == "two" && n != 2) continue;
                    std::vector<std::optional<Scalar>> runs{std::nullopt};
                    if (alg == "eps-efm") runs.assign(eps_values.begin(), eps_values.end());
                    for (const auto& eps : runs) {
                        const auto start = std::chrono::steady_clock::now();
                        const auto out = detail::run_solver(inst, alg, eps, "ef1", opt);
                        const double ms =
                            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
                        csv << n << ',' << m << ',' << alg << ',' << (eps ? to_string(*eps) : "") << ','
                            << out.queries.eval_count << ',' << out.queries.cut_count << ','
                            << out.queries.perfect_oracle_calls << ',' << out.trace.round_count << ',' << ms;
                        if (cfg.decimal) csv << ',' << (eps ? std::to_string(to_double(*eps)) : "");
                        csv << "\n";
                    }
                }
            }
    detail::write_output(cfg.output_path, csv.str());
    return kOk;
}

/// Runs `body`, mapping library exceptions to exit codes with a message on stderr.
inline int run_guarded(const std::function<int()>& body)
{
    try {
        return body();
    } catch (const InstanceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDataError;
    } catch (const InvariantViolation& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return kInvariant;
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return kPrecondition;
    } catch (const PreconditionError& e) {
        std::cerr << "precondition: " << e.what() << "\n";
        return kPrecondition;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDataError;
    }
}

} // namespace mixfair::cli

#endif // MIXFAIR_TOOLS_COMMANDS_HPP
