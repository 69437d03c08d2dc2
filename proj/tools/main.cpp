// mixfair: fair division of indivisible goods plus a divisible cake.

#include "commands.hpp"

#include <CLI11.hpp>

#include <string>

int main(int argc, char** argv)
{
    using namespace mixfair::cli;
    RunConfig cfg;
    CLI::App app{"Fair division of mixed divisible and indivisible goods"};
    app.require_subcommand(1);

    auto add_instance = [&](CLI::App* sub) {
        sub->add_option("instance", cfg.instance_path, "Instance JSON file")->required();
        sub->add_flag("--normalize", cfg.normalize, "Rescale every agent to total utility 1 (overrides the file)");
        sub->add_flag("--no-normalize", cfg.no_normalize, "Keep utilities as given (overrides the file)");
        sub->add_flag("--decimal", cfg.decimal, "Add display-only decimal values next to rationals");
        sub->add_option("-o,--output", cfg.output_path, "Output file (default stdout)");
    };

    auto* validate = app.add_subcommand("validate", "Check an instance file");
    add_instance(validate);

    auto* solve = app.add_subcommand("solve", "Compute an allocation");
    add_instance(solve);
    solve->add_option("--alg", cfg.algorithm, "efm | two | eps-efm")->check(CLI::IsMember({"efm", "two", "eps-efm"}));
    solve->add_option("--eps", cfg.eps, "Rational eps for eps-efm, e.g. 1/10");
    solve->add_option("--base", cfg.base, "Goods split for two: ef1 | efx");
    solve->add_option("--trace", cfg.trace_path, "Write the trace to this file instead of embedding it");
    solve->add_flag("--no-trace", cfg.no_trace, "Keep only trace totals, not per-round records");
    solve->add_flag("--unchecked", cfg.unchecked, "Skip per-round invariant assertions");
    solve->add_flag("--count-verifier-queries", cfg.count_verifier_queries, "Report queries made while verifying");

    auto* verify = app.add_subcommand("verify", "Check a fairness notion on an allocation");
    add_instance(verify);
    verify->add_option("allocation", cfg.allocation_path, "Allocation JSON file")->required();
    verify->add_option("--notion", cfg.notion, "EF | EF1 | EFM | weak-EFM | eps-EFM");
    verify->add_option("--eps", cfg.eps, "eps for eps-EFM");
    verify->add_option("--slack", cfg.slack, "Verification slack (default 0 for constant densities, n*2^-64 otherwise)");
    verify->add_flag("--count-verifier-queries", cfg.count_verifier_queries, "Report queries made while verifying");

    auto* gen = app.add_subcommand("gen", "Generate a random normalized instance");
    gen->add_option("-n,--agents", cfg.agents, "Number of agents")->check(CLI::PositiveNumber);
    gen->add_option("-m,--goods", cfg.goods, "Number of indivisible goods");
    gen->add_option("--segments", cfg.segments, "Maximum density segments per agent")->check(CLI::Range(1, 24));
    gen->add_option("--kind", cfg.kind, "constant | linear | mixed | none");
    gen->add_option("--seed", cfg.seed, "Random seed");
    gen->add_option("-o,--output", cfg.output_path, "Output file (default stdout)");

    auto* oracle = app.add_subcommand("oracle", "Brute-force searches on small instances");
    add_instance(oracle);
    oracle->add_option("--task", cfg.task, "efx | mnw | efm-set | pareto")
        ->check(CLI::IsMember({"efx", "mnw", "efm-set", "pareto"}));
    oracle->add_option("--grid", cfg.grid, "Cake atoms per unit")->check(CLI::PositiveNumber);
    oracle->add_option("--allocation", cfg.allocation_path, "Allocation to dominate (pareto)");
    oracle->add_option("--budget", cfg.budget, "Enumeration cap");

    auto* bench = app.add_subcommand("bench", "Sweep generated instances and print CSV");
    bench->add_option("--n", cfg.n_range, "Agent counts, N or A..B");
    bench->add_option("--m", cfg.m_range, "Goods counts, N or A..B");
    bench->add_option("--eps", cfg.eps_list, "Comma-separated eps values for eps-efm");
    bench->add_option("--algs", cfg.algorithms, "Comma-separated algorithms");
    bench->add_option("--seeds", cfg.seeds, "Instances per (n, m)");
    bench->add_option("--seed", cfg.seed, "First seed");
    bench->add_option("--segments", cfg.segments, "Maximum density segments per agent")->check(CLI::Range(1, 24));
    bench->add_option("--kind", cfg.kind, "constant | linear | mixed | none");
    bench->add_flag("--unchecked", cfg.unchecked, "Skip per-round invariant assertions");
    bench->add_flag("--decimal", cfg.decimal, "Add a decimal eps column");
    bench->add_option("-o,--output", cfg.output_path, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        // Command-line misuse is a precondition failure; 2 is kept for bad data.
        app.exit(e);
        return kPrecondition;
    }

    return run_guarded([&] {
        if (*validate) return cmd_validate(cfg);
        if (*solve) return cmd_solve(cfg);
        if (*verify) return cmd_verify(cfg);
        if (*gen) return cmd_gen(cfg);
        if (*oracle) return cmd_oracle(cfg);
        return cmd_bench(cfg);
    });
}
