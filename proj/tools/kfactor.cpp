#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kfactor/commands.hpp"
#include "kfactor/errors.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitRefused = 3;

struct Common {
    std::uint64_t seed = 0;
    int workers = 1;
    std::string format = "csv";
    std::string out;
    std::vector<std::string> graphs;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--seed", c.seed, "Random seed");
    sub->add_option("--workers", c.workers, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", c.out, "Output file (default stdout)");
    sub->add_option("--graph", c.graphs, "Graph file, graph6 or edge list (repeatable)");
}

kfactor::RunConfig to_config(const std::string& command, const Common& c) {
    kfactor::RunConfig cfg;
    cfg.command = command;
    cfg.seed = c.seed;
    cfg.workers = c.workers;
    cfg.format = kfactor::parse_output_format(c.format);
    if (!c.out.empty()) cfg.out_path = c.out;
    for (const auto& g : c.graphs) cfg.graphs.emplace_back(g);
    return cfg;
}

std::vector<kfactor::DegreeSpec> parse_specs(const std::vector<std::string>& texts) {
    std::vector<kfactor::DegreeSpec> specs;
    for (const auto& t : texts) specs.push_back(kfactor::DegreeSpec::parse(t));
    return specs;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact counts, asymptotic formulas and simulations for factorisations of K_n"};
    app.require_subcommand(1);
    Common common;

    std::string method = "memoized";
    auto method_option = [&](CLI::App* sub) {
        sub->add_option("--method", method, "dfs or memoized")->check(CLI::IsMember({"dfs", "memoized"}));
    };

    std::string asym_spec;
    auto* asym = app.add_subcommand("asym", "Asymptotic formulas and case conditions for a degree spec");
    asym->add_option("--spec", asym_spec, "n:d0,d1,...,dk")->required();
    add_common(asym, common);

    kfactor::ExactCommandOptions exact_opts;
    std::string exact_spec;
    int exact_n = 0, exact_d = -1, exact_k = 0;
    auto* exact = app.add_subcommand("exact", "Exact counts");
    auto* n_opt = exact->add_option("--n", exact_n, "Order");
    auto* d_opt = exact->add_option("--d", exact_d, "Degree");
    auto* k_opt = exact->add_option("--k", exact_k, "Number of perfect matchings");
    auto* spec_opt = exact->add_option("--spec", exact_spec, "n:d0,d1,...,dk");
    method_option(exact);
    add_common(exact, common);

    kfactor::McOptions mc_opts;
    std::string experiment = "disjoint";
    auto* mc = app.add_subcommand("mc", "Monte Carlo disjointness and overlap estimates");
    mc->add_option("--n", mc_opts.n, "Order");
    mc->add_option("--degrees", mc_opts.degrees, "Comma-separated degrees")->delimiter(',');
    mc->add_option("--trials", mc_opts.trials, "Number of trials")->check(CLI::PositiveNumber);
    mc->add_option("--experiment", experiment, "disjoint, tail or p2")
        ->check(CLI::IsMember({"disjoint", "tail", "p2"}));
    add_common(mc, common);

    kfactor::SwitchOptions switch_opts;
    auto* sw = app.add_subcommand("switch", "Exact level sizes and switching totals");
    sw->set_help_flag("--help", "Print this help message and exit");
    sw->add_option("--n", switch_opts.n, "Order (<= 8)");
    sw->add_option("--d", switch_opts.d, "Degree of D");
    sw->add_option("--h", switch_opts.h, "Degree of H");
    add_common(sw, common);

    kfactor::BoundsOptions bounds_opts;
    auto* bounds = app.add_subcommand("bounds", "Summation-lemma sandwich bounds");
    bounds->add_flag("--demo", bounds_opts.demo, "Z = 20, A = 1, B = 0, c_hat = 1/15");
    bounds->add_option("--random", bounds_opts.random, "Check this many random valid inputs");
    bounds->add_option("--Z", bounds_opts.Z, "Number of terms");
    bounds->add_option("--A", bounds_opts.A, "Constant A(i)");
    bounds->add_option("--B", bounds_opts.B, "Constant B(i)");
    bounds->add_option("--c-hat", bounds_opts.c_hat, "c_hat");
    add_common(bounds, common);

    kfactor::FigureOptions figure_opts;
    auto* figure = app.add_subcommand("figure", "F(n,k) against R'(n; n-1-k, 1, ..., 1) for k = 1..n-2");
    figure->add_option("--n", figure_opts.n, "Even order");
    method_option(figure);
    add_common(figure, common);

    std::vector<std::string> compare_specs;
    auto* compare = app.add_subcommand("compare", "Exact factorisation counts against R'");
    compare->add_option("--spec", compare_specs, "n:d0,d1,...,dk (repeatable)")->required();
    method_option(compare);
    add_common(compare, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalid;
    }

    try {
        CLI::App* chosen = app.get_subcommands().front();
        const kfactor::RunConfig cfg = to_config(chosen->get_name(), common);
        const kfactor::CountMethod count_method = kfactor::parse_count_method(method);
        kfactor::Table table;
        if (chosen == asym) {
            table = kfactor::run_asym({kfactor::DegreeSpec::parse(asym_spec)}, cfg);
        } else if (chosen == exact) {
            if (*n_opt) exact_opts.n = exact_n;
            if (*d_opt) exact_opts.d = exact_d;
            if (*k_opt) exact_opts.k = exact_k;
            if (*spec_opt) exact_opts.spec = kfactor::DegreeSpec::parse(exact_spec);
            exact_opts.method = count_method;
            table = kfactor::run_exact(exact_opts, cfg);
        } else if (chosen == mc) {
            mc_opts.experiment = kfactor::parse_mc_experiment(experiment);
            table = kfactor::run_mc(mc_opts, cfg);
        } else if (chosen == sw) {
            table = kfactor::run_switch(switch_opts, cfg);
        } else if (chosen == bounds) {
            table = kfactor::run_bounds(bounds_opts, cfg);
        } else if (chosen == figure) {
            figure_opts.method = count_method;
            table = kfactor::run_figure(figure_opts, cfg);
        } else {
            table = kfactor::run_compare({parse_specs(compare_specs), count_method}, cfg);
        }
        kfactor::emit(table, cfg);
    } catch (const kfactor::invalid_input& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const kfactor::regime_refused& e) {
        std::cerr << "refused: " << e.what() << '\n';
        return kExitRefused;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitOk;
}
