#include "kfactor/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>

#include <fmt/core.h>

#include "kfactor/errors.hpp"
#include "kfactor/graph_io.hpp"
#include "kfactor/sampling.hpp"
#include "kfactor/switching.hpp"

namespace kfactor {

using json = nlohmann::ordered_json;

namespace {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return fmt::format("{:.12g}", x);
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

std::string csv_cell(const json& v) {
    switch (v.type()) {
        case json::value_t::null:
            return "";
        case json::value_t::boolean:
            return v.get<bool>() ? "true" : "false";
        case json::value_t::number_integer:
            return std::to_string(v.get<std::int64_t>());
        case json::value_t::number_unsigned:
            return std::to_string(v.get<std::uint64_t>());
        case json::value_t::number_float:
            return format_double(v.get<double>());
        case json::value_t::string:
            return csv_escape(v.get<std::string>());
        default:
            return csv_escape(v.dump());
    }
}

// Non-finite doubles become null in JSON output.
json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json decimal(const LogReal& x) { return x.fits_double() ? json(x.to_double()) : json(nullptr); }

std::string join_ints(std::span<const int> v, char sep = ',') {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += sep;
        out += std::to_string(v[i]);
    }
    return out;
}

std::string big_string(const BigCount& v) { return v.str(); }

double big_log(const BigCount& v) {
    if (v <= 0) return -std::numeric_limits<double>::infinity();
    // Keep the leading 17 digits and count the rest.
    std::string digits = v.str();
    const std::size_t keep = std::min<std::size_t>(digits.size(), 17);
    const double lead = std::stod(digits.substr(0, keep));
    return std::log(lead) + static_cast<double>(digits.size() - keep) * std::log(10.0);
}

double big_ratio(const BigCount& num, const BigCount& den) {
    if (den == 0) return std::numeric_limits<double>::quiet_NaN();
    return std::exp(big_log(num) - big_log(den));
}

std::string specs_text(const std::vector<DegreeSpec>& specs) {
    std::string out;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        if (i) out += ';';
        out += specs[i].to_string();
    }
    return out;
}

LabelledGraph load_graph(const std::filesystem::path& p) { return read_graph_file(p); }

double elapsed_ms(std::chrono::nanoseconds t) { return std::chrono::duration<double, std::milli>(t).count(); }

}  // namespace

OutputFormat parse_output_format(std::string_view text) {
    if (text == "csv") return OutputFormat::csv;
    if (text == "json") return OutputFormat::json;
    throw invalid_input(fmt::format("unknown output format '{}' (expected csv or json)", text));
}

std::string_view to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

McExperiment parse_mc_experiment(std::string_view text) {
    if (text == "disjoint") return McExperiment::disjoint;
    if (text == "tail") return McExperiment::tail;
    if (text == "p2") return McExperiment::p2;
    throw invalid_input(fmt::format("unknown experiment '{}' (expected disjoint, tail or p2)", text));
}

std::string_view to_string(McExperiment e) {
    switch (e) {
        case McExperiment::disjoint:
            return "disjoint";
        case McExperiment::tail:
            return "tail";
        case McExperiment::p2:
            return "p2";
    }
    return "disjoint";
}

std::string render(const Table& table, const RunConfig& config) {
    std::vector<std::pair<std::string, std::string>> echo;
    echo.emplace_back("command", config.command);
    for (const auto& kv : table.params) echo.push_back(kv);
    echo.emplace_back("seed", std::to_string(config.seed));
    echo.emplace_back("workers", std::to_string(config.workers));
    echo.emplace_back("format", std::string(to_string(config.format)));
    for (const auto& g : config.graphs) echo.emplace_back("graph", g.string());

    if (config.format == OutputFormat::json) {
        json cfg = json::object();
        for (const auto& [k, v] : echo) {
            if (k == "graph")
                cfg[k].push_back(v);
            else
                cfg[k] = v;
        }
        json rows = json::array();
        for (const auto& r : table.rows) {
            json row = json::object();
            for (std::size_t i = 0; i < table.columns.size(); ++i) row[table.columns[i]] = r.at(i);
            rows.push_back(std::move(row));
        }
        json summary = json::object();
        for (const auto& [k, v] : table.summary) summary[k] = v;
        json doc = {{"config", cfg}, {"columns", table.columns}, {"rows", rows}, {"summary", summary}};
        return doc.dump(2) + "\n";
    }

    std::ostringstream out;
    for (const auto& [k, v] : echo) out << "# " << k << '=' << v << '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
    out << '\n';
    for (const auto& r : table.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << csv_cell(r[i]);
        out << '\n';
    }
    for (const auto& [k, v] : table.summary) out << "# summary " << k << '=' << csv_cell(v) << '\n';
    return out.str();
}

void emit(const Table& table, const RunConfig& config) {
    const std::string text = render(table, config);
    if (!config.out_path) {
        std::cout << text;
        return;
    }
    std::ofstream file(*config.out_path, std::ios::binary);
    if (!file) throw invalid_input(fmt::format("cannot open '{}' for writing", config.out_path->string()));
    file << text;
}

LabelledGraph standard_regular(int n, int d) {
    if (d == 1) return standard_matching(n);
    return circulant_regular(n, d);
}

Table run_figure(const FigureOptions& o, const RunConfig& config) {
    if (o.n < 4 || o.n % 2 != 0) throw invalid_input(fmt::format("figure: n must be even and >= 4 (got {})", o.n));
    Table t;
    t.params = {{"n", std::to_string(o.n)}, {"method", std::string(to_string(o.method))}};
    t.columns = {"k", "x", "F", "log_F", "log_R_prime", "ratio", "curve"};
    for (int k = 1; k <= o.n - 2; ++k) {
        const auto F = count_matching_sequences(o.n, k, {o.method, config.workers});
        std::vector<int> degrees(k + 1, 1);
        degrees[0] = o.n - 1 - k;
        const double log_r = r_prime(DegreeSpec(o.n, degrees)).log_abs();
        const double log_f = big_log(F.value);
        const double x = static_cast<double>(k) / (o.n - 2);
        t.rows.push_back({k, x, big_string(F.value), log_f, log_r, std::exp(log_f - log_r), std::exp(-x / 6.0)});
    }
    return t;
}

Table run_compare(const CompareOptions& o, const RunConfig& config) {
    if (o.specs.empty()) throw invalid_input("compare: at least one --spec is required");
    Table t;
    t.params = {{"spec", specs_text(o.specs)}, {"method", std::string(to_string(o.method))}};
    t.columns = {"n", "degrees", "exact", "log_exact", "log_R_prime", "R_prime", "ratio", "error_scale", "case"};
    for (const auto& spec : o.specs) {
        const auto exact = count_factorisations(spec, {o.method, config.workers});
        const LogReal rp = r_prime(spec);
        const double log_exact = big_log(exact.value);
        const auto report = check_case(spec);
        t.rows.push_back({spec.n(), join_ints(spec.degrees()), big_string(exact.value), number(log_exact),
                          rp.log_abs(), decimal(rp), number(std::exp(log_exact - rp.log_abs())), error_scale(spec),
                          report.case_id ? json(*report.case_id) : json(nullptr)});
    }
    return t;
}

Table run_asym(const AsymOptions& o, const RunConfig&) {
    const DegreeSpec& spec = o.spec;
    Table t;
    t.params = {{"spec", spec.to_string()}};
    t.columns = {"case", "condition", "satisfied", "margin"};
    const auto report = check_case(spec);
    for (const auto& c : report.conditions)
        t.rows.push_back({c.case_number, c.text, c.satisfied ? json(*c.satisfied) : json(nullptr), number(c.margin)});

    const LogReal rp = r_prime(spec);
    t.summary.emplace_back("n", spec.n());
    t.summary.emplace_back("degrees", join_ints(spec.degrees()));
    t.summary.emplace_back("log_R_prime", number(rp.log_abs()));
    t.summary.emplace_back("R_prime", decimal(rp));
    t.summary.emplace_back("error_scale", number(error_scale(spec)));
    t.summary.emplace_back("case", report.case_id ? json(*report.case_id) : json(nullptr));
    t.summary.emplace_back("disjoint_prob_minor", number(multi_disjoint_prob_asym(spec.minor_degrees())));
    const auto minor = spec.minor_degrees();
    if (spec.k() == 1) t.summary.emplace_back("log_R_regular", number(r_regular_asym(spec.n(), minor[0]).log_abs()));
    const bool matchings = std::all_of(minor.begin(), minor.end(), [](int d) { return d == 1; });
    if (matchings && spec.n() % 2 == 0 && spec.k() <= spec.n() - 2)
        t.summary.emplace_back("log_F_mcleod", number(mcleod_f_asym(spec.n(), spec.k()).log_abs()));
    return t;
}

Table run_exact(const ExactCommandOptions& o, const RunConfig& config) {
    const ExactOptions eo{o.method, config.workers};
    Table t;
    t.columns = {"n", "target", "value", "log_value", "method", "nodes", "ms"};
    CountResult r;
    std::string target;
    int n = 0;
    if (o.spec) {
        if (o.n || o.d || o.k || !config.graphs.empty())
            throw invalid_input("exact: --spec cannot be combined with --n, --d, --k or --graph");
        t.params = {{"spec", o.spec->to_string()}};
        r = count_factorisations(*o.spec, eo);
        n = o.spec->n();
        target = "R(" + o.spec->to_string() + ")";
    } else if (!config.graphs.empty()) {
        if (config.graphs.size() != 1 || !o.d || o.k || o.n)
            throw invalid_input("exact: --graph needs exactly one file and --d (and no --n or --k)");
        const LabelledGraph host = load_graph(config.graphs.front());
        t.params = {{"d", std::to_string(*o.d)}};
        r = count_regular_spanning_subgraphs(host, *o.d, eo);
        n = host.order();
        target = fmt::format("spanning {}-regular subgraphs", *o.d);
    } else if (o.n && o.d && !o.k) {
        t.params = {{"n", std::to_string(*o.n)}, {"d", std::to_string(*o.d)}};
        r = count_regular_graphs_exact(*o.n, *o.d, eo);
        n = *o.n;
        target = fmt::format("R_{}({})", *o.d, *o.n);
    } else if (o.n && o.k && !o.d) {
        t.params = {{"n", std::to_string(*o.n)}, {"k", std::to_string(*o.k)}};
        r = count_matching_sequences(*o.n, *o.k, eo);
        n = *o.n;
        target = fmt::format("F({},{})", *o.n, *o.k);
    } else {
        throw invalid_input("exact: give --spec, --graph with --d, --n with --d, or --n with --k");
    }
    t.params.emplace_back("method", std::string(to_string(o.method)));
    t.rows.push_back({n, target, big_string(r.value), number(big_log(r.value)), std::string(to_string(r.method)),
                      r.nodes_visited, elapsed_ms(r.wall_time)});
    return t;
}

Table run_mc(const McOptions& o, const RunConfig& config) {
    Table t;
    const bool from_files = !config.graphs.empty();
    if (from_files && config.graphs.size() != 2) throw invalid_input("mc: --graph must be given exactly twice (D, H)");
    if (!from_files && o.degrees.empty()) throw invalid_input("mc: --degrees is required without --graph");
    if (!from_files && o.experiment != McExperiment::disjoint && o.degrees.size() != 2)
        throw invalid_input("mc: tail and p2 experiments take exactly two degrees");

    LabelledGraph D(0), H(0);
    int n = o.n;
    std::vector<int> degrees = o.degrees;
    if (from_files) {
        D = load_graph(config.graphs[0]);
        H = load_graph(config.graphs[1]);
        if (D.order() != H.order()) throw invalid_input("mc: D and H have different orders");
        n = D.order();
        degrees = {D.regular_degree(), H.regular_degree()};
    } else if (n < 1) {
        throw invalid_input("mc: --n is required without --graph");
    } else if (o.experiment != McExperiment::disjoint) {
        D = experiment_graph(n, degrees[0], config.seed, 0);
        H = experiment_graph(n, degrees[1], config.seed, 1);
    }

    t.params = {{"n", std::to_string(n)},
                {"degrees", join_ints(degrees)},
                {"trials", std::to_string(o.trials)},
                {"experiment", std::string(to_string(o.experiment))}};
    const bool regular = degrees.size() < 2 || (degrees[0] >= 0 && degrees[1] >= 0);

    if (o.experiment == McExperiment::p2) {
        if (!regular) throw invalid_input("mc: p2 needs regular D and H");
        const MeanEstimate m = estimate_common_p2_mean(D, H, o.trials, config.seed, config.workers);
        const double predicted = expected_common_p2(n, degrees[0], degrees[1]);
        t.columns = {"n", "degrees", "trials", "seed", "mean", "std_err", "predicted", "ratio"};
        t.rows.push_back({n, join_ints(degrees), o.trials, config.seed, m.mean, m.std_err, predicted,
                          number(m.mean / predicted)});
        return t;
    }

    Estimate e;
    double predicted = 0.0;
    if (o.experiment == McExperiment::tail) {
        if (!regular) throw invalid_input("mc: tail needs regular D and H");
        e = estimate_overlap_tail(D, H, o.trials, config.seed, config.workers);
        // The bound is O(d^2 h^2 / n); the column carries the scale.
        predicted = static_cast<double>(degrees[0]) * degrees[0] * degrees[1] * degrees[1] / n;
        t.summary.emplace_back("M", threshold_M(n, degrees[0], degrees[1]));
    } else if (from_files) {
        e = estimate_disjoint_prob(D, H, o.trials, config.seed, config.workers);
        predicted = regular ? disjoint_prob_asym(degrees[0], degrees[1]) : std::nan("");
    } else {
        e = estimate_multi_disjoint(degrees, n, o.trials, config.seed, config.workers);
        predicted = multi_disjoint_prob_asym(degrees);
    }
    t.columns = {"n",     "degrees", "trials", "seed",      "successes", "p_hat",
                 "std_err", "ci95_lo", "ci95_hi", "interval", "predicted", "ratio"};
    t.rows.push_back({n, join_ints(degrees), o.trials, config.seed, e.successes, e.p_hat, e.std_err, e.ci_lo, e.ci_hi,
                      e.wilson ? "wilson" : "normal", number(predicted), number(e.p_hat / predicted)});
    return t;
}

Table run_switch(const SwitchOptions& o, const RunConfig& config) {
    LabelledGraph D(0), H(0);
    if (!config.graphs.empty()) {
        if (config.graphs.size() > 2) throw invalid_input("switch: at most two --graph files (D, H)");
        D = load_graph(config.graphs[0]);
        H = config.graphs.size() == 2 ? load_graph(config.graphs[1]) : D;
    } else {
        if (o.n > kSwitchingMaxOrder)
            throw regime_refused(fmt::format("switch: n <= {} (got {})", kSwitchingMaxOrder, o.n));
        D = standard_regular(o.n, o.d);
        H = standard_regular(o.n, o.h);
    }
    const int n = D.order();
    const int d = D.regular_degree();
    const int h = H.regular_degree();
    if (d < 1 || h < 1) throw invalid_input("switch: D and H must be regular with degree >= 1");

    const SwitchCensus census = switching_census(D, H, config.workers);
    Table t;
    t.params = {{"n", std::to_string(n)}, {"d", std::to_string(d)}, {"h", std::to_string(h)}};
    t.columns = {"t", "L", "forward_out", "reverse_in", "balanced", "predicted_ratio", "exact_ratio"};
    const auto& L = census.levels.level_size;
    for (std::size_t lvl = 0; lvl < L.size(); ++lvl) {
        json predicted = nullptr, exact = nullptr, fwd = nullptr, rev = nullptr, balanced = nullptr;
        if (lvl >= 1) {
            try {
                predicted = ratio_predicted(n, d, h, static_cast<int>(lvl));
            } catch (const regime_refused&) {
            }
            if (L[lvl - 1] != 0) exact = big_ratio(L[lvl], L[lvl - 1]);
            const BigCount& f = census.forward_out[lvl];
            const BigCount& r = census.reverse_in[lvl];
            fwd = big_string(f);
            rev = big_string(r);
            balanced = f == r;
        }
        t.rows.push_back({lvl, big_string(L[lvl]), fwd, rev, balanced, predicted, exact});
    }
    const int M = threshold_M(n, d, h);
    BigCount T = 0;
    for (std::size_t lvl = 0; lvl < L.size() && lvl < static_cast<std::size_t>(M); ++lvl) T += L[lvl];
    t.summary.emplace_back("M", M);
    t.summary.emplace_back("T", big_string(T));
    t.summary.emplace_back("with_p2", big_string(census.levels.with_p2));
    t.summary.emplace_back("total", big_string(census.levels.total));
    t.summary.emplace_back("T_over_L0", L.empty() || L[0] == 0 ? json(nullptr) : json(big_ratio(T, L[0])));
    t.summary.emplace_back("T_over_L0_predicted", t_over_l0_predicted(d, h));
    return t;
}

Table run_bounds(const BoundsOptions& o, const RunConfig& config) {
    Table t;
    t.columns = {"i", "Z", "c_hat", "A1", "A2", "C1", "C2", "sigma1", "sum", "sigma2", "sandwiched"};
    auto add_row = [&](int i, const SummationInput& in) {
        const SummationBounds b = sum_bounds(in);
        t.rows.push_back({i, in.Z, in.c_hat, b.A1, b.A2, b.C1, b.C2, b.sigma1, b.sum, b.sigma2,
                          b.sigma1 <= b.sum && b.sum <= b.sigma2});
    };
    if (o.random > 0) {
        t.params = {{"random", std::to_string(o.random)}};
        int violations = 0;
        for (int i = 0; i < o.random; ++i) {
            Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(i)));
            add_row(i, random_summation_input(rng));
            if (!t.rows.back().back().get<bool>()) ++violations;
        }
        t.summary.emplace_back("violations", violations);
        return t;
    }
    SummationInput in;
    if (o.demo) {
        in.Z = 20;
        in.c_hat = 1.0 / 15.0;
        in.A.assign(in.Z, 1.0);
        in.B.assign(in.Z, 0.0);
        t.params = {{"demo", "true"}};
    } else {
        in.Z = o.Z;
        in.c_hat = o.c_hat;
        in.A.assign(std::max(0, o.Z), o.A);
        in.B.assign(std::max(0, o.Z), o.B);
        t.params = {{"Z", std::to_string(o.Z)},
                    {"A", format_double(o.A)},
                    {"B", format_double(o.B)},
                    {"c_hat", format_double(o.c_hat)}};
    }
    add_row(0, in);
    if (o.demo) {
        const double sum = t.rows.back()[8].get<double>();
        t.summary.emplace_back("e", std::numbers::e);
        t.summary.emplace_back("sum_minus_e", sum - std::numbers::e);
    }
    return t;
}

}  // namespace kfactor
