#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "kfactor/asymptotics.hpp"
#include "kfactor/exact.hpp"

namespace kfactor {

enum class OutputFormat { csv, json };

OutputFormat parse_output_format(std::string_view text);
std::string_view to_string(OutputFormat f);

/// Settings shared by every command.
struct RunConfig {
    std::string command;
    std::uint64_t seed = 0;
    int workers = 1;
    OutputFormat format = OutputFormat::csv;
    std::optional<std::filesystem::path> out_path;
    std::vector<std::filesystem::path> graphs;
};

/// Result of a command: fixed columns, one row per experiment, and a few
/// whole-run values. params records the command's resolved parameters so
/// the rendered output can echo them.
struct Table {
    std::vector<std::pair<std::string, std::string>> params;
    std::vector<std::string> columns;
    std::vector<std::vector<nlohmann::ordered_json>> rows;
    std::vector<std::pair<std::string, nlohmann::ordered_json>> summary;
};

/// CSV: "# key=value" lines for the configuration, the column header, the
/// rows, then "# summary key=value" lines. JSON: an object with "config",
/// "columns", "rows" (one object per row) and "summary". Floating-point
/// cells are printed with 12 significant digits in CSV; nulls are empty.
std::string render(const Table& table, const RunConfig& config);

/// Writes render(table, config) to config.out_path, or to stdout.
void emit(const Table& table, const RunConfig& config);

struct FigureOptions {
    int n = 10;
    CountMethod method = CountMethod::memoized;
};

/// Rows k, x = k/(n-2), F(n,k), ln F, ln R'(n; n-1-k, 1, ..., 1), F/R',
/// exp(-x/6) for k = 1..n-2.
Table run_figure(const FigureOptions& options, const RunConfig& config);

struct CompareOptions {
    std::vector<DegreeSpec> specs;
    CountMethod method = CountMethod::memoized;
};

/// Exact factorisation count against R' with error scale and case, one row
/// per spec.
Table run_compare(const CompareOptions& options, const RunConfig& config);

struct AsymOptions {
    DegreeSpec spec{2, {1}};
};

/// One row per case condition; the formulas go in the summary.
Table run_asym(const AsymOptions& options, const RunConfig& config);

struct ExactCommandOptions {
    std::optional<int> n;
    std::optional<int> d;
    std::optional<int> k;
    std::optional<DegreeSpec> spec;
    CountMethod method = CountMethod::memoized;
};

/// One of: R_d(n) (n, d), F(n, k) (n, k), a factorisation count (spec), or
/// spanning d-regular subgraphs of the --graph host (d).
Table run_exact(const ExactCommandOptions& options, const RunConfig& config);

enum class McExperiment { disjoint, tail, p2 };

McExperiment parse_mc_experiment(std::string_view text);
std::string_view to_string(McExperiment e);

struct McOptions {
    int n = 0;
    std::vector<int> degrees;
    std::uint64_t trials = 100000;
    McExperiment experiment = McExperiment::disjoint;
};

/// disjoint: independent random regular graphs of the given degrees are
/// pairwise disjoint (or, with two --graph files, random relabellings of the
/// second avoid the first). tail: common P2 or at least M common edges.
/// p2: mean number of common paths of length two.
Table run_mc(const McOptions& options, const RunConfig& config);

struct SwitchOptions {
    int n = 8;
    int d = 1;
    int h = 1;
};

/// Level sizes and switch totals over all relabellings; D and H come from
/// --graph (one file means D = H) or are the standard d- and h-regular
/// graphs on n vertices.
Table run_switch(const SwitchOptions& options, const RunConfig& config);

struct BoundsOptions {
    bool demo = false;
    // Randomised hypothesis-satisfying inputs to check.
    int random = 0;
    int Z = 20;
    double A = 1.0;
    double B = 0.0;
    double c_hat = 1.0 / 15.0;
};

/// Sandwich bounds for constant A(i) = A, B(i) = B (demo: Z = 20, A = 1,
/// B = 0, c_hat = 1/15), or for `random` inputs drawn from the seed.
Table run_bounds(const BoundsOptions& options, const RunConfig& config);

/// The graph used by switch for degree d on n vertices: the standard
/// perfect matching for d = 1, otherwise the circulant d-regular graph.
LabelledGraph standard_regular(int n, int d);

}  // namespace kfactor
