#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "kfactor/commands.hpp"
#include "kfactor/errors.hpp"

using namespace kfactor;
using nlohmann::ordered_json;

namespace {

RunConfig config_for(const std::string& command, int workers = 1, std::uint64_t seed = 0) {
    RunConfig c;
    c.command = command;
    c.workers = workers;
    c.seed = seed;
    return c;
}

std::size_t column(const Table& t, const std::string& name) {
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        if (t.columns[i] == name) return i;
    FAIL("missing column " << name);
    return 0;
}

const ordered_json& summary(const Table& t, const std::string& key) {
    for (const auto& [k, v] : t.summary)
        if (k == key) return v;
    FAIL("missing summary " << key);
    static const ordered_json none;
    return none;
}

// Rendered output without the configuration echo.
std::string data_lines(const std::string& text, OutputFormat format) {
    if (format == OutputFormat::json) {
        auto parsed = ordered_json::parse(text);
        parsed.erase("config");
        return parsed.dump();
    }
    std::istringstream in(text);
    std::string line, out;
    while (std::getline(in, line))
        if (line.rfind("# ", 0) != 0 || line.rfind("# summary ", 0) == 0) out += line + "\n";
    return out;
}

}  // namespace

TEST_CASE("output format parsing") {
    CHECK(parse_output_format("csv") == OutputFormat::csv);
    CHECK(parse_output_format("json") == OutputFormat::json);
    CHECK_THROWS_AS(parse_output_format("xml"), invalid_input);
    CHECK(parse_mc_experiment("tail") == McExperiment::tail);
    CHECK_THROWS_AS(parse_mc_experiment("bogus"), invalid_input);
}

TEST_CASE("figure for n = 4") {
    const auto t = run_figure({4, CountMethod::memoized}, config_for("figure"));
    REQUIRE(t.rows.size() == 2);
    const auto F = column(t, "F");
    CHECK(t.rows[0][F] == "3");
    CHECK(t.rows[1][F] == "6");
    CHECK(t.rows[1][column(t, "x")].get<double>() == 1.0);
    CHECK(t.rows[0][column(t, "curve")].get<double>() == doctest::Approx(std::exp(-0.5 / 6.0)));
    const auto dfs = run_figure({4, CountMethod::dfs}, config_for("figure"));
    CHECK(dfs.rows == t.rows);
    CHECK_THROWS_AS(run_figure({5, CountMethod::memoized}, config_for("figure")), invalid_input);
    CHECK_THROWS_AS(run_figure({14, CountMethod::memoized}, config_for("figure")), regime_refused);
}

TEST_CASE("figure ratios for n = 10") {
    const auto t = run_figure({10, CountMethod::memoized}, config_for("figure"));
    REQUIRE(t.rows.size() == 8);
    const auto r = column(t, "ratio");
    CHECK(t.rows[0][r].get<double>() >= 0.90);
    CHECK(t.rows[0][r].get<double>() <= 1.05);
    CHECK(std::abs(t.rows[7][r].get<double>() - std::exp(-1.0 / 6.0)) <= 0.10);
    for (std::size_t i = 1; i < t.rows.size(); ++i)
        CHECK(t.rows[i][r].get<double>() <= t.rows[i - 1][r].get<double>() + 0.02);
}

TEST_CASE("compare rows") {
    CompareOptions options;
    options.specs = {DegreeSpec(4, {1, 2}), DegreeSpec(5, {2, 2}), DegreeSpec(10, {8, 1}), DegreeSpec(6, {4, 1})};
    const auto t = run_compare(options, config_for("compare"));
    REQUIRE(t.rows.size() == 4);
    const auto exact = column(t, "exact");
    const auto ratio = column(t, "ratio");
    CHECK(t.rows[0][exact] == "3");
    CHECK(t.rows[0][column(t, "R_prime")].get<double>() == doctest::Approx(3.227).epsilon(1e-3));
    CHECK(t.rows[0][ratio].get<double>() == doctest::Approx(0.93).epsilon(0.01));
    CHECK(t.rows[1][exact] == "12");
    CHECK(std::abs(t.rows[2][ratio].get<double>() - 1.0) < std::abs(t.rows[3][ratio].get<double>() - 1.0));
}

TEST_CASE("asym reports formulas and case margins") {
    const auto t = run_asym({DegreeSpec::parse("100:96,1,1,1")}, config_for("asym"));
    CHECK(summary(t, "case") == 3);
    CHECK(std::isfinite(summary(t, "log_R_prime").get<double>()));
    CHECK(summary(t, "disjoint_prob_minor").get<double>() == doctest::Approx(std::exp(-1.5)));
    CHECK(t.rows.size() >= 4);
}

TEST_CASE("exact command targets") {
    ExactCommandOptions regular;
    regular.n = 10;
    regular.d = 1;
    const auto a = run_exact(regular, config_for("exact"));
    REQUIRE(a.rows.size() == 1);
    CHECK(a.rows[0][column(a, "value")] == "945");

    ExactCommandOptions f;
    f.n = 6;
    f.k = 2;
    CHECK(run_exact(f, config_for("exact")).rows[0][2] == "120");

    ExactCommandOptions spec;
    spec.spec = DegreeSpec(5, {2, 2});
    CHECK(run_exact(spec, config_for("exact")).rows[0][2] == "12");

    ExactCommandOptions nothing;
    CHECK_THROWS_AS(run_exact(nothing, config_for("exact")), invalid_input);
    ExactCommandOptions huge;
    huge.n = 30;
    huge.d = 3;
    CHECK_THROWS_AS(run_exact(huge, config_for("exact")), regime_refused);
}

TEST_CASE("bounds demo and random sweep") {
    BoundsOptions demo;
    demo.demo = true;
    const auto t = run_bounds(demo, config_for("bounds"));
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0][column(t, "sum")].get<double>() == doctest::Approx(std::exp(1.0)).epsilon(1e-6));
    CHECK(t.rows[0][column(t, "sandwiched")] == true);
    const double width =
        t.rows[0][column(t, "sigma2")].get<double>() - t.rows[0][column(t, "sigma1")].get<double>();
    CHECK(width < 1e-3);

    BoundsOptions sweep;
    sweep.random = 200;
    const auto r = run_bounds(sweep, config_for("bounds", 1, 5));
    CHECK(r.rows.size() == 200);
    CHECK(summary(r, "violations") == 0);

    BoundsOptions zero;
    zero.Z = 2;
    zero.A = 0.0;
    CHECK(run_bounds(zero, config_for("bounds")).rows[0][column(t, "sum")].get<double>() == 1.0);

    BoundsOptions bad;
    bad.c_hat = 0.5;
    CHECK_THROWS_AS(run_bounds(bad, config_for("bounds")), invalid_input);
}

TEST_CASE("mc command rows and predictions") {
    McOptions options;
    options.n = 300;
    options.degrees = {2, 2};
    options.trials = 20000;
    const auto t = run_mc(options, config_for("mc", 1, 7));
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0][column(t, "predicted")].get<double>() == doctest::Approx(std::exp(-2.0)));
    const double p = t.rows[0][column(t, "p_hat")].get<double>();
    const double se = t.rows[0][column(t, "std_err")].get<double>();
    CHECK(std::abs(p - std::exp(-2.0)) <= std::max(3.0 * se, 0.02));

    McOptions odd;
    odd.n = 301;
    odd.degrees = {1, 1};
    CHECK_THROWS_AS(run_mc(odd, config_for("mc")), invalid_input);
    McOptions dense;
    dense.n = 300;
    dense.degrees = {6, 1};
    CHECK_THROWS_AS(run_mc(dense, config_for("mc")), regime_refused);
}

TEST_CASE("switch command for matchings on eight vertices") {
    const auto t = run_switch({8, 1, 1}, config_for("switch"));
    const auto bal = column(t, "balanced");
    REQUIRE(t.rows.size() >= 2);
    CHECK(t.rows[0][bal].is_null());
    for (std::size_t i = 1; i < t.rows.size(); ++i) CHECK(t.rows[i][bal] == true);
    CHECK(summary(t, "T_over_L0").get<double>() == doctest::Approx(1.75));
    CHECK_THROWS_AS(run_switch({10, 1, 1}, config_for("switch")), regime_refused);
}

TEST_CASE("rendering") {
    Table t;
    t.params = {{"n", "4"}};
    t.columns = {"a", "b", "c"};
    t.rows = {{1, 0.5, "x,y"}, {2, nullptr, true}};
    t.summary = {{"total", 3}};
    auto config = config_for("demo");

    const auto csv = render(t, config);
    CHECK(csv.rfind("# command=demo\n# n=4\n", 0) == 0);
    CHECK(csv.find("\na,b,c\n1,0.5,\"x,y\"\n2,,true\n# summary total=3\n") != std::string::npos);

    config.format = OutputFormat::json;
    const auto json = ordered_json::parse(render(t, config));
    CHECK(json["config"]["command"] == "demo");
    CHECK(json["columns"].size() == 3);
    CHECK(json["rows"][0]["c"] == "x,y");
    CHECK(json["rows"][1]["b"].is_null());
    CHECK(json["summary"]["total"] == 3);
}

TEST_CASE("randomised commands do not depend on workers") {
    McOptions options;
    options.n = 100;
    options.degrees = {1, 2};
    options.trials = 3000;
    BoundsOptions sweep;
    sweep.random = 50;
    for (auto format : {OutputFormat::csv, OutputFormat::json}) {
        auto one = config_for("mc", 1, 21);
        auto four = config_for("mc", 4, 21);
        one.format = four.format = format;
        CHECK(data_lines(render(run_mc(options, one), one), format) ==
              data_lines(render(run_mc(options, four), four), format));
        const auto a = run_bounds(sweep, one);
        const auto b = run_bounds(sweep, four);
        CHECK(a.rows == b.rows);
    }
    options.experiment = McExperiment::tail;
    CHECK(run_mc(options, config_for("mc", 1, 2)).rows == run_mc(options, config_for("mc", 3, 2)).rows);
    options.experiment = McExperiment::p2;
    CHECK(run_mc(options, config_for("mc", 1, 2)).rows == run_mc(options, config_for("mc", 3, 2)).rows);
}
