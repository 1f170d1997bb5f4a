#include "kfactor/asymptotics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <numeric>

#include <fmt/core.h>
#include <fmt/ranges.h>

#include "kfactor/errors.hpp"

namespace kfactor {

namespace {

// x ln x for x = num/den in [0, 1], with 0 ln 0 = 0. Uses log1p near 1.
double xlogx_ratio(double num, double den) {
    if (num <= 0.0) return 0.0;
    const double x = num / den;
    const double lx = num > den / 2 ? std::log1p(-(den - num) / den) : std::log(x);
    return x * lx;
}

// ln(n (n-1) ... (n-k+1)).
double log_falling(std::uint64_t n, std::uint64_t k) {
    if (k <= 64) {
        double s = 0.0;
        for (std::uint64_t i = 0; i < k; ++i) s += std::log(static_cast<double>(n - i));
        return s;
    }
    return log_factorial(n) - log_factorial(n - k);
}

double pairs(int n) { return 0.5 * n * (n - 1.0); }

}  // namespace

DegreeSpec::DegreeSpec(int n, std::vector<int> degrees) : n_(n), degrees_(std::move(degrees)) {
    if (n_ < 2) throw invalid_input(fmt::format("DegreeSpec: n = {} < 2", n_));
    if (degrees_.empty()) throw invalid_input("DegreeSpec: empty degree list");
    long long total = 0;
    for (int d : degrees_) {
        if (d < 1) throw invalid_input(fmt::format("DegreeSpec: degree {} < 1", d));
        if (n_ % 2 == 1 && d % 2 == 1)
            throw invalid_input(fmt::format("DegreeSpec: odd degree {} with odd n = {}", d, n_));
        total += d;
    }
    if (total != n_ - 1)
        throw invalid_input(fmt::format("DegreeSpec: degrees sum to {} but n - 1 = {}", total, n_ - 1));
}

DegreeSpec DegreeSpec::parse(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos)
        throw invalid_input(fmt::format("degree spec '{}' is not of the form n:d0,d1,...", text));
    auto to_int = [&](std::string_view tok) {
        int v = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc{} || ptr != tok.data() + tok.size() || tok.empty())
            throw invalid_input(fmt::format("degree spec '{}': bad integer '{}'", text, tok));
        return v;
    };
    const int n = to_int(text.substr(0, colon));
    std::vector<int> degrees;
    std::string_view rest = text.substr(colon + 1);
    while (true) {
        const auto comma = rest.find(',');
        degrees.push_back(to_int(rest.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
    }
    return DegreeSpec(n, std::move(degrees));
}

std::string DegreeSpec::to_string() const { return fmt::format("{}:{}", n_, fmt::join(degrees_, ",")); }

LogReal r_regular_asym(int n, int d) {
    if (n < 3 || d < 1 || d > n - 2)
        throw invalid_input(fmt::format("r_regular_asym: degree {} outside [1, n-2] for n = {}", d, n));
    if (n % 2 == 1 && d % 2 == 1)
        throw invalid_input(fmt::format("r_regular_asym: odd degree {} with odd n = {}", d, n));
    const double m = n - 1.0;
    const double entropy = xlogx_ratio(d, m) + xlogx_ratio(m - d, m);
    const double log_value =
        pairs(n) * entropy + n * log_binomial(n - 1, d) + 0.25 + 0.5 * std::numbers::ln2;
    return LogReal::from_log(log_value);
}

LogReal r_prime(const DegreeSpec& spec) {
    const int n = spec.n();
    const int k = spec.k();
    const double m = n - 1.0;
    double entropy = 0.0;
    std::vector<std::uint64_t> parts;
    for (int d : spec.degrees()) {
        entropy += xlogx_ratio(d, m);
        parts.push_back(static_cast<std::uint64_t>(d));
    }
    const double log_value = pairs(n) * entropy + n * log_multinomial(n - 1, parts) + k / 4.0 +
                             0.5 * k * std::numbers::ln2;
    return LogReal::from_log(log_value);
}

LogReal mcleod_f_asym(int n, int k) {
    if (n < 4 || n % 2 != 0) throw invalid_input(fmt::format("mcleod_f_asym: n = {} must be even and >= 4", n));
    if (k < 1 || k > n - 2) throw invalid_input(fmt::format("mcleod_f_asym: k = {} outside [1, n-2]", k));
    const auto un = static_cast<std::uint64_t>(n);
    const double log_matchings = log_factorial(un) - 0.5 * n * std::numbers::ln2 - log_factorial(un / 2);
    const double log_ratio = log_falling(un, k) - k * std::log(static_cast<double>(n));
    const double log_value = k * log_matchings + 0.5 * n * log_ratio +
                             0.25 * n * std::log1p(-static_cast<double>(k) / n) + 0.25 * k;
    return LogReal::from_log(log_value);
}

double disjoint_prob_asym(int d, int h) {
    if (d < 1 || h < 1) throw invalid_input("disjoint_prob_asym: degrees must be >= 1");
    return std::exp(-0.5 * d * h);
}

double multi_disjoint_prob_asym(std::span<const int> degrees) {
    double s = 0.0;
    double pair_sum = 0.0;
    for (int d : degrees) {
        if (d < 1) throw invalid_input("multi_disjoint_prob_asym: degrees must be >= 1");
        pair_sum += s * d;
        s += d;
    }
    return std::exp(-0.5 * pair_sum);
}

double join_prob_asym(int n, int d1, int d2) {
    if (n < 2) throw invalid_input("join_prob_asym: n < 2");
    const double l1 = d1 / (n - 1.0);
    if (l1 >= 1.0) throw invalid_input(fmt::format("join_prob_asym: d1/(n-1) = {} >= 1", l1));
    return std::exp(0.5 * d2 * n * std::log1p(-l1) - l1 * d2 * (d2 - 2.0) / (4.0 * (1.0 - l1)));
}

double triple_degree_sum(std::span<const int> degrees) {
    // For each t, sum_{i <= j < t} d_i d_j = (S^2 + Q)/2 over the prefix before t.
    double s = 0.0, q = 0.0, total = 0.0;
    for (int d : degrees) {
        total += 0.5 * (s * s + q) * d * static_cast<double>(d);
        s += d;
        q += static_cast<double>(d) * d;
    }
    return total;
}

double error_scale(const DegreeSpec& spec) {
    const auto minor = spec.minor_degrees();
    const double d = std::accumulate(minor.begin(), minor.end(), 0.0);
    return (d * d * d + triple_degree_sum(minor)) / spec.n();
}

CaseReport check_case(const DegreeSpec& spec) {
    const int n = spec.n();
    const int k = spec.k();
    const auto minor = spec.minor_degrees();
    const double dn = n;
    CaseReport report;
    auto add = [&](int c, std::string text, std::optional<bool> ok, double margin) {
        report.conditions.push_back({c, std::move(text), ok, margin});
    };

    const int d1 = k >= 1 ? minor[0] : 0;
    add(1, "k = 1", k == 1, k);
    add(1, "1 <= d1 <= n-2", k >= 1 && d1 >= 1 && d1 <= n - 2, d1);

    const double dsum = std::accumulate(minor.begin(), minor.end(), 0.0);
    add(2, "sum_{i>=1} d_i = o(n^(1/3)) [margin: sum / n^(1/3)]", std::nullopt, dsum / std::cbrt(dn));
    add(2, "sum_{i<=j<t} d_i d_j d_t^2 = o(n) [margin: sum / n]", std::nullopt, triple_degree_sum(minor) / dn);

    const int max_minor = minor.empty() ? 0 : *std::max_element(minor.begin(), minor.end());
    const bool all_ones = k >= 1 && max_minor == 1;
    add(3, "d_1 = ... = d_k = 1 [margin: max d_i]", all_ones, max_minor);
    add(3, "k = o(n^(5/6)) [margin: k / n^(5/6)]", std::nullopt, k / std::pow(dn, 5.0 / 6.0));

    const double c_eff = k >= 1 ? std::min(d1, n - 1 - d1) * std::log(dn) / dn : 0.0;
    const bool dense = k >= 1 && c_eff > 2.0 / 3.0;
    add(4, "min{d1, n-1-d1} >= c n / ln n with c > 2/3 [margin: c]", dense, c_eff);
    const double rest = k >= 2 ? dsum - d1 : 0.0;
    add(4, "sum_{i>=2} d_i = O(n^eps), eps small [margin: sum / n^0.1]", std::nullopt, rest / std::pow(dn, 0.1));

    if (k == 1 && d1 <= n - 2)
        report.case_id = 1;
    else if (all_ones)
        report.case_id = 3;
    else if (dense)
        report.case_id = 4;
    else if (k >= 1)
        report.case_id = 2;
    return report;
}

}  // namespace kfactor
