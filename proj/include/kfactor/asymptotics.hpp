#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kfactor/numeric.hpp"

namespace kfactor {

/// A factorisation problem: K_n split into spanning regular factors of
/// degrees d_0, ..., d_k. Factors are ordered by position.
class DegreeSpec {
public:
    // Throws invalid_input unless n >= 2, every d_i >= 1, sum d_i = n - 1,
    // and every d_i is even when n is odd.
    DegreeSpec(int n, std::vector<int> degrees);

    /// Parses "n:d0,d1,...,dk".
    static DegreeSpec parse(std::string_view text);

    int n() const { return n_; }
    // Number of factors beyond d_0.
    int k() const { return static_cast<int>(degrees_.size()) - 1; }
    const std::vector<int>& degrees() const { return degrees_; }
    // d_1..d_k.
    std::span<const int> minor_degrees() const { return std::span<const int>(degrees_).subspan(1); }

    std::string to_string() const;

    friend bool operator==(const DegreeSpec&, const DegreeSpec&) = default;

private:
    int n_;
    std::vector<int> degrees_;
};

/// Asymptotic number of labelled d-regular graphs on n vertices:
/// (l^l (1-l)^(1-l))^C(n,2) C(n-1,d)^n e^(1/4) 2^(1/2), l = d/(n-1). This is
/// r_prime with k = 1.
LogReal r_regular_asym(int n, int d);

/// Conjectured asymptotic number of ordered factorisations:
/// (prod l_i^l_i)^C(n,2) multinomial(n-1; d)^n e^(k/4) 2^(k/2), l_i = d_i/(n-1).
LogReal r_prime(const DegreeSpec& spec);

/// McLeod's asymptotic value of F(n,k), the number of sequences of k
/// disjoint perfect matchings of K_n.
LogReal mcleod_f_asym(int n, int k);

/// Leading term exp(-dh/2) of the probability that a random relabelling of
/// an h-regular graph is edge-disjoint from a d-regular graph.
double disjoint_prob_asym(int d, int h);

/// Leading term exp(-1/2 sum_{i<j} d_i d_j) for k graphs.
double multi_disjoint_prob_asym(std::span<const int> degrees);

/// (1-l1)^(d2 n/2) exp(-l1 d2 (d2-2) / (4(1-l1))), l1 = d1/(n-1): a random
/// d1-regular graph against an arbitrary d2-regular graph.
double join_prob_asym(int n, int d1, int d2);

/// sum_{1 <= i <= j < t <= k} d_i d_j d_t^2 over the given list d_1..d_k.
double triple_degree_sum(std::span<const int> degrees);

/// Error magnitude d^3/n + triple_degree_sum/n with d = d_1 + ... + d_k.
double error_scale(const DegreeSpec& spec);

struct CaseCondition {
    int case_number = 0;
    std::string text;
    // Empty for asymptotic conditions (o(.), "sufficiently small"), which
    // cannot be decided at a single n; only the margin is meaningful there.
    std::optional<bool> satisfied;
    double margin = 0.0;
};

struct CaseReport {
    // First case, in the order 1, 3, 4, 2, whose finitely checkable
    // conditions all hold. Case 2 has none and acts as the fallback.
    std::optional<int> case_id;
    std::vector<CaseCondition> conditions;
};

CaseReport check_case(const DegreeSpec& spec);

}  // namespace kfactor
