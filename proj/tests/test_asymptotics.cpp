#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "kfactor/asymptotics.hpp"
#include "kfactor/errors.hpp"

using namespace kfactor;

TEST_CASE("DegreeSpec validation and parsing") {
    CHECK_NOTHROW(DegreeSpec(4, {1, 2}));
    CHECK_THROWS_AS(DegreeSpec(4, {1, 1}), invalid_input);
    CHECK_THROWS_AS(DegreeSpec(5, {1, 3}), invalid_input);
    CHECK_THROWS_AS(DegreeSpec(4, {3, 0}), invalid_input);
    CHECK_THROWS_AS(DegreeSpec(1, {0}), invalid_input);
    const auto spec = DegreeSpec::parse("100:96,1,1,1");
    CHECK(spec.n() == 100);
    CHECK(spec.k() == 3);
    CHECK(spec.degrees() == std::vector<int>{96, 1, 1, 1});
    CHECK(spec.to_string() == "100:96,1,1,1");
    CHECK_THROWS_AS(DegreeSpec::parse("100"), invalid_input);
    CHECK_THROWS_AS(DegreeSpec::parse("10:8,x"), invalid_input);
}

TEST_CASE("r_regular_asym symmetry and small cases") {
    for (int n = 3; n <= 60; ++n)
        for (int d = 1; d <= n - 2; ++d) {
            if (n % 2 == 1 && (d % 2 == 1 || (n - 1 - d) % 2 == 1)) continue;
            CHECK(std::abs(r_regular_asym(n, d).log_abs() - r_regular_asym(n, n - 1 - d).log_abs()) < 1e-10);
        }
    CHECK(r_regular_asym(4, 1).log_abs() == doctest::Approx(r_prime(DegreeSpec(4, {2, 1})).log_abs()).epsilon(1e-15));
    const double ratio = 945.0 / r_regular_asym(10, 1).to_double();
    CHECK(ratio > 0.8);
    CHECK(ratio < 1.1);
    CHECK_THROWS_AS(r_regular_asym(10, 0), invalid_input);
    CHECK_THROWS_AS(r_regular_asym(10, 9), invalid_input);
    CHECK_THROWS_AS(r_regular_asym(9, 3), invalid_input);
}

TEST_CASE("r_prime value and symmetry") {
    CHECK(r_prime(DegreeSpec(4, {1, 2})).to_double() == doctest::Approx(3.2282420599316776).epsilon(1e-12));
    std::vector<int> degrees{3, 1, 2, 4, 1};
    const double reference = r_prime(DegreeSpec(12, degrees)).log_abs();
    std::sort(degrees.begin(), degrees.end());
    do {
        CHECK(std::abs(r_prime(DegreeSpec(12, degrees)).log_abs() - reference) < 1e-9);
    } while (std::next_permutation(degrees.begin(), degrees.end()));
}

TEST_CASE("r_prime with k = 1 is r_regular_asym over n <= 100") {
    double worst = 0.0;
    for (int n = 3; n <= 100; ++n)
        for (int d = 1; d <= n - 2; ++d) {
            if (n % 2 == 1 && (d % 2 == 1 || (n - 1 - d) % 2 == 1)) continue;
            const double a = r_prime(DegreeSpec(n, {n - 1 - d, d})).log_abs();
            const double b = r_regular_asym(n, d).log_abs();
            worst = std::max(worst, std::abs(a - b));
        }
    CHECK(worst <= 1e-10);
}

TEST_CASE("mcleod_f_asym") {
    const double expected = std::log(3.0 * 0.75 * std::exp(0.25));
    CHECK(mcleod_f_asym(4, 1).log_abs() == doctest::Approx(expected).epsilon(1e-13));
    CHECK(std::isfinite(mcleod_f_asym(10, 8).log_abs()));
    CHECK_THROWS_AS(mcleod_f_asym(5, 1), invalid_input);
    CHECK_THROWS_AS(mcleod_f_asym(10, 9), invalid_input);
    CHECK_THROWS_AS(mcleod_f_asym(10, 0), invalid_input);

    const auto gap = [](int n, int k) {
        std::vector<int> d(k + 1, 1);
        d[0] = n - 1 - k;
        return std::abs(mcleod_f_asym(n, k).log_abs() - r_prime(DegreeSpec(n, d)).log_abs());
    };
    CHECK(gap(10000, 5) <= 0.01);
    CHECK(gap(1000, 5) < gap(100, 5));
    CHECK(gap(10000, 5) < gap(1000, 5));
}

TEST_CASE("disjointness leading terms") {
    CHECK(disjoint_prob_asym(1, 1) == doctest::Approx(std::exp(-0.5)));
    CHECK(disjoint_prob_asym(2, 2) == doctest::Approx(std::exp(-2.0)));
    CHECK(disjoint_prob_asym(1, 1) < 2.0 / 3.0);
    const std::vector<int> one{3}, two{1, 1}, three{1, 1, 1}, pair{2, 3};
    CHECK(multi_disjoint_prob_asym(one) == 1.0);
    CHECK(multi_disjoint_prob_asym(two) == doctest::Approx(std::exp(-0.5)));
    CHECK(multi_disjoint_prob_asym(three) == doctest::Approx(std::exp(-1.5)));
    CHECK(multi_disjoint_prob_asym(pair) == doctest::Approx(disjoint_prob_asym(2, 3)));
}

TEST_CASE("join_prob_asym") {
    const double l = 10.0 / 99.0;
    CHECK(join_prob_asym(100, 10, 2) == doctest::Approx(std::pow(1.0 - l, 100.0)));
    CHECK(join_prob_asym(100, 0, 3) == 1.0);
    CHECK(join_prob_asym(100000, 1, 3) == doctest::Approx(std::exp(-1.5)).epsilon(1e-4));
    const double l1 = 50.0 / 99.0;
    const double expected = std::pow(1.0 - l1, 50.0) * std::exp(l1 / (4.0 * (1.0 - l1)));
    CHECK(join_prob_asym(100, 50, 1) == doctest::Approx(expected));
    CHECK_THROWS_AS(join_prob_asym(10, 9, 1), invalid_input);
}

TEST_CASE("error_scale") {
    // d = 3; triple sum over i <= j < t of d_i d_j d_t^2 with all ones is C(3,2) + 2 = 4.
    CHECK(error_scale(DegreeSpec(1000, {996, 1, 1, 1})) == doctest::Approx((27.0 + 4.0) / 1000.0));
    CHECK(error_scale(DegreeSpec(50, {45, 4})) == doctest::Approx(64.0 / 50.0));
    const std::vector<int> d{1, 2, 3};
    double brute = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j)
            for (int t = j + 1; t < 3; ++t) brute += d[i] * d[j] * d[t] * d[t];
    CHECK(triple_degree_sum(d) == doctest::Approx(brute));
    CHECK(error_scale(DegreeSpec(30, {22, 2, 2, 3})) <= error_scale(DegreeSpec(30, {20, 2, 4, 3})));
}

TEST_CASE("check_case") {
    const auto one = check_case(DegreeSpec(10, {8, 1}));
    REQUIRE(one.case_id);
    CHECK(*one.case_id == 1);

    const auto three = check_case(DegreeSpec(100, {96, 1, 1, 1}));
    REQUIRE(three.case_id);
    CHECK(*three.case_id == 3);
    bool saw_margin = false;
    for (const auto& c : three.conditions)
        if (c.case_number == 3 && !c.satisfied) {
            saw_margin = true;
            CHECK(c.margin == doctest::Approx(3.0 / std::pow(100.0, 5.0 / 6.0)));
        }
    CHECK(saw_margin);

    const auto two = check_case(DegreeSpec(9, {2, 2, 2, 2}));
    REQUIRE(two.case_id);
    CHECK(*two.case_id == 2);
    for (const auto& c : two.conditions)
        if (c.case_number == 2) CHECK_FALSE(c.satisfied.has_value());

    const auto four = check_case(DegreeSpec(200, {100, 97, 2}));
    REQUIRE(four.case_id);
    CHECK(*four.case_id == 4);

    for (const auto& report : {one, two, three, four})
        for (const auto& c : report.conditions)
            if (c.case_number == *report.case_id && c.satisfied.has_value()) CHECK(*c.satisfied);
}
