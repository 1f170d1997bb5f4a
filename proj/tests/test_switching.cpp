#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "kfactor/errors.hpp"
#include "kfactor/switching.hpp"

using namespace kfactor;

namespace {

BigCount factorial(int n) {
    BigCount r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

BigCount sum(const std::vector<BigCount>& v) {
    return std::accumulate(v.begin(), v.end(), BigCount(0));
}

template <class F>
void for_each_permutation(int n, F&& f) {
    std::vector<int> image(n);
    std::iota(image.begin(), image.end(), 0);
    do {
        f(Permutation(image));
    } while (std::next_permutation(image.begin(), image.end()));
}

double to_double(const BigCount& x) { return x.convert_to<double>(); }

}  // namespace

TEST_CASE("threshold_M") {
    CHECK(threshold_M(100, 2, 2) == 32);
    CHECK(threshold_M(1000000000, 1, 1) == 21);
    CHECK(threshold_M(3, 1, 1) == 8);
    CHECK_THROWS_AS(threshold_M(100, 0, 1), invalid_input);
}

TEST_CASE("ratio_predicted and t_over_l0_predicted") {
    CHECK(ratio_predicted(100, 1, 1, 1) == doctest::Approx(2500.0 / 4950.0));
    CHECK(ratio_predicted(8, 1, 1, 1) == doctest::Approx(16.0 / 28.0));
    CHECK_THROWS_AS(ratio_predicted(8, 1, 1, 5), regime_refused);
    CHECK_THROWS_AS(ratio_predicted(8, 1, 1, 0), invalid_input);
    CHECK(t_over_l0_predicted(1, 1) == doctest::Approx(1.6487212707));
    CHECK(t_over_l0_predicted(2, 1) == doctest::Approx(std::exp(1.0)));
}

TEST_CASE("overlay bookkeeping") {
    const auto pm = standard_matching(4);
    const Overlay same(pm, pm, Permutation::identity(4));
    CHECK(same.t() == 2);
    CHECK(same.p2_free());
    CHECK(same.in_level(2));
    CHECK(forward_switchings(Overlay(pm, pm, Permutation({1, 2, 3, 0}))).empty());

    const auto triangle = LabelledGraph::complete(3);
    const Overlay p2(triangle, triangle, Permutation::identity(3));
    CHECK_FALSE(p2.p2_free());
    CHECK_THROWS_AS(forward_switchings(p2), invalid_input);
}

TEST_CASE("reverse switchings need an H-only edge") {
    const auto pm = standard_matching(6);
    CHECK(reverse_switchings(Overlay(pm, pm, Permutation::identity(6))).empty());
}

TEST_CASE("level sizes for K4 matchings") {
    const auto pm = standard_matching(4);
    CHECK(exact_L(pm, pm, 0) == 16);
    CHECK(exact_L(pm, pm, 1) == 0);
    CHECK(exact_L(pm, pm, 2) == 8);
    CHECK(exact_T(pm, pm) == 24);
}

TEST_CASE("the classifier partitions S_n") {
    for (int n = 3; n <= 7; ++n)
        for (int d : {1, 2}) {
            if ((n * d) % 2 == 1) continue;
            const auto D = d == 1 ? standard_matching(n) : circulant_regular(n, 2);
            const auto H = n % 2 == 0 ? standard_matching(n) : circulant_regular(n, 2);
            const auto c = level_census(D, H);
            CHECK(c.total == factorial(n));
            CHECK(sum(c.by_common) == factorial(n));
            CHECK(sum(c.level_size) + c.with_p2 == factorial(n));
            if (d == 1 && n % 2 == 0) CHECK(sum(c.level_size) == factorial(n));
        }
}

TEST_CASE("level census does not depend on workers") {
    const auto D = circulant_regular(7, 2);
    const auto a = switching_census(D, D, 1);
    const auto b = switching_census(D, D, 3);
    CHECK(a.levels.level_size == b.levels.level_size);
    CHECK(a.forward_out == b.forward_out);
    CHECK(a.reverse_in == b.reverse_in);
}

TEST_CASE("forward and reverse moves land where they should and invert each other") {
    for (int n : {6, 7}) {
        const auto D = n % 2 == 0 ? standard_matching(n) : circulant_regular(n, 2);
        const auto H = circulant_regular(n, 2);
        int checked = 0;
        for_each_permutation(n, [&](const Permutation& pi) {
            const Overlay o(D, H, pi);
            if (!o.p2_free()) return;
            const int t = o.t();
            for (const auto& m : forward_switchings(o)) {
                const auto next = o.apply(m);
                CHECK(next.in_level(t - 1));
                auto expected = o.common();
                expected.erase(std::find(expected.begin(), expected.end(), Edge(m.a, m.b)));
                CHECK(next.common() == expected);
                const SwitchMove back{m.e, m.a, m.f, m.b};
                const auto reverse = reverse_switchings(next);
                CHECK(std::find(reverse.begin(), reverse.end(), back) != reverse.end());
                CHECK(next.apply(back).pi() == pi);
                ++checked;
            }
            for (const auto& m : reverse_switchings(o)) {
                const auto next = o.apply(m);
                CHECK(next.in_level(t + 1));
                CHECK(next.common().size() == o.common().size() + 1);
                CHECK(std::includes(next.common().begin(), next.common().end(), o.common().begin(),
                                    o.common().end()));
                CHECK(next.apply(SwitchMove{m.e, m.a, m.f, m.b}).pi() == pi);
            }
        });
        CHECK(checked > 0);
    }
}

TEST_CASE("double counting identity for n <= 7") {
    for (int n = 4; n <= 7; ++n)
        for (int d : {1, 2})
            for (int h : {1, 2}) {
                if ((n * d) % 2 == 1 || (n * h) % 2 == 1) continue;
                const auto D = d == 1 ? standard_matching(n) : circulant_regular(n, 2);
                const auto H = h == 1 ? standard_matching(n) : circulant_regular(n, 2);
                const auto c = switching_census(D, H);
                for (std::size_t t = 1; t < c.forward_out.size(); ++t) CHECK(c.forward_out[t] == c.reverse_in[t]);
            }
}

TEST_CASE("matchings on eight vertices") {
    const auto pm = standard_matching(8);
    const auto c = switching_census(pm, pm);
    CHECK(sum(c.levels.level_size) == factorial(8));
    const auto& L = c.levels.level_size;
    REQUIRE(L.size() >= 2);

    const double forward_average = to_double(c.forward_out[1]) / to_double(L[1]);
    const double reverse_average = to_double(c.reverse_in[1]) / to_double(L[0]);
    CHECK(std::abs(forward_average - 28.0) <= 0.5 * 28.0);
    CHECK(std::abs(reverse_average - 16.0) <= 0.5 * 16.0);

    const double ratio = to_double(L[1]) / to_double(L[0]);
    const double predicted = ratio_predicted(8, 1, 1, 1);
    CHECK(ratio >= 0.5 * predicted);
    CHECK(ratio <= 2.0 * predicted);

    const auto T = exact_T(pm, pm);
    CHECK(T >= L[0]);
    CHECK(T <= factorial(8));
    CHECK(std::abs(to_double(T) / to_double(L[0]) - t_over_l0_predicted(1, 1)) <= 0.5);
}

TEST_CASE("enumeration refuses large orders") {
    const auto pm = standard_matching(10);
    CHECK_THROWS_AS(exact_L(pm, pm, 0), regime_refused);
    CHECK_THROWS_AS(level_census(pm, pm), regime_refused);
}
