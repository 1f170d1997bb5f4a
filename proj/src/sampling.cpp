#include "kfactor/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include <fmt/core.h>

#include "kfactor/errors.hpp"
#include "kfactor/switching.hpp"

namespace kfactor {

namespace {

constexpr double kZ95 = 1.959963984540054;
constexpr int kMaxPairingAttempts = 1'000'000;

void check_regime(int n, int d) {
    if (n < 1 || d < 0) throw invalid_input(fmt::format("random_regular: bad order {} or degree {}", n, d));
    if (d > n - 1) throw invalid_input(fmt::format("random_regular: degree {} > n - 1 = {}", d, n - 1));
    if ((static_cast<std::int64_t>(n) * d) % 2 != 0)
        throw invalid_input(fmt::format("random_regular: n*d = {}*{} is odd", n, d));
    if (d > kMaxSampledDegree)
        throw regime_refused(fmt::format("random_regular: degree {} > {} is outside the pairing-model regime", d,
                                         kMaxSampledDegree));
    if (n > kMaxSampledOrder)
        throw regime_refused(fmt::format("random_regular: order {} > {}", n, kMaxSampledOrder));
    if (d >= 2 && n < kMinOrderForDegreeAboveOne)
        throw regime_refused(fmt::format("random_regular: degree {} needs n >= {} (got {})", d,
                                         kMinOrderForDegreeAboveOne, n));
}

// Runs trial(rng) for trial indices split into contiguous blocks, one per
// worker, and returns the per-worker accumulators in worker order.
template <class Acc, class Trial>
std::vector<Acc> run_trials(std::uint64_t trials, std::uint64_t seed, int workers, Trial trial) {
    workers = static_cast<int>(std::clamp<std::uint64_t>(static_cast<std::uint64_t>(std::max(1, workers)), 1,
                                                         std::max<std::uint64_t>(trials, 1)));
    std::vector<Acc> acc(workers);
    auto block = [&](int w) {
        const std::uint64_t lo = trials * w / workers;
        const std::uint64_t hi = trials * (w + 1) / workers;
        for (std::uint64_t i = lo; i < hi; ++i) {
            Rng rng(derive_seed(seed, i));
            trial(rng, acc[w]);
        }
    };
    if (workers == 1) {
        block(0);
        return acc;
    }
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(workers);
    for (int w = 0; w < workers; ++w)
        threads.emplace_back([&, w] {
            try {
                block(w);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& t : threads) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return acc;
}

template <class Trial>
Estimate estimate_indicator(std::uint64_t trials, std::uint64_t seed, int workers, Trial trial) {
    if (trials == 0) throw invalid_input("estimators need at least one trial");
    auto parts = run_trials<std::uint64_t>(trials, seed, workers, [&](Rng& rng, std::uint64_t& hits) {
        if (trial(rng)) ++hits;
    });
    return make_estimate(std::accumulate(parts.begin(), parts.end(), std::uint64_t{0}), trials);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + (stream + 1) * 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

Estimate make_estimate(std::uint64_t successes, std::uint64_t trials) {
    if (trials == 0) throw invalid_input("make_estimate: zero trials");
    if (successes > trials) throw invalid_input("make_estimate: more successes than trials");
    Estimate e;
    e.successes = successes;
    e.trials = trials;
    const double N = static_cast<double>(trials);
    const double x = static_cast<double>(successes);
    e.p_hat = x / N;
    const bool degenerate = successes == 0 || successes == trials;
    const double p_err = degenerate ? (x + 0.5) / (N + 1.0) : e.p_hat;
    e.std_err = std::sqrt(p_err * (1.0 - p_err) / N);

    if (std::min(successes, trials - successes) < 10) {
        e.wilson = true;
        const double z2 = kZ95 * kZ95;
        const double denom = 1.0 + z2 / N;
        const double centre = (e.p_hat + z2 / (2.0 * N)) / denom;
        const double half = kZ95 * std::sqrt(e.p_hat * (1.0 - e.p_hat) / N + z2 / (4.0 * N * N)) / denom;
        e.ci_lo = std::max(0.0, centre - half);
        e.ci_hi = std::min(1.0, centre + half);
    } else {
        e.ci_lo = std::max(0.0, e.p_hat - kZ95 * e.std_err);
        e.ci_hi = std::min(1.0, e.p_hat + kZ95 * e.std_err);
    }
    e.ci_lo = std::min(e.ci_lo, e.p_hat);
    e.ci_hi = std::max(e.ci_hi, e.p_hat);
    return e;
}

LabelledGraph random_regular(int n, int d, Rng& rng) {
    check_regime(n, d);
    LabelledGraph g(n);
    if (d == 0) return g;
    std::vector<int> points(static_cast<std::size_t>(n) * d);
    for (std::size_t i = 0; i < points.size(); ++i) points[i] = static_cast<int>(i / d);
    for (int attempt = 0; attempt < kMaxPairingAttempts; ++attempt) {
        std::shuffle(points.begin(), points.end(), rng);
        bool simple = true;
        std::size_t placed = 0;
        for (; placed < points.size(); placed += 2) {
            const int u = points[placed], v = points[placed + 1];
            if (u == v || g.has_edge(u, v)) {
                simple = false;
                break;
            }
            g.add_edge(u, v);
        }
        if (simple) return g;
        for (std::size_t i = 0; i < placed; i += 2) g.remove_edge(points[i], points[i + 1]);
    }
    throw regime_refused(fmt::format("random_regular: no simple pairing after {} attempts", kMaxPairingAttempts));
}

LabelledGraph random_regular(int n, int d, std::uint64_t seed) {
    Rng rng(seed);
    return random_regular(n, d, rng);
}

Permutation random_permutation(int n, Rng& rng) {
    std::vector<int> image(n);
    std::iota(image.begin(), image.end(), 0);
    std::shuffle(image.begin(), image.end(), rng);
    return Permutation(std::move(image));
}

Estimate estimate_disjoint_prob(const LabelledGraph& D, const LabelledGraph& H, std::uint64_t trials,
                                std::uint64_t seed, int workers) {
    if (D.order() != H.order())
        throw invalid_input(fmt::format("estimate_disjoint_prob: orders differ ({} vs {})", D.order(), H.order()));
    const auto h_edges = H.edges();
    const int n = D.order();
    return estimate_indicator(trials, seed, workers, [&](Rng& rng) {
        const Permutation p = random_permutation(n, rng);
        return std::none_of(h_edges.begin(), h_edges.end(), [&](const Edge& e) { return D.has_edge(p(e.u), p(e.v)); });
    });
}

Estimate estimate_multi_disjoint(std::span<const int> degrees, int n, std::uint64_t trials, std::uint64_t seed,
                                 int workers) {
    for (int d : degrees) check_regime(n, d);
    return estimate_indicator(trials, seed, workers, [&](Rng& rng) {
        LabelledGraph acc(n);
        for (int d : degrees) {
            LabelledGraph g = random_regular(n, d, rng);
            g = relabel(g, random_permutation(n, rng));
            if (common_edge_count(acc, g) != 0) return false;
            acc = merge_disjoint(acc, g);
        }
        return true;
    });
}

double expected_common_p2(std::int64_t n, int d, int h) {
    if (n < 3) throw invalid_input(fmt::format("expected_common_p2: n = {} < 3", n));
    const double dn = static_cast<double>(n);
    return dn * d * (d - 1.0) * h * (h - 1.0) / (2.0 * (dn - 1.0) * (dn - 2.0));
}

MeanEstimate estimate_common_p2_mean(const LabelledGraph& D, const LabelledGraph& H, std::uint64_t trials,
                                     std::uint64_t seed, int workers) {
    if (D.order() != H.order()) throw invalid_input("estimate_common_p2_mean: orders differ");
    if (trials < 2) throw invalid_input("estimate_common_p2_mean: need at least two trials");
    struct Sums {
        std::uint64_t sum = 0;
        std::uint64_t sum_sq = 0;
    };
    const int n = D.order();
    auto parts = run_trials<Sums>(trials, seed, workers, [&](Rng& rng, Sums& s) {
        const auto c = static_cast<std::uint64_t>(common_p2_count(D, relabel(H, random_permutation(n, rng))));
        s.sum += c;
        s.sum_sq += c * c;
    });
    Sums total;
    for (const auto& p : parts) {
        total.sum += p.sum;
        total.sum_sq += p.sum_sq;
    }
    MeanEstimate m;
    m.trials = trials;
    const double N = static_cast<double>(trials);
    m.mean = total.sum / N;
    const double var = std::max(0.0, (total.sum_sq - N * m.mean * m.mean) / (N - 1.0));
    m.std_err = std::sqrt(var / N);
    return m;
}

Estimate estimate_overlap_tail(const LabelledGraph& D, const LabelledGraph& H, std::uint64_t trials,
                               std::uint64_t seed, int workers) {
    if (D.order() != H.order()) throw invalid_input("estimate_overlap_tail: orders differ");
    const int d = D.regular_degree();
    const int h = H.regular_degree();
    if (d < 1 || h < 1) throw invalid_input("estimate_overlap_tail: D and H must be regular with degree >= 1");
    const int M = threshold_M(D.order(), d, h);
    const int n = D.order();
    return estimate_indicator(trials, seed, workers, [&](Rng& rng) {
        const LabelledGraph image = relabel(H, random_permutation(n, rng));
        return has_common_p2(D, image) || common_edge_count(D, image) >= static_cast<std::size_t>(M);
    });
}

LabelledGraph experiment_graph(int n, int d, std::uint64_t seed, int index) {
    return random_regular(n, d, derive_seed(seed, kGraphStreamBase + static_cast<std::uint64_t>(index)));
}

Estimate estimate_overlap_tail(int n, int d, int h, std::uint64_t trials, std::uint64_t seed, int workers) {
    if (d < 1 || h < 1) throw invalid_input("estimate_overlap_tail: d and h must be >= 1");
    return estimate_overlap_tail(experiment_graph(n, d, seed, 0), experiment_graph(n, h, seed, 1), trials, seed,
                                 workers);
}

SummationInput random_summation_input(Rng& rng) {
    std::uniform_int_distribution<int> z_dist(2, 40);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (;;) {
        SummationInput in;
        in.Z = z_dist(rng);
        in.c_hat = 0.01 + 0.32 * unit(rng);
        in.A.resize(in.Z);
        in.B.resize(in.Z);
        for (int i = 1; i <= in.Z; ++i) {
            double a = unit(rng) < 0.02 ? 0.0 : in.c_hat * in.Z * unit(rng);
            double c = in.c_hat * (2.0 * unit(rng) - 1.0);
            double b = a > 0.0 ? c / a : c;
            if (i >= 2 && (b * (i - 1) > 1.0 || unit(rng) < 0.01)) b = 1.0 / (i - 1);
            if (std::abs(a * b) > in.c_hat) b = 0.0;
            in.A[i - 1] = a;
            in.B[i - 1] = b;
        }
        if (check_summation_hypotheses(in).empty()) return in;
    }
}

}  // namespace kfactor
