#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "kfactor/graphs.hpp"
#include "kfactor/numeric.hpp"

namespace kfactor {

using Rng = std::mt19937_64;

/// splitmix64 finaliser applied to seed + (stream + 1) * golden gamma: the
/// stream-th output of a splitmix64 generator started at seed. Trial i of
/// every estimator draws from Rng(derive_seed(seed, i)), so results do not
/// depend on how trials are split across workers.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// Streams at and above this value are reserved for fixed inputs such as
// the graphs D and H of an experiment; trial streams stay below it.
inline constexpr std::uint64_t kGraphStreamBase = std::uint64_t{1} << 63;

/// Empirical probability with standard error and a 95% interval.
///
/// std_err is sqrt(p(1-p)/trials). When every trial succeeded or every
/// trial failed it uses p = (x + 1/2)/(trials + 1) instead so the error is
/// never zero. The interval is the normal one, p_hat +- 1.96 std_err clipped
/// to [0, 1], unless fewer than 10 successes or fewer than 10 failures were
/// seen, in which case the Wilson score interval is used.
struct Estimate {
    double p_hat = 0.0;
    std::uint64_t successes = 0;
    std::uint64_t trials = 0;
    double std_err = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 1.0;
    bool wilson = false;

    bool covers(double p) const { return ci_lo <= p && p <= ci_hi; }
};

Estimate make_estimate(std::uint64_t successes, std::uint64_t trials);

struct MeanEstimate {
    double mean = 0.0;
    double std_err = 0.0;
    std::uint64_t trials = 0;
};

// Sampling limits: d <= 4, n <= 10000, and n >= 20 once d >= 2.
inline constexpr int kMaxSampledDegree = 4;
inline constexpr int kMaxSampledOrder = 10000;
inline constexpr int kMinOrderForDegreeAboveOne = 20;

/// Uniform d-regular graph from the pairing model, redrawing until the
/// pairing has no loops or double edges. Odd n*d throws invalid_input;
/// orders or degrees outside the limits throw regime_refused.
LabelledGraph random_regular(int n, int d, Rng& rng);
LabelledGraph random_regular(int n, int d, std::uint64_t seed);

/// Uniformly random permutation of [0, n).
Permutation random_permutation(int n, Rng& rng);

/// Fraction of uniformly random relabellings pi of H with D and pi(H)
/// edge-disjoint.
Estimate estimate_disjoint_prob(const LabelledGraph& D, const LabelledGraph& H, std::uint64_t trials,
                                std::uint64_t seed, int workers = 1);

/// Fraction of trials in which independently sampled, randomly relabelled
/// regular graphs of the given degrees are pairwise edge-disjoint. Each
/// graph is merged into the running union, stopping at the first overlap.
Estimate estimate_multi_disjoint(std::span<const int> degrees, int n, std::uint64_t trials, std::uint64_t seed,
                                 int workers = 1);

/// n d(d-1) h(h-1) / (2 (n-1)(n-2)): expected number of common paths of
/// length two under a random relabelling.
double expected_common_p2(std::int64_t n, int d, int h);

/// Monte Carlo mean of common_p2_count(D, pi(H)).
MeanEstimate estimate_common_p2_mean(const LabelledGraph& D, const LabelledGraph& H, std::uint64_t trials,
                                     std::uint64_t seed, int workers = 1);

/// Probability that a random relabelling of H has a common path of length
/// two with D or at least threshold_M(n, d, h) common edges.
Estimate estimate_overlap_tail(const LabelledGraph& D, const LabelledGraph& H, std::uint64_t trials,
                               std::uint64_t seed, int workers = 1);

/// Same, with D = random_regular(n, d) and H = random_regular(n, h) drawn
/// from the reserved streams kGraphStreamBase and kGraphStreamBase + 1.
Estimate estimate_overlap_tail(int n, int d, int h, std::uint64_t trials, std::uint64_t seed, int workers = 1);

/// The graphs used by experiments that sample D and H from a seed: graph i
/// comes from stream kGraphStreamBase + i.
LabelledGraph experiment_graph(int n, int d, std::uint64_t seed, int index);

/// A random input satisfying every summation-lemma hypothesis: Z in
/// [2, 40], c_hat in [0.01, 0.33], A(i) in [0, c_hat Z] (occasionally 0),
/// A(i)B(i) in [-c_hat, c_hat] and (i-1)B(i) <= 1 (occasionally = 1).
SummationInput random_summation_input(Rng& rng);

}  // namespace kfactor
