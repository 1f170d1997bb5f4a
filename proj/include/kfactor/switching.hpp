#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "kfactor/exact.hpp"
#include "kfactor/graphs.hpp"

namespace kfactor {

/// ceil(max(8dh, ln n)).
int threshold_M(std::int64_t n, int d, int h);

/// The double transposition (a e)(b f), applied after the current relabelling.
struct SwitchMove {
    int a = 0, e = 0, b = 0, f = 0;
    friend bool operator==(const SwitchMove&, const SwitchMove&) = default;
};

/// A fixed graph D, a graph H and a relabelling pi of H, with the common
/// edges of D and pi(H) cached. The overlay lies in level t when it has no
/// common path of length two and exactly t common edges.
class Overlay {
public:
    Overlay(std::shared_ptr<const LabelledGraph> D, std::shared_ptr<const LabelledGraph> H, Permutation pi);
    Overlay(const LabelledGraph& D, const LabelledGraph& H, Permutation pi);

    const LabelledGraph& D() const { return *D_; }
    const LabelledGraph& H() const { return *H_; }
    const Permutation& pi() const { return pi_; }
    // pi applied to H.
    const LabelledGraph& image() const { return image_; }
    const std::vector<Edge>& common() const { return common_; }
    int t() const { return static_cast<int>(common_.size()); }
    bool p2_free() const { return p2_free_; }
    bool in_level(int level) const { return p2_free_ && t() == level; }

    Overlay apply(const SwitchMove& move) const;

private:
    std::shared_ptr<const LabelledGraph> D_;
    std::shared_ptr<const LabelledGraph> H_;
    Permutation pi_;
    LabelledGraph image_;
    std::vector<Edge> common_;
    bool p2_free_ = false;
};

/// Forward switchings out of an overlay in level t >= 1: ab is a common edge
/// (a < b), ef is not an edge of D, a, e, b, f are distinct, afterwards the
/// common edges are exactly the old ones minus ab, and the result has no
/// common path of length two (so it lies in level t-1). Empty when t = 0.
/// Throws invalid_input if the overlay has a common path of length two.
std::vector<SwitchMove> forward_switchings(const Overlay& o);

/// Reverse switchings out of an overlay in level t-1: ab is an edge of pi(H)
/// but not of D (both orientations), ef is an edge of D but not of pi(H)
/// (e < f), a, e, b, f are distinct, afterwards the common edges are exactly
/// the old ones plus ef, and the result has no common path of length two.
/// Forward move (a,e,b,f) from pi corresponds to reverse move (e,a,f,b)
/// from its image.
std::vector<SwitchMove> reverse_switchings(const Overlay& o);

/// Number of relabellings per level, over all n! permutations.
struct LevelCensus {
    // level_size[t] = L(t): no common P2 and exactly t common edges.
    std::vector<BigCount> level_size;
    // by_common[t]: exactly t common edges, P2 or not.
    std::vector<BigCount> by_common;
    BigCount with_p2 = 0;
    BigCount total = 0;
};

/// Switch totals per level: forward_out[t] sums forward moves over level t,
/// reverse_in[t] sums reverse moves over level t-1 (index 0 unused).
struct SwitchCensus {
    LevelCensus levels;
    std::vector<BigCount> forward_out;
    std::vector<BigCount> reverse_in;
};

inline constexpr int kSwitchingMaxOrder = 8;

// The functions below enumerate S_n in lexicographic order (split by the
// image of vertex 0 across workers) and refuse n > kSwitchingMaxOrder.
LevelCensus level_census(const LabelledGraph& D, const LabelledGraph& H, int workers = 1);
SwitchCensus switching_census(const LabelledGraph& D, const LabelledGraph& H, int workers = 1);

/// L(t) = |level t|.
BigCount exact_L(const LabelledGraph& D, const LabelledGraph& H, int t);

/// T = L(0) + ... + L(M-1), M = threshold_M(n, d, h). D and H must be
/// regular of degree at least one.
BigCount exact_T(const LabelledGraph& D, const LabelledGraph& H);

/// (m_d - t + 1)(m_h - t + 1) / (t C(n,2)) with m_d = nd/2, m_h = nh/2.
/// Throws invalid_input for t < 1 and regime_refused when a factor is not
/// positive.
double ratio_predicted(std::int64_t n, int d, int h, int t);

/// exp(dh/2), the leading term of T/L(0).
double t_over_l0_predicted(int d, int h);

}  // namespace kfactor
