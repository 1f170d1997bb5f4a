#include "kfactor/switching.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include <fmt/core.h>

#include "kfactor/errors.hpp"

namespace kfactor {

namespace {

void require_pair(const LabelledGraph& D, const LabelledGraph& H) {
    if (D.order() != H.order())
        throw invalid_input(fmt::format("D and H have different orders ({} vs {})", D.order(), H.order()));
    if (D.order() > kSwitchingMaxOrder)
        throw regime_refused(fmt::format("exact relabelling enumeration supports n <= {} (got {})",
                                         kSwitchingMaxOrder, D.order()));
}

void grow(std::vector<BigCount>& v, std::size_t size) {
    if (v.size() < size) v.resize(size, 0);
}

void add_into(std::vector<BigCount>& into, const std::vector<BigCount>& from) {
    grow(into, from.size());
    for (std::size_t i = 0; i < from.size(); ++i) into[i] += from[i];
}

// Visits every permutation of [0, n) whose image of 0 is assigned to this
// worker, in lexicographic order.
template <class Visit>
void for_each_permutation(int n, int worker, int workers, Visit&& visit) {
    for (int first = 0; first < n; ++first) {
        if (first % workers != worker) continue;
        std::vector<int> image(n);
        image[0] = first;
        for (int i = 1, v = 0; i < n; ++i, ++v) {
            if (v == first) ++v;
            image[i] = v;
        }
        do {
            visit(Permutation(image));
        } while (std::next_permutation(image.begin() + 1, image.end()));
    }
    if (n == 0 && worker == 0) visit(Permutation::identity(0));
}

template <class Census, class Work>
Census run_workers(int workers, Work work, void (*merge)(Census&, const Census&)) {
    workers = std::max(1, workers);
    std::vector<Census> parts(workers);
    if (workers == 1) {
        work(0, 1, parts[0]);
    } else {
        std::vector<std::thread> threads;
        std::vector<std::exception_ptr> errors(workers);
        for (int w = 0; w < workers; ++w)
            threads.emplace_back([&, w] {
                try {
                    work(w, workers, parts[w]);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        for (auto& t : threads) t.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    Census total = std::move(parts[0]);
    for (int w = 1; w < workers; ++w) merge(total, parts[w]);
    return total;
}

void merge_levels(LevelCensus& into, const LevelCensus& from) {
    add_into(into.level_size, from.level_size);
    add_into(into.by_common, from.by_common);
    into.with_p2 += from.with_p2;
    into.total += from.total;
}

void merge_switches(SwitchCensus& into, const SwitchCensus& from) {
    merge_levels(into.levels, from.levels);
    add_into(into.forward_out, from.forward_out);
    add_into(into.reverse_in, from.reverse_in);
}

void tally(LevelCensus& c, const Overlay& o) {
    const auto t = static_cast<std::size_t>(o.t());
    grow(c.by_common, t + 1);
    grow(c.level_size, t + 1);
    c.by_common[t] += 1;
    if (o.p2_free())
        c.level_size[t] += 1;
    else
        c.with_p2 += 1;
    c.total += 1;
}

Permutation double_transposition(int n, const SwitchMove& m) {
    std::vector<int> image(n);
    std::iota(image.begin(), image.end(), 0);
    std::swap(image[m.a], image[m.e]);
    std::swap(image[m.b], image[m.f]);
    return Permutation(std::move(image));
}

bool distinct(int a, int e, int b, int f) {
    return a != e && a != b && a != f && e != b && e != f && b != f;
}

}  // namespace

int threshold_M(std::int64_t n, int d, int h) {
    if (n < 2) throw invalid_input(fmt::format("threshold_M: n = {} < 2", n));
    if (d < 1 || h < 1) throw invalid_input("threshold_M: d and h must be >= 1");
    const double value = std::max(8.0 * d * h, std::log(static_cast<double>(n)));
    return static_cast<int>(std::ceil(value));
}

Overlay::Overlay(std::shared_ptr<const LabelledGraph> D, std::shared_ptr<const LabelledGraph> H, Permutation pi)
    : D_(std::move(D)), H_(std::move(H)), pi_(std::move(pi)) {
    if (D_->order() != H_->order() || pi_.size() != D_->order())
        throw invalid_input("Overlay: D, H and pi must have the same size");
    image_ = relabel(*H_, pi_);
    common_ = common_edges(*D_, image_);
    p2_free_ = !has_common_p2(*D_, image_);
}

Overlay::Overlay(const LabelledGraph& D, const LabelledGraph& H, Permutation pi)
    : Overlay(std::make_shared<const LabelledGraph>(D), std::make_shared<const LabelledGraph>(H), std::move(pi)) {}

Overlay Overlay::apply(const SwitchMove& move) const {
    const int n = D_->order();
    for (int v : {move.a, move.e, move.b, move.f})
        if (v < 0 || v >= n) throw invalid_input("SwitchMove: vertex out of range");
    if (!distinct(move.a, move.e, move.b, move.f)) throw invalid_input("SwitchMove: vertices must be distinct");
    return Overlay(D_, H_, compose(double_transposition(n, move), pi_));
}

std::vector<SwitchMove> forward_switchings(const Overlay& o) {
    if (!o.p2_free()) throw invalid_input("forward_switchings: overlay has a common path of length 2");
    std::vector<SwitchMove> moves;
    const int n = o.D().order();
    for (const Edge& ab : o.common()) {
        std::vector<Edge> expected;
        std::copy_if(o.common().begin(), o.common().end(), std::back_inserter(expected),
                     [&](const Edge& x) { return x != ab; });
        for (int e = 0; e < n; ++e) {
            for (int f = 0; f < n; ++f) {
                if (!distinct(ab.u, e, ab.v, f) || o.D().has_edge(e, f)) continue;
                const SwitchMove move{ab.u, e, ab.v, f};
                const Overlay next = o.apply(move);
                if (next.p2_free() && next.common() == expected) moves.push_back(move);
            }
        }
    }
    return moves;
}

std::vector<SwitchMove> reverse_switchings(const Overlay& o) {
    if (!o.p2_free()) throw invalid_input("reverse_switchings: overlay has a common path of length 2");
    std::vector<SwitchMove> moves;
    const auto& D = o.D();
    const auto& image = o.image();
    std::vector<Edge> h_only, d_only;
    for (const Edge& x : image.edges())
        if (!D.has_edge(x.u, x.v)) h_only.push_back(x);
    for (const Edge& x : D.edges())
        if (!image.has_edge(x.u, x.v)) d_only.push_back(x);

    for (const Edge& hab : h_only) {
        for (auto [a, b] : {std::pair{hab.u, hab.v}, std::pair{hab.v, hab.u}}) {
            for (const Edge& ef : d_only) {
                if (!distinct(a, ef.u, b, ef.v)) continue;
                const SwitchMove move{a, ef.u, b, ef.v};
                const Overlay next = o.apply(move);
                if (!next.p2_free()) continue;
                std::vector<Edge> expected = o.common();
                expected.insert(std::upper_bound(expected.begin(), expected.end(), ef), ef);
                if (next.common() == expected) moves.push_back(move);
            }
        }
    }
    return moves;
}

LevelCensus level_census(const LabelledGraph& D, const LabelledGraph& H, int workers) {
    require_pair(D, H);
    auto Dp = std::make_shared<const LabelledGraph>(D);
    auto Hp = std::make_shared<const LabelledGraph>(H);
    auto work = [&](int worker, int count, LevelCensus& out) {
        for_each_permutation(D.order(), worker, count, [&](Permutation p) { tally(out, Overlay(Dp, Hp, std::move(p))); });
    };
    return run_workers<LevelCensus>(workers, work, merge_levels);
}

SwitchCensus switching_census(const LabelledGraph& D, const LabelledGraph& H, int workers) {
    require_pair(D, H);
    auto Dp = std::make_shared<const LabelledGraph>(D);
    auto Hp = std::make_shared<const LabelledGraph>(H);
    auto work = [&](int worker, int count, SwitchCensus& out) {
        for_each_permutation(D.order(), worker, count, [&](Permutation p) {
            const Overlay o(Dp, Hp, std::move(p));
            tally(out.levels, o);
            if (!o.p2_free()) return;
            const auto t = static_cast<std::size_t>(o.t());
            grow(out.forward_out, t + 1);
            grow(out.reverse_in, t + 2);
            if (t >= 1) out.forward_out[t] += forward_switchings(o).size();
            out.reverse_in[t + 1] += reverse_switchings(o).size();
        });
    };
    auto census = run_workers<SwitchCensus>(workers, work, merge_switches);
    const std::size_t levels = std::max(census.forward_out.size(), census.reverse_in.size());
    grow(census.forward_out, levels);
    grow(census.reverse_in, levels);
    return census;
}

BigCount exact_L(const LabelledGraph& D, const LabelledGraph& H, int t) {
    if (t < 0) throw invalid_input("exact_L: t must be >= 0");
    const auto census = level_census(D, H);
    return static_cast<std::size_t>(t) < census.level_size.size() ? census.level_size[t] : BigCount(0);
}

BigCount exact_T(const LabelledGraph& D, const LabelledGraph& H) {
    require_pair(D, H);
    const int d = D.regular_degree();
    const int h = H.regular_degree();
    if (d < 1 || h < 1) throw invalid_input("exact_T: D and H must be regular with degree >= 1");
    const int M = threshold_M(D.order(), d, h);
    const auto census = level_census(D, H);
    BigCount total = 0;
    for (std::size_t t = 0; t < census.level_size.size() && t < static_cast<std::size_t>(M); ++t)
        total += census.level_size[t];
    return total;
}

double ratio_predicted(std::int64_t n, int d, int h, int t) {
    if (t < 1) throw invalid_input(fmt::format("ratio_predicted: t = {} < 1", t));
    const double md = 0.5 * static_cast<double>(n) * d;
    const double mh = 0.5 * static_cast<double>(n) * h;
    const double a = md - t + 1;
    const double b = mh - t + 1;
    if (a <= 0.0 || b <= 0.0)
        throw regime_refused(fmt::format("ratio_predicted: t = {} exceeds the edge counts (m_d = {}, m_h = {})", t,
                                         md, mh));
    return a * b / (t * 0.5 * static_cast<double>(n) * (n - 1.0));
}

double t_over_l0_predicted(int d, int h) {
    if (d < 1 || h < 1) throw invalid_input("t_over_l0_predicted: d and h must be >= 1");
    return std::exp(0.5 * d * h);
}

}  // namespace kfactor
