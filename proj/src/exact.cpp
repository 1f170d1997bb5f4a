#include "kfactor/exact.hpp"

#include <algorithm>
#include <mutex>
#include <thread>
#include <unordered_map>
#include <vector>

#include <fmt/core.h>

#include "kfactor/canonical.hpp"
#include "kfactor/errors.hpp"

namespace kfactor {

namespace {

using Mask = BitGraph::Mask;
using Clock = std::chrono::steady_clock;

constexpr Mask bit(int v) { return Mask{1} << v; }
// Vertices strictly above v.
constexpr Mask above(int v) { return ~((Mask{2} << v) - 1); }

BitGraph minus(const BitGraph& g, const BitGraph& f) {
    BitGraph out = g;
    for (int v = 0; v < g.n; ++v) out.adj[v] &= ~f.adj[v];
    return out;
}

bool is_complete(const BitGraph& g) { return g == BitGraph::complete(g.n); }

// Walks the residual-degree search tree: the lowest vertex v with unmet
// degree takes exactly residual[v] neighbours among higher vertices that
// still need edges, chosen in ascending order.
class DegreeCompletion {
public:
    DegreeCompletion(const BitGraph& host, int d) : host_(host) {
        chosen_.n = host.n;
        for (int v = 0; v < host.n; ++v) residual_[v] = d;
        positive_ = d > 0 ? host.all_vertices() : 0;
    }

    template <class Leaf>
    void enumerate(Leaf& leaf) {
        descend(leaf);
    }

    std::uint64_t nodes() const { return nodes_; }

private:
    bool feasible() const {
        for (Mask rest = positive_; rest; rest &= rest - 1) {
            const int w = std::countr_zero(rest);
            if (std::popcount(host_.adj[w] & positive_) < residual_[w]) return false;
        }
        return true;
    }

    template <class Leaf>
    void descend(Leaf& leaf) {
        ++nodes_;
        if (!positive_) {
            leaf(chosen_);
            return;
        }
        const int v = std::countr_zero(positive_);
        const Mask candidates = host_.adj[v] & positive_ & above(v);
        if (std::popcount(candidates) < residual_[v]) return;
        pick(v, candidates, residual_[v], leaf);
    }

    template <class Leaf>
    void pick(int v, Mask candidates, int need, Leaf& leaf) {
        if (need == 0) {
            positive_ &= ~bit(v);
            if (feasible()) descend(leaf);
            positive_ |= bit(v);
            return;
        }
        for (Mask rest = candidates; std::popcount(rest) >= need; rest &= rest - 1) {
            const int u = std::countr_zero(rest);
            if (--residual_[u] == 0) positive_ &= ~bit(u);
            chosen_.add_edge(v, u);
            pick(v, rest & above(u), need - 1, leaf);
            chosen_.remove_edge(v, u);
            if (residual_[u]++ == 0) positive_ |= bit(u);
        }
    }

    const BitGraph& host_;
    BitGraph chosen_;
    std::array<int, BitGraph::kMaxOrder> residual_{};
    Mask positive_ = 0;
    std::uint64_t nodes_ = 0;
};

// Same search, but subproblems are cached. Everything below the current
// vertex is settled, so the rest depends only on the residual degrees of
// the unsettled vertices (and, for a complete host, only on their multiset).
class ResidualCounter {
public:
    ResidualCounter(const BitGraph& host, int d) : host_(host), symmetric_(is_complete(host)) {
        for (int v = 0; v < host.n; ++v) residual_[v] = d;
        positive_ = d > 0 ? host.all_vertices() : 0;
    }

    BigCount count() {
        if (!positive_) return 1;
        const std::uint64_t key = make_key();
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        ++nodes_;
        BigCount total = 0;
        const int v = std::countr_zero(positive_);
        const Mask candidates = host_.adj[v] & positive_ & above(v);
        if (std::popcount(candidates) >= residual_[v]) pick(v, candidates, residual_[v], total);
        memo_.emplace(key, total);
        return total;
    }

    std::uint64_t nodes() const { return nodes_; }

private:
    std::uint64_t make_key() const {
        std::array<int, BitGraph::kMaxOrder> values{};
        int count = 0;
        for (int v = 0; v < host_.n; ++v) values[count++] = (positive_ & bit(v)) ? residual_[v] : 0;
        if (symmetric_) std::sort(values.begin(), values.begin() + count, std::greater<>());
        std::uint64_t key = 0;
        for (int i = 0; i < count; ++i) key = (key << 4) | static_cast<std::uint64_t>(values[i]);
        return key;
    }

    bool feasible() const {
        for (Mask rest = positive_; rest; rest &= rest - 1) {
            const int w = std::countr_zero(rest);
            if (std::popcount(host_.adj[w] & positive_) < residual_[w]) return false;
        }
        return true;
    }

    void pick(int v, Mask candidates, int need, BigCount& total) {
        if (need == 0) {
            positive_ &= ~bit(v);
            if (feasible()) total += count();
            positive_ |= bit(v);
            return;
        }
        for (Mask rest = candidates; std::popcount(rest) >= need; rest &= rest - 1) {
            const int u = std::countr_zero(rest);
            if (--residual_[u] == 0) positive_ &= ~bit(u);
            pick(v, rest & above(u), need - 1, total);
            if (residual_[u]++ == 0) positive_ |= bit(u);
        }
    }

    const BitGraph& host_;
    bool symmetric_;
    std::array<int, BitGraph::kMaxOrder> residual_{};
    Mask positive_ = 0;
    std::unordered_map<std::uint64_t, BigCount> memo_;
    std::uint64_t nodes_ = 0;
};

template <class Visit>
void matchings_rec(BitGraph& rest, Mask unmatched, Visit& visit) {
    if (!unmatched) {
        visit(static_cast<const BitGraph&>(rest));
        return;
    }
    const int v = std::countr_zero(unmatched);
    const Mask candidates = rest.adj[v] & unmatched;
    for (Mask m = candidates; m; m &= m - 1) {
        const int u = std::countr_zero(m);
        rest.remove_edge(v, u);
        matchings_rec(rest, unmatched & ~bit(v) & ~bit(u), visit);
        rest.add_edge(v, u);
    }
}

// Calls visit(g - M) for every perfect matching M of g.
template <class Visit>
void for_each_matching_complement(const BitGraph& g, Visit&& visit) {
    if (g.n % 2 != 0) return;
    BitGraph rest = g;
    matchings_rec(rest, g.all_vertices(), visit);
}

struct CanonicalKey {
    std::array<Mask, BitGraph::kMaxOrder> rows{};
    int level = 0;
    friend bool operator==(const CanonicalKey&, const CanonicalKey&) = default;
};

struct CanonicalKeyHash {
    std::size_t operator()(const CanonicalKey& k) const {
        std::uint64_t h = 0x9e3779b97f4a7c15ull ^ static_cast<std::uint64_t>(k.level);
        for (Mask r : k.rows) {
            h ^= r + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
            h *= 0xff51afd7ed558ccdull;
        }
        return static_cast<std::size_t>(h ^ (h >> 33));
    }
};

// Canonical-form memo shared by worker threads. Concurrent writers of the
// same key always store the same value.
class SharedMemo {
public:
    bool find(const CanonicalKey& key, BigCount& out) const {
        std::lock_guard lock(mutex_);
        auto it = map_.find(key);
        if (it == map_.end()) return false;
        out = it->second;
        return true;
    }
    void store(const CanonicalKey& key, const BigCount& value) {
        std::lock_guard lock(mutex_);
        map_[key] = value;
    }

private:
    mutable std::mutex mutex_;
    std::unordered_map<CanonicalKey, BigCount, CanonicalKeyHash> map_;
};

CanonicalKey canonical_key(const BitGraph& g, int level) {
    CanonicalKey key;
    key.rows = canonical_form(g).rows;
    key.level = level;
    return key;
}

struct Partial {
    BigCount value = 0;
    std::uint64_t nodes = 0;
};

// Runs work(worker, workers) on each worker and sums the partial results.
template <class Work>
Partial run_partitioned(int workers, Work work) {
    workers = std::max(1, workers);
    std::vector<Partial> parts(workers);
    if (workers == 1) {
        parts[0] = work(0, 1);
    } else {
        std::vector<std::thread> threads;
        std::vector<std::exception_ptr> errors(workers);
        for (int w = 0; w < workers; ++w)
            threads.emplace_back([&, w] {
                try {
                    parts[w] = work(w, workers);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        for (auto& t : threads) t.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    Partial total;
    for (auto& p : parts) {
        total.value += p.value;
        total.nodes += p.nodes;
    }
    return total;
}

CountResult finish(Partial p, CountMethod method, Clock::time_point start) {
    CountResult r;
    r.value = std::move(p.value);
    r.method = method;
    r.nodes_visited = p.nodes;
    r.wall_time = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start);
    return r;
}

// Ordered extraction of F_1..F_k; F_0 is what remains.
class FactorisationCounter {
public:
    FactorisationCounter(const DegreeSpec& spec, CountMethod method, SharedMemo& memo)
        : d0_(spec.degrees()[0]),
          minor_(spec.minor_degrees().begin(), spec.minor_degrees().end()),
          method_(method),
          memo_(memo) {}

    // Counts completions of `host` from factor index `idx` (0-based into d_1..d_k).
    BigCount count(const BitGraph& host, std::size_t idx) {
        if (idx == minor_.size()) {
            ++nodes_;
            for (int v = 0; v < host.n; ++v)
                if (host.degree(v) != d0_) return 0;
            return 1;
        }
        if (method_ == CountMethod::memoized && idx + 1 == minor_.size()) {
            ResidualCounter last(host, minor_[idx]);
            BigCount value = last.count();
            nodes_ += last.nodes();
            return value;
        }
        CanonicalKey key;
        if (method_ == CountMethod::memoized) {
            key = canonical_key(host, static_cast<int>(idx));
            BigCount cached;
            if (memo_.find(key, cached)) return cached;
        }
        BigCount total = 0;
        visit_factors(host, idx, [&](const BitGraph& factor) { total += count(minus(host, factor), idx + 1); });
        if (method_ == CountMethod::memoized) memo_.store(key, total);
        return total;
    }

    template <class Visit>
    void visit_factors(const BitGraph& host, std::size_t idx, Visit&& visit) {
        DegreeCompletion search(host, minor_[idx]);
        search.enumerate(visit);
        nodes_ += search.nodes();
    }

    std::size_t factor_count() const { return minor_.size(); }
    std::uint64_t nodes() const { return nodes_; }

private:
    int d0_;
    std::vector<int> minor_;
    CountMethod method_;
    SharedMemo& memo_;
    std::uint64_t nodes_ = 0;
};

class MatchingSequenceCounter {
public:
    MatchingSequenceCounter(CountMethod method, SharedMemo& memo) : method_(method), memo_(memo) {}

    BigCount count(const BitGraph& g, int remaining) {
        ++nodes_;
        if (remaining == 0) return 1;
        if (method_ == CountMethod::dfs) {
            std::uint64_t leaves = 0;
            dfs(g, remaining, leaves);
            return leaves;
        }
        if (remaining == 1) return count_perfect_matchings(g);
        const CanonicalKey key = canonical_key(g, remaining);
        BigCount cached;
        if (memo_.find(key, cached)) return cached;
        BigCount total = 0;
        for_each_matching_complement(g, [&](const BitGraph& rest) { total += count(rest, remaining - 1); });
        memo_.store(key, total);
        return total;
    }

    std::uint64_t nodes() const { return nodes_; }

private:
    void dfs(const BitGraph& g, int remaining, std::uint64_t& leaves) {
        for_each_matching_complement(g, [&](const BitGraph& rest) {
            ++nodes_;
            if (remaining == 1)
                ++leaves;
            else
                dfs(rest, remaining - 1, leaves);
        });
    }

    CountMethod method_;
    SharedMemo& memo_;
    std::uint64_t nodes_ = 0;
};

}  // namespace

BitGraph to_bitgraph(const LabelledGraph& g) {
    if (g.order() > BitGraph::kMaxOrder)
        throw invalid_input(fmt::format("graph order {} exceeds {}", g.order(), BitGraph::kMaxOrder));
    BitGraph b;
    b.n = g.order();
    for (const auto& e : g.edges()) b.add_edge(e.u, e.v);
    return b;
}

LabelledGraph to_labelled(const BitGraph& g) {
    LabelledGraph out(g.n);
    for (int u = 0; u < g.n; ++u)
        for (Mask rest = g.adj[u] & above(u); rest; rest &= rest - 1) out.add_edge(u, std::countr_zero(rest));
    return out;
}

std::string_view to_string(CountMethod m) { return m == CountMethod::dfs ? "dfs" : "memoized"; }

CountMethod parse_count_method(std::string_view text) {
    if (text == "dfs") return CountMethod::dfs;
    if (text == "memoized" || text == "memo") return CountMethod::memoized;
    throw invalid_input(fmt::format("unknown count method '{}' (expected dfs or memoized)", text));
}

std::uint64_t count_perfect_matchings(const BitGraph& g) {
    if (g.n % 2 != 0) return 0;
    thread_local std::vector<std::uint64_t> value;
    thread_local std::vector<std::uint32_t> stamp;
    thread_local std::uint32_t generation = 0;
    const std::size_t states = std::size_t{1} << g.n;
    if (stamp.size() < states) {
        stamp.assign(states, 0);
        value.assign(states, 0);
    }
    if (++generation == 0) {
        std::fill(stamp.begin(), stamp.end(), 0);
        generation = 1;
    }
    auto rec = [&](auto& self, Mask unmatched) -> std::uint64_t {
        if (!unmatched) return 1;
        if (stamp[unmatched] == generation) return value[unmatched];
        const int v = std::countr_zero(unmatched);
        std::uint64_t total = 0;
        for (Mask m = g.adj[v] & unmatched; m; m &= m - 1) {
            const int u = std::countr_zero(m);
            total += self(self, unmatched & ~bit(v) & ~bit(u));
        }
        stamp[unmatched] = generation;
        value[unmatched] = total;
        return total;
    };
    return rec(rec, g.all_vertices());
}

void for_each_regular_spanning_subgraph(const BitGraph& host, int d,
                                        const std::function<void(const BitGraph&)>& visit) {
    if ((host.n * d) % 2 != 0) return;
    DegreeCompletion search(host, d);
    auto leaf = [&](const BitGraph& f) { visit(f); };
    search.enumerate(leaf);
}

CountResult count_regular_spanning_subgraphs(const LabelledGraph& host, int d, ExactOptions options) {
    const auto start = Clock::now();
    const int n = host.order();
    if (n > kMemoMaxOrder)
        throw regime_refused(fmt::format("exact counting supports n <= {} (got {})", kMemoMaxOrder, n));
    if (options.method == CountMethod::dfs && n > kDfsMaxOrder)
        throw regime_refused(fmt::format("the dfs engine supports n <= {} (got {})", kDfsMaxOrder, n));
    int min_degree = n > 0 ? n : 0;
    for (int v = 0; v < n; ++v) min_degree = std::min(min_degree, host.degree(v));
    if (d < 0 || d > min_degree)
        throw invalid_input(fmt::format("degree {} outside [0, {}] (host minimum degree)", d, min_degree));

    const BitGraph g = to_bitgraph(host);
    Partial p;
    if ((n * d) % 2 != 0) return finish(std::move(p), options.method, start);
    if (options.method == CountMethod::dfs) {
        DegreeCompletion search(g, d);
        std::uint64_t leaves = 0;
        auto leaf = [&](const BitGraph&) { ++leaves; };
        search.enumerate(leaf);
        p.value = leaves;
        p.nodes = search.nodes();
    } else {
        ResidualCounter counter(g, d);
        p.value = counter.count();
        p.nodes = counter.nodes();
    }
    return finish(std::move(p), options.method, start);
}

CountResult count_factorisations(const DegreeSpec& spec, ExactOptions options) {
    const auto start = Clock::now();
    const int n = spec.n();
    if (n > kFactorisationMaxOrder)
        throw regime_refused(
            fmt::format("factorisation counting supports n <= {} (got {})", kFactorisationMaxOrder, n));
    const BitGraph kn = BitGraph::complete(n);
    SharedMemo memo;

    if (spec.k() <= 1 || options.workers <= 1) {
        FactorisationCounter counter(spec, options.method, memo);
        Partial p;
        p.value = counter.count(kn, 0);
        p.nodes = counter.nodes();
        return finish(std::move(p), options.method, start);
    }
    // Split the choices of F_1 round-robin across workers.
    auto work = [&](int worker, int workers) {
        FactorisationCounter counter(spec, options.method, memo);
        Partial p;
        std::uint64_t index = 0;
        counter.visit_factors(kn, 0, [&](const BitGraph& factor) {
            if (index++ % static_cast<std::uint64_t>(workers) == static_cast<std::uint64_t>(worker))
                p.value += counter.count(minus(kn, factor), 1);
        });
        p.nodes = counter.nodes();
        return p;
    };
    return finish(run_partitioned(options.workers, work), options.method, start);
}

CountResult count_matching_sequences(int n, int k, ExactOptions options) {
    const auto start = Clock::now();
    if (n < 2 || n % 2 != 0) throw invalid_input(fmt::format("F(n,k) needs an even n >= 2 (got {})", n));
    if (k < 1 || k > n - 1) throw invalid_input(fmt::format("F(n,k) needs 1 <= k <= n-1 (got k = {})", k));
    if (n > kMatchingMaxOrder)
        throw regime_refused(fmt::format("F(n,k) is supported for n <= {} (got {})", kMatchingMaxOrder, n));
    if (options.method == CountMethod::dfs && (n > kDfsMaxOrder || (n == kDfsMaxOrder && k > 3)))
        throw regime_refused(
            fmt::format("the dfs engine handles n <= 8, or n = 10 with k <= 3 (got n = {}, k = {})", n, k));

    const BitGraph kn = BitGraph::complete(n);
    SharedMemo memo;
    auto work = [&](int worker, int workers) {
        MatchingSequenceCounter counter(options.method, memo);
        Partial p;
        std::uint64_t index = 0;
        for_each_matching_complement(kn, [&](const BitGraph& rest) {
            if (index++ % static_cast<std::uint64_t>(workers) == static_cast<std::uint64_t>(worker))
                p.value += counter.count(rest, k - 1);
        });
        p.nodes = counter.nodes();
        return p;
    };
    return finish(run_partitioned(options.workers, work), options.method, start);
}

CountResult count_regular_graphs_exact(int n, int d, ExactOptions options) {
    if (n < 1) throw invalid_input(fmt::format("R_d(n) needs n >= 1 (got {})", n));
    if (d < 0 || d > n - 1) throw invalid_input(fmt::format("R_d(n) needs 0 <= d <= n-1 (got d = {})", d));
    if (n > kMemoMaxOrder)
        throw regime_refused(fmt::format("R_d(n) is supported for n <= {} (got {})", kMemoMaxOrder, n));
    return count_regular_spanning_subgraphs(LabelledGraph::complete(n), d, options);
}

}  // namespace kfactor
