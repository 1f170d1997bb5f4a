#include "kfactor/canonical.hpp"

#include <algorithm>
#include <numeric>

#include "kfactor/errors.hpp"

namespace kfactor {

namespace {

using Mask = BitGraph::Mask;
using Cells = std::vector<Mask>;
using Rows = std::array<Mask, BitGraph::kMaxOrder>;

class Canonicaliser {
public:
    explicit Canonicaliser(const BitGraph& g) : g_(g) {}

    CanonicalForm run() {
        Cells cells{g_.all_vertices()};
        std::vector<int> prefix;
        if (g_.n > 0) search(cells, prefix);
        CanonicalForm out;
        out.rows = best_rows_;
        out.labelling = best_lab_;
        out.leaves = leaves_;
        return out;
    }

private:
    // Splits cells until every vertex of a cell has the same number of
    // neighbours in every cell. New pieces are ordered by that count.
    void refine(Cells& cells) const {
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t s = 0; s < cells.size() && !changed; ++s) {
                const Mask splitter = cells[s];
                for (std::size_t x = 0; x < cells.size(); ++x) {
                    const Mask cell = cells[x];
                    if (std::popcount(cell) == 1) continue;
                    std::array<Mask, BitGraph::kMaxOrder + 1> by_count{};
                    int distinct = 0;
                    for (Mask rest = cell; rest; rest &= rest - 1) {
                        const int v = std::countr_zero(rest);
                        const int c = std::popcount(g_.adj[v] & splitter);
                        if (!by_count[c]) ++distinct;
                        by_count[c] |= Mask{1} << v;
                    }
                    if (distinct == 1) continue;
                    Cells pieces;
                    for (Mask m : by_count)
                        if (m) pieces.push_back(m);
                    cells.erase(cells.begin() + static_cast<std::ptrdiff_t>(x));
                    cells.insert(cells.begin() + static_cast<std::ptrdiff_t>(x), pieces.begin(), pieces.end());
                    changed = true;
                    break;
                }
            }
        }
    }

    void leaf(const Cells& cells) {
        ++leaves_;
        std::vector<int> lab(g_.n);
        for (std::size_t i = 0; i < cells.size(); ++i) lab[std::countr_zero(cells[i])] = static_cast<int>(i);
        Rows rows{};
        for (int u = 0; u < g_.n; ++u)
            for (Mask rest = g_.adj[u]; rest; rest &= rest - 1)
                rows[lab[u]] |= Mask{1} << lab[std::countr_zero(rest)];

        if (!have_leaf_) {
            have_leaf_ = true;
            first_rows_ = best_rows_ = rows;
            first_lab_ = best_lab_ = lab;
            return;
        }
        if (rows == first_rows_) {
            record_automorphism(lab, first_lab_);
        } else if (rows == best_rows_) {
            record_automorphism(lab, best_lab_);
        } else if (std::lexicographical_compare(best_rows_.begin(), best_rows_.begin() + g_.n, rows.begin(),
                                                rows.begin() + g_.n)) {
            best_rows_ = rows;
            best_lab_ = lab;
        }
    }

    // Both labellings produce the same relabelled graph, so v -> other^-1(lab(v))
    // is an automorphism.
    void record_automorphism(const std::vector<int>& lab, const std::vector<int>& other) {
        std::vector<int> inverse(g_.n);
        for (int v = 0; v < g_.n; ++v) inverse[other[v]] = v;
        std::vector<int> gamma(g_.n);
        bool trivial = true;
        for (int v = 0; v < g_.n; ++v) {
            gamma[v] = inverse[lab[v]];
            trivial = trivial && gamma[v] == v;
        }
        if (!trivial) automorphisms_.push_back(std::move(gamma));
    }

    // Orbit representatives under the automorphisms found so far that fix
    // every vertex of the prefix.
    std::vector<int> orbits(const std::vector<int>& prefix) const {
        std::vector<int> parent(g_.n);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (const auto& gamma : automorphisms_) {
            bool fixes = std::all_of(prefix.begin(), prefix.end(), [&](int v) { return gamma[v] == v; });
            if (!fixes) continue;
            for (int v = 0; v < g_.n; ++v) {
                const int a = find(v), b = find(gamma[v]);
                if (a != b) parent[std::max(a, b)] = std::min(a, b);
            }
        }
        for (int v = 0; v < g_.n; ++v) parent[v] = find(v);
        return parent;
    }

    void search(Cells cells, std::vector<int>& prefix) {
        refine(cells);
        std::size_t target = cells.size();
        for (std::size_t i = 0; i < cells.size(); ++i)
            if (std::popcount(cells[i]) > 1) {
                target = i;
                break;
            }
        if (target == cells.size()) {
            leaf(cells);
            return;
        }
        const Mask candidates = cells[target];
        std::vector<int> explored;
        for (Mask rest = candidates; rest; rest &= rest - 1) {
            const int v = std::countr_zero(rest);
            if (!explored.empty()) {
                const auto orbit = orbits(prefix);
                const bool equivalent =
                    std::any_of(explored.begin(), explored.end(), [&](int w) { return orbit[w] == orbit[v]; });
                if (equivalent) continue;
            }
            explored.push_back(v);
            Cells child = cells;
            const Mask single = Mask{1} << v;
            child[target] = candidates & ~single;
            child.insert(child.begin() + static_cast<std::ptrdiff_t>(target), single);
            prefix.push_back(v);
            search(std::move(child), prefix);
            prefix.pop_back();
        }
    }

    const BitGraph& g_;
    bool have_leaf_ = false;
    Rows first_rows_{}, best_rows_{};
    std::vector<int> first_lab_, best_lab_;
    std::vector<std::vector<int>> automorphisms_;
    std::size_t leaves_ = 0;
};

}  // namespace

CanonicalForm canonical_form(const BitGraph& g) {
    if (g.n < 0 || g.n > BitGraph::kMaxOrder) throw invalid_input("canonical_form: order out of range");
    return Canonicaliser(g).run();
}

}  // namespace kfactor
