#pragma once

#include <set>
#include <vector>

#include "scott/error.hpp"
#include "scott/graph_product.hpp"

namespace scott {

// Independent word-problem reference for graph products, used to certify
// normal_form. Equality is decided by exhaustive closure under the defining
// congruence restricted to non-increasing rewrites: adjacent commuting swaps
// and adjacent same-vertex merges (exponents mod the order). By the normal
// form theorem for graph products, two words are equal iff their fully
// merged forms are shuffle equivalent, so the minimal closure elements
// coincide exactly for equal words. No shared code with normal_form: this
// side never sorts, it only explores.
namespace wp_oracle {

using Word = std::vector<Syllable>;

inline Word strip_zeros(const GPGraph& g, const std::vector<std::pair<std::size_t, long long>>& in) {
    Word w;
    for (const auto& [v, e] : in) {
        long long p = g.order(v);
        long long k = ((e % p) + p) % p;
        if (k != 0) w.push_back({v, static_cast<unsigned>(k)});
    }
    return w;
}

// The set of minimal-length words reachable by swaps and merges.
inline std::set<std::vector<std::pair<std::size_t, unsigned>>> minimal_closure(
    const GPGraph& g, Word start, std::size_t cap = 2000000) {
    auto key = [](const Word& w) {
        std::vector<std::pair<std::size_t, unsigned>> k;
        k.reserve(w.size());
        for (const auto& s : w) k.emplace_back(s.vertex, s.exponent);
        return k;
    };
    std::set<std::vector<std::pair<std::size_t, unsigned>>> seen;
    std::vector<Word> frontier{start};
    seen.insert(key(start));
    std::size_t min_len = start.size();
    while (!frontier.empty()) {
        std::vector<Word> next;
        for (const auto& w : frontier) {
            for (std::size_t i = 0; i + 1 < w.size(); ++i) {
                if (w[i].vertex == w[i + 1].vertex) {
                    Word u = w;
                    unsigned p = g.order(u[i].vertex);
                    unsigned k = (u[i].exponent + u[i + 1].exponent) % p;
                    u.erase(u.begin() + static_cast<std::ptrdiff_t>(i + 1));
                    if (k == 0)
                        u.erase(u.begin() + static_cast<std::ptrdiff_t>(i));
                    else
                        u[i].exponent = k;
                    if (seen.insert(key(u)).second) {
                        min_len = std::min(min_len, u.size());
                        next.push_back(std::move(u));
                    }
                } else if (g.adjacent(w[i].vertex, w[i + 1].vertex)) {
                    Word u = w;
                    std::swap(u[i], u[i + 1]);
                    if (seen.insert(key(u)).second) next.push_back(std::move(u));
                }
                if (seen.size() > cap) throw budget_error("wp oracle closure cap exceeded");
            }
        }
        frontier = std::move(next);
    }
    std::set<std::vector<std::pair<std::size_t, unsigned>>> minimal;
    for (const auto& k : seen)
        if (k.size() == min_len) minimal.insert(k);
    return minimal;
}

// Canonical representative: the least minimal-length word in the closure.
inline std::vector<std::pair<std::size_t, unsigned>> canonical(
    const GPGraph& g, const std::vector<std::pair<std::size_t, long long>>& word) {
    auto minimal = minimal_closure(g, strip_zeros(g, word));
    if (minimal.empty()) return {};
    return *minimal.begin();
}

inline bool equal(const GPGraph& g, const std::vector<std::pair<std::size_t, long long>>& a,
                  const std::vector<std::pair<std::size_t, long long>>& b) {
    return canonical(g, a) == canonical(g, b);
}

} // namespace wp_oracle
} // namespace scott
