#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "scott/error.hpp"
#include "scott/orbit.hpp"
#include "scott/structure.hpp"

namespace scott {

// Graph product of primary cyclic groups G(Gamma, p): one generator of order
// p(v) per vertex, commutation exactly along edges. All orders 2 gives the
// right-angled Coxeter group of the graph; the 2-vertex edgeless case is the
// infinite dihedral group.
class GPGraph {
public:
    struct Vertex {
        std::string name;
        unsigned order;
    };

    GPGraph(std::vector<Vertex> vertices, const std::vector<std::pair<std::string, std::string>>& edges)
        : vertices_(std::move(vertices)), adj_(vertices_.size(), std::vector<bool>(vertices_.size(), false)) {
        for (std::size_t i = 0; i < vertices_.size(); ++i) {
            for (std::size_t j = i + 1; j < vertices_.size(); ++j)
                if (vertices_[i].name == vertices_[j].name)
                    throw domain_error("duplicate vertex name: " + vertices_[i].name);
            if (!is_prime_power(vertices_[i].order))
                throw domain_error("vertex order must be a prime power >= 2: " +
                                   vertices_[i].name);
        }
        for (const auto& [a, b] : edges) {
            std::size_t i = index(a), j = index(b);
            if (i == j) throw domain_error("loop edge at vertex " + a);
            adj_[i][j] = adj_[j][i] = true;
        }
    }

    std::size_t size() const { return vertices_.size(); }
    const std::vector<Vertex>& vertices() const { return vertices_; }
    const std::string& name(std::size_t v) const { return vertices_[v].name; }
    unsigned order(std::size_t v) const { return vertices_[v].order; }
    bool adjacent(std::size_t i, std::size_t j) const { return adj_[i][j]; }

    std::size_t index(const std::string& name) const {
        for (std::size_t i = 0; i < vertices_.size(); ++i)
            if (vertices_[i].name == name) return i;
        throw domain_error("unknown vertex: " + name);
    }

    static bool is_prime_power(unsigned n) {
        if (n < 2) return false;
        unsigned p = 2;
        while (p * p <= n && n % p != 0) ++p;
        if (p * p > n) p = n; // n prime
        while (n % p == 0) n /= p;
        return n == 1;
    }

private:
    std::vector<Vertex> vertices_;
    std::vector<std::vector<bool>> adj_;
};

// One syllable v^k with k in [1, order(v)-1].
struct Syllable {
    std::size_t vertex;
    unsigned exponent;

    bool operator==(const Syllable& o) const {
        return vertex == o.vertex && exponent == o.exponent;
    }
};

using NormalWord = std::vector<Syllable>;

// Canonical form: merge same-vertex syllables that are separated only by
// vertices adjacent to both (iterated to fixpoint, exponents mod the order),
// then take the lexicographically least shuffle-equivalent word by greedy
// extraction of the least available vertex. Two input words have equal
// normal forms iff they represent the same group element.
inline NormalWord normal_form(const GPGraph& g, const std::vector<std::pair<std::size_t, long long>>& word) {
    NormalWord w;
    for (const auto& [v, e] : word) {
        if (v >= g.size()) throw domain_error("unknown vertex index");
        long long p = g.order(v);
        long long k = ((e % p) + p) % p;
        if (k != 0) w.push_back({v, static_cast<unsigned>(k)});
    }
    // reduction: join syllables across commuting separators
    bool merged = true;
    while (merged) {
        merged = false;
        for (std::size_t i = 0; i < w.size() && !merged; ++i) {
            for (std::size_t j = i + 1; j < w.size(); ++j) {
                if (w[j].vertex == w[i].vertex) {
                    unsigned p = g.order(w[i].vertex);
                    unsigned k = (w[i].exponent + w[j].exponent) % p;
                    w.erase(w.begin() + static_cast<std::ptrdiff_t>(j));
                    if (k == 0)
                        w.erase(w.begin() + static_cast<std::ptrdiff_t>(i));
                    else
                        w[i].exponent = k;
                    merged = true;
                    break;
                }
                if (!g.adjacent(w[i].vertex, w[j].vertex)) break;
            }
        }
    }
    // canonical order: repeatedly pull the least-named available syllable
    NormalWord out;
    std::vector<Syllable> rest(w.begin(), w.end());
    while (!rest.empty()) {
        std::size_t best = rest.size();
        for (std::size_t pos = 0; pos < rest.size(); ++pos) {
            bool available = true;
            for (std::size_t k = 0; k < pos && available; ++k)
                if (!g.adjacent(rest[k].vertex, rest[pos].vertex)) available = false;
            if (!available) continue;
            if (best == rest.size() || g.name(rest[pos].vertex) < g.name(rest[best].vertex))
                best = pos;
        }
        out.push_back(rest[best]);
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(best));
    }
    return out;
}

// Geodesic word length over the vertex generators and their inverses:
// each syllable v^k is spelled optimally as min(k, p(v)-k) letters.
inline std::size_t geodesic_length(const GPGraph& g, const NormalWord& w) {
    std::size_t total = 0;
    for (const auto& s : w)
        total += std::min<std::size_t>(s.exponent, g.order(s.vertex) - s.exponent);
    return total;
}

// --- the structure handle ---------------------------------------------------

class GPStructure : public Structure {
public:
    explicit GPStructure(GPGraph graph)
        : graph_(std::move(graph)), presentation_(make_presentation(graph_)) {
        for (std::size_t v = 0; v < graph_.size(); ++v)
            generators_.push_back(encode({{v, 1}}));
    }

    const GPGraph& graph() const { return graph_; }
    const Signature& signature() const override { return group_signature(); }
    const Presentation& presentation() const override { return presentation_; }
    const Tuple& generators() const override { return generators_; }

    ElementId constant(const std::string& name) const override {
        if (name != "e") throw domain_error("unknown constant: " + name);
        return encode({});
    }

    ElementId apply(const std::string& fn, std::span<const ElementId> args) const override {
        if (fn == "mul") {
            NormalWord a = decode(args[0]), b = decode(args[1]);
            std::vector<std::pair<std::size_t, long long>> cat;
            for (const auto& s : a) cat.emplace_back(s.vertex, s.exponent);
            for (const auto& s : b) cat.emplace_back(s.vertex, s.exponent);
            return encode(normal_form(graph_, cat));
        }
        if (fn == "inv") {
            NormalWord a = decode(args[0]);
            std::vector<std::pair<std::size_t, long long>> rev;
            for (auto it = a.rbegin(); it != a.rend(); ++it)
                rev.emplace_back(it->vertex, -static_cast<long long>(it->exponent));
            return encode(normal_form(graph_, rev));
        }
        throw domain_error("unknown function: " + fn);
    }

    std::size_t length(const ElementId& e) const override {
        return geodesic_length(graph_, decode(e));
    }

    TermPtr express(const ElementId& e) const override {
        NormalWord w = decode(e);
        std::vector<TermPtr> letters;
        for (const auto& s : w) {
            unsigned p = graph_.order(s.vertex);
            TermPtr x = Term::variable(s.vertex + 1);
            if (s.exponent <= p - s.exponent)
                for (unsigned k = 0; k < s.exponent; ++k) letters.push_back(x);
            else
                for (unsigned k = 0; k < p - s.exponent; ++k)
                    letters.push_back(Term::apply("inv", {x}));
        }
        if (letters.empty()) return Term::constant("e");
        TermPtr t = letters.back();
        for (std::size_t i = letters.size() - 1; i-- > 0;)
            t = Term::apply("mul", {letters[i], t});
        return t;
    }

    std::vector<ElementId> enumerate(std::size_t max_length, std::size_t cap) const override {
        std::set<ElementId> seen;
        std::vector<ElementId> frontier{encode({})};
        seen.insert(frontier[0]);
        while (!frontier.empty()) {
            std::vector<ElementId> next;
            for (const auto& e : frontier) {
                for (std::size_t v = 0; v < graph_.size(); ++v) {
                    for (int sign : {+1, -1}) {
                        if (sign < 0 && graph_.order(v) == 2) continue;
                        NormalWord w = decode(e);
                        std::vector<std::pair<std::size_t, long long>> cat;
                        for (const auto& s : w) cat.emplace_back(s.vertex, s.exponent);
                        cat.emplace_back(v, sign);
                        ElementId id = encode(normal_form(graph_, cat));
                        if (length(id) > max_length || seen.count(id)) continue;
                        if (seen.size() >= cap) throw budget_error("graph product ball cap exceeded");
                        seen.insert(id);
                        next.push_back(id);
                    }
                }
            }
            frontier = std::move(next);
        }
        std::vector<ElementId> out(seen.begin(), seen.end());
        std::sort(out.begin(), out.end(), [this](const ElementId& a, const ElementId& b) {
            std::size_t la = length(a), lb = length(b);
            return la != lb ? la < lb : a.bytes < b.bytes;
        });
        return out;
    }

    ElementId apply_map(const ElementId& e, std::span<const ElementId> images) const override {
        NormalWord w = decode(e);
        ElementId acc = encode({});
        for (const auto& s : w) {
            ElementId img = images[s.vertex];
            ElementId pw = encode({});
            for (unsigned k = 0; k < s.exponent; ++k)
                pw = apply("mul", std::vector<ElementId>{pw, img});
            acc = apply("mul", std::vector<ElementId>{acc, pw});
        }
        return acc;
    }

    // Word syntax: whitespace-separated "v", "v^k" or "v^-1"; "e" or the
    // empty string is the identity.
    ElementId parse_element(const std::string& text) const override {
        std::istringstream in(text);
        std::vector<std::pair<std::size_t, long long>> word;
        std::string tok;
        while (in >> tok) {
            if (tok == "e") continue;
            long long exp = 1;
            std::string name = tok;
            auto caret = tok.find('^');
            if (caret != std::string::npos) {
                name = tok.substr(0, caret);
                try {
                    exp = std::stoll(tok.substr(caret + 1));
                } catch (...) {
                    throw domain_error("bad exponent in token: " + tok);
                }
            }
            word.emplace_back(graph_.index(name), exp);
        }
        return encode(normal_form(graph_, word));
    }

    std::string display(const ElementId& e) const override {
        if (e.bytes.empty()) return "e";
        return e.bytes;
    }

    std::string config_json() const override {
        nlohmann::json j;
        j["type"] = "graph_product";
        nlohmann::json vs = nlohmann::json::array();
        for (const auto& v : graph_.vertices())
            vs.push_back({{"name", v.name}, {"order", v.order}});
        j["vertices"] = vs;
        nlohmann::json es = nlohmann::json::array();
        for (std::size_t i = 0; i < graph_.size(); ++i)
            for (std::size_t j2 = i + 1; j2 < graph_.size(); ++j2)
                if (graph_.adjacent(i, j2))
                    es.push_back(nlohmann::json::array({graph_.name(i), graph_.name(j2)}));
        j["edges"] = es;
        return j.dump();
    }

    ElementId encode(const NormalWord& w) const {
        std::string s;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (i) s += " ";
            s += graph_.name(w[i].vertex);
            if (w[i].exponent != 1) s += "^" + std::to_string(w[i].exponent);
        }
        return {s};
    }

    NormalWord decode(const ElementId& e) const {
        NormalWord w;
        std::istringstream in(e.bytes);
        std::string tok;
        while (in >> tok) {
            unsigned exp = 1;
            std::string name = tok;
            auto caret = tok.find('^');
            if (caret != std::string::npos) {
                name = tok.substr(0, caret);
                exp = static_cast<unsigned>(std::stoul(tok.substr(caret + 1)));
            }
            w.push_back({graph_.index(name), exp});
        }
        return w;
    }

private:
    static Presentation make_presentation(const GPGraph& g) {
        std::vector<AtomicFormula> relators;
        for (std::size_t v = 0; v < g.size(); ++v) {
            TermPtr x = Term::variable(v + 1);
            TermPtr pw = x;
            for (unsigned k = 1; k < g.order(v); ++k) pw = Term::apply("mul", {x, pw});
            relators.push_back(AtomicFormula::equality(pw, Term::constant("e")));
        }
        for (std::size_t i = 0; i < g.size(); ++i)
            for (std::size_t j = i + 1; j < g.size(); ++j)
                if (g.adjacent(i, j)) {
                    TermPtr xi = Term::variable(i + 1), xj = Term::variable(j + 1);
                    relators.push_back(AtomicFormula::equality(Term::apply("mul", {xi, xj}),
                                                               Term::apply("mul", {xj, xi})));
                }
        return Presentation(group_signature(), g.size(), std::move(relators));
    }

    GPGraph graph_;
    Presentation presentation_;
    Tuple generators_;
};

// --- automorphisms ----------------------------------------------------------

// The partial conjugations pi_(s,C): conjugate by s exactly the vertices in
// C, where C ranges over the nonempty unions of connected components of
// Gamma minus the closed star of s. For order-2 vertices this is the map
// t -> sts of the right-angled case.
inline std::vector<AutomorphismSpec> partial_conjugations(const GPStructure& s) {
    const GPGraph& g = s.graph();
    std::vector<AutomorphismSpec> out;
    for (std::size_t v = 0; v < g.size(); ++v) {
        // connected components of Gamma \ N*(v)
        std::vector<bool> removed(g.size(), false);
        removed[v] = true;
        for (std::size_t u = 0; u < g.size(); ++u)
            if (g.adjacent(v, u)) removed[u] = true;
        std::vector<std::vector<std::size_t>> comps;
        std::vector<bool> visited(g.size(), false);
        for (std::size_t u = 0; u < g.size(); ++u) {
            if (removed[u] || visited[u]) continue;
            std::vector<std::size_t> comp, stack{u};
            visited[u] = true;
            while (!stack.empty()) {
                std::size_t x = stack.back();
                stack.pop_back();
                comp.push_back(x);
                for (std::size_t y = 0; y < g.size(); ++y)
                    if (!removed[y] && !visited[y] && g.adjacent(x, y)) {
                        visited[y] = true;
                        stack.push_back(y);
                    }
            }
            std::sort(comp.begin(), comp.end());
            comps.push_back(std::move(comp));
        }
        const std::size_t m = comps.size();
        for (std::size_t mask = 1; mask < (std::size_t{1} << m); ++mask) {
            std::vector<bool> in_c(g.size(), false);
            std::vector<std::size_t> members;
            for (std::size_t c = 0; c < m; ++c)
                if (mask & (std::size_t{1} << c))
                    for (std::size_t u : comps[c]) in_c[u] = true;
            for (std::size_t u = 0; u < g.size(); ++u)
                if (in_c[u]) members.push_back(u);
            AutomorphismSpec spec;
            spec.name = "pc_" + g.name(v) + "_";
            for (std::size_t u : members) spec.name += g.name(u);
            ElementId sv = s.generators()[v];
            ElementId sv_inv = s.apply("inv", std::vector<ElementId>{sv});
            for (std::size_t u = 0; u < g.size(); ++u) {
                ElementId gu = s.generators()[u];
                if (in_c[u]) {
                    spec.images.push_back(s.apply(
                        "mul", std::vector<ElementId>{sv, s.apply("mul", std::vector<ElementId>{gu, sv_inv})}));
                    spec.inverse_images.push_back(s.apply(
                        "mul", std::vector<ElementId>{sv_inv, s.apply("mul", std::vector<ElementId>{gu, sv})}));
                } else {
                    spec.images.push_back(gu);
                    spec.inverse_images.push_back(gu);
                }
            }
            out.push_back(std::move(spec));
        }
    }
    return out;
}

// The finite group F(Gamma), by exhaustive search: assignments sending each
// vertex generator into the union of the maximal complete subgroups, kept
// when they satisfy all defining relators and have a two-sided inverse among
// such assignments. Exponential in the graph size; fine at desk scale.
inline std::vector<AutomorphismSpec> f_gamma(const GPStructure& s,
                                             std::size_t assignment_cap = 2000000) {
    const GPGraph& g = s.graph();
    const std::size_t n = g.size();

    // maximal cliques by subset enumeration
    std::vector<std::vector<std::size_t>> cliques;
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
        std::vector<std::size_t> verts;
        for (std::size_t v = 0; v < n; ++v)
            if (mask & (std::size_t{1} << v)) verts.push_back(v);
        bool clique = true;
        for (std::size_t i = 0; i < verts.size() && clique; ++i)
            for (std::size_t j = i + 1; j < verts.size() && clique; ++j)
                if (!g.adjacent(verts[i], verts[j])) clique = false;
        if (!clique) continue;
        bool maximal = true;
        for (std::size_t v = 0; v < n && maximal; ++v) {
            if (mask & (std::size_t{1} << v)) continue;
            bool extends = true;
            for (std::size_t u : verts)
                if (!g.adjacent(u, v)) { extends = false; break; }
            if (extends) maximal = false;
        }
        if (maximal) cliques.push_back(verts);
    }

    // non-identity elements of the clique subgroups, deduplicated in order
    std::vector<ElementId> candidates;
    std::set<ElementId> seen;
    for (const auto& clique : cliques) {
        std::vector<unsigned> exp(clique.size(), 0);
        for (;;) {
            std::size_t i = clique.size();
            while (i-- > 0) {
                if (++exp[i] < g.order(clique[i])) break;
                exp[i] = 0;
                if (i == 0) { i = static_cast<std::size_t>(-1); break; }
            }
            if (i == static_cast<std::size_t>(-1)) break;
            std::vector<std::pair<std::size_t, long long>> word;
            for (std::size_t k = 0; k < clique.size(); ++k)
                if (exp[k] != 0) word.emplace_back(clique[k], exp[k]);
            ElementId id = s.encode(normal_form(g, word));
            if (seen.insert(id).second) candidates.push_back(id);
        }
    }

    double count = 1;
    for (std::size_t v = 0; v < n; ++v) count *= static_cast<double>(candidates.size());
    if (count > static_cast<double>(assignment_cap))
        throw budget_error("f_gamma: assignment space too large for brute force");

    // all relator-satisfying assignments
    auto substitute = [&](const Tuple& images, const ElementId& e) {
        return s.apply_map(e, images);
    };
    std::vector<Tuple> valid;
    std::vector<std::size_t> pick(n, 0);
    if (!candidates.empty()) {
        for (;;) {
            Tuple images;
            for (std::size_t v = 0; v < n; ++v) images.push_back(candidates[pick[v]]);
            bool ok = true;
            for (const auto& r : s.presentation().relators()) {
                if (!holds_atom(s, r, images)) { ok = false; break; }
            }
            if (ok) valid.push_back(images);
            std::size_t i = n;
            while (i-- > 0) {
                if (++pick[i] < candidates.size()) break;
                pick[i] = 0;
                if (i == 0) { i = static_cast<std::size_t>(-1); break; }
            }
            if (i == static_cast<std::size_t>(-1)) break;
        }
    }

    // keep the invertible ones, certified by an explicit two-sided inverse
    std::vector<AutomorphismSpec> out;
    for (const auto& f : valid) {
        for (const auto& h : valid) {
            bool inverse = true;
            for (std::size_t v = 0; v < n && inverse; ++v) {
                if (substitute(h, f[v]) != s.generators()[v]) inverse = false;
                else if (substitute(f, h[v]) != s.generators()[v]) inverse = false;
            }
            if (inverse) {
                AutomorphismSpec spec;
                spec.name = "fg" + std::to_string(out.size());
                spec.images = f;
                spec.inverse_images = h;
                out.push_back(std::move(spec));
                break;
            }
        }
    }
    return out;
}

// X and F of the graph-product corollary: the partial conjugations together
// with the finite group F(Gamma), and F(m1..mn) = (sum m_i) + 1.
inline AutPresentation gp_aut_presentation(const GPStructure& s) {
    AutPresentation ap;
    for (auto& pc : partial_conjugations(s)) ap.gens.push_back(std::move(pc));
    for (auto& fg : f_gamma(s)) ap.gens.push_back(std::move(fg));
    ap.c0 = 1;
    ap.coeffs.assign(s.graph().size(), 1);
    return ap;
}

} // namespace scott
