#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "scott/error.hpp"
#include "scott/structure.hpp"

namespace scott {

// One automorphism generator: its images and inverse images on the generator
// tuple. Agreement on the generators determines the map, so this is a full
// description.
struct AutomorphismSpec {
    std::string name;
    Tuple images;
    Tuple inverse_images;

    bool self_inverse() const { return images == inverse_images; }
};

// Checks that the candidate really extends to an automorphism: the images
// satisfy every relator, are pairwise distinct, and the inverse images invert
// the map on the generator tuple from both sides.
inline void validate_automorphism(const Structure& s, const AutomorphismSpec& a) {
    const std::size_t n = s.presentation().generator_count();
    if (a.images.size() != n || a.inverse_images.size() != n)
        throw domain_error("automorphism " + a.name + ": image tuple arity mismatch");
    if (!satisfies_psi(s, a.images))
        throw domain_error("automorphism " + a.name + ": images violate psi");
    if (!satisfies_psi(s, a.inverse_images))
        throw domain_error("automorphism " + a.name + ": inverse images violate psi");
    const Tuple& gens = s.generators();
    for (std::size_t i = 0; i < n; ++i) {
        if (s.apply_map(a.images[i], a.inverse_images) != gens[i])
            throw domain_error("automorphism " + a.name + ": inverse fails on generator " +
                               std::to_string(i + 1));
        if (s.apply_map(a.inverse_images[i], a.images) != gens[i])
            throw domain_error("automorphism " + a.name + ": not inverted by given inverse");
    }
}

// A finite automorphism generating set together with affine coefficients for
// the bound F(m1..mn) = c0 + sum c_i * m_i of condition (*). The affine form
// covers every instance used here.
struct AutPresentation {
    std::vector<AutomorphismSpec> gens;
    std::uint64_t c0 = 0;
    std::vector<std::uint64_t> coeffs;

    std::uint64_t bound(const std::vector<std::size_t>& lengths) const {
        if (lengths.size() != coeffs.size())
            throw domain_error("F: arity mismatch");
        std::uint64_t k = c0;
        for (std::size_t i = 0; i < lengths.size(); ++i) k += coeffs[i] * lengths[i];
        return k;
    }

    void validate(const Structure& s) const {
        if (gens.empty()) throw domain_error("automorphism generating set is empty");
        bool nonzero = c0 != 0;
        for (auto c : coeffs) nonzero = nonzero || c != 0;
        if (!nonzero) throw domain_error("bound coefficients are all zero");
        for (const auto& g : gens) validate_automorphism(s, g);
    }
};

struct WordLetter {
    std::size_t gen;
    int exponent; // +1 or -1
};

using AutomorphismWord = std::vector<WordLetter>;

inline std::string word_to_string(const AutPresentation& ap, const AutomorphismWord& w) {
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) s += " ";
        s += ap.gens[w[i].gen].name;
        if (w[i].exponent < 0) s += "^-1";
    }
    return s;
}

struct OrbitVerdict {
    bool in_orbit;
    AutomorphismWord witness;   // valid when in_orbit
    std::uint64_t bound_used;   // valid when !in_orbit
};

struct EnumeratedAutomorphism {
    Tuple images;
    AutomorphismWord witness;
    std::size_t depth;
};

struct XStarItem {
    Tuple tuple;
    std::vector<TermPtr> terms;
    std::uint64_t bound_used;
    std::uint64_t index; // position in the deterministic X_* stream
};

// Breadth-first search over automorphism words, deduplicated by image tuple:
// agreement on the generator tuple implies equality of the maps, so the word
// tree collapses to the orbit graph of the generator tuple. Layers are grown
// on demand and shared across queries; the discovery order is deterministic
// and equals the single-worker order by construction.
class OrbitEngine {
public:
    OrbitEngine(const Structure& s, AutPresentation ap, std::size_t state_cap = 5000000)
        : s_(s), ap_(std::move(ap)), state_cap_(state_cap) {
        ap_.validate(s_);
        for (std::size_t g = 0; g < ap_.gens.size(); ++g) {
            letters_.push_back({g, +1});
            if (!ap_.gens[g].self_inverse()) letters_.push_back({g, -1});
        }
        Node root;
        root.images = s_.generators();
        root.depth = 0;
        root.parent = npos;
        nodes_.push_back(root);
        index_.emplace(nodes_[0].images, 0);
        frontier_ = {0};
    }

    const AutPresentation& presentation() const { return ap_; }

    // All automorphisms reachable by words of length <= max_len, with their
    // shortest witness words, in discovery order.
    std::vector<EnumeratedAutomorphism> enumerate_automorphisms(std::size_t max_len) {
        ensure_depth(max_len);
        std::vector<EnumeratedAutomorphism> out;
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            if (nodes_[i].depth > max_len) continue;
            out.push_back({nodes_[i].images, witness(i), nodes_[i].depth});
        }
        return out;
    }

    // The decision procedure of the main theorem: k = F(lengths of the
    // components), then search words of length <= k. Positive verdicts carry
    // a witness that is re-checked against the query before returning. Under
    // quasi-Hopfianity and condition (*), NOT in orbit is equivalent to
    // membership in X_*.
    OrbitVerdict orbit_decide(const Tuple& tuple) {
        if (!satisfies_psi(s_, tuple))
            throw domain_error("orbit_decide: tuple does not satisfy psi");
        std::vector<std::size_t> lengths;
        lengths.reserve(tuple.size());
        for (const auto& e : tuple) lengths.push_back(s_.length(e));
        const std::uint64_t k = ap_.bound(lengths);
        // expand layer by layer, stopping as soon as the tuple shows up
        for (;;) {
            auto it = index_.find(tuple);
            if (it != index_.end() && nodes_[it->second].depth <= k) {
                AutomorphismWord w = witness(it->second);
                check_witness(w, tuple);
                return {true, std::move(w), k};
            }
            if (expanded_depth_ >= k || !expand_next_layer()) break;
        }
        return {false, {}, k};
    }

    // Evaluate a word on an arbitrary element (letters act right to left).
    ElementId apply_word(const AutomorphismWord& w, const ElementId& e) const {
        ElementId cur = e;
        for (std::size_t i = w.size(); i-- > 0;) {
            const auto& g = ap_.gens[w[i].gen];
            cur = s_.apply_map(cur, w[i].exponent > 0 ? g.images : g.inverse_images);
        }
        return cur;
    }

    Tuple apply_word(const AutomorphismWord& w, const Tuple& t) const {
        Tuple out;
        out.reserve(t.size());
        for (const auto& e : t) out.push_back(apply_word(w, e));
        return out;
    }

private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    struct Node {
        Tuple images;
        std::size_t depth;
        std::size_t parent;
        WordLetter letter{0, +1};
    };

    AutomorphismWord witness(std::size_t node) const {
        AutomorphismWord w;
        for (std::size_t i = node; nodes_[i].parent != npos; i = nodes_[i].parent)
            w.push_back(nodes_[i].letter);
        // letters were collected child-first; the child letter is outermost
        return w;
    }

    void check_witness(const AutomorphismWord& w, const Tuple& expected) const {
        if (apply_word(w, s_.generators()) != expected)
            throw domain_error("orbit engine: witness fails to reproduce the tuple");
    }

    // Extends each frontier tuple by every letter (applied on the left, so
    // new = letter(old), i.e. words grow outermost-first). Returns false once
    // the frontier is exhausted.
    bool expand_next_layer() {
        if (frontier_.empty()) return false;
        std::vector<std::size_t> next;
        for (std::size_t node : frontier_) {
            for (const auto& letter : letters_) {
                const auto& g = ap_.gens[letter.gen];
                const Tuple& src = nodes_[node].images;
                Tuple img;
                img.reserve(src.size());
                for (const auto& e : src)
                    img.push_back(
                        s_.apply_map(e, letter.exponent > 0 ? g.images : g.inverse_images));
                if (index_.contains(img)) continue;
                if (nodes_.size() >= state_cap_)
                    throw budget_error("orbit engine: state budget exceeded");
                Node n;
                n.images = std::move(img);
                n.depth = nodes_[node].depth + 1;
                n.parent = node;
                n.letter = letter;
                index_.emplace(n.images, nodes_.size());
                next.push_back(nodes_.size());
                nodes_.push_back(std::move(n));
            }
        }
        frontier_ = std::move(next);
        expanded_depth_ += 1;
        return !frontier_.empty();
    }

    void ensure_depth(std::size_t depth) {
        while (expanded_depth_ < depth && expand_next_layer()) {}
    }

    const Structure& s_;
    AutPresentation ap_;
    std::size_t state_cap_;
    std::vector<WordLetter> letters_;
    std::vector<Node> nodes_;
    std::unordered_map<Tuple, std::size_t, TupleHash> index_;
    std::vector<std::size_t> frontier_;
    std::size_t expanded_depth_ = 0;
};

// Deterministic, resumable enumeration of X_*: psi-satisfying tuples are
// produced by increasing maximum component length (component order follows
// the element stream), filtered through orbit_decide, and paired with fixed
// terms for their components.
struct XStarOptions {
    std::size_t max_element_length = 16;
    std::size_t element_cap = 200000;
    std::size_t term_size_cap = 7;
};

class XStarStream {
public:
    using Options = XStarOptions;

    XStarStream(const Structure& s, OrbitEngine& engine, Options opts = XStarOptions())
        : s_(s), engine_(engine), opts_(opts), arity_(s.presentation().generator_count()) {
        level_ = 0;
        load_level();
    }

    // Next X_* member, or nullopt once the length budget is exhausted.
    std::optional<XStarItem> next() {
        for (;;) {
            if (!advance()) return std::nullopt;
            Tuple t = current_tuple();
            // only tuples that use at least one element of the current level
            bool fresh = false;
            for (std::size_t i : odometer_)
                if (i >= prev_ball_size_) fresh = true;
            if (!fresh) continue;
            if (!satisfies_psi(s_, t)) continue;
            OrbitVerdict v = engine_.orbit_decide(t);
            if (v.in_orbit) continue;
            XStarItem item;
            item.tuple = std::move(t);
            item.terms = find_terms_for(s_, item.tuple, opts_.term_size_cap);
            item.bound_used = v.bound_used;
            item.index = emitted_++;
            return item;
        }
    }

    std::uint64_t cursor() const { return emitted_; }

private:
    bool advance() {
        for (;;) {
            if (!started_) {
                started_ = true;
                if (!ball_.empty() && !odometer_.empty()) return true;
            } else {
                std::size_t i = odometer_.size();
                while (i-- > 0) {
                    if (++odometer_[i] < ball_.size()) return true;
                    odometer_[i] = 0;
                    if (i == 0) break;
                }
                // level exhausted
            }
            if (level_ >= opts_.max_element_length) return false;
            ++level_;
            load_level();
            started_ = false;
        }
    }

    void load_level() {
        prev_ball_size_ = level_ == 0 ? 0 : s_.enumerate(level_ - 1, opts_.element_cap).size();
        ball_ = s_.enumerate(level_, opts_.element_cap);
        odometer_.assign(arity_, 0);
        started_ = false;
    }

    Tuple current_tuple() const {
        Tuple t;
        t.reserve(arity_);
        for (std::size_t i : odometer_) t.push_back(ball_[i]);
        return t;
    }

    const Structure& s_;
    OrbitEngine& engine_;
    Options opts_;
    std::size_t arity_;
    std::size_t level_ = 0;
    std::size_t prev_ball_size_ = 0;
    std::vector<ElementId> ball_;
    std::vector<std::size_t> odometer_;
    bool started_ = false;
    std::uint64_t emitted_ = 0;
};

// Conjugation automorphism by a group element g: a_i -> g a_i g^-1.
inline AutomorphismSpec conjugation_by(const Structure& s, const ElementId& g,
                                       const std::string& name) {
    const Tuple& gens = s.generators();
    ElementId ginv = s.apply("inv", std::vector<ElementId>{g});
    AutomorphismSpec spec;
    spec.name = name;
    for (const auto& a : gens) {
        spec.images.push_back(
            s.apply("mul", std::vector<ElementId>{g, s.apply("mul", std::vector<ElementId>{a, ginv})}));
        spec.inverse_images.push_back(
            s.apply("mul", std::vector<ElementId>{ginv, s.apply("mul", std::vector<ElementId>{a, g})}));
    }
    return spec;
}

// X = inner automorphisms for each generator plus user-supplied coset
// representatives of Inn in Aut, with F(m1..mn) = sum m_i + 1. The reps are
// trusted to be automorphisms (validated) and to cover the cosets (not
// certifiable here).
inline AutPresentation make_inner_plus_finite(const Structure& s,
                                              const std::vector<AutomorphismSpec>& outer_reps) {
    AutPresentation ap;
    const Tuple& gens = s.generators();
    for (std::size_t i = 0; i < gens.size(); ++i)
        ap.gens.push_back(conjugation_by(s, gens[i], "conj_g" + std::to_string(i + 1)));
    for (const auto& r : outer_reps) {
        validate_automorphism(s, r);
        ap.gens.push_back(r);
    }
    ap.c0 = 1;
    ap.coeffs.assign(gens.size(), 1);
    return ap;
}

} // namespace scott
