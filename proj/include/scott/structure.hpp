#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "scott/error.hpp"
#include "scott/formula.hpp"
#include "scott/presentation.hpp"
#include "scott/signature.hpp"
#include "scott/term.hpp"

namespace scott {

// Canonical element encoding. Two ids compare equal iff the underlying
// structure elements are equal, so equality and hashing are byte operations.
struct ElementId {
    std::string bytes;

    bool operator==(const ElementId& o) const { return bytes == o.bytes; }
    bool operator!=(const ElementId& o) const { return bytes != o.bytes; }
    bool operator<(const ElementId& o) const { return bytes < o.bytes; }
};

struct ElementIdHash {
    std::size_t operator()(const ElementId& e) const {
        return std::hash<std::string>()(e.bytes);
    }
};

using Tuple = std::vector<ElementId>;

struct TupleHash {
    std::size_t operator()(const Tuple& t) const {
        std::size_t h = t.size();
        for (const auto& e : t)
            h ^= std::hash<std::string>()(e.bytes) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

// A computable structure: canonical element encodings, total evaluators for
// every symbol, a distinguished generator tuple, a length function, and
// deterministic bounded enumeration. Implementations are immutable values
// (internal memo tables are allowed but must not affect observable results).
class Structure {
public:
    virtual ~Structure() = default;

    virtual const Signature& signature() const = 0;
    virtual const Presentation& presentation() const = 0;
    virtual const Tuple& generators() const = 0;

    virtual ElementId constant(const std::string& name) const = 0;
    virtual ElementId apply(const std::string& fn, std::span<const ElementId> args) const = 0;
    virtual bool relation(const std::string& rel, std::span<const ElementId> args) const {
        (void)rel;
        (void)args;
        throw domain_error("structure has no relations");
    }

    // Geodesic word length over the generators for group-like structures,
    // stage for the free plane. Fixed per structure, declared in its config.
    virtual std::size_t length(const ElementId& e) const = 0;

    // A term over x1..xn that evaluates to e under the generator tuple.
    // Canonical per element; used to transport automorphisms.
    virtual TermPtr express(const ElementId& e) const = 0;

    // Exactly the elements of length <= max_length, each once, sorted by
    // (length, canonical encoding). Throws budget_error past `cap` elements.
    virtual std::vector<ElementId> enumerate(std::size_t max_length,
                                             std::size_t cap = 1000000) const = 0;

    // Image of e under the homomorphic extension of generators -> images.
    // Default route goes through express(); structures override with direct
    // substitution where that is cheaper.
    virtual ElementId apply_map(const ElementId& e, std::span<const ElementId> images) const;

    virtual ElementId parse_element(const std::string& text) const = 0;
    virtual std::string display(const ElementId& e) const { return e.bytes; }

    // How psi was chosen for this structure; recorded in emitted documents.
    virtual std::string psi_convention() const {
        return "presentation-relators-plus-distinctness";
    }

    // Structure config document and its hash; embedded in emitted artifacts.
    virtual std::string config_json() const = 0;
    std::string config_hash() const;

    // Saturation probe: the full carrier if the structure turns out to be
    // finite within the cap, nullopt otherwise (including when the ball
    // outgrows the element cap first).
    std::optional<std::vector<ElementId>> finite_elements(std::size_t max_length_cap = 64,
                                                          std::size_t cap = 100000) const {
        try {
            std::vector<ElementId> prev = enumerate(0, cap);
            for (std::size_t len = 1; len <= max_length_cap; ++len) {
                std::vector<ElementId> cur = enumerate(len, cap);
                if (cur.size() == prev.size()) return cur;
                prev = std::move(cur);
            }
        } catch (const budget_error&) {
            return std::nullopt;
        }
        return std::nullopt;
    }
};

// FNV-1a, fixed output across platforms and runs.
inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return s;
}

inline std::string Structure::config_hash() const { return hex64(fnv1a64(config_json())); }

// Homomorphic term evaluation under an assignment to x1..xn.
inline ElementId eval_term(const Structure& s, const Term& t, std::span<const ElementId> assignment) {
    switch (t.kind()) {
    case Term::Kind::Variable: {
        if (t.index() > assignment.size())
            throw domain_error("term variable x" + std::to_string(t.index()) +
                               " outside assignment of arity " + std::to_string(assignment.size()));
        return assignment[t.index() - 1];
    }
    case Term::Kind::Constant: return s.constant(t.name());
    case Term::Kind::Apply: {
        std::vector<ElementId> args;
        args.reserve(t.children().size());
        for (const auto& c : t.children()) args.push_back(eval_term(s, *c, assignment));
        return s.apply(t.name(), args);
    }
    }
    throw domain_error("bad term");
}

inline ElementId eval_term(const Structure& s, const TermPtr& t, const Tuple& assignment) {
    return eval_term(s, *t, std::span<const ElementId>(assignment));
}

inline ElementId Structure::apply_map(const ElementId& e, std::span<const ElementId> images) const {
    return eval_term(*this, *express(e), images);
}

inline bool holds_atom(const Structure& s, const AtomicFormula& a,
                       std::span<const ElementId> assignment) {
    if (a.kind() == AtomicFormula::Kind::Equality)
        return eval_term(s, *a.lhs(), assignment) == eval_term(s, *a.rhs(), assignment);
    std::vector<ElementId> args;
    args.reserve(a.args().size());
    for (const auto& t : a.args()) args.push_back(eval_term(s, *t, assignment));
    return s.relation(a.name(), args);
}

// Truth of a quantifier-free formula under the structure's evaluators.
inline bool holds(const Structure& s, const Formula& f, std::span<const ElementId> assignment) {
    switch (f.kind()) {
    case Formula::Kind::True: return true;
    case Formula::Kind::Atom: return holds_atom(s, f.atom(), assignment);
    case Formula::Kind::Not: return !holds(s, *f.children()[0], assignment);
    case Formula::Kind::And: {
        for (const auto& c : f.children())
            if (!holds(s, *c, assignment)) return false;
        return true;
    }
    case Formula::Kind::Or: {
        for (const auto& c : f.children())
            if (holds(s, *c, assignment)) return true;
        return false;
    }
    default: throw domain_error("holds() requires a quantifier-free formula");
    }
}

inline bool holds(const Structure& s, const FormulaPtr& f, const Tuple& assignment) {
    return holds(s, *f, std::span<const ElementId>(assignment));
}

inline bool satisfies_psi(const Structure& s, const Tuple& tuple) {
    return holds(s, build_psi(s.presentation()), tuple);
}

// Smallest terms (in the deterministic enumeration order) evaluating to the
// target elements. Sizes up to `exhaustive_cap` are searched exhaustively;
// past that the structure's canonical expression is used, which keeps the
// guarantee lg_S(b_i) <= lg(t_i) via the triangle property of the length.
inline std::vector<TermPtr> find_terms_for(const Structure& s, const Tuple& targets,
                                           std::size_t exhaustive_cap = 7,
                                           std::size_t eval_budget = 2000000) {
    const std::size_t n = s.presentation().generator_count();
    TermEnumerator en(s.signature(), n);
    std::vector<TermPtr> out(targets.size());
    std::vector<bool> done(targets.size(), false);
    std::size_t remaining = targets.size();
    std::size_t evals = 0;
    for (std::size_t size = 1; size <= exhaustive_cap && remaining > 0; ++size) {
        for (const auto& t : en.of_size(size)) {
            if (++evals > eval_budget) throw budget_error("find_terms_for: eval budget exceeded");
            ElementId v = eval_term(s, t, s.generators());
            for (std::size_t i = 0; i < targets.size(); ++i) {
                if (!done[i] && v == targets[i]) {
                    out[i] = t;
                    done[i] = true;
                    --remaining;
                }
            }
            if (remaining == 0) break;
        }
    }
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (!done[i]) {
            out[i] = s.express(targets[i]);
            if (eval_term(s, out[i], s.generators()) != targets[i])
                throw domain_error("express() produced a non-evaluating term");
        }
    }
    return out;
}

} // namespace scott
