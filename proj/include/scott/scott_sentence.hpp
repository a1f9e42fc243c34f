#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "scott/error.hpp"
#include "scott/formula.hpp"
#include "scott/orbit.hpp"
#include "scott/structure.hpp"

namespace scott {

// One conjunct of the Pi_1 orbit formula: for an X_* member b-bar with fixed
// terms t_i, the formula
//     forall y-bar  not( /\_i phi_i(y-bar)  /\  /\_i x_i = t_i(y-bar) )
// over free variables x1..xn, bound variables indexed n+1..2n. The relators
// phi_i are those of the emitting structure's presentation; the tuple is kept
// as provenance (display strings survive serialization, element ids only on
// freshly built prefixes).
struct ThetaConjunct {
    std::vector<std::string> tuple_display;
    Tuple tuple; // empty when loaded from a document
    std::vector<TermPtr> terms;
    FormulaPtr formula;
};

struct ThetaPrefix {
    FormulaPtr psi;
    std::vector<AtomicFormula> source_relators;
    std::size_t arity = 0;
    std::vector<ThetaConjunct> conjuncts;
    std::uint64_t cursor = 0; // conjuncts consumed from the X_* stream
    std::string structure_config_hash;
    std::string producer;
    std::string length_convention;
    std::string psi_convention;
};

inline FormulaPtr make_theta_conjunct_formula(const std::vector<AtomicFormula>& relators,
                                              std::size_t n,
                                              const std::vector<TermPtr>& terms) {
    std::vector<FormulaPtr> body;
    for (const auto& r : relators) body.push_back(Formula::atom(r.shifted(n)));
    for (std::size_t i = 0; i < n; ++i)
        body.push_back(Formula::atom(
            AtomicFormula::equality(Term::variable(i + 1), shift_term_variables(terms[i], n))));
    return Formula::forall(n, Formula::negation(Formula::conjunction(std::move(body))));
}

struct ThetaOptions {
    std::size_t max_element_length = 16;
    std::size_t element_cap = 200000;
    std::size_t term_size_cap = 7;
    std::uint64_t start_cursor = 0;
};

// The computable Pi_1 orbit formula of the crucial lemma, materialized up to
// max_conjuncts members of the deterministic X_* stream. Resumable: with
// start_cursor = k the first k stream items are skipped, so extending a
// prefix reproduces exactly the continuation of an earlier run.
//
// Hypotheses carried by the caller, not runtime-checked: the structure is
// quasi-Hopfian on its generator tuple, X generates Aut, and the bound
// satisfies the word-search condition. Under them, NOT-in-orbit coincides
// with "generates a proper substructure" and the emitted formula defines the
// orbit of the generators.
inline ThetaPrefix build_theta(const Structure& s, OrbitEngine& engine,
                               std::size_t max_conjuncts, ThetaOptions opts = {}) {
    ThetaPrefix out;
    out.psi = build_psi(s.presentation());
    out.source_relators = s.presentation().relators();
    out.arity = s.presentation().generator_count();
    out.structure_config_hash = s.config_hash();
    out.producer = "xstar:" + out.structure_config_hash;
    out.length_convention =
        s.signature().relations().empty() ? "geodesic-generator-length" : "stage";
    out.psi_convention = s.psi_convention();
    XStarStream stream(s, engine,
                       {opts.max_element_length, opts.element_cap, opts.term_size_cap});
    for (std::uint64_t skipped = 0; skipped < opts.start_cursor; ++skipped) {
        if (!stream.next())
            throw budget_error("build_theta: stream exhausted before start cursor");
    }
    out.cursor = opts.start_cursor;
    while (out.conjuncts.size() < max_conjuncts) {
        auto item = stream.next();
        if (!item) break;
        ThetaConjunct c;
        c.tuple = std::move(item->tuple);
        for (const auto& e : c.tuple) c.tuple_display.push_back(s.display(e));
        c.terms = std::move(item->terms);
        c.formula = make_theta_conjunct_formula(out.source_relators, out.arity, c.terms);
        out.conjuncts.push_back(std::move(c));
        out.cursor++;
    }
    return out;
}

// Theta as a formula: psi /\ ce-and of the materialized conjuncts.
inline FormulaPtr theta_formula(const ThetaPrefix& t) {
    std::vector<FormulaPtr> prefix;
    prefix.reserve(t.conjuncts.size());
    for (const auto& c : t.conjuncts) prefix.push_back(c.formula);
    CeStream stream;
    stream.producer = t.producer;
    stream.cursor = t.cursor;
    stream.item_sigma_rank = 2;
    stream.item_pi_rank = 1;
    return Formula::conjunction({t.psi, Formula::ce_and(std::move(stream), std::move(prefix))});
}

// --- the d-Sigma_2 Scott sentence -------------------------------------------
//
// The paper delegates the assembly to the cited general construction without
// displaying it; the shape used here is
//     sigma = (exists x-bar Theta(x-bar))
//          /\ (forall y-bar forall x-bar (Theta(x-bar) -> \/_t /\_i y_i = t_i(x-bar)))
// and emitted documents carry assembly: "alvir-adopted" to flag the choice.
struct ScottSentence {
    FormulaPtr sigma2_part;
    FormulaPtr pi2_part;
    FormulaPtr whole;
    std::uint64_t term_cursor = 0;
};

inline ScottSentence assemble_scott(const Structure& s, const ThetaPrefix& t,
                                    std::size_t term_tuple_prefix = 16) {
    const std::size_t n = s.presentation().generator_count();
    ScottSentence out;
    out.sigma2_part = Formula::exists(n, theta_formula(t));

    // Theta(x-bar) with x-bar at variables n+1..2n; its inner quantifier
    // introduces y'-bar at 2n+1..3n.
    FormulaPtr shifted_theta;
    {
        std::vector<FormulaPtr> prefix;
        for (const auto& c : t.conjuncts) {
            std::vector<FormulaPtr> body;
            for (const auto& r : t.source_relators)
                body.push_back(Formula::atom(r.shifted(2 * n)));
            for (std::size_t i = 0; i < n; ++i)
                body.push_back(Formula::atom(AtomicFormula::equality(
                    Term::variable(n + i + 1), shift_term_variables(c.terms[i], 2 * n))));
            prefix.push_back(
                Formula::forall(n, Formula::negation(Formula::conjunction(std::move(body)))));
        }
        CeStream stream;
        stream.producer = t.producer + ":shifted";
        stream.cursor = t.cursor;
        stream.item_sigma_rank = 2;
        stream.item_pi_rank = 1;
        std::vector<FormulaPtr> psi_parts;
        for (const auto& r : t.source_relators)
            psi_parts.push_back(Formula::atom(r.shifted(n)));
        for (std::size_t i = 1; i <= n; ++i)
            for (std::size_t j = i + 1; j <= n; ++j)
                psi_parts.push_back(Formula::negation(Formula::atom(AtomicFormula::equality(
                    Term::variable(n + i), Term::variable(n + j)))));
        shifted_theta = Formula::conjunction(
            {Formula::conjunction(std::move(psi_parts)),
             Formula::ce_and(std::move(stream), std::move(prefix))});
    }

    // term-tuple disjuncts /\_i y_i = t_i(x-bar), term tuples enumerated by
    // total size with component sizes in lexicographic composition order
    std::vector<FormulaPtr> disjuncts;
    {
        TermEnumerator en(s.signature(), n);
        std::size_t emitted = 0;
        for (std::size_t size = n; emitted < term_tuple_prefix && size < n + 12; ++size) {
            std::vector<std::size_t> comp(n, 1);
            comp.back() = size - (n - 1);
            for (;;) {
                bool feasible = true;
                for (std::size_t i = 0; i < n; ++i)
                    if (en.of_size(comp[i]).empty()) feasible = false;
                if (feasible) {
                    std::vector<std::size_t> idx(n, 0);
                    for (;;) {
                        std::vector<FormulaPtr> eqs;
                        for (std::size_t i = 0; i < n; ++i) {
                            TermPtr tm = en.of_size(comp[i])[idx[i]];
                            eqs.push_back(Formula::atom(AtomicFormula::equality(
                                Term::variable(i + 1), shift_term_variables(tm, n))));
                        }
                        disjuncts.push_back(Formula::conjunction(std::move(eqs)));
                        if (++emitted >= term_tuple_prefix) break;
                        std::size_t i = n;
                        bool done = true;
                        while (i-- > 0) {
                            if (++idx[i] < en.of_size(comp[i]).size()) { done = false; break; }
                            idx[i] = 0;
                        }
                        if (done) break;
                    }
                }
                if (emitted >= term_tuple_prefix) break;
                std::size_t i = n;
                bool done = true;
                while (i-- > 0) {
                    if (i + 1 == n) continue;
                    std::size_t tail = 0;
                    for (std::size_t j = i + 1; j < n; ++j) tail += comp[j];
                    if (tail > n - i - 1) {
                        comp[i] += 1;
                        for (std::size_t j = i + 1; j < n; ++j) comp[j] = 1;
                        comp.back() = tail - 1 - (n - i - 2);
                        done = false;
                        break;
                    }
                }
                if (done) break;
            }
        }
    }
    CeStream term_stream;
    term_stream.producer = "term-tuples:n" + std::to_string(n);
    term_stream.cursor = disjuncts.size();
    term_stream.item_sigma_rank = 0;
    term_stream.item_pi_rank = 0;
    out.term_cursor = disjuncts.size();

    FormulaPtr implication = Formula::disjunction(
        {Formula::negation(shifted_theta),
         Formula::ce_or(std::move(term_stream), std::move(disjuncts))});
    out.pi2_part = Formula::forall(2 * n, implication);
    out.whole = Formula::conjunction({out.sigma2_part, out.pi2_part});
    return out;
}

// --- model checking ----------------------------------------------------------

// Verdict of checking a Theta prefix at an assignment. A refutation is a
// genuine witness and is final at any depth; "holds so far" is a proof only
// on finite targets (reported as exact_true there).
struct Verdict {
    enum class Kind { HoldsSoFar, Refuted, ExactTrue, ExactFalse };
    Kind kind;
    std::size_t depth = 0;
    std::size_t conjunct_index = 0; // valid when refuted
    Tuple witness;                  // valid when refuted
};

inline std::string verdict_to_string(const Structure& s, const Verdict& v) {
    switch (v.kind) {
    case Verdict::Kind::HoldsSoFar: return "HOLDS-SO-FAR depth=" + std::to_string(v.depth);
    case Verdict::Kind::ExactTrue: return "EXACT-TRUE";
    case Verdict::Kind::ExactFalse: return "EXACT-FALSE";
    case Verdict::Kind::Refuted: {
        std::string w;
        for (std::size_t i = 0; i < v.witness.size(); ++i) {
            if (i) w += ", ";
            w += s.display(v.witness[i]);
        }
        return "REFUTED conjunct=" + std::to_string(v.conjunct_index) + " witness=(" + w + ")";
    }
    }
    return {};
}

namespace detail {

// Witness search for one conjunct at x-bar = assignment: y-bar with all
// source relators true and x_i = t_i(y-bar).
inline std::optional<Tuple> refute_conjunct(const Structure& target,
                                            const std::vector<AtomicFormula>& relators,
                                            const ThetaConjunct& c, const Tuple& assignment,
                                            const std::vector<ElementId>& universe) {
    const std::size_t n = assignment.size();
    if (universe.empty()) return std::nullopt;
    std::vector<std::size_t> idx(n, 0);
    for (;;) {
        Tuple y;
        y.reserve(n);
        for (std::size_t i = 0; i < n; ++i) y.push_back(universe[idx[i]]);
        bool ok = true;
        for (const auto& r : relators)
            if (!holds_atom(target, r, y)) { ok = false; break; }
        if (ok) {
            for (std::size_t i = 0; i < n && ok; ++i)
                if (eval_term(target, *c.terms[i], y) != assignment[i]) ok = false;
            if (ok) return y;
        }
        std::size_t i = n;
        bool done = true;
        while (i-- > 0) {
            if (++idx[i] < universe.size()) { done = false; break; }
            idx[i] = 0;
        }
        if (done) return std::nullopt;
    }
}

} // namespace detail

// Bounded check of a Theta prefix on a target structure over the same
// signature: universal quantifiers range over the ball of the given depth.
// psi is quantifier-free and decided exactly.
inline Verdict check_bounded(const ThetaPrefix& theta, const Structure& target,
                             const Tuple& assignment, std::size_t depth,
                             std::size_t element_cap = 200000) {
    if (assignment.size() != theta.arity)
        throw domain_error("check_bounded: assignment arity mismatch");
    if (!holds(target, theta.psi, assignment))
        return {Verdict::Kind::ExactFalse, depth, 0, {}};
    std::vector<ElementId> universe = target.enumerate(depth, element_cap);
    for (std::size_t k = 0; k < theta.conjuncts.size(); ++k) {
        auto w = detail::refute_conjunct(target, theta.source_relators, theta.conjuncts[k],
                                         assignment, universe);
        if (w) return {Verdict::Kind::Refuted, depth, k, std::move(*w)};
    }
    return {Verdict::Kind::HoldsSoFar, depth, 0, {}};
}

// Exact evaluation on a finite target: quantifiers range over the whole
// carrier, obtained by saturation.
inline Verdict eval_on_finite(const ThetaPrefix& theta, const Structure& target,
                              const Tuple& assignment, std::size_t element_cap = 100000) {
    auto universe = target.finite_elements(64, element_cap);
    if (!universe) throw domain_error("eval_on_finite: target is not finite within cap");
    if (!holds(target, theta.psi, assignment))
        return {Verdict::Kind::ExactFalse, 0, 0, {}};
    for (std::size_t k = 0; k < theta.conjuncts.size(); ++k) {
        auto w = detail::refute_conjunct(target, theta.source_relators, theta.conjuncts[k],
                                         assignment, *universe);
        if (w) return {Verdict::Kind::Refuted, 0, k, std::move(*w)};
    }
    return {Verdict::Kind::ExactTrue, 0, 0, {}};
}

// --- documents ---------------------------------------------------------------

inline nlohmann::json theta_to_json(const ThetaPrefix& t) {
    nlohmann::json j;
    j["metadata"] = {{"assembly", "alvir-adopted"},
                     {"cursor", t.cursor},
                     {"length_convention", t.length_convention},
                     {"psi_convention", t.psi_convention},
                     {"structure_config_hash", t.structure_config_hash}};
    nlohmann::json relators = nlohmann::json::array();
    for (const auto& r : t.source_relators) relators.push_back(atom_to_json(r));
    j["arity"] = t.arity;
    j["relators"] = relators;
    j["formula"] = formula_to_json(theta_formula(t));
    nlohmann::json conjuncts = nlohmann::json::array();
    for (const auto& c : t.conjuncts) {
        nlohmann::json e;
        nlohmann::json tuple = nlohmann::json::array();
        for (const auto& d : c.tuple_display) tuple.push_back(d);
        nlohmann::json terms = nlohmann::json::array();
        for (const auto& tm : c.terms) terms.push_back(term_to_json(tm));
        e["terms"] = terms;
        e["tuple"] = tuple;
        conjuncts.push_back(e);
    }
    j["conjuncts"] = conjuncts;
    return j;
}

inline ThetaPrefix theta_from_json(const nlohmann::json& j) {
    ThetaPrefix t;
    t.arity = j.at("arity").get<std::size_t>();
    for (const auto& r : j.at("relators")) t.source_relators.push_back(atom_from_json(r));
    t.cursor = j.at("metadata").at("cursor").get<std::uint64_t>();
    t.structure_config_hash = j.at("metadata").at("structure_config_hash").get<std::string>();
    t.length_convention = j.at("metadata").at("length_convention").get<std::string>();
    t.psi_convention = j.at("metadata").at("psi_convention").get<std::string>();
    t.producer = "xstar:" + t.structure_config_hash;
    {
        std::vector<FormulaPtr> parts;
        for (const auto& r : t.source_relators) parts.push_back(Formula::atom(r));
        for (std::size_t i = 1; i <= t.arity; ++i)
            for (std::size_t k = i + 1; k <= t.arity; ++k)
                parts.push_back(Formula::negation(Formula::atom(
                    AtomicFormula::equality(Term::variable(i), Term::variable(k)))));
        t.psi = Formula::conjunction(std::move(parts));
    }
    for (const auto& e : j.at("conjuncts")) {
        ThetaConjunct c;
        for (const auto& d : e.at("tuple")) c.tuple_display.push_back(d.get<std::string>());
        for (const auto& tm : e.at("terms")) c.terms.push_back(term_from_json(tm));
        c.formula = make_theta_conjunct_formula(t.source_relators, t.arity, c.terms);
        t.conjuncts.push_back(std::move(c));
    }
    return t;
}

inline nlohmann::json scott_to_json(const ThetaPrefix& t, const ScottSentence& sc) {
    nlohmann::json j;
    j["metadata"] = {{"assembly", "alvir-adopted"},
                     {"cursor", t.cursor},
                     {"length_convention", t.length_convention},
                     {"psi_convention", t.psi_convention},
                     {"structure_config_hash", t.structure_config_hash},
                     {"term_cursor", sc.term_cursor}};
    j["classification"] = {{"pi2_part", sc.pi2_part->classification()},
                           {"sigma2_part", sc.sigma2_part->classification()},
                           {"whole_d_sigma2", sc.whole->is_d_sigma(2)}};
    j["sigma2_part"] = formula_to_json(sc.sigma2_part);
    j["pi2_part"] = formula_to_json(sc.pi2_part);
    return j;
}

} // namespace scott
