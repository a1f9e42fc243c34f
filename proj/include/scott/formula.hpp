#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "scott/error.hpp"
#include "scott/presentation.hpp"
#include "scott/term.hpp"

namespace scott {

// Infinitary formula AST. Computably enumerable conjunctions/disjunctions are
// represented by a named producer plus a cursor; only the materialized prefix
// is held in children. All nodes are immutable and shared.
class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Identifies a deterministic conjunct/disjunct stream. `cursor` counts how
// many items have been materialized into the node's children. The declared
// ranks describe every item the producer will ever emit, so classification
// of an empty prefix is still possible.
struct CeStream {
    std::string producer;
    std::uint64_t cursor = 0;
    int item_sigma_rank = 0;
    int item_pi_rank = 0;
};

class Formula {
public:
    enum class Kind { True, Atom, Not, And, Or, Exists, Forall, CeAnd, CeOr };

    static FormulaPtr truth() {
        auto f = std::make_shared<Formula>();
        f->kind_ = Kind::True;
        return f;
    }

    static FormulaPtr atom(AtomicFormula a) {
        auto f = std::make_shared<Formula>();
        f->kind_ = Kind::Atom;
        f->atom_ = std::move(a);
        return f;
    }

    static FormulaPtr negation(FormulaPtr body) {
        auto f = std::make_shared<Formula>();
        f->kind_ = Kind::Not;
        f->children_ = {std::move(body)};
        return f;
    }

    // Canonicalizes: true conjuncts are dropped, the empty conjunction is
    // the true node, a single conjunct stands alone.
    static FormulaPtr conjunction(std::vector<FormulaPtr> children) {
        std::erase_if(children, [](const FormulaPtr& c) { return c->kind() == Kind::True; });
        if (children.empty()) return truth();
        if (children.size() == 1) return children[0];
        auto f = std::make_shared<Formula>();
        f->kind_ = Kind::And;
        f->children_ = std::move(children);
        return f;
    }

    static FormulaPtr disjunction(std::vector<FormulaPtr> children) {
        if (children.size() == 1) return children[0];
        auto f = std::make_shared<Formula>();
        f->kind_ = Kind::Or;
        f->children_ = std::move(children);
        return f;
    }

    static FormulaPtr exists(std::size_t var_count, FormulaPtr body) {
        auto f = std::make_shared<Formula>();
        f->kind_ = Kind::Exists;
        f->quantified_ = var_count;
        f->children_ = {std::move(body)};
        return f;
    }

    static FormulaPtr forall(std::size_t var_count, FormulaPtr body) {
        auto f = std::make_shared<Formula>();
        f->kind_ = Kind::Forall;
        f->quantified_ = var_count;
        f->children_ = {std::move(body)};
        return f;
    }

    static FormulaPtr ce_and(CeStream stream, std::vector<FormulaPtr> prefix) {
        auto f = std::make_shared<Formula>();
        f->kind_ = Kind::CeAnd;
        f->stream_ = std::move(stream);
        f->children_ = std::move(prefix);
        return f;
    }

    static FormulaPtr ce_or(CeStream stream, std::vector<FormulaPtr> prefix) {
        auto f = std::make_shared<Formula>();
        f->kind_ = Kind::CeOr;
        f->stream_ = std::move(stream);
        f->children_ = std::move(prefix);
        return f;
    }

    Kind kind() const { return kind_; }
    const AtomicFormula& atom() const { return *atom_; }
    const std::vector<FormulaPtr>& children() const { return children_; }
    std::size_t quantified() const { return quantified_; }
    const CeStream& stream() const { return *stream_; }

    bool is_quantifier_free() const {
        switch (kind_) {
        case Kind::True:
        case Kind::Atom: return true;
        case Kind::Not:
        case Kind::And:
        case Kind::Or: {
            for (const auto& c : children_)
                if (!c->is_quantifier_free()) return false;
            return true;
        }
        default: return false;
        }
    }

    // Minimal n such that the formula is (computable) Sigma_n / Pi_n. The
    // rules follow the standard stratification: quantifier-free is rank 0 on
    // both sides, finite boolean combinations stay at the max of their parts,
    // a c.e. conjunction is Pi of its items, existential blocks pad to the
    // next Sigma level, and padding Sigma_n -> Pi_{n+1} is always allowed.
    struct Rank {
        int sigma;
        int pi;
    };

    Rank rank() const {
        switch (kind_) {
        case Kind::True: return {0, 0};
        case Kind::Atom: return {0, 0};
        case Kind::Not: {
            Rank r = children_[0]->rank();
            return {r.pi, r.sigma};
        }
        case Kind::And:
        case Kind::Or: {
            Rank acc{0, 0};
            for (const auto& c : children_) {
                Rank r = c->rank();
                acc.sigma = std::max(acc.sigma, r.sigma);
                acc.pi = std::max(acc.pi, r.pi);
            }
            return acc;
        }
        case Kind::CeAnd: {
            int p = stream_->item_pi_rank;
            for (const auto& c : children_) p = std::max(p, c->rank().pi);
            p = std::max(p, 1);
            return {p + 1, p};
        }
        case Kind::CeOr: {
            int s = stream_->item_sigma_rank;
            for (const auto& c : children_) s = std::max(s, c->rank().sigma);
            s = std::max(s, 1);
            return {s, s + 1};
        }
        case Kind::Exists: {
            Rank r = children_[0]->rank();
            int s = std::max(1, std::min(r.sigma >= 1 ? r.sigma : r.pi + 1, r.pi + 1));
            return {s, s + 1};
        }
        case Kind::Forall: {
            Rank r = children_[0]->rank();
            int p = std::max(1, std::min(r.pi >= 1 ? r.pi : r.sigma + 1, r.sigma + 1));
            return {p + 1, p};
        }
        }
        return {0, 0};
    }

    bool is_sigma(int n) const { return rank().sigma <= n; }
    bool is_pi(int n) const { return rank().pi <= n; }

    // d-Sigma_n: a conjunction with a Sigma_n conjunct and a Pi_n conjunct.
    bool is_d_sigma(int n) const {
        if (kind_ != Kind::And || children_.size() != 2) return false;
        return children_[0]->is_sigma(n) && children_[1]->is_pi(n);
    }

    std::string classification() const {
        Rank r = rank();
        if (r.sigma == 0 && r.pi == 0) return "Sigma0/Pi0";
        if (r.pi < r.sigma) return "Pi" + std::to_string(r.pi);
        if (r.sigma < r.pi) return "Sigma" + std::to_string(r.sigma);
        return "Sigma" + std::to_string(r.sigma) + "/Pi" + std::to_string(r.pi);
    }

private:
    Kind kind_ = Kind::True;
    std::optional<AtomicFormula> atom_;
    std::vector<FormulaPtr> children_;
    std::size_t quantified_ = 0;
    std::optional<CeStream> stream_;
};

// psi(x1..xn): the conjunction of all relators with the pairwise-distinctness
// clauses x_i != x_j. Quantifier-free; for n = 1 with no relators this is the
// canonical true node.
inline FormulaPtr build_psi(const Presentation& p) {
    std::vector<FormulaPtr> parts;
    for (const auto& r : p.relators()) parts.push_back(Formula::atom(r));
    std::size_t n = p.generator_count();
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = i + 1; j <= n; ++j)
            parts.push_back(Formula::negation(Formula::atom(
                AtomicFormula::equality(Term::variable(i), Term::variable(j)))));
    return Formula::conjunction(std::move(parts));
}

inline bool formula_equal(const Formula& a, const Formula& b) {
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
    case Formula::Kind::True: return true;
    case Formula::Kind::Atom: {
        const auto& x = a.atom();
        const auto& y = b.atom();
        if (x.kind() != y.kind() || x.name() != y.name() ||
            x.args().size() != y.args().size())
            return false;
        for (std::size_t i = 0; i < x.args().size(); ++i)
            if (!x.args()[i]->equals(*y.args()[i])) return false;
        return true;
    }
    default: break;
    }
    if (a.quantified() != b.quantified()) return false;
    if (a.kind() == Formula::Kind::CeAnd || a.kind() == Formula::Kind::CeOr) {
        if (a.stream().producer != b.stream().producer ||
            a.stream().cursor != b.stream().cursor)
            return false;
    }
    if (a.children().size() != b.children().size()) return false;
    for (std::size_t i = 0; i < a.children().size(); ++i)
        if (!formula_equal(*a.children()[i], *b.children()[i])) return false;
    return true;
}

// Replace every ce node by the finite conjunction/disjunction of its prefix.
inline FormulaPtr materialize_prefix(const FormulaPtr& f) {
    switch (f->kind()) {
    case Formula::Kind::True:
    case Formula::Kind::Atom: return f;
    case Formula::Kind::CeAnd: {
        std::vector<FormulaPtr> cs;
        for (const auto& c : f->children()) cs.push_back(materialize_prefix(c));
        return Formula::conjunction(std::move(cs));
    }
    case Formula::Kind::CeOr: {
        std::vector<FormulaPtr> cs;
        for (const auto& c : f->children()) cs.push_back(materialize_prefix(c));
        return Formula::disjunction(std::move(cs));
    }
    case Formula::Kind::Not:
        return Formula::negation(materialize_prefix(f->children()[0]));
    case Formula::Kind::Exists:
        return Formula::exists(f->quantified(), materialize_prefix(f->children()[0]));
    case Formula::Kind::Forall:
        return Formula::forall(f->quantified(), materialize_prefix(f->children()[0]));
    case Formula::Kind::And: {
        std::vector<FormulaPtr> cs;
        for (const auto& c : f->children()) cs.push_back(materialize_prefix(c));
        return Formula::conjunction(std::move(cs));
    }
    case Formula::Kind::Or: {
        std::vector<FormulaPtr> cs;
        for (const auto& c : f->children()) cs.push_back(materialize_prefix(c));
        return Formula::disjunction(std::move(cs));
    }
    }
    return f;
}

// --- JSON serialization -----------------------------------------------------
//
// Documents are UTF-8, keys sorted (nlohmann object order), newline-terminated
// when written by the CLI. Round trip is lossless on the materialized portion.

inline nlohmann::json term_to_json(const TermPtr& t) {
    switch (t->kind()) {
    case Term::Kind::Variable: return nlohmann::json{{"v", t->index()}};
    case Term::Kind::Constant: return nlohmann::json{{"c", t->name()}};
    case Term::Kind::Apply: {
        nlohmann::json args = nlohmann::json::array();
        for (const auto& c : t->children()) args.push_back(term_to_json(c));
        return nlohmann::json{{"args", args}, {"f", t->name()}};
    }
    }
    return {};
}

inline TermPtr term_from_json(const nlohmann::json& j) {
    if (j.contains("v")) return Term::variable(j.at("v").get<std::size_t>());
    if (j.contains("c")) return Term::constant(j.at("c").get<std::string>());
    if (j.contains("f")) {
        std::vector<TermPtr> args;
        for (const auto& a : j.at("args")) args.push_back(term_from_json(a));
        return Term::apply(j.at("f").get<std::string>(), std::move(args));
    }
    throw domain_error("malformed term document");
}

inline nlohmann::json atom_to_json(const AtomicFormula& a) {
    if (a.kind() == AtomicFormula::Kind::Equality)
        return nlohmann::json{{"eq", nlohmann::json::array({term_to_json(a.lhs()),
                                                            term_to_json(a.rhs())})}};
    nlohmann::json args = nlohmann::json::array();
    for (const auto& t : a.args()) args.push_back(term_to_json(t));
    return nlohmann::json{{"args", args}, {"rel", a.name()}};
}

inline AtomicFormula atom_from_json(const nlohmann::json& j) {
    if (j.contains("eq"))
        return AtomicFormula::equality(term_from_json(j.at("eq")[0]),
                                       term_from_json(j.at("eq")[1]));
    if (j.contains("rel")) {
        std::vector<TermPtr> args;
        for (const auto& a : j.at("args")) args.push_back(term_from_json(a));
        return AtomicFormula::relation(j.at("rel").get<std::string>(), std::move(args));
    }
    throw domain_error("malformed atomic formula document");
}

inline nlohmann::json formula_to_json(const FormulaPtr& f) {
    nlohmann::json j;
    switch (f->kind()) {
    case Formula::Kind::True: j["kind"] = "true"; return j;
    case Formula::Kind::Atom:
        j["kind"] = "atom";
        j["atom"] = atom_to_json(f->atom());
        return j;
    case Formula::Kind::Not: j["kind"] = "not"; break;
    case Formula::Kind::And: j["kind"] = "and"; break;
    case Formula::Kind::Or: j["kind"] = "or"; break;
    case Formula::Kind::Exists:
        j["kind"] = "exists";
        j["count"] = f->quantified();
        break;
    case Formula::Kind::Forall:
        j["kind"] = "forall";
        j["count"] = f->quantified();
        break;
    case Formula::Kind::CeAnd:
    case Formula::Kind::CeOr:
        j["kind"] = f->kind() == Formula::Kind::CeAnd ? "ce_and" : "ce_or";
        j["producer"] = f->stream().producer;
        j["cursor"] = f->stream().cursor;
        j["item_sigma"] = f->stream().item_sigma_rank;
        j["item_pi"] = f->stream().item_pi_rank;
        break;
    }
    nlohmann::json children = nlohmann::json::array();
    for (const auto& c : f->children()) children.push_back(formula_to_json(c));
    j["children"] = children;
    return j;
}

inline FormulaPtr formula_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "true") return Formula::truth();
    if (kind == "atom") return Formula::atom(atom_from_json(j.at("atom")));
    std::vector<FormulaPtr> children;
    if (j.contains("children"))
        for (const auto& c : j.at("children")) children.push_back(formula_from_json(c));
    if (kind == "not") return Formula::negation(children.at(0));
    if (kind == "and") {
        auto f = Formula::conjunction(std::move(children));
        return f;
    }
    if (kind == "or") return Formula::disjunction(std::move(children));
    if (kind == "exists") return Formula::exists(j.at("count").get<std::size_t>(), children.at(0));
    if (kind == "forall") return Formula::forall(j.at("count").get<std::size_t>(), children.at(0));
    if (kind == "ce_and" || kind == "ce_or") {
        CeStream s;
        s.producer = j.at("producer").get<std::string>();
        s.cursor = j.at("cursor").get<std::uint64_t>();
        s.item_sigma_rank = j.at("item_sigma").get<int>();
        s.item_pi_rank = j.at("item_pi").get<int>();
        return kind == "ce_and" ? Formula::ce_and(std::move(s), std::move(children))
                                : Formula::ce_or(std::move(s), std::move(children));
    }
    throw domain_error("malformed formula document: kind " + kind);
}

inline std::string serialize_formula(const FormulaPtr& f) {
    return formula_to_json(f).dump();
}

inline FormulaPtr parse_formula(const std::string& s) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(s);
    } catch (const nlohmann::json::exception& e) {
        throw domain_error(std::string("malformed formula document: ") + e.what());
    }
    return formula_from_json(j);
}

} // namespace scott
