#pragma once

#include <cctype>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "scott/error.hpp"
#include "scott/signature.hpp"

namespace scott {

// A finitary term over a signature, with 1-based variable indices x1..xn.
// Terms are immutable trees shared by pointer.
class Term;
using TermPtr = std::shared_ptr<const Term>;

class Term {
public:
    enum class Kind { Variable, Constant, Apply };

    static TermPtr variable(std::size_t index) {
        if (index < 1) throw domain_error("variable index must be >= 1");
        auto t = std::make_shared<Term>();
        t->kind_ = Kind::Variable;
        t->index_ = index;
        return t;
    }

    static TermPtr constant(std::string name) {
        auto t = std::make_shared<Term>();
        t->kind_ = Kind::Constant;
        t->name_ = std::move(name);
        return t;
    }

    static TermPtr apply(std::string fn, std::vector<TermPtr> children) {
        auto t = std::make_shared<Term>();
        t->kind_ = Kind::Apply;
        t->name_ = std::move(fn);
        t->children_ = std::move(children);
        return t;
    }

    Kind kind() const { return kind_; }
    std::size_t index() const { return index_; }
    const std::string& name() const { return name_; }
    const std::vector<TermPtr>& children() const { return children_; }

    // lg(t): one fixed global convention, the node count.
    std::size_t node_count() const {
        std::size_t n = 1;
        for (const auto& c : children_) n += c->node_count();
        return n;
    }

    std::size_t max_variable() const {
        std::size_t m = kind_ == Kind::Variable ? index_ : 0;
        for (const auto& c : children_)
            m = std::max(m, c->max_variable());
        return m;
    }

    std::string to_string() const {
        switch (kind_) {
        case Kind::Variable: return "x" + std::to_string(index_);
        case Kind::Constant: return name_;
        case Kind::Apply: {
            std::string s = name_ + "(";
            for (std::size_t i = 0; i < children_.size(); ++i) {
                if (i) s += ", ";
                s += children_[i]->to_string();
            }
            return s + ")";
        }
        }
        return {};
    }

    bool equals(const Term& o) const {
        if (kind_ != o.kind_) return false;
        switch (kind_) {
        case Kind::Variable: return index_ == o.index_;
        case Kind::Constant: return name_ == o.name_;
        case Kind::Apply:
            if (name_ != o.name_ || children_.size() != o.children_.size()) return false;
            for (std::size_t i = 0; i < children_.size(); ++i)
                if (!children_[i]->equals(*o.children_[i])) return false;
            return true;
        }
        return false;
    }

private:
    Kind kind_ = Kind::Constant;
    std::size_t index_ = 0;
    std::string name_;
    std::vector<TermPtr> children_;
};

inline TermPtr shift_term_variables(const TermPtr& t, std::size_t offset) {
    switch (t->kind()) {
    case Term::Kind::Variable: return Term::variable(t->index() + offset);
    case Term::Kind::Constant: return t;
    case Term::Kind::Apply: {
        std::vector<TermPtr> cs;
        cs.reserve(t->children().size());
        for (const auto& c : t->children()) cs.push_back(shift_term_variables(c, offset));
        return Term::apply(t->name(), std::move(cs));
    }
    }
    return t;
}

// --- parsing --------------------------------------------------------------
//
// Grammar: identifiers [A-Za-z][A-Za-z0-9_]*, application f(t1,...,tk),
// variables x1..xn. Checked against the signature: symbol must exist and
// arity must match. Infix sugar for words and plane expressions lives with
// the owning structure modules, not here.

namespace detail {

class TermParser {
public:
    TermParser(const std::string& text, const Signature& sig, std::size_t var_count)
        : text_(text), sig_(sig), var_count_(var_count) {}

    TermPtr run() {
        skip_ws();
        TermPtr t = parse();
        skip_ws();
        if (pos_ != text_.size())
            throw parse_error(pos_, "trailing input after term");
        return t;
    }

private:
    TermPtr parse() {
        skip_ws();
        std::size_t start = pos_;
        // digit-named constants ("0", "1" of the plane language)
        if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            std::size_t s = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
            std::string num = text_.substr(s, pos_ - s);
            if (!sig_.has_constant(num)) throw parse_error(s, "unknown constant: " + num);
            return Term::constant(num);
        }
        std::string id = identifier();
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '(') {
            ++pos_;
            std::vector<TermPtr> args;
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == ')') {
                ++pos_;
            } else {
                for (;;) {
                    args.push_back(parse());
                    skip_ws();
                    if (pos_ < text_.size() && text_[pos_] == ',') { ++pos_; continue; }
                    if (pos_ < text_.size() && text_[pos_] == ')') { ++pos_; break; }
                    throw parse_error(pos_, "expected ',' or ')'");
                }
            }
            auto arity = sig_.function_arity(id);
            if (!arity) throw parse_error(start, "unknown function symbol: " + id);
            if (*arity != args.size())
                throw parse_error(start, "arity mismatch for " + id + ": expected " +
                                             std::to_string(*arity) + ", got " +
                                             std::to_string(args.size()));
            return Term::apply(id, std::move(args));
        }
        if (id.size() >= 2 && id[0] == 'x' && std::isdigit(static_cast<unsigned char>(id[1]))) {
            std::size_t idx = 0;
            for (std::size_t i = 1; i < id.size(); ++i) {
                if (!std::isdigit(static_cast<unsigned char>(id[i])))
                    throw parse_error(start, "malformed variable: " + id);
                idx = idx * 10 + static_cast<std::size_t>(id[i] - '0');
            }
            if (idx < 1 || idx > var_count_)
                throw parse_error(start, "variable out of range: " + id);
            return Term::variable(idx);
        }
        if (sig_.has_constant(id)) return Term::constant(id);
        throw parse_error(start, "unknown symbol: " + id);
    }

    std::string identifier() {
        if (pos_ >= text_.size() ||
            !(std::isalpha(static_cast<unsigned char>(text_[pos_]))))
            throw parse_error(pos_, "expected identifier");
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        return text_.substr(start, pos_ - start);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    const std::string& text_;
    const Signature& sig_;
    std::size_t var_count_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline TermPtr parse_term(const std::string& text, const Signature& sig,
                          std::size_t var_count = 64) {
    return detail::TermParser(text, sig, var_count).run();
}

// --- deterministic term enumeration ----------------------------------------
//
// Terms are enumerated by increasing node count; within one size, variables
// come first (by index), then constants (signature order), then applications
// with functions in signature order, child-size compositions in lexicographic
// order and child choices in row-major order. This order is the tie-breaker
// for every "smallest term" search in the project.
class TermEnumerator {
public:
    TermEnumerator(const Signature& sig, std::size_t var_count)
        : sig_(sig), var_count_(var_count) {}

    // All terms with exactly `size` nodes. Levels are memoized.
    const std::vector<TermPtr>& of_size(std::size_t size) {
        while (levels_.size() <= size) grow();
        return levels_[size];
    }

private:
    void grow() {
        std::size_t size = levels_.size();
        std::vector<TermPtr> out;
        if (size == 0) {
            levels_.push_back(out);
            return;
        }
        if (size == 1) {
            for (std::size_t v = 1; v <= var_count_; ++v) out.push_back(Term::variable(v));
            for (const auto& c : sig_.constants()) out.push_back(Term::constant(c));
        } else {
            for (const auto& f : sig_.functions()) {
                std::vector<std::size_t> comp(f.arity, 1);
                std::size_t budget = size - 1;
                if (budget < f.arity) continue;
                comp.back() = budget - (f.arity - 1);
                for (;;) {
                    emit_apply(f.name, comp, out);
                    // next composition of `budget` into arity positive parts
                    std::size_t i = f.arity;
                    while (i-- > 0) {
                        if (i + 1 == f.arity) continue;
                        std::size_t tail = 0;
                        for (std::size_t j = i + 1; j < f.arity; ++j) tail += comp[j];
                        if (tail > static_cast<std::size_t>(f.arity - i - 1)) {
                            comp[i] += 1;
                            std::size_t rest = tail - 1;
                            for (std::size_t j = i + 1; j < f.arity; ++j) comp[j] = 1;
                            comp.back() = rest - (f.arity - i - 2);
                            break;
                        }
                    }
                    if (i == static_cast<std::size_t>(-1)) break;
                }
            }
        }
        levels_.push_back(std::move(out));
    }

    void emit_apply(const std::string& fn, const std::vector<std::size_t>& comp,
                    std::vector<TermPtr>& out) {
        std::vector<std::size_t> idx(comp.size(), 0);
        for (;;) {
            std::vector<TermPtr> children;
            children.reserve(comp.size());
            bool ok = true;
            for (std::size_t i = 0; i < comp.size(); ++i) {
                const auto& level = of_size(comp[i]);
                if (idx[i] >= level.size()) { ok = false; break; }
                children.push_back(level[idx[i]]);
            }
            if (ok) out.push_back(Term::apply(fn, std::move(children)));
            // advance row-major odometer
            std::size_t i = comp.size();
            while (i-- > 0) {
                idx[i]++;
                if (idx[i] < of_size(comp[i]).size()) break;
                idx[i] = 0;
                if (i == 0) return;
            }
            if (i == static_cast<std::size_t>(-1)) return;
        }
    }

    const Signature& sig_;
    std::size_t var_count_;
    std::vector<std::vector<TermPtr>> levels_;
};

} // namespace scott
