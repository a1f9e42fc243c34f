#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "scott/error.hpp"
#include "scott/signature.hpp"
#include "scott/term.hpp"

namespace scott {

// A positive atomic formula: either R(t1..tk) or t1 = t2.
class AtomicFormula {
public:
    enum class Kind { Relation, Equality };

    static AtomicFormula relation(std::string name, std::vector<TermPtr> args) {
        AtomicFormula a;
        a.kind_ = Kind::Relation;
        a.name_ = std::move(name);
        a.args_ = std::move(args);
        return a;
    }

    static AtomicFormula equality(TermPtr lhs, TermPtr rhs) {
        AtomicFormula a;
        a.kind_ = Kind::Equality;
        a.args_ = {std::move(lhs), std::move(rhs)};
        return a;
    }

    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    const std::vector<TermPtr>& args() const { return args_; }
    const TermPtr& lhs() const { return args_[0]; }
    const TermPtr& rhs() const { return args_[1]; }

    std::size_t max_variable() const {
        std::size_t m = 0;
        for (const auto& t : args_) m = std::max(m, t->max_variable());
        return m;
    }

    AtomicFormula shifted(std::size_t offset) const {
        AtomicFormula a;
        a.kind_ = kind_;
        a.name_ = name_;
        for (const auto& t : args_) a.args_.push_back(shift_term_variables(t, offset));
        return a;
    }

    std::string to_string() const {
        if (kind_ == Kind::Equality)
            return args_[0]->to_string() + " = " + args_[1]->to_string();
        std::string s = name_ + "(";
        for (std::size_t i = 0; i < args_.size(); ++i) {
            if (i) s += ", ";
            s += args_[i]->to_string();
        }
        return s + ")";
    }

private:
    Kind kind_ = Kind::Equality;
    std::string name_;
    std::vector<TermPtr> args_;
};

// A finite presentation <x1..xn | phi_1, ..., phi_k> over a signature.
class Presentation {
public:
    Presentation(Signature sig, std::size_t generator_count,
                 std::vector<AtomicFormula> relators)
        : sig_(std::move(sig)),
          generator_count_(generator_count),
          relators_(std::move(relators)) {
        for (const auto& r : relators_) {
            if (r.max_variable() > generator_count_)
                throw domain_error("relator uses variable beyond generator count");
            if (r.kind() == AtomicFormula::Kind::Relation) {
                auto ar = sig_.relation_arity(r.name());
                if (!ar) throw domain_error("relator uses unknown relation: " + r.name());
                if (*ar != r.args().size())
                    throw domain_error("relator arity mismatch: " + r.name());
            }
        }
    }

    const Signature& signature() const { return sig_; }
    std::size_t generator_count() const { return generator_count_; }
    const std::vector<AtomicFormula>& relators() const { return relators_; }

private:
    Signature sig_;
    std::size_t generator_count_;
    std::vector<AtomicFormula> relators_;
};

} // namespace scott
