#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "scott/error.hpp"

namespace scott {

// A finite first-order signature. Equality is a logical symbol and is not
// listed among the relations.
class Signature {
public:
    struct Symbol {
        std::string name;
        std::size_t arity;
    };

    Signature() = default;

    Signature(std::vector<std::string> constants,
              std::vector<Symbol> functions,
              std::vector<Symbol> relations)
        : constants_(std::move(constants)),
          functions_(std::move(functions)),
          relations_(std::move(relations)) {
        validate();
    }

    const std::vector<std::string>& constants() const { return constants_; }
    const std::vector<Symbol>& functions() const { return functions_; }
    const std::vector<Symbol>& relations() const { return relations_; }

    bool has_constant(const std::string& name) const {
        for (const auto& c : constants_)
            if (c == name) return true;
        return false;
    }

    std::optional<std::size_t> function_arity(const std::string& name) const {
        for (const auto& f : functions_)
            if (f.name == name) return f.arity;
        return std::nullopt;
    }

    std::optional<std::size_t> relation_arity(const std::string& name) const {
        for (const auto& r : relations_)
            if (r.name == name) return r.arity;
        return std::nullopt;
    }

private:
    void validate() const {
        std::vector<std::string> seen;
        auto check = [&seen](const std::string& n) {
            for (const auto& s : seen)
                if (s == n) throw domain_error("duplicate symbol name: " + n);
            seen.push_back(n);
        };
        for (const auto& c : constants_) check(c);
        for (const auto& f : functions_) {
            check(f.name);
            if (f.arity < 1) throw domain_error("function arity must be >= 1: " + f.name);
        }
        for (const auto& r : relations_) {
            check(r.name);
            if (r.arity < 1) throw domain_error("relation arity must be >= 1: " + r.name);
        }
    }

    std::vector<std::string> constants_;
    std::vector<Symbol> functions_;
    std::vector<Symbol> relations_;
};

// The signature shared by all group-like structures in this project.
inline const Signature& group_signature() {
    static const Signature sig({"e"}, {{"mul", 2}, {"inv", 1}}, {});
    return sig;
}

// Lattice-with-incidence signature for projective planes.
inline const Signature& plane_signature() {
    static const Signature sig({"0", "1"},
                               {{"join", 2}, {"meet", 2}},
                               {{"S1", 1}, {"S2", 1}, {"I", 2}});
    return sig;
}

} // namespace scott
