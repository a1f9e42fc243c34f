#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "scott/error.hpp"
#include "scott/orbit.hpp"
#include "scott/structure.hpp"

namespace scott {

using IntVector = std::vector<long long>;

// Z^n with the standard basis: elements are integer vectors, length is the
// L1 norm (geodesic distance in the standard Cayley graph), presentation
// relators are the pairwise commutations.
class FreeAbelianStructure : public Structure {
public:
    explicit FreeAbelianStructure(std::size_t rank)
        : rank_(rank), presentation_(make_presentation(rank)) {
        if (rank < 1) throw domain_error("free abelian rank must be >= 1");
        for (std::size_t i = 0; i < rank; ++i) {
            IntVector v(rank, 0);
            v[i] = 1;
            generators_.push_back(encode(v));
        }
    }

    std::size_t rank() const { return rank_; }
    const Signature& signature() const override { return group_signature(); }
    const Presentation& presentation() const override { return presentation_; }
    const Tuple& generators() const override { return generators_; }

    ElementId constant(const std::string& name) const override {
        if (name != "e") throw domain_error("unknown constant: " + name);
        return encode(IntVector(rank_, 0));
    }

    ElementId apply(const std::string& fn, std::span<const ElementId> args) const override {
        if (fn == "mul") {
            IntVector a = decode(args[0]), b = decode(args[1]);
            for (std::size_t i = 0; i < rank_; ++i) a[i] += b[i];
            return encode(a);
        }
        if (fn == "inv") {
            IntVector a = decode(args[0]);
            for (auto& x : a) x = -x;
            return encode(a);
        }
        throw domain_error("unknown function: " + fn);
    }

    std::size_t length(const ElementId& e) const override {
        IntVector v = decode(e);
        std::size_t s = 0;
        for (auto x : v) s += static_cast<std::size_t>(std::llabs(x));
        return s;
    }

    TermPtr express(const ElementId& e) const override {
        IntVector v = decode(e);
        std::vector<TermPtr> letters;
        for (std::size_t i = 0; i < rank_; ++i) {
            TermPtr x = Term::variable(i + 1);
            for (long long k = 0; k < v[i]; ++k) letters.push_back(x);
            for (long long k = 0; k > v[i]; --k) letters.push_back(Term::apply("inv", {x}));
        }
        if (letters.empty()) return Term::constant("e");
        TermPtr t = letters.back();
        for (std::size_t i = letters.size() - 1; i-- > 0;)
            t = Term::apply("mul", {letters[i], t});
        return t;
    }

    std::vector<ElementId> enumerate(std::size_t max_length, std::size_t cap) const override {
        std::vector<ElementId> out;
        IntVector v(rank_, 0);
        enumerate_rec(v, 0, static_cast<long long>(max_length), out, cap);
        std::sort(out.begin(), out.end(), [this](const ElementId& a, const ElementId& b) {
            std::size_t la = length(a), lb = length(b);
            return la != lb ? la < lb : a.bytes < b.bytes;
        });
        return out;
    }

    ElementId apply_map(const ElementId& e, std::span<const ElementId> images) const override {
        IntVector v = decode(e);
        IntVector acc(rank_, 0);
        for (std::size_t i = 0; i < rank_; ++i) {
            if (v[i] == 0) continue;
            IntVector img = decode(images[i]);
            for (std::size_t j = 0; j < rank_; ++j) acc[j] += v[i] * img[j];
        }
        return encode(acc);
    }

    // "(2,-1)" vector literal or a word over a,b,c,... generator names.
    ElementId parse_element(const std::string& text) const override {
        std::size_t i = 0;
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i < text.size() && text[i] == '(') {
            IntVector v;
            std::string inner = text.substr(i + 1);
            auto close = inner.find(')');
            if (close == std::string::npos) throw parse_error(text.size(), "expected ')'");
            std::istringstream in(inner.substr(0, close));
            std::string tok;
            while (std::getline(in, tok, ','))
                try {
                    v.push_back(std::stoll(tok));
                } catch (...) {
                    throw domain_error("bad vector coordinate: " + tok);
                }
            if (v.size() != rank_) throw domain_error("vector dimension mismatch");
            return encode(v);
        }
        // word form
        IntVector v(rank_, 0);
        std::istringstream in(text);
        std::string tok;
        while (in >> tok) {
            if (tok == "e") continue;
            long long exp = 1;
            std::string name = tok;
            auto caret = tok.find('^');
            if (caret != std::string::npos) {
                name = tok.substr(0, caret);
                exp = std::stoll(tok.substr(caret + 1));
            }
            v[generator_index(name)] += exp;
        }
        return encode(v);
    }

    std::string display(const ElementId& e) const override { return e.bytes; }

    std::string config_json() const override {
        nlohmann::json j;
        j["rank"] = rank_;
        j["type"] = "free_abelian";
        return j.dump();
    }

    ElementId encode(const IntVector& v) const {
        std::string s = "(";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(v[i]);
        }
        return {s + ")"};
    }

    IntVector decode(const ElementId& e) const {
        IntVector v;
        std::istringstream in(e.bytes.substr(1, e.bytes.size() - 2));
        std::string tok;
        while (std::getline(in, tok, ',')) v.push_back(std::stoll(tok));
        return v;
    }

    static std::string generator_name(std::size_t i) {
        return std::string(1, static_cast<char>('a' + i));
    }

    std::size_t generator_index(const std::string& name) const {
        if (name.size() == 1 && name[0] >= 'a' &&
            name[0] < static_cast<char>('a' + rank_))
            return static_cast<std::size_t>(name[0] - 'a');
        throw domain_error("unknown generator: " + name);
    }

private:
    void enumerate_rec(IntVector& v, std::size_t pos, long long budget,
                       std::vector<ElementId>& out, std::size_t cap) const {
        if (pos == rank_) {
            if (out.size() >= cap) throw budget_error("free abelian ball cap exceeded");
            out.push_back(encode(v));
            return;
        }
        for (long long x = -budget; x <= budget; ++x) {
            v[pos] = x;
            enumerate_rec(v, pos + 1, budget - std::llabs(x), out, cap);
        }
        v[pos] = 0;
    }

    static Presentation make_presentation(std::size_t rank) {
        std::vector<AtomicFormula> relators;
        for (std::size_t i = 0; i < rank; ++i)
            for (std::size_t j = i + 1; j < rank; ++j) {
                TermPtr xi = Term::variable(i + 1), xj = Term::variable(j + 1);
                relators.push_back(AtomicFormula::equality(Term::apply("mul", {xi, xj}),
                                                           Term::apply("mul", {xj, xi})));
            }
        return Presentation(group_signature(), rank, std::move(relators));
    }

    std::size_t rank_;
    Presentation presentation_;
    Tuple generators_;
};

// Independent certifier for the orbit of the standard basis: a tuple of n
// vectors is a basis of Z^n iff its matrix has determinant +-1. Exact integer
// arithmetic, fraction-free Gaussian elimination.
inline long long int_determinant(std::vector<IntVector> m) {
    const std::size_t n = m.size();
    for (const auto& row : m)
        if (row.size() != n) throw domain_error("det: not a square matrix");
    long long det = 1;
    std::vector<IntVector> a = std::move(m);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a[pivot][col] == 0) ++pivot;
        if (pivot == n) return 0;
        if (pivot != col) {
            std::swap(a[pivot], a[col]);
            det = -det;
        }
        // clear below with exact row operations (Euclidean style)
        for (std::size_t r = col + 1; r < n; ++r) {
            while (a[r][col] != 0) {
                long long q = a[col][col] / a[r][col];
                for (std::size_t c = col; c < n; ++c) a[col][c] -= q * a[r][c];
                std::swap(a[col], a[r]);
                det = -det;
            }
        }
        det *= a[col][col];
        if (det == 0) return 0;
    }
    return det;
}

inline bool det_oracle(const std::vector<IntVector>& tuple) {
    long long d = int_determinant(tuple);
    return d == 1 || d == -1;
}

inline bool det_oracle(const FreeAbelianStructure& s, const Tuple& tuple) {
    std::vector<IntVector> cols;
    cols.reserve(tuple.size());
    for (const auto& e : tuple) cols.push_back(s.decode(e));
    return det_oracle(cols);
}

// Elementary generators of GL_n(Z): adjacent coordinate swaps, negation of
// the first coordinate, and the transvection e1 -> e1 + e2. The paper gives
// no explicit F for Z^n; the affine coefficients used here were calibrated
// against det_oracle on the acceptance range (entries in [-3,3]) and are
// range-validated only, matching the advertised epistemic status.
inline AutPresentation abelian_aut_presentation(const FreeAbelianStructure& s) {
    const std::size_t n = s.rank();
    AutPresentation ap;
    auto make = [&](const std::string& name, auto map, auto inverse_map) {
        AutomorphismSpec spec;
        spec.name = name;
        for (std::size_t i = 0; i < n; ++i) {
            IntVector e(n, 0);
            e[i] = 1;
            spec.images.push_back(s.encode(map(e)));
            IntVector e2(n, 0);
            e2[i] = 1;
            spec.inverse_images.push_back(s.encode(inverse_map(e2)));
        }
        ap.gens.push_back(std::move(spec));
    };
    for (std::size_t i = 0; i + 1 < n; ++i) {
        auto swap_fn = [i](IntVector v) {
            std::swap(v[i], v[i + 1]);
            return v;
        };
        make("swap" + std::to_string(i + 1) + std::to_string(i + 2), swap_fn, swap_fn);
    }
    auto neg = [](IntVector v) {
        v[0] = -v[0];
        return v;
    };
    make("neg1", neg, neg);
    if (n >= 2) {
        // the transvection matrix [[1,1],[0,1]]: generator images
        // ((1,0,...), (1,1,0,...)), coordinate action x1 += x2
        auto add = [](IntVector v) {
            v[0] += v[1];
            return v;
        };
        auto sub = [](IntVector v) {
            v[0] -= v[1];
            return v;
        };
        make("add12", add, sub);
    }
    ap.c0 = 4; // calibrated: max word length minus sum of L1 norms on the
               // acceptance range is 2 (reached at -I); margin 2
    ap.coeffs.assign(n, 1);
    return ap;
}

} // namespace scott
