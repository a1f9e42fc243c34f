#pragma once

#include <algorithm>
#include <cctype>
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

// F_n on generators a, b, c, ... Elements are freely reduced words encoded
// one letter per byte: lowercase for the generator, uppercase for its
// inverse. The presentation has no relators, so psi is distinctness only.
class FreeGroupStructure : public Structure {
public:
    explicit FreeGroupStructure(std::size_t rank)
        : rank_(rank), presentation_(group_signature(), rank, {}) {
        if (rank < 1 || rank > 26) throw domain_error("free group rank must be in [1, 26]");
        for (std::size_t i = 0; i < rank; ++i)
            generators_.push_back(ElementId{std::string(1, letter(i, +1))});
    }

    std::size_t rank() const { return rank_; }
    const Signature& signature() const override { return group_signature(); }
    const Presentation& presentation() const override { return presentation_; }
    const Tuple& generators() const override { return generators_; }

    ElementId constant(const std::string& name) const override {
        if (name != "e") throw domain_error("unknown constant: " + name);
        return ElementId{""};
    }

    static std::string reduce(const std::string& w) {
        std::string out;
        for (char c : w) {
            if (!out.empty() && out.back() != c &&
                std::tolower(out.back()) == std::tolower(c))
                out.pop_back();
            else
                out.push_back(c);
        }
        return out;
    }

    static std::string invert(const std::string& w) {
        std::string out;
        for (auto it = w.rbegin(); it != w.rend(); ++it)
            out.push_back(std::islower(static_cast<unsigned char>(*it))
                              ? static_cast<char>(std::toupper(*it))
                              : static_cast<char>(std::tolower(*it)));
        return out;
    }

    ElementId apply(const std::string& fn, std::span<const ElementId> args) const override {
        if (fn == "mul") return ElementId{reduce(args[0].bytes + args[1].bytes)};
        if (fn == "inv") return ElementId{invert(args[0].bytes)};
        throw domain_error("unknown function: " + fn);
    }

    std::size_t length(const ElementId& e) const override { return e.bytes.size(); }

    TermPtr express(const ElementId& e) const override {
        std::vector<TermPtr> letters;
        for (char c : e.bytes) {
            bool inv = std::isupper(static_cast<unsigned char>(c));
            std::size_t i = static_cast<std::size_t>(std::tolower(c) - 'a');
            TermPtr x = Term::variable(i + 1);
            letters.push_back(inv ? Term::apply("inv", {x}) : x);
        }
        if (letters.empty()) return Term::constant("e");
        TermPtr t = letters.back();
        for (std::size_t i = letters.size() - 1; i-- > 0;)
            t = Term::apply("mul", {letters[i], t});
        return t;
    }

    std::vector<ElementId> enumerate(std::size_t max_length, std::size_t cap) const override {
        std::vector<std::string> cur{""}, all{""};
        for (std::size_t len = 1; len <= max_length; ++len) {
            std::vector<std::string> next;
            for (const auto& w : cur) {
                for (std::size_t i = 0; i < rank_; ++i) {
                    for (int sign : {+1, -1}) {
                        char c = letter(i, sign);
                        if (!w.empty() && w.back() != c &&
                            std::tolower(w.back()) == std::tolower(c))
                            continue;
                        next.push_back(w + c);
                        if (all.size() + next.size() > cap)
                            throw budget_error("free group ball cap exceeded");
                    }
                }
            }
            all.insert(all.end(), next.begin(), next.end());
            cur = std::move(next);
        }
        std::vector<ElementId> out;
        out.reserve(all.size());
        for (auto& w : all) out.push_back(ElementId{std::move(w)});
        std::sort(out.begin(), out.end(), [](const ElementId& a, const ElementId& b) {
            return a.bytes.size() != b.bytes.size() ? a.bytes.size() < b.bytes.size()
                                                    : a.bytes < b.bytes;
        });
        return out;
    }

    ElementId apply_map(const ElementId& e, std::span<const ElementId> images) const override {
        std::string out;
        for (char c : e.bytes) {
            bool inv = std::isupper(static_cast<unsigned char>(c));
            std::size_t i = static_cast<std::size_t>(std::tolower(c) - 'a');
            const std::string& img = images[i].bytes;
            out = reduce(out + (inv ? invert(img) : img));
        }
        return ElementId{out};
    }

    // "a b a^-1" word syntax; also accepts compact "abA".
    ElementId parse_element(const std::string& text) const override {
        std::string w;
        std::istringstream in(text);
        std::string tok;
        while (in >> tok) {
            if (tok == "e") continue;
            for (std::size_t i = 0; i < tok.size();) {
                char c = tok[i];
                if (!std::isalpha(static_cast<unsigned char>(c)))
                    throw domain_error("bad word token: " + tok);
                bool inv = false;
                std::size_t j = i + 1;
                if (j + 2 <= tok.size() && tok.compare(j, 3, "^-1") == 0) {
                    inv = true;
                    j += 3;
                } else if (j < tok.size() && tok[j] == '^') {
                    throw domain_error("only ^-1 exponents are supported: " + tok);
                }
                std::size_t idx = static_cast<std::size_t>(std::tolower(c) - 'a');
                if (idx >= rank_) throw domain_error("unknown generator: " + std::string(1, c));
                bool upper = std::isupper(static_cast<unsigned char>(c));
                w.push_back(letter(idx, (inv ^ upper) ? -1 : +1));
                i = j;
            }
        }
        return ElementId{reduce(w)};
    }

    std::string display(const ElementId& e) const override {
        if (e.bytes.empty()) return "e";
        std::string s;
        for (std::size_t i = 0; i < e.bytes.size(); ++i) {
            if (i) s += " ";
            char c = e.bytes[i];
            if (std::isupper(static_cast<unsigned char>(c))) {
                s += static_cast<char>(std::tolower(c));
                s += "^-1";
            } else {
                s += c;
            }
        }
        return s;
    }

    std::string config_json() const override {
        nlohmann::json j;
        j["rank"] = rank_;
        j["type"] = "free_group";
        return j.dump();
    }

    static char letter(std::size_t index, int sign) {
        return sign > 0 ? static_cast<char>('a' + index)
                        : static_cast<char>('A' + index);
    }

private:
    std::size_t rank_;
    Presentation presentation_;
    Tuple generators_;
};

// Nielsen reduction basis test. Greedy phase: apply the length-reducing
// replacement b_i <- b_i b_j^e or b_j^e b_i with the least (i, j, sign, side)
// whenever one exists. A generating tuple can always be carried to a reduced
// one by non-increasing elementary moves, so if the greedy fixpoint is not
// yet a permutation of the letters we finish with a breadth-first closure
// over the equal-length plateau (permutations, inversions, and multiplies
// that do not increase the total length). The tuple is a basis iff the
// letters tuple {x_1^+-1, ..., x_n^+-1} is reached.
inline bool nielsen_oracle(const FreeGroupStructure& s, std::vector<std::string> words,
                           std::size_t closure_cap = 2000000) {
    const std::size_t n = s.rank();
    if (words.size() != n) throw domain_error("nielsen_oracle: tuple arity must equal rank");
    for (auto& w : words) w = FreeGroupStructure::reduce(w);

    auto total = [](const std::vector<std::string>& t) {
        std::size_t sum = 0;
        for (const auto& w : t) sum += w.size();
        return sum;
    };
    auto is_letters = [&](const std::vector<std::string>& t) {
        std::vector<bool> used(n, false);
        for (const auto& w : t) {
            if (w.size() != 1) return false;
            std::size_t i = static_cast<std::size_t>(
                std::tolower(static_cast<unsigned char>(w[0])) - 'a');
            if (i >= n || used[i]) return false;
            used[i] = true;
        }
        return true;
    };

    // greedy strict reduction
    for (;;) {
        bool applied = false;
        for (std::size_t i = 0; i < n && !applied; ++i)
            for (std::size_t j = 0; j < n && !applied; ++j) {
                if (i == j) continue;
                for (int sign : {+1, -1}) {
                    std::string bj = sign > 0 ? words[j] : FreeGroupStructure::invert(words[j]);
                    std::string right = FreeGroupStructure::reduce(words[i] + bj);
                    if (right.size() < words[i].size()) {
                        words[i] = right;
                        applied = true;
                        break;
                    }
                    std::string left = FreeGroupStructure::reduce(bj + words[i]);
                    if (left.size() < words[i].size()) {
                        words[i] = left;
                        applied = true;
                        break;
                    }
                }
            }
        if (!applied) break;
    }
    if (is_letters(words)) return true;

    // plateau closure: all tuples reachable without increasing total length
    const std::size_t budget = total(words);
    std::set<std::vector<std::string>> seen{words};
    std::vector<std::vector<std::string>> frontier{words};
    while (!frontier.empty()) {
        std::vector<std::vector<std::string>> next;
        for (const auto& t : frontier) {
            auto push = [&](std::vector<std::string> u) {
                if (total(u) > budget) return false;
                if (is_letters(u)) return true;
                if (seen.insert(u).second) next.push_back(std::move(u));
                if (seen.size() > closure_cap)
                    throw budget_error("nielsen_oracle: closure cap exceeded");
                return false;
            };
            for (std::size_t i = 0; i < n; ++i) {
                // inversion
                auto u = t;
                u[i] = FreeGroupStructure::invert(u[i]);
                if (push(std::move(u))) return true;
                for (std::size_t j = 0; j < n; ++j) {
                    if (i == j) continue;
                    // swap
                    auto v = t;
                    std::swap(v[i], v[j]);
                    if (push(std::move(v))) return true;
                    for (int sign : {+1, -1}) {
                        std::string bj = sign > 0 ? t[j] : FreeGroupStructure::invert(t[j]);
                        auto r = t;
                        r[i] = FreeGroupStructure::reduce(t[i] + bj);
                        if (push(std::move(r))) return true;
                        auto l = t;
                        l[i] = FreeGroupStructure::reduce(bj + t[i]);
                        if (push(std::move(l))) return true;
                    }
                }
            }
        }
        frontier = std::move(next);
    }
    return false;
}

inline bool nielsen_oracle(const FreeGroupStructure& s, const Tuple& tuple) {
    std::vector<std::string> words;
    words.reserve(tuple.size());
    for (const auto& e : tuple) words.push_back(e.bytes);
    return nielsen_oracle(s, std::move(words));
}

// X for the free-group corollary: the elementary Nielsen transformations,
// i.e. every signed permutation of the basis together with every one-sided
// transvection x_i -> x_i x_j^+-1 / x_j^+-1 x_i, and F(m1..mn) = sum m_i.
// With the full elementary set a basis tuple reaches the letters tuple by
// strictly length-reducing transvection steps (at most sum m_i - n of them)
// followed by one signed permutation, which is what makes this F work.
inline AutPresentation nielsen_aut_presentation(const FreeGroupStructure& s) {
    const std::size_t n = s.rank();
    AutPresentation ap;

    // signed permutations, identity excluded
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::vector<std::vector<std::size_t>> perms;
    do {
        perms.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    for (const auto& p : perms) {
        for (std::size_t signs = 0; signs < (std::size_t{1} << n); ++signs) {
            bool identity = signs == 0;
            for (std::size_t i = 0; i < n && identity; ++i)
                if (p[i] != i) identity = false;
            if (identity) continue;
            AutomorphismSpec spec;
            spec.name = "sp";
            for (std::size_t i = 0; i < n; ++i) {
                int sign = (signs >> i) & 1 ? -1 : +1;
                spec.name += std::string(1, FreeGroupStructure::letter(p[i], sign));
                spec.images.push_back(
                    ElementId{std::string(1, FreeGroupStructure::letter(p[i], sign))});
            }
            // inverse of a signed permutation is a signed permutation
            spec.inverse_images.assign(n, ElementId{});
            for (std::size_t i = 0; i < n; ++i) {
                int sign = (signs >> i) & 1 ? -1 : +1;
                spec.inverse_images[p[i]] =
                    ElementId{std::string(1, FreeGroupStructure::letter(i, sign))};
            }
            ap.gens.push_back(std::move(spec));
        }
    }

    // transvections
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            for (int sign : {+1, -1}) {
                for (int side : {+1, -1}) { // +1: right multiply, -1: left
                    AutomorphismSpec spec;
                    char xj = FreeGroupStructure::letter(j, sign);
                    char xj_inv = FreeGroupStructure::letter(j, -sign);
                    spec.name = std::string("mul_") + FreeGroupStructure::letter(i, +1) +
                                (side > 0 ? "r" : "l") + xj;
                    for (std::size_t k = 0; k < n; ++k) {
                        std::string img(1, FreeGroupStructure::letter(k, +1));
                        std::string inv_img = img;
                        if (k == i) {
                            img = side > 0 ? img + xj : xj + img;
                            inv_img = side > 0 ? inv_img + xj_inv : std::string(1, xj_inv) + inv_img;
                        }
                        spec.images.push_back(ElementId{FreeGroupStructure::reduce(img)});
                        spec.inverse_images.push_back(ElementId{FreeGroupStructure::reduce(inv_img)});
                    }
                    ap.gens.push_back(std::move(spec));
                }
            }
        }

    ap.c0 = 0;
    ap.coeffs.assign(n, 1);
    return ap;
}

} // namespace scott
