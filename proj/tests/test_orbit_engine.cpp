#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "scott/free_abelian.hpp"
#include "scott/free_plane.hpp"
#include "scott/graph_product.hpp"
#include "scott/orbit.hpp"

using namespace scott;

namespace {

GPStructure dinf_structure() { return GPStructure(GPGraph({{"a", 2}, {"b", 2}}, {})); }

// Concrete model of the infinite dihedral group: elements t^k a^eps with
// a t a = t^-1. Multiplication: (t^j a^d)(t^k a^e) = t^(j + k*(-1)^d) a^(d+e).
// Used as an independent certifier for proper-subgroup claims.
struct DinfModel {
    struct El {
        long long k;
        int eps;
        bool operator==(const El& o) const { return k == o.k && eps == o.eps; }
    };
    static El mul(El x, El y) {
        return {x.k + (x.eps ? -y.k : y.k), (x.eps + y.eps) % 2};
    }
    // a = t^0 a, b = a t = t^-1 a
    static El from_word(const std::string& display) {
        El acc{0, 0};
        for (char c : display) {
            if (c == 'a') acc = mul(acc, {0, 1});
            if (c == 'b') acc = mul(acc, {-1, 1});
        }
        return acc;
    }
    // membership in the subgroup generated by two reflections t^k1 a, t^k2 a:
    // translations t^(d Z), reflections t^m a with m = k1 (mod d), d = k1-k2.
    static bool in_two_reflection_subgroup(El x, long long k1, long long k2) {
        long long d = k1 - k2;
        if (d < 0) d = -d;
        if (d == 0) return (x.eps == 0 && x.k == 0) || (x.eps == 1 && x.k == k1);
        auto mod = [d](long long v) { return ((v % d) + d) % d; };
        if (x.eps == 0) return mod(x.k) == 0;
        return mod(x.k) == mod(k1);
    }
};

} // namespace

TEST_CASE("dihedral model sanity") {
    // aba = t^1 a and bab = t^-2 a
    auto aba = DinfModel::from_word("aba");
    REQUIRE(aba.k == 1);
    REQUIRE(aba.eps == 1);
    auto bab = DinfModel::from_word("bab");
    REQUIRE(bab.k == -2);
    REQUIRE(bab.eps == 1);
    // <aba, bab> misses both a and b: index-3 subgroup
    REQUIRE_FALSE(DinfModel::in_two_reflection_subgroup(DinfModel::from_word("a"), 1, -2));
    REQUIRE_FALSE(DinfModel::in_two_reflection_subgroup(DinfModel::from_word("b"), 1, -2));
    REQUIRE(DinfModel::in_two_reflection_subgroup(aba, 1, -2));
    // <a, bab> misses b: index-2 subgroup
    REQUIRE_FALSE(DinfModel::in_two_reflection_subgroup(DinfModel::from_word("b"), 0, -2));
    REQUIRE(DinfModel::in_two_reflection_subgroup(DinfModel::from_word("a"), 0, -2));
}

TEST_CASE("enumerate_automorphisms") {
    SECTION("dihedral with X = {pc_a, pc_b, swap}: four automorphisms at length 1") {
        GPStructure dinf = dinf_structure();
        auto pcs = partial_conjugations(dinf);
        auto fs = f_gamma(dinf);
        AutPresentation ap;
        ap.gens = {pcs[0], pcs[1], fs[1]};
        ap.c0 = 1;
        ap.coeffs = {1, 1};
        OrbitEngine engine(dinf, ap);
        auto autos = engine.enumerate_automorphisms(1);
        REQUIRE(autos.size() == 4);
        std::set<std::string> images;
        for (const auto& a : autos)
            images.insert(dinf.display(a.images[0]) + "|" + dinf.display(a.images[1]));
        REQUIRE(images.size() == 4); // pairwise distinct image tuples
        REQUIRE(autos[0].witness.empty());
    }
    SECTION("length 0 gives only the identity") {
        GPStructure dinf = dinf_structure();
        OrbitEngine engine(dinf, gp_aut_presentation(dinf));
        auto autos = engine.enumerate_automorphisms(0);
        REQUIRE(autos.size() == 1);
        REQUIRE(autos[0].images == dinf.generators());
    }
    SECTION("theta words on the plane give exactly 24 quadruples") {
        FreePlaneStructure pi4;
        AutPresentation full = plane_aut_presentation(pi4);
        AutPresentation thetas;
        thetas.gens = {full.gens[0], full.gens[1]};
        thetas.c0 = 8;
        thetas.coeffs.assign(4, 2);
        OrbitEngine engine(pi4, thetas);
        REQUIRE(engine.enumerate_automorphisms(12).size() == 24);
    }
    SECTION("deterministic order across engines") {
        GPStructure dinf = dinf_structure();
        OrbitEngine e1(dinf, gp_aut_presentation(dinf));
        OrbitEngine e2(dinf, gp_aut_presentation(dinf));
        auto a1 = e1.enumerate_automorphisms(4);
        auto a2 = e2.enumerate_automorphisms(4);
        REQUIRE(a1.size() == a2.size());
        for (std::size_t i = 0; i < a1.size(); ++i) {
            REQUIRE(a1[i].images == a2[i].images);
            REQUIRE(a1[i].depth == a2[i].depth);
        }
    }
}

TEST_CASE("orbit_decide") {
    GPStructure dinf = dinf_structure();
    AutPresentation ap = gp_aut_presentation(dinf);
    OrbitEngine engine(dinf, ap);
    SECTION("(a, aba) is in orbit, witness pc_a_b, within F(1,3) = 5") {
        Tuple t{dinf.parse_element("a"), dinf.parse_element("a b a")};
        OrbitVerdict v = engine.orbit_decide(t);
        REQUIRE(v.in_orbit);
        REQUIRE(v.bound_used == 5);
        REQUIRE(word_to_string(ap, v.witness) == "pc_a_b");
        REQUIRE(engine.apply_word(v.witness, dinf.generators()) == t);
    }
    SECTION("the generator tuple is the empty word") {
        OrbitVerdict v = engine.orbit_decide(dinf.generators());
        REQUIRE(v.in_orbit);
        REQUIRE(v.witness.empty());
    }
    SECTION("(aba, bab) is not in orbit: it generates a proper subgroup") {
        Tuple t{dinf.parse_element("a b a"), dinf.parse_element("b a b")};
        OrbitVerdict v = engine.orbit_decide(t);
        REQUIRE_FALSE(v.in_orbit);
        REQUIRE(v.bound_used == 7);
        // independent certification through the t^k a^eps model
        REQUIRE_FALSE(DinfModel::in_two_reflection_subgroup(DinfModel::from_word("a"), 1, -2));
    }
    SECTION("precondition: psi must hold") {
        Tuple t{dinf.parse_element("a"), dinf.parse_element("a")};
        REQUIRE_THROWS_AS(engine.orbit_decide(t), domain_error);
        // (ab, b): ab is not an involution, relator x1 x1 = e fails
        Tuple t2{dinf.parse_element("a b"), dinf.parse_element("b")};
        REQUIRE_THROWS_AS(engine.orbit_decide(t2), domain_error);
    }
    SECTION("Z^2 determinant-2 pair is not in orbit") {
        FreeAbelianStructure z2(2);
        OrbitEngine ze(z2, abelian_aut_presentation(z2));
        Tuple t{z2.encode({2, 0}), z2.encode({0, 1})};
        REQUIRE_FALSE(ze.orbit_decide(t).in_orbit);
    }
}

TEST_CASE("completeness under the bound on sampled words") {
    GPStructure dinf = dinf_structure();
    AutPresentation ap = gp_aut_presentation(dinf);
    OrbitEngine engine(dinf, ap);
    auto words = engine.enumerate_automorphisms(3);
    for (const auto& w : words) {
        OrbitVerdict v = engine.orbit_decide(w.images);
        REQUIRE(v.in_orbit);
    }
}

TEST_CASE("dedup correctness: equal image tuples act identically") {
    GPStructure dinf = dinf_structure();
    AutPresentation ap = gp_aut_presentation(dinf);
    OrbitEngine engine(dinf, ap);
    // brute-force words of length <= 3 and group them by image tuple
    std::map<std::string, std::pair<AutomorphismWord, Tuple>> by_image;
    std::vector<AutomorphismWord> stack{{}};
    auto ball = dinf.enumerate(4, 10000);
    for (std::size_t len = 1; len <= 3; ++len) {
        std::vector<AutomorphismWord> next;
        for (const auto& w : stack) {
            if (w.size() != len - 1) continue;
            for (std::size_t g = 0; g < ap.gens.size(); ++g) {
                AutomorphismWord w2 = w;
                w2.push_back({g, +1});
                next.push_back(w2);
            }
        }
        for (auto& w : next) {
            Tuple img = engine.apply_word(w, dinf.generators());
            std::string key = img[0].bytes + "|" + img[1].bytes;
            auto it = by_image.find(key);
            if (it == by_image.end()) {
                by_image.emplace(key, std::make_pair(w, img));
            } else {
                // same images on generators: same action on the whole ball
                for (const auto& e : ball)
                    REQUIRE(engine.apply_word(w, e) == engine.apply_word(it->second.first, e));
            }
        }
        stack.insert(stack.end(), next.begin(), next.end());
    }
    REQUIRE(by_image.size() >= 4);
}

TEST_CASE("enumerate_xstar") {
    GPStructure dinf = dinf_structure();
    AutPresentation ap = gp_aut_presentation(dinf);
    SECTION("budget 3 contains (aba, bab) and (a, bab) with the fixed terms") {
        OrbitEngine engine(dinf, ap);
        XStarStream stream(dinf, engine, {3, 10000, 7});
        bool saw_abab = false, saw_a_bab = false;
        std::uint64_t index = 0;
        for (auto item = stream.next(); item; item = stream.next()) {
            REQUIRE(item->index == index++);
            std::string u = dinf.display(item->tuple[0]), v = dinf.display(item->tuple[1]);
            if (u == "a b a" && v == "b a b") {
                saw_abab = true;
                REQUIRE(item->terms[0]->to_string() == "mul(x1, mul(x2, x1))");
                REQUIRE(item->terms[1]->to_string() == "mul(x2, mul(x1, x2))");
            }
            if (u == "a" && v == "b a b") {
                saw_a_bab = true;
                REQUIRE(item->terms[0]->to_string() == "x1");
                REQUIRE(item->terms[1]->to_string() == "mul(x2, mul(x1, x2))");
            }
            // stream agrees with orbit_decide by construction; re-verify
            REQUIRE_FALSE(engine.orbit_decide(item->tuple).in_orbit);
        }
        REQUIRE(saw_abab);
        REQUIRE(saw_a_bab);
    }
    SECTION("budget 0 is empty for the dihedral group") {
        OrbitEngine engine(dinf, ap);
        XStarStream stream(dinf, engine, {0, 10000, 7});
        REQUIRE_FALSE(stream.next().has_value());
    }
    SECTION("Z^2 budget 2 contains the determinant-2 pair ((2,0),(0,1))") {
        FreeAbelianStructure z2(2);
        OrbitEngine engine(z2, abelian_aut_presentation(z2));
        XStarStream stream(z2, engine, {2, 10000, 7});
        bool found = false;
        for (auto item = stream.next(); item; item = stream.next()) {
            if (item->tuple == Tuple{z2.encode({2, 0}), z2.encode({0, 1})}) {
                found = true;
                REQUIRE(item->terms[0]->to_string() == "mul(x1, x1)");
                REQUIRE(item->terms[1]->to_string() == "x2");
            }
            REQUIRE(det_oracle(z2, item->tuple) == false);
        }
        REQUIRE(found);
    }
    SECTION("stream and orbit_decide agree both ways over the budget ball") {
        OrbitEngine engine(dinf, ap);
        XStarStream stream(dinf, engine, {2, 10000, 7});
        std::set<std::string> emitted;
        for (auto item = stream.next(); item; item = stream.next())
            emitted.insert(item->tuple[0].bytes + "|" + item->tuple[1].bytes);
        auto ball = dinf.enumerate(2, 10000);
        for (const auto& u : ball)
            for (const auto& v : ball) {
                Tuple t{u, v};
                if (!satisfies_psi(dinf, t)) continue;
                bool expect = !engine.orbit_decide(t).in_orbit;
                REQUIRE(emitted.count(u.bytes + "|" + v.bytes) == (expect ? 1u : 0u));
            }
    }
    SECTION("in-orbit tuples never appear") {
        OrbitEngine engine(dinf, ap);
        XStarStream stream(dinf, engine, {3, 10000, 7});
        for (auto item = stream.next(); item; item = stream.next()) {
            REQUIRE(satisfies_psi(dinf, item->tuple));
            // the orbit of the generators within this ball
            REQUIRE(dinf.display(item->tuple[0]) + "|" + dinf.display(item->tuple[1]) !=
                    "a|b");
        }
    }
}

TEST_CASE("make_inner_plus_finite") {
    GPStructure dinf = dinf_structure();
    SECTION("dihedral with reps {id, swap} gives 2 + 2 generators and F = sum + 1") {
        auto fs = f_gamma(dinf); // fg0 = id, fg1 = swap
        AutPresentation ap = make_inner_plus_finite(dinf, {fs[0], fs[1]});
        REQUIRE(ap.gens.size() == 4);
        REQUIRE(ap.c0 == 1);
        REQUIRE(ap.coeffs == std::vector<std::uint64_t>{1, 1});
        // conj_a sends b to aba
        REQUIRE(dinf.display(ap.gens[0].images[1]) == "a b a");
        // the engine over this X still finds (a, aba)
        OrbitEngine engine(dinf, ap);
        Tuple t{dinf.parse_element("a"), dinf.parse_element("a b a")};
        REQUIRE(engine.orbit_decide(t).in_orbit);
    }
    SECTION("trivial reps give the inner conjugations only") {
        auto fs = f_gamma(dinf);
        AutPresentation ap = make_inner_plus_finite(dinf, {fs[0]});
        REQUIRE(ap.gens.size() == 3);
    }
    SECTION("abelian groups: inner conjugations collapse to the identity") {
        FreeAbelianStructure z2(2);
        AutPresentation ap = make_inner_plus_finite(z2, {});
        OrbitEngine engine(z2, ap);
        REQUIRE(engine.enumerate_automorphisms(3).size() == 1);
    }
    SECTION("bad rep fails validation") {
        AutomorphismSpec bogus;
        bogus.name = "bogus";
        bogus.images = {dinf.parse_element("a"), dinf.parse_element("a b")};
        bogus.inverse_images = bogus.images;
        REQUIRE_THROWS_AS(make_inner_plus_finite(dinf, {bogus}), domain_error);
    }
}

TEST_CASE("engine state budget") {
    FreeAbelianStructure z2(2);
    OrbitEngine engine(z2, abelian_aut_presentation(z2), 50);
    REQUIRE_THROWS_AS(engine.enumerate_automorphisms(12), budget_error);
}
