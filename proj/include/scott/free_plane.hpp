#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "scott/error.hpp"
#include "scott/orbit.hpp"
#include "scott/structure.hpp"

namespace scott {

// The free projective plane of rank 4 over the quadrangle A1, A2, B1, B2.
// Elements are hash-consed DAG nodes: a line is created by exactly two
// points, a point (beyond stage 0) by exactly two lines, and in the free
// extension incidence happens only through these creation records. Lines
// appear at odd stages, points at even stages; a new node sits one stage
// above the larger of its children.
class PlaneStore {
public:
    enum class Kind { Bottom, Top, BasePoint, Join, Meet };

    struct Node {
        Kind kind;
        std::size_t a = 0, b = 0; // creating children (Join/Meet)
        std::size_t stage = 0;
        std::string bytes;
        std::vector<std::size_t> incident; // via creation records only
    };

    PlaneStore() {
        nodes_.push_back({Kind::Bottom, 0, 0, 0, "0", {}});
        nodes_.push_back({Kind::Top, 0, 0, 0, "1", {}});
        for (const char* name : {"A1", "A2", "B1", "B2"})
            nodes_.push_back({Kind::BasePoint, 0, 0, 0, name, {}});
        for (std::size_t i = 0; i < nodes_.size(); ++i) by_bytes_[nodes_[i].bytes] = i;
    }

    static constexpr std::size_t bottom = 0;
    static constexpr std::size_t top = 1;

    std::size_t size() const { return nodes_.size(); }
    const Node& node(std::size_t id) const { return nodes_[id]; }
    std::size_t stage(std::size_t id) const { return nodes_[id].stage; }

    bool is_point(std::size_t id) const {
        return nodes_[id].kind == Kind::BasePoint || nodes_[id].kind == Kind::Meet;
    }
    bool is_line(std::size_t id) const { return nodes_[id].kind == Kind::Join; }

    std::size_t base_point(std::size_t i) const { return 2 + i; }

    std::size_t lookup(const std::string& bytes) const {
        auto it = by_bytes_.find(bytes);
        if (it == by_bytes_.end()) throw domain_error("unknown plane element: " + bytes);
        return it->second;
    }

    // Incidence is decided from the creation records alone.
    bool incident(std::size_t x, std::size_t y) const {
        if (!((is_point(x) && is_line(y)) || (is_line(x) && is_point(y)))) return false;
        const auto& inc = nodes_[x].incident;
        return std::find(inc.begin(), inc.end(), y) != inc.end();
    }

    // The unique line through two distinct points if the DAG has one.
    std::size_t common_line(std::size_t p, std::size_t q) const {
        for (std::size_t l : nodes_[p].incident)
            if (incident(q, l)) return l;
        return npos;
    }

    std::size_t common_point(std::size_t l, std::size_t m) const {
        for (std::size_t p : nodes_[l].incident)
            if (incident(p, m)) return p;
        return npos;
    }

    // Total lattice operations of the plane language.
    std::size_t op_join(std::size_t x, std::size_t y) {
        if (x == y) return x;
        if (x == bottom) return y;
        if (y == bottom) return x;
        if (x == top || y == top) return top;
        if (is_point(x) && is_point(y)) {
            std::size_t l = common_line(x, y);
            return l != npos ? l : create(Kind::Join, x, y);
        }
        if (is_line(x) && is_line(y)) return top;
        // mixed point/line
        std::size_t p = is_point(x) ? x : y;
        std::size_t l = is_point(x) ? y : x;
        return incident(p, l) ? l : top;
    }

    std::size_t op_meet(std::size_t x, std::size_t y) {
        if (x == y) return x;
        if (x == top) return y;
        if (y == top) return x;
        if (x == bottom || y == bottom) return bottom;
        if (is_line(x) && is_line(y)) {
            std::size_t p = common_point(x, y);
            return p != npos ? p : create(Kind::Meet, x, y);
        }
        if (is_point(x) && is_point(y)) return bottom;
        std::size_t p = is_point(x) ? x : y;
        std::size_t l = is_point(x) ? y : x;
        return incident(p, l) ? p : bottom;
    }

    // Materializes the free extension of Hall's construction through the
    // given stage: odd stages join every unjoined point pair, even stages
    // meet every parallel line pair. Creation order is deterministic. The
    // node budget guards against runaway stages (growth is doubly
    // exponential from stage 6 on).
    void materialize(std::size_t max_stage, std::size_t node_cap = 1000000) {
        while (materialized_ < max_stage) {
            std::size_t s = materialized_ + 1;
            const std::size_t before = nodes_.size();
            // in the free construction nearly every pair spawns a node, so
            // an oversized pair scan already means an oversized stage
            std::size_t kind_count = 0;
            for (std::size_t i = 0; i < before; ++i)
                if (s % 2 == 1 ? is_point(i) : is_line(i)) kind_count++;
            if (kind_count * (kind_count - 1) / 2 > node_cap)
                throw budget_error("plane store node cap exceeded");
            if (s % 2 == 1) {
                for (std::size_t i = 0; i < before; ++i)
                    for (std::size_t j = i + 1; j < before; ++j) {
                        if (!is_point(i) || !is_point(j)) continue;
                        if (nodes_.size() > node_cap)
                            throw budget_error("plane store node cap exceeded");
                        if (common_line(i, j) == npos) create(Kind::Join, i, j);
                    }
            } else {
                for (std::size_t i = 0; i < before; ++i)
                    for (std::size_t j = i + 1; j < before; ++j) {
                        if (!is_line(i) || !is_line(j)) continue;
                        if (nodes_.size() > node_cap)
                            throw budget_error("plane store node cap exceeded");
                        if (common_point(i, j) == npos) create(Kind::Meet, i, j);
                    }
            }
            materialized_ = s;
        }
    }

    std::size_t materialized_stage() const { return materialized_; }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    std::size_t create(Kind kind, std::size_t x, std::size_t y) {
        if (nodes_[x].bytes > nodes_[y].bytes) std::swap(x, y);
        std::string bytes = "(" + nodes_[x].bytes + (kind == Kind::Join ? " v " : " ^ ") +
                            nodes_[y].bytes + ")";
        auto it = by_bytes_.find(bytes);
        if (it != by_bytes_.end()) return it->second;
        Node n;
        n.kind = kind;
        n.a = x;
        n.b = y;
        n.stage = std::max(nodes_[x].stage, nodes_[y].stage) + 1;
        n.bytes = std::move(bytes);
        n.incident = {x, y};
        // parity schedule: lines on odd stages, points on even stages
        if (kind == Kind::Join && n.stage % 2 == 0)
            throw domain_error("join created at even stage (parity violation)");
        if (kind == Kind::Meet && n.stage % 2 == 1)
            throw domain_error("meet created at odd stage (parity violation)");
        std::size_t id = nodes_.size();
        nodes_.push_back(n);
        by_bytes_[n.bytes] = id;
        nodes_[x].incident.push_back(id);
        nodes_[y].incident.push_back(id);
        return id;
    }

    std::vector<Node> nodes_;
    std::unordered_map<std::string, std::size_t> by_bytes_;
    std::size_t materialized_ = 0;
};

// A collineation presented by its images on the base quadrangle, extended by
// structural recursion over creation records with memoization.
class Collineation {
public:
    Collineation(std::shared_ptr<PlaneStore> store, std::array<std::size_t, 4> base_images)
        : store_(std::move(store)), base_images_(base_images) {
        for (std::size_t i = 0; i < 4; ++i) {
            if (!store_->is_point(base_images_[i]))
                throw domain_error("collineation image is not a point");
            for (std::size_t j = i + 1; j < 4; ++j)
                if (base_images_[i] == base_images_[j])
                    throw domain_error("collineation images are not distinct");
        }
        // quadrangle check: no three images collinear
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = i + 1; j < 4; ++j)
                for (std::size_t k = j + 1; k < 4; ++k) {
                    std::size_t l = store_->common_line(base_images_[i], base_images_[j]);
                    if (l != PlaneStore::npos && store_->incident(base_images_[k], l))
                        throw domain_error("collineation images are degenerate (three collinear)");
                }
    }

    std::size_t apply(std::size_t id) {
        if (id == PlaneStore::bottom || id == PlaneStore::top) return id;
        auto it = memo_.find(id);
        if (it != memo_.end()) return it->second;
        const auto& n = store_->node(id);
        std::size_t out;
        switch (n.kind) {
        case PlaneStore::Kind::BasePoint: out = base_images_[id - 2]; break;
        case PlaneStore::Kind::Join: out = store_->op_join(apply(n.a), apply(n.b)); break;
        case PlaneStore::Kind::Meet: out = store_->op_meet(apply(n.a), apply(n.b)); break;
        default: out = id; break;
        }
        memo_[id] = out;
        return out;
    }

private:
    std::shared_ptr<PlaneStore> store_;
    std::array<std::size_t, 4> base_images_;
    std::unordered_map<std::size_t, std::size_t> memo_;
};

class FreePlaneStructure : public Structure {
public:
    FreePlaneStructure()
        : store_(std::make_shared<PlaneStore>()), presentation_(make_presentation()) {
        for (std::size_t i = 0; i < 4; ++i)
            generators_.push_back(id_of(store_->base_point(i)));
    }

    PlaneStore& store() const { return *store_; }
    std::shared_ptr<PlaneStore> store_ptr() const { return store_; }

    const Signature& signature() const override { return plane_signature(); }
    const Presentation& presentation() const override { return presentation_; }
    const Tuple& generators() const override { return generators_; }

    ElementId constant(const std::string& name) const override {
        if (name == "0") return id_of(PlaneStore::bottom);
        if (name == "1") return id_of(PlaneStore::top);
        throw domain_error("unknown constant: " + name);
    }

    ElementId apply(const std::string& fn, std::span<const ElementId> args) const override {
        std::size_t x = resolve(args[0]), y = resolve(args[1]);
        if (fn == "join") return id_of(store_->op_join(x, y));
        if (fn == "meet") return id_of(store_->op_meet(x, y));
        throw domain_error("unknown function: " + fn);
    }

    bool relation(const std::string& rel, std::span<const ElementId> args) const override {
        if (rel == "S1") return store_->is_point(resolve(args[0]));
        if (rel == "S2") return store_->is_line(resolve(args[0]));
        if (rel == "I") {
            return store_->incident(resolve(args[0]), resolve(args[1]));
        }
        throw domain_error("unknown relation: " + rel);
    }

    // Length for the plane is the stage.
    std::size_t length(const ElementId& e) const override { return store_->stage(resolve(e)); }

    TermPtr express(const ElementId& e) const override { return express_id(resolve(e)); }

    std::vector<ElementId> enumerate(std::size_t max_length, std::size_t cap) const override {
        store_->materialize(max_length, cap);
        std::vector<ElementId> out;
        for (std::size_t id = 0; id < store_->size(); ++id) {
            if (store_->stage(id) <= max_length) {
                out.push_back(id_of(id));
                if (out.size() > cap) throw budget_error("plane ball cap exceeded");
            }
        }
        std::sort(out.begin(), out.end(), [this](const ElementId& a, const ElementId& b) {
            std::size_t la = length(a), lb = length(b);
            return la != lb ? la < lb : a.bytes < b.bytes;
        });
        return out;
    }

    ElementId apply_map(const ElementId& e, std::span<const ElementId> images) const override {
        std::array<std::size_t, 4> base{};
        for (std::size_t i = 0; i < 4; ++i) base[i] = resolve(images[i]);
        Collineation c(store_, base);
        return id_of(c.apply(resolve(e)));
    }

    // Infix element syntax: A1, A2, B1, B2, 0, 1, "v" for join, "^" for
    // meet, parentheses; operators associate left.
    ElementId parse_element(const std::string& text) const override {
        std::size_t pos = 0;
        std::size_t id = parse_expr(text, pos);
        skip_ws(text, pos);
        if (pos != text.size()) throw parse_error(pos, "trailing input in plane expression");
        return id_of(id);
    }

    std::string config_json() const override {
        nlohmann::json j;
        j["type"] = "free_plane_4";
        return j.dump();
    }

    // The finite relator set for the lattice language is not pinned down
    // anywhere usable, so psi is the point predicates plus distinctness;
    // degenerate quadruples then land in X_* through the orbit search.
    std::string psi_convention() const override {
        return "point-predicates-plus-distinctness";
    }

    // census of the materialized construction
    struct StageCensus {
        std::size_t stage;
        std::size_t new_points;
        std::size_t new_lines;
    };

    std::vector<StageCensus> census(std::size_t max_stage) const {
        store_->materialize(max_stage);
        std::vector<StageCensus> out(max_stage + 1);
        for (std::size_t s = 0; s <= max_stage; ++s) out[s].stage = s;
        for (std::size_t id = 0; id < store_->size(); ++id) {
            if (id == PlaneStore::bottom || id == PlaneStore::top) continue;
            std::size_t s = store_->stage(id);
            if (s > max_stage) continue;
            if (store_->is_point(id)) out[s].new_points++;
            else out[s].new_lines++;
        }
        return out;
    }

    std::size_t resolve(const ElementId& e) const { return store_->lookup(e.bytes); }
    ElementId id_of(std::size_t id) const { return {store_->node(id).bytes}; }

private:
    TermPtr express_id(std::size_t id) const {
        const auto& n = store_->node(id);
        switch (n.kind) {
        case PlaneStore::Kind::Bottom: return Term::constant("0");
        case PlaneStore::Kind::Top: return Term::constant("1");
        case PlaneStore::Kind::BasePoint: return Term::variable(id - 1); // ids 2..5 -> x1..x4
        case PlaneStore::Kind::Join:
            return Term::apply("join", {express_id(n.a), express_id(n.b)});
        case PlaneStore::Kind::Meet:
            return Term::apply("meet", {express_id(n.a), express_id(n.b)});
        }
        throw domain_error("bad plane node");
    }

    static void skip_ws(const std::string& s, std::size_t& pos) {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    std::size_t parse_expr(const std::string& s, std::size_t& pos) const {
        std::size_t acc = parse_primary(s, pos);
        for (;;) {
            skip_ws(s, pos);
            if (pos >= s.size()) return acc;
            char op = s[pos];
            if (op != 'v' && op != '^') return acc;
            ++pos;
            std::size_t rhs = parse_primary(s, pos);
            acc = op == 'v' ? store_->op_join(acc, rhs) : store_->op_meet(acc, rhs);
        }
    }

    std::size_t parse_primary(const std::string& s, std::size_t& pos) const {
        skip_ws(s, pos);
        if (pos >= s.size()) throw parse_error(pos, "unexpected end of plane expression");
        if (s[pos] == '(') {
            ++pos;
            std::size_t id = parse_expr(s, pos);
            skip_ws(s, pos);
            if (pos >= s.size() || s[pos] != ')') throw parse_error(pos, "expected ')'");
            ++pos;
            return id;
        }
        if (s[pos] == '0') { ++pos; return PlaneStore::bottom; }
        if (s[pos] == '1') { ++pos; return PlaneStore::top; }
        if ((s[pos] == 'A' || s[pos] == 'B') && pos + 1 < s.size() &&
            (s[pos + 1] == '1' || s[pos + 1] == '2')) {
            std::size_t base = (s[pos] == 'A' ? 0 : 2) + (s[pos + 1] == '1' ? 0 : 1);
            pos += 2;
            return store_->base_point(base);
        }
        throw parse_error(pos, "expected plane element");
    }

    static Presentation make_presentation() {
        std::vector<AtomicFormula> relators;
        for (std::size_t i = 1; i <= 4; ++i)
            relators.push_back(AtomicFormula::relation("S1", {Term::variable(i)}));
        return Presentation(plane_signature(), 4, std::move(relators));
    }

    std::shared_ptr<PlaneStore> store_;
    Presentation presentation_;
    Tuple generators_;
};

// The diagonal points of the base quadrangle used by the phi collineation:
// a1 = (A1 v A2) ^ (B1 v B2) and a2 = (A1 v B2) ^ (A2 v B1). The second is
// the diagonal point that keeps (A1, a1, B1, a2) a quadrangle and makes phi
// an involution.
inline std::pair<ElementId, ElementId> plane_diagonal_points(const FreePlaneStructure& s) {
    ElementId a1 = s.parse_element("(A1 v A2) ^ (B1 v B2)");
    ElementId a2 = s.parse_element("(A1 v B2) ^ (A2 v B1)");
    return {a1, a2};
}

// X = {theta1, theta2, phi} of Sandler's generation theorem, with
// F(m1..m4) = sum 2(m_i + 1). theta1 swaps A1 and A2, theta2 is the 4-cycle
// A1 -> A2 -> B1 -> B2 -> A1 (together they give all 24 permutations of the
// base points), and phi fixes A1, B1 while swapping A2, B2 with the two
// diagonal points.
inline AutPresentation plane_aut_presentation(const FreePlaneStructure& s) {
    const Tuple& g = s.generators();
    AutPresentation ap;

    AutomorphismSpec t1;
    t1.name = "theta1";
    t1.images = {g[1], g[0], g[2], g[3]};
    t1.inverse_images = t1.images;
    ap.gens.push_back(t1);

    AutomorphismSpec t2;
    t2.name = "theta2";
    t2.images = {g[1], g[2], g[3], g[0]};
    t2.inverse_images = {g[3], g[0], g[1], g[2]};
    ap.gens.push_back(t2);

    auto [a1, a2] = plane_diagonal_points(s);
    AutomorphismSpec phi;
    phi.name = "phi";
    phi.images = {g[0], a1, g[2], a2};
    phi.inverse_images = phi.images; // phi^2 = id
    ap.gens.push_back(phi);

    ap.c0 = 8;
    ap.coeffs.assign(4, 2);
    return ap;
}

} // namespace scott
