#pragma once

#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include <json.hpp>

#include "scott/error.hpp"
#include "scott/free_abelian.hpp"
#include "scott/free_group.hpp"
#include "scott/free_plane.hpp"
#include "scott/graph_product.hpp"
#include "scott/orbit.hpp"
#include "scott/structure.hpp"

namespace scott {

inline std::unique_ptr<Structure> make_structure(const nlohmann::json& config) {
    const std::string type = config.at("type").get<std::string>();
    if (type == "graph_product") {
        std::vector<GPGraph::Vertex> vertices;
        for (const auto& v : config.at("vertices"))
            vertices.push_back({v.at("name").get<std::string>(), v.at("order").get<unsigned>()});
        std::vector<std::pair<std::string, std::string>> edges;
        if (config.contains("edges"))
            for (const auto& e : config.at("edges"))
                edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
        return std::make_unique<GPStructure>(GPGraph(std::move(vertices), edges));
    }
    if (type == "free_abelian")
        return std::make_unique<FreeAbelianStructure>(config.at("rank").get<std::size_t>());
    if (type == "free_group")
        return std::make_unique<FreeGroupStructure>(config.at("rank").get<std::size_t>());
    if (type == "free_plane_4") return std::make_unique<FreePlaneStructure>();
    throw domain_error("unknown structure type: " + type);
}

inline std::unique_ptr<Structure> make_structure_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw domain_error("cannot open config: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw domain_error("config parse failure: " + path + ": " + e.what());
    }
    return make_structure(j);
}

// The automorphism presentation that realizes condition (*) for each
// structure family. A config may instead supply coset representatives of the
// inner automorphisms via {"aut": {"kind": "inner_plus_reps", "reps": [...]}}
// with each rep given by name, images and inverse_images as element words.
inline AutPresentation make_aut_presentation(const Structure& s, const nlohmann::json& config) {
    if (config.contains("aut")) {
        const auto& aut = config.at("aut");
        if (aut.at("kind").get<std::string>() != "inner_plus_reps")
            throw domain_error("unknown aut kind");
        std::vector<AutomorphismSpec> reps;
        for (const auto& r : aut.at("reps")) {
            AutomorphismSpec spec;
            spec.name = r.at("name").get<std::string>();
            for (const auto& w : r.at("images"))
                spec.images.push_back(s.parse_element(w.get<std::string>()));
            for (const auto& w : r.at("inverse_images"))
                spec.inverse_images.push_back(s.parse_element(w.get<std::string>()));
            reps.push_back(std::move(spec));
        }
        return make_inner_plus_finite(s, reps);
    }
    const std::string type = config.at("type").get<std::string>();
    if (type == "graph_product")
        return gp_aut_presentation(dynamic_cast<const GPStructure&>(s));
    if (type == "free_abelian")
        return abelian_aut_presentation(dynamic_cast<const FreeAbelianStructure&>(s));
    if (type == "free_group")
        return nielsen_aut_presentation(dynamic_cast<const FreeGroupStructure&>(s));
    if (type == "free_plane_4")
        return plane_aut_presentation(dynamic_cast<const FreePlaneStructure&>(s));
    throw domain_error("no automorphism presentation for type: " + type);
}

// Splits "a, a b a" into element expressions at top-level commas (commas
// inside parentheses belong to vector literals).
inline std::vector<std::string> split_tuple_text(const std::string& text) {
    std::vector<std::string> parts;
    std::string cur;
    int depth = 0;
    for (char c : text) {
        if (c == '(') depth++;
        if (c == ')') depth--;
        if (c == ',' && depth == 0) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    return parts;
}

inline Tuple parse_tuple(const Structure& s, const std::string& text) {
    Tuple t;
    for (const auto& part : split_tuple_text(text)) t.push_back(s.parse_element(part));
    return t;
}

} // namespace scott
