// scottwb: batch front end for the Scott-sentence workbench.
//
// Subcommands:
//   wp       word problem: normal form + geodesic length
//   orbit    orbit membership of a generator tuple, with witness word
//   theta    emit a materialized prefix of the Pi_1 orbit formula
//   scott    emit the assembled d-Sigma_2 Scott sentence document
//   check    check a theta document against a structure at a tuple
//   plane    free-plane queries: stage, incidence, census
//   selftest oracle-equivalence suites (seeded)
//
// Exit codes: 0 success, 1 domain error / budget exhaustion, 2 usage error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <string>

#include "scott/config.hpp"
#include "scott/scott_sentence.hpp"
#include "scott/wp_oracle.hpp"

using namespace scott;

namespace {

nlohmann::json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw domain_error("cannot open config: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw domain_error("config parse failure: " + path + ": " + e.what());
    }
    return j;
}

void write_artifact(const std::string& out_path, const nlohmann::json& doc) {
    std::string bytes = doc.dump() + "\n";
    if (out_path.empty() || out_path == "-") {
        std::cout << bytes;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw domain_error("cannot open output: " + out_path);
    out << bytes;
}

int run_wp(const std::string& config_path, const std::string& word) {
    auto config = load_config(config_path);
    auto s = make_structure(config);
    ElementId e = s->parse_element(word);
    std::cout << s->display(e) << ", length " << s->length(e) << "\n";
    return 0;
}

int run_orbit(const std::string& config_path, const std::string& tuple_text,
              std::size_t state_cap) {
    auto config = load_config(config_path);
    auto s = make_structure(config);
    AutPresentation ap = make_aut_presentation(*s, config);
    OrbitEngine engine(*s, ap, state_cap);
    Tuple t = parse_tuple(*s, tuple_text);
    OrbitVerdict v = engine.orbit_decide(t);
    if (v.in_orbit)
        std::cout << "IN-ORBIT witness=[" << word_to_string(ap, v.witness) << "]\n";
    else
        std::cout << "NOT-IN-ORBIT bound=" << v.bound_used << "\n";
    return 0;
}

int run_theta(const std::string& config_path, std::size_t conjuncts, std::size_t max_len,
              std::uint64_t cursor, const std::string& out_path) {
    auto config = load_config(config_path);
    auto s = make_structure(config);
    AutPresentation ap = make_aut_presentation(*s, config);
    OrbitEngine engine(*s, ap);
    ThetaOptions opts;
    opts.max_element_length = max_len;
    opts.start_cursor = cursor;
    ThetaPrefix theta = build_theta(*s, engine, conjuncts, opts);
    write_artifact(out_path, theta_to_json(theta));
    return 0;
}

int run_scott(const std::string& config_path, std::size_t conjuncts, std::size_t max_len,
              std::size_t term_prefix, const std::string& out_path) {
    auto config = load_config(config_path);
    auto s = make_structure(config);
    AutPresentation ap = make_aut_presentation(*s, config);
    OrbitEngine engine(*s, ap);
    ThetaOptions opts;
    opts.max_element_length = max_len;
    ThetaPrefix theta = build_theta(*s, engine, conjuncts, opts);
    ScottSentence sentence = assemble_scott(*s, theta, term_prefix);
    write_artifact(out_path, scott_to_json(theta, sentence));
    return 0;
}

int run_check(const std::string& config_path, const std::string& theta_path,
              const std::string& tuple_text, std::size_t depth, bool exact) {
    auto config = load_config(config_path);
    auto s = make_structure(config);
    std::ifstream in(theta_path);
    if (!in) throw domain_error("cannot open theta document: " + theta_path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw domain_error(std::string("malformed theta document: ") + e.what());
    }
    ThetaPrefix theta = theta_from_json(doc);
    Tuple t = parse_tuple(*s, tuple_text);
    Verdict v = exact ? eval_on_finite(theta, *s, t) : check_bounded(theta, *s, t, depth);
    std::cout << verdict_to_string(*s, v) << "\n";
    return 0;
}

int run_plane(const std::string& query) {
    FreePlaneStructure pi4;
    auto open = query.find('(');
    if (open == std::string::npos || query.back() != ')')
        throw domain_error("plane query must be stage(...), incident(..., ...) or census(k)");
    std::string op = query.substr(0, open);
    std::string args = query.substr(open + 1, query.size() - open - 2);
    if (op == "stage") {
        std::cout << pi4.length(pi4.parse_element(args)) << "\n";
        return 0;
    }
    if (op == "incident") {
        auto parts = split_tuple_text(args);
        if (parts.size() != 2) throw domain_error("incident takes two elements");
        ElementId a = pi4.parse_element(parts[0]);
        ElementId b = pi4.parse_element(parts[1]);
        bool inc = pi4.relation("I", std::vector<ElementId>{a, b});
        std::cout << (inc ? "true" : "false") << "\n";
        return 0;
    }
    if (op == "census") {
        std::size_t k = std::stoul(args);
        auto census = pi4.census(k);
        std::size_t points = 0, lines = 0;
        for (const auto& c : census) {
            points += c.new_points;
            lines += c.new_lines;
            std::cout << "stage " << c.stage << ": +" << c.new_points << " points, +"
                      << c.new_lines << " lines (cumulative " << points << " points, " << lines
                      << " lines)\n";
        }
        return 0;
    }
    throw domain_error("unknown plane query: " + op);
}

// Compact oracle-equivalence suites; the full versions live in the test
// suite, this entry point is for quick field runs.
int run_selftest(unsigned seed, std::size_t word_len) {
    std::mt19937 rng(seed);
    int failures = 0;
    auto report = [&failures](const std::string& name, bool ok) {
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << "\n";
        if (!ok) failures++;
    };

    {
        // word problem vs closure oracle on D-infinity and the a-b path
        bool ok = true;
        for (int graph_case = 0; graph_case < 2 && ok; ++graph_case) {
            GPGraph g = graph_case == 0
                            ? GPGraph({{"a", 2}, {"b", 2}}, {})
                            : GPGraph({{"a", 2}, {"b", 2}, {"c", 2}}, {{"a", "b"}, {"b", "c"}});
            GPStructure s{GPGraph(g)};
            std::uniform_int_distribution<std::size_t> pick(0, s.graph().size() - 1);
            for (int trial = 0; trial < 200 && ok; ++trial) {
                std::vector<std::pair<std::size_t, long long>> w1, w2;
                for (std::size_t i = 0; i < word_len; ++i) w1.emplace_back(pick(rng), 1);
                for (std::size_t i = 0; i < word_len; ++i) w2.emplace_back(pick(rng), 1);
                bool nf = s.encode(normal_form(s.graph(), w1)) == s.encode(normal_form(s.graph(), w2));
                bool oracle = wp_oracle::equal(s.graph(), w1, w2);
                if (nf != oracle) ok = false;
            }
        }
        report("word problem agrees with closure oracle (400 random pairs)", ok);
    }
    {
        // Z^2: orbit_decide vs det_oracle on random small pairs
        FreeAbelianStructure z2(2);
        OrbitEngine engine(z2, abelian_aut_presentation(z2));
        std::uniform_int_distribution<long long> coord(-2, 2);
        bool ok = true;
        for (int trial = 0; trial < 60 && ok; ++trial) {
            IntVector u{coord(rng), coord(rng)}, v{coord(rng), coord(rng)};
            Tuple t{z2.encode(u), z2.encode(v)};
            if (!satisfies_psi(z2, t)) continue;
            if (engine.orbit_decide(t).in_orbit != det_oracle({u, v})) ok = false;
        }
        report("Z^2 orbit search agrees with determinant oracle", ok);
    }
    {
        // F_2: orbit_decide vs nielsen_oracle on random short pairs
        FreeGroupStructure f2(2);
        OrbitEngine engine(f2, nielsen_aut_presentation(f2));
        auto ball = f2.enumerate(3, 10000);
        std::uniform_int_distribution<std::size_t> pick(0, ball.size() - 1);
        bool ok = true;
        for (int trial = 0; trial < 60 && ok; ++trial) {
            Tuple t{ball[pick(rng)], ball[pick(rng)]};
            if (!satisfies_psi(f2, t)) continue;
            if (engine.orbit_decide(t).in_orbit != nielsen_oracle(f2, t)) ok = false;
        }
        report("F_2 orbit search agrees with Nielsen oracle", ok);
    }
    {
        // plane sanity: census and phi^2
        FreePlaneStructure pi4;
        auto census = pi4.census(3);
        bool ok = census[0].new_points == 4 && census[1].new_lines == 6 &&
                  census[2].new_points == 3 && census[3].new_lines == 3;
        AutPresentation ap = plane_aut_presentation(pi4);
        for (const auto& e : pi4.enumerate(2, 10000)) {
            auto once = pi4.apply_map(e, ap.gens[2].images);
            if (pi4.apply_map(once, ap.gens[2].images) != e) ok = false;
        }
        report("free plane census and phi involution", ok);
    }
    std::cout << (failures == 0 ? "selftest: all suites passed\n"
                                : "selftest: FAILURES PRESENT\n");
    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Scott-sentence workbench for quasi-Hopfian finitely presented structures"};
    app.require_subcommand(1);
    std::size_t jobs = 1;
    app.add_option("--jobs", jobs, "worker count (outputs are worker-count independent)");

    std::string config_path, word, tuple_text, out_path, theta_path, query;
    std::size_t conjuncts = 32, max_len = 12, depth = 6, term_prefix = 16;
    std::size_t state_cap = 5000000, word_len = 6;
    std::uint64_t cursor = 0;
    unsigned seed = 1;
    bool exact = false;

    auto* wp = app.add_subcommand("wp", "normal form and length of a word");
    wp->add_option("--structure", config_path, "structure config path")->required();
    wp->add_option("--word", word, "word to normalize")->required();

    auto* orbit = app.add_subcommand("orbit", "decide orbit membership of a tuple");
    orbit->add_option("--structure", config_path)->required();
    orbit->add_option("--tuple", tuple_text, "comma-separated elements")->required();
    orbit->add_option("--state-cap", state_cap, "search state budget");

    auto* theta = app.add_subcommand("theta", "emit a Theta prefix document");
    theta->add_option("--structure", config_path)->required();
    theta->add_option("--conjuncts", conjuncts, "number of conjuncts to materialize");
    theta->add_option("--max-element-length", max_len, "X_* stream length budget");
    theta->add_option("--cursor", cursor, "resume the stream from this cursor");
    theta->add_option("--out", out_path, "output path ('-' for stdout)");

    auto* sc = app.add_subcommand("scott", "emit the d-Sigma_2 Scott sentence document");
    sc->add_option("--structure", config_path)->required();
    sc->add_option("--conjuncts", conjuncts);
    sc->add_option("--max-element-length", max_len);
    sc->add_option("--term-prefix", term_prefix, "materialized term-tuple disjuncts");
    sc->add_option("--out", out_path);

    auto* check = app.add_subcommand("check", "check a Theta document at a tuple");
    check->add_option("--structure", config_path, "target structure config")->required();
    check->add_option("--theta", theta_path, "theta document path")->required();
    check->add_option("--tuple", tuple_text)->required();
    check->add_option("--depth", depth, "quantifier depth bound");
    check->add_flag("--exact", exact, "exact evaluation (finite targets only)");

    auto* plane = app.add_subcommand("plane", "free plane queries");
    plane->add_option("--query", query, "stage(e) | incident(e1, e2) | census(k)")->required();

    auto* selftest = app.add_subcommand("selftest", "run the oracle-equivalence suites");
    selftest->add_option("--seed", seed, "fuzz seed");
    selftest->add_option("--word-length", word_len, "fuzz word length");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*wp) return run_wp(config_path, word);
        if (*orbit) return run_orbit(config_path, tuple_text, state_cap);
        if (*theta) return run_theta(config_path, conjuncts, max_len, cursor, out_path);
        if (*sc) return run_scott(config_path, conjuncts, max_len, term_prefix, out_path);
        if (*check) return run_check(config_path, theta_path, tuple_text, depth, exact);
        if (*plane) return run_plane(query);
        if (*selftest) return run_selftest(seed, word_len);
    } catch (const budget_error& e) {
        std::cerr << "budget exhausted: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
