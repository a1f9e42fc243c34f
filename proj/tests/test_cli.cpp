#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <json.hpp>

#ifndef SCOTTWB_BIN
#error "SCOTTWB_BIN must point at the CLI binary"
#endif

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run(const std::string& args) {
    std::string cmd = std::string(SCOTTWB_BIN) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf{};
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (fgets(buf.data(), buf.size(), pipe)) out += buf.data();
    int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

std::string write_config(const std::string& name, const std::string& body) {
    std::string path = std::string("/tmp/scottwb_test_") + name + ".json";
    std::ofstream f(path);
    f << body;
    return path;
}

const std::string dinf_config = R"({"type":"graph_product",
  "vertices":[{"name":"a","order":2},{"name":"b","order":2}], "edges":[]})";
const std::string v4_config = R"({"type":"graph_product",
  "vertices":[{"name":"a","order":2},{"name":"b","order":2}], "edges":[["a","b"]]})";

} // namespace

TEST_CASE("cli wp") {
    std::string cfg = write_config("dinf", dinf_config);
    auto r = run("wp --structure " + cfg + " --word \"b a b b b\"");
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.out == "b a b, length 3\n");
    auto empty = run("wp --structure " + cfg + " --word \"\"");
    REQUIRE(empty.exit_code == 0);
    REQUIRE(empty.out == "e, length 0\n");
}

TEST_CASE("cli orbit") {
    std::string cfg = write_config("dinf", dinf_config);
    auto r = run("orbit --structure " + cfg + " --tuple \"a, a b a\"");
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.out == "IN-ORBIT witness=[pc_a_b]\n");
    auto n = run("orbit --structure " + cfg + " --tuple \"a b a, b a b\"");
    REQUIRE(n.exit_code == 0);
    REQUIRE(n.out == "NOT-IN-ORBIT bound=7\n");
}

TEST_CASE("cli theta artifacts are deterministic and carry the config hash") {
    std::string cfg = write_config("dinf", dinf_config);
    auto r1 = run("theta --structure " + cfg + " --conjuncts 6 --max-element-length 6 --out -");
    auto r2 = run("theta --structure " + cfg + " --conjuncts 6 --max-element-length 6 --out -");
    REQUIRE(r1.exit_code == 0);
    REQUIRE(r1.out == r2.out); // byte-identical across runs
    auto doc = nlohmann::json::parse(r1.out);
    REQUIRE(doc.at("conjuncts").size() == 6);
    REQUIRE(doc.at("metadata").contains("structure_config_hash"));
    // the hash matches an independently computed FNV of the config body
    auto r3 = run("theta --structure " + cfg + " --conjuncts 2 --max-element-length 6 --out -");
    auto doc3 = nlohmann::json::parse(r3.out);
    REQUIRE(doc3.at("metadata").at("structure_config_hash") ==
            doc.at("metadata").at("structure_config_hash"));
}

TEST_CASE("cli check against the Klein quotient") {
    std::string dinf = write_config("dinf", dinf_config);
    std::string v4 = write_config("v4", v4_config);
    std::string theta_path = "/tmp/scottwb_test_theta.json";
    auto e = run("theta --structure " + dinf +
                 " --conjuncts 16 --max-element-length 8 --out " + theta_path);
    REQUIRE(e.exit_code == 0);
    auto r = run("check --structure " + v4 + " --theta " + theta_path +
                 " --tuple \"a, b\" --exact");
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.out == "REFUTED conjunct=10 witness=(b, a)\n");
    auto h = run("check --structure " + dinf + " --theta " + theta_path +
                 " --tuple \"a, b\" --depth 5");
    REQUIRE(h.out == "HOLDS-SO-FAR depth=5\n");
}

TEST_CASE("cli scott document") {
    std::string cfg = write_config("dinf", dinf_config);
    auto r = run("scott --structure " + cfg +
                 " --conjuncts 4 --max-element-length 6 --term-prefix 8 --out -");
    REQUIRE(r.exit_code == 0);
    auto doc = nlohmann::json::parse(r.out);
    REQUIRE(doc.at("classification").at("sigma2_part") == "Sigma2");
    REQUIRE(doc.at("classification").at("pi2_part") == "Pi2");
    REQUIRE(doc.at("classification").at("whole_d_sigma2") == true);
}

TEST_CASE("cli plane queries") {
    auto r = run("plane --query \"stage((A1 v A2) ^ (B1 v B2))\"");
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.out == "2\n");
    auto i = run("plane --query \"incident(A1, A1 v A2)\"");
    REQUIRE(i.out == "true\n");
    auto c = run("plane --query \"census(2)\"");
    REQUIRE(c.out.find("stage 2: +3 points") != std::string::npos);
}

TEST_CASE("cli exit codes") {
    auto usage = run("frobnicate");
    REQUIRE(usage.exit_code == 2);
    std::string cfg = write_config("dinf", dinf_config);
    auto domain = run("wp --structure " + cfg + " --word \"z\"");
    REQUIRE(domain.exit_code == 1);
    auto missing = run("wp --structure /tmp/scottwb_no_such_config.json --word \"a\"");
    REQUIRE(missing.exit_code == 1);
}

TEST_CASE("cli orbit with user-supplied coset representatives") {
    std::string cfg = write_config("dinf_reps", R"({"type":"graph_product",
      "vertices":[{"name":"a","order":2},{"name":"b","order":2}], "edges":[],
      "aut":{"kind":"inner_plus_reps",
             "reps":[{"name":"id","images":["a","b"],"inverse_images":["a","b"]},
                     {"name":"swap","images":["b","a"],"inverse_images":["b","a"]}]}})");
    auto r = run("orbit --structure " + cfg + " --tuple \"a, a b a\"");
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.out == "IN-ORBIT witness=[conj_g1]\n");
    auto sw = run("orbit --structure " + cfg + " --tuple \"b, a\"");
    REQUIRE(sw.out == "IN-ORBIT witness=[swap]\n");
    auto n = run("orbit --structure " + cfg + " --tuple \"a b a, b a b\"");
    REQUIRE(n.out == "NOT-IN-ORBIT bound=7\n");
}

TEST_CASE("cli budget exhaustion is a distinct domain error") {
    std::string cfg = write_config("dinf", dinf_config);
    std::string cmd = std::string(SCOTTWB_BIN) + " orbit --structure " + cfg +
                      " --tuple \"a b a, b a b\" --state-cap 2 2>&1";
    std::array<char, 4096> buf{};
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (fgets(buf.data(), buf.size(), pipe)) out += buf.data();
    REQUIRE(WEXITSTATUS(pclose(pipe)) == 1);
    REQUIRE(out.find("budget exhausted") != std::string::npos);
}

TEST_CASE("cli selftest") {
    auto r = run("selftest --seed 7 --word-length 5");
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.out.find("all suites passed") != std::string::npos);
}
