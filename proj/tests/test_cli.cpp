#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "covermeans/cover.hpp"
#include "covermeans/generate.hpp"

using namespace covermeans;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

fs::path scratch() {
    static fs::path dir = [] {
        auto p = fs::temp_directory_path() / "covermeans-cli-test";
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

RunResult run(const std::string& args, const std::string& env = "") {
    auto out_file = scratch() / "stdout.txt";
    std::string cmd = env + (env.empty() ? "" : " ") + CLI_BIN + " " + args + " > " +
                      out_file.string() + " 2> " + (scratch() / "stderr.txt").string();
    int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream f(out_file);
    std::stringstream buf;
    buf << f.rdbuf();
    r.out = buf.str();
    return r;
}

std::string write_file(const std::string& name, const std::string& content) {
    auto p = scratch() / name;
    std::ofstream f(p);
    f << content;
    return p.string();
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

// Shallow schema conformance: every required property exists with the
// declared primitive type.
void check_against_schema(const nlohmann::json& doc, const fs::path& schema_path) {
    auto schema = nlohmann::json::parse(slurp(schema_path));
    for (const auto& req : schema.at("required")) {
        auto key = req.get<std::string>();
        REQUIRE_MESSAGE(doc.contains(key), "missing key: " << key);
        auto type = schema.at("properties").at(key).at("type").get<std::string>();
        const auto& v = doc.at(key);
        if (type == "number") CHECK(v.is_number());
        if (type == "integer") CHECK(v.is_number_integer());
        if (type == "boolean") CHECK(v.is_boolean());
        if (type == "string") CHECK(v.is_string());
        if (type == "array") CHECK(v.is_array());
    }
}

fs::path repo_docs() {
    return fs::path(CLI_BIN).parent_path().parent_path() / "docs" / "schemas";
}

}  // namespace

TEST_CASE("generate emits edge lists and rejects unknown names") {
    auto r = run("generate --name complete:4");
    CHECK(r.exit_code == 0);
    CHECK(r.out == to_edge_list(complete(4)));
    CHECK(run("generate --name frobnicate").exit_code == 2);
}

TEST_CASE("region counts as CSV, sphere on K4") {
    auto r = run("region --graph complete:4 --type sphere --base 0 --r 3");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "id,count\n0,6\n1,2\n2,2\n3,2\n");
}

TEST_CASE("region with a tube X file and a horocycle ray file") {
    auto g = cycle(6);
    auto xfile = write_file("x.txt", "0\n0 1\n");
    auto rx = run("region --graph cycle:6 --type tube --base " + xfile + " --r 2");
    CHECK(rx.exit_code == 0);
    CoverPath root{0, {}};
    CoverPath child{0, {[&] {
                        for (int d : g.out[0])
                            if (g.head(d) == 1) return d;
                        return -1;
                    }()}};
    auto expected = tube_counts(g, {root, child}, 2);
    std::ostringstream os;
    os << "id,count\n";
    for (size_t i = 0; i < expected.size(); ++i) os << i << ',' << expected[i] << '\n';
    CHECK(rx.out == os.str());

    auto rayfile = write_file("ray.txt", "cycle 0 1 2 3 4 5\n");
    auto rh = run("region --graph cycle:6 --type horocycle --base " + rayfile + " --r 1");
    CHECK(rh.exit_code == 0);
    auto hc = horocycle_counts(g, RaySpec{{}, {0, 1, 2, 3, 4, 5}}, 1);
    std::ostringstream hs;
    hs << "id,count\n";
    for (size_t i = 0; i < hc.size(); ++i) hs << i << ',' << hc[i] << '\n';
    CHECK(rh.out == hs.str());
}

TEST_CASE("mean reproduces the alternating K23 series exactly") {
    std::string fn = write_file("fig2.csv", "0,1\n1,1\n2,1\n3,-1\n4,-1\n5,-1\n");
    auto r = run("mean --graph complete-bipartite:2,3 --function " + fn +
                 " --on edges --type sphere --base 0 --rmax 5 --exact");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "r,mean,abs_error\n0,1,1\n1,-1,1\n2,-1,1\n3,1,1\n4,1,1\n5,-1,1\n");
}

TEST_CASE("mean accepts a header row and validates coverage") {
    std::string fn = write_file("f4.csv", "id,value\n0,1\n1,0\n2,0\n3,0\n");
    auto r = run("mean --graph complete:4 --function " + fn + " --type sphere --base 0 --rmax 2");
    CHECK(r.exit_code == 0);
    CHECK(r.out.substr(0, 18) == "r,mean,abs_error\n0");
    std::string missing = write_file("fbad.csv", "0,1\n1,0\n2,0\n");
    CHECK(run("mean --graph complete:4 --function " + missing + " --type sphere --base 0")
              .exit_code == 2);
}

TEST_CASE("spectrum JSON matches the shipped schema") {
    auto r = run("spectrum --graph petersen --operator vertex");
    CHECK(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.out);
    check_against_schema(j, repo_docs() / "spectrum.schema.json");
    CHECK(j["operator"] == "vertex");
    CHECK(j["beta"].get<double>() == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(j["ramanujan"] == true);
    CHECK(j["eigenvalues"].size() == 10);

    auto e = run("spectrum --graph complete-bipartite:3,4 --operator edge");
    CHECK(e.exit_code == 0);
    auto je = nlohmann::json::parse(e.out);
    check_against_schema(je, repo_docs() / "spectrum.schema.json");
    REQUIRE(je.contains("forbidden_interval"));
    CHECK(je["forbidden_interval"][0].get<double>() == doctest::Approx(0.2));
}

TEST_CASE("verify JSON matches the shipped schema and sets the exit code") {
    auto r = run("verify --graph petersen --theorem 1 --trials 3 --seed 5");
    CHECK(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.out);
    check_against_schema(j, repo_docs() / "verify.schema.json");
    CHECK(j["pass"] == true);
    CHECK(j["theorem"] == 1);
    CHECK(j["seed"] == 5);
    CHECK(j["c_per_base"].size() == 10);
}

TEST_CASE("identical configs produce byte-identical reports") {
    auto a = run("verify --graph complete:4 --theorem 2 --trials 3 --seed 9");
    auto b = run("verify --graph complete:4 --theorem 2 --trials 3 --seed 9");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    auto c = run("verify --graph complete:4 --theorem 2 --trials 3 --seed 10");
    CHECK(a.out != c.out);
}

TEST_CASE("gprime emits the squared graph as an edge list") {
    auto r = run("gprime --graph cycle:6 --part 1");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("0 1\n1 2\n2 0\n") != std::string::npos);
    CHECK(run("gprime --graph complete:4 --part 1").exit_code == 2);  // not bipartite
}

TEST_CASE("usage errors exit with 2") {
    CHECK(run("").exit_code == 2);
    CHECK(run("mean --graph missing.txt --function also-missing.csv").exit_code == 2);
    CHECK(run("region --graph complete:4 --type nonsense").exit_code == 2);
    CHECK(run("verify --graph complete:4 --theorem 7").exit_code == 2);
    CHECK(run("verify --graph cycle:6 --theorem 1 --trials 2").exit_code == 2);  // bipartite
}

TEST_CASE("COVERMEANS_OUT anchors relative output paths") {
    auto dir = scratch() / "outdir";
    fs::remove_all(dir);
    auto r = run("generate --name petersen --out sub/p.txt",
                 "COVERMEANS_OUT=" + dir.string());
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(dir / "sub" / "p.txt"));
    CHECK(slurp(dir / "sub" / "p.txt") == to_edge_list(petersen()));
}
