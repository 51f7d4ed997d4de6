#include "doctest.h"

#include "csitdof/cli.hpp"
#include "csitdof/serialize.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace csitdof;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "csitdof");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("csitdof_cli_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string write(const std::string& name, const std::string& text) {
    const fs::path p = scratch() / name;
    std::ofstream(p) << text;
    return p.string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("outer-bound") {
    auto r = run({"outer-bound", "--k", "2", "--sym-p", "1/2", "--sym-d", "1/2", "--all"});
    REQUIRE(r.code == 0);
    Json j = parse_json(r.out);
    CHECK(j["rows"].size() == 5);
    CHECK(j["rows"][4]["coeffs"] == Json::array({"1/1", "1/1"}));
    CHECK(j["rows"][4]["rhs"] == "2/1");

    r = run({"outer-bound", "--k", "3", "--sym-p", "1", "--sym-d", "0"});
    j = parse_json(r.out);
    CHECK(j["rows"].size() == 3);
    for (const auto& row : j["rows"]) CHECK(row["rhs"] == "1/1");

    const std::string b = write("fig2b.txt", "PNN\nNPN\nNNP\n");
    r = run({"outer-bound", "--pattern", b, "--joint"});
    j = parse_json(r.out);
    int eight_thirds = 0;
    for (const auto& row : j["rows"]) eight_thirds += row["rhs"] == "8/3";
    CHECK(eight_thirds == 3);

    r = run({"outer-bound", "--k", "2", "--sym-p", "1/2", "--sym-d", "1/2", "--float"});
    CHECK(parse_json(r.out)["rows"][0].contains("rhs_float"));

    r = run({"outer-bound", "--k", "2", "--sym-p", "1/2", "--format", "csv"});
    CHECK(r.out.rfind("a1,a2,rhs,label\n", 0) == 0);
}

TEST_CASE("vertices") {
    auto r = run({"vertices", "--k", "2", "--sym-p", "0", "--sym-d", "1"});
    REQUIRE(r.code == 0);
    Json j = parse_json(r.out);
    CHECK(j.size() == 4);
    CHECK(j.dump().find(R"(["2/3","2/3"])") != std::string::npos);

    r = run({"vertices", "--k", "3", "--sym-p", "1/3", "--sym-d", "2/3"});
    CHECK(r.out.find("\"23/33\"") != std::string::npos);

    r = run({"vertices", "--k", "3", "--sym-p", "0", "--sym-d", "0"});
    CHECK(parse_json(r.out).size() == 4);

    const std::string out = (scratch() / "v.csv").string();
    r = run({"vertices", "--k", "2", "--sym-p", "1/3", "--sym-d", "1/3", "--format", "csv", "--out", out});
    CHECK(r.out.empty());
    CHECK(slurp(out) == "d1,d2\n0/1,0/1\n1/1,0/1\n1/1,1/3\n7/9,7/9\n1/3,1/1\n0/1,1/1\n");
}

TEST_CASE("synthesize") {
    const std::string prefix = (scratch() / "s99").string();
    auto r = run({"synthesize", "--k", "3", "--sym-p", "1/3", "--sym-d", "2/3", "--out", prefix});
    REQUIRE(r.code == 0);
    const Json j = parse_json(r.out);
    CHECK(j["period"] == 99);
    CHECK(j["dof"] == Json::array({"23/33", "23/33", "23/33"}));
    const std::string pattern = slurp(prefix + ".pattern.txt");
    CHECK(pattern.size() == 3 * 100);
    const Json sched = parse_json(slurp(prefix + ".schedule.json"));
    CHECK(sched["slots"].size() == 99);

    r = run({"simulate", "--pattern", prefix + ".pattern.txt", "--schedule", prefix + ".schedule.json", "--seed", "5"});
    CHECK(r.code == 0);
    CHECK(parse_json(r.out)["all_decodable"] == true);

    r = run({"synthesize", "--k", "3", "--sym-p", "1/3", "--sym-d", "0", "--subset", "2"});
    CHECK(parse_json(r.out)["dof"] == Json::array({"1/3", "1/1", "1/3"}));

    r = run({"synthesize", "--k", "3", "--sym-p", "0", "--sym-d", "1/3"});
    CHECK(r.code == 4);
    CHECK(r.err.find("lambda_N") != std::string::npos);
}

TEST_CASE("achievable") {
    const auto r = run({"achievable", "--k", "3", "--sym-p", "1/3", "--sym-d", "2/3"});
    REQUIRE(r.code == 0);
    const Json j = parse_json(r.out);
    CHECK(j["regime"] == "zf-mat");
    CHECK(j["corner_points"].size() == 7);
    CHECK(j["corner_points"][6]["dof"][0] == "23/33");
    CHECK(j["corner_points"][6]["synthesizable"] == true);
}

TEST_CASE("simulate from flags, determinism and seeds") {
    const auto a = run({"simulate", "--k", "3", "--sym-p", "1/3", "--sym-d", "2/3", "--seed", "9"});
    const auto b = run({"simulate", "--k", "3", "--sym-p", "1/3", "--sym-d", "2/3", "--seed", "9"});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);

    ::setenv("CSITDOF_SEED", "9", 1);
    const auto c = run({"simulate", "--k", "3", "--sym-p", "1/3", "--sym-d", "2/3"});
    CHECK(c.out == a.out);
    ::setenv("CSITDOF_SEED", "nine", 1);
    CHECK(run({"simulate", "--k", "3", "--sym-p", "1/3", "--sym-d", "2/3"}).code == 2);
    ::unsetenv("CSITDOF_SEED");
    CHECK(parse_json(run({"simulate", "--k", "2", "--sym-p", "1/2", "--sym-d", "1/2"}).out)["seed"] == 1);

    const std::string pat = write("a.txt", "PNN\nPNN\nPNN\n");
    const std::string sched = write("zf2.json", R"({"k":3,"slots":[{"type":"zf","serve":[1,2,3]},)"
                                                R"({"type":"zf","serve":[1,2,3]},{"type":"single","user":1}]})");
    const auto v = run({"simulate", "--pattern", pat, "--schedule", sched});
    CHECK(v.code == 1);
    CHECK(parse_json(v.out)["violation"]["slot"] == 1);
}

TEST_CASE("compare") {
    const std::string a = write("fig2a.txt", "PNN\nPNN\nPNN\n");
    const std::string b = write("fig2b.txt", "PNN\nNPN\nNNP\n");
    auto r = run({"compare", a, b});
    REQUIRE(r.code == 0);
    Json j = parse_json(r.out);
    CHECK(j["marginals_equal"] == true);
    CHECK(j["b_subset_a"] == true);
    CHECK(j["a_subset_b"] == false);
    CHECK(j["witness"]["point"] == Json::array({"1/1", "1/3", "1/3"}));

    j = parse_json(run({"compare", a, a}).out);
    CHECK(j["equal"] == true);
    CHECK(j["witness"].is_null());

    const std::string c = write("other.txt", "PPP\nNNN\nDDN\n");
    j = parse_json(run({"compare", a, c}).out);
    CHECK(j["marginals_equal"] == false);
    CHECK(j.contains("note"));
}

TEST_CASE("verify-lemmas") {
    const auto r = run({"verify-lemmas", "--cases", "100", "--seed", "2"});
    REQUIRE(r.code == 0);
    const Json j = parse_json(r.out);
    CHECK(j["cases"].get<int>() >= 200);
    CHECK(j["failures"].empty());
    CHECK(j["min_slack"].get<double>() >= -1e-9);
}

TEST_CASE("exit codes") {
    CHECK(run({}).code == 2);
    CHECK(run({"bogus"}).code == 2);
    CHECK(run({"outer-bound", "--k", "7", "--sym-p", "1/2"}).code == 3);
    CHECK(run({"outer-bound", "--k", "2", "--sym-p", "1/2x"}).code == 2);
    CHECK(run({"outer-bound", "--k", "2", "--sym-p", "2/3", "--sym-d", "2/3"}).code == 2);
    CHECK(run({"outer-bound", "--pattern", write("bad.txt", "PXN\n")}).code == 2);
    CHECK(run({"outer-bound", "--pattern", write("wide.txt", "P\nP\nP\nP\nP\nP\nP\n")}).code == 3);
    CHECK(run({"outer-bound", "--pattern", "/nonexistent/file"}).code == 2);
    CHECK(run({"outer-bound", "--k", "2"}).code == 2);
    CHECK(run({"outer-bound", "--k", "2", "--sym-p", "1", "--pattern", write("p.txt", "P\nP\n")}).code == 2);
    CHECK(run({"outer-bound", "--profile", write("bad.json", "{nope")}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("profile files") {
    const std::string joint = write("joint.json", R"({"type":"joint","k":3,"mass":{"PNN":"1/3","NPN":"1/3","NNP":"1/3"}})");
    auto r = run({"outer-bound", "--profile", joint, "--joint"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("8/3") != std::string::npos);
    const std::string marg = write("marg.json", R"({"type":"marginal","k":2,"users":[{"p":"0","d":"1"},{"p":"0","d":"1"}]})");
    r = run({"vertices", "--profile", marg});
    CHECK(parse_json(r.out).size() == 4);
    CHECK(run({"outer-bound", "--profile", marg, "--joint"}).code == 2);
}
