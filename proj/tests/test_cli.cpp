#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "multibubble/cli.hpp"

namespace cli = multibubble::cli;
using nlohmann::ordered_json;

namespace {

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

// Drops the line carrying the timestamp, the only run-dependent output.
std::string without_timestamp(const std::string& text) {
    std::istringstream in(text);
    std::string line, kept;
    while (std::getline(in, line))
        if (line.find("timestamp") == std::string::npos) kept += line + "\n";
    return kept;
}

ordered_json parse_out(const std::string& text) { return ordered_json::parse(text); }

std::string write_temp(const std::string& name, const std::string& content) {
    std::string path = std::string("/tmp/") + name;
    std::ofstream f(path);
    f << content;
    return path;
}

}  // namespace

TEST_CASE("profile subcommand reports the closed-form values") {
    RunResult r = run({"profile", "--v", "0.5,0.5"});
    REQUIRE(r.code == 0);
    ordered_json doc = parse_out(r.out);
    CHECK(doc["q"] == 2);
    CHECK(double(doc["value"]) == doctest::Approx(0.398942280401433).epsilon(1e-9));
    CHECK(doc.contains("gradient"));
    CHECK(doc.contains("hessian"));
    CHECK(doc.contains("timestamp"));

    r = run({"profile", "--v", "0.333333333,0.333333333,0.333333334"});
    REQUIRE(r.code == 0);
    CHECK(double(parse_out(r.out)["value"]) ==
          doctest::Approx(0.598413420602149).epsilon(1e-7));
}

TEST_CASE("profile subcommand validates its input") {
    CHECK(run({"profile", "--v", "1,0"}).code == 3);
    CHECK(run({"profile", "--v", "0.5,0.6"}).code == 2);
    CHECK(run({"profile", "--v", "0.5"}).code == 2);
    CHECK(run({"profile", "--v", "abc,0.5"}).code == 2);
    CHECK(run({"profile"}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({}).code == 2);
}

TEST_CASE("check subcommand passes and fails by exit code") {
    RunResult r = run({"check", "--q", "2", "--mc-samples", "20000"});
    REQUIRE(r.code == 0);
    ordered_json doc = parse_out(r.out);
    CHECK(doc["all_pass"] == true);
    CHECK(doc["checks"].is_array());
    for (const auto& row : doc["checks"]) {
        CHECK(row.contains("name"));
        CHECK(row.contains("residual"));
        CHECK(row.contains("threshold"));
        CHECK(row["pass"] == true);
    }
    CHECK(run({"check", "--q", "9"}).code == 2);
    CHECK(run({"check", "--q", "1"}).code == 2);
}

TEST_CASE("homology subcommand reads one-based complexes") {
    std::string k4 = write_temp("k4.json", R"({
        "q": 4,
        "edges": [[1,2],[1,3],[1,4],[2,3],[2,4],[3,4]],
        "triangles": [[1,2,3],[1,2,4],[1,3,4],[2,3,4]]
    })");
    RunResult r = run({"homology", k4});
    REQUIRE(r.code == 0);
    ordered_json doc = parse_out(r.out);
    CHECK(doc["b0"] == 1);
    CHECK(doc["b1"] == 0);

    std::string cycle = write_temp("cycle.json",
                                   R"({"q": 3, "edges": [[1,2],[1,3],[2,3]]})");
    r = run({"homology", cycle});
    REQUIRE(r.code == 0);
    doc = parse_out(r.out);
    CHECK(doc["b0"] == 1);
    CHECK(doc["b1"] == 1);
}

TEST_CASE("homology subcommand rejects malformed complexes") {
    std::string bad = write_temp("bad.json",
                                 R"({"q": 3, "edges": [[1,2]], "triangles": [[1,2,3]]})");
    CHECK(run({"homology", bad}).code == 2);

    std::string rng = write_temp("range.json", R"({"q": 3, "edges": [[1,4]]})");
    CHECK(run({"homology", rng}).code == 2);

    std::string syntax = write_temp("syntax.json", "{ not json");
    CHECK(run({"homology", syntax}).code == 2);

    CHECK(run({"homology", "/tmp/does-not-exist-multibubble.json"}).code == 2);
}

TEST_CASE("optimize subcommand enforces its supported shapes") {
    CHECK(run({"optimize", "--q", "5", "--n", "2", "--v", "0.2,0.2,0.2,0.2,0.2"}).code == 2);
    CHECK(run({"optimize", "--q", "3", "--n", "1", "--v", "0.4,0.3,0.3"}).code == 2);
    CHECK(run({"optimize", "--q", "3", "--n", "2", "--v", "0.5,0.5"}).code == 2);
}

TEST_CASE("optimize subcommand solves the line case and writes files") {
    std::string out_path = "/tmp/mb_opt_out.json";
    std::remove(out_path.c_str());
    std::remove("/tmp/mb_opt_out_history.csv");

    RunResult r = run({"optimize", "--q", "2", "--n", "1", "--v", "0.6,0.4",
                       "--starts", "2", "--mc-samples", "50000", "--out", out_path});
    REQUIRE(r.code == 0);

    std::ifstream f(out_path);
    REQUIRE(f.good());
    ordered_json doc = ordered_json::parse(f);
    CHECK(doc["converged"] == true);
    CHECK(std::abs(double(doc["profile_gap"])) <= 1e-3);
    CHECK(doc["complex"]["b1"] == 0);
    CHECK(doc["all_interfaces_positive"] == true);

    std::ifstream h("/tmp/mb_opt_out_history.csv");
    REQUIRE(h.good());
    std::string header;
    std::getline(h, header);
    CHECK(header == "iteration,objective,feasibility,perimeter");
}

TEST_CASE("identical invocations emit identical bytes modulo the timestamp") {
    RunResult a = run({"profile", "--v", "0.4,0.6", "--seed", "7"});
    RunResult b = run({"profile", "--v", "0.4,0.6", "--seed", "7"});
    REQUIRE(a.code == 0);
    CHECK(without_timestamp(a.out) == without_timestamp(b.out));

    RunResult c = run({"check", "--q", "2", "--mc-samples", "20000"});
    RunResult d = run({"check", "--q", "2", "--mc-samples", "20000"});
    CHECK(without_timestamp(c.out) == without_timestamp(d.out));

    RunResult e = run({"check", "--q", "2", "--mc-samples", "20000", "--seed", "11"});
    CHECK(without_timestamp(e.out) != without_timestamp(c.out));
}

TEST_CASE("the seed environment override is honored") {
    setenv("MULTIBUBBLE_SEED", "11", 1);
    RunResult env_run = run({"check", "--q", "2", "--mc-samples", "20000"});
    unsetenv("MULTIBUBBLE_SEED");
    RunResult flag_run = run({"check", "--q", "2", "--mc-samples", "20000", "--seed", "11"});
    CHECK(without_timestamp(env_run.out) == without_timestamp(flag_run.out));

    setenv("MULTIBUBBLE_SEED", "not-a-number", 1);
    int code = run({"check", "--q", "2", "--mc-samples", "20000"}).code;
    unsetenv("MULTIBUBBLE_SEED");
    CHECK(code == 2);
}

TEST_CASE("csv output round-trips through the parser") {
    ordered_json doc;
    doc["q"] = 2;
    doc["name"] = "has,comma \"and\" quotes";
    doc["value"] = 0.25;
    doc["nested"]["list"] = {1.5, -3.0, 0.125};
    doc["nested"]["flag"] = true;
    doc["nothing"] = nullptr;

    ordered_json back = cli::parse_csv(cli::render_csv(doc));
    CHECK(back == doc);

    RunResult r = run({"profile", "--v", "0.5,0.5", "--format", "csv"});
    REQUIRE(r.code == 0);
    ordered_json parsed = cli::parse_csv(r.out);
    CHECK(double(parsed["value"]) == doctest::Approx(0.398942280401433).epsilon(1e-8));
    CHECK(run({"profile", "--v", "0.5,0.5", "--format", "yaml"}).code == 2);
}

TEST_CASE("json rendering is stable and nine-significant-digit") {
    ordered_json doc;
    doc["a"] = 0.1;
    doc["b"] = {0.2, 1e-300};
    std::string text = cli::render_json(doc);
    CHECK(text.find("0.1") != std::string::npos);
    CHECK(cli::render_json(doc) == text);
}

TEST_CASE("help is available and exits cleanly") {
    RunResult r = run({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("profile") != std::string::npos);
    CHECK(r.out.find("optimize") != std::string::npos);
}
