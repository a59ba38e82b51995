#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "jacobi/cli.hpp"
#include "jacobi/errors.hpp"

using namespace jacobi;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run_args(std::vector<std::string> args) {
    args.insert(args.begin(), "jacobi_cli");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    std::ostringstream out, err;
    const int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& s) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line)) {
        rows.emplace_back();
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) rows.back().push_back(cell);
    }
    return rows;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("jacobi_cli_test_" + name)).string();
}

std::string write_model(const std::string& name, const std::string& json) {
    const std::string p = temp_path(name);
    std::ofstream(p) << json;
    return p;
}

}  // namespace

TEST_CASE("grid parsing") {
    const cli::Grid g = cli::parse_grid("-1:1:5");
    CHECK(g.count == 5);
    CHECK(g.points().at(1) == -0.5);
    CHECK(cli::parse_grid("0:1:0").points().empty());
    CHECK_THROWS_AS(cli::parse_grid("0:1"), ConfigError);
    CHECK_THROWS_AS(cli::parse_grid("a:1:3"), ConfigError);
    CHECK_THROWS_AS(cli::parse_grid("0:1:-2"), ConfigError);
    CHECK_THROWS_AS(cli::parse_grid("0:1:2x"), ConfigError);
}

TEST_CASE("free weight scan as CSV") {
    const Run r = run_args({"weight-scan", "--grid", "-0.99:0.99:101"});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 102);
    CHECK(rows[0] == std::vector<std::string>{"lambda", "w", "kappa", "eta"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double l = std::stod(rows[i][0]), w = std::stod(rows[i][1]);
        CHECK(std::abs(w - 2.0 / std::numbers::pi * std::sqrt(1.0 - l * l)) < 1e-10);
    }
    CHECK(r.out.find('\r') == std::string::npos);
}

TEST_CASE("json output, determinism and atomic file output") {
    const std::string model = write_model("pl.json", R"({"kind":"power_law","alpha":0.1,"r1":0.7,"b":0.05,"r2":0.7})");
    const std::string out = temp_path("out.json");
    std::filesystem::remove(out);
    const std::vector<std::string> args{"weight-scan", "--model", model, "--grid", "-0.5:0.5:7",
                                        "--nmax",      "20000", "--format", "json", "--out", out};
    REQUIRE(run_args(args).code == 0);
    std::ifstream f1(out);
    const std::string first((std::istreambuf_iterator<char>(f1)), {});
    CHECK_FALSE(std::filesystem::exists(out + ".tmp"));
    const auto j = nlohmann::json::parse(first);
    CHECK(j["schema_version"] == 1);
    CHECK(j["model"]["kind"] == "power_law");
    CHECK(j["grid"]["count"] == 7);
    CHECK(j["rows"].size() == 7);
    CHECK(j["mass"].get<double>() <= 1.0 + 1e-6);
    REQUIRE(run_args(args).code == 0);
    std::ifstream f2(out);
    const std::string second((std::istreambuf_iterator<char>(f2)), {});
    CHECK(first == second);
}

TEST_CASE("eig command") {
    const Run f = run_args({"eig"});
    REQUIRE(f.code == 0);
    CHECK(parse_csv(f.out).size() == 1);  // header only

    const std::string model = write_model("b2.json", R"({"kind":"explicit","b_list":[2.0]})");
    const Run e = run_args({"eig", "--model", model, "--trunc-size", "2000"});
    REQUIRE(e.code == 0);
    const auto rows = parse_csv(e.out);
    REQUIRE(rows.size() == 2);
    CHECK(std::abs(std::stod(rows[1][0]) - 2.125) < 1e-10);
    CHECK(std::stod(rows[1][2]) < 1e-8);
}

TEST_CASE("asympt-check residuals decrease") {
    const std::string model = write_model("pl2.json", R"({"kind":"power_law","alpha":0.1,"r1":0.7,"b":0.05,"r2":0.7})");
    const Run r = run_args({"asympt-check", "--model", model, "--grid", "0.5:0.5:1", "--nmax", "20000"});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 5);  // header, then N = 10, 100, 1000, 10000
    CHECK(rows[4][1] == "10000");
    double prev = INFINITY;
    for (std::size_t i = 2; i < rows.size(); ++i) {
        const double v = std::stod(rows[i][2]);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("other commands run") {
    const std::string model = write_model("l.json", R"({"kind":"explicit","a_list":[0.6],"b_list":[0.3]})");
    for (const char* cmd : {"resolvent", "limits", "convergence"}) {
        const Run r = run_args({cmd, "--model", model, "--nmax", "10000"});
        CHECK_MESSAGE(r.code == 0, cmd);
        CHECK(parse_csv(r.out).size() > 1);
    }
    const Run o = run_args({"oracle-compare", "--model", model, "--grid", "-0.9:0.9:6", "--trunc-size", "1000",
                            "--format", "json"});
    REQUIRE(o.code == 0);
    CHECK(nlohmann::json::parse(o.out)["rows"].size() == 6);
    const Run empty = run_args({"oracle-compare", "--grid", "-0.9:0.9:0"});
    CHECK(empty.code == 0);
    CHECK(parse_csv(empty.out).size() == 1);
}

TEST_CASE("error exit codes") {
    CHECK(run_args({"frobnicate"}).code == 2);
    CHECK(run_args({"weight-scan", "--nmax", "20000000"}).code == 2);
    CHECK(run_args({"weight-scan", "--format", "xml"}).code == 2);
    CHECK(run_args({"weight-scan", "--tol", "-1"}).code == 2);
    CHECK(run_args({"weight-scan", "--grid", "0:2:3"}).code == 2);  // outside the edge margin
    CHECK(run_args({"limits", "--grid", "0.5:0.5:1"}).code == 2);
    const std::string bad = write_model("bad.json", R"({"kind":"power_law","alpha":0.1,"r1":3})");
    CHECK(run_args({"weight-scan", "--model", bad}).code == 2);
    const std::string junk = write_model("junk.json", "{not json");
    CHECK(run_args({"weight-scan", "--model", junk}).code == 2);
    const Run missing = run_args({"weight-scan", "--model", temp_path("does_not_exist.json")});
    CHECK(missing.code == 4);
    CHECK(nlohmann::json::parse(missing.err)["error"]["kind"] == "io");
    CHECK(run_args({"weight-scan", "--out", "/nonexistent_dir/x.csv"}).code == 4);

    // local lambda_N outside (-1,1) at the capped tail index is a numerical failure
    const std::string edge = write_model("edge.json", R"({"kind":"power_law","alpha":0.0,"r1":1,"b":-0.5,"r2":0.6})");
    const Run n = run_args({"weight-scan", "--model", edge, "--grid", "0.9:0.9:1", "--nmax", "2"});
    CHECK(n.code == 3);
    CHECK(nlohmann::json::parse(n.err)["error"]["kind"] == "numerical");
}
