#include "cli.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using liebox::cli::run;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run call(std::vector<std::string> args)
{
    std::ostringstream out, err;
    int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name)
{
    auto dir = std::filesystem::temp_directory_path() / "liebox_cli_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::vector<std::string> lines(const std::string& s)
{
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string l;
    while (std::getline(in, l))
        out.push_back(l);
    return out;
}

}  // namespace

TEST_CASE("pi-table csv")
{
    auto r = call({"pi-table", "--order", "3", "--no-timestamp"});
    REQUIRE(r.code == 0);
    auto ls = lines(r.out);
    REQUIRE(ls.size() == 8);  // comment, header, 3! rows
    CHECK(ls[0].rfind("# liebox", 0) == 0);
    CHECK(ls[1] == "permutation,coefficient");
    int nonzero = 0;
    for (std::size_t i = 2; i < ls.size(); ++i)
        nonzero += ls[i].substr(ls[i].find(',') + 1) != "0";
    CHECK(nonzero == 4);
}

TEST_CASE("pi-table order cap")
{
    CHECK(call({"pi-table", "--order", "11"}).code == 2);
    CHECK(call({"pi-table"}).code == 2);
}

TEST_CASE("identities exit codes")
{
    auto r = call({"identities", "--family", "baker", "--alphabet", "2", "--no-timestamp"});
    CHECK(r.code == 0);
    auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["pass"] == true);
    CHECK(doc["result"]["failed"] == 0);
    CHECK(call({"identities", "--family", "j2", "--max-degree", "4", "--alphabet", "2"}).code == 0);
    CHECK(call({"identities", "--family", "nope"}).code == 2);
}

TEST_CASE("unknown model is a usage error")
{
    auto r = call({"bracket", "--model", "no-such-model", "--at", "0,0,0"});
    CHECK(r.code == 2);
    CHECK(!r.err.empty());
    CHECK(call({"bracket", "--model", "heisenberg", "--at", "0,0"}).code == 2);
}

TEST_CASE("bracket values")
{
    auto r = call({"bracket", "--model", "heisenberg", "--word", "12", "--at", "0.5,0,0", "--psi", "x3",
                   "--no-timestamp"});
    REQUIRE(r.code == 0);
    auto doc = nlohmann::json::parse(r.out);
    // [X,Y] = d/dz for X = dx - y/2 dz, Y = dy + x/2 dz
    CHECK(doc["result"]["value"][2].get<double>() == doctest::Approx(1.0));
    CHECK(doc["result"]["sharp_value"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("deterministic json without timestamp")
{
    std::vector<std::string> args{"flow", "--model", "heisenberg", "--at=-1,0.5,0", "--steps", "1:0.3,2:-0.2",
                                  "--no-timestamp", "--format", "json"};
    auto a = call(args);
    auto b = call(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    auto doc = nlohmann::json::parse(a.out);
    CHECK(!doc.contains("timestamp"));
    CHECK(doc["result"]["end"][0].get<double>() == doctest::Approx(-0.7));
    CHECK(doc["result"]["end"][1].get<double>() == doctest::Approx(0.3));
    CHECK(doc["result"]["reversal_error"].get<double>() < 1e-8);
}

TEST_CASE("config file with flag override")
{
    auto cfg = scratch("cfg.json");
    {
        std::ofstream f(cfg);
        f << R"({"no-timestamp": true, "pi-table": {"order": 4}})";
    }
    auto r = call({"--config", cfg.string(), "pi-table"});
    REQUIRE(r.code == 0);
    CHECK(lines(r.out).size() == 2 + 24);
    auto o = call({"--config", cfg.string(), "pi-table", "--order", "2"});
    REQUIRE(o.code == 0);
    CHECK(lines(o.out).size() == 2 + 2);
    CHECK(o.out.find("\"order\":\"2\"") != std::string::npos);
}

TEST_CASE("witness from file")
{
    auto path = scratch("jacobi.json");
    {
        // [[1,2],3] + [[2,3],1] + [[3,1],2]
        std::ofstream f(path);
        nlohmann::json doc;
        doc["degree"] = 3;
        doc["alphabet"] = 3;
        doc["terms"] = nlohmann::json::array();
        for (auto [a, b, c] : {std::array{1, 2, 3}, std::array{2, 3, 1}, std::array{3, 1, 2}}) {
            doc["terms"].push_back({{"word", {a, b, c}}, {"coeff", 1}});
            doc["terms"].push_back({{"word", {b, a, c}}, {"coeff", -1}});
            doc["terms"].push_back({{"word", {c, a, b}}, {"coeff", -1}});
            doc["terms"].push_back({{"word", {c, b, a}}, {"coeff", 1}});
        }
        f << doc.dump();
    }
    CHECK(call({"witness", "--poly", path.string(), "--expect", "trivial"}).code == 0);
    CHECK(call({"witness", "--poly", path.string(), "--expect", "nontrivial"}).code == 1);
    CHECK(call({"witness", "--poly", scratch("missing.json").string()}).code == 2);
}

TEST_CASE("pinv sweep csv")
{
    auto A = scratch("A.csv");
    auto b = scratch("b.csv");
    {
        std::ofstream f(A);
        f << "# rank one\n1,1\n1,1\n";
    }
    {
        std::ofstream f(b);
        f << "2\n2\n";
    }
    auto r = call({"pinv", "--matrix", A.string(), "--rhs", b.string(), "--lambda-sweep", "--format", "csv",
                   "--no-timestamp"});
    REQUIRE(r.code == 0);
    auto ls = lines(r.out);
    REQUIRE(ls.size() == 2 + 9);
    CHECK(ls[1] == "lambda,error");
    {
        std::ofstream f(b);
        f << "1\n2\n3\n";
    }
    CHECK(call({"pinv", "--matrix", A.string(), "--rhs", b.string()}).code == 2);
}

TEST_CASE("output file")
{
    auto path = scratch("out.json");
    std::filesystem::remove(path);
    auto r = call({"--output", path.string(), "--no-timestamp", "emap", "--model", "flat3", "--center", "0,0,0",
                   "--radius", "0.5"});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream f(path);
    auto doc = nlohmann::json::parse(f);
    CHECK(doc["result"]["det"].get<double>() == doctest::Approx(0.125));
}
