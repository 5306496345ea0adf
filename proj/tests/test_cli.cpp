#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "polyjac/cli.hpp"

using nlohmann::json;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = polyjac::cli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST_CASE("exact subcommand emits the documented JSON") {
    const auto r = run_cli({"exact", "--poly", "0,1", "--primes-upto", "5"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["value"] == 5);
    CHECK(j["witness_x"] == 1);
    CHECK(j["period"] == 30);
}

TEST_CASE("exact reports INFINITE as a string") {
    const auto r = run_cli({"exact", "--poly", "0,1,1", "--primes-upto", "2"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["value"] == "INFINITE");
    CHECK(j["witness_x"] == 0);
}

TEST_CASE("mp subcommand") {
    const auto r = run_cli({"mp", "--poly", "0,0,1", "--p", "7"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["p"] == 7);
    CHECK(j["max_count"] == 2);
    CHECK(j["argmax"] == 1);
}

TEST_CASE("group-m subcommand") {
    {
        const auto r = run_cli({"group-m", "--instance", "s4xc2-pairs"});
        REQUIRE(r.code == 0);
        CHECK(json::parse(r.out)["m"] == "7/2");
    }
    {
        const auto r = run_cli({"group-m", "--instance", "aff:6"});
        REQUIRE(r.code == 0);
        CHECK(json::parse(r.out)["m"] == "4");
    }
    {
        const auto r = run_cli({"group-m"});
        CHECK(r.code == 1);
    }
}

TEST_CASE("group file input") {
    const std::string path = "/tmp/polyjac_test_group.txt";
    {
        std::ofstream f(path);
        f << "# S3 with H = A3\n";
        f << "degree 3\n";
        f << "gen 1 0 2\n";
        f << "gen 1 2 0\n";
        f << "subgen 1 2 0\n";
    }
    const auto r = run_cli({"group-m", "--group-file", path});
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["m"] == "2");
    std::remove(path.c_str());
}

TEST_CASE("factor subcommand") {
    const auto r = run_cli({"factor", "--poly", "-1,0,0,0,1"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["linear_count"] == 2);
    CHECK(j["nonlinear_count"] == 1);
    CHECK(j["factors"].size() == 3);
    // claimed factorization is validated
    const auto ok = run_cli({"factor", "--poly", "-1,0,1", "--factors", "-1,1;1,1"});
    CHECK(ok.code == 0);
    const auto bad = run_cli({"factor", "--poly", "-1,0,1", "--factors", "1,1;1,1"});
    CHECK(bad.code == 1);
}

TEST_CASE("smooth subcommand") {
    const auto r = run_cli({"smooth", "--x", "100", "--z", "5"});
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["count"] == 34);
}

TEST_CASE("estimate-m subcommand") {
    const auto r = run_cli({"estimate-m", "--poly", "0,1", "--x1", "1000", "--x2", "100000"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(std::abs(j["slope"].get<double>() - 1.0) < 0.1);
}

TEST_CASE("mp-sums csv output") {
    const auto r = run_cli({"mp-sums", "--poly", "0,0,1", "--checkpoints", "100,1000",
                            "--format", "csv"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("X,sum,lnlnX,running_slope\n", 0) == 0);
    CHECK(r.out.find("\n100,") != std::string::npos);
    CHECK(r.out.find("\n1000,") != std::string::npos);
}

TEST_CASE("roots-sums subcommand") {
    const auto r = run_cli({"roots-sums", "--poly", "1,0,1", "--checkpoints", "1000"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["weight_kind"] == "root_count");
    const auto reducible = run_cli({"roots-sums", "--poly", "-1,0,1", "--checkpoints", "1000"});
    CHECK(reducible.code == 1);
}

TEST_CASE("group-search subcommand") {
    const auto r = run_cli({"group-search", "--degree", "6", "--max-order", "48"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["partial"] == true);
    bool found = false;
    for (const auto& hit : j["hits"])
        if (hit["m"] == "7/2" && hit["group_order"] == 48) found = true;
    CHECK(found);
}

TEST_CASE("construct then verify round trip") {
    const std::string path = "/tmp/polyjac_test_cert.json";
    const auto c = run_cli({"construct", "--poly", "0,1", "--y", "200", "--out", path});
    REQUIRE(c.code == 0);
    const auto v = run_cli({"verify", "--cert", path});
    CHECK(v.code == 0);
    const json j = json::parse(v.out);
    CHECK(j["valid"] == true);

    // tampering flips the exit code
    std::ifstream in(path);
    json cert = json::parse(in);
    in.close();
    cert["witnesses"][0][1] = 2; // claim p = 2 sifts i = 1 under x_2 = 0
    {
        std::ofstream out(path);
        out << cert.dump();
    }
    const auto bad = run_cli({"verify", "--cert", path});
    CHECK(bad.code == 1);
    CHECK(json::parse(bad.out)["valid"] == false);
    std::remove(path.c_str());
}

TEST_CASE("identical invocations produce byte-identical documents") {
    const std::vector<std::string> args{"construct", "--poly", "0,0,1", "--y", "300"};
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    const auto s1 = run_cli({"mp-sums", "--poly", "0,1", "--checkpoints", "10,100,1000"});
    const auto s2 = run_cli({"mp-sums", "--poly", "0,1", "--checkpoints", "10,100,1000"});
    CHECK(s1.out == s2.out);
}

TEST_CASE("thread flag does not change results") {
    const auto one = run_cli({"exact", "--poly", "0,0,1", "--primes-upto", "11", "--threads", "1"});
    const auto four = run_cli({"exact", "--poly", "0,0,1", "--primes-upto", "11", "--threads", "4"});
    CHECK(one.out == four.out);
}

TEST_CASE("usage and domain error exit codes") {
    CHECK(run_cli({"exact", "--poly", "0,1"}).code == 2);              // missing required flag
    CHECK(run_cli({"exact", "--poly", "0,1", "--primes-upto", "5", "--bogus", "1"}).code == 2);
    CHECK(run_cli({"nonsense"}).code == 2);
    CHECK(run_cli({}).code == 2);
    CHECK(run_cli({"exact", "--poly", "zzz", "--primes-upto", "5"}).code == 1); // bad poly
    CHECK(run_cli({"exact", "--poly", "0,1", "--primes-upto", "31"}).code == 1); // budget refusal
    CHECK(run_cli({"mp-sums", "--poly", "1,1,1", "--checkpoints", "1000000",
                   "--budget", "1000"}).code == 1);
    const auto help = run_cli({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("polyjac") != std::string::npos);
}

TEST_CASE("text format renders flat key-value lines") {
    const auto r = run_cli({"smooth", "--x", "10", "--z", "2", "--format", "text"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("count = 4") != std::string::npos);
}
