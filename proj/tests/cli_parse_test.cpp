#include <doctest.h>

#include "parse.hpp"
#include "suites.hpp"

#include <pvi/error.hpp>

#include <json.hpp>

using namespace pvi;
using cli::parse_complex;

TEST_CASE("complex literals")
{
    CHECK(parse_complex("1.5") == cplx(1.5, 0.0));
    CHECK(parse_complex("i") == cplx(0.0, 1.0));
    CHECK(parse_complex("-i") == cplx(0.0, -1.0));
    CHECK(parse_complex("1.07i") == cplx(0.0, 1.07));
    CHECK(parse_complex("0.1+1.1i") == cplx(0.1, 1.1));
    CHECK(parse_complex(" 0.1 - 1.1j ") == cplx(0.1, -1.1));
    CHECK(parse_complex("3e-2-4.5e1i") == cplx(0.03, -45.0));
    CHECK(parse_complex("1e+5i") == cplx(0.0, 1e5));
    CHECK(parse_complex("-2.5E-3+i") == cplx(-0.0025, 1.0));
    for (const char* bad : {"", "abc", "1+", "1..2", "i2", "1+2", "--1"})
        CHECK_THROWS_AS(parse_complex(bad), Error);
}

TEST_CASE("lists and parameter points")
{
    const auto v = cli::parse_complex_list("1,2i;-3+i");
    REQUIRE(v.size() == 3);
    CHECK(v[2] == cplx(-3.0, 1.0));
    CHECK(cli::parse_complex_list("").empty());

    const PainleveParams p = cli::parse_params("classical:0.125,-0.125,0,0.5");
    CHECK(p.source() == ParamRep::Classical);
    CHECK(std::abs(p.alphas()[1] - 0.125) < 1e-16);
    for (const auto& [name, rep] : cli::param_rep_spellings())
        CHECK(cli::parse_params(name + ":0,0,0,1").source() == rep);
    CHECK_THROWS_AS(cli::parse_params("alphas:1,2,3"), Error);
    CHECK_THROWS_AS(cli::parse_params("polar:1,2,3,4"), Error);
    CHECK_THROWS_AS(cli::parse_params("1,2,3,4"), Error);
}

TEST_CASE("suite registry and report")
{
    CHECK(cli::is_suite("elliptic"));
    CHECK(cli::is_suite("all"));
    CHECK_FALSE(cli::is_suite("bogus"));
    const cli::VerificationReport r = cli::run_suite("uniformization", {true, 1});
    CHECK(r.passed());
    CHECK_FALSE(r.infrastructure_error());
    const auto j = nlohmann::json::parse(r.to_json());
    CHECK(j["suite"] == "uniformization");
    CHECK(j["status"] == "pass");
    CHECK(j["records"].size() == r.records.size());
    CHECK(std::is_sorted(r.records.begin(), r.records.end(),
                         [](const auto& a, const auto& b) { return a.name < b.name; }));
    // Same seed, same report.
    CHECK(cli::run_suite("elliptic", {true, 5}).to_json() == cli::run_suite("elliptic", {true, 5}).to_json());
}
