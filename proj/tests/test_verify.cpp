#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "sna/errors.hpp"
#include "sna/netlist.hpp"
#include "sna/randckt.hpp"
#include "sna/verify.hpp"

using sna::Circuit;
using sna::DifferentialVerdict;
using sna::ErrorCode;
using sna::Rational;
using sna::Solution;

namespace {

const std::string kExample1 = "V01 2 1 v01\n"
                              "V02 4 0 v02\n"
                              "Y1 2 3 G1\n"
                              "Y2 3 4 G2\n"
                              "Y3 1 0 G3\n"
                              "Y4 2 0 G4\n"
                              "I01 3 0 i01\n"
                              ".ref 2\n";

Circuit example1_bound()
{
    return sna::bind_values(sna::parse_netlist(kExample1),
                            {{"G1", 1}, {"G2", 1}, {"G3", 1}, {"G4", 1},
                             {"v01", 1}, {"v02", 2}, {"i01", 0}});
}

}  // namespace

TEST_CASE("the first example solves to its known voltages")
{
    const Solution s = sna::solve_circuit(example1_bound());
    CHECK(s.node_voltages.at("0") == Rational(0));
    CHECK(s.node_voltages.at("1") == Rational(-1, 5));
    CHECK(s.node_voltages.at("2") == Rational(4, 5));
    CHECK(s.node_voltages.at("3") == Rational(7, 5));
    CHECK(s.node_voltages.at("4") == Rational(2));

    CHECK(s.branch_currents.at("V01") == Rational(-1, 5));
    CHECK(s.branch_currents.at("V02") == Rational(-3, 5));
    CHECK(sna::check_solution(example1_bound(), s).all_zero());
}

TEST_CASE("a symmetric divider splits the source evenly")
{
    const Circuit c = sna::parse_netlist("V1 1 0 1\nY1 1 2 1\nY2 2 0 1\n");
    const Solution s = sna::solve_circuit(c);
    CHECK(s.node_voltages.at("1") == Rational(1));
    CHECK(s.node_voltages.at("2") == Rational(1, 2));
    CHECK(s.branch_currents.at("V1") == Rational(-1, 2));
}

TEST_CASE("a one-unknown circuit divides injection by admittance")
{
    const Circuit c = sna::parse_netlist("Y1 1 0 2\nI1 0 1 3\n");
    const Solution s = sna::solve_circuit(c);
    CHECK(s.node_voltages.at("1") == Rational(3, 2));
}

TEST_CASE("the oracle agrees with the pipeline on the first example")
{
    const Circuit c = example1_bound();
    const Solution sna_solution = sna::solve_circuit(c);
    const Solution mna_solution = sna::mna_solve(sna::mna_system(c), c);
    CHECK(sna_solution.node_voltages == mna_solution.node_voltages);
}

TEST_CASE("the oracle refuses symbolic circuits")
{
    try {
        sna::mna_system(sna::parse_netlist(kExample1));
        FAIL("expected an error");
    } catch (const sna::Error& e) {
        CHECK(e.code() == ErrorCode::UnboundSymbol);
    }
}

TEST_CASE("a floating current-source node is singular on both sides")
{
    for (const char* text : {"Y1 1 0 1\nI1 1 2 2\n", "Y1 1 0 1\nI1 1 2 0\n"}) {
        const Circuit c = sna::parse_netlist(text);
        try {
            sna::solve_circuit(c);
            FAIL("expected a singular system");
        } catch (const sna::Error& e) {
            CHECK(e.code() == ErrorCode::SingularSystem);
        }
        try {
            sna::mna_solve(sna::mna_system(c), c);
            FAIL("expected a singular system");
        } catch (const sna::Error& e) {
            CHECK(e.code() == ErrorCode::SingularSystem);
        }
        const DifferentialVerdict verdict = sna::differential_check(c);
        CHECK(verdict.status == DifferentialVerdict::Status::PassByAgreement);
    }
}

TEST_CASE("a consistent source loop solves with zero chord circulation")
{
    const Circuit c = sna::parse_netlist("V1 1 0 2\nV2 1 0 2\nY1 1 0 1\n");
    const DifferentialVerdict verdict = sna::differential_check(c);
    CHECK(verdict.status == DifferentialVerdict::Status::Pass);
    REQUIRE(verdict.sna.has_value());
    CHECK(verdict.sna->node_voltages.at("1") == Rational(2));
    CHECK(verdict.sna->branch_currents.at("V2") == Rational(0));
    CHECK(verdict.sna->branch_currents.at("V1") == Rational(-2));
}

TEST_CASE("residual checking flags a corrupted solution")
{
    const Circuit c = example1_bound();
    Solution s = sna::solve_circuit(c);
    REQUIRE(sna::check_solution(c, s).all_zero());
    s.node_voltages["3"] += 1;
    const auto report = sna::check_solution(c, s);
    CHECK_FALSE(report.all_zero());
    CHECK(report.describe().find("all residuals zero") == std::string::npos);
}

TEST_CASE("differential verdicts hold across a mixed random batch")
{
    int passes = 0;
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        sna::GenOptions options;
        options.seed = seed * 31 + 5;
        switch (seed % 4) {
        case 0:
            options.admittances_only = true;
            break;
        case 1:
            break;
        case 2:
            options.allow_controlled = true;
            break;
        default:
            options.allow_consistent_loops = true;
            break;
        }
        const Circuit c = sna::random_circuit(options);
        const DifferentialVerdict verdict = sna::differential_check(c);
        INFO("seed " << options.seed << "\n" << sna::serialize_netlist(c) << verdict.detail);
        CHECK(verdict.ok());
        if (verdict.status == DifferentialVerdict::Status::Pass) {
            ++passes;
        }
    }
    CHECK(passes > 30);
}

TEST_CASE("recovered source currents satisfy every current law")
{
    for (std::uint64_t seed = 900; seed < 930; ++seed) {
        sna::GenOptions options;
        options.seed = seed;
        options.allow_controlled = seed % 2 == 0;
        const Circuit c = sna::random_circuit(options);
        Solution s;
        try {
            s = sna::solve_circuit(c);
        } catch (const sna::Error&) {
            continue;
        }
        const auto report = sna::check_solution(c, s);
        INFO(sna::serialize_netlist(c) << report.describe());
        CHECK(report.all_zero());
    }
}
