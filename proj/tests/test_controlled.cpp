#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "sna/controlled.hpp"
#include "sna/errors.hpp"
#include "sna/netlist.hpp"
#include "sna/verify.hpp"

using sna::AffineForm;
using sna::Analysis;
using sna::Circuit;
using sna::ElementKind;
using sna::ErrorCode;
using sna::Poly;
using sna::Rational;

namespace {

sna::ErrorCode analyze_code(const std::string& text)
{
    try {
        sna::analyze(sna::parse_netlist(text));
    } catch (const sna::Error& e) {
        return e.code();
    }
    FAIL("expected an engine error");
    return ErrorCode::Syntax;
}

}  // namespace

TEST_CASE("taping rewrites controlled sources behind fresh symbols")
{
    const Circuit c = sna::parse_netlist("V1 1 0 vs\n"
                                         "Y1 1 2 G1\n"
                                         "Y2 2 0 G2\n"
                                         "E1 3 0 2 0 2\n"
                                         "Y3 3 2 G3\n"
                                         "F1 2 0 Y1 1/2\n");
    const auto vc = sna::validate_circuit(c);
    const auto [taped, record] = sna::tape(vc);

    REQUIRE(record.entries.size() == 2);
    CHECK(record.entries[0].element_id == "E1");
    CHECK(record.entries[0].taped_symbol == "_w_E1");
    CHECK(record.entries[0].kind == ElementKind::VCVS);
    CHECK(sna::numeric_value(record.entries[0].gain) == Rational(2));
    CHECK(record.entries[1].element_id == "F1");
    CHECK(record.entries[1].kind == ElementKind::CCCS);
    CHECK(*record.entries[1].control_element == "Y1");

    const auto& e1 = *std::find_if(taped.elements.begin(), taped.elements.end(),
                                   [](const sna::Element& e) { return e.id == "E1"; });
    CHECK(e1.kind == ElementKind::VSource);
    CHECK(sna::value_token(*e1.value) == "_w_E1");
    CHECK_FALSE(e1.control_nodes.has_value());
    const auto& f1 = *std::find_if(taped.elements.begin(), taped.elements.end(),
                                   [](const sna::Element& e) { return e.id == "F1"; });
    CHECK(f1.kind == ElementKind::ISource);
    CHECK(sna::value_token(*f1.value) == "_w_F1");
}

TEST_CASE("taped symbols avoid collisions with existing tokens")
{
    const Circuit c = sna::parse_netlist("V1 1 0 _w_E1\n"
                                         "Y1 1 2 G1\n"
                                         "Y2 2 0 G2\n"
                                         "E1 3 0 2 0 2\n"
                                         "Y3 3 0 G3\n");
    const auto [taped, record] = sna::tape(sna::validate_circuit(c));
    REQUIRE(record.entries.size() == 1);
    CHECK(record.entries[0].taped_symbol == "_w_E1_");
}

TEST_CASE("untaping eliminates every taped symbol")
{
    const Analysis a = sna::analyze(sna::parse_netlist("V1 1 0 vs\n"
                                                       "Y1 1 2 G1\n"
                                                       "Y2 2 0 G2\n"
                                                       "E1 3 0 2 0 mu\n"
                                                       "Y3 3 2 G3\n"
                                                       "F1 2 0 Y1 beta\n"));
    std::set<std::string> taped_symbols;
    for (const auto& entry : a.record.entries) {
        taped_symbols.insert(entry.taped_symbol);
    }
    for (const auto& row : a.system.matrix) {
        for (const Poly& cell : row) {
            for (const auto& s : taped_symbols) {
                CHECK_FALSE(cell.contains(s));
            }
        }
    }
    for (const Poly& entry : a.system.rhs) {
        for (const auto& s : taped_symbols) {
            CHECK_FALSE(entry.contains(s));
        }
    }
    for (const auto& expr : a.expressions) {
        for (const auto& s : taped_symbols) {
            CHECK_FALSE(expr.offset.contains_symbol(s));
        }
    }
    for (const auto& [element, current] : a.source_currents) {
        for (const auto& s : taped_symbols) {
            CHECK_FALSE(current.contains_symbol(s));
        }
    }
    REQUIRE(a.resolved_taped.count("_w_E1") == 1);
    REQUIRE(a.resolved_taped.count("_w_F1") == 1);
}

TEST_CASE("a grounded VCVS reproduces its gain in the voltage expression")
{
    const Analysis a = sna::analyze(sna::parse_netlist("V1 1 0 vs\n"
                                                       "Y1 1 2 G1\n"
                                                       "Y2 2 0 G2\n"
                                                       "E1 3 0 2 0 mu\n"
                                                       "Y3 3 2 G3\n"));
    AffineForm expected;
    expected.add_unknown("2", Poly::symbol("mu"));
    CHECK(a.resolved_taped.at("_w_E1") == expected);

    const auto it = std::find_if(a.expressions.begin(), a.expressions.end(),
                                 [](const auto& e) { return e.node == "3"; });
    REQUIRE(it != a.expressions.end());
    CHECK(it->reference == "0");
    CHECK(it->offset == expected);
}

TEST_CASE("a VCCS stamps like its direct nodal pattern")
{
    const Analysis a = sna::analyze(sna::parse_netlist("Y1 1 0 G1\n"
                                                       "Y2 1 2 G2\n"
                                                       "Y3 2 0 G3\n"
                                                       "G9 1 2 2 0 gm\n"));
    REQUIRE(a.system.unknowns == std::vector<std::string>{"1", "2"});
    CHECK(a.system.matrix[0][0] == sna::parse_poly("G1 + G2"));
    CHECK(a.system.matrix[0][1] == sna::parse_poly("gm - G2"));
    CHECK(a.system.matrix[1][0] == sna::parse_poly("-G2"));
    CHECK(a.system.matrix[1][1] == sna::parse_poly("G2 + G3 - gm"));
    CHECK(a.system.rhs[0] == Poly::zero());
    CHECK(a.system.rhs[1] == Poly::zero());
}

TEST_CASE("a zero gain is the same as no controlled source at all")
{
    const Analysis with = sna::analyze(sna::parse_netlist("V1 1 0 vs\n"
                                                          "Y1 1 2 G1\n"
                                                          "Y2 2 0 G2\n"
                                                          "F1 2 0 Y1 0\n"));
    const Analysis without = sna::analyze(sna::parse_netlist("V1 1 0 vs\n"
                                                             "Y1 1 2 G1\n"
                                                             "Y2 2 0 G2\n"));
    CHECK(with.system.unknowns == without.system.unknowns);
    CHECK(with.system.matrix == without.system.matrix);
    CHECK(with.system.rhs == without.system.rhs);
}

TEST_CASE("controlled sources may control each other acyclically")
{
    const Analysis a = sna::analyze(sna::parse_netlist("V1 1 0 vs\n"
                                                       "Y1 1 2 G1\n"
                                                       "Y2 2 0 G2\n"
                                                       "E1 3 0 2 0 mu\n"
                                                       "Y3 3 2 G3\n"
                                                       "F1 2 0 Y3 beta\n"));
    REQUIRE(a.resolved_taped.size() == 2);
    for (const auto& [symbol, value] : a.resolved_taped) {
        for (const auto& [other, unused] : a.resolved_taped) {
            CHECK_FALSE(value.contains_symbol(other));
        }
    }
    AffineForm mu_v2;
    mu_v2.add_unknown("2", sna::parse_poly("mu"));
    CHECK(a.resolved_taped.at("_w_E1") == mu_v2);
    AffineForm feedback;
    feedback.add_unknown("2", sna::parse_poly("G3*beta*mu - G3*beta"));
    CHECK(a.resolved_taped.at("_w_F1") == feedback);
}

TEST_CASE("numeric control cycles resolve by exact elimination")
{
    const Analysis a = sna::analyze(sna::parse_netlist("Y0 1 0 G0\n"
                                                       "E1 1 2 3 0 2\n"
                                                       "E2 3 0 2 0 3\n"));
    const AffineForm& w1 = a.resolved_taped.at("_w_E1");
    const AffineForm& w2 = a.resolved_taped.at("_w_E2");
    AffineForm expected1;
    expected1.add_unknown("1", Poly::constant(Rational(6, 7)));
    AffineForm expected2;
    expected2.add_unknown("1", Poly::constant(Rational(3, 7)));
    CHECK(w1 == expected1);
    CHECK(w2 == expected2);
}

TEST_CASE("symbolic control cycles are rejected")
{
    CHECK(analyze_code("Y0 1 0 G0\n"
                       "E1 1 2 3 0 mu1\n"
                       "E2 3 0 2 0 mu2\n")
          == ErrorCode::CyclicControlDependency);
}

TEST_CASE("a singular control system is reported")
{
    CHECK(analyze_code("Y0 1 0 G0\n"
                       "E1 1 2 3 0 2\n"
                       "E2 3 0 2 1 -1/2\n")
          == ErrorCode::SingularControlSystem);
}

TEST_CASE("sensing the current of a looped voltage source is rejected")
{
    CHECK(analyze_code("V1 1 0 2\n"
                       "V2 1 0 2\n"
                       "Y1 1 2 G1\n"
                       "Y2 2 0 G2\n"
                       "H1 3 0 V1 2\n"
                       "Y3 3 2 G3\n")
          == ErrorCode::ControlBranchNotTree);
}

TEST_CASE("sensing a tree voltage source works")
{
    const Analysis a = sna::analyze(sna::parse_netlist("V1 1 0 vs\n"
                                                       "Y1 1 2 G1\n"
                                                       "Y2 2 0 G2\n"
                                                       "F1 2 0 V1 1\n"));
    REQUIRE(a.resolved_taped.count("_w_F1") == 1);
    const AffineForm& w = a.resolved_taped.at("_w_F1");
    CHECK_FALSE(w.contains_symbol("_w_F1"));
}

TEST_CASE("internal branches carry determined voltages")
{
    const Analysis a = sna::analyze(sna::parse_netlist("V1 1 2 vs\n"
                                                       "Y1 1 2 G1\n"
                                                       "Y2 2 0 G2\n"
                                                       "I1 2 1 is\n"));
    REQUIRE(a.internal_elements.size() == 2);
    CHECK(a.internal_elements[0].element == "Y1");
    CHECK(a.internal_elements[0].branch_voltage == AffineForm{Poly::symbol("vs")});
    CHECK(a.internal_elements[1].element == "I1");
    CHECK(a.internal_elements[1].branch_voltage == AffineForm{-Poly::symbol("vs")});
}
