#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "sna/errors.hpp"
#include "sna/netlist.hpp"
#include "sna/randckt.hpp"

using sna::Circuit;
using sna::Element;
using sna::ElementKind;
using sna::Error;
using sna::ErrorCode;
using sna::Rational;

namespace {

ErrorCode code_of(const std::function<void()>& action)
{
    try {
        action();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an engine error");
    return ErrorCode::Syntax;
}

}  // namespace

TEST_CASE("cards parse with kinds, arities and values")
{
    const Circuit c = sna::parse_netlist("# comment\n"
                                         "* another comment\n"
                                         "V01 2 1 v01\n"
                                         "y1 2 3 G1\n"
                                         "R1 3 0 4\n"
                                         "R2 3 0 Rx\n"
                                         "I01 3 0 0.25\n"
                                         "E1 4 0 2 3 2\n"
                                         "G1 4 0 2 3 gm\n"
                                         "H1 5 0 y1 3/2\n"
                                         "F1 5 0 V01 beta\n");
    REQUIRE(c.elements.size() == 9);

    CHECK(c.elements[0].kind == ElementKind::VSource);
    CHECK(c.elements[0].pos == "2");
    CHECK(c.elements[0].neg == "1");
    CHECK(sna::value_token(*c.elements[0].value) == "v01");

    CHECK(c.elements[1].kind == ElementKind::Admittance);
    CHECK(c.elements[1].id == "y1");

    CHECK(c.elements[2].kind == ElementKind::Admittance);
    CHECK(sna::numeric_value(*c.elements[2].value) == Rational(1, 4));
    CHECK(c.elements[3].kind == ElementKind::Admittance);
    CHECK(sna::value_token(*c.elements[3].value) == "1/Rx");

    CHECK(c.elements[4].kind == ElementKind::ISource);
    CHECK(sna::numeric_value(*c.elements[4].value) == Rational(1, 4));

    CHECK(c.elements[5].kind == ElementKind::VCVS);
    REQUIRE(c.elements[5].control_nodes.has_value());
    CHECK(c.elements[5].control_nodes->first == "2");
    CHECK(c.elements[5].control_nodes->second == "3");
    CHECK(sna::numeric_value(*c.elements[5].value) == Rational(2));

    CHECK(c.elements[6].kind == ElementKind::VCCS);
    CHECK(c.elements[7].kind == ElementKind::CCVS);
    REQUIRE(c.elements[7].control_element.has_value());
    CHECK(*c.elements[7].control_element == "y1");
    CHECK(c.elements[8].kind == ElementKind::CCCS);
    CHECK(*c.elements[8].control_element == "V01");

    CHECK(c.ground == "0");
    CHECK(c.nodes.count("5") == 1);
}

TEST_CASE("directives set ground and reference requests")
{
    const Circuit c = sna::parse_netlist("V1 a b 1\nY1 b gnd 2\n.ground gnd\n.ref b\n");
    CHECK(c.ground == "gnd");
    REQUIRE(c.reference_overrides.size() == 1);
    CHECK(c.reference_overrides[0] == "b");
}

TEST_CASE("parse failures carry codes and line numbers")
{
    try {
        sna::parse_netlist("V1 1 0\n");
        FAIL("expected a syntax error");
    } catch (const sna::SyntaxError& e) {
        CHECK(e.line() == 1);
    }

    CHECK(code_of([] { sna::parse_netlist("Q1 1 0 3\n"); }) == ErrorCode::Syntax);
    CHECK(code_of([] { sna::parse_netlist("Y1 1 0 ??\n"); }) == ErrorCode::Syntax);
    CHECK(code_of([] { sna::parse_netlist("R1 1 0 0\n"); }) == ErrorCode::Syntax);
    CHECK(code_of([] { sna::parse_netlist("Y1 1 0 2\nY1 0 1 3\n"); })
          == ErrorCode::DuplicateElementId);
    CHECK(code_of([] { sna::parse_netlist("Y1 1 0 2\nH1 1 0 Zz 2\n"); })
          == ErrorCode::UnknownControlElement);
    CHECK(code_of([] { sna::parse_netlist("I1 1 0 2\nY1 1 0 1\nF1 1 0 I1 2\n"); })
          == ErrorCode::UnknownControlElement);
    CHECK(code_of([] { sna::parse_netlist("Y1 1 2 3\n"); }) == ErrorCode::MissingGroundNode);
    CHECK(code_of([] { sna::parse_netlist("Y1 1 0 2\n.ground 0\n.ground 1\n"); })
          == ErrorCode::Syntax);
    CHECK(code_of([] { sna::parse_netlist("Y1 1 0 2\n.ref 7\n"); }) == ErrorCode::Syntax);
}

TEST_CASE("serialization inverts parsing")
{
    const std::string text = "V01 2 1 v01\n"
                             "y1 2 3 G1\n"
                             "R1 3 0 4\n"
                             "R2 3 0 Rx\n"
                             "I01 3 0 1/4\n"
                             "E1 4 0 2 3 2\n"
                             "G1 4 0 2 3 gm\n"
                             "H1 5 0 y1 3/2\n"
                             "F1 5 0 V01 beta\n"
                             ".ground 0\n"
                             ".ref 2\n";
    const Circuit first = sna::parse_netlist(text);
    const std::string out = sna::serialize_netlist(first);
    const Circuit second = sna::parse_netlist(out);
    CHECK(first == second);
    CHECK(sna::serialize_netlist(second) == out);
}

TEST_CASE("random circuits survive a serialize/parse round trip")
{
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        sna::GenOptions options;
        options.seed = seed;
        options.allow_controlled = seed % 2 == 0;
        options.symbolic_values = seed % 3 == 0;
        options.allow_consistent_loops = seed % 4 == 0;
        const Circuit c = sna::random_circuit(options);
        const Circuit back = sna::parse_netlist(sna::serialize_netlist(c));
        CHECK(back == c);
    }
}

TEST_CASE("validation rejects nullors, shorts and islands")
{
    const Circuit nullor = sna::parse_netlist("V1 1 0 vs\nY1 1 2 G1\nN1 2 3\nO1 3 0\n");
    try {
        sna::validate_circuit(nullor);
        FAIL("expected rejection");
    } catch (const sna::UnsupportedNullorError& e) {
        CHECK(e.element_ids() == std::vector<std::string>{"N1", "O1"});
    }

    CHECK(code_of([] {
              sna::validate_circuit(sna::parse_netlist("V1 1 1 2\nY1 1 0 3\n"));
          })
          == ErrorCode::ShortedSource);
    CHECK(code_of([] {
              sna::validate_circuit(sna::parse_netlist("E1 1 1 2 0 2\nY1 1 0 3\nY2 2 0 1\n"));
          })
          == ErrorCode::ShortedSource);

    const Circuit split = sna::parse_netlist("Y1 1 0 2\nY2 2 3 1\n");
    try {
        sna::validate_circuit(split);
        FAIL("expected rejection");
    } catch (const sna::DisconnectedCircuitError& e) {
        REQUIRE(e.components().size() == 2);
        CHECK(e.components()[0] == std::vector<std::string>{"0", "1"});
        CHECK(e.components()[1] == std::vector<std::string>{"2", "3"});
    }

    CHECK_NOTHROW(sna::validate_circuit(sna::parse_netlist("Y1 1 0 2\nI1 1 0 1\n")));
}

TEST_CASE("sense terminals alone do not connect a circuit")
{
    const Circuit c = sna::parse_netlist("Y1 1 0 2\nG1 1 0 2 3 gm\nY2 2 3 1\n");
    CHECK(code_of([&] { sna::validate_circuit(c); }) == ErrorCode::DisconnectedCircuit);
}

TEST_CASE("binding substitutes values and screens admittances")
{
    const Circuit c = sna::parse_netlist("V1 1 0 vs\nY1 1 2 G1\nY2 2 0 G2\n");
    CHECK(sna::circuit_symbols(c) == std::set<std::string>{"G1", "G2", "vs"});

    const Circuit bound = sna::bind_values(
        c, {{"vs", Rational(2)}, {"G1", Rational(1)}, {"G2", Rational(3, 2)}});
    for (const Element& e : bound.elements) {
        CHECK(sna::is_numeric(*e.value));
    }
    CHECK(sna::numeric_value(*bound.elements[0].value) == Rational(2));

    CHECK(code_of([&] { sna::bind_values(c, {{"vs", Rational(2)}, {"G1", Rational(1)}}); })
          == ErrorCode::UnboundSymbol);
    CHECK(code_of([&] {
              sna::bind_values(c, {{"vs", Rational(2)}, {"G1", Rational(0)},
                                   {"G2", Rational(1)}});
          })
          == ErrorCode::NonpositiveAdmittance);
    CHECK_NOTHROW(sna::bind_values(c, {{"vs", Rational(-2)},
                                       {"G1", Rational(1)},
                                       {"G2", Rational(1)}}));
}
