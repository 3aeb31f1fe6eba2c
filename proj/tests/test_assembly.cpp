#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <set>

#include "sna/assembly.hpp"
#include "sna/contraction.hpp"
#include "sna/netlist.hpp"
#include "sna/randckt.hpp"
#include "sna/supergraph.hpp"

using sna::Circuit;
using sna::ContractionGraph;
using sna::ElementKind;
using sna::NodeId;
using sna::Poly;
using sna::ReducedSystem;
using sna::SupernodePartition;
using sna::ValidatedCircuit;

namespace {

ValidatedCircuit load(const std::string& text)
{
    return sna::validate_circuit(sna::parse_netlist(text));
}

SupernodePartition full_partition(const ValidatedCircuit& circuit)
{
    SupernodePartition partition = sna::find_supernodes(circuit, false);
    partition = sna::choose_references(
        partition, circuit.circuit().ground,
        sna::overrides_from_nodes(partition, circuit.circuit().reference_overrides));
    return sna::validate_sources(circuit, partition);
}

const std::string kExample1 = "V01 2 1 v01\n"
                              "V02 4 0 v02\n"
                              "Y1 2 3 G1\n"
                              "Y2 3 4 G2\n"
                              "Y3 1 0 G3\n"
                              "Y4 2 0 G4\n"
                              "I01 3 0 i01\n"
                              ".ref 2\n";

const std::string kExample2 = "V01 6 0 u01\n"
                              "V02 2 1 u02\n"
                              "V03 3 1 u03\n"
                              "V04 4 5 u04\n"
                              "Y1 1 0 G1\n"
                              "Y2 2 3 G2\n"
                              "Y3 3 5 G3\n"
                              "Y4 2 4 G4\n"
                              "Y5 3 4 G5\n"
                              "I01 0 2 i01\n"
                              "I02 3 4 i02\n"
                              ".ref 5\n";

}  // namespace

TEST_CASE("contraction maps every dissipative branch once")
{
    const auto vc = load(kExample1);
    const SupernodePartition partition = full_partition(vc);
    const ContractionGraph graph = sna::contract(vc, partition);

    CHECK(graph.supernodes == std::vector<std::string>{"1", "3", "0"});
    REQUIRE(graph.edges.size() == 5);
    CHECK(graph.internal.empty());

    CHECK(graph.edges[0].element == "Y1");
    CHECK(graph.edges[0].from == "1");
    CHECK(graph.edges[0].to == "3");
    CHECK(graph.edges[0].near == "2");
    CHECK(graph.edges[0].far == "3");
    CHECK(graph.edges[4].element == "I01");
    CHECK(graph.edges[4].kind == ElementKind::ISource);

    const ContractionGraph quiet = sna::deactivate(graph);
    CHECK(quiet.edges.size() == 4);
    for (const auto& edge : quiet.edges) {
        CHECK(edge.kind == ElementKind::Admittance);
    }
}

TEST_CASE("contraction records internal branches instead of self-loops")
{
    const auto vc = load("V1 1 2 vs\nY1 1 2 G1\nY2 2 0 G2\nI1 1 2 is\n");
    const SupernodePartition partition = full_partition(vc);
    const ContractionGraph graph = sna::contract(vc, partition);
    CHECK(graph.internal == std::vector<std::string>{"Y1", "I1"});
    REQUIRE(graph.edges.size() == 1);
    CHECK(graph.edges[0].element == "Y2");
    for (const auto& edge : graph.edges) {
        CHECK(edge.from != edge.to);
    }
}

TEST_CASE("contraction on random circuits conserves branches")
{
    for (std::uint64_t seed = 500; seed < 540; ++seed) {
        sna::GenOptions options;
        options.seed = seed;
        options.symbolic_values = seed % 2 == 0;
        const Circuit c = sna::random_circuit(options);
        const auto vc = sna::validate_circuit(c);
        const SupernodePartition partition = full_partition(vc);
        const ContractionGraph graph = sna::contract(vc, partition);

        std::size_t expected = 0;
        for (const sna::Element& e : c.elements) {
            if (e.kind == ElementKind::Admittance || e.kind == ElementKind::ISource) {
                ++expected;
            }
        }
        CHECK(graph.edges.size() + graph.internal.size() == expected);
        for (const auto& edge : graph.edges) {
            CHECK(edge.from != edge.to);
            CHECK(partition.super_of.at(edge.near) == edge.from);
            CHECK(partition.super_of.at(edge.far) == edge.to);
        }
        CHECK(graph.supernodes.back() == partition.datum);

        if (!c.elements.empty()
            && std::all_of(c.elements.begin(), c.elements.end(), [](const sna::Element& e) {
                   return e.kind == ElementKind::Admittance || e.kind == ElementKind::ISource;
               })) {
            CHECK(graph.supernodes.size() == c.nodes.size());
        }
    }
}

TEST_CASE("the first example assembles to its printed system")
{
    const auto vc = load(kExample1);
    const ReducedSystem system = sna::build_reduced_system(vc);

    CHECK(system.supernode_order == std::vector<std::string>{"1", "3"});
    CHECK(system.unknowns == std::vector<NodeId>{"2", "3"});

    REQUIRE(system.matrix.size() == 2);
    CHECK(system.matrix[0][0].render() == "G1 + G3 + G4");
    CHECK(system.matrix[0][1].render() == "-G1");
    CHECK(system.matrix[1][0].render() == "-G1");
    CHECK(system.matrix[1][1].render() == "G1 + G2");
    CHECK(system.rhs[0].render() == "G3*v01");
    CHECK(system.rhs[1].render() == "G2*v02 - i01");

    REQUIRE(system.expressions.size() == 3);
    CHECK(system.expressions[0].node == "0");
    CHECK(system.expressions[1].node == "1");
    CHECK(system.expressions[2].node == "4");
}

TEST_CASE("the second example assembles to its printed system")
{
    const auto vc = load(kExample2);
    const ReducedSystem system = sna::build_reduced_system(vc);

    CHECK(system.supernode_order == std::vector<std::string>{"1", "4"});
    CHECK(system.unknowns == std::vector<NodeId>{"1", "5"});

    CHECK(system.matrix[0][0] == sna::parse_poly("G1 + G3 + G4 + G5"));
    CHECK(system.matrix[0][1] == sna::parse_poly("-G3 - G4 - G5"));
    CHECK(system.matrix[1][0] == sna::parse_poly("-G3 - G4 - G5"));
    CHECK(system.matrix[1][1] == sna::parse_poly("G3 + G4 + G5"));
    CHECK(system.rhs[0]
          == sna::parse_poly("i01 - i02 + G5*u04 - G5*u03 + G4*u04 - G4*u02 - G3*u03"));
    CHECK(system.rhs[1] == sna::parse_poly("i02 + G5*u03 - G5*u04 + G4*u02 - G4*u04 + G3*u03"));

    CHECK(system.matrix[0][0].render() == "G1 + G3 + G4 + G5");
    CHECK(system.matrix[0][1].render() == "-G3 - G4 - G5");
}

TEST_CASE("path sums equal offset differences seen from each side")
{
    const auto vc = load(kExample1);
    const SupernodePartition partition = full_partition(vc);
    const ContractionGraph graph = sna::contract(vc, partition);
    for (const auto& edge : graph.edges) {
        if (edge.kind != ElementKind::Admittance) {
            continue;
        }
        const Poly from_side = sna::path_sum(partition, edge, edge.from);
        const Poly to_side = sna::path_sum(partition, edge, edge.to);
        CHECK(from_side == -to_side);
    }
    const auto& y3 = graph.edges[2];
    REQUIRE(y3.element == "Y3");
    CHECK(sna::path_sum(partition, y3, "1") == Poly::symbol("v01"));
}

TEST_CASE("reduced systems degenerate to nodal analysis without voltage sources")
{
    for (std::uint64_t seed = 600; seed < 640; ++seed) {
        sna::GenOptions options;
        options.seed = seed;
        options.admittances_only = true;
        options.symbolic_values = seed % 2 == 0;
        const Circuit c = sna::random_circuit(options);
        const auto vc = sna::validate_circuit(c);
        const ReducedSystem system = sna::build_reduced_system(vc);

        std::vector<NodeId> nodes(c.nodes.begin(), c.nodes.end());
        nodes.erase(std::find(nodes.begin(), nodes.end(), c.ground));
        REQUIRE(system.unknowns == nodes);

        std::map<NodeId, std::size_t> index;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            index[nodes[i]] = i;
        }
        std::vector<std::vector<Poly>> matrix(nodes.size(),
                                              std::vector<Poly>(nodes.size()));
        std::vector<Poly> rhs(nodes.size());
        for (const sna::Element& e : c.elements) {
            const Poly value = sna::value_poly(*e.value);
            const auto p = index.find(e.pos);
            const auto n = index.find(e.neg);
            if (e.kind == ElementKind::Admittance) {
                if (p != index.end()) {
                    matrix[p->second][p->second] += value;
                }
                if (n != index.end()) {
                    matrix[n->second][n->second] += value;
                }
                if (p != index.end() && n != index.end()) {
                    matrix[p->second][n->second] -= value;
                    matrix[n->second][p->second] -= value;
                }
            } else {
                if (n != index.end()) {
                    rhs[n->second] += value;
                }
                if (p != index.end()) {
                    rhs[p->second] -= value;
                }
            }
        }
        CHECK(system.matrix == matrix);
        CHECK(system.rhs == rhs);
    }
}

TEST_CASE("the reduced matrix is symmetric without controlled sources")
{
    for (std::uint64_t seed = 700; seed < 740; ++seed) {
        sna::GenOptions options;
        options.seed = seed;
        options.allow_consistent_loops = seed % 2 == 0;
        options.symbolic_values = seed % 3 == 0;
        const Circuit c = sna::random_circuit(options);
        const auto vc = sna::validate_circuit(c);
        const ReducedSystem system = sna::build_reduced_system(vc);
        for (std::size_t i = 0; i < system.matrix.size(); ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                CHECK(system.matrix[i][j] == system.matrix[j][i]);
            }
        }
    }
}

TEST_CASE("column sums recover the omitted datum row")
{
    for (std::uint64_t seed = 800; seed < 830; ++seed) {
        sna::GenOptions options;
        options.seed = seed;
        options.symbolic_values = true;
        const Circuit c = sna::random_circuit(options);
        const auto vc = sna::validate_circuit(c);
        const SupernodePartition partition = full_partition(vc);
        const ContractionGraph graph = sna::contract(vc, partition);
        const ReducedSystem system = sna::assemble_system(vc, partition);

        for (std::size_t col = 0; col < system.supernode_order.size(); ++col) {
            Poly column_sum;
            for (std::size_t row = 0; row < system.supernode_order.size(); ++row) {
                column_sum += system.matrix[row][col];
            }
            Poly to_datum;
            for (const auto& edge : graph.edges) {
                if (edge.kind != ElementKind::Admittance) {
                    continue;
                }
                const bool touches = (edge.from == system.supernode_order[col]
                                      && edge.to == partition.datum)
                                     || (edge.to == system.supernode_order[col]
                                         && edge.from == partition.datum);
                if (touches) {
                    to_datum += sna::value_poly(edge.value);
                }
            }
            CHECK(column_sum == to_datum);
        }
    }
}
