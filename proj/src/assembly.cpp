#include "sna/assembly.hpp"

#include "sna/errors.hpp"

#include <map>
#include <stdexcept>

namespace sna {

namespace {

std::map<SupernodeId, std::size_t> row_index(const ContractionGraph& graph)
{
    std::map<SupernodeId, std::size_t> index;
    for (std::size_t i = 0; i + 1 < graph.supernodes.size(); ++i) {
        index.emplace(graph.supernodes[i], i);
    }
    return index;
}

}  // namespace

std::vector<std::vector<Poly>> assemble_matrix(const ContractionGraph& graph)
{
    const auto index = row_index(graph);
    const std::size_t n = index.size();
    std::vector<std::vector<Poly>> matrix(n, std::vector<Poly>(n));
    for (const ContractionEdge& edge : graph.edges) {
        if (edge.kind != ElementKind::Admittance) {
            continue;
        }
        const Poly value = value_poly(edge.value);
        const auto from = index.find(edge.from);
        const auto to = index.find(edge.to);
        if (from != index.end()) {
            matrix[from->second][from->second] += value;
        }
        if (to != index.end()) {
            matrix[to->second][to->second] += value;
        }
        if (from != index.end() && to != index.end()) {
            matrix[from->second][to->second] -= value;
            matrix[to->second][from->second] -= value;
        }
    }
    return matrix;
}

Poly path_sum(const SupernodePartition& partition, const ContractionEdge& edge,
              const SupernodeId& side)
{
    NodeId near;
    NodeId far;
    if (edge.from == side) {
        near = edge.near;
        far = edge.far;
    } else if (edge.to == side) {
        near = edge.far;
        far = edge.near;
    } else {
        throw std::logic_error("path_sum: edge '" + edge.element + "' is not incident to supernode '"
                               + side + "'");
    }
    return partition.offsets.at(far) - partition.offsets.at(near);
}

std::vector<Poly> assemble_rhs(const ContractionGraph& graph, const SupernodePartition& partition)
{
    const auto index = row_index(graph);
    std::vector<Poly> rhs(index.size());
    for (const ContractionEdge& edge : graph.edges) {
        const auto from = index.find(edge.from);
        const auto to = index.find(edge.to);
        if (edge.kind == ElementKind::ISource) {
            const Poly value = value_poly(edge.value);
            if (to != index.end()) {
                rhs[to->second] += value;
            }
            if (from != index.end()) {
                rhs[from->second] -= value;
            }
            continue;
        }
        const Poly value = value_poly(edge.value);
        if (from != index.end()) {
            rhs[from->second] += value * path_sum(partition, edge, edge.from);
        }
        if (to != index.end()) {
            rhs[to->second] += value * path_sum(partition, edge, edge.to);
        }
    }
    return rhs;
}

ReducedSystem assemble_system(const ValidatedCircuit& circuit, const SupernodePartition& partition)
{
    const ContractionGraph graph = contract(circuit, partition);
    ReducedSystem system;
    system.supernode_order.assign(graph.supernodes.begin(), graph.supernodes.end() - 1);
    for (const SupernodeId& id : system.supernode_order) {
        system.unknowns.push_back(supernode_by_id(partition, id).reference);
    }
    system.matrix = assemble_matrix(deactivate(graph));
    system.rhs = assemble_rhs(graph, partition);
    system.expressions = internal_expressions(partition);
    return system;
}

ReducedSystem build_reduced_system(const ValidatedCircuit& circuit)
{
    for (const Element& e : circuit.circuit().elements) {
        if (is_controlled_kind(e.kind)) {
            throw std::logic_error("build_reduced_system: controlled source '" + e.id
                                   + "' requires the taped pipeline");
        }
    }
    SupernodePartition partition = find_supernodes(circuit, false);
    partition = choose_references(partition, circuit.circuit().ground,
                                  overrides_from_nodes(partition, circuit.circuit().reference_overrides));
    partition = validate_sources(circuit, partition);
    return assemble_system(circuit, partition);
}

}  // namespace sna
