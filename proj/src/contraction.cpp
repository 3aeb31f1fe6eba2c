#include "sna/contraction.hpp"

#include <algorithm>
#include <stdexcept>

namespace sna {

ContractionGraph contract(const ValidatedCircuit& circuit, const SupernodePartition& partition)
{
    const Circuit& c = circuit.circuit();

    ContractionGraph graph;
    for (const Supernode& s : partition.supernodes) {
        if (s.id != partition.datum) {
            graph.supernodes.push_back(s.id);
        }
    }
    graph.supernodes.push_back(partition.datum);

    for (const Element& e : c.elements) {
        if (e.kind == ElementKind::VSource) {
            continue;
        }
        if (e.kind != ElementKind::Admittance && e.kind != ElementKind::ISource) {
            throw std::logic_error("contract expects a taped circuit, found "
                                   + std::string(kind_name(e.kind)) + " '" + e.id + "'");
        }
        const SupernodeId& from = partition.super_of.at(e.pos);
        const SupernodeId& to = partition.super_of.at(e.neg);
        if (from == to) {
            graph.internal.push_back(e.id);
            continue;
        }
        graph.edges.push_back(ContractionEdge{e.id, e.kind, from, to, e.pos, e.neg, *e.value});
    }
    return graph;
}

ContractionGraph deactivate(const ContractionGraph& graph)
{
    ContractionGraph result;
    result.supernodes = graph.supernodes;
    result.internal = graph.internal;
    std::copy_if(graph.edges.begin(), graph.edges.end(), std::back_inserter(result.edges),
                 [](const ContractionEdge& e) { return e.kind == ElementKind::Admittance; });
    return result;
}

}  // namespace sna
