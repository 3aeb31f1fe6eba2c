#pragma once

#include "sna/netlist.hpp"
#include "sna/supergraph.hpp"

#include <string>
#include <vector>

namespace sna {

/// An admittance or current-source branch of the contraction. Direction is
/// normalized to the element: from is the supernode of the pos terminal, so
/// near = pos and far = neg.
struct ContractionEdge {
    std::string element;
    ElementKind kind = ElementKind::Admittance;
    SupernodeId from;
    SupernodeId to;
    NodeId near;
    NodeId far;
    Value value;
};

/// The input circuit with every supernode collapsed to a single vertex and
/// self-loops removed. Removed self-loop elements are kept in `internal`;
/// their branch voltages are already determined by the offsets.
struct ContractionGraph {
    /// Sorted by id, datum last.
    std::vector<SupernodeId> supernodes;
    /// In netlist order.
    std::vector<ContractionEdge> edges;
    /// Element ids with both terminals in one supernode, in netlist order.
    std::vector<std::string> internal;
};

/// Maps every admittance and current-source element to a contraction edge,
/// or to `internal` when both terminals share a supernode. The circuit must
/// be taped: controlled kinds are not accepted.
ContractionGraph contract(const ValidatedCircuit& circuit, const SupernodePartition& partition);

/// The deactivated circuit: the contraction with current-source edges
/// removed.
ContractionGraph deactivate(const ContractionGraph& graph);

}  // namespace sna
