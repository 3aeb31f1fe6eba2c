#pragma once

#include "sna/contraction.hpp"
#include "sna/netlist.hpp"
#include "sna/poly.hpp"
#include "sna/supergraph.hpp"

#include <vector>

namespace sna {

/// The reduced admittance system over the non-datum reference voltages,
/// read off the contraction by inspection.
struct ReducedSystem {
    /// Non-datum supernodes sorted by id; row/column i belongs to
    /// supernode_order[i].
    std::vector<SupernodeId> supernode_order;
    /// The reference node whose voltage is unknown i.
    std::vector<NodeId> unknowns;
    std::vector<std::vector<Poly>> matrix;
    std::vector<Poly> rhs;
    /// Carried along for back-substitution.
    std::vector<VoltageExpression> expressions;
};

/// Node-admittance matrix of the contraction: diagonal (A,A) sums the
/// admittance edges incident to A, off-diagonal (A,B) is minus the sum of
/// admittance edges between A and B. Current-source edges and internal
/// elements contribute nothing.
std::vector<std::vector<Poly>> assemble_matrix(const ContractionGraph& graph);

/// The path sum for an admittance edge seen from supernode `side`: the
/// offset of the far terminal minus the offset of the near (inside `side`)
/// terminal. Equals the signed traversal sum over the tree path between the
/// two local references through that admittance.
Poly path_sum(const SupernodePartition& partition, const ContractionEdge& edge,
              const SupernodeId& side);

/// Right-hand side by inspection: current-source edges count + when
/// directed toward the supernode (their neg terminal inside) and - when
/// directed away; each incident admittance edge adds value * path_sum.
std::vector<Poly> assemble_rhs(const ContractionGraph& graph, const SupernodePartition& partition);

/// Full pipeline for circuits without controlled sources: supernodes,
/// references (honoring the circuit's `.ref` requests), source validation,
/// offsets, contraction, and both inspection rules. The datum supernode's
/// equation is omitted.
ReducedSystem build_reduced_system(const ValidatedCircuit& circuit);

/// As above, over an already validated partition.
ReducedSystem assemble_system(const ValidatedCircuit& circuit, const SupernodePartition& partition);

}  // namespace sna
