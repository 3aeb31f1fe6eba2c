#pragma once

#include "sna/netlist.hpp"
#include "sna/poly.hpp"

#include <map>
#include <string>
#include <vector>

namespace sna {

/// A supernode is named by its lexicographically smallest member node.
using SupernodeId = std::string;

/// One edge of a supernode's rooted spanning tree; parent is the endpoint
/// nearer the local reference.
struct TreeEdge {
    std::string element;
    NodeId parent;
    NodeId child;

    bool operator==(const TreeEdge& other) const = default;
};

struct Supernode {
    SupernodeId id;
    std::vector<NodeId> members;
    NodeId reference;
    /// Voltage-source branches with both terminals in this supernode, in
    /// netlist order.
    std::vector<std::string> vbranches;
    /// Spanning tree rooted at the reference, in BFS discovery order;
    /// filled by validate_sources.
    std::vector<TreeEdge> tree;
};

struct SupernodePartition {
    std::map<NodeId, SupernodeId> super_of;
    /// Sorted by id.
    std::vector<Supernode> supernodes;
    /// The supernode containing ground.
    SupernodeId datum;
    /// Per-node voltage offset from the local reference; filled by
    /// validate_sources.
    std::map<NodeId, Poly> offsets;
};

const Supernode& supernode_by_id(const SupernodePartition& partition, const SupernodeId& id);

/// v(node) = v(reference) + offset; members of the datum supernode use the
/// constant 0 in place of v(reference).
struct VoltageExpression {
    NodeId node;
    NodeId reference;
    Poly offset;
};

/// Partitions nodes into maximal connected components over voltage-source
/// branches. With include_taped set, VCVS/CCVS output branches count as
/// voltage sources too (the taped pipeline never needs this: taping has
/// already turned them into independent sources).
SupernodePartition find_supernodes(const ValidatedCircuit& circuit, bool include_taped);

/// Fixes each supernode's local reference: ground for the datum supernode,
/// otherwise the lexicographically smallest member unless overridden.
SupernodePartition choose_references(SupernodePartition partition, const NodeId& ground,
                                     const std::map<SupernodeId, NodeId>& overrides = {});

/// Turns a list of requested reference nodes (e.g. from `.ref` directives)
/// into an override map keyed by the supernode containing each node.
std::map<SupernodeId, NodeId> overrides_from_nodes(const SupernodePartition& partition,
                                                   const std::vector<NodeId>& nodes);

/// Builds each supernode's spanning tree and offsets, then checks every
/// non-tree voltage-source branch against the tree path (KVL). The residual
/// must vanish identically, so distinct symbols in a loop are a violation.
SupernodePartition validate_sources(const ValidatedCircuit& circuit, SupernodePartition partition);

/// Offsets over an explicitly given spanning tree: signed sum of source
/// values along the tree path from the reference, a source counting + when
/// traversed from its - terminal to its + terminal. Exposed so alternative
/// trees can be compared for the tree-independence property.
std::map<NodeId, Poly> tree_offsets(const ValidatedCircuit& circuit, const Supernode& supernode,
                                    const std::vector<TreeEdge>& tree);

/// Deterministic BFS spanning tree of one supernode's voltage-source
/// subgraph rooted at the reference; neighbor order follows the netlist,
/// reversed when requested (for tree-independence tests).
std::vector<TreeEdge> build_spanning_tree(const ValidatedCircuit& circuit,
                                          const Supernode& supernode, const NodeId& root,
                                          bool reverse_order = false);

/// One expression per node, sorted by node token, skipping non-datum
/// reference nodes (their voltages are the reduced unknowns).
std::vector<VoltageExpression> internal_expressions(const SupernodePartition& partition);

}  // namespace sna
