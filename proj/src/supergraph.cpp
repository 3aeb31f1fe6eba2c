#include "sna/supergraph.hpp"

#include "sna/errors.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>

namespace sna {

namespace {

bool counts_as_vsource(const Element& e, bool include_taped)
{
    if (e.kind == ElementKind::VSource) {
        return true;
    }
    return include_taped && (e.kind == ElementKind::VCVS || e.kind == ElementKind::CCVS);
}

}  // namespace

const Supernode& supernode_by_id(const SupernodePartition& partition, const SupernodeId& id)
{
    auto it = std::lower_bound(partition.supernodes.begin(), partition.supernodes.end(), id,
                               [](const Supernode& s, const SupernodeId& key) { return s.id < key; });
    if (it == partition.supernodes.end() || it->id != id) {
        throw std::logic_error("unknown supernode '" + id + "'");
    }
    return *it;
}

SupernodePartition find_supernodes(const ValidatedCircuit& circuit, bool include_taped)
{
    const Circuit& c = circuit.circuit();

    std::map<NodeId, std::vector<NodeId>> adjacency;
    for (const NodeId& node : c.nodes) {
        adjacency[node];
    }
    for (const Element& e : c.elements) {
        if (counts_as_vsource(e, include_taped)) {
            adjacency[e.pos].push_back(e.neg);
            adjacency[e.neg].push_back(e.pos);
        }
    }

    SupernodePartition partition;
    std::set<NodeId> seen;
    for (const NodeId& start : c.nodes) {
        if (seen.count(start)) {
            continue;
        }
        std::vector<NodeId> members;
        std::deque<NodeId> frontier{start};
        seen.insert(start);
        while (!frontier.empty()) {
            NodeId node = frontier.front();
            frontier.pop_front();
            members.push_back(node);
            for (const NodeId& next : adjacency[node]) {
                if (seen.insert(next).second) {
                    frontier.push_back(next);
                }
            }
        }
        std::sort(members.begin(), members.end());
        Supernode supernode;
        supernode.id = members.front();
        supernode.members = std::move(members);
        partition.supernodes.push_back(std::move(supernode));
    }

    std::sort(partition.supernodes.begin(), partition.supernodes.end(),
              [](const Supernode& a, const Supernode& b) { return a.id < b.id; });
    for (const Supernode& s : partition.supernodes) {
        for (const NodeId& node : s.members) {
            partition.super_of.emplace(node, s.id);
        }
    }
    for (Supernode& s : partition.supernodes) {
        for (const Element& e : c.elements) {
            if (counts_as_vsource(e, include_taped) && partition.super_of.at(e.pos) == s.id) {
                s.vbranches.push_back(e.id);
            }
        }
    }
    partition.datum = partition.super_of.at(c.ground);
    return partition;
}

SupernodePartition choose_references(SupernodePartition partition, const NodeId& ground,
                                     const std::map<SupernodeId, NodeId>& overrides)
{
    for (const auto& [super_id, node] : overrides) {
        const Supernode* found = nullptr;
        for (const Supernode& s : partition.supernodes) {
            if (s.id == super_id) {
                found = &s;
                break;
            }
        }
        if (!found) {
            throw Error(ErrorCode::InvalidReferenceOverride,
                        "no supernode named '" + super_id + "'");
        }
        if (!std::binary_search(found->members.begin(), found->members.end(), node)) {
            throw Error(ErrorCode::InvalidReferenceOverride,
                        "node '" + node + "' is not a member of supernode '" + super_id + "'");
        }
        if (super_id == partition.datum && node != ground) {
            throw Error(ErrorCode::InvalidReferenceOverride,
                        "the supernode containing ground must keep ground '" + ground
                            + "' as its reference");
        }
    }
    for (Supernode& s : partition.supernodes) {
        if (s.id == partition.datum) {
            s.reference = ground;
        } else if (auto it = overrides.find(s.id); it != overrides.end()) {
            s.reference = it->second;
        } else {
            s.reference = s.members.front();
        }
    }
    return partition;
}

std::map<SupernodeId, NodeId> overrides_from_nodes(const SupernodePartition& partition,
                                                   const std::vector<NodeId>& nodes)
{
    std::map<SupernodeId, NodeId> overrides;
    for (const NodeId& node : nodes) {
        auto super_it = partition.super_of.find(node);
        if (super_it == partition.super_of.end()) {
            throw Error(ErrorCode::InvalidReferenceOverride,
                        "reference request names unknown node '" + node + "'");
        }
        auto [it, inserted] = overrides.emplace(super_it->second, node);
        if (!inserted && it->second != node) {
            throw Error(ErrorCode::InvalidReferenceOverride,
                        "conflicting reference requests '" + it->second + "' and '" + node
                            + "' for supernode '" + super_it->second + "'");
        }
    }
    return overrides;
}

std::vector<TreeEdge> build_spanning_tree(const ValidatedCircuit& circuit,
                                          const Supernode& supernode, const NodeId& root,
                                          bool reverse_order)
{
    const Circuit& c = circuit.circuit();
    std::map<std::string, const Element*> by_id;
    for (const Element& e : c.elements) {
        by_id.emplace(e.id, &e);
    }
    std::vector<const Element*> branches;
    for (const std::string& id : supernode.vbranches) {
        branches.push_back(by_id.at(id));
    }
    if (reverse_order) {
        std::reverse(branches.begin(), branches.end());
    }

    std::vector<TreeEdge> tree;
    std::set<NodeId> visited{root};
    std::deque<NodeId> frontier{root};
    while (!frontier.empty()) {
        NodeId node = frontier.front();
        frontier.pop_front();
        for (const Element* e : branches) {
            NodeId other;
            if (e->pos == node) {
                other = e->neg;
            } else if (e->neg == node) {
                other = e->pos;
            } else {
                continue;
            }
            if (visited.insert(other).second) {
                tree.push_back(TreeEdge{e->id, node, other});
                frontier.push_back(other);
            }
        }
    }
    return tree;
}

std::map<NodeId, Poly> tree_offsets(const ValidatedCircuit& circuit, const Supernode& supernode,
                                    const std::vector<TreeEdge>& tree)
{
    const Circuit& c = circuit.circuit();
    std::map<std::string, const Element*> by_id;
    for (const Element& e : c.elements) {
        by_id.emplace(e.id, &e);
    }
    std::map<NodeId, Poly> offsets;
    for (const NodeId& member : supernode.members) {
        offsets.emplace(member, Poly::zero());
    }
    for (const TreeEdge& edge : tree) {
        const Element& e = *by_id.at(edge.element);
        const Poly value = value_poly(*e.value);
        if (edge.child == e.pos) {
            offsets[edge.child] = offsets.at(edge.parent) + value;
        } else {
            offsets[edge.child] = offsets.at(edge.parent) - value;
        }
    }
    return offsets;
}

namespace {

/// Elements along the tree cycle closed by a chord from `a` to `b`.
std::vector<std::string> loop_elements(const std::vector<TreeEdge>& tree, const NodeId& a,
                                       const NodeId& b)
{
    std::map<NodeId, std::pair<NodeId, std::string>> up;
    std::map<NodeId, int> depth;
    for (const TreeEdge& edge : tree) {
        if (!depth.count(edge.parent)) {
            depth[edge.parent] = 0;
        }
        depth[edge.child] = depth[edge.parent] + 1;
        up[edge.child] = {edge.parent, edge.element};
    }
    NodeId x = a;
    NodeId y = b;
    std::vector<std::string> from_a;
    std::vector<std::string> from_b;
    while (depth[x] > depth[y]) {
        from_a.push_back(up[x].second);
        x = up[x].first;
    }
    while (depth[y] > depth[x]) {
        from_b.push_back(up[y].second);
        y = up[y].first;
    }
    while (x != y) {
        from_a.push_back(up[x].second);
        x = up[x].first;
        from_b.push_back(up[y].second);
        y = up[y].first;
    }
    from_a.insert(from_a.end(), from_b.rbegin(), from_b.rend());
    return from_a;
}

}  // namespace

SupernodePartition validate_sources(const ValidatedCircuit& circuit, SupernodePartition partition)
{
    const Circuit& c = circuit.circuit();
    std::map<std::string, const Element*> by_id;
    for (const Element& e : c.elements) {
        by_id.emplace(e.id, &e);
    }
    partition.offsets.clear();
    for (Supernode& s : partition.supernodes) {
        if (s.reference.empty()) {
            throw std::logic_error("validate_sources before choose_references");
        }
        s.tree = build_spanning_tree(circuit, s, s.reference);
        std::map<NodeId, Poly> offsets = tree_offsets(circuit, s, s.tree);

        std::set<std::string> in_tree;
        for (const TreeEdge& edge : s.tree) {
            in_tree.insert(edge.element);
        }
        for (const std::string& id : s.vbranches) {
            if (in_tree.count(id)) {
                continue;
            }
            const Element& chord = *by_id.at(id);
            const Poly residual =
                offsets.at(chord.pos) - offsets.at(chord.neg) - value_poly(*chord.value);
            if (!residual.is_zero()) {
                std::vector<std::string> loop{id};
                const auto path = loop_elements(s.tree, chord.pos, chord.neg);
                loop.insert(loop.end(), path.begin(), path.end());
                throw KVLViolationError(s.id, std::move(loop), residual.render());
            }
        }
        for (auto& [node, offset] : offsets) {
            partition.offsets.emplace(node, std::move(offset));
        }
    }
    return partition;
}

std::vector<VoltageExpression> internal_expressions(const SupernodePartition& partition)
{
    std::vector<VoltageExpression> expressions;
    for (const Supernode& s : partition.supernodes) {
        for (const NodeId& node : s.members) {
            if (s.id != partition.datum && node == s.reference) {
                continue;
            }
            expressions.push_back(VoltageExpression{node, s.reference, partition.offsets.at(node)});
        }
    }
    std::sort(expressions.begin(), expressions.end(),
              [](const VoltageExpression& a, const VoltageExpression& b) { return a.node < b.node; });
    return expressions;
}

}  // namespace sna
