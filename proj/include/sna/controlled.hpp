#pragma once

#include "sna/assembly.hpp"
#include "sna/contraction.hpp"
#include "sna/netlist.hpp"
#include "sna/poly.hpp"
#include "sna/supergraph.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sna {

/// One taped controlled source: the fresh symbol standing in for its value
/// plus the control law needed to eliminate that symbol again.
struct TapeEntry {
    Symbol taped_symbol;
    std::string element_id;
    /// The original controlled kind (VCVS, VCCS, CCVS, CCCS).
    ElementKind kind = ElementKind::VCVS;
    std::optional<std::pair<NodeId, NodeId>> control_nodes;
    std::optional<std::string> control_element;
    Value gain;
};

struct TapeRecord {
    std::vector<TapeEntry> entries;

    bool empty() const { return entries.empty(); }
};

/// Rewrites controlled voltage sources as independent voltage sources and
/// controlled current sources as independent current sources, each valued
/// by a fresh symbol, recording the control laws.
std::pair<Circuit, TapeRecord> tape(const ValidatedCircuit& circuit);

/// The voltage of a node as an affine form over the reduced unknowns:
/// v(reference) + offset, with the constant 0 in place of v(reference) for
/// datum members. Offsets of a taped circuit may mention taped symbols.
AffineForm node_voltage(const SupernodePartition& partition, const NodeId& node);

/// The current through a voltage-source element, measured pos -> neg
/// through it. Splitting the supernode's voltage-source subgraph at the
/// element leaves the component holding the pos terminal; KCL over that cut
/// equates the current with the sum of admittance and current-source
/// contributions entering the component. Throws ControlBranchNotTree when
/// the element lies on a voltage-source loop (the two sides stay connected
/// without it), since the cut then determines no single branch current.
AffineForm vsource_current(const std::string& element_id, const ValidatedCircuit& taped,
                           const SupernodePartition& partition);

/// The controlling quantity of one taped source, before the gain is
/// applied: a sensed voltage difference, an admittance branch current, or a
/// voltage-source branch current.
AffineForm controlling_value(const TapeEntry& entry, const ValidatedCircuit& taped,
                             const SupernodePartition& partition);

/// A node-voltage expression after untaping. Offsets that depended on taped
/// symbols now reference the reduced unknowns, so the offset is affine.
struct ResolvedExpression {
    NodeId node;
    NodeId reference;
    AffineForm offset;
};

struct UntapeResult {
    ReducedSystem system;
    std::vector<ResolvedExpression> expressions;
    /// Each taped symbol's eliminated value over the reduced unknowns.
    std::map<Symbol, AffineForm> resolved;
};

/// Eliminates every taped symbol: solves the substitution system
/// w_j = gain_j * controlling_value_j (topologically; cycles by exact
/// linear solve, which requires the cyclic coupling coefficients to be
/// numeric), substitutes into the right-hand side and offsets, and moves
/// unknown-carrying terms into the matrix. The result mentions no taped
/// symbol.
UntapeResult untape(const ReducedSystem& system, const TapeRecord& record,
                    const ValidatedCircuit& taped, const SupernodePartition& partition);

/// A self-loop element together with its (already determined) branch
/// voltage offset(pos) - offset(neg).
struct InternalBranch {
    std::string element;
    AffineForm branch_voltage;
};

/// Everything the front end and the verifier need from one run of the
/// pipeline: validate, tape, partition, choose references, validate
/// sources, contract, assemble, untape.
struct Analysis {
    Circuit circuit;
    Circuit taped;
    TapeRecord record;
    SupernodePartition partition;
    ContractionGraph contraction;
    ReducedSystem system;
    std::vector<ResolvedExpression> expressions;
    std::vector<InternalBranch> internal_elements;
    std::map<Symbol, AffineForm> resolved_taped;
    /// Current through every voltage-source branch of the taped circuit
    /// (original element ids), pos -> neg; spanning-tree chords carry the
    /// zero-circulation choice 0.
    std::map<std::string, AffineForm> source_currents;
};

Analysis analyze(const Circuit& circuit);

}  // namespace sna
