#pragma once

#include "sna/netlist.hpp"

#include <cstdint>

namespace sna {

/// Knobs for the random circuit generator. Circuits are always connected:
/// a spanning tree is laid down first, then extra elements. Voltage-source
/// branches (independent and controlled) are tracked so that only the loop
/// options below can close a voltage-source loop, and controlled sources
/// never do.
struct GenOptions {
    std::uint64_t seed = 0;
    int max_nodes = 8;
    int max_elements = 12;
    /// Admittances and independent current sources only.
    bool admittances_only = false;
    bool allow_vsources = true;
    /// Controlled sources, always with numeric gains.
    bool allow_controlled = false;
    /// Extra voltage sources may close loops whose values satisfy KVL.
    bool allow_consistent_loops = false;
    /// Guarantee at least one KVL-consistent voltage-source loop.
    bool force_loop = false;
    /// Guarantee a voltage-source loop that violates KVL.
    bool inject_violation = false;
    /// Symbolic element values instead of random rationals.
    bool symbolic_values = false;
    /// CCVS/CCCS may sense the current through a voltage source (kept off
    /// whenever loops are possible: a looped controlling branch has no
    /// tree-determined current).
    bool control_through_vsource = false;
};

Circuit random_circuit(const GenOptions& options);

}  // namespace sna
