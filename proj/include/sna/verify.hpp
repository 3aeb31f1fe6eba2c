#pragma once

#include "sna/controlled.hpp"
#include "sna/linsolve.hpp"
#include "sna/netlist.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sna {

struct Solution {
    /// Every node of the circuit; ground maps to 0.
    std::map<NodeId, Rational> node_voltages;
    /// Current through each voltage-source branch (independent or
    /// controlled), measured pos -> neg through the element.
    std::map<std::string, Rational> branch_currents;
};

/// Exact solve of the reduced system; returns the reference-node voltages
/// keyed by node. Throws SingularSystem when the system has no unique
/// solution.
std::map<NodeId, Rational> solve_reduced(const ReducedSystem& system,
                                         const std::map<Symbol, Rational>& bindings);

/// Extends the reduced solution to every node via the voltage expressions
/// and recovers voltage-source branch currents from the supernode trees.
Solution back_substitute(const Analysis& analysis, const std::map<NodeId, Rational>& reduced,
                         const std::map<Symbol, Rational>& bindings);

/// The full pipeline on a numeric circuit: analyze, solve, back-substitute.
Solution solve_circuit(const Circuit& circuit);

/// Classical MNA over a fully numeric circuit: one voltage unknown per
/// non-ground node plus one current unknown per voltage-source-like
/// element. Kept free of any supernode machinery so it can serve as an
/// independent oracle.
struct MnaSystem {
    std::vector<NodeId> node_order;
    std::vector<std::string> current_elements;
    std::vector<std::vector<Rational>> matrix;
    std::vector<Rational> rhs;
};

MnaSystem mna_system(const Circuit& circuit);

/// Solves the MNA system. Free directions that move only branch currents
/// are circulations around voltage-source loops; those currents take the
/// value 0. A free direction that moves any node voltage, or an
/// inconsistent row, is a SingularSystem.
Solution mna_solve(const MnaSystem& system, const Circuit& circuit);

struct ResidualEntry {
    /// "kcl" for a node current balance, "law" for an element equation.
    std::string kind;
    std::string subject;
    Rational residual;
};

struct ResidualReport {
    std::vector<ResidualEntry> entries;

    bool all_zero() const;
    /// Human-readable summary of the first nonzero residual, or "all
    /// residuals zero".
    std::string describe() const;
};

/// First-principles check of a numeric circuit's solution: KCL at every
/// non-ground node (using the recovered source currents) and every element
/// law, all in exact arithmetic.
ResidualReport check_solution(const Circuit& circuit, const Solution& solution);

struct DifferentialVerdict {
    enum class Status { Pass, PassByAgreement, Fail };

    Status status = Status::Fail;
    std::string detail;
    std::optional<Solution> sna;
    std::optional<Solution> mna;

    bool ok() const { return status != Status::Fail; }
};

/// Runs the supernodal pipeline and the MNA oracle on the same numeric
/// circuit. Pass: both solve and every node voltage matches exactly, and
/// the supernodal solution survives check_solution. PassByAgreement: both
/// sides reject the circuit. Anything else fails with diagnostics.
DifferentialVerdict differential_check(const Circuit& circuit);

}  // namespace sna
