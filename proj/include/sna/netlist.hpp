#pragma once

#include "sna/poly.hpp"
#include "sna/rational.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace sna {

/// Node names are arbitrary whitespace-free tokens; "0" is the conventional
/// ground name. Comparison is by exact token.
using NodeId = std::string;

/// An element value is either an exact rational or an opaque symbol token.
/// The same token always denotes the same symbol.
using Value = std::variant<Rational, Symbol>;

bool is_numeric(const Value& v);
const Rational& numeric_value(const Value& v);
/// Constant or single-symbol polynomial for the value.
Poly value_poly(const Value& v);
std::string value_token(const Value& v);

enum class ElementKind {
    Admittance,
    Resistor,
    VSource,
    ISource,
    VCVS,
    VCCS,
    CCVS,
    CCCS,
    Nullator,
    Norator,
};

const char* kind_name(ElementKind kind);

/// True for branches that impose a voltage (independent or controlled).
bool is_voltage_kind(ElementKind kind);
/// True for branches that impose a current (independent or controlled).
bool is_current_kind(ElementKind kind);
bool is_controlled_kind(ElementKind kind);

/// One netlist card. Two-terminal orientation is pos -> neg: a voltage
/// branch asserts v(pos) - v(neg) = value, a current branch drives its
/// current out of pos, through itself, into neg.
struct Element {
    std::string id;
    ElementKind kind = ElementKind::Admittance;
    NodeId pos;
    NodeId neg;
    /// Absent for Nullator/Norator; the controlled-source gain otherwise.
    std::optional<Value> value;
    /// Sensing node pair (cp, cn) for VCVS/VCCS.
    std::optional<std::pair<NodeId, NodeId>> control_nodes;
    /// Id of the element whose current (pos -> neg through it) controls a
    /// CCVS/CCCS.
    std::optional<std::string> control_element;

    bool operator==(const Element& other) const = default;
};

struct Circuit {
    std::vector<Element> elements;
    /// Every node token mentioned by any element (terminals and sensing
    /// nodes alike).
    std::set<NodeId> nodes;
    NodeId ground = "0";
    /// Nodes requested as local references via `.ref` directives.
    std::vector<NodeId> reference_overrides;

    bool operator==(const Circuit& other) const = default;
};

/// Recomputes Circuit::nodes from the element list.
void refresh_nodes(Circuit& circuit);

/// Parses the line-based netlist format. Lines starting with `#` or `*` are
/// comments; tokens are whitespace-separated; the card letter (the id's
/// first character) is case-insensitive:
///   Y<id> n+ n- <value>          admittance
///   R<id> n+ n- <value>          resistor (stored as the reciprocal admittance)
///   V<id> n+ n- <value>          voltage source, v(n+) - v(n-) = value
///   I<id> n+ n- <value>          current source, value flows n+ -> n- through it
///   E<id> n+ n- cp cn <gain>     VCVS: v(n+) - v(n-) = gain * (v(cp) - v(cn))
///   G<id> n+ n- cp cn <gain>     VCCS: current gain * (v(cp) - v(cn)), n+ -> n-
///   H<id> n+ n- <elem> <gain>    CCVS controlled by the current through <elem>
///   F<id> n+ n- <elem> <gain>    CCCS, same control convention
///   N<id> n+ n-                  nullator
///   O<id> n+ n-                  norator
///   .ground <node>               overrides the default ground "0"
///   .ref <node>                  requests <node> as a local reference
/// Values are rational literals (3, 0.25, 3/4), identifiers, or reciprocal
/// tokens of the form 1/<identifier>. A numeric resistor value becomes the
/// exact reciprocal admittance; a symbolic resistor Rx becomes the opaque
/// admittance symbol `1/Rx`. Controlling elements for H/F cards must name an
/// admittance, resistor, or voltage source card.
Circuit parse_netlist(const std::string& text);

/// Deterministic inverse of parse_netlist up to value normalization:
/// parse(serialize(parse(text))) reproduces the element list exactly.
std::string serialize_netlist(const Circuit& circuit);

/// Certifies a Circuit for analysis. Rejects nullator/norator elements,
/// shorted voltage branches (pos == neg), and disconnected element graphs.
/// Downstream passes only accept the wrapped form.
class ValidatedCircuit {
public:
    const Circuit& circuit() const { return circuit_; }

private:
    explicit ValidatedCircuit(Circuit circuit) : circuit_(std::move(circuit)) {}
    Circuit circuit_;

    friend ValidatedCircuit validate_circuit(const Circuit& circuit);
};

ValidatedCircuit validate_circuit(const Circuit& circuit);

/// Replaces every symbolic value by its binding. Bindings for admittance
/// symbols must be positive.
Circuit bind_values(const Circuit& circuit, const std::map<Symbol, Rational>& bindings);

/// All distinct symbol tokens appearing as element values or gains.
std::set<Symbol> circuit_symbols(const Circuit& circuit);

}  // namespace sna
