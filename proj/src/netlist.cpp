#include "sna/netlist.hpp"

#include "sna/errors.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <queue>
#include <sstream>

namespace sna {

bool is_numeric(const Value& v)
{
    return std::holds_alternative<Rational>(v);
}

const Rational& numeric_value(const Value& v)
{
    return std::get<Rational>(v);
}

Poly value_poly(const Value& v)
{
    if (is_numeric(v)) {
        return Poly::constant(numeric_value(v));
    }
    return Poly::symbol(std::get<Symbol>(v));
}

std::string value_token(const Value& v)
{
    if (is_numeric(v)) {
        return to_string(numeric_value(v));
    }
    return std::get<Symbol>(v);
}

const char* kind_name(ElementKind kind)
{
    switch (kind) {
    case ElementKind::Admittance: return "admittance";
    case ElementKind::Resistor: return "resistor";
    case ElementKind::VSource: return "voltage source";
    case ElementKind::ISource: return "current source";
    case ElementKind::VCVS: return "VCVS";
    case ElementKind::VCCS: return "VCCS";
    case ElementKind::CCVS: return "CCVS";
    case ElementKind::CCCS: return "CCCS";
    case ElementKind::Nullator: return "nullator";
    case ElementKind::Norator: return "norator";
    }
    return "element";
}

bool is_voltage_kind(ElementKind kind)
{
    return kind == ElementKind::VSource || kind == ElementKind::VCVS || kind == ElementKind::CCVS;
}

bool is_current_kind(ElementKind kind)
{
    return kind == ElementKind::ISource || kind == ElementKind::VCCS || kind == ElementKind::CCCS;
}

bool is_controlled_kind(ElementKind kind)
{
    return kind == ElementKind::VCVS || kind == ElementKind::VCCS || kind == ElementKind::CCVS
        || kind == ElementKind::CCCS;
}

void refresh_nodes(Circuit& circuit)
{
    circuit.nodes.clear();
    for (const Element& e : circuit.elements) {
        circuit.nodes.insert(e.pos);
        circuit.nodes.insert(e.neg);
        if (e.control_nodes) {
            circuit.nodes.insert(e.control_nodes->first);
            circuit.nodes.insert(e.control_nodes->second);
        }
    }
}

namespace {

bool is_identifier(const std::string& token)
{
    if (token.empty()) {
        return false;
    }
    if (!std::isalpha(static_cast<unsigned char>(token.front())) && token.front() != '_') {
        return false;
    }
    return std::all_of(token.begin(), token.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
}

bool is_reciprocal_token(const std::string& token)
{
    return token.size() > 2 && token.rfind("1/", 0) == 0 && is_identifier(token.substr(2));
}

Value parse_value_token(const std::string& token, int line)
{
    if (auto numeric = parse_rational(token)) {
        return Value{*numeric};
    }
    if (is_identifier(token) || is_reciprocal_token(token)) {
        return Value{Symbol(token)};
    }
    throw SyntaxError(line, "'" + token + "' is neither a rational literal nor a symbol");
}

std::vector<std::string> tokenize(const std::string& line)
{
    std::istringstream stream(line);
    std::vector<std::string> tokens;
    std::string token;
    while (stream >> token) {
        tokens.push_back(token);
    }
    return tokens;
}

void require_arity(const std::vector<std::string>& tokens, std::size_t expected, int line,
                   const char* shape)
{
    if (tokens.size() != expected) {
        throw SyntaxError(line, "expected '" + std::string(shape) + "' but found "
                                    + std::to_string(tokens.size()) + " fields");
    }
}

/// The reciprocal of an admittance value, used when turning resistor cards
/// into admittances and back.
Value reciprocal_value(const Value& v, int line)
{
    if (is_numeric(v)) {
        const Rational& r = numeric_value(v);
        if (r == 0) {
            throw SyntaxError(line, "resistance must be nonzero");
        }
        return Value{Rational(1) / r};
    }
    const Symbol& s = std::get<Symbol>(v);
    if (s.rfind("1/", 0) == 0) {
        return Value{s.substr(2)};
    }
    return Value{"1/" + s};
}

}  // namespace

Circuit parse_netlist(const std::string& text)
{
    Circuit circuit;
    bool ground_set = false;
    std::vector<std::pair<int, NodeId>> ref_requests;
    std::map<std::string, ElementKind> kinds_by_id;

    std::istringstream stream(text);
    std::string raw_line;
    int line_no = 0;
    while (std::getline(stream, raw_line)) {
        ++line_no;
        const auto first = raw_line.find_first_not_of(" \t\r");
        if (first == std::string::npos || raw_line[first] == '#' || raw_line[first] == '*') {
            continue;
        }
        const std::vector<std::string> tokens = tokenize(raw_line);

        if (tokens.front().front() == '.') {
            std::string directive = tokens.front();
            std::transform(directive.begin(), directive.end(), directive.begin(),
                           [](unsigned char c) { return std::tolower(c); });
            if (directive == ".ground") {
                require_arity(tokens, 2, line_no, ".ground <node>");
                if (ground_set) {
                    throw SyntaxError(line_no, "duplicate .ground directive");
                }
                circuit.ground = tokens[1];
                ground_set = true;
            } else if (directive == ".ref") {
                require_arity(tokens, 2, line_no, ".ref <node>");
                ref_requests.emplace_back(line_no, tokens[1]);
            } else {
                throw SyntaxError(line_no, "unknown directive '" + tokens.front() + "'");
            }
            continue;
        }

        Element element;
        element.id = tokens.front();
        const char letter = static_cast<char>(std::toupper(static_cast<unsigned char>(element.id.front())));
        switch (letter) {
        case 'Y':
        case 'R':
        case 'V':
        case 'I': {
            require_arity(tokens, 4, line_no, std::string(1, letter).append("<id> n+ n- <value>").c_str());
            element.pos = tokens[1];
            element.neg = tokens[2];
            element.value = parse_value_token(tokens[3], line_no);
            if (letter == 'Y') {
                element.kind = ElementKind::Admittance;
            } else if (letter == 'R') {
                element.kind = ElementKind::Admittance;
                element.value = reciprocal_value(*element.value, line_no);
            } else if (letter == 'V') {
                element.kind = ElementKind::VSource;
            } else {
                element.kind = ElementKind::ISource;
            }
            break;
        }
        case 'E':
        case 'G': {
            require_arity(tokens, 6, line_no, std::string(1, letter).append("<id> n+ n- cp cn <gain>").c_str());
            element.kind = letter == 'E' ? ElementKind::VCVS : ElementKind::VCCS;
            element.pos = tokens[1];
            element.neg = tokens[2];
            element.control_nodes = std::make_pair(tokens[3], tokens[4]);
            element.value = parse_value_token(tokens[5], line_no);
            break;
        }
        case 'H':
        case 'F': {
            require_arity(tokens, 5, line_no, std::string(1, letter).append("<id> n+ n- <elem> <gain>").c_str());
            element.kind = letter == 'H' ? ElementKind::CCVS : ElementKind::CCCS;
            element.pos = tokens[1];
            element.neg = tokens[2];
            element.control_element = tokens[3];
            element.value = parse_value_token(tokens[4], line_no);
            break;
        }
        case 'N':
        case 'O': {
            require_arity(tokens, 3, line_no, std::string(1, letter).append("<id> n+ n-").c_str());
            element.kind = letter == 'N' ? ElementKind::Nullator : ElementKind::Norator;
            element.pos = tokens[1];
            element.neg = tokens[2];
            break;
        }
        default:
            throw SyntaxError(line_no, "unknown card '" + element.id + "'");
        }

        if (kinds_by_id.count(element.id)) {
            throw Error(ErrorCode::DuplicateElementId, "element '" + element.id + "' defined twice");
        }
        kinds_by_id.emplace(element.id, element.kind);
        circuit.elements.push_back(std::move(element));
    }

    refresh_nodes(circuit);

    for (const Element& e : circuit.elements) {
        if (!e.control_element) {
            continue;
        }
        auto it = kinds_by_id.find(*e.control_element);
        if (it == kinds_by_id.end()) {
            throw Error(ErrorCode::UnknownControlElement,
                        "element '" + e.id + "' is controlled by undefined element '"
                            + *e.control_element + "'");
        }
        const ElementKind control_kind = it->second;
        if (control_kind != ElementKind::Admittance && control_kind != ElementKind::Resistor
            && control_kind != ElementKind::VSource) {
            throw Error(ErrorCode::UnknownControlElement,
                        "element '" + e.id + "' is controlled by " + kind_name(control_kind) + " '"
                            + *e.control_element
                            + "'; controlling elements must be admittances, resistors, or voltage sources");
        }
    }

    if (!circuit.nodes.count(circuit.ground)) {
        throw Error(ErrorCode::MissingGroundNode,
                    "ground node '" + circuit.ground + "' never appears as a terminal");
    }
    for (const auto& [line, node] : ref_requests) {
        if (!circuit.nodes.count(node)) {
            throw SyntaxError(line, ".ref names unknown node '" + node + "'");
        }
        circuit.reference_overrides.push_back(node);
    }
    return circuit;
}

std::string serialize_netlist(const Circuit& circuit)
{
    std::ostringstream out;
    out << ".ground " << circuit.ground << "\n";
    for (const NodeId& node : circuit.reference_overrides) {
        out << ".ref " << node << "\n";
    }
    for (const Element& e : circuit.elements) {
        out << e.id << ' ' << e.pos << ' ' << e.neg;
        switch (e.kind) {
        case ElementKind::Admittance:
        case ElementKind::Resistor: {
            Value value = *e.value;
            const char letter = static_cast<char>(std::toupper(static_cast<unsigned char>(e.id.front())));
            const bool resistor_card = letter == 'R';
            if (resistor_card) {
                if (is_numeric(value) && numeric_value(value) == 0) {
                    throw std::invalid_argument("cannot serialize zero admittance '" + e.id
                                                + "' as a resistor card");
                }
                value = reciprocal_value(value, 0);
            }
            out << ' ' << value_token(value);
            break;
        }
        case ElementKind::VSource:
        case ElementKind::ISource:
            out << ' ' << value_token(*e.value);
            break;
        case ElementKind::VCVS:
        case ElementKind::VCCS:
            out << ' ' << e.control_nodes->first << ' ' << e.control_nodes->second << ' '
                << value_token(*e.value);
            break;
        case ElementKind::CCVS:
        case ElementKind::CCCS:
            out << ' ' << *e.control_element << ' ' << value_token(*e.value);
            break;
        case ElementKind::Nullator:
        case ElementKind::Norator:
            break;
        }
        out << "\n";
    }
    return out.str();
}

ValidatedCircuit validate_circuit(const Circuit& circuit)
{
    std::vector<std::string> nullor_ids;
    for (const Element& e : circuit.elements) {
        if (e.kind == ElementKind::Nullator || e.kind == ElementKind::Norator) {
            nullor_ids.push_back(e.id);
        }
    }
    if (!nullor_ids.empty()) {
        throw UnsupportedNullorError(std::move(nullor_ids));
    }

    for (const Element& e : circuit.elements) {
        if (is_voltage_kind(e.kind) && e.pos == e.neg) {
            throw Error(ErrorCode::ShortedSource,
                        std::string(kind_name(e.kind)) + " '" + e.id
                            + "' has both terminals on node '" + e.pos + "'");
        }
    }

    if (!circuit.nodes.count(circuit.ground)) {
        throw Error(ErrorCode::MissingGroundNode,
                    "ground node '" + circuit.ground + "' never appears as a terminal");
    }

    std::map<NodeId, std::vector<NodeId>> adjacency;
    for (const NodeId& node : circuit.nodes) {
        adjacency[node];
    }
    for (const Element& e : circuit.elements) {
        adjacency[e.pos].push_back(e.neg);
        adjacency[e.neg].push_back(e.pos);
    }
    std::set<NodeId> seen;
    std::vector<std::vector<NodeId>> components;
    for (const NodeId& start : circuit.nodes) {
        if (seen.count(start)) {
            continue;
        }
        std::vector<NodeId> component;
        std::queue<NodeId> frontier;
        frontier.push(start);
        seen.insert(start);
        while (!frontier.empty()) {
            NodeId node = frontier.front();
            frontier.pop();
            component.push_back(node);
            for (const NodeId& next : adjacency[node]) {
                if (seen.insert(next).second) {
                    frontier.push(next);
                }
            }
        }
        std::sort(component.begin(), component.end());
        components.push_back(std::move(component));
    }
    if (components.size() > 1) {
        throw DisconnectedCircuitError(std::move(components));
    }

    return ValidatedCircuit(circuit);
}

Circuit bind_values(const Circuit& circuit, const std::map<Symbol, Rational>& bindings)
{
    Circuit bound = circuit;
    for (Element& e : bound.elements) {
        if (!e.value || is_numeric(*e.value)) {
            continue;
        }
        const Symbol& symbol = std::get<Symbol>(*e.value);
        auto it = bindings.find(symbol);
        if (it == bindings.end()) {
            throw Error(ErrorCode::UnboundSymbol, "no value bound for symbol '" + symbol + "'");
        }
        if (e.kind == ElementKind::Admittance && it->second <= 0) {
            throw Error(ErrorCode::NonpositiveAdmittance,
                        "admittance symbol '" + symbol + "' bound to "
                            + to_string(it->second));
        }
        e.value = Value{it->second};
    }
    return bound;
}

std::set<Symbol> circuit_symbols(const Circuit& circuit)
{
    std::set<Symbol> symbols;
    for (const Element& e : circuit.elements) {
        if (e.value && !is_numeric(*e.value)) {
            symbols.insert(std::get<Symbol>(*e.value));
        }
    }
    return symbols;
}

}  // namespace sna
