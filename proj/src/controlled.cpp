#include "sna/controlled.hpp"

#include "sna/errors.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>
#include <stdexcept>

namespace sna {

namespace {

std::map<std::string, const Element*> index_elements(const Circuit& circuit)
{
    std::map<std::string, const Element*> by_id;
    for (const Element& e : circuit.elements) {
        by_id.emplace(e.id, &e);
    }
    return by_id;
}

Symbol fresh_symbol(const std::string& base, std::set<Symbol>& used)
{
    Symbol candidate = base;
    while (used.count(candidate)) {
        candidate += "_";
    }
    used.insert(candidate);
    return candidate;
}

}  // namespace

std::pair<Circuit, TapeRecord> tape(const ValidatedCircuit& circuit)
{
    Circuit taped = circuit.circuit();
    TapeRecord record;
    std::set<Symbol> used = circuit_symbols(taped);
    for (Element& e : taped.elements) {
        if (!is_controlled_kind(e.kind)) {
            continue;
        }
        TapeEntry entry;
        entry.element_id = e.id;
        entry.kind = e.kind;
        entry.control_nodes = e.control_nodes;
        entry.control_element = e.control_element;
        entry.gain = *e.value;
        entry.taped_symbol = fresh_symbol("_w_" + e.id, used);

        e.kind = is_voltage_kind(e.kind) ? ElementKind::VSource : ElementKind::ISource;
        e.value = Value{entry.taped_symbol};
        e.control_nodes.reset();
        e.control_element.reset();
        record.entries.push_back(std::move(entry));
    }
    refresh_nodes(taped);
    return {std::move(taped), std::move(record)};
}

AffineForm node_voltage(const SupernodePartition& partition, const NodeId& node)
{
    AffineForm voltage{partition.offsets.at(node)};
    const SupernodeId& super = partition.super_of.at(node);
    if (super != partition.datum) {
        voltage.add_unknown(supernode_by_id(partition, super).reference, Poly::constant(1));
    }
    return voltage;
}

namespace {

/// Nodes reachable from `start` over the listed voltage-source branches
/// with `excluded` removed.
std::set<NodeId> side_component(const Circuit& circuit, const std::vector<std::string>& branch_ids,
                                const std::string& excluded, const NodeId& start)
{
    const auto by_id = index_elements(circuit);
    std::map<NodeId, std::vector<NodeId>> adjacency;
    for (const std::string& id : branch_ids) {
        if (id == excluded) {
            continue;
        }
        const Element* e = by_id.at(id);
        adjacency[e->pos].push_back(e->neg);
        adjacency[e->neg].push_back(e->pos);
    }
    std::set<NodeId> side{start};
    std::deque<NodeId> frontier{start};
    while (!frontier.empty()) {
        NodeId node = frontier.front();
        frontier.pop_front();
        for (const NodeId& next : adjacency[node]) {
            if (side.insert(next).second) {
                frontier.push_back(next);
            }
        }
    }
    return side;
}

/// Net current entering the node set `side` through admittance and
/// current-source branches. Voltage-source branches are skipped: inside the
/// control path none cross the cut, and in branch-current recovery the
/// crossing chords carry the zero-circulation choice.
AffineForm cut_current(const Circuit& circuit, const SupernodePartition& partition,
                       const std::set<NodeId>& side)
{
    AffineForm total;
    for (const Element& e : circuit.elements) {
        const bool pos_in = side.count(e.pos) > 0;
        const bool neg_in = side.count(e.neg) > 0;
        if (pos_in == neg_in) {
            continue;
        }
        if (e.kind == ElementKind::Admittance) {
            const NodeId& near = pos_in ? e.pos : e.neg;
            const NodeId& far = pos_in ? e.neg : e.pos;
            total += (node_voltage(partition, far) - node_voltage(partition, near))
                         .scaled_by(value_poly(*e.value));
        } else if (e.kind == ElementKind::ISource) {
            if (neg_in) {
                total += AffineForm{value_poly(*e.value)};
            } else {
                total -= AffineForm{value_poly(*e.value)};
            }
        }
    }
    return total;
}

}  // namespace

AffineForm vsource_current(const std::string& element_id, const ValidatedCircuit& taped,
                           const SupernodePartition& partition)
{
    const Circuit& circuit = taped.circuit();
    const auto by_id = index_elements(circuit);
    const auto it = by_id.find(element_id);
    if (it == by_id.end()) {
        throw Error(ErrorCode::UnknownControlElement,
                    "no element '" + element_id + "' to take a current through");
    }
    const Element& e = *it->second;
    if (e.kind == ElementKind::ISource) {
        return AffineForm{value_poly(*e.value)};
    }
    if (e.kind != ElementKind::VSource) {
        throw Error(ErrorCode::UnknownControlElement,
                    "current through " + std::string(kind_name(e.kind)) + " '" + element_id
                        + "' is not a supported controlling quantity");
    }
    const Supernode& s = supernode_by_id(partition, partition.super_of.at(e.pos));
    const std::set<NodeId> side = side_component(circuit, s.vbranches, e.id, e.pos);
    if (side.count(e.neg)) {
        throw Error(ErrorCode::ControlBranchNotTree,
                    "voltage source '" + element_id
                        + "' lies on a voltage-source loop; its branch current is not determined by "
                          "the supernode tree");
    }
    return cut_current(circuit, partition, side);
}

AffineForm controlling_value(const TapeEntry& entry, const ValidatedCircuit& taped,
                             const SupernodePartition& partition)
{
    if (entry.control_nodes) {
        return node_voltage(partition, entry.control_nodes->first)
             - node_voltage(partition, entry.control_nodes->second);
    }
    const Circuit& circuit = taped.circuit();
    const auto by_id = index_elements(circuit);
    const auto it = by_id.find(*entry.control_element);
    if (it == by_id.end()) {
        throw Error(ErrorCode::UnknownControlElement,
                    "element '" + entry.element_id + "' is controlled by undefined element '"
                        + *entry.control_element + "'");
    }
    const Element& target = *it->second;
    if (target.kind == ElementKind::Admittance) {
        return (node_voltage(partition, target.pos) - node_voltage(partition, target.neg))
            .scaled_by(value_poly(*target.value));
    }
    return vsource_current(target.id, taped, partition);
}

namespace {

AffineForm substitute_symbol(const AffineForm& form, const Symbol& symbol,
                             const AffineForm& replacement)
{
    auto [coef, rest] = form.constant.split_linear(symbol);
    AffineForm out{rest};
    out += replacement.scaled_by(coef);
    for (const auto& [node, cf] : form.coeffs) {
        auto [ccoef, crest] = cf.split_linear(symbol);
        if (!ccoef.is_zero()) {
            if (!replacement.is_constant()) {
                throw std::logic_error("eliminating '" + symbol
                                       + "' would multiply two reduced unknowns");
            }
            out.add_unknown(node, crest + ccoef * replacement.constant);
        } else {
            out.add_unknown(node, crest);
        }
    }
    return out;
}

AffineForm substitute_resolved(AffineForm form, const std::map<Symbol, AffineForm>& resolved)
{
    for (const auto& [symbol, value] : resolved) {
        if (form.contains_symbol(symbol)) {
            form = substitute_symbol(form, symbol, value);
        }
    }
    return form;
}

/// Strongly connected components of the dependency graph, dependencies
/// first.
std::vector<std::vector<std::size_t>> scc_order(const std::vector<std::set<std::size_t>>& deps)
{
    const std::size_t n = deps.size();
    std::vector<int> index(n, -1);
    std::vector<int> lowlink(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::vector<std::vector<std::size_t>> components;
    int counter = 0;

    std::function<void(std::size_t)> strongconnect = [&](std::size_t v) {
        index[v] = lowlink[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
        for (std::size_t w : deps[v]) {
            if (index[w] < 0) {
                strongconnect(w);
                lowlink[v] = std::min(lowlink[v], lowlink[w]);
            } else if (on_stack[w]) {
                lowlink[v] = std::min(lowlink[v], index[w]);
            }
        }
        if (lowlink[v] == index[v]) {
            std::vector<std::size_t> component;
            for (;;) {
                std::size_t w = stack.back();
                stack.pop_back();
                on_stack[w] = false;
                component.push_back(w);
                if (w == v) {
                    break;
                }
            }
            std::sort(component.begin(), component.end());
            components.push_back(std::move(component));
        }
    };
    for (std::size_t v = 0; v < n; ++v) {
        if (index[v] < 0) {
            strongconnect(v);
        }
    }
    return components;
}

}  // namespace

UntapeResult untape(const ReducedSystem& system, const TapeRecord& record,
                    const ValidatedCircuit& taped, const SupernodePartition& partition)
{
    UntapeResult result;
    result.system = system;

    const std::size_t m = record.entries.size();
    std::vector<Symbol> symbols(m);
    std::vector<AffineForm> laws(m);
    for (std::size_t i = 0; i < m; ++i) {
        const TapeEntry& entry = record.entries[i];
        symbols[i] = entry.taped_symbol;
        laws[i] = controlling_value(entry, taped, partition).scaled_by(value_poly(entry.gain));
    }

    std::vector<std::set<std::size_t>> deps(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (laws[i].contains_symbol(symbols[j])) {
                deps[i].insert(j);
            }
        }
    }

    for (const std::vector<std::size_t>& component : scc_order(deps)) {
        std::vector<AffineForm> forms;
        for (std::size_t i : component) {
            forms.push_back(substitute_resolved(laws[i], result.resolved));
        }
        if (component.size() == 1 && !forms.front().contains_symbol(symbols[component.front()])) {
            result.resolved.emplace(symbols[component.front()], std::move(forms.front()));
            continue;
        }

        // A control cycle: solve w_i - sum a_ij w_j = b_i exactly. The
        // coupling coefficients must be plain numbers; symbolic ones would
        // push the result out of the polynomial ring.
        const std::size_t k = component.size();
        std::vector<std::vector<Rational>> lhs(k, std::vector<Rational>(k, 0));
        std::vector<AffineForm> rhs(k);
        for (std::size_t r = 0; r < k; ++r) {
            AffineForm f = std::move(forms[r]);
            lhs[r][r] = 1;
            for (std::size_t cidx = 0; cidx < k; ++cidx) {
                const Symbol& w = symbols[component[cidx]];
                for (const auto& [node, cf] : f.coeffs) {
                    if (cf.contains(w)) {
                        throw Error(ErrorCode::CyclicControlDependency,
                                    "control cycle through '" + record.entries[component[r]].element_id
                                        + "' couples '" + w + "' to a reduced unknown");
                    }
                }
                auto [coef, rest] = f.constant.split_linear(w);
                f.constant = rest;
                if (coef.is_zero()) {
                    continue;
                }
                if (!coef.is_constant()) {
                    throw Error(ErrorCode::CyclicControlDependency,
                                "control cycle through '" + record.entries[component[r]].element_id
                                    + "' has symbolic coupling coefficient " + coef.render()
                                    + "; cycles are solvable only with numeric coupling");
                }
                lhs[r][cidx] -= coef.constant_value();
            }
            rhs[r] = std::move(f);
        }

        for (std::size_t col = 0; col < k; ++col) {
            std::size_t pivot = col;
            while (pivot < k && lhs[pivot][col] == 0) {
                ++pivot;
            }
            if (pivot == k) {
                throw Error(ErrorCode::SingularControlSystem,
                            "the control substitution system has no unique solution");
            }
            std::swap(lhs[pivot], lhs[col]);
            std::swap(rhs[pivot], rhs[col]);
            const Rational inv = Rational(1) / lhs[col][col];
            for (std::size_t c = 0; c < k; ++c) {
                lhs[col][c] *= inv;
            }
            rhs[col] = rhs[col].scaled(inv);
            for (std::size_t r = 0; r < k; ++r) {
                if (r == col || lhs[r][col] == 0) {
                    continue;
                }
                const Rational factor = lhs[r][col];
                for (std::size_t c = 0; c < k; ++c) {
                    lhs[r][c] -= factor * lhs[col][c];
                }
                rhs[r] -= rhs[col].scaled(factor);
            }
        }
        for (std::size_t r = 0; r < k; ++r) {
            result.resolved.emplace(symbols[component[r]], std::move(rhs[r]));
        }
    }

    for (std::size_t row = 0; row < result.system.rhs.size(); ++row) {
        AffineForm f = substitute_resolved(AffineForm{result.system.rhs[row]}, result.resolved);
        for (const auto& [node, cf] : f.coeffs) {
            const auto col_it =
                std::find(result.system.unknowns.begin(), result.system.unknowns.end(), node);
            if (col_it == result.system.unknowns.end()) {
                throw std::logic_error("untape produced a term over unknown node '" + node + "'");
            }
            const std::size_t col = col_it - result.system.unknowns.begin();
            result.system.matrix[row][col] -= cf;
        }
        result.system.rhs[row] = f.constant;
    }

    for (const VoltageExpression& expr : result.system.expressions) {
        result.expressions.push_back(ResolvedExpression{
            expr.node, expr.reference,
            substitute_resolved(AffineForm{expr.offset}, result.resolved)});
    }
    return result;
}

Analysis analyze(const Circuit& circuit)
{
    Analysis analysis;
    analysis.circuit = circuit;

    const ValidatedCircuit validated = validate_circuit(circuit);
    auto [taped_circuit, record] = tape(validated);
    analysis.taped = std::move(taped_circuit);
    analysis.record = std::move(record);

    const ValidatedCircuit taped = validate_circuit(analysis.taped);
    SupernodePartition partition = find_supernodes(taped, false);
    partition = choose_references(partition, circuit.ground,
                                  overrides_from_nodes(partition, circuit.reference_overrides));
    analysis.partition = validate_sources(taped, partition);
    analysis.contraction = contract(taped, analysis.partition);

    const ReducedSystem assembled = assemble_system(taped, analysis.partition);
    UntapeResult untaped = untape(assembled, analysis.record, taped, analysis.partition);
    analysis.system = std::move(untaped.system);
    analysis.expressions = std::move(untaped.expressions);
    analysis.resolved_taped = std::move(untaped.resolved);

    const auto by_id = index_elements(analysis.taped);
    for (const std::string& id : analysis.contraction.internal) {
        const Element& e = *by_id.at(id);
        const Poly voltage =
            analysis.partition.offsets.at(e.pos) - analysis.partition.offsets.at(e.neg);
        analysis.internal_elements.push_back(InternalBranch{
            id, substitute_resolved(AffineForm{voltage}, analysis.resolved_taped)});
    }

    for (const Supernode& s : analysis.partition.supernodes) {
        std::set<std::string> in_tree;
        std::vector<std::string> tree_ids;
        for (const TreeEdge& edge : s.tree) {
            in_tree.insert(edge.element);
            tree_ids.push_back(edge.element);
        }
        for (const std::string& id : s.vbranches) {
            if (!in_tree.count(id)) {
                analysis.source_currents.emplace(id, AffineForm{});
                continue;
            }
            const Element& e = *by_id.at(id);
            const std::set<NodeId> side =
                side_component(analysis.taped, tree_ids, id, e.pos);
            analysis.source_currents.emplace(
                id, substitute_resolved(cut_current(analysis.taped, analysis.partition, side),
                                        analysis.resolved_taped));
        }
    }
    return analysis;
}

}  // namespace sna
