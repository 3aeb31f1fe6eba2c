#include "sna/verify.hpp"

#include "sna/errors.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace sna {

std::map<NodeId, Rational> solve_reduced(const ReducedSystem& system,
                                         const std::map<Symbol, Rational>& bindings)
{
    const std::size_t n = system.unknowns.size();
    std::vector<std::vector<Rational>> matrix(n, std::vector<Rational>(n));
    std::vector<Rational> rhs(n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            matrix[r][c] = system.matrix[r][c].eval(bindings);
        }
        rhs[r] = system.rhs[r].eval(bindings);
    }
    const LinearSolution solved = solve_linear(std::move(matrix), std::move(rhs));
    if (solved.status == LinearSolution::Status::Inconsistent) {
        throw SingularSystemError(static_cast<int>(solved.rank), static_cast<int>(n),
                                  "the reduced equations are inconsistent");
    }
    if (solved.status == LinearSolution::Status::Underdetermined) {
        throw SingularSystemError(static_cast<int>(solved.rank), static_cast<int>(n),
                                  "reference voltage "
                                      + unknown_token(system.unknowns[solved.free_columns.front()])
                                      + " is undetermined");
    }
    std::map<NodeId, Rational> solution;
    for (std::size_t i = 0; i < n; ++i) {
        solution.emplace(system.unknowns[i], solved.values[i]);
    }
    return solution;
}

Solution back_substitute(const Analysis& analysis, const std::map<NodeId, Rational>& reduced,
                         const std::map<Symbol, Rational>& bindings)
{
    Solution solution;
    solution.node_voltages.emplace(analysis.circuit.ground, 0);
    for (const NodeId& reference : analysis.system.unknowns) {
        solution.node_voltages.emplace(reference, reduced.at(reference));
    }
    for (const ResolvedExpression& expr : analysis.expressions) {
        Rational base = 0;
        if (expr.reference != analysis.circuit.ground) {
            base = reduced.at(expr.reference);
        }
        solution.node_voltages[expr.node] = base + expr.offset.eval(bindings, reduced);
    }
    for (const auto& [id, current] : analysis.source_currents) {
        solution.branch_currents.emplace(id, current.eval(bindings, reduced));
    }
    return solution;
}

Solution solve_circuit(const Circuit& circuit)
{
    const Analysis analysis = analyze(circuit);
    const std::map<NodeId, Rational> reduced = solve_reduced(analysis.system, {});
    return back_substitute(analysis, reduced, {});
}

namespace {

const Rational& numeric_or_throw(const Element& e)
{
    if (!is_numeric(*e.value)) {
        throw Error(ErrorCode::UnboundSymbol,
                    "element '" + e.id + "' carries unbound symbol '"
                        + std::get<Symbol>(*e.value) + "'");
    }
    return numeric_value(*e.value);
}

}  // namespace

MnaSystem mna_system(const Circuit& circuit)
{
    MnaSystem system;
    for (const NodeId& node : circuit.nodes) {
        if (node != circuit.ground) {
            system.node_order.push_back(node);
        }
    }
    std::map<std::string, std::size_t> current_index;
    for (const Element& e : circuit.elements) {
        if (is_voltage_kind(e.kind)) {
            current_index.emplace(e.id, system.node_order.size() + system.current_elements.size());
            system.current_elements.push_back(e.id);
        }
    }

    const std::size_t dim = system.node_order.size() + system.current_elements.size();
    system.matrix.assign(dim, std::vector<Rational>(dim));
    system.rhs.assign(dim, 0);

    std::map<NodeId, std::size_t> node_index;
    for (std::size_t i = 0; i < system.node_order.size(); ++i) {
        node_index.emplace(system.node_order[i], i);
    }
    const auto idx = [&](const NodeId& node) -> std::optional<std::size_t> {
        if (node == circuit.ground) {
            return std::nullopt;
        }
        return node_index.at(node);
    };
    const auto stamp = [&](std::optional<std::size_t> row, std::optional<std::size_t> col,
                           const Rational& value) {
        if (row && col) {
            system.matrix[*row][*col] += value;
        }
    };
    const auto inject = [&](std::optional<std::size_t> row, const Rational& value) {
        if (row) {
            system.rhs[*row] += value;
        }
    };

    std::map<std::string, const Element*> by_id;
    for (const Element& e : circuit.elements) {
        by_id.emplace(e.id, &e);
    }

    for (const Element& e : circuit.elements) {
        switch (e.kind) {
        case ElementKind::Admittance: {
            const Rational& g = numeric_or_throw(e);
            stamp(idx(e.pos), idx(e.pos), g);
            stamp(idx(e.neg), idx(e.neg), g);
            stamp(idx(e.pos), idx(e.neg), -g);
            stamp(idx(e.neg), idx(e.pos), -g);
            break;
        }
        case ElementKind::ISource: {
            const Rational& i = numeric_or_throw(e);
            inject(idx(e.neg), i);
            inject(idx(e.pos), -i);
            break;
        }
        case ElementKind::VSource:
        case ElementKind::VCVS:
        case ElementKind::CCVS: {
            const std::size_t k = current_index.at(e.id);
            stamp(idx(e.pos), k, 1);
            stamp(idx(e.neg), k, -1);
            stamp(k, idx(e.pos), 1);
            stamp(k, idx(e.neg), -1);
            if (e.kind == ElementKind::VSource) {
                system.rhs[k] = numeric_or_throw(e);
            } else if (e.kind == ElementKind::VCVS) {
                const Rational& mu = numeric_or_throw(e);
                stamp(k, idx(e.control_nodes->first), -mu);
                stamp(k, idx(e.control_nodes->second), mu);
            } else {
                const Rational& r = numeric_or_throw(e);
                const Element& ctrl = *by_id.at(*e.control_element);
                if (is_voltage_kind(ctrl.kind)) {
                    system.matrix[k][current_index.at(ctrl.id)] -= r;
                } else if (ctrl.kind == ElementKind::Admittance) {
                    const Rational& g = numeric_or_throw(ctrl);
                    stamp(k, idx(ctrl.pos), -r * g);
                    stamp(k, idx(ctrl.neg), r * g);
                } else if (ctrl.kind == ElementKind::ISource) {
                    system.rhs[k] += r * numeric_or_throw(ctrl);
                } else {
                    throw std::logic_error("unsupported controlling element kind for '" + e.id + "'");
                }
            }
            break;
        }
        case ElementKind::VCCS: {
            const Rational& gm = numeric_or_throw(e);
            stamp(idx(e.pos), idx(e.control_nodes->first), gm);
            stamp(idx(e.pos), idx(e.control_nodes->second), -gm);
            stamp(idx(e.neg), idx(e.control_nodes->first), -gm);
            stamp(idx(e.neg), idx(e.control_nodes->second), gm);
            break;
        }
        case ElementKind::CCCS: {
            const Rational& beta = numeric_or_throw(e);
            const Element& ctrl = *by_id.at(*e.control_element);
            if (is_voltage_kind(ctrl.kind)) {
                const std::size_t k = current_index.at(ctrl.id);
                stamp(idx(e.pos), k, beta);
                stamp(idx(e.neg), k, -beta);
            } else if (ctrl.kind == ElementKind::Admittance) {
                const Rational& g = numeric_or_throw(ctrl);
                stamp(idx(e.pos), idx(ctrl.pos), beta * g);
                stamp(idx(e.pos), idx(ctrl.neg), -beta * g);
                stamp(idx(e.neg), idx(ctrl.pos), -beta * g);
                stamp(idx(e.neg), idx(ctrl.neg), beta * g);
            } else if (ctrl.kind == ElementKind::ISource) {
                const Rational i = beta * numeric_or_throw(ctrl);
                inject(idx(e.pos), -i);
                inject(idx(e.neg), i);
            } else {
                throw std::logic_error("unsupported controlling element kind for '" + e.id + "'");
            }
            break;
        }
        default:
            throw std::logic_error("cannot stamp " + std::string(kind_name(e.kind)) + " '" + e.id
                                   + "'");
        }
    }
    return system;
}

Solution mna_solve(const MnaSystem& system, const Circuit& circuit)
{
    const std::size_t dim = system.matrix.size();
    const LinearSolution solved = solve_linear(system.matrix, system.rhs);
    if (solved.status == LinearSolution::Status::Inconsistent) {
        throw SingularSystemError(static_cast<int>(solved.rank), static_cast<int>(dim),
                                  "the MNA equations are inconsistent");
    }
    for (const std::vector<Rational>& direction : solved.null_basis) {
        for (std::size_t i = 0; i < system.node_order.size(); ++i) {
            if (direction[i] != 0) {
                throw SingularSystemError(static_cast<int>(solved.rank), static_cast<int>(dim),
                                          "node voltage " + unknown_token(system.node_order[i])
                                              + " is undetermined");
            }
        }
    }

    Solution solution;
    solution.node_voltages.emplace(circuit.ground, 0);
    for (std::size_t i = 0; i < system.node_order.size(); ++i) {
        solution.node_voltages.emplace(system.node_order[i], solved.values[i]);
    }
    for (std::size_t i = 0; i < system.current_elements.size(); ++i) {
        solution.branch_currents.emplace(system.current_elements[i],
                                         solved.values[system.node_order.size() + i]);
    }
    return solution;
}

bool ResidualReport::all_zero() const
{
    return std::all_of(entries.begin(), entries.end(),
                       [](const ResidualEntry& e) { return e.residual == 0; });
}

std::string ResidualReport::describe() const
{
    for (const ResidualEntry& e : entries) {
        if (e.residual != 0) {
            std::ostringstream out;
            if (e.kind == "kcl") {
                out << "KCL residual at node '" << e.subject << "' is " << to_string(e.residual);
            } else {
                out << "element-law residual for '" << e.subject << "' is "
                    << to_string(e.residual);
            }
            return out.str();
        }
    }
    return "all residuals zero";
}

ResidualReport check_solution(const Circuit& circuit, const Solution& solution)
{
    const auto voltage = [&](const NodeId& node) { return solution.node_voltages.at(node); };

    std::map<std::string, const Element*> by_id;
    for (const Element& e : circuit.elements) {
        by_id.emplace(e.id, &e);
    }
    const auto control_current = [&](const std::string& id) -> Rational {
        const Element& ctrl = *by_id.at(id);
        if (is_voltage_kind(ctrl.kind)) {
            return solution.branch_currents.at(id);
        }
        if (ctrl.kind == ElementKind::Admittance) {
            return numeric_or_throw(ctrl) * (voltage(ctrl.pos) - voltage(ctrl.neg));
        }
        return numeric_or_throw(ctrl);
    };
    const auto branch_current = [&](const Element& e) -> Rational {
        switch (e.kind) {
        case ElementKind::Admittance:
            return numeric_or_throw(e) * (voltage(e.pos) - voltage(e.neg));
        case ElementKind::ISource:
            return numeric_or_throw(e);
        case ElementKind::VSource:
        case ElementKind::VCVS:
        case ElementKind::CCVS:
            return solution.branch_currents.at(e.id);
        case ElementKind::VCCS:
            return numeric_or_throw(e)
                 * (voltage(e.control_nodes->first) - voltage(e.control_nodes->second));
        case ElementKind::CCCS:
            return numeric_or_throw(e) * control_current(*e.control_element);
        default:
            throw std::logic_error("no branch current for " + std::string(kind_name(e.kind)));
        }
    };

    std::map<NodeId, Rational> kcl;
    for (const NodeId& node : circuit.nodes) {
        kcl.emplace(node, 0);
    }
    for (const Element& e : circuit.elements) {
        const Rational i = branch_current(e);
        kcl[e.pos] += i;
        kcl[e.neg] -= i;
    }

    ResidualReport report;
    for (const auto& [node, residual] : kcl) {
        if (node != circuit.ground) {
            report.entries.push_back(ResidualEntry{"kcl", node, residual});
        }
    }
    for (const Element& e : circuit.elements) {
        Rational residual = 0;
        switch (e.kind) {
        case ElementKind::VSource:
            residual = voltage(e.pos) - voltage(e.neg) - numeric_or_throw(e);
            break;
        case ElementKind::VCVS:
            residual = voltage(e.pos) - voltage(e.neg)
                     - numeric_or_throw(e)
                           * (voltage(e.control_nodes->first) - voltage(e.control_nodes->second));
            break;
        case ElementKind::CCVS:
            residual = voltage(e.pos) - voltage(e.neg)
                     - numeric_or_throw(e) * control_current(*e.control_element);
            break;
        default:
            continue;
        }
        report.entries.push_back(ResidualEntry{"law", e.id, residual});
    }
    return report;
}

DifferentialVerdict differential_check(const Circuit& circuit)
{
    DifferentialVerdict verdict;

    std::optional<Solution> sna;
    std::optional<Error> sna_error;
    try {
        sna = solve_circuit(circuit);
    } catch (const Error& e) {
        sna_error = e;
    }

    std::optional<Solution> mna;
    std::optional<Error> mna_error;
    try {
        mna = mna_solve(mna_system(circuit), circuit);
    } catch (const Error& e) {
        mna_error = e;
    }

    verdict.sna = sna;
    verdict.mna = mna;

    if (sna && mna) {
        const ResidualReport residuals = check_solution(circuit, *sna);
        if (!residuals.all_zero()) {
            verdict.status = DifferentialVerdict::Status::Fail;
            verdict.detail = "supernodal solution violates first principles: " + residuals.describe();
            return verdict;
        }
        for (const auto& [node, value] : sna->node_voltages) {
            const auto it = mna->node_voltages.find(node);
            if (it == mna->node_voltages.end() || it->second != value) {
                verdict.status = DifferentialVerdict::Status::Fail;
                verdict.detail = "node '" + node + "': supernodal " + to_string(value) + " vs MNA "
                               + (it == mna->node_voltages.end() ? std::string("<missing>")
                                                                 : to_string(it->second));
                return verdict;
            }
        }
        verdict.status = DifferentialVerdict::Status::Pass;
        verdict.detail = "solutions identical";
        return verdict;
    }
    if (!sna && !mna) {
        verdict.status = DifferentialVerdict::Status::PassByAgreement;
        verdict.detail = std::string("both sides rejected the circuit (supernodal: ")
                       + error_code_name(sna_error->code()) + ", MNA: "
                       + error_code_name(mna_error->code()) + ")";
        return verdict;
    }
    verdict.status = DifferentialVerdict::Status::Fail;
    if (sna) {
        verdict.detail = std::string("supernodal analysis solved but the oracle rejected: ")
                       + mna_error->what();
    } else {
        verdict.detail = std::string("the oracle solved but supernodal analysis rejected: ")
                       + sna_error->what();
    }
    return verdict;
}

}  // namespace sna
