#include "sna/report.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <sstream>

#include "sna/assembly.hpp"
#include "sna/contraction.hpp"

namespace sna {

namespace {

using ordered_json = nlohmann::ordered_json;

std::map<SupernodeId, std::size_t> order_index(const ReducedSystem& system)
{
    std::map<SupernodeId, std::size_t> index;
    for (std::size_t i = 0; i < system.supernode_order.size(); ++i) {
        index.emplace(system.supernode_order[i], i);
    }
    return index;
}

void fill_trace(AnalysisReport& report, const Analysis& analysis)
{
    report.traced = true;
    const auto index = order_index(analysis.system);
    const std::size_t n = index.size();
    report.matrix_trace.assign(n, std::vector<std::vector<std::string>>(n));
    report.rhs_trace.assign(n, {});
    for (const ContractionEdge& edge : analysis.contraction.edges) {
        const auto from = index.find(edge.from);
        const auto to = index.find(edge.to);
        if (edge.kind == ElementKind::ISource) {
            if (to != index.end()) {
                report.rhs_trace[to->second].push_back("+" + edge.element + " ("
                                                       + value_token(edge.value) + ")");
            }
            if (from != index.end()) {
                report.rhs_trace[from->second].push_back("-" + edge.element + " ("
                                                         + value_token(edge.value) + ")");
            }
            continue;
        }
        if (from != index.end()) {
            report.matrix_trace[from->second][from->second].push_back("+" + edge.element);
            const Poly path = path_sum(analysis.partition, edge, edge.from);
            if (!path.is_zero()) {
                report.rhs_trace[from->second].push_back(edge.element + ": "
                                                         + value_token(edge.value) + " * ("
                                                         + path.render() + ")");
            }
        }
        if (to != index.end()) {
            report.matrix_trace[to->second][to->second].push_back("+" + edge.element);
            const Poly path = path_sum(analysis.partition, edge, edge.to);
            if (!path.is_zero()) {
                report.rhs_trace[to->second].push_back(edge.element + ": "
                                                       + value_token(edge.value) + " * ("
                                                       + path.render() + ")");
            }
        }
        if (from != index.end() && to != index.end()) {
            report.matrix_trace[from->second][to->second].push_back("-" + edge.element);
            report.matrix_trace[to->second][from->second].push_back("-" + edge.element);
        }
    }
    for (const auto& [symbol, value] : analysis.resolved_taped) {
        report.resolved_trace.emplace(symbol, render_affine(value));
    }
}

std::string pad(const std::string& s, std::size_t width)
{
    return s + std::string(width - s.size(), ' ');
}

std::string latex_escape(const std::string& s)
{
    std::string out;
    for (const char c : s) {
        if (c == '_') {
            out += "\\_";
        } else if (c == '*') {
            out += " \\cdot ";
        } else {
            out += c;
        }
    }
    return out;
}

}  // namespace

AnalysisReport build_report(const Analysis& analysis, const std::optional<Solution>& solution,
                            bool trace)
{
    AnalysisReport report;
    report.datum = analysis.partition.datum;
    for (const Supernode& sn : analysis.partition.supernodes) {
        AnalysisReport::SupernodeView view;
        view.id = sn.id;
        view.members = sn.members;
        view.reference = sn.reference;
        for (const TreeEdge& edge : sn.tree) {
            view.tree.push_back({edge.element, edge.parent, edge.child});
        }
        report.supernodes.push_back(std::move(view));
    }
    const NodeId ground = analysis.circuit.ground;
    for (const ResolvedExpression& expr : analysis.expressions) {
        AnalysisReport::ExpressionView view;
        view.node = expr.node;
        view.reference = expr.reference;
        view.offset = render_affine(expr.offset);
        AffineForm equation = expr.offset;
        if (expr.reference != ground) {
            equation.add_unknown(expr.reference, Poly::constant(1));
        }
        view.equation = render_affine(equation);
        report.expressions.push_back(std::move(view));
    }
    for (const InternalBranch& branch : analysis.internal_elements) {
        report.internal_elements.push_back({branch.element, render_affine(branch.branch_voltage)});
    }
    for (const NodeId& reference : analysis.system.unknowns) {
        report.unknowns.push_back(unknown_token(reference));
    }
    for (const auto& row : analysis.system.matrix) {
        std::vector<std::string> cells;
        for (const Poly& cell : row) {
            cells.push_back(cell.render());
        }
        report.matrix.push_back(std::move(cells));
    }
    for (const Poly& entry : analysis.system.rhs) {
        report.rhs.push_back(entry.render());
    }
    if (solution) {
        std::map<std::string, std::string> rendered;
        for (const auto& [node, value] : solution->node_voltages) {
            rendered.emplace(node, to_string(value));
        }
        report.solution = std::move(rendered);
    }
    if (trace) {
        fill_trace(report, analysis);
    }
    return report;
}

std::string render_json(const AnalysisReport& report)
{
    ordered_json j;
    j["supernodes"] = ordered_json::array();
    for (const auto& sn : report.supernodes) {
        ordered_json tree = ordered_json::array();
        for (const auto& edge : sn.tree) {
            tree.push_back({{"element", edge.element}, {"parent", edge.parent},
                            {"child", edge.child}});
        }
        j["supernodes"].push_back({{"id", sn.id}, {"members", sn.members},
                                   {"reference", sn.reference}, {"tree", std::move(tree)}});
    }
    j["expressions"] = ordered_json::array();
    for (const auto& expr : report.expressions) {
        j["expressions"].push_back({{"node", expr.node}, {"reference", expr.reference},
                                    {"offset", expr.offset}});
    }
    j["internal_elements"] = ordered_json::array();
    for (const auto& branch : report.internal_elements) {
        j["internal_elements"].push_back({{"element", branch.element},
                                          {"branch_voltage", branch.branch_voltage}});
    }
    j["system"] = {{"unknowns", report.unknowns}, {"matrix", report.matrix},
                   {"rhs", report.rhs}};
    if (report.solution) {
        j["solution"] = *report.solution;
    }
    if (report.traced) {
        j["trace"] = {{"matrix", report.matrix_trace}, {"rhs", report.rhs_trace},
                      {"resolved", report.resolved_trace}};
    }
    return j.dump(2) + "\n";
}

std::string render_text(const AnalysisReport& report)
{
    std::ostringstream out;
    out << "supernodes\n";
    for (const auto& sn : report.supernodes) {
        out << "  {";
        for (std::size_t i = 0; i < sn.members.size(); ++i) {
            out << (i ? ", " : "") << sn.members[i];
        }
        out << "}  reference " << sn.reference;
        if (sn.id == report.datum) {
            out << "  (datum)";
        }
        out << "\n";
        for (const auto& edge : sn.tree) {
            out << "    tree " << edge.element << " [" << edge.parent << " -> " << edge.child
                << "]\n";
        }
    }
    out << "\nexpressions\n";
    for (const auto& expr : report.expressions) {
        out << "  " << unknown_token(expr.node) << " = " << expr.equation << "\n";
    }
    out << "\ninternal elements\n";
    if (report.internal_elements.empty()) {
        out << "  (none)\n";
    }
    for (const auto& branch : report.internal_elements) {
        out << "  " << branch.element << ": branch voltage " << branch.branch_voltage << "\n";
    }
    out << "\nsystem\n  unknowns:";
    for (std::size_t i = 0; i < report.unknowns.size(); ++i) {
        out << (i ? ", " : " ") << report.unknowns[i];
    }
    out << "\n  matrix:\n";
    std::vector<std::size_t> widths(report.unknowns.size(), 0);
    for (const auto& row : report.matrix) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            widths[c] = std::max(widths[c], row[c].size());
        }
    }
    for (const auto& row : report.matrix) {
        out << "    [ ";
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << (c ? "   " : "") << pad(row[c], widths[c]);
        }
        out << " ]\n";
    }
    out << "  rhs:\n";
    for (const auto& entry : report.rhs) {
        out << "    [ " << entry << " ]\n";
    }
    if (report.solution) {
        out << "\nsolution\n";
        for (const auto& [node, value] : *report.solution) {
            out << "  " << unknown_token(node) << " = " << value << "\n";
        }
    }
    if (report.traced) {
        out << "\ntrace\n";
        for (std::size_t r = 0; r < report.matrix_trace.size(); ++r) {
            for (std::size_t c = 0; c < report.matrix_trace[r].size(); ++c) {
                if (report.matrix_trace[r][c].empty()) {
                    continue;
                }
                out << "  matrix[" << report.unknowns[r] << "][" << report.unknowns[c] << "]:";
                for (const auto& item : report.matrix_trace[r][c]) {
                    out << " " << item;
                }
                out << "\n";
            }
        }
        for (std::size_t r = 0; r < report.rhs_trace.size(); ++r) {
            out << "  rhs[" << report.unknowns[r] << "]:";
            if (report.rhs_trace[r].empty()) {
                out << " (empty)";
            }
            for (const auto& item : report.rhs_trace[r]) {
                out << "  " << item << ";";
            }
            out << "\n";
        }
        for (const auto& [symbol, value] : report.resolved_trace) {
            out << "  resolved " << symbol << " = " << value << "\n";
        }
    }
    return out.str();
}

std::string render_latex(const AnalysisReport& report)
{
    std::ostringstream out;
    out << "\\begin{aligned}\n";
    for (const auto& expr : report.expressions) {
        out << "  " << latex_escape(unknown_token(expr.node)) << " &= "
            << latex_escape(expr.equation) << " \\\\\n";
    }
    out << "\\end{aligned}\n";
    if (report.unknowns.empty()) {
        return out.str();
    }
    out << "\\[\n\\begin{bmatrix}\n";
    for (const auto& row : report.matrix) {
        out << "  ";
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << (c ? " & " : "") << latex_escape(row[c]);
        }
        out << " \\\\\n";
    }
    out << "\\end{bmatrix}\n\\begin{bmatrix}\n";
    for (const auto& unknown : report.unknowns) {
        out << "  " << latex_escape(unknown) << " \\\\\n";
    }
    out << "\\end{bmatrix}\n=\n\\begin{bmatrix}\n";
    for (const auto& entry : report.rhs) {
        out << "  " << latex_escape(entry) << " \\\\\n";
    }
    out << "\\end{bmatrix}\n\\]\n";
    if (report.solution) {
        out << "\\begin{aligned}\n";
        for (const auto& [node, value] : *report.solution) {
            out << "  " << latex_escape(unknown_token(node)) << " &= " << latex_escape(value)
                << " \\\\\n";
        }
        out << "\\end{aligned}\n";
    }
    return out.str();
}

}  // namespace sna
