#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sna/controlled.hpp"
#include "sna/verify.hpp"

namespace sna {

/// Renderable snapshot of one analysis: everything the front end prints,
/// already flattened to canonical strings.
struct AnalysisReport {
    struct TreeEdgeView {
        std::string element;
        std::string parent;
        std::string child;
    };
    struct SupernodeView {
        std::string id;
        std::vector<std::string> members;
        std::string reference;
        std::vector<TreeEdgeView> tree;
    };
    struct ExpressionView {
        std::string node;
        std::string reference;
        std::string offset;
        /// Whole right-hand side, reference folded in: "v(2) - v01".
        std::string equation;
    };
    struct InternalView {
        std::string element;
        std::string branch_voltage;
    };

    std::string datum;
    std::vector<SupernodeView> supernodes;
    std::vector<ExpressionView> expressions;
    std::vector<InternalView> internal_elements;
    std::vector<std::string> unknowns;
    std::vector<std::vector<std::string>> matrix;
    std::vector<std::string> rhs;
    std::optional<std::map<std::string, std::string>> solution;

    bool traced = false;
    /// Per matrix cell, the contracted edges that stamped it.
    std::vector<std::vector<std::vector<std::string>>> matrix_trace;
    /// Per rhs entry, one line per contributing source or path sum.
    std::vector<std::vector<std::string>> rhs_trace;
    /// Eliminated controlled-source symbols and their resolved values.
    std::map<std::string, std::string> resolved_trace;
};

AnalysisReport build_report(const Analysis& analysis,
                            const std::optional<Solution>& solution = std::nullopt,
                            bool trace = false);

std::string render_json(const AnalysisReport& report);
std::string render_text(const AnalysisReport& report);
std::string render_latex(const AnalysisReport& report);

}  // namespace sna
