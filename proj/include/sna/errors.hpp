#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sna {

/// Discriminates every user-facing failure the engine can report. The CLI
/// maps all of these to exit code 1; messages carry the offending tokens.
enum class ErrorCode {
    Syntax,
    DuplicateElementId,
    UnknownControlElement,
    MissingGroundNode,
    DisconnectedCircuit,
    UnsupportedNullor,
    ShortedSource,
    UnboundSymbol,
    NonpositiveAdmittance,
    InvalidReferenceOverride,
    KVLViolation,
    ControlBranchNotTree,
    CyclicControlDependency,
    SingularControlSystem,
    SingularSystem,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

class SyntaxError : public Error {
public:
    SyntaxError(int line, const std::string& reason)
        : Error(ErrorCode::Syntax, "line " + std::to_string(line) + ": " + reason), line_(line) {}

    int line() const { return line_; }

private:
    int line_;
};

class DisconnectedCircuitError : public Error {
public:
    explicit DisconnectedCircuitError(std::vector<std::vector<std::string>> components);

    /// Node sets of the maximal connected components, each sorted.
    const std::vector<std::vector<std::string>>& components() const { return components_; }

private:
    std::vector<std::vector<std::string>> components_;
};

class UnsupportedNullorError : public Error {
public:
    explicit UnsupportedNullorError(std::vector<std::string> element_ids);

    const std::vector<std::string>& element_ids() const { return element_ids_; }

private:
    std::vector<std::string> element_ids_;
};

class KVLViolationError : public Error {
public:
    KVLViolationError(std::string supernode, std::vector<std::string> loop_elements,
                      std::string residual);

    const std::string& supernode() const { return supernode_; }
    const std::vector<std::string>& loop_elements() const { return loop_elements_; }
    /// Canonical rendering of the nonzero loop residual.
    const std::string& residual() const { return residual_; }

private:
    std::string supernode_;
    std::vector<std::string> loop_elements_;
    std::string residual_;
};

class SingularSystemError : public Error {
public:
    SingularSystemError(int rank, int dimension, const std::string& detail);

    int rank() const { return rank_; }
    int dimension() const { return dimension_; }

private:
    int rank_;
    int dimension_;
};

}  // namespace sna
