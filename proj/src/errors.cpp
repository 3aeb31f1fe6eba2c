#include "sna/errors.hpp"

#include <sstream>

namespace sna {

const char* error_code_name(ErrorCode code)
{
    switch (code) {
        case ErrorCode::Syntax: return "SyntaxError";
        case ErrorCode::DuplicateElementId: return "DuplicateElementId";
        case ErrorCode::UnknownControlElement: return "UnknownControlElement";
        case ErrorCode::MissingGroundNode: return "MissingGroundNode";
        case ErrorCode::DisconnectedCircuit: return "DisconnectedCircuit";
        case ErrorCode::UnsupportedNullor: return "UnsupportedNullor";
        case ErrorCode::ShortedSource: return "ShortedSource";
        case ErrorCode::UnboundSymbol: return "UnboundSymbol";
        case ErrorCode::NonpositiveAdmittance: return "NonpositiveAdmittance";
        case ErrorCode::InvalidReferenceOverride: return "InvalidReferenceOverride";
        case ErrorCode::KVLViolation: return "KVLViolation";
        case ErrorCode::ControlBranchNotTree: return "ControlBranchNotTree";
        case ErrorCode::CyclicControlDependency: return "CyclicControlDependency";
        case ErrorCode::SingularControlSystem: return "SingularControlSystem";
        case ErrorCode::SingularSystem: return "SingularSystem";
    }
    return "Error";
}

namespace {

std::string join(const std::vector<std::string>& items, const char* sep)
{
    std::ostringstream out;
    for (size_t i = 0; i < items.size(); ++i) {
        if (i) out << sep;
        out << items[i];
    }
    return out.str();
}

std::string describe_components(const std::vector<std::vector<std::string>>& components)
{
    std::ostringstream out;
    out << "circuit is not connected; components:";
    for (const auto& comp : components) out << " {" << join(comp, ", ") << "}";
    return out.str();
}

}  // namespace

DisconnectedCircuitError::DisconnectedCircuitError(std::vector<std::vector<std::string>> components)
    : Error(ErrorCode::DisconnectedCircuit, describe_components(components)),
      components_(std::move(components))
{
}

UnsupportedNullorError::UnsupportedNullorError(std::vector<std::string> element_ids)
    : Error(ErrorCode::UnsupportedNullor,
            "element(s) " + join(element_ids, ", ") +
                ": nullators/norators are rejected; no definition of a supernode yields "
                "inspection fill-in rules for nullor circuits, so supernodal analysis "
                "does not extend to them"),
      element_ids_(std::move(element_ids))
{
}

KVLViolationError::KVLViolationError(std::string supernode, std::vector<std::string> loop_elements,
                                     std::string residual)
    : Error(ErrorCode::KVLViolation,
            "supernode " + supernode + ": voltage-source loop {" + join(loop_elements, ", ") +
                "} violates KVL, residual " + residual),
      supernode_(std::move(supernode)),
      loop_elements_(std::move(loop_elements)),
      residual_(std::move(residual))
{
}

SingularSystemError::SingularSystemError(int rank, int dimension, const std::string& detail)
    : Error(ErrorCode::SingularSystem,
            "system of dimension " + std::to_string(dimension) + " has rank " +
                std::to_string(rank) + (detail.empty() ? "" : " (" + detail + ")")),
      rank_(rank),
      dimension_(dimension)
{
}

}  // namespace sna
