#pragma once

#include <stdexcept>
#include <string>

namespace isc {

/// An enumeration or scan would exceed the configured budget.
struct BudgetError : std::runtime_error {
    explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed text input (truth table, hamiltonian, embedding).
struct FormatError : std::runtime_error {
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

/// The LP solver hit its pivot iteration cap before reaching a verdict.
struct IterationLimitError : std::runtime_error {
    explicit IterationLimitError(const std::string& what) : std::runtime_error(what) {}
};

/// The LP reported a solution but the exhaustive check rejects it.
struct CertificationError : std::runtime_error {
    explicit CertificationError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace isc
