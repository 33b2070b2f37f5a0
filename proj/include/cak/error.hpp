#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace cak {

enum class ErrorKind {
    EmptyComponentList,
    IndexOutOfRange,
    NotPrincipal,
    CyclicLeftOperand,
    RankMismatch,
    RankTooSmall,
    EmptyLanguage,
    UnknownState,
    InfeasibleFlow,
    MalformedModel,
    MalformedAutomaton,
    CapExceeded,
    InvalidFormula,
    StandardImplicationPresent,
    NegativeAtomInZ,
    SyntaxError,
    SelfComplementaryPrincipal,
    Io,
};

/// Name of an error kind, as printed in reports.
const char* error_kind_name(ErrorKind kind) noexcept;

/// The single exception type thrown by the library.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}
    Error(ErrorKind kind, const std::string& message, std::size_t position)
        : std::runtime_error(message), kind_(kind), position_(position) {}

    ErrorKind kind() const noexcept { return kind_; }
    /// Character offset for syntax errors.
    std::optional<std::size_t> position() const noexcept { return position_; }

private:
    ErrorKind kind_;
    std::optional<std::size_t> position_;
};

}  // namespace cak
