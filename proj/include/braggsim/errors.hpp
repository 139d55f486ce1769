#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace braggsim {

// Base class for all library errors so callers can catch everything at once.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parameter outside the physically meaningful domain of an operation.
struct DomainError : Error {
    using Error::Error;
};

// Structurally inconsistent sizes (negative photon number, occupation list
// not matching the number of wells, ...).
struct DimensionError : Error {
    using Error::Error;
};

// An exact enumeration would visit more configurations than allowed.
struct BudgetExceeded : Error {
    BudgetExceeded(std::size_t required_, std::size_t budget_, const std::string& what_)
        : Error(what_), required(required_), budget(budget_) {}
    std::size_t required;
    std::size_t budget;
};

// (state, spacing, regime) combination with no defined collapse-rate entry.
struct UnsupportedCombination : Error {
    using Error::Error;
};

// Bad user-facing input; carries the name of the offending field.
struct ValidationError : Error {
    ValidationError(std::string field_, const std::string& what_)
        : Error(what_), field(std::move(field_)) {}
    std::string field;
};

}
