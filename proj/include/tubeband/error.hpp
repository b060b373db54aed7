#pragma once

#include <stdexcept>
#include <string>

namespace tubeband {

enum class ErrorKind {
    InvalidArgument,  // bad dimension, order, level, or mismatched sizes
    Domain,           // evaluation point outside [0, 1]
    EmptyDesign,
    NotPositiveDefinite,
    NumericalDegeneracy,
};

const char* to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; `kind()` lets callers map
/// failures onto exit codes or per-replicate failure counters.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

    /// True for failures caused by the data/numerics rather than by
    /// malformed caller input.
    [[nodiscard]] bool is_numerical() const noexcept {
        return kind_ == ErrorKind::NotPositiveDefinite ||
               kind_ == ErrorKind::NumericalDegeneracy;
    }

private:
    ErrorKind kind_;
};

}  // namespace tubeband
