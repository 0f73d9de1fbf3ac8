#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace graphgrad {

enum class Errc {
    NonpositiveWeight,
    NonpositiveMeasure,
    SelfLoop,
    DanglingEdge,
    DuplicateEdge,
    MissingReverseArc,
    UnknownVertex,
    Disconnected,
    LengthMismatch,
    NonpositiveFunction,
    HypothesisViolated,
    Overflow,
    ResidualTooLarge,
    AsymmetricWeights,
    NonpositiveInitialData,
    StepRejected,
    IndexOutOfRange,
    GridMismatch,
    BadParameters,
    GenerationExhausted,
    IoError,
    ParseError,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure raised by the library. `witness` carries the offending
/// vertex (or item index) when one exists.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what, std::optional<std::size_t> witness = std::nullopt)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), witness_(witness) {}

    Errc code() const noexcept { return code_; }
    std::optional<std::size_t> witness() const noexcept { return witness_; }

private:
    Errc code_;
    std::optional<std::size_t> witness_;
};

}  // namespace graphgrad
