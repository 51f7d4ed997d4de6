#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace csitdof {

// Error hierarchy. The CLI maps each family onto a fixed exit code, so new
// errors should derive from one of these rather than std::runtime_error.

/// Malformed text/JSON input or invalid argument values. CLI exit code 2.
class ParseError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Values that are well-formed but violate a domain invariant
/// (probabilities not summing to one, repeated user in an ordering, ...).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// K outside the supported range, or a K-specific routine called with the
/// wrong K. CLI exit code 3.
class UnsupportedDimension : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class DimensionMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Polytope lacks the upper bounds needed for vertex enumeration.
class BoundednessError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Requested corner point cannot be synthesized under the given profile.
/// CLI exit code 4.
class NotSynthesizable : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A slot action needs CSIT that the pattern does not grant.
class FeedbackViolation : public std::runtime_error {
public:
    FeedbackViolation(std::size_t slot, const std::string& what)
        : std::runtime_error("slot " + std::to_string(slot) + ": " + what), slot_(slot) {}
    [[nodiscard]] std::size_t slot() const { return slot_; }

private:
    std::size_t slot_;
};

/// Schedule does not follow the slot structure it claims.
class MalformedSchedule : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Random channel draw produced a rank-deficient system (probability zero).
class DegenerateChannel : public std::runtime_error {
public:
    DegenerateChannel(unsigned long long seed, const std::string& what)
        : std::runtime_error(what + " (seed " + std::to_string(seed) + ")"), seed_(seed) {}
    [[nodiscard]] unsigned long long seed() const { return seed_; }

private:
    unsigned long long seed_;
};

}  // namespace csitdof
