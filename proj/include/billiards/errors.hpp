#pragma once

#include <stdexcept>
#include <string>

namespace billiards {

struct BilliardsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SceneParseError : BilliardsError {
    using BilliardsError::BilliardsError;
};

struct SceneValidationError : BilliardsError {
    using BilliardsError::BilliardsError;
};

// A perturbed obstacle no longer fits inside the bounding ball.
struct PerturbationTooLarge : SceneValidationError {
    using SceneValidationError::SceneValidationError;
};

struct DegenerateGradient : BilliardsError {
    using BilliardsError::BilliardsError;
};

// Reflection-count bounds failed beyond Monte Carlo slack.
struct BoundViolation : BilliardsError {
    using BilliardsError::BilliardsError;
};

struct ReversalMismatch : BilliardsError {
    using BilliardsError::BilliardsError;
};

}  // namespace billiards
