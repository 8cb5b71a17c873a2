#pragma once

#include <stdexcept>
#include <string>

namespace rmtlab {

// Precondition failures (bad arguments to constructors/operations).
struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct InvalidDegree : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct InvalidBandwidth : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct OrderTooLarge : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct OddOrder : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct LengthOdd : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Runtime failures.
struct GenerationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoValidRho : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidProfile : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BoundViolated : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace rmtlab
