#pragma once
#include <stdexcept>
#include <string>

namespace sedop {

// Base for all recoverable failures raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Measure layer.
struct NotUlc : Error { using Error::Error; };
struct DivergentIntegral : Error { using Error::Error; };

// Quadrature / basis layer.
struct MomentOverflow : Error { using Error::Error; };
struct LossOfOrthogonality : Error { using Error::Error; };

// Operator assembly.
struct DegreeOverflow : Error { using Error::Error; };
struct TruncationLoss : Error { using Error::Error; };
struct LevelOverflow : Error { using Error::Error; };
struct TruncationMismatch : Error { using Error::Error; };

// Diagnostics.
struct SamplerFailure : Error { using Error::Error; };

// CLI / configuration.
struct ConfigError : Error { using Error::Error; };

} // namespace sedop
