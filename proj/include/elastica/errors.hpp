#ifndef ELASTICA_ERRORS_HPP
#define ELASTICA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace elastica {

// Bending stiffness dropped to or below the positivity floor at some grid
// node or midpoint; the model leaves its range of validity there.
class StiffnessFloorError : public std::runtime_error {
public:
    StiffnessFloorError(int index, double beta_value)
        : std::runtime_error("stiffness floor breached at index " + std::to_string(index) +
                             " (beta = " + std::to_string(beta_value) + ")"),
          index(index), beta_value(beta_value) {}
    int index;
    double beta_value;
};

// A small denominator in the expansion coefficients vanished; the requested
// order of the expansion does not exist at these parameters.
class ResonantDenominatorError : public std::runtime_error {
public:
    explicit ResonantDenominatorError(const std::string& what)
        : std::runtime_error("resonant denominator: " + what) {}
};

// Amplitude passed to the third-order construction does not satisfy the
// solvability condition.
class SolvabilityError : public std::runtime_error {
public:
    SolvabilityError(double residual)
        : std::runtime_error("solvability violated (residual " + std::to_string(residual) + ")"),
          residual(residual) {}
    double residual;
};

// The requested linearized mode has zero amplitude or does not exist.
class DegenerateModeError : public std::runtime_error {
public:
    explicit DegenerateModeError(const std::string& what)
        : std::runtime_error("degenerate mode: " + what) {}
};

// A linear solve met a pivot below the relative threshold.
class SingularSystemError : public std::runtime_error {
public:
    explicit SingularSystemError(const std::string& what)
        : std::runtime_error("singular linear system: " + what) {}
};

} // namespace elastica

#endif
