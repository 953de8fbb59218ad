#pragma once

#include <stdexcept>
#include <string>

namespace linres {

// Numerical failures. The CLI maps these to exit code 2, while input
// validation problems are thrown as std::invalid_argument and map to 1.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Magnitudes ran past the divergence guard (1e100), or a quantity that
// has to converge geometrically was asked for in a non-contracting regime.
class DivergenceError : public NumericalError {
 public:
  explicit DivergenceError(const std::string& what) : NumericalError(what) {}
};

// A result was computed but its internal consistency check failed, e.g.
// polynomial coefficients with a non-negligible imaginary residue.
class ConditioningError : public NumericalError {
 public:
  explicit ConditioningError(const std::string& what) : NumericalError(what) {}
};

}  // namespace linres
