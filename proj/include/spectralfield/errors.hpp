#ifndef SPECTRALFIELD_ERRORS_HPP
#define SPECTRALFIELD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace spectralfield {

// Thrown on mismatched vector/matrix/field dimensions.
class DimensionError : public std::invalid_argument {
public:
  explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

// Two distinct eigenvalue clusters are too close for a stable division
// (Frobenius covariant denominators).
class DegenerateGapError : public std::runtime_error {
public:
  explicit DegenerateGapError(const std::string& what) : std::runtime_error(what) {}
};

// The closed-form routes for a derivative disagree beyond tolerance.
// Signals a crossing or an otherwise violated differentiability hypothesis.
class InconsistentDerivativeError : public std::runtime_error {
public:
  InconsistentDerivativeError(const std::string& what, double discrepancy)
      : std::runtime_error(what), discrepancy(discrepancy) {}
  double discrepancy;
};

// Finite-difference tracking by sorted index is unreliable: the spectral
// gap is too small for the step, or group matching across x±he is ambiguous.
class UnstableTrackingError : public std::runtime_error {
public:
  explicit UnstableTrackingError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace spectralfield

#endif
