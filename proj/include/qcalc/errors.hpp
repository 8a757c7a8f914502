#pragma once

#include <stdexcept>
#include <string>

#include "qcalc/namespace.hpp"

QCALC_NS_BEGIN

/// Broad failure class, used by the CLI to pick an exit code.
enum class ErrorKind { kValidation, kNumeric };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Argument outside the domain of a map (zero inverse, point outside a strip).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what)
      : Error(ErrorKind::kValidation, what) {}
};

/// Evaluation point lies on the singular sphere of a kernel.
class SingularityError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A caller-side contract was violated.
class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what)
      : Error(ErrorKind::kValidation, what) {}
};

/// Combination of objects that the representation cannot express exactly.
class UnsupportedError : public Error {
 public:
  explicit UnsupportedError(const std::string& what)
      : Error(ErrorKind::kValidation, what) {}
};

/// s lies on or too close to the S-spectrum.
class SpectralProximityError : public Error {
 public:
  SpectralProximityError(const std::string& what, double distance)
      : Error(ErrorKind::kValidation, what), distance_(distance) {}
  double distance() const noexcept { return distance_; }

 private:
  double distance_;
};

class SingularMatrixError : public Error {
 public:
  SingularMatrixError(const std::string& what, double sigma_min)
      : Error(ErrorKind::kNumeric, what), sigma_min_(sigma_min) {}
  double sigma_min() const noexcept { return sigma_min_; }

 private:
  double sigma_min_;
};

class RangeError : public Error {
 public:
  explicit RangeError(const std::string& what)
      : Error(ErrorKind::kNumeric, what) {}
};

/// Quadrature or iteration failed to reach the requested tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double estimate)
      : Error(ErrorKind::kNumeric, what), estimate_(estimate) {}
  double estimate() const noexcept { return estimate_; }

 private:
  double estimate_;
};

QCALC_NS_END
