#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qdet {

/// Base class of all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Input failed a structural or numerical validity check (bad dimensions,
/// non-positive element, broken completeness, malformed file, ...).
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

/// POVM element with a negative eigenvalue beyond tolerance.
class NotPositiveError : public ValidationError {
 public:
  NotPositiveError(std::size_t index, double min_eigenvalue, const std::string& what)
      : ValidationError(what), index_(index), min_eigenvalue_(min_eigenvalue) {}
  std::size_t index() const { return index_; }
  double min_eigenvalue() const { return min_eigenvalue_; }

 private:
  std::size_t index_;
  double min_eigenvalue_;
};

/// Elements do not sum to the identity within tolerance.
class NotCompleteError : public ValidationError {
 public:
  NotCompleteError(double residual, const std::string& what)
      : ValidationError(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class DimMismatchError : public ValidationError {
 public:
  explicit DimMismatchError(const std::string& what) : ValidationError(what) {}
};

/// An enumeration (groupings, region cells) would exceed the configured cap.
class CapExceededError : public Error {
 public:
  CapExceededError(double requested, double cap, const std::string& what)
      : Error(what), requested_(requested), cap_(cap) {}
  double requested() const { return requested_; }
  double cap() const { return cap_; }

 private:
  double requested_;
  double cap_;
};

/// The problem instance has no solution (e.g. no grouping admits nontrivial kernels).
class InfeasibleError : public Error {
 public:
  explicit InfeasibleError(const std::string& what) : Error(what) {}
};

/// An iterative numerical routine failed to converge; carries the residual.
class NumericalError : public Error {
 public:
  NumericalError(double residual, const std::string& what)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class NotCommutingError : public ValidationError {
 public:
  NotCommutingError(std::size_t i, std::size_t j, double norm, const std::string& what)
      : ValidationError(what), i_(i), j_(j), norm_(norm) {}
  std::size_t first() const { return i_; }
  std::size_t second() const { return j_; }
  double norm() const { return norm_; }

 private:
  std::size_t i_, j_;
  double norm_;
};

class NotCovariantError : public ValidationError {
 public:
  explicit NotCovariantError(const std::string& what) : ValidationError(what) {}
};

class NotIrreducibleError : public ValidationError {
 public:
  explicit NotIrreducibleError(const std::string& what) : ValidationError(what) {}
};

}  // namespace qdet
