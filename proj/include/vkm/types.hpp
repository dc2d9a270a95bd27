#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace vkm {

using Index = Eigen::Index;
using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input data or parameters (kernel spec fields, tolerance values, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// File access or parse failure. `line()` is 0 when the error is not tied to a line.
class IoError : public Error {
 public:
  IoError(const std::string& what, std::size_t line = 0)
      : Error(what), line_(line) {}
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A kernel that violates the reproducing-kernel axioms, or fails to evaluate.
class KernelError : public Error {
 public:
  using Error::Error;
};

/// Input for which the requested object does not exist (e.g. a measure with empty support).
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

/// Numerical routine that failed to converge.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace vkm
