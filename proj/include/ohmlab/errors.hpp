#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Core>

namespace ohmlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad caller input (odd n*d, p < 1, malformed file, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// A predicted object size exceeds its configured cap.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// Graph structure forbids the operation (disconnected graph, singular L_FF).
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A stated precondition on the mathematical input was violated.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Random generation gave up after its retry cap.
class GenerationError : public Error {
 public:
  using Error::Error;
};

/// An iterative method hit its iteration cap. Carries the best iterate found.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, Eigen::VectorXd last_iterate, double last_value)
      : Error(what), last_iterate_(std::move(last_iterate)), last_value_(last_value) {}

  const Eigen::VectorXd& last_iterate() const { return last_iterate_; }
  double last_value() const { return last_value_; }

 private:
  Eigen::VectorXd last_iterate_;
  double last_value_;
};

}  // namespace ohmlab
