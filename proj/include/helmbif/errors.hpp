#pragma once

#include <stdexcept>
#include <string>

namespace helmbif {

/// Arguments outside an operation's admissible envelope.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Root bracketing failed.
class SearchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A certified sign pattern did not hold; indicates a bug in the Bessel layer.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Schwarz problem data with nonzero mean.
class SolvabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class SingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Too little (or too small) data for a log-log fit.
class DegenerateDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace helmbif
