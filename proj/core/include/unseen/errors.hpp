#ifndef UNSEEN_ERRORS_HPP
#define UNSEEN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace unseen {

// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Argument outside the operation's domain (bad time, bad grid, invalid config).
class DomainError : public Error {
public:
  using Error::Error;
};

// A precondition of a specific estimator is not met (e.g. n2 == 0).
// Reports record these as "blocked" rather than failing the whole run.
class InapplicableError : public Error {
public:
  InapplicableError(std::string estimator, std::string reason)
      : Error(estimator + ": " + reason),
        estimator_(std::move(estimator)),
        reason_(std::move(reason)) {}
  const std::string& estimator() const { return estimator_; }
  const std::string& reason() const { return reason_; }

private:
  std::string estimator_;
  std::string reason_;
};

// Input sits at the edge where the estimate diverges (n == N1, ratio <= 1,
// mean rate 0).
class DegenerateError : public Error {
public:
  using Error::Error;
};

// Root bracketing failed even after geometric widening.
class BracketError : public Error {
public:
  using Error::Error;
};

// Adaptive quadrature exhausted its subdivision budget. Carries the best
// estimate reached so the caller can decide whether it is usable.
class QuadratureError : public Error {
public:
  QuadratureError(const std::string& what, double best_estimate, double error_bound)
      : Error(what), best_estimate_(best_estimate), error_bound_(error_bound) {}
  double best_estimate() const { return best_estimate_; }
  double error_bound() const { return error_bound_; }

private:
  double best_estimate_;
  double error_bound_;
};

// Malformed CSV or flag text. line() is 1-based, -1 when unknown.
class ParseError : public Error {
public:
  explicit ParseError(const std::string& what, long line = -1)
      : Error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}
  long line() const { return line_; }

private:
  long line_;
};

}  // namespace unseen

#endif
