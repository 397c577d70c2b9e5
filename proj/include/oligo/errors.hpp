#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace oligo {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad parameters or configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Evaluation outside a declared domain (price support, share bounds, q <= 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

class NoBracket : public SolverError {
 public:
  using SolverError::SolverError;
};

class NonUnique : public SolverError {
 public:
  NonUnique(const std::string& what, std::vector<double> roots)
      : SolverError(what), roots_(std::move(roots)) {}
  const std::vector<double>& roots() const { return roots_; }

 private:
  std::vector<double> roots_;
};

class Divergence : public SolverError {
 public:
  Divergence(const std::string& what, double last) : SolverError(what), last_(last) {}
  double last_iterate() const { return last_; }

 private:
  double last_;
};

class NoConvergence : public SolverError {
 public:
  NoConvergence(const std::string& what, std::vector<double> last)
      : SolverError(what), last_(std::move(last)) {}
  const std::vector<double>& last_iterate() const { return last_; }

 private:
  std::vector<double> last_;
};

class UndefinedRatio : public Error {
 public:
  using Error::Error;
};

class SingularSystem : public Error {
 public:
  SingularSystem(const std::string& what, double condition)
      : Error(what), condition_(condition) {}
  double condition() const { return condition_; }

 private:
  double condition_;
};

class OracleError : public Error {
 public:
  using Error::Error;
};

class TailError : public Error {
 public:
  using Error::Error;
};

}  // namespace oligo
