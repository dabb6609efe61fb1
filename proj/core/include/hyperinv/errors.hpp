#pragma once

#include <stdexcept>
#include <string>

namespace hyperinv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or precondition violation.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Orthonormality gate of the time basis failed for the pair (m, n), 1-based.
class BasisConditioningError : public Error {
 public:
  BasisConditioningError(int m, int n, double deviation);
  int m() const { return m_; }
  int n() const { return n_; }
  double deviation() const { return deviation_; }

 private:
  int m_;
  int n_;
  double deviation_;
};

/// Explicit time stepping was requested with a time step above the stability bound.
class CflViolation : public Error {
 public:
  CflViolation(double dt, double bound);
  double dt() const { return dt_; }
  double bound() const { return bound_; }

 private:
  double dt_;
  double bound_;
};

/// A NaN or infinity appeared while stepping, at time index `step` and flat node `node`.
class NonFiniteValue : public Error {
 public:
  NonFiniteValue(int step, int node);
  int step() const { return step_; }
  int node() const { return node_; }

 private:
  int step_;
  int node_;
};

/// Linear solve of the normal equations did not reach the residual gate.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, double residual);
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// The cost grew beyond the divergence guard during the fixed-point iteration.
class DivergenceError : public Error {
 public:
  DivergenceError(int iteration, double cost, double initial_cost);
  int iteration() const { return iteration_; }

 private:
  int iteration_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace hyperinv
