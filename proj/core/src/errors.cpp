#include "hyperinv/errors.hpp"

#include <sstream>

namespace hyperinv {

namespace {

std::string basis_message(int m, int n, double deviation) {
  std::ostringstream os;
  os << "time basis is not orthonormal: |<Psi_" << m << ", Psi_" << n
     << "> - delta| = " << deviation << " exceeds 1e-8";
  return os.str();
}

std::string cfl_message(double dt, double bound) {
  std::ostringstream os;
  os << "CFL violation: dt = " << dt << " exceeds h/sqrt(2) = " << bound;
  return os.str();
}

std::string nonfinite_message(int step, int node) {
  std::ostringstream os;
  os << "non-finite wave field value at time index " << step << ", node " << node;
  return os.str();
}

std::string divergence_message(int iteration, double cost, double initial_cost) {
  std::ostringstream os;
  os << "fixed-point iteration diverged at k = " << iteration << ": J = " << cost
     << " exceeds 1e3 * J(U_0) = " << 1e3 * initial_cost;
  return os.str();
}

}  // namespace

BasisConditioningError::BasisConditioningError(int m, int n, double deviation)
    : Error(basis_message(m, n, deviation)), m_(m), n_(n), deviation_(deviation) {}

CflViolation::CflViolation(double dt, double bound)
    : Error(cfl_message(dt, bound)), dt_(dt), bound_(bound) {}

NonFiniteValue::NonFiniteValue(int step, int node)
    : Error(nonfinite_message(step, node)), step_(step), node_(node) {}

SolverError::SolverError(const std::string& what, double residual)
    : Error(what), residual_(residual) {}

DivergenceError::DivergenceError(int iteration, double cost, double initial_cost)
    : Error(divergence_message(iteration, cost, initial_cost)), iteration_(iteration) {}

}  // namespace hyperinv
