#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "fvd/pauli.hpp"

namespace fvd {

struct KrylovOptions {
  int dim = 12;            // Krylov subspace size
  double step_tol = 1e-9;  // admissible local error per step
  double min_step = 1e-10; // us; below this the step controller gives up
};

/// Applies the evolution generator: out = A * in.
using GeneratorFn = std::function<void(std::span<const Complex>, std::span<Complex>)>;

/// Arnoldi factorization A V_m = V_m H_m + h_{m+1,m} v_{m+1} e_m^T of one
/// starting vector. The basis is independent of the step size, so the small
/// solution (and hence the propagated state, its norm, and the error
/// estimate) can be evaluated at any tau without touching the big space.
class ArnoldiStep {
 public:
  /// Builds up to m basis vectors from v (not required to be normalized).
  ArnoldiStep(const GeneratorFn& generator, std::span<const Complex> v, int m);

  bool happy_breakdown() const { return happy_; }
  double start_norm() const { return beta_; }

  /// y(tau) = exp(tau H_m) * beta e1; ||y|| equals the propagated norm.
  Eigen::VectorXcd small_solution(double tau) const;
  double solution_norm(double tau) const;

  /// A-posteriori local error estimate for the full-space state at tau.
  double error_estimate(double tau) const;

  /// out = V_m * y_small.
  void assemble(const Eigen::VectorXcd& y_small, std::span<Complex> out) const;

 private:
  std::vector<std::vector<Complex>> basis_;
  Eigen::MatrixXcd hess_;  // m x m upper Hessenberg (of the generator A)
  double h_next_ = 0.0;    // |h_{m+1,m}|
  double beta_ = 0.0;
  int m_used_ = 0;
  bool happy_ = false;
};

}  // namespace fvd
