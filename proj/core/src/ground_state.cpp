#include "fvd/ground_state.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "fvd/errors.hpp"

namespace fvd {

namespace {

std::uint64_t splitmix64(std::uint64_t& s) {
  s += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

StateVector random_start(int n_sites, std::uint64_t seed) {
  StateVector v(n_sites);
  std::uint64_t s = seed;
  for (Complex& a : v.amp) {
    const double re = static_cast<double>(splitmix64(s)) / 1.8446744073709552e19 - 0.5;
    const double im = static_cast<double>(splitmix64(s)) / 1.8446744073709552e19 - 0.5;
    a = Complex(re, im);
  }
  v.normalize();
  return v;
}

}  // namespace

GroundStateResult ground_state(const OperatorSum& h, std::optional<BitConfig> seed_sector,
                               const GroundStateOptions& opts) {
  if (!h.is_hermitian()) throw AlgebraError("ground_state: operator is not Hermitian");
  const int n = h.n_sites();
  if (n > opts.max_sites) throw DomainError("ground_state: n_sites above the state-vector cap");
  const std::size_t dim = std::size_t{1} << n;
  const CompiledOperator op(h);
  const double scale = std::max(h.l1_coeff_norm(), 1e-300);
  const double tol = opts.rel_tol * scale;

  StateVector v0;
  if (seed_sector) {
    if (seed_sector->n_sites != n) throw DimensionError("ground_state: seed size mismatch");
    v0 = StateVector::basis(*seed_sector);
  } else {
    v0 = random_start(n, opts.start_seed);
  }

  GroundStateResult result;
  result.state = v0;
  int total_applies = 0;

  StateVector w(n);
  for (int restart = 0; restart < opts.max_restarts; ++restart) {
    std::vector<StateVector> basis;
    basis.reserve(opts.max_basis);
    std::vector<double> alpha, beta;  // tridiagonal entries
    basis.push_back(result.state.normalized_copy());

    const int m_max = static_cast<int>(std::min<std::size_t>(opts.max_basis, dim));
    for (int j = 0; j < m_max; ++j) {
      op.apply(basis[j], w);
      ++total_applies;
      const double a = inner(basis[j], w).real();
      alpha.push_back(a);

      // full reorthogonalization, two passes
      for (int pass = 0; pass < 2; ++pass) {
        for (const StateVector& q : basis) {
          const Complex c = inner(q, w);
          for (std::size_t k = 0; k < dim; ++k) w.amp[k] -= c * q.amp[k];
        }
      }
      const double b = w.norm();

      // Ritz residual for the lowest pair: |beta_j * s_last|
      const int m = j + 1;
      Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
      for (int i = 0; i < m; ++i) {
        tri(i, i) = alpha[i];
        if (i + 1 < m) tri(i, i + 1) = tri(i + 1, i) = beta[i];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
      const Eigen::VectorXd ev = es.eigenvectors().col(0);
      const double ritz_residual = b * std::abs(ev(m - 1));
      result.energy = es.eigenvalues()(0);

      const bool happy = b < 1e-13 * scale;
      if (ritz_residual < tol || happy || j + 1 == m_max ||
          static_cast<std::size_t>(m) == dim) {
        StateVector ritz(n);
        for (int i = 0; i < m; ++i)
          for (std::size_t k = 0; k < dim; ++k) ritz.amp[k] += ev(i) * basis[i].amp[k];
        ritz.normalize();
        result.state = ritz;
        if (ritz_residual < tol || happy || static_cast<std::size_t>(m) == dim) {
          op.apply(result.state, w);
          ++total_applies;
          double res2 = 0.0;
          for (std::size_t k = 0; k < dim; ++k)
            res2 += std::norm(w.amp[k] - result.energy * result.state.amp[k]);
          result.residual = std::sqrt(res2);
          result.iterations = total_applies;
          if (result.residual < tol || happy) return result;
        }
        break;  // restart from the current Ritz vector
      }

      beta.push_back(b);
      StateVector next(n);
      const double inv = 1.0 / b;
      for (std::size_t k = 0; k < dim; ++k) next.amp[k] = w.amp[k] * inv;
      basis.push_back(std::move(next));
    }
  }

  throw ConvergenceError("ground_state: no convergence after " +
                         std::to_string(opts.max_restarts) +
                         " restarts, residual = " + std::to_string(result.residual));
}

}  // namespace fvd
