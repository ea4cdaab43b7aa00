#include "fvd/krylov.hpp"

#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>

#include "fvd/errors.hpp"
#include "fvd/parallel.hpp"

namespace fvd {

ArnoldiStep::ArnoldiStep(const GeneratorFn& generator, std::span<const Complex> v, int m) {
  const std::size_t dim = v.size();
  if (m < 1) throw DomainError("ArnoldiStep: subspace dimension must be >= 1");
  m = static_cast<int>(std::min<std::size_t>(m, dim));

  double beta2 = 0.0;
  for (const Complex& a : v) beta2 += std::norm(a);
  beta_ = std::sqrt(beta2);
  if (beta_ == 0.0) throw AlgebraError("ArnoldiStep: zero start vector");

  hess_ = Eigen::MatrixXcd::Zero(m, m);
  basis_.reserve(m + 1);
  basis_.emplace_back(v.begin(), v.end());
  {
    const double inv = 1.0 / beta_;
    for (Complex& a : basis_[0]) a *= inv;
  }

  std::vector<Complex> w(dim);
  for (int j = 0; j < m; ++j) {
    generator(std::span<const Complex>(basis_[j]), std::span<Complex>(w));
    // modified Gram-Schmidt with one reorthogonalization pass
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i <= j; ++i) {
        Complex hij = 0.0;
        const auto& q = basis_[i];
        for (std::size_t k = 0; k < dim; ++k) hij += std::conj(q[k]) * w[k];
        if (pass == 0)
          hess_(i, j) = hij;
        else
          hess_(i, j) += hij;
        for (std::size_t k = 0; k < dim; ++k) w[k] -= hij * q[k];
      }
    }
    double h2 = 0.0;
    for (const Complex& a : w) h2 += std::norm(a);
    const double h = std::sqrt(h2);
    m_used_ = j + 1;

    const double scale = hess_.topLeftCorner(m_used_, m_used_).cwiseAbs().maxCoeff();
    if (h <= 1e-14 * std::max(scale, 1.0)) {
      happy_ = true;
      h_next_ = 0.0;
      break;
    }
    if (j + 1 < m) {
      hess_(j + 1, j) = h;
      std::vector<Complex> next(dim);
      const double inv = 1.0 / h;
      for (std::size_t k = 0; k < dim; ++k) next[k] = w[k] * inv;
      basis_.push_back(std::move(next));
    } else {
      h_next_ = h;
    }
  }
}

Eigen::VectorXcd ArnoldiStep::small_solution(double tau) const {
  const Eigen::MatrixXcd small = hess_.topLeftCorner(m_used_, m_used_);
  const Eigen::MatrixXcd expm = (tau * small).exp();
  return beta_ * expm.col(0);
}

double ArnoldiStep::solution_norm(double tau) const { return small_solution(tau).norm(); }

double ArnoldiStep::error_estimate(double tau) const {
  if (happy_ || h_next_ == 0.0) return 0.0;
  // || exp(tau A)v - V y(tau) || <= |h_{m+1,m}| Int_0^tau |y_m(s)| ds for a
  // contractive generator; Simpson on {0, tau/2, tau}.
  const auto last = [&](double s) {
    return std::abs(small_solution(s)(m_used_ - 1));
  };
  const double integral = tau / 6.0 * (last(0.0) + 4.0 * last(0.5 * tau) + last(tau));
  return h_next_ * integral;
}

void ArnoldiStep::assemble(const Eigen::VectorXcd& y_small, std::span<Complex> out) const {
  const std::size_t dim = basis_[0].size();
  if (out.size() != dim) throw DimensionError("ArnoldiStep::assemble: output size mismatch");
  parallel_for_chunks(dim, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      Complex acc = 0.0;
      for (int i = 0; i < m_used_; ++i) acc += y_small(i) * basis_[i][k];
      out[k] = acc;
    }
  });
}

}  // namespace fvd
