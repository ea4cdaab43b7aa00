#include "fvd/liouvillian.hpp"

#include <cmath>

#include "fvd/errors.hpp"

namespace fvd {

namespace {

// Dormand-Prince 5(4) tableau
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187, kA53 = 64448.0 / 6561,
                 kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33, kA63 = 46732.0 / 5247,
                 kA64 = 49.0 / 176, kA65 = -5103.0 / 18656;
constexpr double kB1 = 35.0 / 384, kB3 = 500.0 / 1113, kB4 = 125.0 / 192,
                 kB5 = -2187.0 / 6784, kB6 = 11.0 / 84;
constexpr double kC2 = 1.0 / 5, kC3 = 3.0 / 10, kC4 = 4.0 / 5, kC5 = 8.0 / 9;
constexpr double kE1 = 71.0 / 57600, kE3 = -71.0 / 16695, kE4 = 71.0 / 1920,
                 kE5 = -17253.0 / 339200, kE6 = 22.0 / 525, kE7 = -1.0 / 40;

struct LindbladRhs {
  Eigen::MatrixXcd h_omega;   // sum sx/2 (per MHz of omega, angular)
  Eigen::MatrixXcd h_global;  // -sum n   (per MHz of delta_g, angular)
  Eigen::MatrixXcd h_stagger; // sum eps n (per MHz of delta_l, angular)
  Eigen::MatrixXcd h_int;     // interaction part, fixed
  std::vector<Eigen::MatrixXcd> lowers;  // sigma^- per site
  std::vector<Eigen::MatrixXcd> sz;      // sigma^z per site
  double gamma1 = 0.0, gamma2 = 0.0;
  const Schedule* schedule = nullptr;

  Eigen::MatrixXcd hamiltonian(double t) const {
    const ControlParams p = schedule->params_at(t);
    return angular(p.omega_mhz) * h_omega + angular(p.delta_g_mhz) * h_global +
           angular(p.delta_l_mhz) * h_stagger + h_int;
  }

  Eigen::MatrixXcd operator()(double t, const Eigen::MatrixXcd& rho) const {
    const Eigen::MatrixXcd h = hamiltonian(t);
    Eigen::MatrixXcd drho = Complex(0.0, -1.0) * (h * rho - rho * h);
    if (gamma1 > 0.0) {
      for (const auto& l : lowers) {
        const Eigen::MatrixXcd num = l.adjoint() * l;  // = n_j
        drho += gamma1 * (l * rho * l.adjoint() - 0.5 * (num * rho + rho * num));
      }
    }
    if (gamma2 > 0.0) {
      for (const auto& z : sz) drho += gamma2 * (z * rho * z - rho);
    }
    return drho;
  }
};

}  // namespace

Eigen::MatrixXcd dense_matrix(const OperatorSum& op) {
  const int n = op.n_sites();
  if (n > 12) throw DomainError("dense_matrix: n_sites above the dense cap of 12");
  const std::size_t dim = std::size_t{1} << n;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  std::vector<Complex> col(dim), out(dim);
  const CompiledOperator compiled(op);
  for (std::size_t j = 0; j < dim; ++j) {
    std::fill(col.begin(), col.end(), Complex{0, 0});
    col[j] = 1.0;
    compiled.apply(col, out);
    for (std::size_t i = 0; i < dim; ++i) m(i, j) = out[i];
  }
  return m;
}

Complex expectation(const OperatorSum& op, const Eigen::MatrixXcd& rho) {
  return (dense_matrix(op) * rho).trace();
}

DensityMatrixResult liouvillian_reference(const StateVector& initial,
                                          const HamiltonianSpec& spec, const Schedule& schedule,
                                          std::span<const double> sample_times,
                                          const std::optional<NoiseModel>& noise,
                                          const LiouvillianOptions& opts) {
  spec.validate();
  schedule.validate();
  if (spec.n_sites > kLiouvillianMaxSites)
    throw DomainError("liouvillian_reference: n_sites above the density-matrix cap");
  if (initial.n_sites != spec.n_sites)
    throw DimensionError("liouvillian_reference: state size mismatch");
  if (sample_times.empty()) throw DomainError("liouvillian_reference: empty sample_times");

  const int n = spec.n_sites;
  const std::size_t dim = std::size_t{1} << n;

  LindbladRhs rhs;
  rhs.schedule = &schedule;
  rhs.h_omega = dense_matrix(build_total_sx(n)) * 0.5;
  {
    OperatorSum occ(n), stag(n);
    for (int j = 0; j < n; ++j) {
      occ += OperatorSum::occupation(n, j, -1.0);
      stag += OperatorSum::occupation(n, j, stagger_sign(j));
    }
    rhs.h_global = dense_matrix(occ);
    rhs.h_stagger = dense_matrix(stag);
  }
  {
    OperatorSum inter(n);
    bool any = false;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double v = coupling_mhz(spec, i, j);
        if (v == 0.0) continue;
        inter += OperatorSum::occupation(n, i) * OperatorSum::occupation(n, j) * angular(v);
        any = true;
      }
    rhs.h_int = any ? dense_matrix(inter) : Eigen::MatrixXcd::Zero(dim, dim);
  }
  if (noise && noise->enabled) {
    noise->validate();
    rhs.gamma1 = noise->gamma1();
    rhs.gamma2 = noise->gamma2();
    for (int j = 0; j < n; ++j) {
      Eigen::MatrixXcd lower = Eigen::MatrixXcd::Zero(dim, dim);
      const std::uint64_t bit = 1ull << j;
      for (std::size_t k = 0; k < dim; ++k)
        if (k & bit) lower(k ^ bit, k) = 1.0;
      rhs.lowers.push_back(lower);
      rhs.sz.push_back(dense_matrix(OperatorSum::single(n, j, Pauli::Z)));
    }
  }

  Eigen::VectorXcd psi(dim);
  for (std::size_t k = 0; k < dim; ++k) psi(k) = initial.amp[k];
  Eigen::MatrixXcd rho = psi * psi.adjoint();

  DensityMatrixResult result;
  result.times.assign(sample_times.begin(), sample_times.end());

  double t = 0.0;
  double h = 1e-4;
  Eigen::MatrixXcd k1 = rhs(t, rho);
  for (double ts : sample_times) {
    while (t < ts - 1e-13) {
      h = std::min(h, ts - t);
      const Eigen::MatrixXcd k2 = rhs(t + kC2 * h, rho + h * kA21 * k1);
      const Eigen::MatrixXcd k3 = rhs(t + kC3 * h, rho + h * (kA31 * k1 + kA32 * k2));
      const Eigen::MatrixXcd k4 =
          rhs(t + kC4 * h, rho + h * (kA41 * k1 + kA42 * k2 + kA43 * k3));
      const Eigen::MatrixXcd k5 =
          rhs(t + kC5 * h, rho + h * (kA51 * k1 + kA52 * k2 + kA53 * k3 + kA54 * k4));
      const Eigen::MatrixXcd k6 = rhs(
          t + h, rho + h * (kA61 * k1 + kA62 * k2 + kA63 * k3 + kA64 * k4 + kA65 * k5));
      const Eigen::MatrixXcd next =
          rho + h * (kB1 * k1 + kB3 * k3 + kB4 * k4 + kB5 * k5 + kB6 * k6);
      const Eigen::MatrixXcd k7 = rhs(t + h, next);
      const Eigen::MatrixXcd err_mat =
          h * (kE1 * k1 + kE3 * k3 + kE4 * k4 + kE5 * k5 + kE6 * k6 + kE7 * k7);
      const double err = err_mat.cwiseAbs().maxCoeff();

      if (err <= opts.tol) {
        t += h;
        rho = next;
        k1 = k7;  // FSAL
      } else {
        k1 = rhs(t, rho);
      }
      const double factor =
          err > 0.0 ? std::clamp(0.9 * std::pow(opts.tol / err, 0.2), 0.2, 5.0) : 5.0;
      h = std::max(h * factor, 1e-12);
    }
    result.rhos.push_back(rho);
  }
  return result;
}

}  // namespace fvd
