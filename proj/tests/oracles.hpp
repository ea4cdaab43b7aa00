// Independent dense-matrix reference implementations used only by tests.
// Everything here is built from 2x2 blocks and explicit Kronecker products,
// never through the production operator machinery it checks.
#pragma once

#include <Eigen/Dense>
#include <complex>

#include "fvd/model.hpp"
#include "fvd/pauli.hpp"
#include "fvd/state.hpp"

namespace oracles {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

// Basis ordering |down> = index 0, |up> = index 1, with sigma_z = +1 on the
// occupied state; sigma_y follows from sigma_x sigma_y = i sigma_z.
inline Matrix pauli_2x2(fvd::Pauli p) {
  Matrix m(2, 2);
  const Complex i{0.0, 1.0};
  switch (p) {
    case fvd::Pauli::I: m << 1, 0, 0, 1; break;
    case fvd::Pauli::X: m << 0, 1, 1, 0; break;
    case fvd::Pauli::Y: m << 0, i, -i, 0; break;
    case fvd::Pauli::Z: m << -1, 0, 0, 1; break;
  }
  return m;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Site 0 is the least significant index bit, so it sits rightmost in the
/// Kronecker chain.
inline Matrix dense_string(const fvd::PauliString& s) {
  Matrix m = pauli_2x2(s.letter(s.n_sites - 1));
  for (int site = s.n_sites - 2; site >= 0; --site) m = kron(m, pauli_2x2(s.letter(site)));
  return s.coeff * m;
}

inline Matrix dense_sum(const fvd::OperatorSum& op) {
  const std::size_t dim = std::size_t{1} << op.n_sites();
  Matrix m = Matrix::Zero(dim, dim);
  for (const fvd::PauliString& t : op.sorted_terms()) m += dense_string(t);
  return m;
}

/// Occupation-basis energy of one configuration, written out directly from
/// the Hamiltonian definition (omega = 0), in rad/us.
inline double classical_energy_direct(const fvd::HamiltonianSpec& spec, std::uint64_t bits) {
  double e = 0.0;
  const int n = spec.n_sites;
  for (int j = 0; j < n; ++j) {
    if (!((bits >> j) & 1)) continue;
    e += -spec.delta_g_mhz + fvd::stagger_sign(j) * spec.delta_l_mhz;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!((bits >> i) & 1) || !((bits >> j) & 1)) continue;
      const int ring = std::min(j - i, n - (j - i));
      double v = 0.0;
      if (spec.interaction == fvd::Interaction::NearestNeighbor) {
        v = ring == 1 ? spec.v_nn_mhz : 0.0;
      } else {
        double d = ring;
        if (spec.distance_mode == fvd::DistanceMode::Chord)
          d = std::sin(M_PI * ring / n) / std::sin(M_PI / n);
        v = spec.v_nn_mhz / std::pow(d, 6);
      }
      e += v;
    }
  }
  return fvd::kTwoPi * e;
}

inline Eigen::VectorXcd to_eigen(const fvd::StateVector& s) {
  Eigen::VectorXcd v(s.dim());
  for (std::size_t k = 0; k < s.dim(); ++k) v(k) = s.amp[k];
  return v;
}

inline fvd::StateVector from_eigen(int n_sites, const Eigen::VectorXcd& v) {
  fvd::StateVector s(n_sites);
  for (std::size_t k = 0; k < s.dim(); ++k) s.amp[k] = v(k);
  return s;
}

/// Deterministic pseudo-random state with real or complex amplitudes.
inline fvd::StateVector random_state(int n_sites, std::uint64_t seed, bool real_only = false) {
  fvd::StateVector s(n_sites);
  std::uint64_t x = seed;
  auto next = [&x]() {
    x += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return static_cast<double>(z ^ (z >> 31)) / 1.8446744073709552e19 - 0.5;
  };
  for (auto& a : s.amp) a = Complex(next(), real_only ? 0.0 : next());
  s.normalize();
  return s;
}

}  // namespace oracles
