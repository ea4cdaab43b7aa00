#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fvd/pauli.hpp"

namespace fvd {

/// Occupation word for one product state: bit j = 1 means site j is up
/// (Rydberg). Site numbering is 0-based in code; the physics convention of
/// alternating signs puts epsilon = -1 on even code sites.
struct BitConfig {
  int n_sites = 0;
  std::uint64_t bits = 0;

  /// "0101..." with site 0 printed first, '1' = up.
  std::string to_string() const;
  static BitConfig from_string(std::string_view s);
  int hamming_distance(const BitConfig& other) const;
};

/// Staggering sign of site j: -1 on even code sites, +1 on odd ones.
inline double stagger_sign(int site) { return (site & 1) ? 1.0 : -1.0; }

/// Bits set on the +1 sublattice for an n-site word (the Neel pattern).
std::uint64_t neel_bits(int n_sites);

/// 2^n_sites complex amplitudes in occupation-basis ordering:
/// bit j of the index = site j occupation.
struct StateVector {
  int n_sites = 0;
  std::vector<Complex> amp;

  StateVector() = default;
  explicit StateVector(int n);

  std::size_t dim() const { return amp.size(); }
  double norm() const;
  void normalize();
  StateVector normalized_copy() const;
  bool is_real(double tol = 1e-12) const;

  static StateVector basis(int n_sites, std::uint64_t index);
  static StateVector basis(const BitConfig& config);
  static StateVector all_down(int n_sites);
  /// False-vacuum Neel ordering (up on the +1 sublattice).
  static StateVector neel(int n_sites);
  /// Opposite Neel ordering (the true vacuum for positive staggered field).
  static StateVector neel_prime(int n_sites);
};

Complex inner(const StateVector& a, const StateVector& b);

/// <psi|op|psi> by per-string amplitude permutation and phase, parallel over
/// terms with a fixed-order pairwise reduction. Never materializes a matrix.
/// Requires |norm - 1| < 1e-9.
Complex expectation(const OperatorSum& op, const StateVector& psi);
Complex expectation(const PauliString& s, const StateVector& psi);

/// out = op * in for raw amplitude spans (no normalization requirements).
void apply(const OperatorSum& op, std::span<const Complex> in, std::span<Complex> out);

/// OperatorSum compiled for repeated application: the z-only part collapses
/// into one diagonal array, remaining strings are applied in gather form
/// (each output amplitude written once, so blocks parallelize race-free).
class CompiledOperator {
 public:
  CompiledOperator() = default;
  explicit CompiledOperator(const OperatorSum& op);

  int n_sites() const { return n_sites_; }
  std::size_t dim() const { return diag_.size(); }
  /// out = A * in; in and out must not alias.
  void apply(std::span<const Complex> in, std::span<Complex> out) const;
  void apply(const StateVector& in, StateVector& out) const;
  double l1_norm_bound() const { return l1_bound_; }

 private:
  struct OffDiagTerm {
    std::uint64_t x = 0;
    std::uint64_t z = 0;
    Complex coeff;  // includes the i^{#Y} bookkeeping phase
  };
  int n_sites_ = 0;
  std::vector<Complex> diag_;
  std::vector<OffDiagTerm> offdiag_;
  double l1_bound_ = 0.0;
};

}  // namespace fvd
