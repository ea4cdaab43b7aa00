#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fvd/errors.hpp"

namespace fvd {

using Complex = std::complex<double>;

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char pauli_char(Pauli p);
Pauli pauli_from_char(char c);

/// One weighted Pauli string on n_sites spins. Letters are stored two bits
/// per site as (x, z) masks: X = (1,0), Y = (1,1), Z = (0,1). Site 0 is the
/// lowest bit.
struct PauliString {
  int n_sites = 0;
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  Complex coeff{1.0, 0.0};

  static PauliString identity(int n_sites, Complex c = 1.0);
  static PauliString single(int n_sites, int site, Pauli p, Complex c = 1.0);
  /// Letters given site 0 first, e.g. "XZ" = X on site 0, Z on site 1.
  static PauliString from_letters(std::string_view letters, Complex c = 1.0);

  Pauli letter(int site) const;
  std::string letters() const;
  bool is_identity() const { return x == 0 && z == 0; }
  /// Number of sites carrying a non-identity letter.
  int weight() const;
};

/// a·b with the {±1, ±i} group phase folded into the coefficient.
PauliString multiply(const PauliString& a, const PauliString& b);

/// True iff the letter patterns anticommute (coefficients ignored).
bool anticommutes(const PauliString& a, const PauliString& b);

/// Letter pattern of a string, the canonical key for term maps.
struct PauliPattern {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  friend bool operator==(const PauliPattern&, const PauliPattern&) = default;
};

struct PauliPatternHash {
  std::size_t operator()(const PauliPattern& p) const noexcept {
    std::uint64_t h = p.x * 0x9E3779B97F4A7C15ull;
    h ^= p.z + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h * 0xBF58476D1CE4E5B9ull);
  }
};

/// Weighted sum of Pauli strings in canonical merged form: one entry per
/// letter pattern, exact-zero coefficients dropped. The universal operator
/// representation; carries angular-frequency coefficients (rad/us) when it
/// represents a Hamiltonian.
class OperatorSum {
 public:
  using TermMap = std::unordered_map<PauliPattern, Complex, PauliPatternHash>;

  OperatorSum() = default;
  explicit OperatorSum(int n_sites);

  static OperatorSum zero(int n_sites) { return OperatorSum(n_sites); }
  static OperatorSum identity(int n_sites, Complex c = 1.0);
  /// c * sigma_p on one site.
  static OperatorSum single(int n_sites, int site, Pauli p, Complex c = 1.0);
  /// c * (1 + sigma_z)/2 on one site.
  static OperatorSum occupation(int n_sites, int site, Complex c = 1.0);

  int n_sites() const { return n_sites_; }
  std::size_t term_count() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  const TermMap& terms() const { return terms_; }

  void add(const PauliString& s);
  void add_pattern(PauliPattern p, Complex c);
  Complex coefficient(const PauliPattern& p) const;

  OperatorSum& operator+=(const OperatorSum& other);
  OperatorSum& operator-=(const OperatorSum& other);
  OperatorSum& operator*=(Complex scale);

  OperatorSum adjoint() const;
  bool is_hermitian(double tol = 1e-12) const;

  /// Sum of |coefficient|, an upper bound on the spectral norm.
  double l1_coeff_norm() const;
  double max_abs_coeff() const;

  /// Drop terms with |coefficient| <= eps (absolute).
  void prune(double eps);

  /// Terms in a fixed (z, x)-lexicographic order, for deterministic
  /// iteration, printing, and reductions.
  std::vector<PauliString> sorted_terms() const;

 private:
  int n_sites_ = 0;
  TermMap terms_;
};

OperatorSum operator+(OperatorSum a, const OperatorSum& b);
OperatorSum operator-(OperatorSum a, const OperatorSum& b);
OperatorSum operator*(Complex c, OperatorSum a);
OperatorSum operator*(OperatorSum a, Complex c);
OperatorSum operator*(const OperatorSum& a, const OperatorSum& b);

/// [a, b] = ab - ba in canonical merged form. Pairs of strings whose
/// patterns commute cancel identically and are never materialized.
OperatorSum commutator(const OperatorSum& a, const OperatorSum& b);

inline constexpr int kDefaultMaxBchOrder = 6;

/// ad_h^order(m): iterated commutator with merging after each level.
/// Term growth is exponential in the order, hence the cap.
OperatorSum nested_commutator(const OperatorSum& h, const OperatorSum& m, int order,
                              int max_order = kDefaultMaxBchOrder);

}  // namespace fvd
