#include "fvd/state.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "fvd/errors.hpp"
#include "fvd/parallel.hpp"

namespace fvd {

namespace {

constexpr Complex kPhases[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

inline int popcount(std::uint64_t v) { return std::popcount(v); }

// sigma_z is +1 on occupied (bit set) sites, so a z-string contributes
// (-1)^(#z-sites with the bit clear)
inline double z_sign(std::uint64_t index, std::uint64_t z_mask) {
  return (popcount(index & z_mask) & 1) ? -1.0 : 1.0;
}

// per-string constant: i^{#Y} from the letter bookkeeping times the sign
// flip for empty z-sites folded out of z_sign
inline Complex string_phase(std::uint64_t x_mask, std::uint64_t z_mask) {
  const Complex y_phase = kPhases[popcount(x_mask & z_mask) & 3];
  return (popcount(z_mask) & 1) ? -y_phase : y_phase;
}

}  // namespace

std::string BitConfig::to_string() const {
  std::string s(n_sites, '0');
  for (int j = 0; j < n_sites; ++j)
    if ((bits >> j) & 1) s[j] = '1';
  return s;
}

BitConfig BitConfig::from_string(std::string_view s) {
  BitConfig c{static_cast<int>(s.size()), 0};
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (s[j] == '1')
      c.bits |= 1ull << j;
    else if (s[j] != '0')
      throw DomainError("bit configuration must contain only '0'/'1'");
  }
  return c;
}

int BitConfig::hamming_distance(const BitConfig& other) const {
  if (n_sites != other.n_sites) throw DimensionError("hamming_distance: size mismatch");
  return popcount(bits ^ other.bits);
}

std::uint64_t neel_bits(int n_sites) {
  std::uint64_t bits = 0;
  for (int j = 1; j < n_sites; j += 2) bits |= 1ull << j;
  return bits;
}

StateVector::StateVector(int n) : n_sites(n), amp(std::size_t{1} << n) {
  if (n < 1 || n > 30) throw DomainError("StateVector: n_sites must be in [1, 30]");
}

double StateVector::norm() const {
  double s = 0.0;
  for (const Complex& a : amp) s += std::norm(a);
  return std::sqrt(s);
}

void StateVector::normalize() {
  const double n = norm();
  if (n == 0.0) throw AlgebraError("cannot normalize the zero vector");
  const double inv = 1.0 / n;
  for (Complex& a : amp) a *= inv;
}

StateVector StateVector::normalized_copy() const {
  StateVector out = *this;
  out.normalize();
  return out;
}

bool StateVector::is_real(double tol) const {
  for (const Complex& a : amp)
    if (std::abs(a.imag()) > tol) return false;
  return true;
}

StateVector StateVector::basis(int n_sites, std::uint64_t index) {
  StateVector s(n_sites);
  if (index >= s.dim()) throw DomainError("basis index out of range");
  s.amp[index] = 1.0;
  return s;
}

StateVector StateVector::basis(const BitConfig& config) {
  return basis(config.n_sites, config.bits);
}

StateVector StateVector::all_down(int n_sites) { return basis(n_sites, 0); }

StateVector StateVector::neel(int n_sites) { return basis(n_sites, neel_bits(n_sites)); }

StateVector StateVector::neel_prime(int n_sites) {
  const std::uint64_t mask = (n_sites == 64) ? ~0ull : ((1ull << n_sites) - 1);
  return basis(n_sites, mask & ~neel_bits(n_sites));
}

Complex inner(const StateVector& a, const StateVector& b) {
  if (a.n_sites != b.n_sites) throw DimensionError("inner: size mismatch");
  std::vector<Complex> partial;
  partial.reserve(64);
  const std::size_t n = a.dim();
  const std::size_t block = std::max<std::size_t>(1, n / 64);
  for (std::size_t begin = 0; begin < n; begin += block) {
    const std::size_t end = std::min(n, begin + block);
    Complex s = 0.0;
    for (std::size_t i = begin; i < end; ++i) s += std::conj(a.amp[i]) * b.amp[i];
    partial.push_back(s);
  }
  return pairwise_sum(partial);
}

Complex expectation(const PauliString& s, const StateVector& psi) {
  if (s.n_sites != psi.n_sites) throw DimensionError("expectation: size mismatch");
  const Complex phase = string_phase(s.x, s.z);
  const std::size_t n = psi.dim();
  Complex sum = 0.0;
  for (std::size_t b = 0; b < n; ++b) {
    sum += std::conj(psi.amp[b ^ s.x]) * (z_sign(b, s.z) * psi.amp[b]);
  }
  return s.coeff * phase * sum;
}

Complex expectation(const OperatorSum& op, const StateVector& psi) {
  if (op.n_sites() != psi.n_sites) throw DimensionError("expectation: size mismatch");
  if (std::abs(psi.norm() - 1.0) > 1e-9)
    throw AlgebraError("expectation: state is not normalized");
  const std::vector<PauliString> terms = op.sorted_terms();
  std::vector<Complex> contrib(terms.size());
  parallel_for_chunks(terms.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) contrib[i] = expectation(terms[i], psi);
  });
  return pairwise_sum(contrib);
}

void apply(const OperatorSum& op, std::span<const Complex> in, std::span<Complex> out) {
  CompiledOperator(op).apply(in, out);
}

CompiledOperator::CompiledOperator(const OperatorSum& op)
    : n_sites_(op.n_sites()), diag_(std::size_t{1} << op.n_sites(), Complex{0, 0}) {
  for (const PauliString& t : op.sorted_terms()) {
    const Complex coeff = t.coeff * string_phase(t.x, t.z);
    if (t.x == 0) {
      for (std::size_t k = 0; k < diag_.size(); ++k) diag_[k] += coeff * z_sign(k, t.z);
    } else {
      offdiag_.push_back(OffDiagTerm{t.x, t.z, coeff});
    }
  }
  l1_bound_ = op.l1_coeff_norm();
}

void CompiledOperator::apply(std::span<const Complex> in, std::span<Complex> out) const {
  if (in.size() != diag_.size() || out.size() != diag_.size())
    throw DimensionError("CompiledOperator::apply: span size mismatch");
  parallel_for_chunks(diag_.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      Complex acc = diag_[k] * in[k];
      for (const OffDiagTerm& t : offdiag_) {
        const std::size_t b = k ^ t.x;
        acc += t.coeff * z_sign(b, t.z) * in[b];
      }
      out[k] = acc;
    }
  });
}

void CompiledOperator::apply(const StateVector& in, StateVector& out) const {
  if (out.dim() != in.dim()) out = StateVector(in.n_sites);
  apply(std::span<const Complex>(in.amp), std::span<Complex>(out.amp));
}

}  // namespace fvd
