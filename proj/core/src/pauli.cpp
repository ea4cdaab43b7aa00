#include "fvd/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace fvd {

namespace {

constexpr Complex kPhases[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};  // i^k

void check_site(int n_sites, int site) {
  if (site < 0 || site >= n_sites) throw DomainError("site index out of range");
}

void check_same_sites(int a, int b, const char* what) {
  if (a != b) throw DimensionError(std::string(what) + ": operand site counts differ");
}

inline int popcount(std::uint64_t v) { return std::popcount(v); }

}  // namespace

char pauli_char(Pauli p) { return "IXYZ"[static_cast<int>(p)]; }

Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I': return Pauli::I;
    case 'X': return Pauli::X;
    case 'Y': return Pauli::Y;
    case 'Z': return Pauli::Z;
    default: throw DomainError(std::string("unknown Pauli letter '") + c + "'");
  }
}

PauliString PauliString::identity(int n_sites, Complex c) {
  if (n_sites < 1 || n_sites > 64) throw DomainError("n_sites must be in [1, 64]");
  return PauliString{n_sites, 0, 0, c};
}

PauliString PauliString::single(int n_sites, int site, Pauli p, Complex c) {
  PauliString s = identity(n_sites, c);
  check_site(n_sites, site);
  const std::uint64_t bit = 1ull << site;
  switch (p) {
    case Pauli::I: break;
    case Pauli::X: s.x |= bit; break;
    case Pauli::Y: s.x |= bit; s.z |= bit; break;
    case Pauli::Z: s.z |= bit; break;
  }
  return s;
}

PauliString PauliString::from_letters(std::string_view letters, Complex c) {
  PauliString s = identity(static_cast<int>(letters.size()), c);
  for (std::size_t i = 0; i < letters.size(); ++i) {
    const Pauli p = pauli_from_char(letters[i]);
    const std::uint64_t bit = 1ull << i;
    if (p == Pauli::X || p == Pauli::Y) s.x |= bit;
    if (p == Pauli::Z || p == Pauli::Y) s.z |= bit;
  }
  return s;
}

Pauli PauliString::letter(int site) const {
  check_site(n_sites, site);
  const bool bx = (x >> site) & 1, bz = (z >> site) & 1;
  if (bx && bz) return Pauli::Y;
  if (bx) return Pauli::X;
  if (bz) return Pauli::Z;
  return Pauli::I;
}

std::string PauliString::letters() const {
  std::string out(n_sites, 'I');
  for (int s = 0; s < n_sites; ++s) out[s] = pauli_char(letter(s));
  return out;
}

int PauliString::weight() const { return popcount(x | z); }

PauliString multiply(const PauliString& a, const PauliString& b) {
  check_same_sites(a.n_sites, b.n_sites, "multiply");
  PauliString c;
  c.n_sites = a.n_sites;
  c.x = a.x ^ b.x;
  c.z = a.z ^ b.z;
  // Per site, with P = i^{xz} X^x Z^z: moving Z^za past X^xb costs (-1)^{za xb},
  // and the Y bookkeeping phases of the operands and the result combine as below.
  const int phase = (popcount(a.x & a.z) + popcount(b.x & b.z) - popcount(c.x & c.z) +
                     2 * popcount(a.z & b.x)) &
                    3;
  c.coeff = a.coeff * b.coeff * kPhases[phase];
  return c;
}

bool anticommutes(const PauliString& a, const PauliString& b) {
  return ((popcount(a.x & b.z) + popcount(a.z & b.x)) & 1) != 0;
}

OperatorSum::OperatorSum(int n_sites) : n_sites_(n_sites) {
  if (n_sites < 1 || n_sites > 64) throw DomainError("n_sites must be in [1, 64]");
}

OperatorSum OperatorSum::identity(int n_sites, Complex c) {
  OperatorSum op(n_sites);
  op.add(PauliString::identity(n_sites, c));
  return op;
}

OperatorSum OperatorSum::single(int n_sites, int site, Pauli p, Complex c) {
  OperatorSum op(n_sites);
  op.add(PauliString::single(n_sites, site, p, c));
  return op;
}

OperatorSum OperatorSum::occupation(int n_sites, int site, Complex c) {
  OperatorSum op(n_sites);
  op.add(PauliString::identity(n_sites, 0.5 * c));
  op.add(PauliString::single(n_sites, site, Pauli::Z, 0.5 * c));
  return op;
}

void OperatorSum::add(const PauliString& s) {
  check_same_sites(n_sites_, s.n_sites, "add");
  add_pattern(PauliPattern{s.x, s.z}, s.coeff);
}

void OperatorSum::add_pattern(PauliPattern p, Complex c) {
  auto [it, inserted] = terms_.try_emplace(p, c);
  if (!inserted) {
    it->second += c;
    if (it->second == Complex{0.0, 0.0}) terms_.erase(it);
  } else if (c == Complex{0.0, 0.0}) {
    terms_.erase(it);
  }
}

Complex OperatorSum::coefficient(const PauliPattern& p) const {
  auto it = terms_.find(p);
  return it == terms_.end() ? Complex{0.0, 0.0} : it->second;
}

OperatorSum& OperatorSum::operator+=(const OperatorSum& other) {
  check_same_sites(n_sites_, other.n_sites_, "operator+=");
  for (const auto& [p, c] : other.terms_) add_pattern(p, c);
  return *this;
}

OperatorSum& OperatorSum::operator-=(const OperatorSum& other) {
  check_same_sites(n_sites_, other.n_sites_, "operator-=");
  for (const auto& [p, c] : other.terms_) add_pattern(p, -c);
  return *this;
}

OperatorSum& OperatorSum::operator*=(Complex scale) {
  if (scale == Complex{0.0, 0.0}) {
    terms_.clear();
    return *this;
  }
  for (auto& [p, c] : terms_) c *= scale;
  return *this;
}

OperatorSum OperatorSum::adjoint() const {
  OperatorSum out(n_sites_);
  for (const auto& [p, c] : terms_) {
    // letter pattern is self-adjoint; only the Y bookkeeping phase conjugates
    out.add_pattern(p, std::conj(c));
  }
  return out;
}

bool OperatorSum::is_hermitian(double tol) const {
  for (const auto& [p, c] : terms_) {
    if (std::abs(c.imag()) > tol * std::max(1.0, std::abs(c.real()))) return false;
  }
  return true;
}

double OperatorSum::l1_coeff_norm() const {
  double sum = 0.0;
  for (const auto& [p, c] : terms_) sum += std::abs(c);
  return sum;
}

double OperatorSum::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [p, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

void OperatorSum::prune(double eps) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) <= eps)
      it = terms_.erase(it);
    else
      ++it;
  }
}

std::vector<PauliString> OperatorSum::sorted_terms() const {
  std::vector<PauliString> out;
  out.reserve(terms_.size());
  for (const auto& [p, c] : terms_) out.push_back(PauliString{n_sites_, p.x, p.z, c});
  std::sort(out.begin(), out.end(), [](const PauliString& a, const PauliString& b) {
    return a.z != b.z ? a.z < b.z : a.x < b.x;
  });
  return out;
}

OperatorSum operator+(OperatorSum a, const OperatorSum& b) { return a += b; }
OperatorSum operator-(OperatorSum a, const OperatorSum& b) { return a -= b; }
OperatorSum operator*(Complex c, OperatorSum a) { return a *= c; }
OperatorSum operator*(OperatorSum a, Complex c) { return a *= c; }

OperatorSum operator*(const OperatorSum& a, const OperatorSum& b) {
  if (a.n_sites() != b.n_sites()) throw DimensionError("operator*: operand site counts differ");
  OperatorSum out(a.n_sites());
  for (const auto& [pa, ca] : a.terms()) {
    const PauliString sa{a.n_sites(), pa.x, pa.z, ca};
    for (const auto& [pb, cb] : b.terms()) {
      const PauliString sb{b.n_sites(), pb.x, pb.z, cb};
      out.add(multiply(sa, sb));
    }
  }
  return out;
}

OperatorSum commutator(const OperatorSum& a, const OperatorSum& b) {
  if (a.n_sites() != b.n_sites()) throw DimensionError("commutator: operand site counts differ");
  OperatorSum out(a.n_sites());
  for (const auto& [pa, ca] : a.terms()) {
    const PauliString sa{a.n_sites(), pa.x, pa.z, ca};
    for (const auto& [pb, cb] : b.terms()) {
      const PauliString sb{b.n_sites(), pb.x, pb.z, cb};
      if (!anticommutes(sa, sb)) continue;  // ab = ba, pair cancels
      PauliString prod = multiply(sa, sb);
      prod.coeff *= 2.0;
      out.add(prod);
    }
  }
  return out;
}

OperatorSum nested_commutator(const OperatorSum& h, const OperatorSum& m, int order,
                              int max_order) {
  if (order < 0) throw DomainError("nested_commutator: order must be >= 0");
  if (order > max_order)
    throw DomainError("nested_commutator: order " + std::to_string(order) +
                      " above cap " + std::to_string(max_order));
  OperatorSum current = m;
  for (int k = 0; k < order; ++k) {
    current = commutator(h, current);
    // merged in the map already; shed floating-point dust so term counts
    // stay meaningful at high order
    current.prune(1e-14 * current.max_abs_coeff());
  }
  return current;
}

}  // namespace fvd
