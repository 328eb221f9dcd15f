#include "rdipe/pauli.hpp"

#include <bit>

#include "rdipe/errors.hpp"

namespace rdipe {

PauliString::PauliString(BitVector xs, BitVector zs, bool negative)
    : xs_(std::move(xs)), zs_(std::move(zs)), negative_(negative) {
  if (xs_.size() != zs_.size()) {
    fail(Errc::DimensionMismatch, "x and z parts must have the same length");
  }
}

PauliString PauliString::from_string(std::string_view text) {
  bool negative = false;
  if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  PauliString p(text.size());
  for (std::size_t q = 0; q < text.size(); ++q) p.set_letter(q, text[q]);
  p.negative_ = negative;
  return p;
}

PauliString PauliString::from_label(std::string_view digits) {
  static constexpr char kLetters[] = {'I', 'X', 'Y', 'Z'};
  PauliString p(digits.size());
  for (std::size_t q = 0; q < digits.size(); ++q) {
    const char c = digits[q];
    if (c < '0' || c > '3') fail(Errc::ParseError, "label digits must be 0..3: " + std::string(digits));
    p.set_letter(q, kLetters[c - '0']);
  }
  return p;
}

PauliString PauliString::from_index(std::size_t n, std::uint64_t index) {
  static constexpr char kLetters[] = {'I', 'X', 'Y', 'Z'};
  if (n > 32) fail(Errc::InvalidArgument, "from_index needs n <= 32");
  PauliString p(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t q = n - 1 - k;
    p.set_letter(q, kLetters[index & 3u]);
    index >>= 2;
  }
  return p;
}

PauliString PauliString::single(std::size_t n, std::size_t site, char letter) {
  if (site >= n) fail(Errc::InvalidSite, "site out of range");
  PauliString p(n);
  p.set_letter(site, letter);
  return p;
}

char PauliString::letter(std::size_t site) const noexcept {
  static constexpr char kByXz[] = {'I', 'X', 'Z', 'Y'};
  return kByXz[(xs_[site] ? 1 : 0) | (zs_[site] ? 2 : 0)];
}

void PauliString::set_letter(std::size_t site, char letter) {
  if (site >= size()) fail(Errc::InvalidSite, "site out of range");
  bool x = false;
  bool z = false;
  switch (letter) {
    case 'I': case '_': break;
    case 'X': x = true; break;
    case 'Y': x = true; z = true; break;
    case 'Z': z = true; break;
    default: fail(Errc::ParseError, std::string("unknown Pauli letter '") + letter + "'");
  }
  xs_.set(site, x);
  zs_.set(site, z);
}

unsigned PauliString::digit(std::size_t site) const noexcept {
  // I=00, X=01, Y=10, Z=11 as (z, x^z).
  const bool x = xs_[site];
  const bool z = zs_[site];
  return (z ? 2u : 0u) | ((x != z) ? 1u : 0u);
}

bool PauliString::commutes_with(const PauliString &other) const noexcept {
  return xs_.dot(other.zs_) == zs_.dot(other.xs_);
}

std::string PauliString::str() const {
  std::string s(size() + 1, 'I');
  s[0] = negative_ ? '-' : '+';
  for (std::size_t q = 0; q < size(); ++q) s[q + 1] = letter(q);
  return s;
}

std::string PauliString::label() const {
  std::string s(size(), '0');
  for (std::size_t q = 0; q < size(); ++q) s[q] = static_cast<char>('0' + digit(q));
  return s;
}

std::uint64_t PauliString::index() const {
  if (size() > 32) fail(Errc::InvalidArgument, "index() needs n <= 32");
  std::uint64_t idx = 0;
  for (std::size_t q = 0; q < size(); ++q) idx = (idx << 2) | digit(q);
  return idx;
}

WeightCounts weight_counts(const PauliString &p) {
  const std::size_t y = p.xs().and_popcount(p.zs());
  return {p.xs().popcount() - y, y, p.zs().popcount() - y};
}

namespace detail {

unsigned mul_letters_inplace(PauliString &acc, const PauliString &rhs) noexcept {
  auto ax = acc.xs().words();
  auto az = acc.zs().words();
  auto bx = rhs.xs().words();
  auto bz = rhs.zs().words();
  // Per site the product of letters (x1,z1)(x2,z2) contributes i^g with g in {-1,0,1}.
  long plus = 0;
  long minus = 0;
  for (std::size_t k = 0; k < ax.size(); ++k) {
    const std::uint64_t a = ax[k], b = az[k], c = bx[k], d = bz[k];
    const std::uint64_t p = (a & b & ~c & d) | (a & ~b & c & d) | (~a & b & c & ~d);
    const std::uint64_t m = (a & b & c & ~d) | (a & ~b & ~c & d) | (~a & b & c & d);
    plus += std::popcount(p);
    minus += std::popcount(m);
    ax[k] = a ^ c;
    az[k] = b ^ d;
  }
  return static_cast<unsigned>(((plus - minus) % 4 + 4) % 4);
}

}  // namespace detail

PauliString multiply(const PauliString &p, const PauliString &q) {
  if (p.size() != q.size()) fail(Errc::DimensionMismatch, "multiply needs equal qubit counts");
  PauliString r = p;
  const unsigned phase = detail::mul_letters_inplace(r, q);
  if (phase & 1u) {
    fail(Errc::PhaseNotReal, p.str() + " * " + q.str() + " has an imaginary phase");
  }
  r.set_negative((p.negative() != q.negative()) != (phase == 2));
  return r;
}

int swap_symmetry_sign(const PauliString &a) { return (a.y_count() & 1u) ? -1 : 1; }

}  // namespace rdipe
