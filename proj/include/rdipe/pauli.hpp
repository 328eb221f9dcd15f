#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "rdipe/bits.hpp"

namespace rdipe {

/// n-qubit Hermitian Pauli operator  sign * P_1 ⊗ ... ⊗ P_n  with sign in {+1, -1}.
///
/// Site q carries the pair (x_q, z_q): (0,0)=I, (1,0)=X, (1,1)=Y, (0,1)=Z, where Y is the
/// Hermitian Pauli Y = i X Z. The same object doubles as a Bell-outcome label a ∈ {0,1,2,3}^n
/// with digits I=0, X=1, Y=2, Z=3 (the sign is ignored for labels).
class PauliString {
 public:
  PauliString() = default;
  /// Identity on n qubits.
  explicit PauliString(std::size_t n) : xs_(n), zs_(n) {}
  PauliString(BitVector xs, BitVector zs, bool negative = false);

  /// Parses an optional sign followed by letters, e.g. "-XYZI" or "XX".
  static PauliString from_string(std::string_view text);
  /// Parses a base-4 digit string; character q is the digit of qubit q.
  static PauliString from_label(std::string_view digits);
  /// Inverse of index(): qubit 0 is the most significant base-4 digit. Requires n <= 32.
  static PauliString from_index(std::size_t n, std::uint64_t index);
  static PauliString single(std::size_t n, std::size_t site, char letter);

  std::size_t size() const noexcept { return xs_.size(); }

  const BitVector &xs() const noexcept { return xs_; }
  const BitVector &zs() const noexcept { return zs_; }
  BitVector &xs() noexcept { return xs_; }
  BitVector &zs() noexcept { return zs_; }

  bool negative() const noexcept { return negative_; }
  int sign() const noexcept { return negative_ ? -1 : 1; }
  void set_negative(bool v) noexcept { negative_ = v; }
  void flip_sign() noexcept { negative_ = !negative_; }

  char letter(std::size_t site) const noexcept;
  void set_letter(std::size_t site, char letter);
  /// Base-4 digit of a site (I=0, X=1, Y=2, Z=3).
  unsigned digit(std::size_t site) const noexcept;

  bool is_identity() const noexcept { return xs_.none() && zs_.none(); }
  /// Number of Y factors.
  std::size_t y_count() const noexcept { return xs_.and_popcount(zs_); }
  bool commutes_with(const PauliString &other) const noexcept;

  /// "+XYZI" style rendering.
  std::string str() const;
  /// Base-4 digit string, qubit 0 first.
  std::string label() const;
  /// Label as an integer in [0, 4^n) with qubit 0 as the most significant digit. Requires n <= 32.
  std::uint64_t index() const;

  PauliString unsigned_copy() const {
    PauliString p = *this;
    p.negative_ = false;
    return p;
  }

  friend bool operator==(const PauliString &, const PauliString &) noexcept = default;

 private:
  BitVector xs_;
  BitVector zs_;
  bool negative_ = false;
};

struct WeightCounts {
  std::size_t x = 0;
  std::size_t y = 0;
  std::size_t z = 0;
  friend bool operator==(const WeightCounts &, const WeightCounts &) = default;
};

WeightCounts weight_counts(const PauliString &p);

/// Returns R = P·Q. Throws Errc::PhaseNotReal when the product carries a phase of ±i.
PauliString multiply(const PauliString &p, const PauliString &q);

/// SWAP eigenvalue (-1)^{y_a} of the Bell state |Φ_a⟩.
int swap_symmetry_sign(const PauliString &a);

namespace detail {

/// acc <- acc · rhs ignoring signs; returns the exponent k (mod 4) of the extra phase i^k
/// picked up by multiplying the letter matrices site by site.
unsigned mul_letters_inplace(PauliString &acc, const PauliString &rhs) noexcept;

}  // namespace detail

}  // namespace rdipe

template <>
struct std::hash<rdipe::PauliString> {
  std::size_t operator()(const rdipe::PauliString &p) const noexcept {
    return p.xs().hash() * 31u + p.zs().hash() + (p.negative() ? 1u : 0u);
  }
};
