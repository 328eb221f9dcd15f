#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rdipe {

/// Fixed-length bit vector packed into 64-bit words; bit i lives at bit (i % 64) of word i / 64.
/// Unused high bits of the last word are always zero.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

  /// Parses "0101..." with character i giving bit i.
  static BitVector from_string(std::string_view bits);
  /// Low n bits of `value`; requires n <= 64.
  static BitVector from_u64(std::size_t n, std::uint64_t value);

  std::size_t size() const noexcept { return n_; }
  std::size_t num_words() const noexcept { return words_.size(); }

  bool operator[](std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i, bool v) noexcept {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (v) {
      words_[i >> 6] |= mask;
    } else {
      words_[i >> 6] &= ~mask;
    }
  }
  void flip(std::size_t i) noexcept { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  std::span<std::uint64_t> words() noexcept { return words_; }
  std::span<const std::uint64_t> words() const noexcept { return words_; }

  std::size_t popcount() const noexcept;
  bool none() const noexcept;
  /// Parity of popcount(*this & other).
  bool dot(const BitVector &other) const noexcept;
  std::size_t and_popcount(const BitVector &other) const noexcept;

  BitVector &operator^=(const BitVector &other) noexcept;
  BitVector &operator&=(const BitVector &other) noexcept;
  friend BitVector operator^(BitVector a, const BitVector &b) noexcept { return a ^= b; }
  friend BitVector operator&(BitVector a, const BitVector &b) noexcept { return a &= b; }

  /// Value of the bits as an integer with bit i -> 2^i; requires n <= 64.
  std::uint64_t to_u64() const noexcept { return words_.empty() ? 0 : words_[0]; }

  std::string str() const;

  friend bool operator==(const BitVector &a, const BitVector &b) noexcept = default;
  friend auto operator<=>(const BitVector &a, const BitVector &b) noexcept = default;

  std::size_t hash() const noexcept;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace rdipe

template <>
struct std::hash<rdipe::BitVector> {
  std::size_t operator()(const rdipe::BitVector &b) const noexcept { return b.hash(); }
};
