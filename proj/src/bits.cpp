#include "rdipe/bits.hpp"

#include "rdipe/errors.hpp"

namespace rdipe {

BitVector BitVector::from_string(std::string_view bits) {
  BitVector out(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      out.set(i, true);
    } else if (bits[i] != '0') {
      fail(Errc::ParseError, "bit string may only contain '0' and '1': " + std::string(bits));
    }
  }
  return out;
}

BitVector BitVector::from_u64(std::size_t n, std::uint64_t value) {
  if (n > 64) fail(Errc::InvalidArgument, "from_u64 needs n <= 64");
  BitVector out(n);
  if (n == 0) return out;
  if (n < 64) value &= (std::uint64_t{1} << n) - 1;
  out.words_[0] = value;
  return out;
}

std::size_t BitVector::popcount() const noexcept {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

bool BitVector::none() const noexcept {
  for (auto w : words_) {
    if (w) return false;
  }
  return true;
}

bool BitVector::dot(const BitVector &other) const noexcept { return and_popcount(other) & 1u; }

std::size_t BitVector::and_popcount(const BitVector &other) const noexcept {
  std::size_t c = 0;
  for (std::size_t k = 0; k < words_.size(); ++k) {
    c += static_cast<std::size_t>(std::popcount(words_[k] & other.words_[k]));
  }
  return c;
}

BitVector &BitVector::operator^=(const BitVector &other) noexcept {
  for (std::size_t k = 0; k < words_.size(); ++k) words_[k] ^= other.words_[k];
  return *this;
}

BitVector &BitVector::operator&=(const BitVector &other) noexcept {
  for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= other.words_[k];
  return *this;
}

std::string BitVector::str() const {
  std::string s(n_, '0');
  for (std::size_t i = 0; i < n_; ++i) {
    if ((*this)[i]) s[i] = '1';
  }
  return s;
}

std::size_t BitVector::hash() const noexcept {
  std::uint64_t h = 0x9E3779B97F4A7C15ull ^ n_;
  for (auto w : words_) {
    h ^= w + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

}  // namespace rdipe
