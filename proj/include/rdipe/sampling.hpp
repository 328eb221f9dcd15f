#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "rdipe/pauli.hpp"
#include "rdipe/rng.hpp"
#include "rdipe/states.hpp"

namespace rdipe {

/// One permutation class of Pauli strings (nx X's, ny Y's, nz Z's) on a permutation-symmetric
/// support state, with the shared expectation and the total Pauli-distribution mass.
struct PauliClass {
  std::size_t nx = 0, ny = 0, nz = 0;
  double expectation = 0.0;
  double log_multiplicity = 0.0;  // ln of n!/(nx! ny! nz! ni!)
  double probability = 0.0;       // multiplicity · ⟨P⟩² / 2^n
};

/// Nonzero classes of a W or Dicke support (the Clifford is ignored, which leaves the
/// distribution of ⟨P⟩² unchanged). Throws InvalidArgument for custom supports.
std::vector<PauliClass> symmetric_spectrum(const CwState &s);

/// Exact sample from p_{W_n} (n >= 2).
PauliString w_pauli_sample(std::size_t n, Rng &rng);

/// Bell sampler prepared once per state; `sample` is const and safe to share across threads.
///
/// Dense states with n <= 10 (pure) or n <= 8 (mixed) sample from the full 4^n table. Larger
/// pure dense states draw x from the autocorrelation of |ψ|² and then z from one
/// Walsh–Hadamard row. Structured states draw b from the Pauli distribution of their support
/// state and return the label of C P_b C†.
class BellSampler {
 public:
  explicit BellSampler(const QuantumState &s);
  ~BellSampler();
  BellSampler(BellSampler &&) noexcept;
  BellSampler &operator=(BellSampler &&) noexcept;

  std::size_t size() const noexcept { return n_; }
  PauliString sample(Rng &rng) const;

 private:
  struct Impl;
  std::size_t n_ = 0;
  std::unique_ptr<Impl> impl_;
};

/// Sign-free Bell outcome label a ~ q_ρ.
PauliString bell_sample(const QuantumState &s, Rng &rng);

/// Mean of `shots` ±1 outcomes with P(+1) = (1 + e)/2.
double shots_from_expectation(double e, std::uint64_t shots, Rng &rng);
/// Single-copy estimate of ⟨P⟩ from `shots` measurements.
double pauli_shots(const QuantumState &s, const PauliString &p, std::uint64_t shots, Rng &rng);

/// Mean SWAP sign (-1)^{y_a} over `shots` Bell samples; unbiased for tr ρ².
double estimate_purity(const QuantumState &s, std::uint64_t shots, Rng &rng);
double estimate_purity(const BellSampler &sampler, double exact_purity, std::uint64_t shots, Rng &rng);

/// Above this many shots the purity estimate draws the count of +1 signs from its binomial
/// law instead of generating every Bell sample.
inline constexpr std::uint64_t kExplicitPurityShots = std::uint64_t{1} << 16;

}  // namespace rdipe
