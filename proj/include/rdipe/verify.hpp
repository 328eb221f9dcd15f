#pragma once

// Brute-force numerical checks: commutant of O⊗O, Clifford twirls, average entanglement of
// Clifford-rotated W states, high-Pauli counting, doped-state separation and the continuity
// lemmas for Pauli distributions.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rdipe/rng.hpp"
#include "rdipe/states.hpp"

namespace rdipe {

using RealMatrix = MatrixX<double>;

/// Two n-qubit registers, first register in the high bits of the 2n-qubit index.
RealMatrix swap_full(std::size_t n);
/// Swaps qubits 0..n/2−1 of the first register with those of the second.
RealMatrix swap_half(std::size_t n);
/// |Φ_0⟩ = 2^{-n/2} Σ_x |x⟩|x⟩.
VectorX<double> phi0(std::size_t n);

struct CommutantBasis {
  std::size_t n = 0;
  std::size_t d_sym = 0, d_asym = 0;
  RealMatrix sym;   // P_sym / √d_sym
  RealMatrix asym;  // P_asym / √d_asym
  RealMatrix bbar;  // (|Φ_0⟩⟨Φ_0| − P_sym/d_sym) / √(1 − 1/d_sym)

  /// Hilbert–Schmidt Gram matrix of the three operators.
  Eigen::Matrix3d gram() const;
  /// Σ_k ⟨B_k, X⟩ B_k.
  MatrixX<cplx> project(const MatrixX<cplx> &x) const;
};

/// Throws TooLarge for n > 5.
CommutantBasis commutant_basis(std::size_t n);

/// Haar-random orthogonal matrix: QR of a Gaussian matrix with the diagonal of R made positive.
RealMatrix random_orthogonal(std::size_t dim, Rng &rng);

struct CommutantReport {
  std::size_t n = 0;
  double gram_error = 0;         // max |G − I|
  double max_commutator = 0;     // max ‖[B, O⊗O]‖_F over trials
  std::size_t trials = 0;
  bool passed() const { return gram_error < 1e-10 && max_commutator < 1e-8; }
  nlohmann::json to_json() const;
};
CommutantReport commutant_check(std::size_t n, std::size_t trials, Rng &rng);

struct TwirlReport {
  std::size_t n = 0;
  std::size_t group_order = 0;
  double max_deviation = 0;      // random Hermitian X: group average vs projection
  double fixed_point_error = 0;  // X in the commutant
  double kernel_error = 0;       // X orthogonal to the commutant
  double w_constants_error = 0;  // twirl of (|W⟩⟨W|)^{⊗2} vs a P_sym + b |Φ_0⟩⟨Φ_0| (n >= 2)
  bool passed() const {
    return max_deviation < 1e-8 && fixed_point_error < 1e-8 && kernel_error < 1e-8 && w_constants_error < 1e-8;
  }
  nlohmann::json to_json() const;
};
/// Exact average of C^{⊗2} X C^{†⊗2} over every element of rCl(n), n ∈ {1, 2}.
TwirlReport twirl_check(std::size_t n, std::size_t samples, Rng &rng);

/// Coefficients of the commutant projection of (|W⟩⟨W|)^{⊗2} = a P_sym + b |Φ_0⟩⟨Φ_0| + ...,
/// with k = 4^n a and k' = 2^n b, so the twirl is 4^{-n}(k P_sym + 2^n k' |Φ_0⟩⟨Φ_0|).
struct TwirlConstants {
  double a = 0, b = 0;
  double k = 0, kprime = 0;
  /// Predicted E tr(ρ_half²) = a 2^{3n/2} + b and the bound −log2 of it.
  double predicted_purity = 0;
  double predicted_s2 = 0;
};
/// Closed form from tr(P_sym X) = 1 and ⟨Φ_0|X|Φ_0⟩ = 2^{-n} for a real pure X.
TwirlConstants twirl_constants(std::size_t n);
/// The same constants by explicit HS projection with dense operators (n <= 5).
TwirlConstants twirl_constants_dense(const QuantumState &w);

struct SwapTraceReport {
  std::size_t n = 0;
  double tr_swap_psym = 0, expected = 0;  // tr(SWAP_{n/2} P_sym) vs 2^{3n/2}
  double tr_swap_phi0 = 0;                // tr(SWAP_{n/2} |Φ_0⟩⟨Φ_0|), expect 1
  double asym_overlap = 0;                // ⟨P_asym, (|W⟩⟨W|)^{⊗2}⟩, expect 0
  bool passed() const;
  nlohmann::json to_json() const;
};
SwapTraceReport swap_trace_check(std::size_t n);

struct EntanglementPoint {
  std::size_t n = 0;
  std::size_t samples = 0;
  double mean_s2 = 0, se_s2 = 0;
  double mean_purity = 0, se_purity = 0;
  TwirlConstants constants;
  /// Mean half-system purity matches the twirl within 3 standard errors, and mean S₂ is at
  /// least the −log2 bound minus 3 standard errors (−log is convex, so E S₂ >= −log E tr).
  bool purity_consistent() const;
  bool bound_consistent() const;
  nlohmann::json to_json() const;
};

/// Monte Carlo over `samples` random real Cliffords (depth layers) applied to |W_n⟩.
/// Throws OddN, TooLarge (n > 12).
EntanglementPoint entanglement_average_check(std::size_t n, std::size_t samples, std::size_t depth, Rng &rng);

struct LinearFit {
  double slope = 0, intercept = 0, r2 = 0;
};
LinearFit linear_fit(const std::vector<double> &x, const std::vector<double> &y);

struct EntanglementScaling {
  std::vector<EntanglementPoint> points;
  LinearFit fit;
  bool passed() const;
  nlohmann::json to_json() const;
};
EntanglementScaling entanglement_scaling(const std::vector<std::size_t> &ns, std::size_t samples, Rng &rng);

/// |{a : |⟨P_a⟩| > threshold}|. W and Dicke supports use exact class multiplicities (any n
/// <= 32); other states need n <= 8 (TooLarge otherwise).
std::uint64_t count_high_paulis(const QuantumState &s, double threshold);
/// 2 Σ_{k <= n/8} C(n, k).
std::uint64_t counting_bound(std::size_t n);

struct SeparationReport {
  std::size_t n = 0, t = 0;
  std::uint64_t stabilizers = 0;          // |{a : |⟨P_a⟩_ρ'| = 1}|
  std::uint64_t cw_high = 0;              // |{a : |⟨P_a⟩_ρ| > 3/4}|
  bool premise = false;                   // stabilizers >= 2^{3n/4} > cw_high
  bool witness_found = false;
  std::string witness;                    // Pauli with the largest |⟨P⟩_ρ − ⟨P⟩_ρ'|
  double witness_gap = 0;                 // that difference; lower-bounds ‖ρ − ρ'‖_tr
  double trace_distance = 0;
  bool applicable() const { return premise; }
  bool passed() const;
  nlohmann::json to_json() const;
};

/// Compares ρ ∈ CW(n) with an arbitrary ρ' through their full Pauli tables (n <= 8).
SeparationReport separation_check(const QuantumState &rho, const DenseState &rho_prime, std::size_t t);
/// t-doped ρ': |0⟩ through a random real Clifford circuit with t π/4 phase gates at random
/// positions; ρ: a random Clifford rotation of |W_n⟩.
DenseState t_doped_state(std::size_t n, std::size_t t, Rng &rng);
SeparationReport doped_separation_demo(std::size_t n, std::size_t t, Rng &rng);

struct LemmaReport {
  std::size_t pairs = 0;
  std::size_t tv0_violations = 0, tv_violations = 0, purity_violations = 0, cdf_violations = 0;
  double tv0_worst_ratio = 0;    // max lhs / ‖ρ − σ‖_tr for the ℓ1 inequality (bound: 2)
  double tv_worst_ratio = 0;     // same for max{tr ρ², tr σ²}·TV
  double cdf_worst_slack = 0;    // max over ε of F_σ(ε) − F_ρ(2ε) − 4‖ρ − σ‖_tr / tr σ²
  bool passed() const { return tv0_violations + tv_violations + purity_violations + cdf_violations == 0; }
  nlohmann::json to_json() const;
};

/// Random dense pairs (n <= max_n): Pauli-distribution continuity in trace norm and the CDF
/// continuity F_σ(ε) <= F_ρ(2ε) + 4‖ρ − σ‖_tr / tr σ².
LemmaReport lemma_suite(std::size_t pairs, std::size_t max_n, Rng &rng);

/// Named groups: identity, wtable, cdf, commutant, twirl, swap, entangle, counting, doped,
/// lemmas, twocopy, or all. Returns {"checks": [...], "passed": bool}.
nlohmann::json run_verify_suite(const std::string &suite, std::uint64_t seed);

}  // namespace rdipe
