#pragma once

// Noise channels on dense states, trace distance and the robustness experiment.
//
// Trace distance here is the Schatten-1 norm ‖ρ − σ‖_tr = Σ|λ_i(ρ − σ)| without the usual 1/2,
// so orthogonal pure states are at distance 2.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rdipe/states.hpp"

namespace rdipe {

enum class ChannelKind { Depolarizing, Pauli, CoherentPhase };

std::string channel_kind_name(ChannelKind k);
ChannelKind channel_kind_from_name(const std::string &s);

struct NoiseChannel {
  ChannelKind kind = ChannelKind::Depolarizing;
  double p = 0.0;                 // global depolarizing weight
  double px = 0, py = 0, pz = 0;  // per-site Pauli probabilities
  double theta = 0.0;             // phase angle of diag(1, e^{iθ})
  std::vector<std::size_t> sites; // coherent phase targets

  static NoiseChannel depolarizing(double p);
  static NoiseChannel pauli(double px, double py, double pz);
  static NoiseChannel coherent_phase(double theta, std::vector<std::size_t> sites);

  /// Same kind with a strength s in [0, 1]: p = s, (px,py,pz) = (s,s,s)/3, θ = sπ.
  NoiseChannel with_strength(double s) const;
  nlohmann::json to_json() const;
};

/// ρ ↦ (1−p)ρ + p I/2^n; each site ρ ↦ (1−Σp)ρ + Σ_k p_k P_k ρ P_k; or U ρ U† with
/// U = ⊗ diag(1, e^{iθ}) on the chosen sites. Pure inputs stay pure under the phase channel.
/// Throws InvalidChannelParam, InvalidSite, TooLargeForDense.
DenseState apply_channel(const DenseState &s, const NoiseChannel &ch);

/// Σ_i |Im ψ_i|² after fixing the global phase (largest amplitude real positive); for density
/// matrices Σ_ij |Im ρ_ij|².
double imaginary_mass(const DenseState &s);

/// Schatten-1 norm of ρ − σ from the Hermitian eigenvalues. Throws TooLargeForDense above 10 qubits.
double trace_distance(const DenseState &a, const DenseState &b);
/// Same quantity as a singular-value sum (independent path).
double trace_distance_svd(const DenseState &a, const DenseState &b);
/// Schatten-1 norm of an arbitrary Hermitian difference.
double trace_norm(const MatrixX<cplx> &m);

struct Calibration {
  NoiseChannel channel;
  double strength = 0.0;
  double distance = 0.0;
};

/// Finds the strength with ‖ρ − ch(ρ)‖_tr within 1% of τ (coarse scan, then bisection).
/// Throws CalibrationFailed when the channel family cannot reach τ.
Calibration calibrate(const DenseState &s, const NoiseChannel &family, double tau);

/// Bell distribution ⟨Φ_a|R|Φ_a⟩ of an arbitrary two-register state R (first register high).
std::vector<double> bell_distribution_two_copy(const MatrixX<cplx> &r, std::size_t n);

struct TwoCopyReport {
  double distance = 0.0;  // ‖ρ̃ − ρ⊗ρ‖_tr
  double tv = 0.0;        // TV(q̃, q_ρ)
  bool ok = false;        // tv <= distance
};

/// ρ̃ = (1−λ) ρ⊗ρ + λ U(ρ⊗ρ)U† with U a layer of CNOTs between the copies (correlated noise).
TwoCopyReport two_copy_check(const DenseState &rho, double lambda);

struct RobustnessConfig {
  std::string family = "w";  // "w" or "dicke2"
  std::size_t n = 6;
  double tau = 0.05;
  double epsilon = 0.1;  // plan accuracy when tau = 0
  double delta = 3.0;
  std::size_t runs = 100;
  NoiseChannel channel = NoiseChannel::coherent_phase(0.0, {0});
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::uint64_t n1 = 0, n2 = 0;  // 0: from the plan
};

struct RobustnessReport {
  double tau = 0, k = 29, bound = 0;  // bound = kτ (planned ε when τ = 0)
  double max_error = 0, p95_error = 0, mean_error = 0;
  double delta_tv = 0, delta_bound = 0;  // Δ = TV(q'_mix, p'_mix) vs 3τ
  double dist_rho = 0, dist_sigma = 0;
  double c_noisy = 0, c_clean = 0;
  bool data_processing_ok = false;  // TV(q_ρ', q_ρ) <= ‖ρ − ρ'‖_tr for both inputs
  bool noisy_real = true;
  std::uint64_t n1 = 0, n2 = 0;
  std::vector<double> f;
  std::vector<double> errors;
  Calibration cal_rho, cal_sigma;

  bool passed() const { return max_error <= bound && delta_tv <= delta_bound + 1e-12 && data_processing_ok; }
  nlohmann::json to_json() const;
};

/// ρ = C|W⟩ and σ = C Z_0|W⟩ (Dicke(n,2) for family "dicke2") with one random real Clifford
/// C; each is pushed to trace distance τ by the calibrated channel and rDIPE is run `runs`
/// times on the noisy pair.
/// Requires even n <= 8.
RobustnessReport robustness_experiment(const RobustnessConfig &cfg);

}  // namespace rdipe
