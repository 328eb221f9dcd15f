#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "rdipe/rng.hpp"
#include "rdipe/states.hpp"

namespace rdipe {

/// p_ρ(a) = ⟨P_a⟩² / (2^n tr ρ²) for all 4^n labels (label-index order).
std::vector<double> pauli_distribution(const QuantumState &s);
/// q_ρ(a) = ⟨Φ_a|ρ⊗ρ|Φ_a⟩ for all 4^n labels.
std::vector<double> bell_distribution(const QuantumState &s);

/// Exact CDF of ⟨P_a⟩² under a ~ p_ρ as a right-continuous step function.
class ExactCdf {
 public:
  ExactCdf() = default;
  /// (value, mass) pairs in any order; masses are merged and accumulated.
  explicit ExactCdf(std::vector<std::pair<double, double>> atoms);
  double operator()(double eps) const;
  const std::vector<double> &values() const noexcept { return values_; }
  const std::vector<double> &cumulative() const noexcept { return cumulative_; }

 private:
  std::vector<double> values_;
  std::vector<double> cumulative_;
};

/// W/Dicke supports use the permutation-class spectrum (any n); other states go through
/// dense tables (n <= 13 pure, n <= 10 mixed).
ExactCdf exact_cdf(const QuantumState &s);
/// F_ρ(ε) = Σ_a p_ρ(a) θ(ε − ⟨P_a⟩²) with θ(t) = 1 for t >= 0.
double cdf_exact(const QuantumState &s, double eps);

/// Sorted sample of squared estimates α_i²(K); K = 0 marks exact-expectation mode.
class EmpiricalCdf {
 public:
  EmpiricalCdf() = default;
  EmpiricalCdf(std::vector<double> samples, std::uint64_t shots);
  /// Fraction of samples <= x.
  double operator()(double x) const;
  std::size_t size() const noexcept { return samples_.size(); }
  std::uint64_t shots() const noexcept { return shots_; }
  const std::vector<double> &samples() const noexcept { return samples_; }
  /// DKW half-width: sup|F_N − F| <= r with probability >= 1 − alpha.
  static double dkw_radius(std::size_t n, double alpha);

 private:
  std::vector<double> samples_;
  std::uint64_t shots_ = 0;
};

/// N Bell samples, each followed by a K-shot estimate of ⟨P_a⟩ (K = 0: exact value), squared.
/// Sample i uses its own substream, so the result does not depend on `threads`.
EmpiricalCdf build_empirical_cdf(const QuantumState &s, std::size_t samples, std::uint64_t shots, Rng &rng,
                                 unsigned threads = 1);

struct ResourceEstimate {
  double optimistic = 0.0;    // sup{x : F(x) <= ε}
  double conservative = 0.0;  // half of it, where the F(2x) <= ε/2 guarantee is phrased
};

/// Step-function inverse of an empirical CDF. Throws NoSolution if F(0) > ε.
ResourceEstimate resource_estimate(const EmpiricalCdf &cdf, double eps);

/// Half the ℓ1 distance. Throws LengthMismatch.
double tv_distance(const std::vector<double> &p, const std::vector<double> &q);

struct SamplePlan {
  double eps1 = 0, eps2 = 0, delta = 0;
  double n1_exact = 0, n2_exact = 0;  // before rounding up
  std::uint64_t n1 = 0, n2 = 0;
  /// 4 exp(−2 ε1² N1) + 4 N1 exp(−ε2² N2 / 2) at the rounded counts.
  double failure_bound() const;
};

/// Smallest N1, N2 with each failure term <= e^{-δ}/2 for the given accuracy split.
SamplePlan plan_from_accuracies(double eps1, double eps2, double delta);
/// ε1 = ε/8, ε2 = min{(ε/8)², 3/n²}.
SamplePlan sample_size_plan(std::size_t n, double eps, double delta);
/// ε1 = τ/8, ε2 = min{(τ/8)², 1/n²}.
SamplePlan robustness_plan(std::size_t n, double tau, double delta);

/// Default CDF sample count: DKW radius ε/2 at confidence 1 − alpha.
std::size_t default_cdf_samples(double eps, double alpha = 0.01);
/// Default shots per estimate: ⌈8 ln(4N) / x²⌉.
std::uint64_t default_cdf_shots(std::size_t samples, double x);

struct ResourceRow {
  std::size_t n = 0;
  double epsilon = 0, epsilon2_optimistic = 0, epsilon2_conservative = 0;
  std::size_t samples = 0;
  std::uint64_t shots = 0;  // 0 = exact expectations
  std::uint64_t seed = 0;
};

/// "# key=value" metadata lines followed by a header and one line per row.
void write_resource_csv(std::ostream &os, const std::vector<ResourceRow> &rows,
                        const std::map<std::string, std::string> &metadata);

}  // namespace rdipe
