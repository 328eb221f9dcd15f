#include "rdipe/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <thread>

#include "rdipe/dense.hpp"
#include "rdipe/errors.hpp"
#include "rdipe/sampling.hpp"

namespace rdipe {

namespace {

// Squared expectations within this of ε count as <= ε, so exact atoms land on their step.
constexpr double kStepTol = 1e-13;

bool symmetric_support(const QuantumState &s) {
  const auto *cw = std::get_if<CwState>(&s);
  return cw && cw->family() != CwFamily::Custom;
}

std::vector<double> expectation_table(const QuantumState &s) {
  const DenseState d = to_dense(s);
  return d.is_pure() ? pauli_expectation_table(d.vector()) : pauli_expectation_table(d.matrix());
}

}  // namespace

std::vector<double> pauli_distribution(const QuantumState &s) {
  std::vector<double> table = expectation_table(s);
  const double norm = double(dim_of(num_qubits(s))) * purity(s);
  for (double &v : table) v = v * v / norm;
  return table;
}

std::vector<double> bell_distribution(const QuantumState &s) {
  const DenseState d = to_dense(s);
  return d.is_pure() ? bell_table(d.vector()) : bell_table(d.matrix());
}

ExactCdf::ExactCdf(std::vector<std::pair<double, double>> atoms) {
  std::sort(atoms.begin(), atoms.end());
  double acc = 0.0;
  for (const auto &[value, mass] : atoms) {
    acc += mass;
    if (!values_.empty() && value - values_.back() <= kStepTol) {
      cumulative_.back() = acc;
    } else {
      values_.push_back(value);
      cumulative_.push_back(acc);
    }
  }
}

double ExactCdf::operator()(double eps) const {
  const auto it = std::upper_bound(values_.begin(), values_.end(), eps + kStepTol);
  if (it == values_.begin()) return 0.0;
  return std::min(1.0, cumulative_[static_cast<std::size_t>(it - values_.begin()) - 1]);
}

ExactCdf exact_cdf(const QuantumState &s) {
  std::vector<std::pair<double, double>> atoms;
  if (symmetric_support(s)) {
    for (const auto &c : symmetric_spectrum(std::get<CwState>(s))) {
      atoms.emplace_back(c.expectation * c.expectation, c.probability);
    }
    return ExactCdf(std::move(atoms));
  }
  const std::vector<double> table = expectation_table(s);
  const double norm = double(dim_of(num_qubits(s))) * purity(s);
  atoms.reserve(table.size());
  // Squares within the step tolerance of 0 are rounding residue of exact zeros.
  for (double e : table) {
    if (e * e > kStepTol) atoms.emplace_back(e * e, e * e / norm);
  }
  return ExactCdf(std::move(atoms));
}

double cdf_exact(const QuantumState &s, double eps) {
  if (eps < 0) fail(Errc::InvalidArgument, "cdf_exact needs eps >= 0");
  return exact_cdf(s)(eps);
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples, std::uint64_t shots)
    : samples_(std::move(samples)), shots_(shots) {
  std::sort(samples_.begin(), samples_.end());
}

double EmpiricalCdf::operator()(double x) const {
  if (samples_.empty()) return 0.0;
  const auto it = std::upper_bound(samples_.begin(), samples_.end(), x);
  return double(it - samples_.begin()) / double(samples_.size());
}

double EmpiricalCdf::dkw_radius(std::size_t n, double alpha) {
  return std::sqrt(std::log(2.0 / alpha) / (2.0 * double(n)));
}

EmpiricalCdf build_empirical_cdf(const QuantumState &s, std::size_t samples, std::uint64_t shots, Rng &rng,
                                 unsigned threads) {
  if (!is_real(s)) fail(Errc::NotReal, "Bell samples follow the Pauli distribution only for real states");
  if (!is_pure(s)) fail(Errc::InvalidArgument, "empirical CDF pipeline needs a pure state");
  if (samples == 0) fail(Errc::InvalidArgument, "need at least one sample");
  const BellSampler sampler(s);
  const Rng base = rng.substream(rng());
  std::vector<double> values(samples);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Rng r = base.substream(i);
      const PauliString a = sampler.sample(r);
      const double e = expectation(s, a);
      const double est = shots == 0 ? e : shots_from_expectation(e, shots, r);
      values[i] = est * est;
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(samples)));
  if (threads == 1) {
    work(0, samples);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, samples * t / threads, samples * (t + 1) / threads);
  }
  return EmpiricalCdf(std::move(values), shots);
}

ResourceEstimate resource_estimate(const EmpiricalCdf &cdf, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) fail(Errc::InvalidArgument, "resource_estimate needs 0 < eps < 1");
  const auto &s = cdf.samples();
  if (s.empty()) fail(Errc::InvalidArgument, "empty CDF");
  if (cdf(0.0) > eps) fail(Errc::NoSolution, "F(0) already exceeds eps");
  // F(x) <= ε  ⇔  #{s_i <= x} <= m; the supremum of such x is the (m+1)-th smallest sample.
  const auto m = static_cast<std::size_t>(std::floor(eps * double(s.size()) + 1e-9));
  ResourceEstimate r;
  r.optimistic = m >= s.size() ? 1.0 : s[m];
  r.conservative = r.optimistic / 2.0;
  return r;
}

double tv_distance(const std::vector<double> &p, const std::vector<double> &q) {
  if (p.size() != q.size()) fail(Errc::LengthMismatch, "tables have different lengths");
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += std::abs(p[i] - q[i]);
  return acc / 2.0;
}

double SamplePlan::failure_bound() const {
  return 4.0 * std::exp(-2.0 * eps1 * eps1 * double(n1)) + 4.0 * double(n1) * std::exp(-eps2 * eps2 * double(n2) / 2.0);
}

SamplePlan plan_from_accuracies(double eps1, double eps2, double delta) {
  if (!(eps1 > 0 && eps2 > 0 && delta > 0)) fail(Errc::InvalidArgument, "plan needs positive accuracies and delta");
  SamplePlan p;
  p.eps1 = eps1;
  p.eps2 = eps2;
  p.delta = delta;
  // 4 exp(−2ε1² N1) <= e^{−δ}/2  ⇔  N1 >= (δ + ln 8) / (2ε1²)
  p.n1_exact = (delta + std::log(8.0)) / (2.0 * eps1 * eps1);
  p.n1 = static_cast<std::uint64_t>(std::ceil(p.n1_exact - 1e-9));
  // 4 N1 exp(−ε2² N2 / 2) <= e^{−δ}/2  ⇔  N2 >= 2 (ln(8 N1) + δ) / ε2²
  p.n2_exact = 2.0 * (std::log(8.0 * double(p.n1)) + delta) / (eps2 * eps2);
  p.n2 = static_cast<std::uint64_t>(std::ceil(p.n2_exact - 1e-9));
  return p;
}

SamplePlan sample_size_plan(std::size_t n, double eps, double delta) {
  if (!(eps > 0 && eps < 1)) fail(Errc::InvalidArgument, "eps must lie in (0, 1)");
  if (n == 0) fail(Errc::InvalidArgument, "n must be positive");
  const double e1 = eps / 8.0;
  return plan_from_accuracies(e1, std::min(e1 * e1, 3.0 / double(n * n)), delta);
}

SamplePlan robustness_plan(std::size_t n, double tau, double delta) {
  if (!(tau > 0 && tau < 1)) fail(Errc::InvalidArgument, "tau must lie in (0, 1)");
  const double e1 = tau / 8.0;
  return plan_from_accuracies(e1, std::min(e1 * e1, 1.0 / double(n * n)), delta);
}

std::size_t default_cdf_samples(double eps, double alpha) {
  const double r = eps / 2.0;
  return static_cast<std::size_t>(std::ceil(std::log(2.0 / alpha) / (2.0 * r * r)));
}

std::uint64_t default_cdf_shots(std::size_t samples, double x) {
  return static_cast<std::uint64_t>(std::ceil(8.0 * std::log(4.0 * double(samples)) / (x * x)));
}

void write_resource_csv(std::ostream &os, const std::vector<ResourceRow> &rows,
                        const std::map<std::string, std::string> &metadata) {
  for (const auto &[k, v] : metadata) os << "# " << k << "=" << v << "\n";
  os << "n,epsilon,epsilon2_optimistic,epsilon2_conservative,N,K,seed\n";
  os << std::setprecision(17);
  for (const auto &r : rows) {
    os << r.n << "," << r.epsilon << "," << r.epsilon2_optimistic << "," << r.epsilon2_conservative << ","
       << r.samples << "," << r.shots << "," << r.seed << "\n";
  }
}

}  // namespace rdipe
