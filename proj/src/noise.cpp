#include "rdipe/noise.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>

#include "rdipe/distributions.hpp"
#include "rdipe/errors.hpp"
#include "rdipe/protocol.hpp"

namespace rdipe {

namespace {

void check_prob(double p, const char *what) {
  if (!(p >= 0.0 && p <= 1.0)) fail(Errc::InvalidChannelParam, std::string(what) + " must lie in [0, 1]");
}

MatrixX<cplx> checked_density(const DenseState &s) {
  if (s.size() > kMaxDenseMatrixQubits) {
    fail(Errc::TooLargeForDense, "density matrices are limited to " + std::to_string(kMaxDenseMatrixQubits) + " qubits");
  }
  return s.density();
}

/// Σ_k p_k P_k ρ P_k on one site, using index arithmetic instead of matrix products.
void pauli_site(MatrixX<cplx> &rho, std::size_t site, double px, double py, double pz) {
  const Eigen::Index d = rho.rows();
  const Eigen::Index m = Eigen::Index(1) << site;
  const double keep = 1.0 - px - py - pz;
  MatrixX<cplx> out(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      // ZρZ and YρY pick up (−1)^{b_i ⊕ b_j}; XρX and YρY read the flipped entry.
      const double sign = ((i ^ j) & m) ? -1.0 : 1.0;
      const cplx flipped = rho(i ^ m, j ^ m);
      out(i, j) = keep * rho(i, j) + pz * sign * rho(i, j) + px * flipped + py * sign * flipped;
    }
  }
  rho = std::move(out);
}

double label_tv(const std::vector<double> &p, const std::vector<double> &q) { return tv_distance(p, q); }

std::vector<double> mix(const std::vector<double> &a, const std::vector<double> &b) {
  std::vector<double> m(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) m[i] = (a[i] + b[i]) / 2.0;
  return m;
}

double percentile(std::vector<double> v, double q) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const double pos = q * double(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - double(lo)) * (v[hi] - v[lo]);
}

}  // namespace

std::string channel_kind_name(ChannelKind k) {
  switch (k) {
    case ChannelKind::Depolarizing: return "depolarizing";
    case ChannelKind::Pauli: return "pauli";
    case ChannelKind::CoherentPhase: return "phase";
  }
  return "?";
}

ChannelKind channel_kind_from_name(const std::string &s) {
  if (s == "depolarizing") return ChannelKind::Depolarizing;
  if (s == "pauli") return ChannelKind::Pauli;
  if (s == "phase") return ChannelKind::CoherentPhase;
  fail(Errc::InvalidChannelParam, "unknown channel '" + s + "' (depolarizing, pauli, phase)");
}

NoiseChannel NoiseChannel::depolarizing(double p) {
  check_prob(p, "depolarizing p");
  NoiseChannel c;
  c.kind = ChannelKind::Depolarizing;
  c.p = p;
  return c;
}

NoiseChannel NoiseChannel::pauli(double px, double py, double pz) {
  check_prob(px, "px");
  check_prob(py, "py");
  check_prob(pz, "pz");
  check_prob(px + py + pz, "px + py + pz");
  NoiseChannel c;
  c.kind = ChannelKind::Pauli;
  c.px = px;
  c.py = py;
  c.pz = pz;
  return c;
}

NoiseChannel NoiseChannel::coherent_phase(double theta, std::vector<std::size_t> sites) {
  if (!std::isfinite(theta)) fail(Errc::InvalidChannelParam, "phase angle must be finite");
  if (sites.empty()) fail(Errc::InvalidChannelParam, "phase channel needs at least one site");
  NoiseChannel c;
  c.kind = ChannelKind::CoherentPhase;
  c.theta = theta;
  c.sites = std::move(sites);
  return c;
}

NoiseChannel NoiseChannel::with_strength(double s) const {
  check_prob(s, "strength");
  switch (kind) {
    case ChannelKind::Depolarizing: return depolarizing(s);
    case ChannelKind::Pauli: return pauli(s / 3, s / 3, s / 3);
    case ChannelKind::CoherentPhase: return coherent_phase(s * std::numbers::pi, sites);
  }
  return *this;
}

nlohmann::json NoiseChannel::to_json() const {
  nlohmann::json j{{"kind", channel_kind_name(kind)}};
  switch (kind) {
    case ChannelKind::Depolarizing: j["p"] = p; break;
    case ChannelKind::Pauli: j["px"] = px, j["py"] = py, j["pz"] = pz; break;
    case ChannelKind::CoherentPhase: j["theta"] = theta, j["sites"] = sites; break;
  }
  return j;
}

DenseState apply_channel(const DenseState &s, const NoiseChannel &ch) {
  const std::size_t n = s.size();
  switch (ch.kind) {
    case ChannelKind::Depolarizing: {
      check_prob(ch.p, "depolarizing p");
      MatrixX<cplx> rho = checked_density(s);
      rho *= 1.0 - ch.p;
      rho.diagonal().array() += ch.p / double(dim_of(n));
      return DenseState::mixed(std::move(rho));
    }
    case ChannelKind::Pauli: {
      check_prob(ch.px + ch.py + ch.pz, "px + py + pz");
      for (double v : {ch.px, ch.py, ch.pz}) check_prob(v, "Pauli probability");
      MatrixX<cplx> rho = checked_density(s);
      for (std::size_t q = 0; q < n; ++q) pauli_site(rho, q, ch.px, ch.py, ch.pz);
      return DenseState::mixed(std::move(rho));
    }
    case ChannelKind::CoherentPhase: {
      if (ch.sites.empty()) fail(Errc::InvalidChannelParam, "phase channel needs at least one site");
      for (std::size_t q : ch.sites) {
        if (q >= n) fail(Errc::InvalidSite, "phase site " + std::to_string(q) + " out of range");
      }
      if (s.is_pure()) {
        VectorX<cplx> psi = s.vector();
        for (std::size_t q : ch.sites) apply_phase(psi, q, ch.theta);
        return DenseState::pure(std::move(psi));
      }
      VectorX<cplx> diag = VectorX<cplx>::Ones(Eigen::Index(dim_of(n)));
      for (std::size_t q : ch.sites) apply_phase(diag, q, ch.theta);
      MatrixX<cplx> rho = diag.asDiagonal() * s.matrix() * diag.conjugate().asDiagonal();
      return DenseState::mixed(std::move(rho));
    }
  }
  fail(Errc::InvalidChannelParam, "unknown channel");
}

double imaginary_mass(const DenseState &s) {
  if (!s.is_pure()) return s.matrix().imag().squaredNorm();
  const VectorX<cplx> &psi = s.vector();
  Eigen::Index k = 0;
  psi.cwiseAbs2().maxCoeff(&k);
  const cplx phase = std::conj(psi(k)) / std::abs(psi(k));
  return (psi * phase).imag().squaredNorm();
}

double trace_norm(const MatrixX<cplx> &m) {
  Eigen::SelfAdjointEigenSolver<MatrixX<cplx>> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const DenseState &a, const DenseState &b) {
  if (a.size() != b.size()) fail(Errc::DimensionMismatch, "states have different sizes");
  return trace_norm(checked_density(a) - checked_density(b));
}

double trace_distance_svd(const DenseState &a, const DenseState &b) {
  if (a.size() != b.size()) fail(Errc::DimensionMismatch, "states have different sizes");
  const MatrixX<cplx> d = checked_density(a) - checked_density(b);
  Eigen::BDCSVD<MatrixX<cplx>> svd(d);
  return svd.singularValues().sum();
}

Calibration calibrate(const DenseState &s, const NoiseChannel &family, double tau) {
  if (!(tau >= 0.0)) fail(Errc::InvalidArgument, "tau must be non-negative");
  auto distance_at = [&](double x) { return trace_distance(s, apply_channel(s, family.with_strength(x))); };
  Calibration c;
  if (tau == 0.0) {
    c.channel = family.with_strength(0.0);
    return c;
  }
  // First grid point reaching τ, then bisection inside its cell.
  constexpr int kGrid = 64;
  double lo = 0.0, hi = -1.0, d_hi = 0.0;
  for (int g = 1; g <= kGrid; ++g) {
    const double x = double(g) / kGrid;
    const double d = distance_at(x);
    if (d >= tau) {
      hi = x;
      d_hi = d;
      break;
    }
    lo = x;
  }
  if (hi < 0) {
    fail(Errc::CalibrationFailed, channel_kind_name(family.kind) + " channel cannot reach trace distance " +
                                      std::to_string(tau));
  }
  double x = hi, d = d_hi;
  for (int it = 0; it < 100 && std::abs(d - tau) > 0.01 * tau; ++it) {
    x = (lo + hi) / 2;
    d = distance_at(x);
    (d < tau ? lo : hi) = x;
  }
  if (std::abs(d - tau) > 0.01 * tau) fail(Errc::CalibrationFailed, "bisection did not reach 1% of tau");
  c.channel = family.with_strength(x);
  c.strength = x;
  c.distance = d;
  return c;
}

std::vector<double> bell_distribution_two_copy(const MatrixX<cplx> &r, std::size_t n) {
  const Eigen::Index d = Eigen::Index(dim_of(n));
  if (r.rows() != d * d || r.cols() != d * d) fail(Errc::DimensionMismatch, "two-copy state has the wrong size");
  const double norm = 1.0 / std::sqrt(double(d));
  std::vector<double> q(std::size_t{1} << (2 * n));
  VectorX<cplx> phi(d * d);
  for (std::uint64_t a = 0; a < q.size(); ++a) {
    // |Φ_a⟩ = (P_a ⊗ I)|Φ_0⟩ = 2^{-n/2} Σ_x (P_a|x⟩) ⊗ |x⟩
    const MatrixX<cplx> p = pauli_matrix(PauliString::from_index(n, a));
    phi.setZero();
    for (Eigen::Index x = 0; x < d; ++x) {
      for (Eigen::Index y = 0; y < d; ++y) phi(y * d + x) = p(y, x) * norm;
    }
    q[a] = phi.dot(r * phi).real();
  }
  return q;
}

TwoCopyReport two_copy_check(const DenseState &rho, double lambda) {
  check_prob(lambda, "lambda");
  const std::size_t n = rho.size();
  if (2 * n > kMaxDenseMatrixQubits) fail(Errc::TooLargeForDense, "two-copy check needs n <= 5");
  const MatrixX<cplx> r = rho.density();
  const MatrixX<cplx> rr = Eigen::kroneckerProduct(r, r).eval();
  // CNOT from each qubit of the first copy onto its partner in the second.
  std::vector<GateOp> gates;
  for (std::size_t q = 0; q < n; ++q) gates.push_back({Gate::CNOT, std::uint32_t(q + n), std::uint32_t(q)});
  const MatrixX<cplx> u = dense_unitary(2 * n, gates).cast<cplx>();
  const MatrixX<cplx> noisy = (1.0 - lambda) * rr + lambda * (u * rr * u.adjoint());
  TwoCopyReport out;
  out.distance = trace_norm(noisy - rr);
  const std::vector<double> q_clean = rho.is_pure() ? bell_table(rho.vector()) : bell_table(rho.matrix());
  out.tv = label_tv(bell_distribution_two_copy(noisy, n), q_clean);
  out.ok = out.tv <= out.distance + 1e-12;
  return out;
}

nlohmann::json RobustnessReport::to_json() const {
  return {{"norm", "schatten-1 (no 1/2)"},
          {"tau", tau},
          {"k", k},
          {"bound", bound},
          {"max_error", max_error},
          {"p95_error", p95_error},
          {"mean_error", mean_error},
          {"delta", delta_tv},
          {"delta_bound", delta_bound},
          {"dist_rho", dist_rho},
          {"dist_sigma", dist_sigma},
          {"c_noisy", c_noisy},
          {"c_clean", c_clean},
          {"data_processing_ok", data_processing_ok},
          {"noisy_real", noisy_real},
          {"N1", n1},
          {"N2", n2},
          {"runs", f.size()},
          {"channel_rho", cal_rho.channel.to_json()},
          {"channel_sigma", cal_sigma.channel.to_json()},
          {"passed", passed()}};
}

RobustnessReport robustness_experiment(const RobustnessConfig &cfg) {
  const std::size_t n = cfg.n;
  if (n == 0 || n % 2 != 0 || n > 8) fail(Errc::InvalidArgument, "robustness experiment needs even n <= 8");
  if (!(cfg.tau >= 0 && cfg.tau < 1)) fail(Errc::InvalidArgument, "tau must lie in [0, 1)");
  if (cfg.runs == 0) fail(Errc::InvalidArgument, "need at least one run");

  CwState support;
  if (cfg.family == "w") {
    support = make_w_state(n);
  } else if (cfg.family == "dicke2") {
    support = make_dicke(n, 2);
  } else {
    fail(Errc::InvalidArgument, "family must be w or dicke2");
  }
  Rng rng(cfg.seed, 0);
  const RealCliffordTableau c = random_real_clifford(n, default_clifford_depth(n), rng);
  RealCliffordTableau z0 = RealCliffordTableau::identity(n);
  z0.apply(Gate::Z, 0);
  const DenseState rho = to_dense(support.with_clifford(c));
  const DenseState sigma = to_dense(support.with_clifford(z0.then(c)));

  RobustnessReport rep;
  rep.tau = cfg.tau;
  rep.cal_rho = calibrate(rho, cfg.channel, cfg.tau);
  rep.cal_sigma = calibrate(sigma, cfg.channel, cfg.tau);
  const DenseState rho_n = apply_channel(rho, rep.cal_rho.channel);
  const DenseState sigma_n = apply_channel(sigma, rep.cal_sigma.channel);
  rep.dist_rho = trace_distance(rho, rho_n);
  rep.dist_sigma = trace_distance(sigma, sigma_n);
  rep.noisy_real = rho_n.is_real() && sigma_n.is_real();
  rep.c_clean = cosine_oracle(QuantumState(rho), QuantumState(sigma));
  rep.c_noisy = cosine_oracle(QuantumState(rho_n), QuantumState(sigma_n));

  const QuantumState qr(rho_n), qs(sigma_n);
  const auto q_r = bell_distribution(qr), q_s = bell_distribution(qs);
  rep.delta_tv = tv_distance(mix(q_r, q_s), mix(pauli_distribution(qr), pauli_distribution(qs)));
  rep.delta_bound = 3 * cfg.tau;
  const double dp_r = tv_distance(q_r, bell_distribution(QuantumState(rho)));
  const double dp_s = tv_distance(q_s, bell_distribution(QuantumState(sigma)));
  rep.data_processing_ok = dp_r <= rep.dist_rho + 1e-12 && dp_s <= rep.dist_sigma + 1e-12;

  const SamplePlan plan =
      cfg.tau > 0 ? robustness_plan(n, cfg.tau, cfg.delta) : sample_size_plan(n, cfg.epsilon, cfg.delta);
  rep.bound = cfg.tau > 0 ? rep.k * cfg.tau : cfg.epsilon;
  rep.n1 = cfg.n1 ? cfg.n1 : plan.n1;
  rep.n2 = cfg.n2 ? cfg.n2 : plan.n2;

  rep.f.assign(cfg.runs, 0.0);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      ProtocolConfig pc;
      pc.n = n;
      pc.n1 = rep.n1;
      pc.n2 = rep.n2;
      pc.seed_alice = mix64(cfg.seed ^ mix64(2 * r + 1));
      pc.seed_bob = mix64(cfg.seed ^ mix64(2 * r + 2));
      pc.keep_messages = false;
      rep.f[r] = run_rdipe(qr, qs, pc).f;
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(cfg.threads, unsigned(cfg.runs)));
  if (threads == 1) {
    work(0, cfg.runs);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, cfg.runs * t / threads, cfg.runs * (t + 1) / threads);
  }
  for (double f : rep.f) rep.errors.push_back(std::abs(f - rep.c_noisy));
  rep.max_error = *std::max_element(rep.errors.begin(), rep.errors.end());
  rep.p95_error = percentile(rep.errors, 0.95);
  double sum = 0;
  for (double e : rep.errors) sum += e;
  rep.mean_error = sum / double(rep.errors.size());
  return rep;
}

}  // namespace rdipe
