#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "oracles.hpp"
#include "rdipe/distributions.hpp"
#include "rdipe/noise.hpp"

using namespace rdipe;

namespace {

Errc code_of(auto &&fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::InvalidState;
}

void check_valid_density(const DenseState &s) {
  const MatrixX<cplx> r = s.density();
  CHECK(std::abs(r.trace() - cplx(1.0)) < 1e-12);
  CHECK((r - r.adjoint()).norm() < 1e-12);
  Eigen::SelfAdjointEigenSolver<MatrixX<cplx>> es(r);
  CHECK(es.eigenvalues().minCoeff() > -1e-12);
}

DenseState random_pure(std::size_t n, Rng &rng, bool real = true) {
  return DenseState::pure(oracle::random_state(n, rng, real));
}

}  // namespace

TEST_CASE("depolarizing channel") {
  Rng rng(1);
  const DenseState s = random_pure(3, rng);
  const DenseState same = apply_channel(s, NoiseChannel::depolarizing(0.0));
  CHECK((same.density() - s.density()).norm() < 1e-14);
  for (double p : {0.1, 0.5, 1.0}) {
    const DenseState out = apply_channel(s, NoiseChannel::depolarizing(p));
    check_valid_density(out);
    const double d = 8.0;
    const double expected = (1 - p) * (1 - p) + 2 * (1 - p) * p / d + p * p / d;
    CHECK(purity(QuantumState(out)) == doctest::Approx(expected).epsilon(1e-12));
  }
  CHECK(code_of([] { NoiseChannel::depolarizing(1.5); }) == Errc::InvalidChannelParam);
  NoiseChannel bad;
  bad.p = -0.1;
  CHECK(code_of([&] { apply_channel(s, bad); }) == Errc::InvalidChannelParam);
}

TEST_CASE("per-site Pauli channel matches the Kronecker oracle") {
  Rng rng(2);
  const std::size_t n = 3;
  const oracle::Mat rho = oracle::random_density(n, 2, rng);
  const double px = 0.05, py = 0.1, pz = 0.15;
  oracle::Mat expect = rho;
  for (std::size_t q = 0; q < n; ++q) {
    auto on_site = [&](char c) {
      std::string letters(n, 'I');
      letters[q] = c;
      return oracle::pauli(letters);
    };
    const oracle::Mat x = on_site('X'), y = on_site('Y'), z = on_site('Z');
    expect = (1 - px - py - pz) * expect + px * x * expect * x + py * y * expect * y + pz * z * expect * z;
  }
  const DenseState out = apply_channel(DenseState::mixed(rho), NoiseChannel::pauli(px, py, pz));
  CHECK((out.matrix() - expect).norm() < 1e-12);
  check_valid_density(out);
  CHECK(code_of([] { NoiseChannel::pauli(0.5, 0.5, 0.5); }) == Errc::InvalidChannelParam);
}

TEST_CASE("coherent phase breaks realness") {
  Rng rng(3);
  const DenseState s = random_pure(4, rng);
  CHECK(s.is_real());
  const DenseState t = apply_channel(s, NoiseChannel::coherent_phase(std::numbers::pi / 4, {1}));
  CHECK(t.is_pure());
  CHECK(!t.is_real());
  CHECK(imaginary_mass(t) > 1e-3);
  const DenseState u = apply_channel(s, NoiseChannel::coherent_phase(std::numbers::pi, {0, 2}));
  CHECK(u.is_real());
  CHECK(imaginary_mass(u) < 1e-20);
  // Same unitary on a density matrix.
  const DenseState m = apply_channel(DenseState::mixed(s.density()), NoiseChannel::coherent_phase(0.3, {1, 3}));
  const DenseState v = apply_channel(s, NoiseChannel::coherent_phase(0.3, {1, 3}));
  CHECK((m.matrix() - v.density()).norm() < 1e-12);
  check_valid_density(m);
  CHECK(code_of([&] { apply_channel(s, NoiseChannel::coherent_phase(0.1, {4})); }) == Errc::InvalidSite);
  CHECK(code_of([] { NoiseChannel::coherent_phase(0.1, {}); }) == Errc::InvalidChannelParam);
}

TEST_CASE("trace distance") {
  Rng rng(4);
  const DenseState a = random_pure(2, rng, false);
  CHECK(trace_distance(a, a) < 1e-12);
  VectorX<cplx> e0 = VectorX<cplx>::Zero(4), e1 = VectorX<cplx>::Zero(4);
  e0(0) = 1;
  e1(3) = 1;
  CHECK(trace_distance(DenseState::pure(e0), DenseState::pure(e1)) == doctest::Approx(2.0));
  for (int rep = 0; rep < 20; ++rep) {
    const DenseState x = DenseState::mixed(oracle::random_density(2, 1 + rng.below(4), rng));
    const DenseState y = DenseState::mixed(oracle::random_density(2, 1 + rng.below(4), rng));
    const double eig = trace_distance(x, y), svd = trace_distance_svd(x, y);
    CHECK(eig == doctest::Approx(svd).epsilon(1e-10));
    CHECK(eig <= 2.0 + 1e-12);
  }
  // Pure states: 2 sqrt(1 - |<a|b>|^2).
  const DenseState b = random_pure(2, rng, false);
  const double ov = std::norm(a.vector().dot(b.vector()));
  CHECK(trace_distance(a, b) == doctest::Approx(2 * std::sqrt(1 - ov)).epsilon(1e-10));
}

TEST_CASE("calibration") {
  Rng rng(5);
  const DenseState s = to_dense(make_w_state(4).with_clifford(random_real_clifford(4, 40, rng)));
  for (const NoiseChannel &fam : {NoiseChannel::depolarizing(0), NoiseChannel::pauli(0, 0, 0),
                                  NoiseChannel::coherent_phase(0, {0})}) {
    for (double tau : {0.02, 0.1}) {
      const Calibration c = calibrate(s, fam, tau);
      CHECK(std::abs(c.distance - tau) <= 0.01 * tau);
      CHECK(std::abs(trace_distance(s, apply_channel(s, c.channel)) - tau) <= 0.01 * tau);
    }
  }
  CHECK(calibrate(s, NoiseChannel::depolarizing(0), 0.0).distance == 0.0);
  VectorX<cplx> zero = VectorX<cplx>::Zero(2);
  zero(0) = 1;
  // Full depolarizing moves |0> only to distance 1.
  CHECK(code_of([&] { calibrate(DenseState::pure(zero), NoiseChannel::depolarizing(0), 1.5); }) ==
        Errc::CalibrationFailed);
  // A phase on |0> does nothing.
  CHECK(code_of([&] { calibrate(DenseState::pure(zero), NoiseChannel::coherent_phase(0, {0}), 0.1); }) ==
        Errc::CalibrationFailed);
}

TEST_CASE("data processing: Bell distributions move less than the states") {
  Rng rng(6);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = 1 + rng.below(4);
    const DenseState rho = DenseState::mixed(oracle::random_density(n, 1 + rng.below(3), rng));
    const DenseState rho2 = apply_channel(rho, NoiseChannel::pauli(0.02 * rng.uniform(), 0.02, 0.01));
    const double tv = tv_distance(bell_distribution(QuantumState(rho)), bell_distribution(QuantumState(rho2)));
    CHECK(tv <= trace_distance(rho, rho2) + 1e-12);
  }
}

TEST_CASE("correlated two-copy noise") {
  Rng rng(7);
  for (std::size_t n = 1; n <= 3; ++n) {
    const DenseState rho = random_pure(n, rng);
    const auto clean = two_copy_check(rho, 0.0);
    CHECK(clean.distance < 1e-12);
    CHECK(clean.tv < 1e-12);
    for (double lambda : {0.01, 0.05, 0.2}) {
      const auto r = two_copy_check(rho, lambda);
      CHECK(r.ok);
      CHECK(r.distance > 0.0);
    }
  }
  const DenseState m = DenseState::mixed(oracle::random_density(2, 2, rng));
  CHECK(two_copy_check(m, 0.1).ok);
}

TEST_CASE("robustness experiment at small scale") {
  RobustnessConfig cfg;
  cfg.n = 4;
  cfg.tau = 0.1;
  cfg.runs = 5;
  cfg.seed = 3;
  const auto rep = robustness_experiment(cfg);
  CHECK(!rep.noisy_real);
  CHECK(std::abs(rep.dist_rho - 0.1) <= 0.001);
  CHECK(std::abs(rep.dist_sigma - 0.1) <= 0.001);
  CHECK(rep.c_clean == doctest::Approx(0.25));  // (1 - 2/n)^2
  CHECK(rep.delta_tv <= 0.3);
  CHECK(rep.data_processing_ok);
  CHECK(rep.max_error <= 29 * 0.1);
  CHECK(rep.passed());
  CHECK(rep.to_json().at("norm") == "schatten-1 (no 1/2)");

  cfg.tau = 0.0;
  cfg.epsilon = 0.2;
  const auto clean = robustness_experiment(cfg);
  CHECK(clean.delta_tv < 1e-12);
  CHECK(clean.c_noisy == doctest::Approx(clean.c_clean));
  CHECK(clean.max_error <= 0.2);

  cfg.n = 5;
  CHECK(code_of([&] { robustness_experiment(cfg); }) == Errc::InvalidArgument);
}
