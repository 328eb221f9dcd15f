#include <doctest.h>

#include <cmath>
#include <unordered_map>

#include "oracles.hpp"
#include "rdipe/dense.hpp"
#include "rdipe/errors.hpp"
#include "rdipe/sampling.hpp"

using namespace rdipe;

namespace {

/// Pauli distribution by brute force: ⟨P_a⟩² / (2^n tr ρ²) from Kronecker matrices.
std::vector<double> oracle_pauli_table(const oracle::Mat &rho) {
  const std::size_t n = static_cast<std::size_t>(std::log2(double(rho.rows())) + 0.5);
  const double pur = (rho * rho).trace().real();
  std::vector<double> p(std::size_t{1} << (2 * n));
  for (std::uint64_t a = 0; a < p.size(); ++a) {
    const double e = (rho * oracle::pauli(oracle::letters_of_index(n, a))).trace().real();
    p[a] = e * e / (double(1u << n) * pur);
  }
  return p;
}

/// Bell distribution by brute force: ⟨Φ_a|ρ⊗ρ|Φ_a⟩.
std::vector<double> oracle_bell_table(const oracle::Mat &rho) {
  const std::size_t n = static_cast<std::size_t>(std::log2(double(rho.rows())) + 0.5);
  const oracle::Mat two = Eigen::kroneckerProduct(rho, rho).eval();
  std::vector<double> q(std::size_t{1} << (2 * n));
  for (std::uint64_t a = 0; a < q.size(); ++a) {
    const oracle::Vec phi = oracle::bell_state(oracle::letters_of_index(n, a));
    q[a] = phi.dot(two * phi).real();
  }
  return q;
}

std::vector<double> histogram(const BellSampler &s, std::size_t samples, Rng &rng) {
  std::vector<double> h(std::size_t{1} << (2 * s.size()), 0.0);
  for (std::size_t i = 0; i < samples; ++i) h[s.sample(rng).index()] += 1.0 / double(samples);
  return h;
}

double tv(const std::vector<double> &a, const std::vector<double> &b) {
  double t = 0;
  for (std::size_t i = 0; i < a.size(); ++i) t += std::abs(a[i] - b[i]);
  return t / 2;
}

oracle::Mat density_of(const oracle::Vec &v) { return v * v.adjoint(); }

}  // namespace

TEST_CASE("|0⟩ Bell samples are uniform on {I, Z}") {
  oracle::Vec zero(2);
  zero << 1, 0;
  const BellSampler s(DenseState::pure(zero));
  Rng rng(1);
  int zs = 0;
  for (int i = 0; i < 20000; ++i) {
    const auto a = s.sample(rng);
    CHECK((a.letter(0) == 'I' || a.letter(0) == 'Z'));
    zs += a.letter(0) == 'Z';
  }
  CHECK(std::abs(zs / 20000.0 - 0.5) < 0.02);
}

TEST_CASE("dense Bell tables agree with the ρ⊗ρ oracle") {
  Rng rng(3);
  for (std::size_t n = 1; n <= 3; ++n) {
    const oracle::Mat rho = oracle::random_density(n, 2, rng);
    const auto fast = bell_table(MatrixX<cplx>(rho));
    const auto slow = oracle_bell_table(rho);
    CHECK(tv(fast, slow) < 1e-12);
    const oracle::Vec psi = oracle::random_state(n, rng, false);
    CHECK(tv(bell_table(VectorX<cplx>(psi)), oracle_bell_table(density_of(psi))) < 1e-12);
  }
}

TEST_CASE("mean SWAP sign under q equals the purity") {
  Rng rng(4);
  for (std::size_t n = 1; n <= 6; ++n) {
    const oracle::Mat rho = oracle::random_density(n, 1 + rng.below(3), rng);
    const auto q = bell_table(MatrixX<cplx>(rho));
    double mean = 0;
    for (std::uint64_t a = 0; a < q.size(); ++a) mean += q[a] * swap_symmetry_sign(PauliString::from_index(n, a));
    CHECK(mean == doctest::Approx((rho * rho).trace().real()).epsilon(1e-10));
  }
}

TEST_CASE("real pure states: Bell samples follow the Pauli distribution") {
  Rng rng(5);
  for (std::size_t n : {3u, 4u}) {
    const oracle::Vec psi = oracle::random_state(n, rng, true);
    const auto p = oracle_pauli_table(density_of(psi));
    const BellSampler s(DenseState::pure(psi));
    const double d = tv(histogram(s, 1000000, rng), p);
    MESSAGE("n=" << n << " TV=" << d);
    CHECK(d < 0.01);
  }
}

TEST_CASE("W-state category weights") {
  for (std::size_t n = 2; n <= 12; ++n) {
    double zi = 0;
    for (std::size_t z = 0; z <= n; ++z) {
      zi += std::tgamma(n + 1.0) / (std::tgamma(z + 1.0) * std::tgamma(n - z + 1.0)) *
            std::pow(1 - 2.0 * z / n, 2);
    }
    const double two = 2.0 * (n * (n - 1) / 2.0) * std::pow(2.0, n - 2.0) * std::pow(2.0 / n, 2);
    CHECK(zi == doctest::Approx(std::pow(2.0, n) / n));
    CHECK(two == doctest::Approx(std::pow(2.0, n) * (n - 1) / n));
  }
  for (std::size_t n = 2; n <= 6; ++n) {
    const QuantumState w = make_w_state(n);
    double sum = 0;
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << (2 * n)); ++a) {
      const double e = expectation(w, PauliString::from_index(n, a));
      sum += e * e;
    }
    CHECK(sum == doctest::Approx(std::pow(2.0, n)));
  }
}

TEST_CASE("w_pauli_sample matches p_W at n=5") {
  const std::size_t n = 5;
  const auto w = make_w_state(n);
  const auto p = oracle_pauli_table(density_of(to_dense(w).vector()));
  Rng rng(6);
  std::vector<double> h(p.size(), 0.0);
  const std::size_t samples = 1000000;
  for (std::size_t i = 0; i < samples; ++i) {
    const auto a = w_pauli_sample(n, rng);
    if (i < 10000) CHECK(expectation(w, a) != 0.0);
    h[a.index()] += 1.0 / samples;
  }
  const double d = tv(h, p);
  MESSAGE("TV=" << d);
  CHECK(d < 0.01);
}

TEST_CASE("structured Bell samplers match the dense q-table") {
  Rng rng(7);
  struct Case {
    CwState state;
    std::string name;
  };
  std::vector<SupportEntry> custom{{BitVector::from_string("00110"), 0.6},
                                   {BitVector::from_string("10100"), -0.48},
                                   {BitVector::from_string("11111"), 0.64}};
  std::vector<Case> cases{
      {make_w_state(4).with_clifford(random_real_clifford(4, 40, rng)), "W4"},
      {make_w_state(6).with_clifford(random_real_clifford(6, 60, rng)), "W6"},
      {make_dicke(4, 2).with_clifford(random_real_clifford(4, 40, rng)), "Dicke(4,2)"},
      {make_dicke(5, 2).with_clifford(random_real_clifford(5, 50, rng)), "Dicke(5,2)"},
      {CwState(random_real_clifford(5, 50, rng), custom), "custom n=5"},
      {make_w_state(1), "W1"},
  };
  for (const auto &c : cases) {
    const auto q = bell_table(to_dense(c.state).vector());
    const BellSampler s(c.state);
    const double d = tv(histogram(s, 1000000, rng), q);
    MESSAGE(c.name << " TV=" << d);
    CHECK(d < 0.01);
  }
}

TEST_CASE("class spectrum of W and Dicke supports is normalized") {
  for (auto [n, k] : std::vector<std::pair<std::size_t, std::size_t>>{{4, 1}, {6, 2}, {10, 3}, {20, 2}, {64, 2}}) {
    const auto spec = symmetric_spectrum(make_dicke(n, k, 100000));
    double total = 0;
    for (const auto &c : spec) total += c.probability;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK_THROWS_AS(symmetric_spectrum(CwState(RealCliffordTableau::identity(1), {{BitVector::from_string("1"), 1.0}})),
                  Error);
}

TEST_CASE("large dense pure sampler") {
  // GHZ on 11 qubits goes through the per-x path; its q has only 2^11 nonzero labels.
  const std::size_t n = 11;
  VectorX<cplx> psi = VectorX<cplx>::Zero(Eigen::Index(1) << n);
  psi(0) = psi(psi.size() - 1) = 1 / std::sqrt(2.0);
  const auto q = bell_table(psi);
  const BellSampler s(DenseState::pure(psi));
  Rng rng(8);
  std::unordered_map<std::uint64_t, double> h;
  const std::size_t samples = 200000;
  for (std::size_t i = 0; i < samples; ++i) h[s.sample(rng).index()] += 1.0 / samples;
  double d = 0, seen = 0;
  for (const auto &[a, f] : h) {
    d += std::abs(f - q[a]);
    seen += q[a];
    CHECK(q[a] > 0);
  }
  d += 1.0 - seen;
  MESSAGE("TV=" << d / 2);
  CHECK(d / 2 < 0.06);
}

TEST_CASE("samplers are reproducible") {
  const QuantumState s = make_dicke(8, 2).with_clifford(RealCliffordTableau::identity(8));
  const BellSampler b(s);
  Rng r1(99), r2(99);
  for (int i = 0; i < 100; ++i) CHECK(b.sample(r1) == b.sample(r2));
}

TEST_CASE("pauli_shots") {
  Rng rng(10);
  oracle::Vec zero(2);
  zero << 1, 0;
  const QuantumState s0 = DenseState::pure(zero);
  CHECK(pauli_shots(s0, PauliString::from_string("Z"), 17, rng) == 1.0);
  CHECK(pauli_shots(s0, PauliString::from_string("-Z"), 17, rng) == -1.0);
  int ok = 0;
  for (int i = 0; i < 100; ++i) ok += std::abs(pauli_shots(s0, PauliString::from_string("X"), 1000000, rng)) < 0.005;
  CHECK(ok >= 99);

  const QuantumState r = DenseState::pure(oracle::random_state(4, rng, true));
  const auto p = PauliString::from_string("XZYY");
  const double exact = expectation(r, p);
  const std::uint64_t shots = 50;
  double mean = 0;
  const int reps = 10000;
  for (int i = 0; i < reps; ++i) mean += pauli_shots(r, p, shots, rng) / reps;
  const double se = std::sqrt((1 - exact * exact) / double(shots) / reps);
  CHECK(std::abs(mean - exact) < 3 * se);
  CHECK_THROWS_AS(pauli_shots(r, p, 0, rng), Error);
  CHECK_THROWS_AS(pauli_shots(r, PauliString::from_string("XX"), 10, rng), Error);
}

TEST_CASE("estimate_purity") {
  Rng rng(11);
  const QuantumState real = DenseState::pure(oracle::random_state(4, rng, true));
  CHECK(std::abs(estimate_purity(real, 100000, rng) - 1.0) < 0.01);
  CHECK(std::abs(estimate_purity(real, 50000, rng) - 1.0) < 0.01);
  const QuantumState mm = DenseState::mixed(oracle::Mat::Identity(2, 2) * 0.5);
  CHECK(std::abs(estimate_purity(mm, 50000, rng) - 0.5) < 0.02);
  CHECK(std::abs(estimate_purity(mm, 1000000, rng) - 0.5) < 0.005);

  const oracle::Mat rho = oracle::random_density(3, 2, rng);
  const QuantumState m = DenseState::mixed(rho);
  const double exact = (rho * rho).trace().real();
  const BellSampler sampler(m);
  const int reps = 2000;
  const std::uint64_t shots = 200;
  double mean = 0;
  for (int i = 0; i < reps; ++i) mean += estimate_purity(sampler, exact, shots, rng) / reps;
  const double se = std::sqrt((1 - exact * exact) / double(shots) / reps);
  CHECK(std::abs(mean - exact) < 3 * se);
}
