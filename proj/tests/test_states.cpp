#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rdipe/errors.hpp"
#include "rdipe/states.hpp"

using namespace rdipe;

namespace {

/// Closed form for ⟨W_n|P|W_n⟩ from the letter counts.
double w_closed_form(const PauliString &p) {
  const auto w = weight_counts(p);
  const double n = double(p.size());
  if (w.x == 0 && w.y == 0) return 1.0 - 2.0 * double(w.z) / n;
  if ((w.x == 2 && w.y == 0) || (w.x == 0 && w.y == 2)) return 2.0 / n;
  return 0.0;
}

/// Dense vector of C Σ c_z |z⟩ built from the gate word and Kronecker matrices.
oracle::Vec oracle_vector(const CwState &s, const std::vector<GateOp> &gates) {
  const std::size_t n = s.size();
  oracle::Vec v = oracle::Vec::Zero(Eigen::Index(1) << n);
  for (const auto &e : s.support()) v(static_cast<Eigen::Index>(e.z.to_u64())) += e.c;
  return oracle::unitary(n, gates) * v;
}

double oracle_expect(const oracle::Vec &v, const PauliString &p) {
  return v.dot(oracle::pauli(p.str().substr(1), p.sign()) * v).real();
}

PauliString random_pauli(std::size_t n, Rng &rng) {
  PauliString p(n);
  for (std::size_t q = 0; q < n; ++q) p.set_letter(q, "IXYZ"[rng.below(4)]);
  return p;
}

}  // namespace

TEST_CASE("W and Dicke constructors") {
  const auto w3 = make_w_state(3);
  REQUIRE(w3.support().size() == 3);
  CHECK(w3.coefficient(BitVector::from_string("100")) == doctest::Approx(1 / std::sqrt(3.0)));
  CHECK(w3.coefficient(BitVector::from_string("010")) == doctest::Approx(1 / std::sqrt(3.0)));
  CHECK(w3.coefficient(BitVector::from_string("001")) == doctest::Approx(1 / std::sqrt(3.0)));
  CHECK(w3.coefficient(BitVector::from_string("110")) == 0.0);

  const auto d42 = make_dicke(4, 2);
  CHECK(d42.support().size() == 6);
  for (const auto &e : d42.support()) {
    CHECK(e.z.popcount() == 2);
    CHECK(e.c == doctest::Approx(1 / std::sqrt(6.0)));
  }
  const auto d51 = make_dicke(5, 1);
  const auto w5 = make_w_state(5);
  for (const auto &e : w5.support()) CHECK(d51.coefficient(e.z) == doctest::Approx(e.c));
  CHECK(d51.support().size() == w5.support().size());

  try {
    make_dicke(20, 10);
    FAIL("expected SupportCapExceeded");
  } catch (const Error &e) {
    CHECK(e.code() == Errc::SupportCapExceeded);
  }
}

TEST_CASE("W-state expectations match the closed form") {
  const auto w3 = make_w_state(3);
  CHECK(expectation(w3, PauliString::from_string("ZII")) == doctest::Approx(1.0 / 3));
  CHECK(expectation(w3, PauliString::from_string("XXI")) == doctest::Approx(2.0 / 3));
  CHECK(expectation(w3, PauliString::from_string("XYI")) == 0.0);
  for (std::size_t n = 3; n <= 5; ++n) {
    const QuantumState w = make_w_state(n);
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << (2 * n)); ++a) {
      const auto p = PauliString::from_index(n, a);
      CHECK(std::abs(expectation(w, p) - w_closed_form(p)) < 1e-12);
    }
  }
}

TEST_CASE("to_dense of the bare W state") {
  const auto d = to_dense(make_w_state(3));
  CHECK(d.is_real());
  CHECK(d.is_pure());
  for (Eigen::Index k = 0; k < 8; ++k) {
    const double expect = (k == 1 || k == 2 || k == 4) ? 1 / std::sqrt(3.0) : 0.0;
    CHECK(std::abs(d.vector()(k) - expect) < 1e-12);
  }
}

TEST_CASE("CwState expectations agree with a dense Kronecker oracle") {
  Rng rng(17);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t n = 2 + rng.below(5);
    const auto t = random_real_clifford(n, 1 + rng.below(3 * n), rng, true);
    const auto gates = *t.gate_log();
    CwState s = (n >= 4 && trial % 2 == 0) ? make_dicke(n, 2) : make_w_state(n);
    s = s.with_clifford(t);
    const oracle::Vec v = oracle_vector(s, gates);
    const DenseState d = to_dense(s);
    // Equal up to a global sign.
    const double sgn = v.dot(d.vector()).real() < 0 ? -1.0 : 1.0;
    CHECK((d.vector() * sgn - v).norm() < 1e-10);
    CHECK(d.vector().imag().cwiseAbs().maxCoeff() < 1e-10);
    double worst = 0.0;
    for (int k = 0; k < 10000 / 12; ++k) {
      const auto p = random_pauli(n, rng);
      worst = std::max(worst, std::abs(expectation(s, p) - oracle_expect(v, p)));
      worst = std::max(worst, std::abs(expectation(d, p) - oracle_expect(v, p)));
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("signed custom supports") {
  std::vector<SupportEntry> sup{{BitVector::from_string("0011"), 0.5},
                                {BitVector::from_string("0101"), -0.5},
                                {BitVector::from_string("1000"), 0.5},
                                {BitVector::from_string("1111"), 0.5}};
  Rng rng(4);
  const auto t = random_real_clifford(4, 8, rng, true);
  const CwState s(t, sup);
  const oracle::Vec v = oracle_vector(s, *t.gate_log());
  for (std::uint64_t a = 0; a < 256; ++a) {
    const auto p = PauliString::from_index(4, a);
    CHECK(std::abs(expectation(s, p) - oracle_expect(v, p)) < 1e-12);
  }
  std::vector<SupportEntry> bad{{BitVector::from_string("00"), 0.5}};
  CHECK_THROWS_AS(CwState(RealCliffordTableau::identity(2), bad), Error);
}

TEST_CASE("Σ_a ⟨P_a⟩² = 2^n tr ρ² for every backend") {
  Rng rng(23);
  for (std::size_t n = 1; n <= 5; ++n) {
    std::vector<QuantumState> states;
    states.push_back(DenseState::pure(oracle::random_state(n, rng, false)));
    states.push_back(DenseState::mixed(oracle::random_density(n, 2, rng)));
    if (n >= 2) states.push_back(make_w_state(n).with_clifford(random_real_clifford(n, 5, rng)));
    for (const auto &s : states) {
      double sum = 0.0;
      for (std::uint64_t a = 0; a < (std::uint64_t{1} << (2 * n)); ++a) {
        const double e = expectation(s, PauliString::from_index(n, a));
        sum += e * e;
      }
      CHECK(sum == doctest::Approx(double(1u << n) * purity(s)).epsilon(1e-10));
    }
  }
}

TEST_CASE("purity, overlap and cosine") {
  oracle::Vec zero(2), plus(2), one(2);
  zero << 1, 0;
  one << 0, 1;
  plus << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  const QuantumState s0 = DenseState::pure(zero), sp = DenseState::pure(plus), s1 = DenseState::pure(one);
  CHECK(purity(s0) == doctest::Approx(1.0));
  CHECK(overlap(s0, sp) == doctest::Approx(0.5));
  CHECK(cosine_oracle(s0, sp) == doctest::Approx(0.5));
  CHECK(cosine_oracle(s0, s0) == doctest::Approx(1.0));
  CHECK(cosine_oracle(s0, s1) == doctest::Approx(0.0));
  const QuantumState mm = DenseState::mixed(oracle::Mat::Identity(2, 2) * 0.5);
  CHECK(purity(mm) == doctest::Approx(0.5));
  CHECK(overlap(mm, s0) == doctest::Approx(0.5));
  CHECK(cosine_oracle(mm, s0) == doctest::Approx(1 / std::sqrt(2.0)));

  Rng rng(5);
  const oracle::Mat a = oracle::random_density(3, 3, rng), b = oracle::random_density(3, 2, rng);
  CHECK(overlap(DenseState::mixed(a), DenseState::mixed(b)) == doctest::Approx((a * b).trace().real()));
  CHECK_THROWS_AS(DenseState::pure(zero * 2.0), Error);
}

TEST_CASE("second Rényi entropy of half the system") {
  oracle::Vec prod = oracle::Vec::Zero(4);
  prod(0) = 1;
  CHECK(renyi2_half(DenseState::pure(prod)) == doctest::Approx(0.0));
  oracle::Vec bell = oracle::Vec::Zero(4);
  bell(0) = bell(3) = 1 / std::sqrt(2.0);
  CHECK(renyi2_half(DenseState::pure(bell)) == doctest::Approx(1.0));
  CHECK(renyi2_half_swap(DenseState::pure(bell)) == doctest::Approx(1.0));

  const QuantumState w4 = make_w_state(4);
  CHECK(std::abs(renyi2_half(w4) - renyi2_half_swap(w4)) < 1e-10);
  // Reduced W₄ on two qubits: [1/2] ⊕ [[1/4, 1/4], [1/4, 1/4]], purity 1/2.
  CHECK(renyi2_half(w4) == doctest::Approx(1.0));

  Rng rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    const QuantumState r = DenseState::mixed(oracle::random_density(4, 3, rng));
    CHECK(std::abs(renyi2_half(r) - renyi2_half_swap(r)) < 1e-10);
    const QuantumState c = make_w_state(6).with_clifford(random_real_clifford(6, 20, rng));
    CHECK(std::abs(renyi2_half(c) - renyi2_half_swap(c)) < 1e-10);
  }
  CHECK_THROWS_AS(renyi2_half(make_w_state(3)), Error);
}

TEST_CASE("state spec JSON") {
  const auto j = nlohmann::json::parse(R"({"family": "w", "n": 3, "clifford": [["H", 0], ["CNOT", 0, 1]]})");
  const auto s = state_from_json(j);
  const auto &cw = std::get<CwState>(s);
  auto t = RealCliffordTableau::identity(3);
  t.apply(Gate::H, 0);
  t.apply(Gate::CNOT, 0, 1);
  CHECK(cw.tableau() == t);

  const auto r1 = state_from_json(nlohmann::json::parse(R"({"family": "dicke", "n": 6, "k": 2,
      "clifford": {"random": {"depth": 12, "seed": 9}}})"));
  const auto r2 = state_from_json(nlohmann::json::parse(R"({"family": "dicke", "n": 6, "k": 2,
      "clifford": {"random": {"depth": 12, "seed": 9}}})"));
  CHECK(std::get<CwState>(r1).tableau() == std::get<CwState>(r2).tableau());

  const auto c = state_from_json(nlohmann::json::parse(R"({"family": "custom", "n": 2, "support": ["00", "11"]})"));
  CHECK(expectation(c, PauliString::from_string("XX")) == doctest::Approx(1.0));
  CHECK_THROWS_AS(state_from_json(nlohmann::json::parse(R"({"family": "ghz", "n": 2})")), Error);
  CHECK_THROWS_AS(state_from_json(nlohmann::json::parse(R"({"family": "w"})")), Error);
}
