#include <doctest.h>

#include <map>
#include <unordered_map>

#include "oracles.hpp"
#include "rdipe/clifford.hpp"
#include "rdipe/errors.hpp"

using rdipe::Gate;
using rdipe::PauliString;
using rdipe::RealCliffordTableau;

namespace {

/// Dense U P U† from the gate log, compared with the tableau's signed conjugation.
void check_against_dense(const RealCliffordTableau &t, const PauliString &p) {
  const std::size_t n = t.size();
  oracle::Mat u = oracle::unitary(n, *t.gate_log());
  oracle::Mat expect = u * oracle::pauli(p.str().substr(1), p.sign()) * u.adjoint();
  const PauliString img = t.conjugate(p);
  CHECK((oracle::pauli(img.str().substr(1), img.sign()) - expect).norm() < 1e-10);
  oracle::Mat expect_inv = u.adjoint() * oracle::pauli(p.str().substr(1), p.sign()) * u;
  const PauliString pre = rdipe::inverse_conjugate(t, p);
  CHECK((oracle::pauli(pre.str().substr(1), pre.sign()) - expect_inv).norm() < 1e-10);
}

}  // namespace

TEST_CASE("single gate propagation") {
  auto t = RealCliffordTableau::identity(2);
  t.apply(Gate::H, 0);
  CHECK(t.x_image(0) == PauliString::from_string("ZI"));
  CHECK(t.z_image(0) == PauliString::from_string("XI"));

  auto c = RealCliffordTableau::identity(2);
  c.apply(Gate::CNOT, 0, 1);
  CHECK(c.x_image(0) == PauliString::from_string("XX"));
  CHECK(c.z_image(1) == PauliString::from_string("ZZ"));

  auto z = RealCliffordTableau::identity(1);
  z.apply(Gate::Z, 0);
  CHECK(z.x_image(0) == PauliString::from_string("-X"));
}

TEST_CASE("invalid sites are rejected") {
  auto t = RealCliffordTableau::identity(3);
  CHECK_THROWS_AS(t.apply(Gate::H, 3), rdipe::Error);
  CHECK_THROWS_AS(t.apply(Gate::CNOT, 1, 1), rdipe::Error);
  CHECK_THROWS_AS(t.apply(Gate::CZ, 0, 5), rdipe::Error);
  try {
    t.apply(Gate::X, 9);
  } catch (const rdipe::Error &e) {
    CHECK(e.code() == rdipe::Errc::InvalidSite);
  }
}

TEST_CASE("conjugate: identity and H⊗I") {
  const auto id = RealCliffordTableau::identity(3);
  for (std::uint64_t a = 0; a < 64; ++a) {
    const auto p = PauliString::from_index(3, a);
    CHECK(id.conjugate(p) == p);
    CHECK(rdipe::inverse_conjugate(id, p) == p);
  }
  auto h = RealCliffordTableau::identity(2, true);
  h.apply(Gate::H, 0);
  CHECK(h.conjugate(PauliString::from_string("XZ")) == PauliString::from_string("+ZZ"));
  check_against_dense(h, PauliString::from_string("XZ"));
}

TEST_CASE("conjugate matches dense U P U† for random circuits (n <= 3)") {
  rdipe::Rng rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + rng.below(3);
    auto t = rdipe::random_real_clifford(n, 1 + rng.below(6), rng, true);
    CHECK(t.is_valid());
    const std::uint64_t count = std::uint64_t{1} << (2 * n);
    for (std::uint64_t a = 0; a < count; ++a) {
      auto p = PauliString::from_index(n, a);
      p.set_negative(rng.bernoulli(0.5));
      check_against_dense(t, p);
    }
  }
}

TEST_CASE("inverse_conjugate undoes conjugate (n = 8)") {
  rdipe::Rng rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto t = rdipe::random_real_clifford(8, 1 + rng.below(20), rng);
    PauliString p(8);
    for (std::size_t q = 0; q < 8; ++q) p.set_letter(q, "IXYZ"[rng.below(4)]);
    p.set_negative(rng.bernoulli(0.5));
    CHECK(rdipe::inverse_conjugate(t, t.conjugate(p)) == p);
    if (trial % 100 == 0) {
      CHECK(t.then(t.inverse()).is_identity());
      CHECK(t.inverse().then(t).is_identity());
    }
  }
}

TEST_CASE("conjugation is a homomorphism on products (n <= 4)") {
  rdipe::Rng rng(99);
  int checked = 0;
  while (checked < 400) {
    const std::size_t n = 1 + rng.below(4);
    const auto t = rdipe::random_real_clifford(n, 3, rng);
    const auto p = PauliString::from_index(n, rng.below(std::uint64_t{1} << (2 * n)));
    const auto q = PauliString::from_index(n, rng.below(std::uint64_t{1} << (2 * n)));
    if (!p.commutes_with(q)) continue;  // product of commuting Hermitian Paulis has a real phase
    const auto pq = rdipe::multiply(p, q);
    CHECK(t.conjugate(pq) == rdipe::multiply(t.conjugate(p), t.conjugate(q)));
    CHECK(t.conjugate(PauliString(n)) == PauliString(n));
    ++checked;
  }
}

TEST_CASE("random_real_clifford determinism and depth 0") {
  rdipe::Rng a(42), b(42);
  CHECK(rdipe::random_real_clifford(10, 0, a).is_identity());
  rdipe::Rng c(42);
  const auto t1 = rdipe::random_real_clifford(10, 30, b);
  const auto t2 = rdipe::random_real_clifford(10, 30, c);
  CHECK(t1 == t2);
  CHECK(t1.key() == t2.key());
  CHECK(t1.is_valid());
}

TEST_CASE("enumerate_group n=1 matches the dense closure of <H,X,Z>") {
  const auto group = rdipe::enumerate_group(1);
  CHECK(group.size() == 8);
  // Dense closure modulo global sign.
  std::vector<oracle::Mat> dense{oracle::Mat::Identity(2, 2)};
  auto same_up_to_sign = [](const oracle::Mat &a, const oracle::Mat &b) {
    return (a - b).norm() < 1e-9 || (a + b).norm() < 1e-9;
  };
  for (std::size_t head = 0; head < dense.size(); ++head) {
    for (Gate g : {Gate::H, Gate::X, Gate::Z}) {
      oracle::Mat next = oracle::gate(1, {g, 0}) * dense[head];
      bool found = false;
      for (const auto &m : dense) found = found || same_up_to_sign(m, next);
      if (!found) dense.push_back(next);
    }
  }
  CHECK(dense.size() == group.size());
  for (const auto &t : group) {
    CHECK(t.is_valid());
    CHECK(t.x_image(0).y_count() % 2 == 0);
  }
}

TEST_CASE("enumerate_group n=2 is closed and duplicate-free") {
  const auto group = rdipe::enumerate_group(2);
  CHECK(group.size() == 1152);
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < group.size(); ++i) {
    CHECK(group[i].is_valid());
    CHECK(index.emplace(group[i].key(), i).second);
  }
  rdipe::Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto &a = group[rng.below(group.size())];
    const auto &b = group[rng.below(group.size())];
    CHECK(index.count(a.then(b).key()) == 1);
  }
  CHECK_THROWS_AS(rdipe::enumerate_group(3), rdipe::Error);
}

TEST_CASE("random circuits approach uniform on rCl(2)") {
  const auto group = rdipe::enumerate_group(2);
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < group.size(); ++i) index.emplace(group[i].key(), i);
  std::vector<double> counts(group.size(), 0.0);
  const std::size_t samples = 100000;
  rdipe::Rng master(8);
  for (std::size_t s = 0; s < samples; ++s) {
    rdipe::Rng rng = master.substream(s);
    const auto t = rdipe::random_real_clifford(2, 50, rng);
    auto it = index.find(t.key());
    REQUIRE(it != index.end());
    counts[it->second] += 1.0;
  }
  double tv = 0.0;
  for (double c : counts) tv += std::abs(c / samples - 1.0 / group.size());
  tv *= 0.5;
  MESSAGE("TV to uniform = " << tv);
  CHECK(tv < 0.05);
}

TEST_CASE("tableau JSON round trip") {
  rdipe::Rng rng(1);
  const auto t = rdipe::random_real_clifford(70, 5, rng);
  const auto back = rdipe::tableau_from_json(rdipe::tableau_to_json(t));
  CHECK(back == t);
  const auto logged = rdipe::random_real_clifford(4, 5, rng, true);
  const auto back2 = rdipe::tableau_from_json(rdipe::tableau_to_json(logged));
  CHECK(back2 == logged);
  CHECK(back2.gate_log() == logged.gate_log());
}
