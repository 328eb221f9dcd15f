#include "rdipe/states.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "rdipe/errors.hpp"
#include "rdipe/rng.hpp"

namespace rdipe {

namespace {

constexpr double kNormTol = 1e-10;

bool all_real(const auto &m) { return m.imag().cwiseAbs().maxCoeff() < kNormTol; }

void check_dense_qubits(std::size_t n, std::size_t cap, const char *what) {
  if (n > cap) fail(Errc::TooLargeForDense, std::string(what) + " needs n <= " + std::to_string(cap));
}

double log_binomial(std::size_t n, std::size_t k) {
  return std::lgamma(double(n) + 1) - std::lgamma(double(k) + 1) - std::lgamma(double(n - k) + 1);
}

}  // namespace

DenseState DenseState::pure(VectorX<cplx> psi) {
  DenseState s;
  s.n_ = qubits_of(static_cast<std::size_t>(psi.size()));
  check_dense_qubits(s.n_, kMaxDenseVectorQubits, "dense state vector");
  if (std::abs(psi.squaredNorm() - 1.0) > kNormTol) fail(Errc::InvalidState, "state vector is not normalized");
  s.real_ = all_real(psi);
  s.rep_ = std::move(psi);
  return s;
}

DenseState DenseState::mixed(MatrixX<cplx> rho) {
  DenseState s;
  if (rho.rows() != rho.cols()) fail(Errc::DimensionMismatch, "density matrix is not square");
  s.n_ = qubits_of(static_cast<std::size_t>(rho.rows()));
  check_dense_qubits(s.n_, kMaxDenseMatrixQubits, "density matrix");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kNormTol) fail(Errc::InvalidState, "density matrix is not Hermitian");
  if (std::abs(rho.trace() - cplx(1.0)) > kNormTol) fail(Errc::InvalidState, "density matrix trace is not 1");
  Eigen::SelfAdjointEigenSolver<MatrixX<cplx>> eig(rho, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -kNormTol) fail(Errc::InvalidState, "density matrix is not positive semidefinite");
  s.real_ = all_real(rho);
  s.rep_ = std::move(rho);
  return s;
}

MatrixX<cplx> DenseState::density() const {
  if (!is_pure()) return matrix();
  check_dense_qubits(n_, kMaxDenseMatrixQubits, "density matrix");
  return vector() * vector().adjoint();
}

CwState::CwState(RealCliffordTableau c, std::vector<SupportEntry> support, CwFamily family, std::size_t k,
                 std::size_t cap)
    : tableau_(std::move(c)), support_(std::move(support)), family_(family), k_(k) {
  tableau_.drop_gate_log();
  const std::size_t n = tableau_.size();
  if (cap == 0) cap = default_support_cap(n);
  if (support_.empty()) fail(Errc::InvalidState, "empty support");
  if (support_.size() > cap) {
    fail(Errc::SupportCapExceeded,
         "support of " + std::to_string(support_.size()) + " exceeds cap " + std::to_string(cap));
  }
  double norm = 0.0;
  for (const auto &e : support_) {
    if (e.z.size() != n) fail(Errc::DimensionMismatch, "support bitstring length differs from n");
    if (!index_.emplace(e.z, e.c).second) fail(Errc::InvalidState, "duplicate support entry " + e.z.str());
    norm += e.c * e.c;
  }
  if (std::abs(norm - 1.0) > 1e-12) fail(Errc::InvalidState, "support coefficients are not normalized");
  inverse_ = tableau_.inverse();
}

double CwState::coefficient(const BitVector &z) const {
  auto it = index_.find(z);
  return it == index_.end() ? 0.0 : it->second;
}

CwState CwState::with_clifford(RealCliffordTableau c) const {
  if (c.size() != size()) fail(Errc::DimensionMismatch, "Clifford acts on a different number of qubits");
  return CwState(std::move(c), support_, family_, k_, std::max(support_.size(), default_support_cap(size())));
}

CwState make_w_state(std::size_t n) {
  if (n < 1) fail(Errc::InvalidArgument, "W state needs n >= 1");
  std::vector<SupportEntry> support;
  const double c = 1.0 / std::sqrt(double(n));
  for (std::size_t q = 0; q < n; ++q) {
    BitVector z(n);
    z.set(q, true);
    support.push_back({std::move(z), c});
  }
  return CwState(RealCliffordTableau::identity(n), std::move(support), CwFamily::W, 1);
}

CwState make_dicke(std::size_t n, std::size_t k, std::size_t cap) {
  if (k < 1 || k > n) fail(Errc::InvalidArgument, "Dicke state needs 1 <= k <= n");
  if (cap == 0) cap = default_support_cap(n);
  const double count = std::exp(log_binomial(n, k));
  if (count > double(cap) + 0.5) {
    fail(Errc::SupportCapExceeded, "C(" + std::to_string(n) + "," + std::to_string(k) + ") exceeds the support cap");
  }
  const auto size = static_cast<std::size_t>(std::llround(count));
  const double c = 1.0 / std::sqrt(double(size));
  std::vector<SupportEntry> support;
  support.reserve(size);
  // Lexicographic k-subsets.
  std::vector<std::size_t> pos(k);
  std::iota(pos.begin(), pos.end(), 0);
  while (true) {
    BitVector z(n);
    for (std::size_t p : pos) z.set(p, true);
    support.push_back({std::move(z), c});
    std::size_t i = k;
    while (i > 0 && pos[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) break;
    ++pos[i - 1];
    for (std::size_t j = i; j < k; ++j) pos[j] = pos[j - 1] + 1;
  }
  return CwState(RealCliffordTableau::identity(n), std::move(support), k == 1 ? CwFamily::W : CwFamily::Dicke, k,
                 cap);
}

std::size_t num_qubits(const QuantumState &s) {
  return std::visit([](const auto &v) { return v.size(); }, s);
}

bool is_real(const QuantumState &s) {
  if (const auto *d = std::get_if<DenseState>(&s)) return d->is_real();
  return true;
}

bool is_pure(const QuantumState &s) {
  if (const auto *d = std::get_if<DenseState>(&s)) return d->is_pure();
  return true;
}

double support_expectation(const CwState &s, const PauliString &q) {
  if (q.size() != s.size()) fail(Errc::DimensionMismatch, "Pauli and state sizes differ");
  const std::size_t y = q.y_count();
  // A real state has real expectations, so an odd number of Y's forces the sum to vanish.
  if (y & 1u) return 0.0;
  double acc = 0.0;
  const bool diagonal = q.xs().none();
  for (const auto &e : s.support()) {
    const double partner = diagonal ? e.c : s.coefficient(e.z ^ q.xs());
    if (partner == 0.0) continue;
    acc += (q.zs().dot(e.z) ? -1.0 : 1.0) * e.c * partner;
  }
  if ((y >> 1) & 1u) acc = -acc;
  return q.negative() ? -acc : acc;
}

double expectation(const CwState &s, const PauliString &p) {
  if (p.size() != s.size()) fail(Errc::DimensionMismatch, "Pauli and state sizes differ");
  return support_expectation(s, s.inverse_tableau().conjugate(p));
}

double expectation(const DenseState &s, const PauliString &p) {
  if (p.size() != s.size()) fail(Errc::DimensionMismatch, "Pauli and state sizes differ");
  if (s.is_pure()) {
    const auto &psi = s.vector();
    return psi.dot(apply_pauli(p, psi)).real();
  }
  const auto &rho = s.matrix();
  const PauliMasks m = masks_of(p);
  cplx acc = 0;
  for (std::uint64_t k = 0; k < dim_of(s.size()); ++k) {
    const double sign = (std::popcount(m.z & k) & 1) ? -1.0 : 1.0;
    acc += sign * rho(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k ^ m.x));
  }
  acc *= y_phase(m.y_count);
  return m.negative ? -acc.real() : acc.real();
}

double expectation(const QuantumState &s, const PauliString &p) {
  return std::visit([&](const auto &v) { return expectation(v, p); }, s);
}

double purity(const QuantumState &s) {
  if (const auto *d = std::get_if<DenseState>(&s)) {
    return d->is_pure() ? d->vector().squaredNorm() * d->vector().squaredNorm() : d->matrix().squaredNorm();
  }
  return 1.0;
}

double overlap(const QuantumState &a, const QuantumState &b) {
  if (num_qubits(a) != num_qubits(b)) fail(Errc::DimensionMismatch, "states have different sizes");
  const DenseState da = to_dense(a);
  const DenseState db = to_dense(b);
  if (da.is_pure() && db.is_pure()) return std::norm(da.vector().dot(db.vector()));
  if (da.is_pure()) return da.vector().dot(db.matrix() * da.vector()).real();
  if (db.is_pure()) return db.vector().dot(da.matrix() * db.vector()).real();
  return (da.matrix().array() * db.matrix().conjugate().array()).sum().real();
}

double cosine_oracle(const QuantumState &a, const QuantumState &b) {
  return overlap(a, b) / std::sqrt(purity(a) * purity(b));
}

namespace {

std::size_t half_of(std::size_t n) {
  if (n % 2 != 0) fail(Errc::OddN, "bipartite entropy needs even n");
  return n / 2;
}

}  // namespace

double renyi2_half(const QuantumState &s) {
  const std::size_t h = half_of(num_qubits(s));
  const DenseState d = to_dense(s);
  const auto dl = static_cast<Eigen::Index>(dim_of(h));
  const auto dh = static_cast<Eigen::Index>(dim_of(d.size() - h));
  MatrixX<cplx> reduced;
  if (d.is_pure()) {
    // Column-major view: row = traced (low) index, column = kept (high) index.
    Eigen::Map<const MatrixX<cplx>> a(d.vector().data(), dl, dh);
    reduced = a.transpose() * a.conjugate();
  } else {
    const auto &rho = d.matrix();
    reduced = MatrixX<cplx>::Zero(dh, dh);
    for (Eigen::Index i = 0; i < dh; ++i)
      for (Eigen::Index j = 0; j < dh; ++j)
        for (Eigen::Index l = 0; l < dl; ++l) reduced(i, j) += rho(l + dl * i, l + dl * j);
  }
  return -std::log2(reduced.squaredNorm());
}

double renyi2_half_swap(const QuantumState &s) {
  const std::size_t h = half_of(num_qubits(s));
  const DenseState d = to_dense(s);
  check_dense_qubits(d.size(), kMaxDenseMatrixQubits, "SWAP contraction");
  const MatrixX<cplx> rho = d.density();
  const auto dl = static_cast<Eigen::Index>(dim_of(h));
  const auto dh = static_cast<Eigen::Index>(dim_of(d.size() - h));
  // tr[(ρ⊗ρ)(1_A ⊗ SWAP_B)] = Σ ρ[(l,i),(l,j)] ρ[(m,j),(m,i)]
  cplx acc = 0;
  for (Eigen::Index i = 0; i < dh; ++i)
    for (Eigen::Index j = 0; j < dh; ++j)
      for (Eigen::Index l = 0; l < dl; ++l)
        for (Eigen::Index m = 0; m < dl; ++m) acc += rho(l + dl * i, l + dl * j) * rho(m + dl * j, m + dl * i);
  return -std::log2(acc.real());
}

DenseState to_dense(const CwState &s) {
  const std::size_t n = s.size();
  check_dense_qubits(n, kMaxDenseVectorQubits, "dense conversion");
  const auto dim = static_cast<Eigen::Index>(dim_of(n));
  const auto &t = s.tableau();

  // C|0⟩ is the joint +1 eigenvector of the images of Z_i; project a generic real vector onto it.
  Rng rng(0x5eedULL);
  VectorX<cplx> v(dim);
  for (Eigen::Index k = 0; k < dim; ++k) v(k) = normal(rng);
  for (std::size_t q = 0; q < n; ++q) {
    v = (v + apply_pauli(t.z_image(q), v)) * 0.5;
    v /= v.norm();
  }

  VectorX<cplx> out = VectorX<cplx>::Zero(dim);
  for (const auto &e : s.support()) {
    // C|z⟩ = (C X^z C†) C|0⟩
    PauliString flip(n);
    for (std::size_t q = 0; q < n; ++q) {
      if (e.z[q]) flip = multiply(flip, t.x_image(q));
    }
    out += e.c * apply_pauli(flip, v);
  }

  Eigen::Index best = 0;
  double best_abs = -1.0;
  for (Eigen::Index k = 0; k < dim; ++k) {
    if (std::abs(out(k)) > best_abs + 1e-12) {
      best_abs = std::abs(out(k));
      best = k;
    }
  }
  out *= std::conj(out(best)) / std::abs(out(best));
  for (Eigen::Index k = 0; k < dim; ++k) out(k) = cplx(out(k).real(), 0.0);
  out /= out.norm();
  return DenseState::pure(std::move(out));
}

DenseState to_dense(const QuantumState &s) {
  if (const auto *d = std::get_if<DenseState>(&s)) return *d;
  return to_dense(std::get<CwState>(s));
}

namespace {

RealCliffordTableau clifford_from_json(std::size_t n, const nlohmann::json &j) {
  if (j.is_null()) return RealCliffordTableau::identity(n);
  if (j.is_object() && j.contains("random")) {
    const auto &r = j.at("random");
    const std::size_t depth = r.value("depth", default_clifford_depth(n));
    Rng rng(r.value("seed", std::uint64_t{0}));
    return random_real_clifford(n, depth, rng);
  }
  if (!j.is_array()) fail(Errc::ParseError, "clifford must be a gate list or {\"random\": {...}}");
  auto t = RealCliffordTableau::identity(n);
  for (const auto &g : j) {
    if (!g.is_array() || g.empty()) fail(Errc::ParseError, "gate entries look like [\"CNOT\", 0, 1]");
    const Gate gate = gate_from_name(g.at(0).get<std::string>());
    const std::size_t need = is_two_qubit(gate) ? 3 : 2;
    if (g.size() != need) fail(Errc::ParseError, "wrong number of sites for gate " + gate_name(gate));
    t.apply(gate, g.at(1).get<std::size_t>(), need == 3 ? g.at(2).get<std::size_t>() : 0);
  }
  return t;
}

}  // namespace

QuantumState state_from_json(const nlohmann::json &j) {
  try {
    const std::string family = j.at("family").get<std::string>();
    const std::size_t n = j.at("n").get<std::size_t>();
    if (n < 1) fail(Errc::InvalidArgument, "n must be positive");
    const std::size_t cap = j.value("cap", std::size_t{0});
    CwState base;
    if (family == "w") {
      base = make_w_state(n);
    } else if (family == "dicke") {
      base = make_dicke(n, j.at("k").get<std::size_t>(), cap);
    } else if (family == "custom") {
      std::vector<SupportEntry> support;
      double norm = 0.0;
      for (const auto &e : j.at("support")) {
        SupportEntry entry;
        if (e.is_string()) {
          entry.z = BitVector::from_string(e.get<std::string>());
          entry.c = 1.0;
        } else {
          entry.z = BitVector::from_string(e.at("z").get<std::string>());
          entry.c = e.at("c").get<double>();
        }
        norm += entry.c * entry.c;
        support.push_back(std::move(entry));
      }
      // Uniform supports are given without coefficients; explicit ones may carry rounding.
      const bool uniform = std::all_of(j.at("support").begin(), j.at("support").end(),
                                       [](const auto &e) { return e.is_string(); });
      if (!uniform && std::abs(norm - 1.0) > 1e-6) fail(Errc::InvalidState, "support coefficients are not normalized");
      for (auto &e : support) e.c /= std::sqrt(norm);
      base = CwState(RealCliffordTableau::identity(n), std::move(support), CwFamily::Custom, 0, cap);
    } else {
      fail(Errc::ParseError, "unknown state family '" + family + "'");
    }
    auto c = clifford_from_json(n, j.contains("clifford") ? j.at("clifford") : nlohmann::json());
    return base.with_clifford(std::move(c));
  } catch (const nlohmann::json::exception &e) {
    fail(Errc::ParseError, std::string("state spec: ") + e.what());
  }
}

}  // namespace rdipe
