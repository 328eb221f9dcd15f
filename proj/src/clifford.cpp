#include "rdipe/clifford.hpp"

#include <cstdio>
#include <deque>
#include <unordered_map>

#include "rdipe/errors.hpp"

namespace rdipe {

std::string gate_name(Gate g) {
  switch (g) {
    case Gate::H: return "H";
    case Gate::X: return "X";
    case Gate::Z: return "Z";
    case Gate::CNOT: return "CNOT";
    case Gate::CZ: return "CZ";
  }
  return "?";
}

Gate gate_from_name(const std::string &name) {
  if (name == "H") return Gate::H;
  if (name == "X") return Gate::X;
  if (name == "Z") return Gate::Z;
  if (name == "CNOT" || name == "CX") return Gate::CNOT;
  if (name == "CZ") return Gate::CZ;
  fail(Errc::ParseError, "unknown real Clifford gate '" + name + "'");
}

bool is_two_qubit(Gate g) noexcept { return g == Gate::CNOT || g == Gate::CZ; }

RealCliffordTableau RealCliffordTableau::identity(std::size_t n, bool record_gates) {
  RealCliffordTableau t;
  t.x_images_.reserve(n);
  t.z_images_.reserve(n);
  for (std::size_t q = 0; q < n; ++q) {
    t.x_images_.push_back(PauliString::single(n, q, 'X'));
    t.z_images_.push_back(PauliString::single(n, q, 'Z'));
  }
  if (record_gates) t.gate_log_.emplace();
  return t;
}

RealCliffordTableau RealCliffordTableau::from_images(std::vector<PauliString> x_images,
                                                     std::vector<PauliString> z_images) {
  RealCliffordTableau t;
  t.x_images_ = std::move(x_images);
  t.z_images_ = std::move(z_images);
  if (t.x_images_.size() != t.z_images_.size() || !t.is_valid()) {
    fail(Errc::InvalidArgument, "images do not form a real Clifford tableau");
  }
  return t;
}

namespace {

void conjugate_by_gate(PauliString &p, Gate g, std::size_t a, std::size_t b) {
  BitVector &x = p.xs();
  BitVector &z = p.zs();
  switch (g) {
    case Gate::H: {
      const bool xa = x[a];
      const bool za = z[a];
      if (xa && za) p.flip_sign();
      x.set(a, za);
      z.set(a, xa);
      break;
    }
    case Gate::X:
      if (z[a]) p.flip_sign();
      break;
    case Gate::Z:
      if (x[a]) p.flip_sign();
      break;
    case Gate::CNOT: {
      const bool xc = x[a], zc = z[a], xt = x[b], zt = z[b];
      if (xc && zt && (xt == zc)) p.flip_sign();
      x.set(b, xt != xc);
      z.set(a, zc != zt);
      break;
    }
    case Gate::CZ: {
      const bool xa = x[a], za = z[a], xb = x[b], zb = z[b];
      if (xa && xb && (za != zb)) p.flip_sign();
      z.set(a, za != xb);
      z.set(b, zb != xa);
      break;
    }
  }
}

}  // namespace

void RealCliffordTableau::apply(Gate g, std::size_t q0, std::size_t q1) {
  const std::size_t n = size();
  if (q0 >= n || (is_two_qubit(g) && (q1 >= n || q1 == q0))) {
    fail(Errc::InvalidSite, gate_name(g) + " on invalid site(s) " + std::to_string(q0) + "," +
                                std::to_string(q1) + " for n=" + std::to_string(n));
  }
  for (auto &p : x_images_) conjugate_by_gate(p, g, q0, q1);
  for (auto &p : z_images_) conjugate_by_gate(p, g, q0, q1);
  if (gate_log_) {
    gate_log_->push_back(GateOp{g, static_cast<std::uint32_t>(q0),
                                static_cast<std::uint32_t>(is_two_qubit(g) ? q1 : 0)});
  }
#ifndef NDEBUG
  if (n <= 16 && !is_valid()) fail(Errc::PhaseNotReal, "tableau lost the symplectic condition");
#endif
}

PauliString RealCliffordTableau::conjugate(const PauliString &p) const {
  const std::size_t n = size();
  if (p.size() != n) fail(Errc::DimensionMismatch, "conjugate needs equal qubit counts");
  PauliString acc(n);
  bool negative = p.negative();
  unsigned phase = 0;
  for (std::size_t q = 0; q < n; ++q) {
    const bool x = p.xs()[q];
    const bool z = p.zs()[q];
    if (x) {
      phase += detail::mul_letters_inplace(acc, x_images_[q]);
      negative ^= x_images_[q].negative();
    }
    if (z) {
      phase += detail::mul_letters_inplace(acc, z_images_[q]);
      negative ^= z_images_[q].negative();
    }
    if (x && z) phase += 1;  // Y = i X Z
  }
  phase &= 3u;
  if (phase & 1u) fail(Errc::PhaseNotReal, "conjugation produced an imaginary phase (corrupt tableau)");
  acc.set_negative(negative != (phase == 2));
  return acc;
}

RealCliffordTableau RealCliffordTableau::inverse() const {
  const std::size_t n = size();
  RealCliffordTableau inv = identity(n);
  // Unsigned part from the symplectic inverse [[A,B],[C,D]]^{-1} = [[Dᵀ,Bᵀ],[Cᵀ,Aᵀ]].
  for (std::size_t j = 0; j < n; ++j) {
    PauliString &ix = inv.x_images_[j];
    PauliString &iz = inv.z_images_[j];
    ix = PauliString(n);
    iz = PauliString(n);
    for (std::size_t i = 0; i < n; ++i) {
      ix.xs().set(i, z_images_[i].zs()[j]);
      ix.zs().set(i, x_images_[i].zs()[j]);
      iz.xs().set(i, z_images_[i].xs()[j]);
      iz.zs().set(i, x_images_[i].xs()[j]);
    }
  }
  // Signs: if C Q C† = s G then C† G C = s Q.
  for (std::size_t j = 0; j < n; ++j) {
    inv.x_images_[j].set_negative(conjugate(inv.x_images_[j]).negative());
    inv.z_images_[j].set_negative(conjugate(inv.z_images_[j]).negative());
  }
  return inv;
}

RealCliffordTableau RealCliffordTableau::then(const RealCliffordTableau &next) const {
  if (next.size() != size()) fail(Errc::DimensionMismatch, "composition needs equal qubit counts");
  RealCliffordTableau out;
  out.x_images_.reserve(size());
  out.z_images_.reserve(size());
  for (std::size_t q = 0; q < size(); ++q) {
    out.x_images_.push_back(next.conjugate(x_images_[q]));
    out.z_images_.push_back(next.conjugate(z_images_[q]));
  }
  if (gate_log_ && next.gate_log_) {
    out.gate_log_ = *gate_log_;
    out.gate_log_->insert(out.gate_log_->end(), next.gate_log_->begin(), next.gate_log_->end());
  }
  return out;
}

bool RealCliffordTableau::is_valid() const {
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    if (x_images_[i].size() != n || z_images_[i].size() != n) return false;
    if ((x_images_[i].y_count() & 1u) || (z_images_[i].y_count() & 1u)) return false;
    for (std::size_t j = 0; j < n; ++j) {
      const bool xx = x_images_[i].commutes_with(x_images_[j]);
      const bool zz = z_images_[i].commutes_with(z_images_[j]);
      const bool xz = x_images_[i].commutes_with(z_images_[j]);
      if (!xx || !zz) return false;
      if (xz != (i != j)) return false;
    }
  }
  return true;
}

bool RealCliffordTableau::is_identity() const { return *this == identity(size()); }

std::string RealCliffordTableau::key() const {
  std::string k;
  auto append = [&k](const PauliString &p) {
    for (auto w : p.xs().words()) k.append(reinterpret_cast<const char *>(&w), sizeof w);
    for (auto w : p.zs().words()) k.append(reinterpret_cast<const char *>(&w), sizeof w);
    k.push_back(p.negative() ? '-' : '+');
  };
  for (const auto &p : x_images_) append(p);
  for (const auto &p : z_images_) append(p);
  return k;
}

PauliString inverse_conjugate(const RealCliffordTableau &t, const PauliString &p) {
  return t.inverse().conjugate(p);
}

RealCliffordTableau random_real_clifford(std::size_t n, std::size_t depth, Rng &rng,
                                         bool record_gates) {
  RealCliffordTableau t = RealCliffordTableau::identity(n, record_gates);
  std::vector<std::size_t> order(n);
  for (std::size_t layer = 0; layer < depth; ++layer) {
    for (std::size_t q = 0; q < n; ++q) {
      if (rng.bernoulli(0.5)) t.apply(Gate::H, q);
      if (rng.bernoulli(0.5)) t.apply(Gate::X, q);
      if (rng.bernoulli(0.5)) t.apply(Gate::Z, q);
    }
    for (std::size_t q = 0; q < n; ++q) order[q] = q;
    shuffle(std::span<std::size_t>(order), rng);
    for (std::size_t k = 0; k + 1 < n; k += 2) {
      const std::size_t a = order[k];
      const std::size_t b = order[k + 1];
      // The idle option matters: every two-qubit gate flips det(U) on the pair, so a layer
      // that always entangles would pin the parity of the circuit to the depth.
      switch (rng.below(4)) {
        case 0: t.apply(Gate::CNOT, a, b); break;
        case 1: t.apply(Gate::CNOT, b, a); break;
        case 2: t.apply(Gate::CZ, a, b); break;
        default: break;
      }
    }
  }
  return t;
}

std::vector<RealCliffordTableau> enumerate_group(std::size_t n) {
  if (n < 1 || n > 2) fail(Errc::TooLarge, "enumerate_group supports n in {1, 2}");
  std::vector<GateOp> generators;
  for (std::uint32_t q = 0; q < n; ++q) {
    generators.push_back({Gate::H, q});
    generators.push_back({Gate::X, q});
    generators.push_back({Gate::Z, q});
  }
  if (n == 2) {
    generators.push_back({Gate::CNOT, 0, 1});
    generators.push_back({Gate::CNOT, 1, 0});
    generators.push_back({Gate::CZ, 0, 1});
  }
  std::vector<RealCliffordTableau> elements;
  std::unordered_map<std::string, std::size_t> seen;
  elements.push_back(RealCliffordTableau::identity(n, true));
  seen.emplace(elements.front().key(), 0);
  for (std::size_t head = 0; head < elements.size(); ++head) {
    for (const auto &g : generators) {
      RealCliffordTableau next = elements[head];
      next.apply(g);
      auto key = next.key();
      if (seen.emplace(std::move(key), elements.size()).second) elements.push_back(std::move(next));
    }
  }
  return elements;
}

namespace {

std::string words_to_hex(const BitVector &b) {
  std::string s;
  char buf[17];
  for (auto w : b.words()) {
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(w));
    s += buf;
  }
  return s;
}

BitVector hex_to_words(std::size_t n, const std::string &hex) {
  BitVector b(n);
  if (hex.size() != 16 * b.num_words()) fail(Errc::ParseError, "tableau hex row has wrong length");
  for (std::size_t k = 0; k < b.num_words(); ++k) {
    b.words()[k] = std::stoull(hex.substr(16 * k, 16), nullptr, 16);
  }
  if (n % 64 != 0 && !b.words().empty() && (b.words().back() >> (n % 64)) != 0) {
    fail(Errc::ParseError, "tableau hex row sets bits beyond n");
  }
  return b;
}

nlohmann::json pauli_row(const PauliString &p) {
  return {{"x", words_to_hex(p.xs())}, {"z", words_to_hex(p.zs())}, {"sign", p.negative() ? "-" : "+"}};
}

PauliString pauli_row_from(std::size_t n, const nlohmann::json &j) {
  return PauliString(hex_to_words(n, j.at("x").get<std::string>()),
                     hex_to_words(n, j.at("z").get<std::string>()),
                     j.at("sign").get<std::string>() == "-");
}

}  // namespace

nlohmann::json tableau_to_json(const RealCliffordTableau &t) {
  nlohmann::json j;
  j["n"] = t.size();
  auto &xs = j["x_images"] = nlohmann::json::array();
  auto &zs = j["z_images"] = nlohmann::json::array();
  for (std::size_t q = 0; q < t.size(); ++q) {
    xs.push_back(pauli_row(t.x_image(q)));
    zs.push_back(pauli_row(t.z_image(q)));
  }
  if (t.gate_log()) {
    auto &gates = j["gates"] = nlohmann::json::array();
    for (const auto &op : *t.gate_log()) {
      nlohmann::json g = {{"gate", gate_name(op.gate)}, {"q0", op.q0}};
      if (is_two_qubit(op.gate)) g["q1"] = op.q1;
      gates.push_back(std::move(g));
    }
  }
  return j;
}

RealCliffordTableau tableau_from_json(const nlohmann::json &j) {
  const auto n = j.at("n").get<std::size_t>();
  RealCliffordTableau t = RealCliffordTableau::identity(n);
  // Rebuild through the gate list when present so the log survives; otherwise take rows verbatim.
  if (j.contains("gates")) {
    t = RealCliffordTableau::identity(n, true);
    for (const auto &g : j["gates"]) {
      t.apply(gate_from_name(g.at("gate").get<std::string>()), g.at("q0").get<std::size_t>(),
              g.value("q1", std::size_t{0}));
    }
  }
  const auto &xs = j.at("x_images");
  const auto &zs = j.at("z_images");
  if (xs.size() != n || zs.size() != n) fail(Errc::ParseError, "tableau JSON needs n rows per half");
  std::vector<PauliString> x_rows, z_rows;
  for (std::size_t q = 0; q < n; ++q) {
    x_rows.push_back(pauli_row_from(n, xs[q]));
    z_rows.push_back(pauli_row_from(n, zs[q]));
  }
  const RealCliffordTableau rows = RealCliffordTableau::from_images(std::move(x_rows), std::move(z_rows));
  if (j.contains("gates")) {
    if (!(rows == t)) fail(Errc::ParseError, "tableau JSON rows disagree with its gate list");
    return t;
  }
  return rows;
}

}  // namespace rdipe
