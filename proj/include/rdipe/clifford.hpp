#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rdipe/pauli.hpp"
#include "rdipe/rng.hpp"

namespace rdipe {

/// Generators of the real Clifford group. S is deliberately absent.
enum class Gate { H, X, Z, CNOT, CZ };

struct GateOp {
  Gate gate;
  std::uint32_t q0;
  std::uint32_t q1 = 0;  // target for CNOT, partner for CZ

  friend bool operator==(const GateOp &, const GateOp &) = default;
};

std::string gate_name(Gate g);
Gate gate_from_name(const std::string &name);
bool is_two_qubit(Gate g) noexcept;

/// Sign-tracked tableau of a real Clifford unitary C: stores C X_q C† and C Z_q C† for
/// every qubit q. Applying a gate g replaces C by g·C.
class RealCliffordTableau {
 public:
  RealCliffordTableau() = default;
  static RealCliffordTableau identity(std::size_t n, bool record_gates = false);
  /// Builds a tableau from explicit images; throws Errc::InvalidArgument unless is_valid().
  static RealCliffordTableau from_images(std::vector<PauliString> x_images,
                                         std::vector<PauliString> z_images);

  std::size_t size() const noexcept { return x_images_.size(); }

  const PauliString &x_image(std::size_t q) const { return x_images_.at(q); }
  const PauliString &z_image(std::size_t q) const { return z_images_.at(q); }

  void apply(Gate g, std::size_t q0, std::size_t q1 = 0);
  void apply(const GateOp &op) { apply(op.gate, op.q0, op.q1); }

  /// C P C† with its ±1 sign.
  PauliString conjugate(const PauliString &p) const;
  /// The tableau of C†.
  RealCliffordTableau inverse() const;
  /// Tableau of next·C (this applied first).
  RealCliffordTableau then(const RealCliffordTableau &next) const;

  /// Symplectic condition plus realness of every image (even number of Y factors).
  bool is_valid() const;
  bool is_identity() const;

  bool records_gates() const noexcept { return gate_log_.has_value(); }
  const std::optional<std::vector<GateOp>> &gate_log() const noexcept { return gate_log_; }
  void drop_gate_log() noexcept { gate_log_.reset(); }

  /// Canonical byte-string key (images and signs) for hashing and equality.
  std::string key() const;

  friend bool operator==(const RealCliffordTableau &a, const RealCliffordTableau &b) {
    return a.x_images_ == b.x_images_ && a.z_images_ == b.z_images_;
  }

 private:
  std::vector<PauliString> x_images_;
  std::vector<PauliString> z_images_;
  std::optional<std::vector<GateOp>> gate_log_;
};

/// C† P C; computes the inverse tableau on every call, so hot loops should cache
/// `T.inverse()` and call `conjugate` on it instead.
PauliString inverse_conjugate(const RealCliffordTableau &t, const PauliString &p);

/// Random real Clifford circuit of `depth` layers. One layer: each qubit independently gets
/// H, then X, then Z, each with probability 1/2; then the qubits are shuffled and paired
/// off consecutively, and each pair (a, b) receives CNOT(a→b), CNOT(b→a), CZ(a,b) or
/// nothing with probability 1/4 each.
RealCliffordTableau random_real_clifford(std::size_t n, std::size_t depth, Rng &rng,
                                         bool record_gates = false);

/// Default depth 10·n used when the caller does not choose one.
inline std::size_t default_clifford_depth(std::size_t n) { return 10 * (n == 0 ? 1 : n); }

/// All elements of rCl(n) (modulo the global sign) for n ∈ {1, 2}, found by breadth-first
/// closure over the generators. Each element records a shortest generating word.
std::vector<RealCliffordTableau> enumerate_group(std::size_t n);

nlohmann::json tableau_to_json(const RealCliffordTableau &t);
RealCliffordTableau tableau_from_json(const nlohmann::json &j);

}  // namespace rdipe
