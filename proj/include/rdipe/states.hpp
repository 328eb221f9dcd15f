#pragma once

// State backends: dense vectors / density matrices, and the structured C·Σ c_z|z⟩ form.

#include <cstddef>
#include <optional>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "rdipe/bits.hpp"
#include "rdipe/clifford.hpp"
#include "rdipe/dense.hpp"
#include "rdipe/pauli.hpp"

namespace rdipe {

inline constexpr std::size_t kMaxDenseVectorQubits = 14;
inline constexpr std::size_t kMaxDenseMatrixQubits = 10;

/// Pure amplitude vector or density matrix on n <= 14 (vector) / n <= 10 (matrix) qubits.
class DenseState {
 public:
  DenseState() = default;
  /// Validates normalization (1e-10); `real` is detected from the data.
  static DenseState pure(VectorX<cplx> psi);
  /// Validates Hermiticity, unit trace and PSD (smallest eigenvalue >= -1e-10).
  static DenseState mixed(MatrixX<cplx> rho);

  std::size_t size() const noexcept { return n_; }
  bool is_pure() const noexcept { return std::holds_alternative<VectorX<cplx>>(rep_); }
  bool is_real() const noexcept { return real_; }
  const VectorX<cplx> &vector() const { return std::get<VectorX<cplx>>(rep_); }
  const MatrixX<cplx> &matrix() const { return std::get<MatrixX<cplx>>(rep_); }
  /// ρ, building |ψ⟩⟨ψ| for pure states.
  MatrixX<cplx> density() const;

 private:
  std::size_t n_ = 0;
  std::variant<VectorX<cplx>, MatrixX<cplx>> rep_;
  bool real_ = true;
};

enum class CwFamily { W, Dicke, Custom };

struct SupportEntry {
  BitVector z;
  double c = 0.0;
};

/// C Σ_z c_z |z⟩ with C a real Clifford and a sparse real support.
class CwState {
 public:
  CwState() = default;
  /// Throws SupportCapExceeded above `cap` entries (0 means the default 4n^2) and
  /// InvalidState unless Σ c^2 = 1 within 1e-12.
  CwState(RealCliffordTableau c, std::vector<SupportEntry> support, CwFamily family = CwFamily::Custom,
          std::size_t k = 0, std::size_t cap = 0);

  std::size_t size() const noexcept { return tableau_.size(); }
  const RealCliffordTableau &tableau() const noexcept { return tableau_; }
  /// Tableau of C†, cached.
  const RealCliffordTableau &inverse_tableau() const noexcept { return inverse_; }
  const std::vector<SupportEntry> &support() const noexcept { return support_; }
  CwFamily family() const noexcept { return family_; }
  /// Excitation number for W (1) and Dicke states.
  std::size_t excitations() const noexcept { return k_; }
  /// Coefficient of |z⟩ in the support state (0 if absent).
  double coefficient(const BitVector &z) const;
  /// Same support with a different Clifford.
  CwState with_clifford(RealCliffordTableau c) const;

 private:
  RealCliffordTableau tableau_;
  RealCliffordTableau inverse_;
  std::vector<SupportEntry> support_;
  std::unordered_map<BitVector, double> index_;
  CwFamily family_ = CwFamily::Custom;
  std::size_t k_ = 0;
};

using QuantumState = std::variant<DenseState, CwState>;

inline std::size_t default_support_cap(std::size_t n) { return 4 * n * n; }

CwState make_w_state(std::size_t n);
CwState make_dicke(std::size_t n, std::size_t k, std::size_t cap = 0);

std::size_t num_qubits(const QuantumState &s);
bool is_real(const QuantumState &s);
bool is_pure(const QuantumState &s);

/// ⟨P⟩ of the support state Σ c_z|z⟩ (no Clifford applied).
double support_expectation(const CwState &s, const PauliString &q);

double expectation(const DenseState &s, const PauliString &p);
double expectation(const CwState &s, const PauliString &p);
double expectation(const QuantumState &s, const PauliString &p);

double purity(const QuantumState &s);
/// tr(ρσ); converts structured states to dense.
double overlap(const QuantumState &a, const QuantumState &b);
/// tr(ρσ)/√(tr ρ² tr σ²).
double cosine_oracle(const QuantumState &a, const QuantumState &b);

/// S₂ in bits of the reduced state on the last n/2 qubits (the first n/2 are traced out).
double renyi2_half(const QuantumState &s);
/// Same quantity via tr[(ρ⊗ρ) SWAP_B] without forming the reduced state; n <= 10.
double renyi2_half_swap(const QuantumState &s);

DenseState to_dense(const CwState &s);
DenseState to_dense(const QuantumState &s);

/// State spec files: {"family": "w"|"dicke"|"custom", "n", "k"?, "support"?, "clifford"?}.
QuantumState state_from_json(const nlohmann::json &j);

}  // namespace rdipe
