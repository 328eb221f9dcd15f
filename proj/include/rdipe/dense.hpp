#pragma once

// Dense kernels shared by the state oracles. Basis index convention: qubit q is bit q of the
// computational-basis index, so |z⟩ with z = Σ_q z_q 2^q.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "rdipe/clifford.hpp"
#include "rdipe/errors.hpp"
#include "rdipe/pauli.hpp"

namespace rdipe {

using cplx = std::complex<double>;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

inline std::size_t dim_of(std::size_t n) { return std::size_t{1} << n; }

/// Qubit count of a 2^n-dimensional space; throws if dim is not a power of two.
std::size_t qubits_of(std::size_t dim);

/// In-place unnormalized Walsh–Hadamard transform: v[z] <- Σ_k (-1)^{popcount(z&k)} v[k].
template <typename Derived>
void walsh_hadamard(Eigen::MatrixBase<Derived> &v) {
  const Eigen::Index size = v.size();
  for (Eigen::Index h = 1; h < size; h <<= 1) {
    for (Eigen::Index i = 0; i < size; i += h << 1) {
      for (Eigen::Index j = i; j < i + h; ++j) {
        const auto a = v(j);
        const auto b = v(j + h);
        v(j) = a + b;
        v(j + h) = a - b;
      }
    }
  }
}

/// i^{y_count} for a Pauli, the phase in P = i^{|x∧z|} X^x Z^z.
inline cplx y_phase(std::size_t y_count) {
  static const cplx kPowers[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return kPowers[y_count & 3u];
}

/// Bit masks (x, z) of a Pauli string as integers; requires n <= 62.
struct PauliMasks {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  std::size_t y_count = 0;
  bool negative = false;
};
PauliMasks masks_of(const PauliString &p);

/// P v for an n-qubit Pauli (sign included).
template <typename Scalar>
VectorX<cplx> apply_pauli(const PauliString &p, const VectorX<Scalar> &v) {
  const PauliMasks m = masks_of(p);
  const cplx phase = y_phase(m.y_count) * (m.negative ? -1.0 : 1.0);
  VectorX<cplx> out(v.size());
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    const auto kk = static_cast<std::uint64_t>(k);
    const double s = (std::popcount(m.z & kk) & 1) ? -1.0 : 1.0;
    out(static_cast<Eigen::Index>(kk ^ m.x)) = phase * s * cplx(v(k));
  }
  return out;
}

/// Dense 2^n × 2^n matrix of a Pauli string.
MatrixX<cplx> pauli_matrix(const PauliString &p);

/// Applies one real Clifford gate to a state vector (or to every column of a matrix).
template <typename Derived>
void apply_gate(Eigen::MatrixBase<Derived> &psi, const GateOp &op) {
  const std::uint64_t dim = static_cast<std::uint64_t>(psi.rows());
  const std::uint64_t m0 = std::uint64_t{1} << op.q0;
  const std::uint64_t m1 = std::uint64_t{1} << op.q1;
  using Scalar = typename Derived::Scalar;
  const Scalar inv_sqrt2 = Scalar(1.0 / std::sqrt(2.0));
  for (std::uint64_t k = 0; k < dim; ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    switch (op.gate) {
      case Gate::H:
        if (!(k & m0)) {
          const auto j = static_cast<Eigen::Index>(k | m0);
          auto a = psi.row(i).eval();
          auto b = psi.row(j).eval();
          psi.row(i) = (a + b) * inv_sqrt2;
          psi.row(j) = (a - b) * inv_sqrt2;
        }
        break;
      case Gate::X:
        if (!(k & m0)) psi.row(i).swap(psi.row(static_cast<Eigen::Index>(k | m0)));
        break;
      case Gate::Z:
        if (k & m0) psi.row(i) = -psi.row(i);
        break;
      case Gate::CNOT:
        if ((k & m0) && !(k & m1)) psi.row(i).swap(psi.row(static_cast<Eigen::Index>(k | m1)));
        break;
      case Gate::CZ:
        if ((k & m0) && (k & m1)) psi.row(i) = -psi.row(i);
        break;
    }
  }
}

/// Multiplies the |1⟩ component of `site` by e^{iθ} (θ = π/4 is the T gate).
void apply_phase(VectorX<cplx> &psi, std::size_t site, double theta);

/// Real orthogonal matrix of a gate word; the first gate in the list acts first.
MatrixX<double> dense_unitary(std::size_t n, const std::vector<GateOp> &gates);

/// Base-4 label index of the Pauli with masks (x, z), qubit 0 most significant.
class LabelIndexer {
 public:
  explicit LabelIndexer(std::size_t n);
  std::uint64_t operator()(std::uint64_t x, std::uint64_t z) const noexcept {
    return 2 * spread_[z] + spread_[x ^ z];
  }

 private:
  std::vector<std::uint64_t> spread_;
};

/// Expectations ⟨P_a⟩ for all 4^n labels, indexed by label index. O(n 4^n).
std::vector<double> pauli_expectation_table(const VectorX<cplx> &psi);
std::vector<double> pauli_expectation_table(const MatrixX<cplx> &rho);

/// Bell distribution q(a) = ⟨Φ_a|ρ⊗ρ|Φ_a⟩ for all labels.
std::vector<double> bell_table(const VectorX<cplx> &psi);
std::vector<double> bell_table(const MatrixX<cplx> &rho);

}  // namespace rdipe
