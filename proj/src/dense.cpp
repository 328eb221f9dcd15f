#include "rdipe/dense.hpp"

#include <bit>
#include <cmath>

namespace rdipe {

std::size_t qubits_of(std::size_t dim) {
  if (dim == 0 || (dim & (dim - 1)) != 0) fail(Errc::DimensionMismatch, "dimension is not a power of two");
  return static_cast<std::size_t>(std::countr_zero(dim));
}

PauliMasks masks_of(const PauliString &p) {
  if (p.size() > 62) fail(Errc::TooLargeForDense, "dense Pauli masks need n <= 62");
  PauliMasks m;
  m.x = p.xs().to_u64();
  m.z = p.zs().to_u64();
  m.y_count = static_cast<std::size_t>(std::popcount(m.x & m.z));
  m.negative = p.negative();
  return m;
}

MatrixX<cplx> pauli_matrix(const PauliString &p) {
  const std::size_t dim = dim_of(p.size());
  const PauliMasks m = masks_of(p);
  const cplx phase = y_phase(m.y_count) * (m.negative ? -1.0 : 1.0);
  MatrixX<cplx> out = MatrixX<cplx>::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::uint64_t k = 0; k < dim; ++k) {
    const double s = (std::popcount(m.z & k) & 1) ? -1.0 : 1.0;
    out(static_cast<Eigen::Index>(k ^ m.x), static_cast<Eigen::Index>(k)) = phase * s;
  }
  return out;
}

void apply_phase(VectorX<cplx> &psi, std::size_t site, double theta) {
  const std::uint64_t mask = std::uint64_t{1} << site;
  const cplx phase = std::polar(1.0, theta);
  for (Eigen::Index k = 0; k < psi.size(); ++k) {
    if (static_cast<std::uint64_t>(k) & mask) psi(k) *= phase;
  }
}

MatrixX<double> dense_unitary(std::size_t n, const std::vector<GateOp> &gates) {
  const auto dim = static_cast<Eigen::Index>(dim_of(n));
  MatrixX<double> u = MatrixX<double>::Identity(dim, dim);
  for (const auto &g : gates) apply_gate(u, g);
  return u;
}

LabelIndexer::LabelIndexer(std::size_t n) : spread_(dim_of(n), 0) {
  for (std::uint64_t v = 0; v < spread_.size(); ++v) {
    std::uint64_t s = 0;
    for (std::size_t q = 0; q < n; ++q) {
      if ((v >> q) & 1u) s |= std::uint64_t{1} << (2 * (n - 1 - q));
    }
    spread_[v] = s;
  }
}

namespace {

void check_table_size(std::size_t n) {
  if (n > 13) fail(Errc::TooLargeForDense, "full 4^n tables are capped at n <= 13");
}

}  // namespace

std::vector<double> pauli_expectation_table(const VectorX<cplx> &psi) {
  const std::size_t n = qubits_of(static_cast<std::size_t>(psi.size()));
  check_table_size(n);
  const std::uint64_t dim = dim_of(n);
  const LabelIndexer index(n);
  std::vector<double> table(dim * dim);
  VectorX<cplx> v(static_cast<Eigen::Index>(dim));
  for (std::uint64_t x = 0; x < dim; ++x) {
    for (std::uint64_t k = 0; k < dim; ++k) {
      v(static_cast<Eigen::Index>(k)) = std::conj(psi(static_cast<Eigen::Index>(k ^ x))) * psi(static_cast<Eigen::Index>(k));
    }
    walsh_hadamard(v);
    for (std::uint64_t z = 0; z < dim; ++z) {
      table[index(x, z)] = (y_phase(static_cast<std::size_t>(std::popcount(x & z))) * v(static_cast<Eigen::Index>(z))).real();
    }
  }
  return table;
}

std::vector<double> pauli_expectation_table(const MatrixX<cplx> &rho) {
  const std::size_t n = qubits_of(static_cast<std::size_t>(rho.rows()));
  check_table_size(n);
  const std::uint64_t dim = dim_of(n);
  const LabelIndexer index(n);
  std::vector<double> table(dim * dim);
  VectorX<cplx> v(static_cast<Eigen::Index>(dim));
  for (std::uint64_t x = 0; x < dim; ++x) {
    for (std::uint64_t k = 0; k < dim; ++k) {
      v(static_cast<Eigen::Index>(k)) = rho(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k ^ x));
    }
    walsh_hadamard(v);
    for (std::uint64_t z = 0; z < dim; ++z) {
      table[index(x, z)] = (y_phase(static_cast<std::size_t>(std::popcount(x & z))) * v(static_cast<Eigen::Index>(z))).real();
    }
  }
  return table;
}

std::vector<double> bell_table(const VectorX<cplx> &psi) {
  const std::size_t n = qubits_of(static_cast<std::size_t>(psi.size()));
  check_table_size(n);
  const std::uint64_t dim = dim_of(n);
  const LabelIndexer index(n);
  std::vector<double> table(dim * dim);
  VectorX<cplx> v(static_cast<Eigen::Index>(dim));
  const double scale = 1.0 / static_cast<double>(dim);
  for (std::uint64_t x = 0; x < dim; ++x) {
    for (std::uint64_t k = 0; k < dim; ++k) {
      v(static_cast<Eigen::Index>(k)) = psi(static_cast<Eigen::Index>(k ^ x)) * psi(static_cast<Eigen::Index>(k));
    }
    walsh_hadamard(v);
    for (std::uint64_t z = 0; z < dim; ++z) table[index(x, z)] = std::norm(v(static_cast<Eigen::Index>(z))) * scale;
  }
  return table;
}

std::vector<double> bell_table(const MatrixX<cplx> &rho) {
  const std::size_t n = qubits_of(static_cast<std::size_t>(rho.rows()));
  if (n > 8) fail(Errc::TooLargeForDense, "mixed-state Bell tables are capped at n <= 8");
  const std::uint64_t dim = dim_of(n);
  const LabelIndexer index(n);
  std::vector<double> table(dim * dim);
  VectorX<cplx> g(static_cast<Eigen::Index>(dim));
  const double scale = 1.0 / static_cast<double>(dim);
  // q(x,z) = (-1)^{|x∧z|} 2^{-n} Σ_d (-1)^{z·d} Σ_a ρ[a, a⊕d⊕x] ρ[a⊕x, a⊕d]
  for (std::uint64_t x = 0; x < dim; ++x) {
    for (std::uint64_t d = 0; d < dim; ++d) {
      cplx acc = 0;
      for (std::uint64_t a = 0; a < dim; ++a) {
        acc += rho(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a ^ d ^ x)) *
               rho(static_cast<Eigen::Index>(a ^ x), static_cast<Eigen::Index>(a ^ d));
      }
      g(static_cast<Eigen::Index>(d)) = acc;
    }
    walsh_hadamard(g);
    for (std::uint64_t z = 0; z < dim; ++z) {
      const double sign = (std::popcount(x & z) & 1) ? -1.0 : 1.0;
      table[index(x, z)] = sign * g(static_cast<Eigen::Index>(z)).real() * scale;
    }
  }
  return table;
}

}  // namespace rdipe
