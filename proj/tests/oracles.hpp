#pragma once

// Test-only brute-force oracles. These build everything from 2x2 matrices and Kronecker
// products and never call into the library's bit-level kernels.

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "rdipe/clifford.hpp"
#include "rdipe/rng.hpp"

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat letter_matrix(char c) {
  Mat m(2, 2);
  switch (c) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
  }
  return m;
}

/// Letters given with qubit 0 first; qubit q is bit q of the basis index.
inline Mat pauli(const std::string &letters, int sign = 1) {
  Mat m = Mat::Identity(1, 1);
  for (char c : letters) {
    Mat next = Eigen::kroneckerProduct(letter_matrix(c), m).eval();
    m = next;
  }
  return m * double(sign);
}

inline std::string letters_of_index(std::size_t n, std::uint64_t index) {
  static const char kL[] = {'I', 'X', 'Y', 'Z'};
  std::string s(n, 'I');
  for (std::size_t k = 0; k < n; ++k) {
    s[n - 1 - k] = kL[index & 3u];
    index >>= 2;
  }
  return s;
}

/// Single gate embedded into n qubits via Kronecker products.
inline Mat gate(std::size_t n, const rdipe::GateOp &op) {
  const double r = 1.0 / std::sqrt(2.0);
  auto embed1 = [&](const Mat &g, std::size_t q) {
    Mat m = Mat::Identity(1, 1);
    for (std::size_t k = 0; k < n; ++k) {
      Mat f = (k == q) ? g : Mat::Identity(2, 2);
      Mat next = Eigen::kroneckerProduct(f, m).eval();
      m = next;
    }
    return m;
  };
  Mat h(2, 2);
  h << r, r, r, -r;
  switch (op.gate) {
    case rdipe::Gate::H: return embed1(h, op.q0);
    case rdipe::Gate::X: return embed1(letter_matrix('X'), op.q0);
    case rdipe::Gate::Z: return embed1(letter_matrix('Z'), op.q0);
    case rdipe::Gate::CNOT: {
      Mat p0(2, 2), p1(2, 2);
      p0 << 1, 0, 0, 0;
      p1 << 0, 0, 0, 1;
      // |0⟩⟨0|_c ⊗ I + |1⟩⟨1|_c ⊗ X_t
      Mat a = Mat::Identity(1, 1), b = Mat::Identity(1, 1);
      for (std::size_t k = 0; k < n; ++k) {
        Mat fa = (k == op.q0) ? p0 : Mat::Identity(2, 2);
        Mat fb = (k == op.q0) ? p1 : (k == op.q1 ? letter_matrix('X') : Mat::Identity(2, 2));
        Mat na = Eigen::kroneckerProduct(fa, a).eval();
        Mat nb = Eigen::kroneckerProduct(fb, b).eval();
        a = na;
        b = nb;
      }
      return a + b;
    }
    case rdipe::Gate::CZ: {
      const std::size_t dim = std::size_t{1} << n;
      Mat m = Mat::Identity(dim, dim);
      for (std::size_t k = 0; k < dim; ++k) {
        if (((k >> op.q0) & 1) && ((k >> op.q1) & 1)) m(k, k) = -1;
      }
      return m;
    }
  }
  return {};
}

inline Mat unitary(std::size_t n, const std::vector<rdipe::GateOp> &ops) {
  const std::size_t dim = std::size_t{1} << n;
  Mat u = Mat::Identity(dim, dim);
  for (const auto &op : ops) u = gate(n, op) * u;
  return u;
}

/// Bell state |Φ_a⟩ = (I ⊗ P_a)|Φ_0⟩ on 2n qubits; first register is the high half.
inline Vec bell_state(const std::string &letters) {
  const std::size_t n = letters.size();
  const std::size_t dim = std::size_t{1} << n;
  Vec phi0 = Vec::Zero(dim * dim);
  for (std::size_t z = 0; z < dim; ++z) phi0(z * dim + z) = 1.0 / std::sqrt(double(dim));
  Mat op = Eigen::kroneckerProduct(Mat::Identity(dim, dim), pauli(letters)).eval();
  return op * phi0;
}

inline Mat swap_registers(std::size_t n) {
  const std::size_t dim = std::size_t{1} << n;
  Mat s = Mat::Zero(dim * dim, dim * dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) s(j * dim + i, i * dim + j) = 1;
  return s;
}

inline Vec random_state(std::size_t n, rdipe::Rng &rng, bool real) {
  const std::size_t dim = std::size_t{1} << n;
  Vec v(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    v(k) = real ? cplx(rdipe::normal(rng), 0) : cplx(rdipe::normal(rng), rdipe::normal(rng));
  }
  return v / v.norm();
}

inline Mat random_density(std::size_t n, std::size_t rank, rdipe::Rng &rng) {
  const std::size_t dim = std::size_t{1} << n;
  Mat g(dim, rank);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < rank; ++j) g(i, j) = cplx(rdipe::normal(rng), rdipe::normal(rng));
  Mat rho = g * g.adjoint();
  return rho / rho.trace().real();
}

}  // namespace oracle
