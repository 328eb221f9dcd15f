#include "rdipe/sampling.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "rdipe/dense.hpp"
#include "rdipe/errors.hpp"

namespace rdipe {

namespace {

constexpr std::size_t kTableQubitsPure = 10;
constexpr std::size_t kTableQubitsMixed = 8;

std::vector<double> cumulative(const std::vector<double> &w) {
  std::vector<double> c(w.size());
  std::partial_sum(w.begin(), w.end(), c.begin());
  return c;
}

std::size_t draw(const std::vector<double> &cdf, Rng &rng) {
  const double u = rng.uniform() * cdf.back();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

double log_choose(std::size_t n, std::size_t k) {
  return std::lgamma(double(n) + 1) - std::lgamma(double(k) + 1) - std::lgamma(double(n - k) + 1);
}

/// First `count` entries of `sites` become a uniform random subset (partial Fisher–Yates).
void random_subset(std::vector<std::size_t> &sites, std::size_t count, Rng &rng) {
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(sites.size() - i));
    std::swap(sites[i], sites[j]);
  }
}

PauliString from_masks(std::size_t n, std::uint64_t x, std::uint64_t z) {
  return PauliString(BitVector::from_u64(n, x), BitVector::from_u64(n, z));
}

/// Orders bit vectors by their most significant differing bit.
bool high_first_less(const BitVector &a, const BitVector &b) {
  const auto wa = a.words();
  const auto wb = b.words();
  for (std::size_t w = wa.size(); w-- > 0;) {
    if (wa[w] != wb[w]) return wa[w] < wb[w];
  }
  return false;
}

std::ptrdiff_t highest_difference(const BitVector &a, const BitVector &b) {
  const auto wa = a.words();
  const auto wb = b.words();
  for (std::size_t w = wa.size(); w-- > 0;) {
    const std::uint64_t d = wa[w] ^ wb[w];
    if (d) return static_cast<std::ptrdiff_t>(64 * w + 63 - std::countl_zero(d));
  }
  return -1;
}

/// Draws b ~ p of a sparse real support state Σ c_z|z⟩.
///
/// x is the XOR of two independent draws from c², which has exactly the x-marginal
/// Σ_k c_k² c_{k⊕x}². Given x, z follows |Σ_k v_k (-1)^{z·k}|² with v_k = c_k c_{k⊕x}; its bits
/// are drawn in turn, where the marginal of z_0..z_j sums squared partial transforms over
/// groups of k that agree on bits above j.
PauliString sparse_sample(const CwState &s, const std::vector<double> &coef_cdf, Rng &rng) {
  const std::size_t n = s.size();
  const auto &sup = s.support();
  const BitVector x = sup[draw(coef_cdf, rng)].z ^ sup[draw(coef_cdf, rng)].z;

  struct Term {
    BitVector k;
    double v;
  };
  std::vector<Term> terms;
  for (const auto &e : sup) {
    const double partner = s.coefficient(e.z ^ x);
    if (partner != 0.0) terms.push_back({e.z, e.c * partner});
  }
  std::sort(terms.begin(), terms.end(), [](const Term &a, const Term &b) { return high_first_less(a.k, b.k); });
  std::vector<std::ptrdiff_t> split(terms.size(), -1);
  for (std::size_t i = 0; i + 1 < terms.size(); ++i) split[i] = highest_difference(terms[i].k, terms[i + 1].k);

  BitVector z(n);
  for (std::size_t j = 0; j < n; ++j) {
    double m0 = 0, m1 = 0, g0 = 0, g1 = 0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      g0 += terms[i].v;
      g1 += terms[i].k[j] ? -terms[i].v : terms[i].v;
      if (i + 1 == terms.size() || split[i] > static_cast<std::ptrdiff_t>(j)) {
        m0 += g0 * g0;
        m1 += g1 * g1;
        g0 = g1 = 0;
      }
    }
    if (rng.uniform() * (m0 + m1) >= m0 && m1 > 0) {
      z.set(j, true);
      for (auto &t : terms) {
        if (t.k[j]) t.v = -t.v;
      }
    }
  }
  return PauliString(x, z);
}

}  // namespace

std::vector<PauliClass> symmetric_spectrum(const CwState &s) {
  if (s.family() == CwFamily::Custom) fail(Errc::InvalidArgument, "class spectrum needs a W or Dicke support");
  const std::size_t n = s.size();
  const std::size_t k = s.excitations();
  // ⟨z'|P|z⟩ ≠ 0 needs |x| = |z ⊕ z'| <= 2k when both have weight k.
  const std::size_t max_flip = std::min(n, 2 * k);
  std::vector<PauliClass> out;
  const double log_n = std::lgamma(double(n) + 1);
  for (std::size_t nx = 0; nx <= max_flip; ++nx) {
    for (std::size_t ny = 0; nx + ny <= max_flip; ++ny) {
      for (std::size_t nz = 0; nx + ny + nz <= n; ++nz) {
        PauliString p(n);
        for (std::size_t q = 0; q < nx; ++q) p.set_letter(q, 'X');
        for (std::size_t q = nx; q < nx + ny; ++q) p.set_letter(q, 'Y');
        for (std::size_t q = nx + ny; q < nx + ny + nz; ++q) p.set_letter(q, 'Z');
        const double e = support_expectation(s, p);
        if (std::abs(e) < 1e-14) continue;
        PauliClass c{nx, ny, nz, e, 0.0, 0.0};
        const std::size_t ni = n - nx - ny - nz;
        c.log_multiplicity = log_n - std::lgamma(double(nx) + 1) - std::lgamma(double(ny) + 1) -
                             std::lgamma(double(nz) + 1) - std::lgamma(double(ni) + 1);
        c.probability = std::exp(c.log_multiplicity + 2.0 * std::log(std::abs(e)) - double(n) * std::log(2.0));
        out.push_back(c);
      }
    }
  }
  return out;
}

PauliString w_pauli_sample(std::size_t n, Rng &rng) {
  if (n < 2) fail(Errc::InvalidArgument, "w_pauli_sample needs n >= 2");
  std::vector<std::size_t> sites(n);
  std::iota(sites.begin(), sites.end(), 0);
  PauliString p(n);
  if (rng.uniform() * double(n) < 1.0) {
    // Z/I strings: z Z's with weight C(n,z)(1 - 2z/n)².
    std::vector<double> w(n + 1);
    for (std::size_t z = 0; z <= n; ++z) {
      const double e = 1.0 - 2.0 * double(z) / double(n);
      w[z] = e == 0.0 ? 0.0 : std::exp(log_choose(n, z) + 2.0 * std::log(std::abs(e)));
    }
    const std::size_t z = draw(cumulative(w), rng);
    random_subset(sites, z, rng);
    for (std::size_t i = 0; i < z; ++i) p.set_letter(sites[i], 'Z');
    return p;
  }
  const char letter = rng.bernoulli(0.5) ? 'X' : 'Y';
  random_subset(sites, 2, rng);
  for (std::size_t i = 2; i < n; ++i) {
    if (rng.bernoulli(0.5)) p.set_letter(sites[i], 'Z');
  }
  p.set_letter(sites[0], letter);
  p.set_letter(sites[1], letter);
  return p;
}

struct BellSampler::Impl {
  enum class Kind { Table, DensePure, W, Classes, Sparse } kind = Kind::Table;
  std::vector<double> cdf;
  VectorX<cplx> psi;
  // Structured states.
  RealCliffordTableau clifford;
  std::vector<PauliClass> classes;
  std::optional<CwState> support_state;
};

BellSampler::~BellSampler() = default;
BellSampler::BellSampler(BellSampler &&) noexcept = default;
BellSampler &BellSampler::operator=(BellSampler &&) noexcept = default;

BellSampler::BellSampler(const QuantumState &s) : n_(num_qubits(s)), impl_(std::make_unique<Impl>()) {
  Impl &im = *impl_;
  if (const auto *d = std::get_if<DenseState>(&s)) {
    if (d->is_pure() && n_ > kTableQubitsPure) {
      im.kind = Impl::Kind::DensePure;
      im.psi = d->vector();
      std::vector<double> w(static_cast<std::size_t>(im.psi.size()));
      for (std::size_t k = 0; k < w.size(); ++k) w[k] = std::norm(im.psi(static_cast<Eigen::Index>(k)));
      im.cdf = cumulative(w);
      return;
    }
    if (!d->is_pure() && n_ > kTableQubitsMixed) {
      fail(Errc::TooLargeForDense, "mixed-state Bell sampling needs n <= 8");
    }
    im.kind = Impl::Kind::Table;
    im.cdf = cumulative(d->is_pure() ? bell_table(d->vector()) : bell_table(d->matrix()));
    return;
  }
  const auto &cw = std::get<CwState>(s);
  im.clifford = cw.tableau();
  if (cw.family() == CwFamily::W && n_ >= 2) {
    im.kind = Impl::Kind::W;
  } else if (cw.family() != CwFamily::Custom && n_ >= 2) {
    im.kind = Impl::Kind::Classes;
    im.classes = symmetric_spectrum(cw);
    std::vector<double> w;
    for (const auto &c : im.classes) w.push_back(c.probability);
    im.cdf = cumulative(w);
  } else {
    im.kind = Impl::Kind::Sparse;
    im.support_state = cw;
    std::vector<double> w;
    for (const auto &e : cw.support()) w.push_back(e.c * e.c);
    im.cdf = cumulative(w);
  }
}

PauliString BellSampler::sample(Rng &rng) const {
  const Impl &im = *impl_;
  switch (im.kind) {
    case Impl::Kind::Table:
      return PauliString::from_index(n_, draw(im.cdf, rng));
    case Impl::Kind::DensePure: {
      const std::uint64_t x = draw(im.cdf, rng) ^ draw(im.cdf, rng);
      const auto dim = im.psi.size();
      VectorX<cplx> v(dim);
      for (Eigen::Index k = 0; k < dim; ++k) v(k) = im.psi(k ^ static_cast<Eigen::Index>(x)) * im.psi(k);
      walsh_hadamard(v);
      std::vector<double> w(static_cast<std::size_t>(dim));
      for (Eigen::Index k = 0; k < dim; ++k) w[static_cast<std::size_t>(k)] = std::norm(v(k));
      return from_masks(n_, x, draw(cumulative(w), rng));
    }
    case Impl::Kind::W:
      return im.clifford.conjugate(w_pauli_sample(n_, rng)).unsigned_copy();
    case Impl::Kind::Classes: {
      const PauliClass &c = im.classes[draw(im.cdf, rng)];
      std::vector<char> letters(n_, 'I');
      std::fill_n(letters.begin(), c.nx, 'X');
      std::fill_n(letters.begin() + c.nx, c.ny, 'Y');
      std::fill_n(letters.begin() + c.nx + c.ny, c.nz, 'Z');
      shuffle(std::span<char>(letters), rng);
      PauliString b(n_);
      for (std::size_t q = 0; q < n_; ++q) b.set_letter(q, letters[q]);
      return im.clifford.conjugate(b).unsigned_copy();
    }
    case Impl::Kind::Sparse:
      return im.clifford.conjugate(sparse_sample(*im.support_state, im.cdf, rng)).unsigned_copy();
  }
  return PauliString(n_);
}

PauliString bell_sample(const QuantumState &s, Rng &rng) { return BellSampler(s).sample(rng); }

double shots_from_expectation(double e, std::uint64_t shots, Rng &rng) {
  if (shots == 0) fail(Errc::InvalidArgument, "shots must be positive");
  const double p = std::clamp((1.0 + e) / 2.0, 0.0, 1.0);
  const std::uint64_t plus = binomial(shots, p, rng);
  return (2.0 * double(plus) - double(shots)) / double(shots);
}

double pauli_shots(const QuantumState &s, const PauliString &p, std::uint64_t shots, Rng &rng) {
  return shots_from_expectation(expectation(s, p), shots, rng);
}

double estimate_purity(const BellSampler &sampler, double exact_purity, std::uint64_t shots, Rng &rng) {
  if (shots == 0) fail(Errc::InvalidArgument, "shots must be positive");
  if (shots > kExplicitPurityShots) return shots_from_expectation(exact_purity, shots, rng);
  std::int64_t acc = 0;
  for (std::uint64_t i = 0; i < shots; ++i) acc += swap_symmetry_sign(sampler.sample(rng));
  return double(acc) / double(shots);
}

double estimate_purity(const QuantumState &s, std::uint64_t shots, Rng &rng) {
  return estimate_purity(BellSampler(s), purity(s), shots, rng);
}

}  // namespace rdipe
