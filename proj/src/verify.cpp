#include "rdipe/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <tuple>

#include <Eigen/QR>
#include <unsupported/Eigen/KroneckerProduct>

#include "rdipe/dense.hpp"
#include "rdipe/distributions.hpp"
#include "rdipe/errors.hpp"
#include "rdipe/noise.hpp"
#include "rdipe/sampling.hpp"

namespace rdipe {

namespace {

using json = nlohmann::json;
using Index = Eigen::Index;

constexpr std::size_t kMaxCommutantQubits = 5;
constexpr std::size_t kMaxEntangleQubits = 12;
constexpr std::size_t kMaxTableQubits = 8;
// |⟨P⟩| above this counts as a stabilizer.
constexpr double kStabilizerTol = 1e-9;
// Expectations within this of a counting threshold count as equal to it (not above).
constexpr double kCountTol = 1e-12;

double hs(const RealMatrix &a, const RealMatrix &b) { return a.cwiseProduct(b).sum(); }

VectorX<double> real_vector(const DenseState &s) {
  if (!s.is_pure() || !s.is_real()) fail(Errc::NotReal, "needs a real pure state");
  const VectorX<cplx> &v = s.vector();
  Index best = 0;
  v.cwiseAbs().maxCoeff(&best);
  const cplx phase = std::abs(v(best)) > 0 ? std::conj(v(best)) / std::abs(v(best)) : cplx(1);
  return (v * phase).real();
}

double mean_of(const std::vector<double> &v) {
  double s = 0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / double(v.size());
}

double standard_error(const std::vector<double> &v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / double(v.size() - 1) / double(v.size()));
}

MatrixX<cplx> random_density(std::size_t n, std::size_t rank, Rng &rng) {
  const auto d = static_cast<Index>(dim_of(n));
  MatrixX<cplx> g(d, static_cast<Index>(rank));
  for (Index i = 0; i < g.rows(); ++i)
    for (Index j = 0; j < g.cols(); ++j) g(i, j) = cplx(normal(rng), normal(rng));
  MatrixX<cplx> rho = g * g.adjoint();
  rho /= rho.trace().real();
  return rho;
}

VectorX<cplx> random_real_pure(std::size_t n, Rng &rng) {
  VectorX<cplx> v(static_cast<Index>(dim_of(n)));
  for (Index k = 0; k < v.size(); ++k) v(k) = normal(rng);
  return v / v.norm();
}

// ⟨W_n|P|W_n⟩ from the letter counts alone.
double w_closed_form(const PauliString &p) {
  const WeightCounts c = weight_counts(p);
  const double n = double(p.size());
  if (c.x == 0 && c.y == 0) return 1.0 - 2.0 * double(c.z) / n;
  if ((c.x == 2 && c.y == 0) || (c.x == 0 && c.y == 2)) return 2.0 / n;
  return 0.0;
}

std::vector<double> dense_table(const DenseState &s) {
  return s.is_pure() ? pauli_expectation_table(s.vector()) : pauli_expectation_table(s.matrix());
}

json check_entry(const std::string &name, bool passed, json details) {
  return {{"name", name}, {"passed", passed}, {"details", std::move(details)}};
}

}  // namespace

RealMatrix swap_full(std::size_t n) {
  const auto d = static_cast<Index>(dim_of(n));
  RealMatrix m = RealMatrix::Zero(d * d, d * d);
  for (Index i1 = 0; i1 < d; ++i1)
    for (Index i2 = 0; i2 < d; ++i2) m(i2 * d + i1, i1 * d + i2) = 1.0;
  return m;
}

RealMatrix swap_half(std::size_t n) {
  const auto d = static_cast<Index>(dim_of(n));
  const Index low = static_cast<Index>(dim_of(n / 2)) - 1;
  RealMatrix m = RealMatrix::Zero(d * d, d * d);
  for (Index i1 = 0; i1 < d; ++i1) {
    for (Index i2 = 0; i2 < d; ++i2) {
      const Index j1 = (i1 & ~low) | (i2 & low);
      const Index j2 = (i2 & ~low) | (i1 & low);
      m(j1 * d + j2, i1 * d + i2) = 1.0;
    }
  }
  return m;
}

VectorX<double> phi0(std::size_t n) {
  const auto d = static_cast<Index>(dim_of(n));
  VectorX<double> v = VectorX<double>::Zero(d * d);
  for (Index x = 0; x < d; ++x) v(x * d + x) = 1.0 / std::sqrt(double(d));
  return v;
}

Eigen::Matrix3d CommutantBasis::gram() const {
  const RealMatrix *ops[3] = {&sym, &asym, &bbar};
  Eigen::Matrix3d g;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g(i, j) = hs(*ops[i], *ops[j]);
  return g;
}

MatrixX<cplx> CommutantBasis::project(const MatrixX<cplx> &x) const {
  MatrixX<cplx> out = MatrixX<cplx>::Zero(x.rows(), x.cols());
  for (const RealMatrix *b : {&sym, &asym, &bbar}) {
    const cplx c = (b->cast<cplx>().cwiseProduct(x)).sum();
    out += c * b->cast<cplx>();
  }
  return out;
}

CommutantBasis commutant_basis(std::size_t n) {
  if (n < 1 || n > kMaxCommutantQubits) fail(Errc::TooLarge, "commutant basis needs 1 <= n <= 5");
  const std::size_t d = dim_of(n);
  const auto dd = static_cast<Index>(d * d);
  CommutantBasis b;
  b.n = n;
  b.d_sym = d * (d + 1) / 2;
  b.d_asym = d * (d - 1) / 2;
  const RealMatrix sw = swap_full(n);
  const RealMatrix id = RealMatrix::Identity(dd, dd);
  const RealMatrix p_sym = (id + sw) / 2.0;
  const double ds = double(b.d_sym);
  b.sym = p_sym / std::sqrt(ds);
  b.asym = (id - sw) / (2.0 * std::sqrt(double(b.d_asym)));
  const VectorX<double> phi = phi0(n);
  b.bbar = (phi * phi.transpose() - p_sym / ds) / std::sqrt(1.0 - 1.0 / ds);
  return b;
}

RealMatrix random_orthogonal(std::size_t dim, Rng &rng) {
  const auto d = static_cast<Index>(dim);
  RealMatrix g(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) g(i, j) = normal(rng);
  Eigen::HouseholderQR<RealMatrix> qr(g);
  RealMatrix q = qr.householderQ();
  const RealMatrix &r = qr.matrixQR();
  for (Index j = 0; j < d; ++j) {
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  }
  return q;
}

json CommutantReport::to_json() const {
  return {{"n", n}, {"gram_error", gram_error}, {"max_commutator", max_commutator}, {"trials", trials},
          {"passed", passed()}};
}

CommutantReport commutant_check(std::size_t n, std::size_t trials, Rng &rng) {
  const CommutantBasis b = commutant_basis(n);
  CommutantReport rep;
  rep.n = n;
  rep.trials = trials;
  rep.gram_error = (b.gram() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  for (std::size_t t = 0; t < trials; ++t) {
    const RealMatrix o = random_orthogonal(dim_of(n), rng);
    const RealMatrix oo = Eigen::kroneckerProduct(o, o).eval();
    for (const RealMatrix *m : {&b.sym, &b.asym, &b.bbar}) {
      rep.max_commutator = std::max(rep.max_commutator, (*m * oo - oo * *m).norm());
    }
  }
  return rep;
}

json TwirlReport::to_json() const {
  return {{"n", n},
          {"group_order", group_order},
          {"max_deviation", max_deviation},
          {"fixed_point_error", fixed_point_error},
          {"kernel_error", kernel_error},
          {"w_constants_error", w_constants_error},
          {"passed", passed()}};
}

TwirlReport twirl_check(std::size_t n, std::size_t samples, Rng &rng) {
  if (n < 1 || n > 2) fail(Errc::TooLarge, "twirl_check enumerates rCl(n) only for n in {1, 2}");
  const CommutantBasis basis = commutant_basis(n);
  std::vector<RealMatrix> reps;
  for (const auto &g : enumerate_group(n)) {
    const RealMatrix u = dense_unitary(n, *g.gate_log());
    reps.push_back(Eigen::kroneckerProduct(u, u).eval());
  }
  auto twirl = [&](const MatrixX<cplx> &x) {
    MatrixX<cplx> acc = MatrixX<cplx>::Zero(x.rows(), x.cols());
    for (const auto &u2 : reps) acc += u2.cast<cplx>() * x * u2.transpose().cast<cplx>();
    return MatrixX<cplx>(acc / double(reps.size()));
  };
  const auto dd = static_cast<Index>(dim_of(2 * n));
  auto random_hermitian = [&] {
    MatrixX<cplx> a(dd, dd);
    for (Index i = 0; i < dd; ++i)
      for (Index j = 0; j < dd; ++j) a(i, j) = cplx(normal(rng), normal(rng));
    return MatrixX<cplx>(a + a.adjoint());
  };

  TwirlReport rep;
  rep.n = n;
  rep.group_order = reps.size();
  for (std::size_t s = 0; s < samples; ++s) {
    const MatrixX<cplx> x = random_hermitian();
    const MatrixX<cplx> proj = basis.project(x);
    rep.max_deviation = std::max(rep.max_deviation, (twirl(x) - proj).norm());

    const MatrixX<cplx> fixed =
        (normal(rng) * basis.sym + normal(rng) * basis.asym + normal(rng) * basis.bbar).cast<cplx>();
    rep.fixed_point_error = std::max(rep.fixed_point_error, (twirl(fixed) - fixed).norm());

    const MatrixX<cplx> kernel = x - proj;
    rep.kernel_error = std::max(rep.kernel_error, twirl(kernel).norm());
  }

  if (n >= 2) {
    const VectorX<double> w = real_vector(to_dense(make_w_state(n)));
    const VectorX<double> ww = Eigen::kroneckerProduct(w, w).eval();
    const TwirlConstants c = twirl_constants(n);
    const VectorX<double> phi = phi0(n);
    const RealMatrix expect = c.a * basis.sym * std::sqrt(double(basis.d_sym)) + c.b * phi * phi.transpose();
    const MatrixX<cplx> got = twirl((ww * ww.transpose()).cast<cplx>());
    rep.w_constants_error = (got - expect.cast<cplx>()).norm();
  }
  return rep;
}

TwirlConstants twirl_constants(std::size_t n) {
  const double d = double(dim_of(n));
  const double d_sym = d * (d + 1) / 2;
  TwirlConstants c;
  c.a = (1.0 - 1.0 / d) / (d_sym - 1.0);
  c.b = 1.0 / d - c.a;
  c.k = d * d * c.a;
  c.kprime = d * c.b;
  c.predicted_purity = c.a * std::exp2(1.5 * double(n)) + c.b;
  c.predicted_s2 = -std::log2(c.predicted_purity);
  return c;
}

TwirlConstants twirl_constants_dense(const QuantumState &w) {
  const std::size_t n = num_qubits(w);
  const CommutantBasis basis = commutant_basis(n);
  const VectorX<double> psi = real_vector(to_dense(w));
  const VectorX<double> v = Eigen::kroneckerProduct(psi, psi).eval();
  const double ds = double(basis.d_sym);
  const double c_sym = v.dot(basis.sym * v);
  const double c_bbar = v.dot(basis.bbar * v);
  TwirlConstants c;
  c.b = c_bbar / std::sqrt(1.0 - 1.0 / ds);
  c.a = c_sym / std::sqrt(ds) - c.b / ds;
  const double d = double(dim_of(n));
  c.k = d * d * c.a;
  c.kprime = d * c.b;
  c.predicted_purity = c.a * std::exp2(1.5 * double(n)) + c.b;
  c.predicted_s2 = -std::log2(c.predicted_purity);
  return c;
}

bool SwapTraceReport::passed() const {
  return std::abs(tr_swap_psym - expected) < 1e-9 && std::abs(tr_swap_phi0 - 1.0) < 1e-12 &&
         std::abs(asym_overlap) < 1e-12;
}

json SwapTraceReport::to_json() const {
  return {{"n", n},
          {"tr_swap_psym", tr_swap_psym},
          {"expected", expected},
          {"tr_swap_phi0", tr_swap_phi0},
          {"asym_overlap", asym_overlap},
          {"passed", passed()}};
}

SwapTraceReport swap_trace_check(std::size_t n) {
  if (n % 2) fail(Errc::OddN, "half-system swap needs even n");
  const CommutantBasis basis = commutant_basis(n);
  const RealMatrix sh = swap_half(n);
  const RealMatrix p_sym = basis.sym * std::sqrt(double(basis.d_sym));
  SwapTraceReport r;
  r.n = n;
  r.tr_swap_psym = (sh * p_sym).trace();
  r.expected = std::exp2(1.5 * double(n));
  const VectorX<double> phi = phi0(n);
  r.tr_swap_phi0 = phi.dot(sh * phi);
  const VectorX<double> w = real_vector(to_dense(make_w_state(n)));
  const VectorX<double> ww = Eigen::kroneckerProduct(w, w).eval();
  r.asym_overlap = ww.dot(basis.asym * ww);
  return r;
}

bool EntanglementPoint::purity_consistent() const {
  return std::abs(mean_purity - constants.predicted_purity) <= 3 * se_purity + 1e-12;
}

bool EntanglementPoint::bound_consistent() const {
  return mean_s2 >= constants.predicted_s2 - 3 * se_s2 - 1e-12;
}

json EntanglementPoint::to_json() const {
  return {{"n", n},
          {"samples", samples},
          {"mean_s2", mean_s2},
          {"se_s2", se_s2},
          {"mean_purity", mean_purity},
          {"se_purity", se_purity},
          {"k", constants.k},
          {"kprime", constants.kprime},
          {"predicted_purity", constants.predicted_purity},
          {"predicted_s2", constants.predicted_s2},
          {"purity_consistent", purity_consistent()},
          {"bound_consistent", bound_consistent()}};
}

EntanglementPoint entanglement_average_check(std::size_t n, std::size_t samples, std::size_t depth, Rng &rng) {
  if (n % 2) fail(Errc::OddN, "entanglement check needs even n");
  if (n < 2 || n > kMaxEntangleQubits) fail(Errc::TooLarge, "entanglement check needs 2 <= n <= 12");
  const CwState w = make_w_state(n);
  std::vector<double> s2(samples), pur(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    Rng r = rng.substream(i);
    const QuantumState s = w.with_clifford(random_real_clifford(n, depth, r));
    s2[i] = renyi2_half(s);
    pur[i] = std::exp2(-s2[i]);
  }
  EntanglementPoint p;
  p.n = n;
  p.samples = samples;
  p.mean_s2 = mean_of(s2);
  p.se_s2 = standard_error(s2);
  p.mean_purity = mean_of(pur);
  p.se_purity = standard_error(pur);
  p.constants = twirl_constants(n);
  return p;
}

LinearFit linear_fit(const std::vector<double> &x, const std::vector<double> &y) {
  if (x.size() != y.size() || x.size() < 2) fail(Errc::LengthMismatch, "linear fit needs matching lengths >= 2");
  const double mx = mean_of(x), my = mean_of(y);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0 ? sxy * sxy / (sxx * syy) : 1.0;
  return f;
}

bool EntanglementScaling::passed() const {
  if (fit.slope <= 0 || fit.r2 <= 0.95) return false;
  return std::all_of(points.begin(), points.end(),
                     [](const EntanglementPoint &p) { return p.purity_consistent() && p.bound_consistent(); });
}

json EntanglementScaling::to_json() const {
  json pts = json::array();
  for (const auto &p : points) pts.push_back(p.to_json());
  return {{"points", pts},
          {"slope", fit.slope},
          {"intercept", fit.intercept},
          {"r2", fit.r2},
          {"passed", passed()}};
}

EntanglementScaling entanglement_scaling(const std::vector<std::size_t> &ns, std::size_t samples, Rng &rng) {
  EntanglementScaling out;
  std::vector<double> x, y;
  for (std::size_t n : ns) {
    Rng r = rng.substream(n);
    out.points.push_back(entanglement_average_check(n, samples, default_clifford_depth(n), r));
    x.push_back(double(n));
    y.push_back(out.points.back().mean_s2);
  }
  if (x.size() >= 2) out.fit = linear_fit(x, y);
  return out;
}

std::uint64_t count_high_paulis(const QuantumState &s, double threshold) {
  if (threshold >= 1.0) return 0;
  if (const auto *cw = std::get_if<CwState>(&s); cw && cw->family() != CwFamily::Custom) {
    if (cw->size() > 32) fail(Errc::TooLarge, "class counting needs n <= 32");
    // Cliffords permute Pauli labels up to sign, so the support state's classes suffice.
    long double total = 0;
    for (const auto &c : symmetric_spectrum(*cw)) {
      if (std::abs(c.expectation) > threshold + kCountTol) total += std::round(std::exp(static_cast<long double>(c.log_multiplicity)));
    }
    return static_cast<std::uint64_t>(std::min<long double>(total, 18446744073709551615.0L));
  }
  if (num_qubits(s) > kMaxTableQubits) fail(Errc::TooLarge, "dense counting needs n <= 8");
  std::uint64_t count = 0;
  for (double e : dense_table(to_dense(s))) count += std::abs(e) > threshold + kCountTol;
  return count;
}

std::uint64_t counting_bound(std::size_t n) {
  std::uint64_t sum = 0, binom = 1;  // C(n, k)
  for (std::size_t k = 0; k <= n / 8; ++k) {
    sum += binom;
    binom = binom * (n - k) / (k + 1);
  }
  return 2 * sum;
}

bool SeparationReport::passed() const {
  if (!premise) return true;
  return witness_found && trace_distance + 1e-9 >= witness_gap;
}

json SeparationReport::to_json() const {
  return {{"n", n},
          {"t", t},
          {"stabilizers", stabilizers},
          {"cw_high", cw_high},
          {"threshold_count", std::exp2(0.75 * double(n))},
          {"applicable", applicable()},
          {"witness_found", witness_found},
          {"witness", witness},
          {"witness_gap", witness_gap},
          {"trace_distance_lower_bound", witness_found ? 0.25 : 0.0},
          {"trace_distance", trace_distance},
          {"passed", passed()}};
}

SeparationReport separation_check(const QuantumState &rho, const DenseState &rho_prime, std::size_t t) {
  const std::size_t n = num_qubits(rho);
  if (rho_prime.size() != n) fail(Errc::DimensionMismatch, "states differ in qubit count");
  if (n > kMaxTableQubits) fail(Errc::TooLarge, "separation check needs n <= 8");
  const DenseState a = to_dense(rho);
  const std::vector<double> ea = dense_table(a), eb = dense_table(rho_prime);
  SeparationReport r;
  r.n = n;
  r.t = t;
  std::size_t best = 0;
  for (std::size_t i = 0; i < ea.size(); ++i) {
    r.stabilizers += std::abs(eb[i]) > 1.0 - kStabilizerTol;
    r.cw_high += std::abs(ea[i]) > 0.75 + kCountTol;
    const double gap = std::abs(ea[i] - eb[i]);
    if (gap > r.witness_gap) {
      r.witness_gap = gap;
      best = i;
    }
  }
  const double limit = std::exp2(0.75 * double(n));
  r.premise = double(r.stabilizers) >= limit && double(r.cw_high) < limit;
  r.witness_found = r.premise && r.witness_gap >= 0.25 - 1e-12;
  if (r.witness_found) r.witness = PauliString::from_index(n, best).str();
  r.trace_distance = rdipe::trace_distance(a, rho_prime);
  return r;
}

DenseState t_doped_state(std::size_t n, std::size_t t, Rng &rng) {
  if (n > kMaxDenseVectorQubits) fail(Errc::TooLarge, "doped states are built densely");
  const RealCliffordTableau c = random_real_clifford(n, default_clifford_depth(n), rng, true);
  const auto &gates = *c.gate_log();
  // Phase gate j goes in front of gate position pos[j] (gates.size() means at the end).
  std::vector<std::pair<std::size_t, std::size_t>> phases;
  for (std::size_t j = 0; j < t; ++j) {
    phases.emplace_back(rng.below(gates.size() + 1), rng.below(n));
  }
  std::sort(phases.begin(), phases.end());
  VectorX<cplx> psi = VectorX<cplx>::Zero(static_cast<Index>(dim_of(n)));
  psi(0) = 1;
  std::size_t next = 0;
  for (std::size_t g = 0; g <= gates.size(); ++g) {
    while (next < phases.size() && phases[next].first == g) {
      apply_phase(psi, phases[next].second, std::numbers::pi / 4);
      ++next;
    }
    if (g < gates.size()) apply_gate(psi, gates[g]);
  }
  return DenseState::pure(psi);
}

SeparationReport doped_separation_demo(std::size_t n, std::size_t t, Rng &rng) {
  if (n > kMaxTableQubits) fail(Errc::TooLarge, "separation demo needs n <= 8");
  Rng rc = rng.substream(1), rd = rng.substream(2);
  const QuantumState rho = make_w_state(n).with_clifford(random_real_clifford(n, default_clifford_depth(n), rc));
  return separation_check(rho, t_doped_state(n, t, rd), t);
}

json LemmaReport::to_json() const {
  return {{"pairs", pairs},
          {"tv0_violations", tv0_violations},
          {"tv_violations", tv_violations},
          {"purity_violations", purity_violations},
          {"cdf_violations", cdf_violations},
          {"tv0_worst_ratio", tv0_worst_ratio},
          {"tv_worst_ratio", tv_worst_ratio},
          {"cdf_worst_slack", cdf_worst_slack},
          {"passed", passed()}};
}

LemmaReport lemma_suite(std::size_t pairs, std::size_t max_n, Rng &rng) {
  if (max_n < 1 || max_n > kMaxTableQubits) fail(Errc::TooLarge, "lemma suite needs 1 <= max_n <= 8");
  constexpr double tol = 1e-10;
  LemmaReport rep;
  rep.pairs = pairs;
  rep.cdf_worst_slack = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pairs; ++i) {
    Rng r = rng.substream(i);
    const std::size_t n = 1 + r.below(max_n);
    const MatrixX<cplx> rho = random_density(n, 1 + r.below(3), r);
    MatrixX<cplx> sigma;
    switch (i % 3) {
      case 0:  // unrelated
        sigma = random_density(n, 1 + r.below(3), r);
        break;
      case 1: {  // nearby mixture
        const double w = 0.1 * r.uniform();
        sigma = (1 - w) * rho + w * random_density(n, 1 + r.below(3), r);
        break;
      }
      default:  // nearby unitary rotation
        sigma = apply_channel(DenseState::mixed(rho), NoiseChannel::coherent_phase(0.3 * r.uniform(), {r.below(n)}))
                    .matrix();
        sigma = apply_channel(DenseState::mixed(sigma), NoiseChannel::depolarizing(0.05 * r.uniform())).matrix();
        break;
    }
    const DenseState a = DenseState::mixed(rho), b = DenseState::mixed(sigma);
    const std::vector<double> ea = dense_table(a), eb = dense_table(b);
    const double d = double(dim_of(n));
    double pa = 0, pb = 0;
    for (std::size_t k = 0; k < ea.size(); ++k) {
      pa += ea[k] * ea[k] / d;
      pb += eb[k] * eb[k] / d;
    }
    const double dist = trace_norm(rho - sigma);

    double tv0 = 0, tv = 0;
    for (std::size_t k = 0; k < ea.size(); ++k) {
      tv0 += std::abs(ea[k] * ea[k] - eb[k] * eb[k]) / d;
      tv += std::abs(ea[k] * ea[k] / (d * pa) - eb[k] * eb[k] / (d * pb));
    }
    tv *= 0.5;
    const double tv_lhs = std::max(pa, pb) * tv;
    rep.tv0_violations += tv0 > 2 * dist + tol;
    rep.tv_violations += tv_lhs > 2 * dist + tol;
    rep.purity_violations += std::abs(pa - pb) > 2 * dist + tol;
    if (dist > 1e-12) {
      rep.tv0_worst_ratio = std::max(rep.tv0_worst_ratio, tv0 / dist);
      rep.tv_worst_ratio = std::max(rep.tv_worst_ratio, tv_lhs / dist);
    }

    // F_y(ε) <= F_x(2ε) + 4‖x − y‖/tr y² in both roles; F_y only steps at its own atoms.
    const ExactCdf fa = exact_cdf(QuantumState(a)), fb = exact_cdf(QuantumState(b));
    for (const auto &[fx, fy, py] : {std::tuple{&fa, &fb, pb}, std::tuple{&fb, &fa, pa}}) {
      for (double eps : fy->values()) {
        const double slack = (*fy)(eps) - (*fx)(2 * eps) - 4 * dist / py;
        rep.cdf_worst_slack = std::max(rep.cdf_worst_slack, slack);
        rep.cdf_violations += slack > tol;
      }
    }
  }
  return rep;
}

json run_verify_suite(const std::string &suite, std::uint64_t seed) {
  static const std::vector<std::string> kSuites = {"identity", "wtable", "cdf",      "commutant", "twirl", "swap",
                                                   "entangle", "counting", "doped", "lemmas",    "twocopy"};
  if (suite != "all" && std::find(kSuites.begin(), kSuites.end(), suite) == kSuites.end()) {
    fail(Errc::InvalidArgument, "unknown verify suite '" + suite + "'");
  }
  const Rng root(seed);
  json checks = json::array();
  auto want = [&](const std::string &name) { return suite == "all" || suite == name; };
  auto stream = [&](std::size_t k) { return root.substream(k); };

  if (want("identity")) {
    Rng r = stream(1);
    double worst = 0;
    for (int i = 0; i < 50; ++i) {
      const std::size_t n = 2 + r.below(5);
      const QuantumState s = DenseState::pure(random_real_pure(n, r));
      worst = std::max(worst, tv_distance(pauli_distribution(s), bell_distribution(s)));
    }
    checks.push_back(check_entry("real-state p = q", worst < 1e-10, {{"states", 50}, {"max_tv", worst}}));
  }
  if (want("wtable")) {
    double worst = 0;
    for (std::size_t n = 3; n <= 6; ++n) {
      const std::vector<double> table = dense_table(to_dense(make_w_state(n)));
      for (std::size_t i = 0; i < table.size(); ++i) {
        worst = std::max(worst, std::abs(table[i] - w_closed_form(PauliString::from_index(n, i))));
      }
    }
    checks.push_back(check_entry("W Pauli table closed form", worst < 1e-10, {{"max_error", worst}}));
  }
  if (want("cdf")) {
    Rng r = stream(3);
    json rows = json::array();
    bool ok = true;
    for (std::size_t n : {4, 6, 8, 10}) {
      const QuantumState s = make_w_state(n).with_clifford(random_real_clifford(n, default_clifford_depth(n), r));
      const ExactCdf f = exact_cdf(s);
      const double edge = 4.0 / double(n * n);
      const double below = f(edge - 1e-12);
      // The smallest nonzero ⟨P⟩² of W_n is exactly 4/n².
      const bool row_ok = below == 0.0 && std::abs(f.values().front() - edge) < 1e-12;
      ok = ok && row_ok;
      rows.push_back({{"n", n}, {"F_below_4_over_n2", below}, {"smallest_atom", f.values().front()}});
    }
    checks.push_back(check_entry("CW CDF vanishes below 4/n^2", ok, {{"rows", rows}}));
  }
  if (want("commutant")) {
    Rng r = stream(4);
    json rows = json::array();
    bool ok = true;
    for (std::size_t n = 1; n <= 3; ++n) {
      const CommutantReport c = commutant_check(n, 100, r);
      ok = ok && c.passed();
      rows.push_back(c.to_json());
    }
    for (std::size_t n = 4; n <= kMaxCommutantQubits; ++n) {
      const CommutantReport c = commutant_check(n, 0, r);
      ok = ok && c.passed();
      rows.push_back(c.to_json());
    }
    checks.push_back(check_entry("commutant basis of O(2^n) x O(2^n)", ok, {{"rows", rows}}));
  }
  if (want("twirl")) {
    Rng r = stream(5);
    json rows = json::array();
    bool ok = true;
    for (std::size_t n = 1; n <= 2; ++n) {
      const TwirlReport t = twirl_check(n, 20, r);
      ok = ok && t.passed();
      rows.push_back(t.to_json());
    }
    checks.push_back(check_entry("exhaustive rCl twirl equals commutant projection", ok, {{"rows", rows}}));
  }
  if (want("swap")) {
    Rng r = stream(6);
    json rows = json::array();
    bool ok = true;
    for (std::size_t n : {2, 4}) {
      const SwapTraceReport s = swap_trace_check(n);
      ok = ok && s.passed();
      rows.push_back(s.to_json());
    }
    // Twirl constants: closed form, dense projection, and projection after a random Clifford.
    const TwirlConstants closed = twirl_constants(4);
    const CwState w = make_w_state(4);
    const TwirlConstants proj = twirl_constants_dense(w);
    double rotated_err = 0;
    for (int i = 0; i < 20; ++i) {
      const TwirlConstants rc = twirl_constants_dense(w.with_clifford(random_real_clifford(4, 40, r)));
      rotated_err = std::max({rotated_err, std::abs(rc.k - closed.k), std::abs(rc.kprime - closed.kprime)});
    }
    const double proj_err = std::max(std::abs(proj.k - closed.k), std::abs(proj.kprime - closed.kprime));
    ok = ok && proj_err < 1e-10 && rotated_err < 1e-6;
    checks.push_back(check_entry("SWAP traces and twirl constants", ok,
                                 {{"rows", rows},
                                  {"k", closed.k},
                                  {"kprime", closed.kprime},
                                  {"projection_error", proj_err},
                                  {"rotated_projection_error", rotated_err}}));
  }
  if (want("entangle")) {
    Rng r = stream(7);
    const EntanglementScaling sc = entanglement_scaling({4, 6, 8, 10, 12}, 200, r);
    checks.push_back(check_entry("average entanglement of C|W>", sc.passed(), sc.to_json()));
  }
  if (want("counting")) {
    Rng r = stream(8);
    json rows = json::array();
    bool ok = true;
    for (std::size_t n : {8, 12, 16}) {
      const QuantumState s = make_w_state(n).with_clifford(random_real_clifford(n, default_clifford_depth(n), r));
      const std::uint64_t count = count_high_paulis(s, 0.75);
      const std::uint64_t bound = counting_bound(n);
      const double limit = std::exp2(0.75 * double(n));
      ok = ok && count <= bound && double(bound) < limit;
      rows.push_back({{"n", n}, {"count", count}, {"binomial_bound", bound}, {"limit", limit}});
    }
    // A stabilizer state has exactly 2^n labels with |⟨P⟩| = 1.
    const std::uint64_t stab = count_high_paulis(t_doped_state(6, 0, r), 1 - kStabilizerTol);
    ok = ok && stab == 64;
    checks.push_back(check_entry("high-expectation Pauli counting", ok, {{"rows", rows}, {"stabilizers_n6", stab}}));
  }
  if (want("doped")) {
    Rng r = stream(9);
    json rows = json::array();
    bool ok = true;
    for (std::size_t t = 0; t <= 2; ++t) {
      Rng rt = r.substream(t);
      const SeparationReport s = doped_separation_demo(8, t, rt);
      ok = ok && s.applicable() && s.passed();
      rows.push_back(s.to_json());
    }
    // ρ' = ρ inside CW(n) has too few stabilizers for the argument to apply.
    const QuantumState w = make_w_state(8).with_clifford(random_real_clifford(8, 80, r));
    const SeparationReport same = separation_check(w, to_dense(w), 0);
    ok = ok && !same.applicable();
    rows.push_back(same.to_json());
    checks.push_back(check_entry("t-doped states are far from CW", ok, {{"rows", rows}}));
  }
  if (want("lemmas")) {
    Rng r = stream(10);
    const LemmaReport l = lemma_suite(1000, 5, r);
    checks.push_back(check_entry("Pauli-distribution continuity", l.passed(), l.to_json()));
  }
  if (want("twocopy")) {
    Rng r = stream(11);
    bool ok = true;
    json rows = json::array();
    for (std::size_t n = 1; n <= 3; ++n) {
      const DenseState s = DenseState::pure(random_real_pure(n, r));
      for (double lambda : {0.01, 0.1}) {
        const TwoCopyReport t = two_copy_check(s, lambda);
        ok = ok && t.ok;
        rows.push_back({{"n", n}, {"lambda", lambda}, {"distance", t.distance}, {"tv", t.tv}});
      }
    }
    checks.push_back(check_entry("correlated two-copy noise", ok, {{"rows", rows}}));
  }

  bool all = true;
  for (const auto &c : checks) all = all && c.at("passed").get<bool>();
  return {{"suite", suite}, {"seed", seed}, {"checks", checks}, {"passed", all}};
}

}  // namespace rdipe
