// rdipe: command-line front end for protocol runs, CDF and resource sweeps, robustness and
// entanglement experiments, and the verification suite.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rdipe/distributions.hpp"
#include "rdipe/net.hpp"
#include "rdipe/noise.hpp"
#include "rdipe/protocol.hpp"
#include "rdipe/states.hpp"
#include "rdipe/verify.hpp"
#include "rdipe/version.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace rdipe;

namespace {

// Exit codes.
constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kConfigError = 2;
constexpr int kProtocolError = 3;
constexpr int kChannelFailure = 4;

using Metadata = std::map<std::string, std::string>;

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

void write_metadata(std::ostream &os, const Metadata &meta) {
  for (const auto &[k, v] : meta) os << "# " << k << "=" << v << "\n";
}

Metadata base_metadata(const std::string &command, std::uint64_t seed) {
  return {{"command", command}, {"seed", std::to_string(seed)}, {"version", kVersion}};
}

// Writes to `path`, or stdout for "" / "-".
template <typename Fn>
void with_output(const std::string &path, Fn &&fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    return;
  }
  if (fs::path(path).has_parent_path()) fs::create_directories(fs::path(path).parent_path());
  std::ofstream out(path);
  if (!out) fail(Errc::InvalidArgument, "cannot write " + path);
  fn(out);
}

QuantumState load_state(const std::string &path) {
  std::ifstream in(path);
  if (!in) fail(Errc::InvalidArgument, "cannot read state file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception &e) {
    fail(Errc::ParseError, path + ": " + e.what());
  }
  return state_from_json(j);
}

// Named families for the sweep commands. "random" is a seeded real pure dense state.
QuantumState family_state(const std::string &family, std::size_t n, std::size_t k, Rng &rng) {
  if (family == "w") return make_w_state(n);
  if (family == "dicke2") return make_dicke(n, 2);
  if (family == "dicke") return make_dicke(n, k);
  if (family == "random") {
    if (n > kMaxDenseVectorQubits) fail(Errc::TooLargeForDense, "random dense states need n <= 14");
    VectorX<cplx> v(static_cast<Eigen::Index>(dim_of(n)));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = normal(rng);
    return DenseState::pure(v / v.norm());
  }
  fail(Errc::InvalidArgument, "unknown family '" + family + "' (w, dicke2, dicke, random)");
}

std::vector<std::size_t> parse_range(const std::string &spec) {
  // a:b:step or a comma list.
  std::vector<std::size_t> out;
  if (spec.find(':') != std::string::npos) {
    std::size_t a = 0, b = 0, step = 1;
    char c1 = 0, c2 = 0;
    std::istringstream is(spec);
    is >> a >> c1 >> b;
    if (is.peek() == ':') is >> c2 >> step;
    if (!is || step == 0 || b < a) fail(Errc::InvalidArgument, "bad range '" + spec + "' (use a:b or a:b:step)");
    for (std::size_t n = a; n <= b; n += step) out.push_back(n);
    return out;
  }
  std::istringstream is(spec);
  std::string item;
  while (std::getline(is, item, ',')) out.push_back(std::stoul(item));
  if (out.empty()) fail(Errc::InvalidArgument, "empty range");
  return out;
}

struct RunOptions {
  std::string state_a, state_b, state;
  double epsilon = 0.1;
  double delta = 3.0;
  std::uint64_t seed = 1;
  std::string purity_mode = "exact";
  std::string out;
  std::uint64_t n1 = 0, n2 = 0, n3 = 0;
  unsigned threads = 1;
  std::string role;
  std::string addr;
  int attempts = 20;
  int timeout_ms = 60000;
};

ProtocolConfig make_config(std::size_t n, const RunOptions &o) {
  ProtocolConfig cfg = planned_config(n, o.epsilon, o.delta);
  if (o.n1) cfg.n1 = o.n1;
  if (o.n2) cfg.n2 = o.n2;
  if (o.n3) {
    cfg.n3 = o.n3;
  } else if (o.n1 || o.n2) {
    cfg.n3 = cfg.n1 * cfg.n2;
  }
  cfg.purity_mode = purity_mode_from_name(o.purity_mode);
  cfg.threads = o.threads;
  cfg.seed_alice = o.seed;
  cfg.seed_bob = o.seed + 1;
  cfg.validate();
  return cfg;
}

json config_json(const ProtocolConfig &cfg) {
  return {{"n", cfg.n},
          {"N1", cfg.n1},
          {"N2", cfg.n2},
          {"N3", cfg.n3},
          {"epsilon", cfg.epsilon},
          {"delta", cfg.delta},
          {"purity_mode", purity_mode_name(cfg.purity_mode)}};
}

void write_text(const fs::path &p, const std::string &text) {
  std::ofstream out(p);
  if (!out) fail(Errc::InvalidArgument, "cannot write " + p.string());
  out << text;
}

void write_transcript_file(const fs::path &p, const Transcript &t) {
  std::ofstream out(p);
  if (!out) fail(Errc::InvalidArgument, "cannot write " + p.string());
  write_transcript_jsonl(out, t);
}

int cmd_run(const RunOptions &o) {
  const QuantumState a = load_state(o.state_a), b = load_state(o.state_b);
  if (num_qubits(a) != num_qubits(b)) {
    fail(Errc::DimensionMismatch, "state files have n = " + std::to_string(num_qubits(a)) + " and n = " +
                                      std::to_string(num_qubits(b)));
  }
  const ProtocolConfig cfg = make_config(num_qubits(a), o);
  const RdipeResult r = run_rdipe(a, b, cfg);

  json summary = config_json(cfg);
  summary["f"] = r.f;
  summary["seed"] = o.seed;
  summary["seed_alice"] = cfg.seed_alice;
  summary["seed_bob"] = cfg.seed_bob;
  summary["version"] = kVersion;
  try {
    const double c = cosine_oracle(a, b);
    summary["oracle_c"] = c;
    summary["abs_error"] = std::abs(r.f - c);
  } catch (const Error &) {
    summary["oracle_c"] = nullptr;  // too large for a dense overlap
    summary["abs_error"] = nullptr;
  }
  if (!o.out.empty()) {
    fs::create_directories(o.out);
    write_transcript_file(fs::path(o.out) / "transcript.jsonl", r.transcript);
    write_text(fs::path(o.out) / "summary.json", summary.dump(2) + "\n");
  }
  std::cout << summary.dump(2) << "\n";
  return kOk;
}

// serve / connect: one party over TCP. The transcript is written even when the session fails.
int cmd_party(const RunOptions &o, bool serve) {
  const QuantumState s = load_state(o.state);
  ProtocolConfig cfg = make_config(num_qubits(s), o);
  cfg.role = role_from_name(o.role.empty() ? (serve ? "alice" : "bob") : o.role);
  // --seed is this party's own master seed (`run --seed S` uses S for alice and S+1 for bob).
  cfg.seed_alice = cfg.seed_bob = o.seed;
  const Endpoint ep = parse_endpoint(o.addr);

  Party party(cfg, s);
  const std::string tag = role_name(cfg.role);
  auto persist = [&](const json &extra) {
    if (o.out.empty()) return;
    fs::create_directories(o.out);
    write_transcript_file(fs::path(o.out) / ("transcript-" + tag + ".jsonl"), party.transcript());
    json summary = config_json(cfg);
    summary.update(extra);
    summary["role"] = tag;
    summary["seed"] = o.seed;
    summary["version"] = kVersion;
    write_text(fs::path(o.out) / ("summary-" + tag + ".json"), summary.dump(2) + "\n");
  };

  try {
    std::optional<Listener> listener;
    std::optional<SocketChannel> ch;
    if (serve) {
      listener.emplace(ep);
      std::cerr << "listening on " << ep.host << ":" << listener->port() << "\n";
      ch.emplace(listener->accept(o.timeout_ms));
    } else {
      ch.emplace(connect_to(ep, o.attempts));
    }
    const double f = run_party(party, *ch);
    persist({{"f", f}});
    std::cout << json{{"f", f}, {"role", tag}}.dump() << "\n";
    return kOk;
  } catch (const Error &e) {
    persist({{"f", nullptr}, {"error", e.what()}});
    throw;
  }
}

struct CdfOptions {
  std::string family = "w";
  std::string state;
  std::size_t n = 8, k = 2;
  bool exact = false;
  std::size_t samples = 0;
  std::uint64_t shots = 0;
  double epsilon = 0.1;
  std::vector<double> at;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string out;
};

int cmd_cdf(const CdfOptions &o) {
  Rng rng(o.seed);
  Rng state_rng = rng.substream(1);
  const QuantumState s = o.state.empty() ? family_state(o.family, o.n, o.k, state_rng) : load_state(o.state);
  const std::size_t n = num_qubits(s);
  Metadata meta = base_metadata("cdf", o.seed);
  meta["n"] = std::to_string(n);
  meta["family"] = o.state.empty() ? o.family : "file:" + o.state;
  // W-type supports vanish below 4/n² only for even n; odd n has a ⟨P⟩² = 1/n² atom.
  const auto *cw = std::get_if<CwState>(&s);
  if (cw && cw->family() == CwFamily::W) {
    meta["vanishing_below"] = fmt(n % 2 ? 1.0 / double(n * n) : 4.0 / double(n * n));
    meta["odd_n"] = n % 2 ? "true" : "false";
  }

  std::vector<std::pair<double, double>> rows;
  if (o.exact) {
    meta["mode"] = "exact";
    const ExactCdf f = exact_cdf(s);
    if (o.at.empty()) {
      for (std::size_t i = 0; i < f.values().size(); ++i) rows.emplace_back(f.values()[i], std::min(1.0, f.cumulative()[i]));
    } else {
      for (double e : o.at) rows.emplace_back(e, f(e));
    }
  } else {
    const std::size_t samples = o.samples ? o.samples : default_cdf_samples(o.epsilon);
    meta["mode"] = "empirical";
    meta["samples"] = std::to_string(samples);
    meta["shots"] = std::to_string(o.shots);
    Rng sample_rng = rng.substream(2);
    const EmpiricalCdf f = build_empirical_cdf(s, samples, o.shots, sample_rng, o.threads);
    meta["dkw_radius_99"] = fmt(EmpiricalCdf::dkw_radius(samples, 0.01));
    if (o.at.empty()) {
      const auto &v = f.samples();
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i + 1 < v.size() && v[i + 1] == v[i]) continue;
        rows.emplace_back(v[i], double(i + 1) / double(v.size()));
      }
    } else {
      for (double e : o.at) rows.emplace_back(e, f(e));
    }
  }
  with_output(o.out, [&](std::ostream &os) {
    write_metadata(os, meta);
    os << "eps,F\n";
    for (const auto &[e, v] : rows) os << fmt(e) << "," << fmt(v) << "\n";
  });
  return kOk;
}

struct ResourceOptions {
  std::string family = "dicke2";
  std::string n_range = "8:64:8";
  std::size_t k = 2;
  std::size_t samples = 50000;
  std::uint64_t shots = 0;
  bool exact_k = false;
  std::vector<double> epsilons = {0.1};
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string out;
};

int cmd_resources(const ResourceOptions &o) {
  const std::uint64_t shots = o.exact_k ? 0 : o.shots;
  std::vector<ResourceRow> rows;
  const Rng root(o.seed);
  for (std::size_t n : parse_range(o.n_range)) {
    Rng r = root.substream(n);
    Rng state_rng = r.substream(1), sample_rng = r.substream(2);
    const QuantumState s = family_state(o.family, n, o.k, state_rng);
    const EmpiricalCdf cdf = build_empirical_cdf(s, o.samples, shots, sample_rng, o.threads);
    for (double eps : o.epsilons) {
      const ResourceEstimate est = resource_estimate(cdf, eps);
      rows.push_back({n, eps, est.optimistic, est.conservative, o.samples, shots, o.seed});
    }
  }
  Metadata meta = base_metadata("resources", o.seed);
  meta["family"] = o.family;
  meta["n_range"] = o.n_range;
  meta["samples"] = std::to_string(o.samples);
  meta["shots"] = shots ? std::to_string(shots) : "exact";
  with_output(o.out, [&](std::ostream &os) { write_resource_csv(os, rows, meta); });
  return kOk;
}

struct RobustnessOptions {
  std::string family = "w";
  std::size_t n = 6;
  std::vector<double> taus = {0.02, 0.05, 0.1};
  std::size_t runs = 100;
  std::string channel = "phase";
  std::vector<std::size_t> sites = {0};
  double epsilon = 0.1;
  double delta = 3.0;
  std::uint64_t n1 = 0, n2 = 0;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string out;
  std::string json_out;
};

int cmd_robustness(const RobustnessOptions &o) {
  NoiseChannel family;
  switch (channel_kind_from_name(o.channel)) {
    case ChannelKind::Depolarizing: family = NoiseChannel::depolarizing(0); break;
    case ChannelKind::Pauli: family = NoiseChannel::pauli(0, 0, 0); break;
    case ChannelKind::CoherentPhase: family = NoiseChannel::coherent_phase(0, o.sites); break;
  }
  std::vector<RobustnessReport> reports;
  for (std::size_t i = 0; i < o.taus.size(); ++i) {
    RobustnessConfig cfg;
    cfg.family = o.family;
    cfg.n = o.n;
    cfg.tau = o.taus[i];
    cfg.epsilon = o.epsilon;
    cfg.delta = o.delta;
    cfg.runs = o.runs;
    cfg.channel = family;
    cfg.seed = o.seed;
    cfg.threads = o.threads;
    cfg.n1 = o.n1;
    cfg.n2 = o.n2;
    reports.push_back(robustness_experiment(cfg));
  }
  Metadata meta = base_metadata("robustness", o.seed);
  meta["family"] = o.family;
  meta["n"] = std::to_string(o.n);
  meta["runs"] = std::to_string(o.runs);
  meta["channel"] = o.channel;
  meta["delta"] = fmt(o.delta);
  meta["norm"] = "schatten-1 (no 1/2)";
  with_output(o.out, [&](std::ostream &os) {
    write_metadata(os, meta);
    os << "tau,k,bound,max_error,p95_error,mean_error,delta_tv,delta_bound,dist_rho,dist_sigma,c_clean,c_noisy,"
          "strength_rho,strength_sigma,n1,n2,passed\n";
    for (const auto &r : reports) {
      os << fmt(r.tau) << "," << fmt(r.k) << "," << fmt(r.bound) << "," << fmt(r.max_error) << ","
         << fmt(r.p95_error) << "," << fmt(r.mean_error) << "," << fmt(r.delta_tv) << "," << fmt(r.delta_bound)
         << "," << fmt(r.dist_rho) << "," << fmt(r.dist_sigma) << "," << fmt(r.c_clean) << "," << fmt(r.c_noisy)
         << "," << fmt(r.cal_rho.strength) << "," << fmt(r.cal_sigma.strength) << "," << r.n1 << "," << r.n2 << ","
         << (r.passed() ? "true" : "false") << "\n";
    }
  });
  if (!o.json_out.empty()) {
    json all = json::array();
    for (const auto &r : reports) all.push_back(r.to_json());
    with_output(o.json_out, [&](std::ostream &os) { os << all.dump(2) << "\n"; });
  }
  return std::all_of(reports.begin(), reports.end(), [](const auto &r) { return r.passed(); }) ? kOk
                                                                                                : kCheckFailed;
}

struct EntangleOptions {
  std::string n_list = "4,6,8,10,12";
  std::size_t samples = 200;
  std::size_t depth = 0;  // 0: 10n
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_entangle(const EntangleOptions &o) {
  Rng rng(o.seed);
  EntanglementScaling sc;
  std::vector<double> x, y;
  for (std::size_t n : parse_range(o.n_list)) {
    Rng r = rng.substream(n);
    sc.points.push_back(entanglement_average_check(n, o.samples, o.depth ? o.depth : default_clifford_depth(n), r));
    x.push_back(double(n));
    y.push_back(sc.points.back().mean_s2);
  }
  if (x.size() >= 2) sc.fit = linear_fit(x, y);
  Metadata meta = base_metadata("entangle", o.seed);
  meta["samples"] = std::to_string(o.samples);
  meta["depth"] = o.depth ? std::to_string(o.depth) : "10n";
  meta["fit_slope"] = fmt(sc.fit.slope);
  meta["fit_intercept"] = fmt(sc.fit.intercept);
  meta["fit_r2"] = fmt(sc.fit.r2);
  meta["entropy_units"] = "bits";
  with_output(o.out, [&](std::ostream &os) {
    write_metadata(os, meta);
    os << "n,samples,mean_s2,se_s2,mean_purity,se_purity,k,kprime,predicted_purity,predicted_s2,"
          "purity_consistent,bound_consistent\n";
    for (const auto &p : sc.points) {
      os << p.n << "," << p.samples << "," << fmt(p.mean_s2) << "," << fmt(p.se_s2) << "," << fmt(p.mean_purity)
         << "," << fmt(p.se_purity) << "," << fmt(p.constants.k) << "," << fmt(p.constants.kprime) << ","
         << fmt(p.constants.predicted_purity) << "," << fmt(p.constants.predicted_s2) << ","
         << (p.purity_consistent() ? "true" : "false") << "," << (p.bound_consistent() ? "true" : "false") << "\n";
    }
  });
  return kOk;
}

int cmd_verify(const std::string &suite, std::uint64_t seed, const std::string &out) {
  json report = run_verify_suite(suite, seed);
  report["version"] = kVersion;
  with_output(out, [&](std::ostream &os) { os << report.dump(2) << "\n"; });
  for (const auto &c : report.at("checks")) {
    std::cerr << (c.at("passed").get<bool>() ? "PASS " : "FAIL ") << c.at("name").get<std::string>() << "\n";
  }
  return report.at("passed").get<bool>() ? kOk : kCheckFailed;
}

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::ConfigMismatch:
    case Errc::ProtocolViolation: return kProtocolError;
    case Errc::ChannelError: return kChannelFailure;
    default: return kConfigError;
  }
}

void add_run_flags(CLI::App *app, RunOptions &o) {
  app->add_option("--epsilon", o.epsilon, "Target accuracy for the sample-size plan")->capture_default_str();
  app->add_option("--delta", o.delta, "Failure exponent: success probability 1 - e^-delta")->capture_default_str();
  app->add_option("--seed", o.seed, "Master seed")->capture_default_str();
  app->add_option("--purity-mode", o.purity_mode, "exact or estimated")
      ->check(CLI::IsMember({"exact", "estimated"}))
      ->capture_default_str();
  app->add_option("--out", o.out, "Output directory for transcript and summary");
  app->add_option("--n1", o.n1, "Override the planned number of rounds");
  app->add_option("--n2", o.n2, "Override the planned shots per Pauli estimate");
  app->add_option("--n3", o.n3, "Purity shots in estimated mode (default N1*N2)");
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"rdipe: distributed inner-product estimation for real quantum states"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  unsigned threads = 1;
  app.add_option("--threads", threads, "Worker threads where a command can use them")->capture_default_str();

  RunOptions run_opts;
  auto *run = app.add_subcommand("run", "Both parties in one process");
  run->add_option("--state-a", run_opts.state_a, "Alice's state spec (JSON)")->required();
  run->add_option("--state-b", run_opts.state_b, "Bob's state spec (JSON)")->required();
  add_run_flags(run, run_opts);

  RunOptions serve_opts;
  auto *serve = app.add_subcommand("serve", "Listen for a peer and run one party");
  serve->add_option("--listen", serve_opts.addr, "host:port to listen on")->required();
  serve->add_option("--state", serve_opts.state, "Local state spec (JSON)")->required();
  serve->add_option("--role", serve_opts.role, "alice (default) or bob")->check(CLI::IsMember({"alice", "bob"}));
  serve->add_option("--timeout-ms", serve_opts.timeout_ms, "How long to wait for the peer")->capture_default_str();
  add_run_flags(serve, serve_opts);

  RunOptions connect_opts;
  auto *connect = app.add_subcommand("connect", "Connect to a listening peer and run one party");
  connect->add_option("--peer", connect_opts.addr, "host:port of the peer")->required();
  connect->add_option("--state", connect_opts.state, "Local state spec (JSON)")->required();
  connect->add_option("--role", connect_opts.role, "bob (default) or alice")->check(CLI::IsMember({"alice", "bob"}));
  connect->add_option("--attempts", connect_opts.attempts, "Connection attempts")->capture_default_str();
  add_run_flags(connect, connect_opts);

  CdfOptions cdf_opts;
  auto *cdf = app.add_subcommand("cdf", "CDF of squared Pauli expectations under the Pauli distribution");
  cdf->add_option("--family", cdf_opts.family, "w, dicke2, dicke or random")->capture_default_str();
  cdf->add_option("--state", cdf_opts.state, "State spec file (overrides --family)");
  cdf->add_option("--n", cdf_opts.n, "Qubits")->capture_default_str();
  cdf->add_option("--k", cdf_opts.k, "Excitations for --family dicke")->capture_default_str();
  cdf->add_flag("--exact", cdf_opts.exact, "Exact CDF instead of Bell-sampled");
  cdf->add_option("--samples", cdf_opts.samples, "Bell samples (default: DKW radius eps/2 at 99%)");
  cdf->add_option("--shots", cdf_opts.shots, "Shots per Pauli estimate (0: exact expectations)")->capture_default_str();
  cdf->add_option("--epsilon", cdf_opts.epsilon, "Accuracy used for the default sample count")->capture_default_str();
  cdf->add_option("--at", cdf_opts.at, "Evaluate F only at these points")->delimiter(',');
  cdf->add_option("--seed", cdf_opts.seed, "Seed")->capture_default_str();
  cdf->add_option("--out", cdf_opts.out, "CSV path (default stdout)");

  ResourceOptions res_opts;
  auto *res = app.add_subcommand("resources", "Sweep eps2 = sup{x : F_N(x) <= eps} over n");
  res->add_option("--family", res_opts.family, "w, dicke2, dicke or random")->capture_default_str();
  res->add_option("--n-range", res_opts.n_range, "a:b:step or a comma list")->capture_default_str();
  res->add_option("--k", res_opts.k, "Excitations for --family dicke")->capture_default_str();
  res->add_option("--N", res_opts.samples, "Bell samples per n")->capture_default_str();
  res->add_option("--K", res_opts.shots, "Shots per estimate (0: exact)")->capture_default_str();
  res->add_flag("--exact-K", res_opts.exact_k, "Use exact expectations instead of K-shot estimates");
  res->add_option("--epsilon", res_opts.epsilons, "One or more target CDF levels")->delimiter(',')->capture_default_str();
  res->add_option("--seed", res_opts.seed, "Seed")->capture_default_str();
  res->add_option("--out", res_opts.out, "CSV path (default stdout)");

  RobustnessOptions rob_opts;
  auto *rob = app.add_subcommand("robustness", "Protocol error on noisy CW pairs");
  rob->add_option("--family", rob_opts.family, "w or dicke2")->capture_default_str();
  rob->add_option("--n", rob_opts.n, "Qubits (even, <= 8)")->capture_default_str();
  rob->add_option("--tau", rob_opts.taus, "Noise levels (trace distance)")->delimiter(',')->capture_default_str();
  rob->add_option("--runs", rob_opts.runs, "Protocol runs per level")->capture_default_str();
  rob->add_option("--channel", rob_opts.channel, "phase, depolarizing or pauli")
      ->check(CLI::IsMember({"phase", "depolarizing", "pauli"}))
      ->capture_default_str();
  rob->add_option("--sites", rob_opts.sites, "Phase-channel sites")->capture_default_str();
  rob->add_option("--epsilon", rob_opts.epsilon, "Plan accuracy when tau = 0")->capture_default_str();
  rob->add_option("--delta", rob_opts.delta, "Failure exponent")->capture_default_str();
  rob->add_option("--n1", rob_opts.n1, "Override rounds");
  rob->add_option("--n2", rob_opts.n2, "Override shots");
  rob->add_option("--seed", rob_opts.seed, "Seed")->capture_default_str();
  rob->add_option("--out", rob_opts.out, "CSV path (default stdout)");
  rob->add_option("--json", rob_opts.json_out, "Full JSON report path");

  EntangleOptions ent_opts;
  auto *ent = app.add_subcommand("entangle", "Average half-system S2 of Clifford-rotated W states");
  ent->add_option("--n-list", ent_opts.n_list, "Even n values, a:b:step or comma list")->capture_default_str();
  ent->add_option("--samples", ent_opts.samples, "Random Cliffords per n")->capture_default_str();
  ent->add_option("--depth", ent_opts.depth, "Circuit layers (default 10n)");
  ent->add_option("--seed", ent_opts.seed, "Seed")->capture_default_str();
  ent->add_option("--out", ent_opts.out, "CSV path (default stdout)");

  std::string suite = "all", verify_out;
  std::uint64_t verify_seed = 1;
  auto *ver = app.add_subcommand("verify", "Numerical verification suite (exit 1 on any failed check)");
  ver->add_option("--suite", suite,
                  "all, identity, wtable, cdf, commutant, twirl, swap, entangle, counting, doped, lemmas, twocopy")
      ->capture_default_str();
  ver->add_option("--seed", verify_seed, "Seed")->capture_default_str();
  ver->add_option("--out", verify_out, "JSON report path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  try {
    run_opts.threads = serve_opts.threads = connect_opts.threads = threads;
    cdf_opts.threads = res_opts.threads = rob_opts.threads = threads;
    if (*run) return cmd_run(run_opts);
    if (*serve) return cmd_party(serve_opts, true);
    if (*connect) return cmd_party(connect_opts, false);
    if (*cdf) return cmd_cdf(cdf_opts);
    if (*res) return cmd_resources(res_opts);
    if (*rob) return cmd_robustness(rob_opts);
    if (*ent) return cmd_entangle(ent_opts);
    if (*ver) return cmd_verify(suite, verify_seed, verify_out);
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
  return kConfigError;
}
