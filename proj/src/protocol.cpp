#include "rdipe/protocol.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <thread>
#include <tuple>

#include <sodium.h>

#include "rdipe/distributions.hpp"

namespace rdipe {

namespace {

using nlohmann::json;

// Stream ids under a party's master seed.
constexpr std::uint64_t kSetupStream = 1;
constexpr std::uint64_t kBellStream = 2;
constexpr std::uint64_t kShotStream = 3;
constexpr std::uint64_t kPurityStream = 4;

constexpr std::size_t kMaxFrame = std::size_t{64} << 20;

enum KeyPhase { kHello, kSetup, kRound, kPurity, kResult, kError };

int role_slot(Role r) { return r == Role::Alice ? 0 : 1; }
Role other(Role r) { return r == Role::Alice ? Role::Bob : Role::Alice; }

json base(const char *type) { return json{{"v", kProtocolVersion}, {"type", type}}; }

json hello_msg(const ProtocolConfig &c, Role r) {
  json m = base("HELLO");
  m["role"] = role_name(r);
  m["n"] = c.n;
  m["N1"] = c.n1;
  m["N2"] = c.n2;
  m["N3"] = c.n3;
  m["purity_mode"] = purity_mode_name(c.purity_mode);
  return m;
}

std::string to_hex(const std::array<std::uint8_t, 32> &b) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string s;
  for (auto v : b) {
    s += digits[v >> 4];
    s += digits[v & 15];
  }
  return s;
}

std::array<std::uint8_t, 32> from_hex(const std::string &s) {
  if (s.size() != 64) fail(Errc::ProtocolViolation, "seed must be 64 hex digits");
  auto nibble = [](char c) -> std::uint8_t {
    if (c >= '0' && c <= '9') return std::uint8_t(c - '0');
    if (c >= 'a' && c <= 'f') return std::uint8_t(c - 'a' + 10);
    if (c >= 'A' && c <= 'F') return std::uint8_t(c - 'A' + 10);
    fail(Errc::ProtocolViolation, "bad hex digit in seed");
  };
  std::array<std::uint8_t, 32> out{};
  for (std::size_t i = 0; i < 32; ++i) out[i] = std::uint8_t(nibble(s[2 * i]) << 4 | nibble(s[2 * i + 1]));
  return out;
}

json setup_msg(std::uint64_t master) {
  json m = base("SETUP");
  m["seed"] = to_hex(setup_seed(master));
  return m;
}

json bell_msg(std::uint64_t i, const std::string &a) {
  json m = base("BELL_RESULT");
  m["i"] = i;
  m["a"] = a;
  return m;
}

json estimate_msg(std::uint64_t i, double v) {
  json m = base("PAULI_ESTIMATE");
  m["i"] = i;
  m["value"] = v;
  return m;
}

json value_msg(const char *type, double v) {
  json m = base(type);
  m["value"] = v;
  return m;
}

double own_purity(const QuantumState &s, const BellSampler &sampler, const ProtocolConfig &c, std::uint64_t seed) {
  const double exact = purity(s);
  if (c.purity_mode == PurityMode::Exact) return exact;
  Rng rng(seed, kPurityStream);
  return estimate_purity(sampler, exact, c.n3, rng);
}

double estimate_for(const QuantumState &s, const PauliString &a, const ProtocolConfig &c, std::uint64_t seed,
                    std::uint64_t i) {
  Rng rng = Rng(seed, kShotStream).substream(i);
  return pauli_shots(s, a, c.n2, rng);
}

PauliString bell_for(const BellSampler &sampler, std::uint64_t seed, std::uint64_t i) {
  Rng rng = Rng(seed, kBellStream).substream(i);
  return sampler.sample(rng);
}

void check_purity(const QuantumState &s, const char *who) {
  if (!(purity(s) > 0.5)) fail(Errc::PurityTooLow, std::string(who) + " state has purity <= 1/2");
}

std::vector<RoundValues> values_of(const std::vector<RoundRecord> &rounds) {
  std::vector<RoundValues> v;
  v.reserve(rounds.size());
  for (const auto &r : rounds) v.push_back({r.alpha, r.beta});
  return v;
}

}  // namespace

std::string role_name(Role r) { return r == Role::Alice ? "alice" : "bob"; }

Role role_from_name(const std::string &s) {
  if (s == "alice") return Role::Alice;
  if (s == "bob") return Role::Bob;
  fail(Errc::InvalidArgument, "unknown role '" + s + "'");
}

std::string purity_mode_name(PurityMode m) { return m == PurityMode::Exact ? "exact" : "estimated"; }

PurityMode purity_mode_from_name(const std::string &s) {
  if (s == "exact") return PurityMode::Exact;
  if (s == "estimated") return PurityMode::Estimated;
  fail(Errc::InvalidArgument, "unknown purity mode '" + s + "'");
}

void ProtocolConfig::validate() const {
  if (n == 0) fail(Errc::InvalidArgument, "n must be positive");
  if (n1 == 0 || n2 == 0) fail(Errc::InvalidArgument, "N1 and N2 must be at least 1");
  if (purity_mode == PurityMode::Estimated && n3 == 0) fail(Errc::InvalidArgument, "estimated purity needs N3 >= 1");
}

ProtocolConfig planned_config(std::size_t n, double eps, double delta) {
  const SamplePlan p = sample_size_plan(n, eps, delta);
  ProtocolConfig c;
  c.n = n;
  c.n1 = p.n1;
  c.n2 = p.n2;
  c.n3 = p.n1 > std::numeric_limits<std::uint64_t>::max() / p.n2 ? std::numeric_limits<std::uint64_t>::max()
                                                                  : p.n1 * p.n2;
  c.epsilon = eps;
  c.delta = delta;
  return c;
}

void write_transcript_jsonl(std::ostream &os, const Transcript &t) {
  for (const auto &e : t.messages) os << json{{"from", role_name(e.from)}, {"msg", e.msg}}.dump() << "\n";
  json s = base("SUMMARY");
  s["rounds"] = t.rounds.size();
  s["A"] = t.purity_a ? json(*t.purity_a) : json(nullptr);
  s["B"] = t.purity_b ? json(*t.purity_b) : json(nullptr);
  s["f"] = t.f ? json(*t.f) : json(nullptr);
  os << s.dump() << "\n";
}

double estimator_f(const std::vector<RoundValues> &rounds, double a, double b) {
  if (rounds.empty()) fail(Errc::EmptyRounds, "estimator needs at least one round");
  if (!(a > 0 && b > 0)) fail(Errc::InvalidArgument, "purities must be positive");
  const double ba = std::sqrt(b / a), ab = std::sqrt(a / b);
  double acc = 0.0;
  for (const auto &r : rounds) {
    if (r.alpha == 0.0 && r.beta == 0.0) continue;  // zero contribution
    acc += 2.0 * r.alpha * r.beta / (r.alpha * r.alpha * ba + r.beta * r.beta * ab);
  }
  return acc / double(rounds.size());
}

std::array<std::uint8_t, 32> setup_seed(std::uint64_t master) {
  Rng rng(master, kSetupStream);
  std::array<std::uint8_t, 32> out{};
  for (std::size_t w = 0; w < 4; ++w) {
    const std::uint64_t v = rng();
    for (std::size_t b = 0; b < 8; ++b) out[8 * w + b] = std::uint8_t(v >> (56 - 8 * b));
  }
  return out;
}

SharedCoin::SharedCoin(const std::array<std::uint8_t, 32> &seed_a, const std::array<std::uint8_t, 32> &seed_b) {
  static const int init = sodium_init();
  if (init < 0) fail(Errc::InvalidState, "libsodium failed to initialize");
  for (std::size_t i = 0; i < 32; ++i) key_[i] = seed_a[i] ^ seed_b[i];
}

Role SharedCoin::sampler(std::uint64_t i) {
  if (i == 0) fail(Errc::InvalidArgument, "rounds are numbered from 1");
  const std::uint64_t bit = i - 1;
  const std::uint64_t block = bit / 512;
  if (block != block_) {
    std::array<std::uint8_t, 8> msg{};
    for (std::size_t b = 0; b < 8; ++b) msg[b] = std::uint8_t(block >> (56 - 8 * b));
    crypto_generichash(bits_.data(), bits_.size(), msg.data(), msg.size(), key_.data(), key_.size());
    block_ = block;
  }
  const std::size_t j = bit % 512;
  return (bits_[j / 8] >> (7 - j % 8)) & 1 ? Role::Bob : Role::Alice;
}

RdipeResult run_rdipe(const QuantumState &rho, const QuantumState &sigma, const ProtocolConfig &cfg) {
  cfg.validate();
  if (num_qubits(rho) != cfg.n || num_qubits(sigma) != cfg.n) {
    fail(Errc::DimensionMismatch, "both states must have n = " + std::to_string(cfg.n) + " qubits");
  }
  check_purity(rho, "alice's");
  check_purity(sigma, "bob's");
  const BellSampler sa(rho), sb(sigma);

  SharedCoin coin(setup_seed(cfg.seed_alice), setup_seed(cfg.seed_bob));
  std::vector<RoundRecord> rounds(cfg.n1);
  for (std::uint64_t i = 1; i <= cfg.n1; ++i) {
    rounds[i - 1].i = i;
    rounds[i - 1].sampler = coin.sampler(i);
  }

  auto work = [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t k = begin; k < end; ++k) {
      RoundRecord &r = rounds[k];
      const bool alice = r.sampler == Role::Alice;
      const PauliString a = bell_for(alice ? sa : sb, alice ? cfg.seed_alice : cfg.seed_bob, r.i);
      r.a = a.label();
      r.alpha = estimate_for(rho, a, cfg, cfg.seed_alice, r.i);
      r.beta = estimate_for(sigma, a, cfg, cfg.seed_bob, r.i);
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(cfg.threads, unsigned(std::min<std::uint64_t>(cfg.n1, 1024))));
  if (threads == 1) {
    work(0, cfg.n1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, cfg.n1 * t / threads, cfg.n1 * (t + 1) / threads);
  }

  RdipeResult out;
  Transcript &tr = out.transcript;
  tr.purity_a = own_purity(rho, sa, cfg, cfg.seed_alice);
  tr.purity_b = own_purity(sigma, sb, cfg, cfg.seed_bob);
  out.f = estimator_f(values_of(rounds), *tr.purity_a, *tr.purity_b);
  tr.f = out.f;

  if (cfg.keep_messages) {
    auto &m = tr.messages;
    m.reserve(3 * cfg.n1 + 8);
    m.push_back({Role::Alice, hello_msg(cfg, Role::Alice)});
    m.push_back({Role::Bob, hello_msg(cfg, Role::Bob)});
    m.push_back({Role::Alice, setup_msg(cfg.seed_alice)});
    m.push_back({Role::Bob, setup_msg(cfg.seed_bob)});
    for (const auto &r : rounds) {
      const bool alice = r.sampler == Role::Alice;
      m.push_back({r.sampler, bell_msg(r.i, r.a)});
      m.push_back({r.sampler, estimate_msg(r.i, alice ? r.alpha : r.beta)});
      m.push_back({other(r.sampler), estimate_msg(r.i, alice ? r.beta : r.alpha)});
    }
    m.push_back({Role::Alice, value_msg("PURITY", *tr.purity_a)});
    m.push_back({Role::Bob, value_msg("PURITY", *tr.purity_b)});
    m.push_back({Role::Alice, value_msg("RESULT", out.f)});
    m.push_back({Role::Bob, value_msg("RESULT", out.f)});
  }
  tr.rounds = std::move(rounds);
  return out;
}

// ---------------------------------------------------------------------------------------------

Party::Party(const ProtocolConfig &cfg, const QuantumState &state) : cfg_(cfg), state_(state), sampler_(state) {
  cfg_.validate();
  if (num_qubits(state) != cfg_.n) fail(Errc::DimensionMismatch, "state size differs from the configured n");
  check_purity(state, "local");
  own_seed_ = setup_seed(cfg_.own_seed());
}

double Party::f() const {
  if (!f_) fail(Errc::InvalidState, "no result yet");
  return *f_;
}

Transcript Party::transcript() const {
  std::vector<const Keyed *> order;
  order.reserve(log_.size());
  for (const auto &k : log_) order.push_back(&k);
  std::stable_sort(order.begin(), order.end(), [](const Keyed *x, const Keyed *y) {
    return std::tie(x->phase, x->round, x->slot) < std::tie(y->phase, y->round, y->slot);
  });
  Transcript t;
  t.messages.reserve(order.size());
  for (const Keyed *k : order) t.messages.push_back(k->entry);
  t.rounds = rounds_;
  const bool alice = cfg_.role == Role::Alice;
  t.purity_a = alice ? own_purity_ : peer_purity_;
  t.purity_b = alice ? peer_purity_ : own_purity_;
  t.f = f_;
  return t;
}

void Party::record(Role from, const json &msg) {
  if (!cfg_.keep_messages) return;
  const std::string type = msg.value("type", std::string());
  Keyed k{kError, 0, role_slot(from), {from, msg}};
  if (type == "HELLO") {
    k.phase = kHello;
  } else if (type == "SETUP") {
    k.phase = kSetup;
  } else if (type == "BELL_RESULT") {
    k.phase = kRound;
    k.round = round_;
    k.slot = 0;
  } else if (type == "PAULI_ESTIMATE") {
    k.phase = kRound;
    k.round = round_;
    k.slot = from == round_sampler_ ? 1 : 2;
  } else if (type == "PURITY") {
    k.phase = kPurity;
  } else if (type == "RESULT") {
    k.phase = kResult;
  }
  log_.push_back(std::move(k));
}

std::vector<json> Party::fail_with(Errc code, const std::string &msg) {
  json e = base("ERROR");
  e["code"] = std::string(errc_name(code));
  e["message"] = msg;
  record(cfg_.role, e);
  phase_ = Phase::Failed;
  error_code_ = code;
  error_message_ = msg;
  return {e};
}

double Party::local_estimate(const PauliString &a) const { return estimate_for(state_, a, cfg_, cfg_.own_seed(), round_); }

std::vector<json> Party::start() {
  if (phase_ != Phase::Init) fail(Errc::InvalidState, "party already started");
  json h = hello_msg(cfg_, cfg_.role);
  record(cfg_.role, h);
  phase_ = Phase::AwaitHello;
  return {h};
}

std::vector<json> Party::begin_round() {
  round_sampler_ = coin_->sampler(round_);
  current_ = RoundRecord{};
  current_.i = round_;
  current_.sampler = round_sampler_;
  have_bell_ = false;
  if (round_sampler_ != cfg_.role) return {};
  const PauliString a = bell_for(sampler_, cfg_.own_seed(), round_);
  const double v = local_estimate(a);
  current_.a = a.label();
  (cfg_.role == Role::Alice ? current_.alpha : current_.beta) = v;
  have_bell_ = true;
  std::vector<json> out{bell_msg(round_, current_.a), estimate_msg(round_, v)};
  for (const auto &m : out) record(cfg_.role, m);
  return out;
}

std::vector<json> Party::finish_rounds() {
  own_purity_ = own_purity(state_, sampler_, cfg_, cfg_.own_seed());
  phase_ = Phase::AwaitPurity;
  json p = value_msg("PURITY", *own_purity_);
  record(cfg_.role, p);
  return {p};
}

std::vector<json> Party::step(const json &in) {
  if (phase_ == Phase::Done || phase_ == Phase::Failed) fail(Errc::InvalidState, "party has terminated");
  if (phase_ == Phase::Init) fail(Errc::InvalidState, "party not started");
  try {
    if (!in.is_object()) return fail_with(Errc::ProtocolViolation, "message is not a JSON object");
    if (!in.contains("v") || in.at("v") != kProtocolVersion) {
      record(peer(), in);
      return fail_with(Errc::ProtocolViolation, "version mismatch");
    }
    const std::string type = in.at("type").get<std::string>();
    if (type == "ERROR") {
      record(peer(), in);
      phase_ = Phase::Failed;
      error_message_ = "peer reported: " + in.value("message", std::string("error"));
      error_code_ = in.value("code", std::string()) == errc_name(Errc::ConfigMismatch) ? Errc::ConfigMismatch
                                                                                       : Errc::ProtocolViolation;
      return {};
    }
    record(peer(), in);

    switch (phase_) {
      case Phase::AwaitHello: {
        if (type != "HELLO") break;
        const bool same = in.at("role").get<std::string>() == role_name(peer()) &&
                          in.at("n").get<std::size_t>() == cfg_.n && in.at("N1").get<std::uint64_t>() == cfg_.n1 &&
                          in.at("N2").get<std::uint64_t>() == cfg_.n2 && in.at("N3").get<std::uint64_t>() == cfg_.n3 &&
                          in.at("purity_mode").get<std::string>() == purity_mode_name(cfg_.purity_mode);
        if (!same) return fail_with(Errc::ConfigMismatch, "config mismatch");
        phase_ = Phase::AwaitSetup;
        json s = setup_msg(cfg_.own_seed());
        record(cfg_.role, s);
        return {s};
      }
      case Phase::AwaitSetup: {
        if (type != "SETUP") break;
        const auto peer_seed = from_hex(in.at("seed").get<std::string>());
        coin_.emplace(cfg_.role == Role::Alice ? own_seed_ : peer_seed, cfg_.role == Role::Alice ? peer_seed : own_seed_);
        phase_ = Phase::Rounds;
        round_ = 1;
        return begin_round();
      }
      case Phase::Rounds: {
        const std::uint64_t i = in.at("i").get<std::uint64_t>();
        if (i != round_) return fail_with(Errc::ProtocolViolation, "message for round " + std::to_string(i) +
                                                                       " during round " + std::to_string(round_));
        if (type == "BELL_RESULT") {
          if (round_sampler_ == cfg_.role || have_bell_) break;
          const std::string a = in.at("a").get<std::string>();
          if (a.size() != cfg_.n || a.find_first_not_of("0123") != std::string::npos) {
            return fail_with(Errc::ProtocolViolation, "malformed Bell label");
          }
          const double v = local_estimate(PauliString::from_label(a));
          current_.a = a;
          (cfg_.role == Role::Alice ? current_.alpha : current_.beta) = v;
          have_bell_ = true;
          json e = estimate_msg(round_, v);
          record(cfg_.role, e);
          return {e};
        }
        if (type == "PAULI_ESTIMATE") {
          if (!have_bell_) break;
          const double v = in.at("value").get<double>();
          if (!(v >= -1.0 && v <= 1.0)) return fail_with(Errc::ProtocolViolation, "estimate outside [-1, 1]");
          (cfg_.role == Role::Alice ? current_.beta : current_.alpha) = v;
          rounds_.push_back(current_);
          if (++round_ > cfg_.n1) return finish_rounds();
          return begin_round();
        }
        break;
      }
      case Phase::AwaitPurity: {
        if (type != "PURITY") break;
        const double v = in.at("value").get<double>();
        if (!(v > 0.0 && v <= 1.0)) return fail_with(Errc::ProtocolViolation, "purity outside (0, 1]");
        peer_purity_ = v;
        const bool alice = cfg_.role == Role::Alice;
        f_ = estimator_f(values_of(rounds_), alice ? *own_purity_ : v, alice ? v : *own_purity_);
        phase_ = Phase::AwaitResult;
        json r = value_msg("RESULT", *f_);
        record(cfg_.role, r);
        return {r};
      }
      case Phase::AwaitResult: {
        if (type != "RESULT") break;
        const double v = in.at("value").get<double>();
        if (std::bit_cast<std::uint64_t>(v) != std::bit_cast<std::uint64_t>(*f_)) {
          return fail_with(Errc::ProtocolViolation, "peer result differs");
        }
        phase_ = Phase::Done;
        return {};
      }
      default:
        break;
    }
    return fail_with(Errc::ProtocolViolation, "unexpected " + type + " message");
  } catch (const json::exception &e) {
    return fail_with(Errc::ProtocolViolation, std::string("malformed message: ") + e.what());
  } catch (const Error &e) {
    if (e.code() != Errc::ProtocolViolation) throw;
    return fail_with(Errc::ProtocolViolation, e.what());
  }
}

// ---------------------------------------------------------------------------------------------

std::string encode_frame(const json &msg) {
  const std::string body = msg.dump();
  if (body.size() > kMaxFrame) fail(Errc::InvalidArgument, "message too large");
  const auto len = static_cast<std::uint32_t>(body.size());
  std::string out(4, '\0');
  for (int b = 0; b < 4; ++b) out[std::size_t(b)] = char((len >> (24 - 8 * b)) & 0xff);
  return out + body;
}

void FrameDecoder::feed(std::string_view bytes) { buffer_.append(bytes); }

std::optional<json> FrameDecoder::next() {
  if (buffer_.size() < 4) return std::nullopt;
  std::uint32_t len = 0;
  for (int b = 0; b < 4; ++b) len = len << 8 | static_cast<unsigned char>(buffer_[std::size_t(b)]);
  if (len > kMaxFrame) fail(Errc::ProtocolViolation, "frame length exceeds limit");
  if (buffer_.size() < 4 + std::size_t(len)) return std::nullopt;
  json msg = json::parse(buffer_.begin() + 4, buffer_.begin() + 4 + len, nullptr, false);
  buffer_.erase(0, 4 + std::size_t(len));
  if (msg.is_discarded()) fail(Errc::ProtocolViolation, "frame is not valid JSON");
  return msg;
}

InProcessResult run_in_process(const QuantumState &rho, const QuantumState &sigma, const ProtocolConfig &cfg) {
  ProtocolConfig ca = cfg, cb = cfg;
  ca.role = Role::Alice;
  cb.role = Role::Bob;
  Party pa(ca, rho), pb(cb, sigma);
  FrameDecoder to_a, to_b;
  auto post = [](const std::vector<json> &msgs, FrameDecoder &dest) {
    for (const auto &m : msgs) dest.feed(encode_frame(m));
  };
  auto finished = [](const Party &p) { return p.done() || p.failed(); };
  post(pa.start(), to_b);
  post(pb.start(), to_a);
  while (!finished(pa) || !finished(pb)) {
    bool moved = false;
    if (!finished(pa)) {
      if (auto m = to_a.next()) {
        post(pa.step(*m), to_b);
        moved = true;
      }
    }
    if (!finished(pb)) {
      if (auto m = to_b.next()) {
        post(pb.step(*m), to_a);
        moved = true;
      }
    }
    if (!moved) break;
  }
  for (const Party *p : {&pa, &pb}) {
    if (p->failed()) fail(p->error_code(), p->error_message());
    if (!p->done()) fail(Errc::ProtocolViolation, "session stalled");
  }
  return {pa.f(), pa.transcript(), pb.transcript()};
}

}  // namespace rdipe
