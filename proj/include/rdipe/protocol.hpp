#pragma once

// Two-party cosine estimation from shared Bell samples and local Pauli estimates.
//
// Wire messages are JSON objects with "v": 1 and "type" in {HELLO, SETUP, BELL_RESULT,
// PAULI_ESTIMATE, PURITY, RESULT, ERROR}. Per round i (1-based) a shared coin picks the
// sampling party, which sends BELL_RESULT {i, a} and then its PAULI_ESTIMATE {i, value}; the
// other party answers with its own PAULI_ESTIMATE {i, value}.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "rdipe/errors.hpp"
#include "rdipe/sampling.hpp"
#include "rdipe/states.hpp"

namespace rdipe {

enum class Role { Alice, Bob };
enum class PurityMode { Exact, Estimated };

std::string role_name(Role r);
Role role_from_name(const std::string &s);
std::string purity_mode_name(PurityMode m);
PurityMode purity_mode_from_name(const std::string &s);

inline constexpr int kProtocolVersion = 1;

struct ProtocolConfig {
  std::size_t n = 0;
  std::uint64_t n1 = 0;  // rounds
  std::uint64_t n2 = 0;  // shots per Pauli estimate
  std::uint64_t n3 = 0;  // purity shots (estimated mode)
  double epsilon = 0.0;  // recorded when the counts come from a plan
  double delta = 0.0;
  std::uint64_t seed_alice = 0;
  std::uint64_t seed_bob = 0;
  Role role = Role::Alice;
  PurityMode purity_mode = PurityMode::Exact;
  bool keep_messages = true;  // full message log in the transcript
  unsigned threads = 1;       // reference loop only

  std::uint64_t own_seed() const noexcept { return role == Role::Alice ? seed_alice : seed_bob; }
  /// Throws InvalidArgument unless n, N1, N2 >= 1 and (estimated ⇒ N3 >= 1).
  void validate() const;
};

/// N1, N2 from sample_size_plan(n, ε, δ); N3 = N1·N2 (saturating).
ProtocolConfig planned_config(std::size_t n, double eps, double delta);

struct RoundRecord {
  std::uint64_t i = 0;
  Role sampler = Role::Alice;
  std::string a;  // base-4 label, qubit 0 first
  double alpha = 0.0;
  double beta = 0.0;
  friend bool operator==(const RoundRecord &, const RoundRecord &) = default;
};

struct TranscriptEntry {
  Role from = Role::Alice;
  nlohmann::json msg;
  friend bool operator==(const TranscriptEntry &, const TranscriptEntry &) = default;
};

/// Messages in canonical protocol order (independent of which side recorded them).
struct Transcript {
  std::vector<TranscriptEntry> messages;
  std::vector<RoundRecord> rounds;
  std::optional<double> purity_a, purity_b, f;
  friend bool operator==(const Transcript &, const Transcript &) = default;
};

/// One JSON object per line: every message as {"from", "msg"}, then a SUMMARY line.
void write_transcript_jsonl(std::ostream &os, const Transcript &t);

struct RoundValues {
  double alpha = 0.0;
  double beta = 0.0;
};

/// Mean over rounds of 2αβ / (α²√(B/A) + β²√(A/B)); a round with α = β = 0 contributes 0.
double estimator_f(const std::vector<RoundValues> &rounds, double a, double b);

/// 32-byte SETUP seed of a party, derived from its master seed.
std::array<std::uint8_t, 32> setup_seed(std::uint64_t master);

/// Fair shared coin: round i (1-based) uses bit (i−1) mod 512, most significant bit first, of
/// BLAKE2b-512 keyed by seed_a XOR seed_b over the 8-byte big-endian block (i−1) / 512.
/// Returns the sampling party.
class SharedCoin {
 public:
  SharedCoin(const std::array<std::uint8_t, 32> &seed_a, const std::array<std::uint8_t, 32> &seed_b);
  Role sampler(std::uint64_t i);

 private:
  std::array<std::uint8_t, 32> key_{};
  std::uint64_t block_ = ~std::uint64_t{0};
  std::array<std::uint8_t, 64> bits_{};
};

struct RdipeResult {
  double f = 0.0;
  Transcript transcript;
};

/// Reference loop of both parties in one process; rounds may run on `cfg.threads` workers.
/// Throws PurityTooLow unless both purities exceed 1/2, DimensionMismatch on unequal n.
RdipeResult run_rdipe(const QuantumState &rho, const QuantumState &sigma, const ProtocolConfig &cfg);

/// One party as a message-driven state machine.
class Party {
 public:
  enum class Phase { Init, AwaitHello, AwaitSetup, Rounds, AwaitPurity, AwaitResult, Done, Failed };

  Party(const ProtocolConfig &cfg, const QuantumState &state);

  /// Opening messages (HELLO).
  std::vector<nlohmann::json> start();
  /// Consumes one peer message and returns the replies. A bad message moves the party to
  /// Failed and yields a single ERROR reply; an ERROR from the peer also fails the party.
  std::vector<nlohmann::json> step(const nlohmann::json &incoming);

  Phase phase() const noexcept { return phase_; }
  bool done() const noexcept { return phase_ == Phase::Done; }
  bool failed() const noexcept { return phase_ == Phase::Failed; }
  /// Code and message of the failure (valid when failed()).
  Errc error_code() const noexcept { return error_code_; }
  const std::string &error_message() const noexcept { return error_message_; }
  double f() const;
  /// Canonically ordered log of everything sent and received so far.
  Transcript transcript() const;

 private:
  struct Keyed {
    int phase;
    std::uint64_t round;
    int slot;
    TranscriptEntry entry;
  };

  std::vector<nlohmann::json> fail_with(Errc code, const std::string &msg);
  void record(Role from, const nlohmann::json &msg);
  std::vector<nlohmann::json> begin_round();
  std::vector<nlohmann::json> finish_rounds();
  double local_estimate(const PauliString &a) const;
  Role peer() const noexcept { return cfg_.role == Role::Alice ? Role::Bob : Role::Alice; }

  ProtocolConfig cfg_;
  const QuantumState &state_;
  BellSampler sampler_;
  Phase phase_ = Phase::Init;
  Errc error_code_ = Errc::ProtocolViolation;
  std::string error_message_;

  std::array<std::uint8_t, 32> own_seed_{};
  std::optional<SharedCoin> coin_;
  std::uint64_t round_ = 0;
  Role round_sampler_ = Role::Alice;
  bool have_bell_ = false;
  RoundRecord current_;
  std::vector<RoundRecord> rounds_;
  std::optional<double> own_purity_, peer_purity_, f_;
  std::vector<Keyed> log_;
};

/// Length-prefixed framing: 4-byte big-endian length followed by the UTF-8 JSON text.
std::string encode_frame(const nlohmann::json &msg);

/// Reassembles frames from arbitrary byte chunks.
class FrameDecoder {
 public:
  void feed(std::string_view bytes);
  /// Next complete message, if any. Throws ProtocolViolation on unparsable JSON.
  std::optional<nlohmann::json> next();

 private:
  std::string buffer_;
};

/// Both parties as state machines exchanging framed bytes in memory, single-threaded.
struct InProcessResult {
  double f = 0.0;
  Transcript alice;
  Transcript bob;
};
InProcessResult run_in_process(const QuantumState &rho, const QuantumState &sigma, const ProtocolConfig &cfg);

}  // namespace rdipe
