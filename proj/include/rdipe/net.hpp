#pragma once

// Blocking framed-JSON channels over stream sockets.

#include <cstdint>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "rdipe/protocol.hpp"

namespace rdipe {

class Channel {
 public:
  virtual ~Channel() = default;
  virtual void send(const nlohmann::json &msg) = 0;
  /// Blocks for the next message. Throws ChannelError when the peer goes away.
  virtual nlohmann::json recv() = 0;
};

/// Owns a connected stream socket.
class SocketChannel final : public Channel {
 public:
  explicit SocketChannel(int fd) : fd_(fd) {}
  ~SocketChannel() override;
  SocketChannel(SocketChannel &&o) noexcept : fd_(std::exchange(o.fd_, -1)), decoder_(std::move(o.decoder_)) {}
  SocketChannel &operator=(SocketChannel &&) = delete;

  void send(const nlohmann::json &msg) override;
  nlohmann::json recv() override;
  void close() noexcept;

 private:
  int fd_ = -1;
  FrameDecoder decoder_;
};

struct Endpoint {
  std::string host;
  std::uint16_t port = 0;
};

/// "host:port"; host defaults to 127.0.0.1 when only ":port" or "port" is given.
Endpoint parse_endpoint(const std::string &addr);

/// TCP connect, retrying `attempts` times `delay_ms` apart. ChannelError names the attempt count.
SocketChannel connect_to(const Endpoint &ep, int attempts = 20, int delay_ms = 250);

class Listener {
 public:
  explicit Listener(const Endpoint &ep);
  ~Listener();
  Listener(const Listener &) = delete;
  Listener &operator=(const Listener &) = delete;

  /// Bound port (useful with port 0).
  std::uint16_t port() const noexcept { return port_; }
  /// Waits up to timeout_ms (negative: forever) for one peer.
  SocketChannel accept(int timeout_ms = -1);

 private:
  int fd_ = -1;
  std::uint16_t port_ = 0;
};

/// Connected local socket pair, for tests.
std::pair<SocketChannel, SocketChannel> socket_pair();

/// Drives a party to completion. On failure the ERROR reply (if any) is sent, then the
/// party's error is thrown; the party keeps its partial transcript either way.
double run_party(Party &party, Channel &ch);

}  // namespace rdipe
