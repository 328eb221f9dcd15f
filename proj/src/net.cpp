#include "rdipe/net.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <thread>

namespace rdipe {

namespace {

[[noreturn]] void sys_fail(const std::string &what) {
  fail(Errc::ChannelError, what + ": " + std::strerror(errno));
}

void set_nodelay(int fd) {
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
}

addrinfo *resolve(const Endpoint &ep, bool passive) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  if (passive) hints.ai_flags = AI_PASSIVE;
  addrinfo *res = nullptr;
  const std::string port = std::to_string(ep.port);
  const int rc = ::getaddrinfo(ep.host.c_str(), port.c_str(), &hints, &res);
  if (rc != 0) fail(Errc::ChannelError, "cannot resolve " + ep.host + ": " + ::gai_strerror(rc));
  return res;
}

}  // namespace

SocketChannel::~SocketChannel() { close(); }

void SocketChannel::close() noexcept {
  if (fd_ >= 0) ::close(fd_);
  fd_ = -1;
}

void SocketChannel::send(const nlohmann::json &msg) {
  if (fd_ < 0) fail(Errc::ChannelError, "channel is closed");
  const std::string frame = encode_frame(msg);
  std::size_t off = 0;
  while (off < frame.size()) {
    const ssize_t k = ::send(fd_, frame.data() + off, frame.size() - off, MSG_NOSIGNAL);
    if (k < 0) {
      if (errno == EINTR) continue;
      sys_fail("send failed");
    }
    off += std::size_t(k);
  }
}

nlohmann::json SocketChannel::recv() {
  if (fd_ < 0) fail(Errc::ChannelError, "channel is closed");
  char buf[1 << 14];
  for (;;) {
    if (auto m = decoder_.next()) return std::move(*m);
    const ssize_t k = ::recv(fd_, buf, sizeof buf, 0);
    if (k == 0) fail(Errc::ChannelError, "peer closed the connection");
    if (k < 0) {
      if (errno == EINTR) continue;
      sys_fail("recv failed");
    }
    decoder_.feed(std::string_view(buf, std::size_t(k)));
  }
}

Endpoint parse_endpoint(const std::string &addr) {
  Endpoint ep{"127.0.0.1", 0};
  const auto colon = addr.rfind(':');
  const std::string port = colon == std::string::npos ? addr : addr.substr(colon + 1);
  if (colon != std::string::npos && colon > 0) ep.host = addr.substr(0, colon);
  try {
    std::size_t used = 0;
    const unsigned long p = std::stoul(port, &used);
    if (used != port.size() || p > 65535) throw std::out_of_range("port");
    ep.port = static_cast<std::uint16_t>(p);
  } catch (const std::exception &) {
    fail(Errc::InvalidArgument, "bad address '" + addr + "' (want host:port)");
  }
  return ep;
}

SocketChannel connect_to(const Endpoint &ep, int attempts, int delay_ms) {
  std::string last = "no attempt made";
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    addrinfo *res = resolve(ep, false);
    for (addrinfo *ai = res; ai; ai = ai->ai_next) {
      const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
      if (fd < 0) continue;
      if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
        ::freeaddrinfo(res);
        set_nodelay(fd);
        return SocketChannel(fd);
      }
      last = std::strerror(errno);
      ::close(fd);
    }
    ::freeaddrinfo(res);
    if (attempt < attempts) std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
  }
  fail(Errc::ChannelError, "could not connect to " + ep.host + ":" + std::to_string(ep.port) + " after " +
                               std::to_string(attempts) + " attempts (" + last + ")");
}

Listener::Listener(const Endpoint &ep) {
  addrinfo *res = resolve(ep, true);
  for (addrinfo *ai = res; ai; ai = ai->ai_next) {
    const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    if (::bind(fd, ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(fd, 1) == 0) {
      fd_ = fd;
      break;
    }
    ::close(fd);
  }
  ::freeaddrinfo(res);
  if (fd_ < 0) sys_fail("cannot listen on " + ep.host + ":" + std::to_string(ep.port));
  sockaddr_storage ss{};
  socklen_t len = sizeof ss;
  ::getsockname(fd_, reinterpret_cast<sockaddr *>(&ss), &len);
  port_ = ss.ss_family == AF_INET6 ? ntohs(reinterpret_cast<sockaddr_in6 *>(&ss)->sin6_port)
                                   : ntohs(reinterpret_cast<sockaddr_in *>(&ss)->sin_port);
}

Listener::~Listener() {
  if (fd_ >= 0) ::close(fd_);
}

SocketChannel Listener::accept(int timeout_ms) {
  pollfd p{fd_, POLLIN, 0};
  for (;;) {
    const int rc = ::poll(&p, 1, timeout_ms);
    if (rc < 0 && errno == EINTR) continue;
    if (rc < 0) sys_fail("poll failed");
    if (rc == 0) fail(Errc::ChannelError, "no peer connected within " + std::to_string(timeout_ms) + " ms");
    break;
  }
  const int fd = ::accept(fd_, nullptr, nullptr);
  if (fd < 0) sys_fail("accept failed");
  set_nodelay(fd);
  return SocketChannel(fd);
}

std::pair<SocketChannel, SocketChannel> socket_pair() {
  int fds[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM, 0, fds) != 0) sys_fail("socketpair failed");
  return {SocketChannel(fds[0]), SocketChannel(fds[1])};
}

double run_party(Party &party, Channel &ch) {
  for (const auto &m : party.start()) ch.send(m);
  while (!party.done() && !party.failed()) {
    const nlohmann::json in = ch.recv();
    for (const auto &m : party.step(in)) ch.send(m);
  }
  if (party.failed()) fail(party.error_code(), party.error_message());
  return party.f();
}

}  // namespace rdipe
