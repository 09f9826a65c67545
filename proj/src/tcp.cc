// Copyright 2026 The PHT Link Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pht/tcp.h"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>
#include <deque>
#include <thread>

#include "pht/error.h"

namespace pht {
namespace {

constexpr int kPollIntervalMs = 10;
constexpr Millis kStopGraceMs = 2000;

void SetNonBlocking(int fd) { ::fcntl(fd, F_SETFL, ::fcntl(fd, F_GETFL, 0) | O_NONBLOCK); }

sockaddr_in Resolve(const HostPort& hp, ErrorCode code) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  if (::getaddrinfo(hp.host.c_str(), nullptr, &hints, &res) != 0 || res == nullptr) {
    throw Error(code, "cannot resolve " + hp.host);
  }
  sockaddr_in addr = *reinterpret_cast<sockaddr_in*>(res->ai_addr);
  ::freeaddrinfo(res);
  addr.sin_port = htons(hp.port);
  return addr;
}

// A non-blocking socket with buffered output and a frame reader.
struct Stream {
  int fd = -1;
  FrameReader reader;
  Bytes out;
  std::size_t out_pos = 0;
  bool open = true;

  explicit Stream(int f, std::size_t max_payload) : fd(f), reader(max_payload) {}
  ~Stream() { Close(); }

  void Close() {
    if (fd >= 0) ::close(fd);
    fd = -1;
    open = false;
  }
  bool Pending() const { return out_pos < out.size(); }
  void Queue(const Bytes& frame) { out.insert(out.end(), frame.begin(), frame.end()); }

  // False once the peer closed or the socket failed.
  bool ReadAvailable() {
    std::uint8_t buf[65536];
    while (true) {
      ssize_t n = ::recv(fd, buf, sizeof(buf), 0);
      if (n > 0) {
        reader.Feed(ByteView(buf, static_cast<std::size_t>(n)));
      } else if (n == 0) {
        return false;
      } else if (errno == EINTR) {
        continue;
      } else {
        return errno == EAGAIN || errno == EWOULDBLOCK;
      }
    }
  }

  bool Flush() {
    while (Pending()) {
      ssize_t n = ::send(fd, out.data() + out_pos, out.size() - out_pos, MSG_NOSIGNAL);
      if (n > 0) {
        out_pos += static_cast<std::size_t>(n);
      } else if (n < 0 && errno == EINTR) {
        continue;
      } else if (n < 0 && (errno == EAGAIN || errno == EWOULDBLOCK)) {
        return true;
      } else {
        return false;
      }
    }
    out.clear();
    out_pos = 0;
    return true;
  }
};

int ConnectTo(const HostPort& hp) {
  sockaddr_in addr = Resolve(hp, ErrorCode::kTransportError);
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw Error(ErrorCode::kTransportError, std::strerror(errno));
  if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    std::string why = std::strerror(errno);
    ::close(fd);
    throw Error(ErrorCode::kTransportError, "connect " + hp.ToString() + ": " + why);
  }
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  SetNonBlocking(fd);
  return fd;
}

}  // namespace

std::string HostPort::ToString() const { return host + ":" + std::to_string(port); }

HostPort HostPort::Parse(std::string_view text) {
  auto colon = text.rfind(':');
  if (colon == std::string_view::npos || colon == 0) {
    throw Error(ErrorCode::kBadConfig, "address '" + std::string(text) + "' is not host:port");
  }
  HostPort hp;
  hp.host = std::string(text.substr(0, colon));
  std::string_view port = text.substr(colon + 1);
  unsigned value = 0;
  auto [p, ec] = std::from_chars(port.data(), port.data() + port.size(), value);
  if (ec != std::errc() || p != port.data() + port.size() || value > 65535) {
    throw Error(ErrorCode::kBadConfig, "bad port in '" + std::string(text) + "'");
  }
  hp.port = static_cast<std::uint16_t>(value);
  return hp;
}

struct EndpointServer::Conn {
  explicit Conn(int fd, std::size_t max_payload) : stream(fd, max_payload) {}
  Stream stream;
};

EndpointServer::EndpointServer(Endpoint& endpoint, const HostPort& listen,
                               std::size_t max_payload)
    : endpoint_(endpoint), max_payload_(max_payload) {
  sockaddr_in addr = Resolve(listen, ErrorCode::kBindError);
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw Error(ErrorCode::kBindError, std::strerror(errno));
  int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 ||
      ::listen(listen_fd_, 16) != 0) {
    std::string why = std::strerror(errno);
    ::close(listen_fd_);
    throw Error(ErrorCode::kBindError, listen.ToString() + ": " + why);
  }
  socklen_t len = sizeof(addr);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
  SetNonBlocking(listen_fd_);
  if (::pipe(wake_pipe_) != 0) {
    ::close(listen_fd_);
    throw Error(ErrorCode::kBindError, "pipe failed");
  }
  SetNonBlocking(wake_pipe_[0]);
  SetNonBlocking(wake_pipe_[1]);
}

EndpointServer::~EndpointServer() {
  if (listen_fd_ >= 0) ::close(listen_fd_);
  for (int fd : wake_pipe_) {
    if (fd >= 0) ::close(fd);
  }
}

void EndpointServer::Stop() {
  char c = 1;
  [[maybe_unused]] ssize_t n = ::write(wake_pipe_[1], &c, 1);
}

void EndpointServer::Serve(const std::atomic<bool>* external_stop) {
  std::vector<std::unique_ptr<Conn>> conns;
  Conn* last = nullptr;
  std::optional<Millis> stopping_since;

  auto dispatch = [&](Conn& c, const std::vector<Message>& msgs) {
    for (const Message& m : msgs) c.stream.Queue(Encode(m));
  };

  while (true) {
    Millis now = WallClockMillis();
    if (external_stop != nullptr && external_stop->load() && !stopping_since) stopping_since = now;
    if (stopping_since && (conns.empty() || now - *stopping_since > kStopGraceMs)) break;

    std::vector<pollfd> fds;
    fds.push_back({listen_fd_, POLLIN, 0});
    fds.push_back({wake_pipe_[0], POLLIN, 0});
    for (auto& c : conns) {
      short events = POLLIN;
      if (c->stream.Pending()) events |= POLLOUT;
      fds.push_back({c->stream.fd, events, 0});
    }
    ::poll(fds.data(), fds.size(), kPollIntervalMs);
    now = WallClockMillis();

    if (fds[1].revents & POLLIN) {
      char buf[64];
      while (::read(wake_pipe_[0], buf, sizeof(buf)) > 0) {
      }
      if (!stopping_since) stopping_since = now;
    }
    if (fds[0].revents & POLLIN && !stopping_since) {
      while (true) {
        int fd = ::accept(listen_fd_, nullptr, nullptr);
        if (fd < 0) break;
        int one = 1;
        ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
        SetNonBlocking(fd);
        conns.push_back(std::make_unique<Conn>(fd, max_payload_));
      }
    }
    for (std::size_t i = 0; i < conns.size(); ++i) {
      Conn& c = *conns[i];
      short rev = fds[i + 2].revents;
      if (rev & (POLLIN | POLLHUP | POLLERR)) {
        bool alive = c.stream.ReadAvailable();
        try {
          while (auto frame = c.stream.reader.NextFrame()) {
            Message m = Decode(*frame, max_payload_);
            last = &c;
            try {
              dispatch(c, endpoint_.Handle(m, now));
            } catch (const std::exception&) {
              // A state machine bug must not take the daemon down.
            }
          }
        } catch (const DecodeError&) {
          alive = false;
        }
        if (!alive) {
          c.stream.Flush();
          c.stream.Close();
        }
      }
      if (c.stream.open && c.stream.Pending() && !c.stream.Flush()) c.stream.Close();
    }
    std::vector<Message> timed = endpoint_.Tick(now);
    if (!timed.empty() && last != nullptr && last->stream.open) {
      dispatch(*last, timed);
      if (!last->stream.Flush()) last->stream.Close();
    }
    std::erase_if(conns, [&](const std::unique_ptr<Conn>& c) {
      if (c->stream.open) return false;
      if (last == c.get()) last = nullptr;
      return true;
    });
  }
}

RunOutcome RunTcpHub(ResearcherEndpoint& researcher,
                     const std::map<std::string, HostPort>& endpoints, const FaultPlan& faults,
                     const TcpHubOptions& options) {
  Router router(faults);
  std::map<std::string, std::unique_ptr<Stream>> links;
  std::optional<std::string> failure;

  for (const auto& [id, hp] : endpoints) {
    try {
      links[id] = std::make_unique<Stream>(ConnectTo(hp), options.max_payload);
    } catch (const Error& e) {
      failure = "TransportError";
      break;
    }
  }

  std::deque<std::pair<std::string, Bytes>> queue;
  auto enqueue = [&](const std::string& from, const std::vector<Message>& msgs) {
    for (const Message& m : msgs) queue.emplace_back(from, Encode(m));
  };
  const Millis start = WallClockMillis();
  Millis last_activity = start;
  std::optional<std::string> forced;
  if (!failure) enqueue(researcher.id(), researcher.Start(start));

  while (true) {
    Millis now = WallClockMillis();
    while (!queue.empty()) {
      auto [from, frame] = std::move(queue.front());
      queue.pop_front();
      std::optional<Router::Delivery> d;
      try {
        d = router.Route(from, frame);
      } catch (const DecodeError&) {
        continue;
      }
      if (!d) continue;
      if (d->to == researcher.id()) {
        router.RecordDelivery(d->to, d->frame);
        enqueue(researcher.id(), researcher.Handle(Decode(d->frame), now));
      } else if (auto it = links.find(d->to); it != links.end() && it->second->open) {
        router.RecordDelivery(d->to, d->frame);
        it->second->Queue(d->frame);
        last_activity = now;
      }
    }

    bool pending = researcher.researcher().status() == RunStatus::kPending;
    if (failure && pending) {
      forced = *failure;
      break;
    }
    bool flushing = false;
    for (auto& [id, s] : links) flushing |= s->open && s->Pending();
    if (!pending && !flushing && now - last_activity >= options.quiet_period) break;
    if (now - start > options.overall_timeout) {
      if (pending) forced = "Timeout";
      break;
    }

    std::vector<pollfd> fds;
    std::vector<Stream*> order;
    for (auto& [id, s] : links) {
      if (!s->open) continue;
      short events = POLLIN;
      if (s->Pending()) events |= POLLOUT;
      fds.push_back({s->fd, events, 0});
      order.push_back(s.get());
    }
    ::poll(fds.data(), fds.size(), kPollIntervalMs);
    now = WallClockMillis();
    std::size_t k = 0;
    for (auto& [id, s] : links) {
      if (!s->open) continue;
      short rev = fds[k++].revents;
      bool ok = true;
      if (rev & POLLOUT) ok = s->Flush();
      if (ok && (rev & (POLLIN | POLLHUP | POLLERR))) {
        ok = s->ReadAvailable();
        try {
          while (auto frame = s->reader.NextFrame()) {
            queue.emplace_back(id, std::move(*frame));
            last_activity = now;
          }
        } catch (const DecodeError&) {
          ok = false;
        }
      }
      if (!ok) {
        s->Close();
        if (researcher.researcher().status() == RunStatus::kPending) failure = "TransportError";
      }
    }
  }
  for (auto& [id, s] : links) {
    if (s->open) s->Flush();
    s->Close();
  }

  RunOutcome out;
  const Researcher& r = researcher.researcher();
  out.status = forced ? RunStatus::kAborted : r.status();
  out.abort_reason = forced ? *forced : r.abort_reason();
  out.result = r.result();
  out.milestones = r.milestones();
  out.trace = std::move(router.trace());
  out.delivered = std::move(router.delivered());
  return out;
}

RunOutcome RunOverLoopback(ResearcherEndpoint& researcher, const std::vector<Endpoint*>& stations,
                           const FaultPlan& faults, const TcpHubOptions& options) {
  std::vector<std::unique_ptr<EndpointServer>> servers;
  std::map<std::string, HostPort> addresses;
  for (Endpoint* e : stations) {
    servers.push_back(std::make_unique<EndpointServer>(*e, HostPort{"127.0.0.1", 0},
                                                       options.max_payload));
    addresses[e->id()] = HostPort{"127.0.0.1", servers.back()->port()};
  }
  std::vector<std::thread> threads;
  for (auto& s : servers) threads.emplace_back([&s] { s->Serve(); });
  RunOutcome out = RunTcpHub(researcher, addresses, faults, options);
  for (auto& s : servers) s->Stop();
  for (auto& t : threads) t.join();
  return out;
}

}  // namespace pht
