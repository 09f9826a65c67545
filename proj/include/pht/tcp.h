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

#ifndef PHT_TCP_H_
#define PHT_TCP_H_

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "pht/network.h"

namespace pht {

struct HostPort {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;

  std::string ToString() const;
  // "host:port". Throws BadConfig.
  static HostPort Parse(std::string_view text);
};

// Serves one endpoint over TCP with a single-threaded poll loop. Replies go
// back on the connection the request arrived on; timer output goes to the
// most recently active connection. A frame that fails to decode drops its
// connection.
class EndpointServer {
 public:
  // Binds immediately. Throws BindError.
  EndpointServer(Endpoint& endpoint, const HostPort& listen,
                 std::size_t max_payload = kDefaultMaxPayload);
  ~EndpointServer();

  EndpointServer(const EndpointServer&) = delete;
  EndpointServer& operator=(const EndpointServer&) = delete;

  std::uint16_t port() const { return port_; }

  // Returns after Stop() or once `*external_stop` reads true.
  void Serve(const std::atomic<bool>* external_stop = nullptr);
  // Safe to call from any thread or a signal handler.
  void Stop();

 private:
  struct Conn;

  Endpoint& endpoint_;
  std::size_t max_payload_;
  int listen_fd_ = -1;
  int wake_pipe_[2] = {-1, -1};
  std::uint16_t port_ = 0;
};

struct TcpHubOptions {
  // Whole-run limit; exceeding it aborts the run with Timeout.
  Millis overall_timeout = 120'000;
  // Idle time after the researcher finishes before connections are closed.
  Millis quiet_period = 150;
  std::size_t max_payload = kDefaultMaxPayload;
};

// Connects to every remote endpoint and routes frames between them and the
// local researcher. Connection failures abort the run with TransportError.
RunOutcome RunTcpHub(ResearcherEndpoint& researcher,
                     const std::map<std::string, HostPort>& endpoints, const FaultPlan& faults,
                     const TcpHubOptions& options = {});

// Serves each station on 127.0.0.1 from its own thread for the duration of
// one hub run.
RunOutcome RunOverLoopback(ResearcherEndpoint& researcher, const std::vector<Endpoint*>& stations,
                           const FaultPlan& faults, const TcpHubOptions& options = {});

}  // namespace pht

#endif  // PHT_TCP_H_
