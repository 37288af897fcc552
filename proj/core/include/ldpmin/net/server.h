//
// Copyright 2026 The ldpmin Authors.
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
//

#ifndef LDPMIN_NET_SERVER_H_
#define LDPMIN_NET_SERVER_H_

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"
#include "ldpmin/protocol.h"

namespace ldpmin::net {

struct ServerOptions {
  std::string bind_host = "127.0.0.1";
  // 0 picks an ephemeral port; read it back with AggregatorServer::port().
  uint16_t port = 0;
  // Limit for the registration phase and for each round.
  std::chrono::milliseconds round_timeout{30000};
  std::string session_id = "session";
  // Observes every line received from a registered connection, in arrival
  // order, tagged with the connection's registration index.
  std::function<void(int, std::string_view)> on_client_line;
};

// Aggregator of the private minimum search. Users only ever send sanitized
// bits; phi' is computed here from their sum.
//
// Round t+1 is not queried until all N responses of round t are in. Any
// timeout, disconnect, duplicate or malformed response aborts the whole
// session: the estimator assumes the same N users in every round.
class AggregatorServer {
 public:
  static absl::StatusOr<AggregatorServer> Listen(ServerOptions options);

  AggregatorServer(AggregatorServer&&) noexcept;
  AggregatorServer& operator=(AggregatorServer&&) noexcept;
  ~AggregatorServer();

  uint16_t port() const;

  // Waits for config.n users, runs config.depth rounds and broadcasts the
  // estimate. On failure every connected user receives ABORT.
  absl::StatusOr<Transcript> Serve(const ProtocolConfig& config);

 private:
  struct State;
  explicit AggregatorServer(std::unique_ptr<State> state);

  std::unique_ptr<State> state_;
};

}  // namespace ldpmin::net

#endif  // LDPMIN_NET_SERVER_H_
