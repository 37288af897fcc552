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

#include "ldpmin/net/client.h"

#include <cmath>
#include <optional>
#include <string>

#include "absl/status/status.h"
#include "ldpmin/mechanisms.h"
#include "ldpmin/net/wire.h"
#include "ldpmin/protocol.h"
#include "ldpmin/random.h"
#include "net/socket.h"
#include "text.h"

namespace ldpmin::net {

absl::StatusOr<double> RunClient(const ClientOptions& options) {
  if (!(options.value >= -1.0 && options.value <= 1.0)) {
    return absl::InvalidArgumentError(
        text::Cat("value ", options.value, " is outside [-1, 1]"));
  }
  if (options.client_id.empty() ||
      options.client_id.find_first_of(" \n") != std::string::npos) {
    return absl::InvalidArgumentError("client id must be a non-empty token");
  }
  absl::StatusOr<Fd> fd = ConnectTcp(options.host, options.port);
  if (!fd.ok()) return fd.status();
  Connection conn(*std::move(fd));

  auto send = [&](const WireMessage& m) {
    const std::string line = Encode(m);
    if (options.on_send) options.on_send(line);
    return conn.Send(line);
  };
  if (absl::Status s = send(Hello{options.client_id}); !s.ok()) return s;

  SeededStream rng(options.seed);
  std::optional<RoundBudget> budget;
  int depth = 0;
  int expected_round = 1;
  for (;;) {
    absl::StatusOr<std::string> line =
        conn.ReadLine(Clock::now() + options.timeout);
    if (!line.ok()) return line.status();
    absl::StatusOr<WireMessage> msg = Decode(*line);
    if (!msg.ok()) return msg.status();

    if (const auto* start = std::get_if<Start>(&*msg)) {
      absl::StatusOr<RoundBudget> b = RoundBudget::Create(start->epsilon_round);
      if (!b.ok()) return b.status();
      budget = *b;
      depth = start->depth;
    } else if (const auto* query = std::get_if<Query>(&*msg)) {
      if (!budget.has_value()) {
        return absl::FailedPreconditionError("QUERY before START");
      }
      if (query->round != expected_round || query->round > depth) {
        return absl::FailedPreconditionError(
            text::Cat("unexpected QUERY for round ", query->round));
      }
      const Bit bit = UserRespond(options.value, query->tau, *budget, rng);
      if (absl::Status s = send(Resp{query->round, ToInt(bit)}); !s.ok()) {
        return s;
      }
      ++expected_round;
    } else if (const auto* result = std::get_if<Result>(&*msg)) {
      return result->estimate;
    } else if (const auto* abort = std::get_if<Abort>(&*msg)) {
      return absl::AbortedError(abort->reason);
    } else {
      return absl::FailedPreconditionError(
          text::Cat("unexpected message from server: ", *line));
    }
  }
}

}  // namespace ldpmin::net
