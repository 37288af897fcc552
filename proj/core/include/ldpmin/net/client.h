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

#ifndef LDPMIN_NET_CLIENT_H_
#define LDPMIN_NET_CLIENT_H_

#include <chrono>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"

namespace ldpmin::net {

struct ClientOptions {
  std::string host = "127.0.0.1";
  uint16_t port = 0;
  std::string client_id = "user";
  // The private datum. It never leaves the process; only randomized-response
  // bits derived from it are sent.
  double value = 0.0;
  // Seeds this user's SeededStream; one variate per query.
  uint64_t seed = 0;
  std::chrono::milliseconds timeout{60000};
  // Observes every line sent, including the trailing newline.
  std::function<void(std::string_view)> on_send;
};

// Joins a session, answers every QUERY and returns the broadcast estimate.
// A server ABORT surfaces as kAborted carrying the server's reason.
absl::StatusOr<double> RunClient(const ClientOptions& options);

}  // namespace ldpmin::net

#endif  // LDPMIN_NET_CLIENT_H_
