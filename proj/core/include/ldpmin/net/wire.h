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

#ifndef LDPMIN_NET_WIRE_H_
#define LDPMIN_NET_WIRE_H_

#include <string>
#include <string_view>
#include <variant>

#include "absl/status/statusor.h"

namespace ldpmin::net {

// Line protocol between aggregator and users. One message per '\n'-terminated
// UTF-8 line, space-separated fields, message name first. Reals use the
// shortest round-trip decimal, so dyadic tau values travel exactly.
//
//   HELLO <client_id>                       user -> server
//   START <session_id> <depth> <eps_round>  server -> user
//   QUERY <round> <tau>                     server -> user
//   RESP <round> <bit>                      user -> server, bit in {-1, 1}
//   RESULT <estimate>                       server -> user
//   ABORT <reason...>                       server -> user

struct Hello {
  std::string client_id;
};
struct Start {
  std::string session_id;
  int depth = 0;
  double epsilon_round = 0.0;
};
struct Query {
  int round = 0;
  double tau = 0.0;
};
struct Resp {
  int round = 0;
  int bit = 0;
};
struct Result {
  double estimate = 0.0;
};
struct Abort {
  std::string reason;
};

using WireMessage = std::variant<Hello, Start, Query, Resp, Result, Abort>;

// Encoded line including the trailing '\n'.
std::string Encode(const WireMessage& message);

// Parses one line (with or without the trailing newline) and checks field
// domains: bit in {-1, 1}, tau in [-1, 1], round >= 1, depth >= 1.
absl::StatusOr<WireMessage> Decode(std::string_view line);

}  // namespace ldpmin::net

#endif  // LDPMIN_NET_WIRE_H_
