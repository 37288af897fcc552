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

#include "ldpmin/net/wire.h"

#include <cmath>
#include <optional>
#include <vector>

#include "absl/status/status.h"
#include "ldpmin/report.h"
#include "text.h"

namespace ldpmin::net {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool ParseWireReal(std::string_view s, double& out) {
  std::optional<double> v = text::ParseDouble(s, /*allow_inf=*/true);
  if (!v.has_value()) return false;
  out = *v;
  return true;
}

template <typename Int>
bool ParseWireInt(std::string_view s, Int& out) {
  std::optional<Int> v = text::ParseInt<Int>(s);
  if (!v.has_value()) return false;
  out = *v;
  return true;
}

absl::Status Malformed(std::string_view line, std::string_view why) {
  return absl::InvalidArgumentError(
      text::Cat("malformed message '", line, "': ", why));
}

}  // namespace

std::string Encode(const WireMessage& message) {
  return std::visit(
      Overloaded{
          [](const Hello& m) { return text::Cat("HELLO ", m.client_id, "\n"); },
          [](const Start& m) {
            return text::Cat("START ", m.session_id, " ", m.depth, " ",
                                FormatReal(m.epsilon_round), "\n");
          },
          [](const Query& m) {
            return text::Cat("QUERY ", m.round, " ", FormatReal(m.tau),
                                "\n");
          },
          [](const Resp& m) {
            return text::Cat("RESP ", m.round, " ", m.bit, "\n");
          },
          [](const Result& m) {
            return text::Cat("RESULT ", FormatReal(m.estimate), "\n");
          },
          [](const Abort& m) { return text::Cat("ABORT ", m.reason, "\n"); },
      },
      message);
}

absl::StatusOr<WireMessage> Decode(std::string_view line) {
  if (!line.empty() && line.back() == '\n') line.remove_suffix(1);
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  const size_t space = line.find(' ');
  const std::string_view name = line.substr(0, space);
  const std::string_view rest =
      space == std::string_view::npos ? std::string_view() : line.substr(space + 1);

  if (name == "ABORT") return Abort{std::string(rest)};

  const std::vector<std::string_view> fields =
      rest.empty() ? std::vector<std::string_view>() : text::Split(rest, ' ');
  auto expect = [&](size_t count) { return fields.size() == count; };

  if (name == "HELLO") {
    if (!expect(1) || fields[0].empty()) return Malformed(line, "HELLO takes one id");
    return Hello{std::string(fields[0])};
  }
  if (name == "START") {
    Start m;
    if (!expect(3) || fields[0].empty() ||
        !ParseWireInt(fields[1], m.depth) || m.depth < 1 ||
        !ParseWireReal(fields[2], m.epsilon_round) || !(m.epsilon_round > 0)) {
      return Malformed(line, "START takes <session> <depth >= 1> <eps > 0>");
    }
    m.session_id = std::string(fields[0]);
    return m;
  }
  if (name == "QUERY") {
    Query m;
    if (!expect(2) || !ParseWireInt(fields[0], m.round) || m.round < 1 ||
        !ParseWireReal(fields[1], m.tau) || !(m.tau >= -1.0 && m.tau <= 1.0)) {
      return Malformed(line, "QUERY takes <round >= 1> <tau in [-1, 1]>");
    }
    return m;
  }
  if (name == "RESP") {
    Resp m;
    if (!expect(2) || !ParseWireInt(fields[0], m.round) || m.round < 1 ||
        !ParseWireInt(fields[1], m.bit) || (m.bit != 1 && m.bit != -1)) {
      return Malformed(line, "RESP takes <round >= 1> <bit in {-1, 1}>");
    }
    return m;
  }
  if (name == "RESULT") {
    Result m;
    if (!expect(1) || !ParseWireReal(fields[0], m.estimate) ||
        !std::isfinite(m.estimate)) {
      return Malformed(line, "RESULT takes one finite real");
    }
    return m;
  }
  return Malformed(line, "unknown message");
}

}  // namespace ldpmin::net
