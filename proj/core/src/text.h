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

#ifndef LDPMIN_SRC_TEXT_H_
#define LDPMIN_SRC_TEXT_H_

#include <charconv>
#include <cmath>
#include <iterator>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "absl/status/status.h"
#include "fmt/format.h"

namespace ldpmin::text {

// Concatenates the fmt "{}" rendering of each argument.
template <typename... Args>
std::string Cat(const Args&... args) {
  std::string out;
  (fmt::format_to(std::back_inserter(out), "{}", args), ...);
  return out;
}

inline std::string_view Trim(std::string_view s) {
  constexpr std::string_view kSpace = " \t\r\n\f\v";
  const size_t b = s.find_first_not_of(kSpace);
  if (b == std::string_view::npos) return {};
  const size_t e = s.find_last_not_of(kSpace);
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> Split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  for (;;) {
    const size_t pos = s.find(sep);
    out.push_back(s.substr(0, pos));
    if (pos == std::string_view::npos) return out;
    s.remove_prefix(pos + 1);
  }
}

// Whole-token decimal parse. "inf" is accepted only when allow_inf is set;
// NaN never is.
inline std::optional<double> ParseDouble(std::string_view s,
                                         bool allow_inf = false) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s == "inf") {
    if (!allow_inf) return std::nullopt;
    return std::numeric_limits<double>::infinity();
  }
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

template <typename Int>
std::optional<Int> ParseInt(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  Int v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    return std::nullopt;
  }
  return v;
}

inline std::string Message(const absl::Status& status) {
  return std::string(status.message());
}

// Same code, message prefixed with context.
inline absl::Status Annotate(const absl::Status& status,
                             std::string_view context) {
  std::string msg(context);
  msg += ": ";
  msg += Message(status);
  return absl::Status(status.code(), msg);
}

}  // namespace ldpmin::text

#endif  // LDPMIN_SRC_TEXT_H_
