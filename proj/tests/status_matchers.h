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

#ifndef LDPMIN_TESTS_STATUS_MATCHERS_H_
#define LDPMIN_TESTS_STATUS_MATCHERS_H_

#include <ostream>
#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "gmock/gmock.h"

namespace ldpmin::testing {

inline const absl::Status& GetStatus(const absl::Status& s) { return s; }
template <typename T>
const absl::Status& GetStatus(const absl::StatusOr<T>& s) {
  return s.status();
}

MATCHER(IsOk, "is OK") { return GetStatus(arg).ok(); }

MATCHER_P(IsOkAndHolds, inner, "") {
  if (!arg.ok()) {
    *result_listener << "status " << arg.status().ToString();
    return false;
  }
  return ::testing::ExplainMatchResult(inner, *arg, result_listener);
}

MATCHER_P2(StatusIs, code, message, "") {
  const absl::Status& s = GetStatus(arg);
  *result_listener << "status " << s.ToString();
  return s.code() == code &&
         ::testing::Matches(message)(std::string(s.message()));
}

}  // namespace ldpmin::testing

#define ASSERT_OK(expr) ASSERT_THAT(expr, ::ldpmin::testing::IsOk())
#define EXPECT_OK(expr) EXPECT_THAT(expr, ::ldpmin::testing::IsOk())

#endif  // LDPMIN_TESTS_STATUS_MATCHERS_H_
