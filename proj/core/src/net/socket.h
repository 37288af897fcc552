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

#ifndef LDPMIN_NET_SOCKET_H_
#define LDPMIN_NET_SOCKET_H_

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace ldpmin::net {

using Clock = std::chrono::steady_clock;

// Owning file descriptor.
class Fd {
 public:
  Fd() = default;
  explicit Fd(int fd) : fd_(fd) {}
  Fd(Fd&& other) noexcept : fd_(other.release()) {}
  Fd& operator=(Fd&& other) noexcept;
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  ~Fd();

  int get() const { return fd_; }
  bool valid() const { return fd_ >= 0; }
  int release();

 private:
  int fd_ = -1;
};

// Line-buffered stream connection.
class Connection {
 public:
  explicit Connection(Fd fd) : fd_(std::move(fd)) {}

  int fd() const { return fd_.get(); }

  // Writes the whole buffer; fails if the peer has gone away.
  absl::Status Send(std::string_view data);

  // One non-blocking-ish read of whatever is available. Returns false on
  // orderly shutdown by the peer.
  absl::StatusOr<bool> ReadSome();

  // Next complete line without its terminator, if buffered. Fails when an
  // unterminated line grows past kMaxLine.
  absl::StatusOr<std::optional<std::string>> PopLine();

  // Blocks until a full line arrives or the deadline passes.
  absl::StatusOr<std::string> ReadLine(Clock::time_point deadline);

  static constexpr size_t kMaxLine = 4096;

 private:
  Fd fd_;
  std::string buffer_;
};

absl::StatusOr<Fd> ListenTcp(const std::string& host, uint16_t port,
                             int backlog);
absl::StatusOr<uint16_t> LocalPort(int fd);
absl::StatusOr<Fd> AcceptTcp(int listen_fd);
absl::StatusOr<Fd> ConnectTcp(const std::string& host, uint16_t port);

// Milliseconds left until the deadline, floored at zero, for poll().
int MillisUntil(Clock::time_point deadline);

}  // namespace ldpmin::net

#endif  // LDPMIN_NET_SOCKET_H_
