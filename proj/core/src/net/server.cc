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

#include "ldpmin/net/server.h"

#include <poll.h>

#include <cerrno>
#include <optional>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "ldpmin/net/wire.h"
#include "net/socket.h"
#include "text.h"

namespace ldpmin::net {

struct AggregatorServer::State {
  ServerOptions options;
  Fd listener;
  uint16_t port = 0;
};

namespace {

class Session {
 public:
  Session(const ServerOptions& options, int listen_fd)
      : options_(options), listen_fd_(listen_fd) {}

  absl::StatusOr<Transcript> Run(const ProtocolConfig& config);

 private:
  // A failure attributable to one connection, or to nobody (-1).
  struct Failure {
    int client = -1;
    absl::Status status;
  };

  std::optional<Failure> Register(int64_t expected);
  std::optional<Failure> CollectRound(int round, int64_t& sum);
  absl::Status AbortAll(const Failure& failure);

  // Polls all registered connections (and the listener while registering)
  // and hands each complete line to `on_line`.
  template <typename OnLine>
  std::optional<Failure> Pump(Clock::time_point deadline, bool accepting,
                              OnLine on_line);

  const ServerOptions& options_;
  int listen_fd_;
  std::vector<Connection> clients_;
  std::vector<bool> registered_;
};

template <typename OnLine>
std::optional<Session::Failure> Session::Pump(Clock::time_point deadline,
                                              bool accepting, OnLine on_line) {
  std::vector<pollfd> fds;
  if (accepting) fds.push_back({listen_fd_, POLLIN, 0});
  const size_t offset = fds.size();
  for (const Connection& c : clients_) fds.push_back({c.fd(), POLLIN, 0});

  const int rc = ::poll(fds.data(), fds.size(), MillisUntil(deadline));
  if (rc < 0) {
    if (errno == EINTR) return std::nullopt;
    return Failure{-1, absl::InternalError("poll failed")};
  }
  if (rc == 0) {
    return Failure{-1, absl::DeadlineExceededError("timeout")};
  }
  if (accepting && (fds[0].revents & POLLIN)) {
    absl::StatusOr<Fd> fd = AcceptTcp(listen_fd_);
    if (fd.ok()) {
      clients_.emplace_back(*std::move(fd));
      registered_.push_back(false);
    }
  }
  for (size_t k = offset; k < fds.size(); ++k) {
    if (!(fds[k].revents & (POLLIN | POLLHUP | POLLERR))) continue;
    const int client = static_cast<int>(k - offset);
    Connection& conn = clients_[static_cast<size_t>(client)];
    absl::StatusOr<bool> more = conn.ReadSome();
    if (!more.ok() || !*more) {
      return Failure{client, absl::UnavailableError("client disconnected")};
    }
    for (;;) {
      absl::StatusOr<std::optional<std::string>> line = conn.PopLine();
      if (!line.ok()) return Failure{client, line.status()};
      if (!line->has_value()) break;
      if (options_.on_client_line) options_.on_client_line(client, **line);
      if (std::optional<Failure> f = on_line(client, **line)) return f;
    }
  }
  return std::nullopt;
}

std::optional<Session::Failure> Session::Register(int64_t expected) {
  const Clock::time_point deadline = Clock::now() + options_.round_timeout;
  int64_t count = 0;
  while (count < expected) {
    std::optional<Failure> f = Pump(
        deadline, /*accepting=*/true,
        [&](int client, const std::string& line) -> std::optional<Failure> {
          absl::StatusOr<WireMessage> msg = Decode(line);
          if (!msg.ok()) return Failure{client, msg.status()};
          if (!std::holds_alternative<Hello>(*msg) ||
              registered_[static_cast<size_t>(client)]) {
            return Failure{client, absl::InvalidArgumentError(
                                       "expected a single HELLO")};
          }
          registered_[static_cast<size_t>(client)] = true;
          ++count;
          return std::nullopt;
        });
    if (f.has_value()) return f;
  }
  // Connections that never said HELLO do not take part.
  std::vector<Connection> kept;
  for (size_t i = 0; i < clients_.size(); ++i) {
    if (registered_[i]) {
      kept.push_back(std::move(clients_[i]));
    } else {
      clients_[i].Send(Encode(Abort{"session full"})).IgnoreError();
    }
  }
  clients_ = std::move(kept);
  registered_.assign(clients_.size(), true);
  return std::nullopt;
}

std::optional<Session::Failure> Session::CollectRound(int round,
                                                      int64_t& sum) {
  const Clock::time_point deadline = Clock::now() + options_.round_timeout;
  std::vector<bool> answered(clients_.size(), false);
  size_t count = 0;
  sum = 0;
  while (count < clients_.size()) {
    std::optional<Failure> f = Pump(
        deadline, /*accepting=*/false,
        [&](int client, const std::string& line) -> std::optional<Failure> {
          absl::StatusOr<WireMessage> msg = Decode(line);
          if (!msg.ok()) return Failure{client, msg.status()};
          const Resp* resp = std::get_if<Resp>(&*msg);
          if (resp == nullptr || resp->round != round) {
            return Failure{client, absl::InvalidArgumentError(text::Cat(
                                       "expected RESP for round ", round))};
          }
          if (answered[static_cast<size_t>(client)]) {
            return Failure{client,
                           absl::InvalidArgumentError("duplicate RESP")};
          }
          answered[static_cast<size_t>(client)] = true;
          sum += resp->bit;
          ++count;
          return std::nullopt;
        });
    if (f.has_value()) return f;
  }
  return std::nullopt;
}

absl::Status Session::AbortAll(const Failure& failure) {
  const std::string reason =
      failure.status.code() == absl::StatusCode::kDeadlineExceeded
          ? std::string("timeout")
          : text::Message(failure.status);
  for (size_t i = 0; i < clients_.size(); ++i) {
    const std::string line =
        static_cast<int>(i) == failure.client
            ? Encode(Abort{reason})
            : Encode(Abort{text::Cat("session aborted: ", reason)});
    clients_[i].Send(line).IgnoreError();
  }
  return absl::Status(failure.status.code(),
                      failure.client >= 0
                          ? text::Cat("client ", failure.client, ": ",
                                         text::Message(failure.status))
                          : text::Message(failure.status));
}

absl::StatusOr<Transcript> Session::Run(const ProtocolConfig& config) {
  if (absl::Status s = ValidateConfig(config); !s.ok()) return s;
  if (std::optional<Failure> f = Register(config.n)) return AbortAll(*f);

  const std::string start =
      Encode(Start{options_.session_id, config.depth,
                   config.round_budget().epsilon()});
  for (size_t i = 0; i < clients_.size(); ++i) {
    if (absl::Status s = clients_[i].Send(start); !s.ok()) {
      return AbortAll({static_cast<int>(i), s});
    }
  }

  MinSearch search = MinSearch::Private(config);
  while (!search.done()) {
    const std::string query = Encode(Query{search.round(), search.tau()});
    for (size_t i = 0; i < clients_.size(); ++i) {
      if (absl::Status s = clients_[i].Send(query); !s.ok()) {
        return AbortAll({static_cast<int>(i), s});
      }
    }
    int64_t sum = 0;
    if (std::optional<Failure> f = CollectRound(search.round(), sum)) {
      return AbortAll(*f);
    }
    absl::StatusOr<RoundRecord> record = search.Advance(sum);
    if (!record.ok()) return AbortAll({-1, record.status()});
  }

  Transcript transcript = search.Finish();
  const std::string result = Encode(Result{transcript.estimate});
  for (Connection& c : clients_) c.Send(result).IgnoreError();
  return transcript;
}

}  // namespace

AggregatorServer::AggregatorServer(std::unique_ptr<State> state)
    : state_(std::move(state)) {}
AggregatorServer::AggregatorServer(AggregatorServer&&) noexcept = default;
AggregatorServer& AggregatorServer::operator=(AggregatorServer&&) noexcept =
    default;
AggregatorServer::~AggregatorServer() = default;

absl::StatusOr<AggregatorServer> AggregatorServer::Listen(
    ServerOptions options) {
  auto state = std::make_unique<State>();
  absl::StatusOr<Fd> fd = ListenTcp(options.bind_host, options.port, 128);
  if (!fd.ok()) return fd.status();
  absl::StatusOr<uint16_t> port = LocalPort(fd->get());
  if (!port.ok()) return port.status();
  state->options = std::move(options);
  state->listener = *std::move(fd);
  state->port = *port;
  return AggregatorServer(std::move(state));
}

uint16_t AggregatorServer::port() const { return state_->port; }

absl::StatusOr<Transcript> AggregatorServer::Serve(
    const ProtocolConfig& config) {
  Session session(state_->options, state_->listener.get());
  return session.Run(config);
}

}  // namespace ldpmin::net
