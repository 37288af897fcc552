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

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <future>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "ldpmin/mechanisms.h"
#include "ldpmin/net/client.h"
#include "ldpmin/net/server.h"
#include "ldpmin/net/wire.h"
#include "ldpmin/protocol.h"
#include "ldpmin/random.h"
#include "status_matchers.h"

namespace ldpmin::net {
namespace {

using ::ldpmin::testing::StatusIs;
using ::testing::HasSubstr;
using ::testing::VariantWith;
using ::testing::Field;

using namespace std::chrono_literals;

TEST(WireTest, EncodeFormats) {
  EXPECT_EQ(Encode(Hello{"u1"}), "HELLO u1\n");
  EXPECT_EQ(Encode(Start{"s", 5, 0.8}), "START s 5 0.8\n");
  EXPECT_EQ(Encode(Query{2, -0.5}), "QUERY 2 -0.5\n");
  EXPECT_EQ(Encode(Resp{3, -1}), "RESP 3 -1\n");
  EXPECT_EQ(Encode(Result{0.375}), "RESULT 0.375\n");
  EXPECT_EQ(Encode(Abort{"timeout"}), "ABORT timeout\n");
}

TEST(WireTest, RoundTrip) {
  const std::vector<WireMessage> msgs = {
      Hello{"alice"},       Start{"sess", 12, 1.0 / 3.0},
      Query{7, 0.3515625},  Resp{7, 1},
      Result{-0.01171875},  Abort{"session aborted: client 2: timeout"}};
  for (const WireMessage& m : msgs) {
    absl::StatusOr<WireMessage> back = Decode(Encode(m));
    ASSERT_TRUE(back.ok()) << back.status();
    EXPECT_EQ(Encode(*back), Encode(m));
  }
  EXPECT_THAT(*Decode("QUERY 1 0.1"),
              VariantWith<Query>(Field(&Query::tau, 0.1)));
  EXPECT_THAT(*Decode("START s 3 inf"),
              VariantWith<Start>(Field(&Start::epsilon_round,
                                       std::numeric_limits<double>::infinity())));
}

TEST(WireTest, RejectsOutOfDomain) {
  for (const char* line :
       {"RESP 1 0", "RESP 1 2", "RESP 0 1", "QUERY 1 1.5", "START s 0 1",
        "START s 2 -1", "HELLO", "PING 1", "RESP one 1", ""}) {
    EXPECT_THAT(Decode(line), StatusIs(absl::StatusCode::kInvalidArgument,
                                       HasSubstr("")))
        << line;
  }
}

ProtocolConfig Config(double eps, int depth, double gamma, int64_t n) {
  ProtocolConfig c;
  c.epsilon = std::isinf(eps) ? PrivacyBudget::NoiseFree()
                              : *PrivacyBudget::Create(eps);
  c.depth = depth;
  c.gamma = gamma;
  c.n = n;
  return c;
}

struct Session {
  std::future<absl::StatusOr<Transcript>> server;
  uint16_t port = 0;
};

Session StartServer(const ProtocolConfig& config, ServerOptions options) {
  absl::StatusOr<AggregatorServer> server = AggregatorServer::Listen(options);
  EXPECT_TRUE(server.ok()) << server.status();
  Session s;
  s.port = server->port();
  auto owned = std::make_shared<AggregatorServer>(*std::move(server));
  s.server = std::async(std::launch::async,
                        [owned, config] { return owned->Serve(config); });
  return s;
}

TEST(LoopbackTest, SingleNoiseFreeClientHandTrace) {
  const ProtocolConfig config = Config(INFINITY, 3, 1.0, 1);
  Session s = StartServer(config, ServerOptions{});
  ClientOptions c;
  c.port = s.port;
  c.value = 0.5;
  absl::StatusOr<double> estimate = RunClient(c);
  ASSERT_TRUE(estimate.ok()) << estimate.status();
  EXPECT_EQ(*estimate, 0.375);
  absl::StatusOr<Transcript> t = s.server.get();
  ASSERT_TRUE(t.ok());
  EXPECT_EQ(t->estimate, 0.375);
}

TEST(LoopbackTest, MatchesInProcessRunWithPairedSeeds) {
  const std::vector<double> values = {-0.31, 0.2,  0.75, -0.05,
                                      0.4,  -0.28, 0.9,  0.0};
  const ProtocolConfig config = Config(6.0, 4, 0.2, 8);

  std::mutex mu;
  std::vector<std::string> received;
  ServerOptions opts;
  opts.on_client_line = [&](int, std::string_view line) {
    std::lock_guard lock(mu);
    received.emplace_back(line);
  };
  Session s = StartServer(config, opts);

  std::vector<std::future<absl::StatusOr<double>>> clients;
  for (size_t i = 0; i < values.size(); ++i) {
    ClientOptions c;
    c.port = s.port;
    c.client_id = "u" + std::to_string(i);
    c.value = values[i];
    c.seed = 500 + i;
    clients.push_back(std::async(std::launch::async, [c] { return RunClient(c); }));
  }
  absl::StatusOr<Transcript> t = s.server.get();
  ASSERT_TRUE(t.ok()) << t.status();
  for (auto& f : clients) {
    absl::StatusOr<double> e = f.get();
    ASSERT_TRUE(e.ok()) << e.status();
    EXPECT_EQ(*e, t->estimate);
  }

  std::vector<std::unique_ptr<SeededStream>> owned;
  std::vector<RandomStream*> streams;
  for (size_t i = 0; i < values.size(); ++i) {
    owned.push_back(std::make_unique<SeededStream>(500 + i));
    streams.push_back(owned.back().get());
  }
  const Transcript local = *RunPrivateMin(values, config, streams);
  EXPECT_EQ(local.estimate, t->estimate);
  ASSERT_EQ(local.rounds.size(), t->rounds.size());
  for (size_t r = 0; r < local.rounds.size(); ++r) {
    EXPECT_EQ(local.rounds[r].sum_z, t->rounds[r].sum_z);
  }

  ASSERT_EQ(received.size(), values.size() * (1 + config.depth));
  for (const std::string& line : received) {
    absl::StatusOr<WireMessage> msg = Decode(line);
    ASSERT_TRUE(msg.ok()) << line;
    if (const auto* resp = std::get_if<Resp>(&*msg)) {
      EXPECT_TRUE(resp->bit == 1 || resp->bit == -1) << line;
    } else {
      EXPECT_TRUE(std::holds_alternative<Hello>(*msg)) << line;
    }
  }
}

TEST(LoopbackTest, MissingClientTimesOut) {
  ServerOptions opts;
  opts.round_timeout = 300ms;
  Session s = StartServer(Config(1.0, 3, 0.1, 2), opts);
  ClientOptions c;
  c.port = s.port;
  c.value = 0.1;
  absl::StatusOr<double> estimate = RunClient(c);
  EXPECT_THAT(estimate,
              StatusIs(absl::StatusCode::kAborted, HasSubstr("timeout")));
  EXPECT_THAT(s.server.get(),
              StatusIs(absl::StatusCode::kDeadlineExceeded, HasSubstr("timeout")));
}

TEST(LoopbackTest, ClientRejectsBadValueBeforeConnecting) {
  ClientOptions c;
  c.port = 1;  // nothing listens here
  c.value = 1.5;
  EXPECT_THAT(RunClient(c), StatusIs(absl::StatusCode::kInvalidArgument,
                                     HasSubstr("1.5")));
}

// Raw line client for protocol-violation tests.
class RawClient {
 public:
  explicit RawClient(uint16_t port) : fd_(::socket(AF_INET, SOCK_STREAM, 0)) {
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    connected_ =
        ::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) == 0;
  }
  ~RawClient() { ::close(fd_); }
  bool connected() const { return connected_; }
  void Send(const std::string& s) {
    ASSERT_EQ(::send(fd_, s.data(), s.size(), MSG_NOSIGNAL),
              static_cast<ssize_t>(s.size()));
  }
  std::string ReadLine() {
    std::string line;
    char ch;
    while (::recv(fd_, &ch, 1, 0) == 1) {
      if (ch == '\n') return line;
      line.push_back(ch);
    }
    return line;
  }

 private:
  int fd_;
  bool connected_ = false;
};

TEST(LoopbackTest, DuplicateResponseAbortsEveryone) {
  ServerOptions opts;
  opts.round_timeout = 5s;
  Session s = StartServer(Config(1.0, 3, 0.1, 2), opts);
  RawClient a(s.port), b(s.port);
  ASSERT_TRUE(a.connected() && b.connected());
  a.Send("HELLO a\n");
  b.Send("HELLO b\n");
  EXPECT_THAT(a.ReadLine(), HasSubstr("START"));
  EXPECT_THAT(b.ReadLine(), HasSubstr("START"));
  EXPECT_EQ(a.ReadLine(), "QUERY 1 0");
  EXPECT_EQ(b.ReadLine(), "QUERY 1 0");
  a.Send("RESP 1 1\nRESP 1 -1\n");
  EXPECT_THAT(a.ReadLine(), HasSubstr("ABORT duplicate RESP"));
  EXPECT_THAT(b.ReadLine(), HasSubstr("ABORT session aborted"));
  EXPECT_THAT(s.server.get(), StatusIs(absl::StatusCode::kInvalidArgument,
                                       HasSubstr("duplicate")));
}

TEST(LoopbackTest, NonBinaryResponseAborts) {
  ServerOptions opts;
  opts.round_timeout = 5s;
  Session s = StartServer(Config(1.0, 2, 0.1, 1), opts);
  RawClient a(s.port);
  a.Send("HELLO a\n");
  a.ReadLine();
  a.ReadLine();
  a.Send("RESP 1 0.37\n");
  EXPECT_THAT(a.ReadLine(), HasSubstr("ABORT"));
  EXPECT_FALSE(s.server.get().ok());
}

TEST(LoopbackTest, DisconnectAborts) {
  ServerOptions opts;
  opts.round_timeout = 5s;
  Session s = StartServer(Config(1.0, 2, 0.1, 2), opts);
  RawClient b(s.port);
  {
    RawClient a(s.port);
    a.Send("HELLO a\n");
    b.Send("HELLO b\n");
    a.ReadLine();
  }
  EXPECT_THAT(s.server.get(), StatusIs(absl::StatusCode::kUnavailable,
                                       HasSubstr("disconnected")));
}

}  // namespace
}  // namespace ldpmin::net
