// Copyright 2026 The PHT Link Authors
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

#include <gtest/gtest.h>

#include <thread>

#include "generators.h"
#include "pht/error.h"
#include "pht/tcp.h"

namespace pht {
namespace {

TEST(HostPort, Parse) {
  HostPort hp = HostPort::Parse("127.0.0.1:9000");
  EXPECT_EQ(hp.host, "127.0.0.1");
  EXPECT_EQ(hp.port, 9000);
  EXPECT_EQ(hp.ToString(), "127.0.0.1:9000");
  EXPECT_THROW(HostPort::Parse("nope"), Error);
  EXPECT_THROW(HostPort::Parse("host:99999"), Error);
}

TEST(Loopback, MatchesInProcess) {
  Millis now = WallClockMillis();
  Scenario s = BuildScenario(testing::SmallScenario(11), now);
  Deployment mem = Deploy(s);
  RunOutcome a = RunInProcess(*mem.researcher, mem.Stations(), {}, now);
  Deployment net = Deploy(s);
  RunOutcome b = RunOverLoopback(*net.researcher, net.Stations(), {});
  ASSERT_EQ(b.status, RunStatus::kCompleted) << b.abort_reason;
  EXPECT_EQ(a.ResultBytes(), b.ResultBytes());
  EXPECT_EQ(a.LogicalTrace(), b.LogicalTrace());
  EXPECT_TRUE(net.tse->Run("run-1")->vault().Inventory().empty());
}

TEST(Loopback, TamperDetectedOverTcp) {
  Scenario s = BuildScenario(testing::SmallScenario(12), WallClockMillis());
  Deployment d = Deploy(s);
  RunOutcome out = RunOverLoopback(*d.researcher, d.Stations(), FaultPlan{std::nullopt, "B"});
  EXPECT_EQ(out.status, RunStatus::kAborted);
  EXPECT_EQ(out.abort_reason, "OuterIntegrityFailure@B");
}

TEST(Loopback, KilledStationTimesOut) {
  ScenarioOptions o = testing::SmallScenario(13);
  o.salt_timeout = 300;
  o.data_timeout = 300;
  Scenario s = BuildScenario(o, WallClockMillis());
  Deployment d = Deploy(s);
  RunOutcome out = RunOverLoopback(*d.researcher, d.Stations(), FaultPlan{"B", std::nullopt});
  EXPECT_EQ(out.status, RunStatus::kAborted);
  EXPECT_EQ(out.abort_reason, "Timeout");
  EXPECT_TRUE(d.tse->Run("run-1")->vault().Inventory().empty());
}

TEST(TcpHub, UnreachableEndpointIsTransportError) {
  Scenario s = BuildScenario(testing::SmallScenario(14), WallClockMillis());
  ResearcherEndpoint r(s.manifest);
  // Bind and release a port so that nothing listens on it.
  std::uint16_t port;
  {
    Deployment d = Deploy(s);
    EndpointServer probe(*d.station_a, HostPort{"127.0.0.1", 0});
    port = probe.port();
  }
  std::map<std::string, HostPort> eps = {{"A", {"127.0.0.1", port}},
                                         {"B", {"127.0.0.1", port}},
                                         {"TSE", {"127.0.0.1", port}}};
  TcpHubOptions opt;
  opt.overall_timeout = 5000;
  RunOutcome out = RunTcpHub(r, eps, {}, opt);
  EXPECT_EQ(out.status, RunStatus::kAborted);
  EXPECT_EQ(out.abort_reason, "TransportError");
}

TEST(EndpointServer, BindConflictAndStop) {
  Scenario s = BuildScenario(testing::SmallScenario(15), WallClockMillis());
  Deployment d = Deploy(s);
  EndpointServer server(*d.tse, HostPort{"127.0.0.1", 0});
  EXPECT_THROW(EndpointServer(*d.tse, HostPort{"127.0.0.1", server.port()}), Error);
  std::thread t([&] { server.Serve(); });
  std::this_thread::sleep_for(std::chrono::milliseconds(50));
  server.Stop();
  t.join();
  SUCCEED();
}

}  // namespace
}  // namespace pht
