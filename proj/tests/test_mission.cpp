#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>
#include <set>
#include <vector>

#include "vtpsim/mission.hpp"

using namespace vtpsim;

namespace {

MissionInputs at(double now) {
  MissionInputs in;
  in.now = now;
  return in;
}

}  // namespace

TEST_CASE("canonical mission trace walks all four phases in order") {
  const double dt = 0.2;
  double now = 0.0;
  MissionState s;
  std::vector<MissionPhase> trace{s.phase};
  auto step = [&](auto mutate) {
    MissionInputs in = at(now);
    mutate(in);
    s = step_mission(s, in, 5.0);
    if (trace.back() != s.phase) trace.push_back(s.phase);
    now += dt;
  };

  for (int i = 0; i < 3; ++i)
    step([](MissionInputs& in) { in.flag_vtp = true; });  // climbing, not hovering
  CHECK(s.phase == MissionPhase::TakeOff);

  step([](MissionInputs& in) { in.hovering = in.flag_vtp = true; });
  CHECK(s.phase == MissionPhase::Following);

  for (int i = 0; i < 8; ++i) step([](MissionInputs& in) { in.flag_vtp = true; });
  CHECK(s.phase == MissionPhase::Following);

  step([](MissionInputs& in) { in.flag_marker = true; });
  CHECK(s.phase == MissionPhase::EndMarker);

  for (int i = 0; i < 5; ++i) step([](MissionInputs& in) { in.flag_marker = true; });
  CHECK(s.phase == MissionPhase::EndMarker);

  step([](MissionInputs& in) { in.flag_marker = in.centered = true; });
  CHECK(s.phase == MissionPhase::Landing);

  step([](MissionInputs& in) {
    in.flag_marker = true;
    in.landed = true;
  });
  CHECK(s.phase == MissionPhase::Done);

  CHECK(trace == std::vector<MissionPhase>{MissionPhase::TakeOff, MissionPhase::Following,
                                           MissionPhase::EndMarker, MissionPhase::Landing,
                                           MissionPhase::Done});
}

TEST_CASE("take-off loops while not hovering, advances on hovering with the path seen") {
  MissionState s;
  MissionInputs in = at(0.1);
  in.flag_vtp = true;  // path visible but still climbing
  s = step_mission(s, in, 5.0);
  CHECK(s.phase == MissionPhase::TakeOff);

  in = at(0.2);
  in.hovering = true;  // hovering but path not seen
  s = step_mission(s, in, 5.0);
  CHECK(s.phase == MissionPhase::TakeOff);

  in = at(0.3);
  in.hovering = in.flag_vtp = true;
  s = step_mission(s, in, 5.0);
  CHECK(s.phase == MissionPhase::Following);
}

TEST_CASE("following leaves only when the path is gone and the marker is seen") {
  MissionState s{MissionPhase::Following, 0.0, 0.0};

  MissionInputs both = at(0.1);
  both.flag_vtp = both.flag_marker = true;  // path branch keeps priority
  CHECK(step_mission(s, both, 5.0).phase == MissionPhase::Following);

  MissionInputs marker_only = at(0.2);
  marker_only.flag_marker = true;
  CHECK(step_mission(s, marker_only, 5.0).phase == MissionPhase::EndMarker);
}

TEST_CASE("flag drought fails the mission from any phase") {
  for (MissionPhase phase : {MissionPhase::TakeOff, MissionPhase::Following,
                             MissionPhase::EndMarker, MissionPhase::Landing}) {
    MissionState s{phase, 0.0, 0.0};
    s = step_mission(s, at(4.99), 5.0);
    CHECK(s.phase == phase);
    s = step_mission(s, at(5.0), 5.0);
    CHECK(s.phase == MissionPhase::Failed);
  }
}

TEST_CASE("a detection flag resets the drought clock") {
  MissionState s{MissionPhase::Following, 0.0, 0.0};
  MissionInputs in = at(4.5);
  in.flag_vtp = true;
  s = step_mission(s, in, 5.0);
  CHECK(s.last_flag_at == 4.5);
  s = step_mission(s, at(9.0), 5.0);
  CHECK(s.phase == MissionPhase::Following);
  s = step_mission(s, at(9.5), 5.0);
  CHECK(s.phase == MissionPhase::Failed);
}

TEST_CASE("landing completes on touchdown even while flags are dark") {
  MissionState s{MissionPhase::Landing, 0.0, 0.0};
  MissionInputs in = at(3.0);
  in.landed = true;
  CHECK(step_mission(s, in, 5.0).phase == MissionPhase::Done);
}

TEST_CASE("stepping a terminal state is a contract violation") {
  MissionState done{MissionPhase::Done, 0.0, 0.0};
  MissionState failed{MissionPhase::Failed, 0.0, 0.0};
  CHECK_THROWS_AS(step_mission(done, at(1.0), 5.0), std::logic_error);
  CHECK_THROWS_AS(step_mission(failed, at(1.0), 5.0), std::logic_error);
}

TEST_CASE("random walks stay within the allowed transition graph") {
  const std::map<MissionPhase, std::set<MissionPhase>> allowed{
      {MissionPhase::TakeOff,
       {MissionPhase::TakeOff, MissionPhase::Following, MissionPhase::Failed}},
      {MissionPhase::Following,
       {MissionPhase::Following, MissionPhase::EndMarker, MissionPhase::Failed}},
      {MissionPhase::EndMarker,
       {MissionPhase::EndMarker, MissionPhase::Landing, MissionPhase::Failed}},
      {MissionPhase::Landing, {MissionPhase::Landing, MissionPhase::Done, MissionPhase::Failed}},
  };

  std::mt19937 rng(42);
  std::bernoulli_distribution coin(0.5);
  for (int walk = 0; walk < 1000; ++walk) {
    MissionState s;
    double now = 0.0;
    bool seen_following = false;
    bool seen_end_marker = false;
    for (int step = 0; step < 60 && !is_terminal(s.phase); ++step) {
      MissionInputs in;
      in.hovering = coin(rng);
      in.flag_vtp = coin(rng);
      in.flag_marker = coin(rng);
      in.centered = coin(rng);
      in.landed = coin(rng);
      in.now = now;
      const MissionState next = step_mission(s, in, 5.0);
      REQUIRE(allowed.at(s.phase).contains(next.phase));
      CHECK(next.entered_at >= s.entered_at);  // never regresses in time

      if (next.phase == MissionPhase::Following) seen_following = true;
      if (next.phase == MissionPhase::EndMarker) CHECK(seen_following);
      if (next.phase == MissionPhase::EndMarker) seen_end_marker = true;
      if (next.phase == MissionPhase::Landing) CHECK(seen_end_marker);

      s = next;
      now += 0.2;
    }
  }
}

TEST_CASE("step_mission is a pure function of state and inputs") {
  MissionState s{MissionPhase::Following, 1.0, 1.0};
  MissionInputs in = at(2.0);
  in.flag_marker = true;
  const MissionState a = step_mission(s, in, 5.0);
  const MissionState b = step_mission(s, in, 5.0);
  CHECK(a.phase == b.phase);
  CHECK(a.entered_at == b.entered_at);
  CHECK(a.last_flag_at == b.last_flag_at);
}
