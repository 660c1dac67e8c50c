#pragma once

#include <stdexcept>

namespace vtpsim {

enum class MissionPhase { TakeOff, Following, EndMarker, Landing, Done, Failed };

inline const char* to_string(MissionPhase p) {
  switch (p) {
    case MissionPhase::TakeOff: return "TakeOff";
    case MissionPhase::Following: return "Following";
    case MissionPhase::EndMarker: return "EndMarker";
    case MissionPhase::Landing: return "Landing";
    case MissionPhase::Done: return "Done";
    case MissionPhase::Failed: return "Failed";
  }
  return "?";
}

inline bool is_terminal(MissionPhase p) {
  return p == MissionPhase::Done || p == MissionPhase::Failed;
}

struct MissionState {
  MissionPhase phase = MissionPhase::TakeOff;
  double entered_at = 0.0;   // s, time the current phase was entered
  double last_flag_at = 0.0; // s, last time either detection flag was seen
};

/// Tick predicates, all derived from the current tick only.
struct MissionInputs {
  bool hovering = false;
  bool flag_vtp = false;
  bool flag_marker = false;
  bool centered = false;
  bool landed = false;
  double now = 0.0;
};

/// One transition of the four-phase mission sequencer:
/// TakeOff -> Following on hovering with the path in view, Following ->
/// EndMarker when only the marker remains, EndMarker -> Landing once
/// centered, Landing -> Done on touchdown. Any phase fails after
/// lost_timeout seconds without a detection flag.
inline MissionState step_mission(const MissionState& state, const MissionInputs& in,
                                 double lost_timeout) {
  if (is_terminal(state.phase))
    throw std::logic_error("step_mission: cannot step a terminal state");

  MissionState next = state;
  if (in.flag_vtp || in.flag_marker) next.last_flag_at = in.now;

  auto enter = [&](MissionPhase p) {
    next.phase = p;
    next.entered_at = in.now;
  };

  switch (state.phase) {
    case MissionPhase::TakeOff:
      if (in.hovering && in.flag_vtp) enter(MissionPhase::Following);
      break;
    case MissionPhase::Following:
      if (!in.flag_vtp && in.flag_marker) enter(MissionPhase::EndMarker);
      break;
    case MissionPhase::EndMarker:
      if (in.centered) enter(MissionPhase::Landing);
      break;
    case MissionPhase::Landing:
      if (in.landed) enter(MissionPhase::Done);
      break;
    default:
      break;
  }

  if (!is_terminal(next.phase) && in.now - next.last_flag_at >= lost_timeout)
    enter(MissionPhase::Failed);
  return next;
}

}  // namespace vtpsim
