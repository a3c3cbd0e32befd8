#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "isaw/pga.hpp"
#include "isaw/thread.hpp"

namespace isaw {

// A position in the omega-unrolling of a canonical sequence, quotiented so
// that period positions are identified by their offset. This quotient is
// finite, which makes jump chasing terminate.
struct PositionRef {
  bool in_period = false;
  std::int64_t index = 0;  // prefix: 1-based position; period: 0-based offset

  bool operator==(const PositionRef&) const = default;
  auto operator<=>(const PositionRef&) const = default;
};

struct Resolution {
  enum class Kind { Position, Dead, Stop };

  Kind kind = Kind::Dead;
  PositionRef pos;

  static Resolution at(PositionRef p) { return {Kind::Position, p}; }
  static Resolution dead() { return {Kind::Dead, {}}; }
  static Resolution stop() { return {Kind::Stop, {}}; }
};

namespace detail {

inline std::optional<PositionRef> position_of(const InstructionSequence& s,
                                              std::int64_t index) {
  std::int64_t prefix_len = static_cast<std::int64_t>(s.prefix.size());
  if (index <= prefix_len) return PositionRef{false, index};
  if (!s.has_period()) return std::nullopt;
  std::int64_t len = static_cast<std::int64_t>(s.period.size());
  return PositionRef{true, (index - prefix_len - 1) % len};
}

inline const PrimitiveInstruction& instruction_at(const InstructionSequence& s,
                                                  PositionRef p) {
  return p.in_period ? s.period[static_cast<std::size_t>(p.index)]
                     : s.prefix[static_cast<std::size_t>(p.index - 1)];
}

inline std::optional<PositionRef> advance(const InstructionSequence& s,
                                          PositionRef p, std::int64_t delta) {
  if (p.in_period) {
    std::int64_t len = static_cast<std::int64_t>(s.period.size());
    return PositionRef{true, (p.index + delta) % len};
  }
  return position_of(s, p.index + delta);
}

}  // namespace detail

/// Chases forward jumps from `start` to the first non-jump position. A #0,
/// a jump past the end of a finite sequence, or a revisited jump position
/// (an infinite jump chain) all resolve to D.
inline Resolution resolve(const InstructionSequence& s, PositionRef start) {
  PositionRef cur = start;
  std::set<PositionRef> visited;
  for (;;) {
    const PrimitiveInstruction& u = detail::instruction_at(s, cur);
    if (u.kind != PrimitiveInstruction::Kind::FwdJump)
      return Resolution::at(cur);
    if (!visited.insert(cur).second) return Resolution::dead();
    if (u.jump == 0) return Resolution::dead();
    std::optional<PositionRef> next = detail::advance(s, cur, u.jump);
    if (!next) return Resolution::dead();
    cur = *next;
  }
}

/// Thread extraction: the behaviour of a canonical instruction sequence as
/// a normalized thread automaton with one state per reachable position.
/// Plain instructions behave as binary switches with equal targets (the
/// basic-action-prefix reading), so they fall through on either reply.
inline ThreadAutomaton extract_thread(const InstructionSequence& s) {
  ThreadAutomaton a;
  std::optional<StateId> dead_state;
  std::map<PositionRef, StateId> position_state;
  std::vector<PositionRef> worklist;

  auto state_for = [&](PositionRef p) -> StateId {
    auto it = position_state.find(p);
    if (it != position_state.end()) return it->second;
    StateId id = static_cast<StateId>(a.states.size());
    a.states.emplace_back();  // filled in when dequeued
    position_state.emplace(p, id);
    worklist.push_back(p);
    return id;
  };
  auto dead_id = [&] {
    return detail::ensure_state(a.states, dead_state, ThreadState::dead());
  };
  // Target of the d-th next instruction after p, as a state.
  auto successor = [&](PositionRef p, std::int64_t d) -> StateId {
    std::optional<PositionRef> next = detail::advance(s, p, d);
    if (!next) return dead_id();
    Resolution r = resolve(s, *next);
    return r.kind == Resolution::Kind::Position ? state_for(r.pos) : dead_id();
  };

  std::optional<PositionRef> first = detail::position_of(s, 1);
  Resolution start = first ? resolve(s, *first) : Resolution::dead();
  if (start.kind != Resolution::Kind::Position) {
    a.states.push_back(ThreadState::dead());
    a.root = 0;
    return a;
  }
  a.root = state_for(start.pos);

  while (!worklist.empty()) {
    PositionRef p = worklist.back();
    worklist.pop_back();
    StateId id = position_state.at(p);
    const PrimitiveInstruction& u = detail::instruction_at(s, p);
    switch (u.kind) {
      case PrimitiveInstruction::Kind::Halt: {
        a.states[static_cast<std::size_t>(id)] = ThreadState::stop();
        break;
      }
      case PrimitiveInstruction::Kind::Plain: {
        StateId next = successor(p, 1);
        a.states[static_cast<std::size_t>(id)] = ThreadState::make_switch(
            BasicAction::from_instruction(*u.basic), {next, next});
        break;
      }
      case PrimitiveInstruction::Kind::PosTest: {
        StateId t1 = successor(p, 1);
        StateId t2 = successor(p, 2);
        a.states[static_cast<std::size_t>(id)] = ThreadState::make_switch(
            BasicAction::from_instruction(*u.basic), {t1, t2});
        break;
      }
      case PrimitiveInstruction::Kind::NegTest: {
        StateId t1 = successor(p, 1);
        StateId t2 = successor(p, 2);
        a.states[static_cast<std::size_t>(id)] = ThreadState::make_switch(
            BasicAction::from_instruction(*u.basic), {t2, t1});
        break;
      }
      case PrimitiveInstruction::Kind::PosMultiTest:
      case PrimitiveInstruction::Kind::NegMultiTest: {
        std::vector<StateId> targets;
        targets.reserve(static_cast<std::size_t>(u.arity));
        for (int i = 1; i <= u.arity; ++i) targets.push_back(successor(p, i));
        if (u.kind == PrimitiveInstruction::Kind::NegMultiTest)
          std::reverse(targets.begin(), targets.end());
        a.states[static_cast<std::size_t>(id)] = ThreadState::make_switch(
            BasicAction::from_instruction(*u.basic), std::move(targets));
        break;
      }
      case PrimitiveInstruction::Kind::FwdJump:
        break;  // unreachable: jumps are resolved away
    }
  }
  return normalize(a);
}

}  // namespace isaw
