#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "isaw/lts.hpp"
#include "isaw/services.hpp"
#include "isaw/thread.hpp"

namespace isaw {

/// The auxiliary process extraction: threads as LTSs that announce
/// termination with an explicit stop action. S becomes a stop step into a
/// terminating state, D an i step into a deadlock, a tau switch two i
/// steps, an f.m switch a snd_f(m) request followed by one rcv_f(j) branch
/// per reply, and an ac(e1,...,en) switch one e_j branch per action.
inline Lts pextr_c(const ThreadAutomaton& automaton) {
  ThreadAutomaton a = normalize(automaton);
  Lts out;
  std::vector<int> image(a.states.size());
  for (std::size_t i = 0; i < a.states.size(); ++i)
    image[i] = out.add_state(false);
  std::optional<int> terminated;
  std::optional<int> deadlocked;
  auto term_state = [&] {
    if (!terminated) terminated = out.add_state(true);
    return *terminated;
  };
  auto dead_state = [&] {
    if (!deadlocked) deadlocked = out.add_state(false);
    return *deadlocked;
  };
  for (std::size_t i = 0; i < a.states.size(); ++i) {
    const ThreadState& s = a.states[i];
    int from = image[i];
    switch (s.kind) {
      case ThreadState::Kind::Stop:
        out.add_transition(from, ActionLabel::stop(), term_state());
        break;
      case ThreadState::Kind::Dead:
        out.add_transition(from, ActionLabel::internal(), dead_state());
        break;
      case ThreadState::Kind::Switch: {
        switch (s.action.kind) {
          case BasicAction::Kind::Tau: {
            int mid = out.add_state(false);
            out.add_transition(from, ActionLabel::internal(), mid);
            out.add_transition(
                mid, ActionLabel::internal(),
                image[static_cast<std::size_t>(s.targets.front())]);
            break;
          }
          case BasicAction::Kind::Interaction: {
            int mid = out.add_state(false);
            out.add_transition(
                from, ActionLabel::snd(s.action.focus, s.action.method), mid);
            for (std::size_t j = 0; j < s.targets.size(); ++j)
              out.add_transition(
                  mid,
                  ActionLabel::rcv(s.action.focus,
                                   std::to_string(j + 1)),
                  image[static_cast<std::size_t>(s.targets[j])]);
            break;
          }
          case BasicAction::Kind::Construct: {
            // Normalized, so one target per listed action.
            for (std::size_t j = 0; j < s.action.actions.size(); ++j)
              out.add_transition(
                  from, ActionLabel::atom(s.action.actions[j]),
                  image[static_cast<std::size_t>(s.targets[j])]);
            break;
          }
        }
        break;
      }
    }
  }
  out.root = image[static_cast<std::size_t>(a.root)];
  return canonicalize(out);
}

/// Process extraction proper: the stop action is hidden.
inline Lts pextr(const ThreadAutomaton& a) {
  return abstract(pextr_c(a), {ActionLabel::stop()});
}

/// The service as a process: per reachable state, rcv_s(m) then
/// snd_s(reply) into the derived state for each method, plus a stop_bar
/// exit into a terminating state. `extra_methods` widens the explored
/// method alphabet beyond the service's declared one.
inline Lts service_lts(const ServicePtr& service,
                       const std::vector<std::string>& extra_methods = {},
                       std::size_t state_bound = kDefaultStateBound) {
  std::set<std::string> method_set(extra_methods.begin(), extra_methods.end());
  for (const std::string& m : service->methods()) method_set.insert(m);

  Lts out;
  int term = out.add_state(true);
  std::map<std::string, int> ids;
  std::vector<ServicePtr> pending;
  auto state_for = [&](ServicePtr h) -> int {
    auto it = ids.find(h->state_key());
    if (it != ids.end()) return it->second;
    if (ids.size() >= state_bound) throw StateBoundExceeded(state_bound);
    int id = out.add_state(false);
    ids.emplace(h->state_key(), id);
    pending.push_back(std::move(h));
    return id;
  };
  out.root = state_for(service);
  for (std::size_t i = 0; i < pending.size(); ++i) {
    ServicePtr h = pending[i];
    int from = ids.at(h->state_key());
    out.add_transition(from, ActionLabel::stop_bar(), term);
    for (const std::string& m : method_set) {
      int mid = out.add_state(false);
      out.add_transition(from, ActionLabel::rcv_service(m), mid);
      out.add_transition(mid, ActionLabel::snd_service(h->reply(m)),
                         state_for(h->derive(m)));
    }
  }
  return canonicalize(out);
}

/// One stage of the use-operator process semantics, at the auxiliary
/// (stop-announcing) level: rename the service channel onto focus f, merge
/// with the thread process, block unsynchronized focus traffic and the
/// termination halves, and rename the joint termination back to stop.
inline Lts use_process_c(const Lts& thread_c, const std::string& focus,
                         const ServicePtr& service,
                         std::size_t state_bound = kDefaultStateBound) {
  std::vector<std::string> requested;
  for (const LtsTransition& t : thread_c.transitions)
    if (t.label.kind == ActionLabel::Kind::SndFocus && t.label.focus == focus)
      requested.push_back(t.label.datum);
  Lts h = service_lts(service, requested, state_bound);
  Lts renamed = rename_labels(h, [&](const ActionLabel& l) {
    if (l.kind == ActionLabel::Kind::SndService)
      return ActionLabel::snd(focus, l.datum);
    if (l.kind == ActionLabel::Kind::RcvService)
      return ActionLabel::rcv(focus, l.datum);
    return l;
  });
  Lts merged = par_merge(thread_c, renamed, state_bound);
  Lts no_focus = encapsulate(merged, [&](const ActionLabel& l) {
    return (l.kind == ActionLabel::Kind::SndFocus ||
            l.kind == ActionLabel::Kind::RcvFocus) &&
           l.focus == focus;
  });
  Lts no_halves = encapsulate(
      no_focus, std::set<ActionLabel>{ActionLabel::stop(),
                                      ActionLabel::stop_bar()});
  return rename_labels(no_halves, [](const ActionLabel& l) {
    return l.kind == ActionLabel::Kind::StopStar ? ActionLabel::stop() : l;
  });
}

/// Use operator at the process level for a single service. The result is at
/// the auxiliary level; abstract({stop}) gives the extracted process.
inline Lts use_process(const ThreadAutomaton& a, const std::string& focus,
                       const ServicePtr& service,
                       std::size_t state_bound = kDefaultStateBound) {
  return use_process_c(pextr_c(a), focus, service, state_bound);
}

}  // namespace isaw
