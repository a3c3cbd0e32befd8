#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "isaw/detail/text.hpp"
#include "isaw/errors.hpp"
#include "isaw/pga.hpp"

namespace isaw {

struct BasicAction {
  enum class Kind { Tau, Interaction, Construct };

  Kind kind = Kind::Tau;
  std::string focus;
  std::string method;
  std::vector<std::string> actions;

  static BasicAction tau() { return {}; }
  static BasicAction interaction(std::string f, std::string m) {
    BasicAction a;
    a.kind = Kind::Interaction;
    a.focus = std::move(f);
    a.method = std::move(m);
    return a;
  }
  static BasicAction construct(std::vector<std::string> es) {
    BasicAction a;
    a.kind = Kind::Construct;
    a.actions = std::move(es);
    return a;
  }
  static BasicAction from_instruction(const BasicInstruction& b) {
    return b.kind == BasicInstruction::Kind::Interaction
               ? interaction(b.focus, b.method)
               : construct(b.actions);
  }

  bool operator==(const BasicAction&) const = default;

  std::string to_text() const {
    switch (kind) {
      case Kind::Tau:
        return "tau";
      case Kind::Interaction:
        return focus + "." + method;
      case Kind::Construct: {
        std::string out = "ac(";
        for (std::size_t i = 0; i < actions.size(); ++i) {
          if (i) out += ',';
          out += actions[i];
        }
        return out + ")";
      }
    }
    return "tau";
  }
};

using StateId = int;

// One residual thread: S, D, or a postconditional switch whose i-th target
// is taken when the environment replies i.
struct ThreadState {
  enum class Kind { Stop, Dead, Switch };

  Kind kind = Kind::Stop;
  BasicAction action;
  std::vector<StateId> targets;

  static ThreadState stop() { return {Kind::Stop, {}, {}}; }
  static ThreadState dead() { return {Kind::Dead, {}, {}}; }
  static ThreadState make_switch(BasicAction a, std::vector<StateId> ts) {
    return {Kind::Switch, std::move(a), std::move(ts)};
  }

  bool operator==(const ThreadState&) const = default;
};

struct ThreadAutomaton {
  std::vector<ThreadState> states;  // ids are vector indices
  StateId root = 0;

  const ThreadState& at(StateId id) const {
    return states[static_cast<std::size_t>(id)];
  }
  int size() const { return static_cast<int>(states.size()); }
};

// Finite approximation of a thread, used by the projection operators.
struct FiniteThread {
  enum class Kind { Stop, Dead, Switch };

  Kind kind = Kind::Dead;
  BasicAction action;
  std::vector<FiniteThread> children;

  static FiniteThread stop() { return {Kind::Stop, {}, {}}; }
  static FiniteThread dead() { return {Kind::Dead, {}, {}}; }
  static FiniteThread make_switch(BasicAction a, std::vector<FiniteThread> cs) {
    return {Kind::Switch, std::move(a), std::move(cs)};
  }

  bool operator==(const FiniteThread&) const = default;
};

// Linear thread specification: every right-hand side is S, D, or a single
// switch over bound variables.
struct LinearThreadSpec {
  struct Equation {
    ThreadState::Kind kind = ThreadState::Kind::Stop;
    BasicAction action;
    std::vector<std::string> targets;
  };

  std::vector<std::pair<std::string, Equation>> equations;  // ordered, unique

  const Equation* find(const std::string& var) const {
    for (const auto& [name, eq] : equations)
      if (name == var) return &eq;
    return nullptr;
  }

  std::string to_text() const {
    std::string out;
    for (const auto& [name, eq] : equations) {
      out += name + " = ";
      switch (eq.kind) {
        case ThreadState::Kind::Stop:
          out += "S";
          break;
        case ThreadState::Kind::Dead:
          out += "D";
          break;
        case ThreadState::Kind::Switch: {
          out += eq.action.to_text() + "[";
          for (std::size_t i = 0; i < eq.targets.size(); ++i) {
            if (i) out += ',';
            out += eq.targets[i];
          }
          out += "]";
          break;
        }
      }
      out += " ;\n";
    }
    return out;
  }
};

namespace detail {

inline StateId ensure_state(std::vector<ThreadState>& states,
                            std::optional<StateId>& cache, ThreadState value) {
  if (!cache) {
    states.push_back(std::move(value));
    cache = static_cast<StateId>(states.size() - 1);
  }
  return *cache;
}

}  // namespace detail

/// Drops states unreachable from the root, renumbering in BFS order.
inline ThreadAutomaton prune_unreachable(const ThreadAutomaton& a) {
  std::vector<StateId> order;
  std::map<StateId, StateId> renumber;
  order.push_back(a.root);
  renumber[a.root] = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (StateId t : a.at(order[i]).targets) {
      if (renumber.emplace(t, static_cast<StateId>(order.size())).second)
        order.push_back(t);
    }
  }
  ThreadAutomaton out;
  out.root = 0;
  out.states.reserve(order.size());
  for (StateId old : order) {
    ThreadState s = a.at(old);
    for (StateId& t : s.targets) t = renumber.at(t);
    out.states.push_back(std::move(s));
  }
  return out;
}

/// Normal form under the switching axioms: construct switches have exactly
/// one target per listed action (truncating or padding with D), tau switches
/// keep only their first target.
inline ThreadAutomaton normalize(const ThreadAutomaton& a) {
  ThreadAutomaton out = a;
  std::optional<StateId> dead;
  for (std::size_t i = 0; i < out.states.size(); ++i) {
    if (out.states[i].kind == ThreadState::Kind::Dead && !dead)
      dead = static_cast<StateId>(i);
  }
  for (std::size_t i = 0; i < out.states.size(); ++i) {
    if (out.states[i].kind != ThreadState::Kind::Switch) continue;
    if (out.states[i].action.kind == BasicAction::Kind::Tau) {
      out.states[i].targets.resize(1);
    } else if (out.states[i].action.kind == BasicAction::Kind::Construct) {
      std::size_t n = out.states[i].action.actions.size();
      if (out.states[i].targets.size() > n) {
        out.states[i].targets.resize(n);
      } else {
        while (out.states[i].targets.size() < n) {
          // ensure_state may reallocate out.states; index after it returns
          StateId d =
              detail::ensure_state(out.states, dead, ThreadState::dead());
          out.states[i].targets.push_back(d);
        }
      }
    }
  }
  return prune_unreachable(out);
}

inline ThreadAutomaton from_linear_spec(const LinearThreadSpec& spec,
                                        const std::string& root) {
  std::map<std::string, StateId> ids;
  std::vector<std::string> order;
  auto visit = [&](const std::string& var) -> StateId {
    auto it = ids.find(var);
    if (it != ids.end()) return it->second;
    if (!spec.find(var)) throw UnboundVariableError(var);
    StateId id = static_cast<StateId>(order.size());
    ids.emplace(var, id);
    order.push_back(var);
    return id;
  };
  visit(root);
  ThreadAutomaton a;
  a.root = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const LinearThreadSpec::Equation& eq = *spec.find(order[i]);
    ThreadState s;
    s.kind = eq.kind;
    if (eq.kind == ThreadState::Kind::Switch) {
      s.action = eq.action;
      for (const std::string& t : eq.targets) s.targets.push_back(visit(t));
    }
    a.states.push_back(std::move(s));
  }
  return a;
}

inline LinearThreadSpec to_linear_spec(const ThreadAutomaton& a) {
  ThreadAutomaton b = prune_unreachable(a);
  auto name = [](StateId id) { return "X" + std::to_string(id + 1); };
  LinearThreadSpec spec;
  for (std::size_t i = 0; i < b.states.size(); ++i) {
    const ThreadState& s = b.states[i];
    LinearThreadSpec::Equation eq;
    eq.kind = s.kind;
    if (s.kind == ThreadState::Kind::Switch) {
      eq.action = s.action;
      for (StateId t : s.targets) eq.targets.push_back(name(t));
    }
    spec.equations.emplace_back(name(static_cast<StateId>(i)), std::move(eq));
  }
  return spec;
}

/// Parses `X = S ;  Y = f.m[X,Y] ;  Z = ac(a,b)[X,Y] ;  W = tau[Z] ;`.
inline LinearThreadSpec parse_linear_thread_spec(const std::string& text) {
  detail::Cursor c(text);
  LinearThreadSpec spec;
  while (!c.at_end()) {
    std::string var = c.ident("variable");
    if (var == "S" || var == "D" || var == "tau" || var == "ac")
      c.fail("'" + var + "' is reserved and cannot name a variable");
    if (spec.find(var)) c.fail("duplicate equation for " + var);
    c.expect('=', "equation");
    LinearThreadSpec::Equation eq;
    std::string word = c.ident("right-hand side");
    if (word == "S") {
      eq.kind = ThreadState::Kind::Stop;
    } else if (word == "D") {
      eq.kind = ThreadState::Kind::Dead;
    } else {
      eq.kind = ThreadState::Kind::Switch;
      if (word == "tau") {
        eq.action = BasicAction::tau();
      } else if (word == "ac" && c.peek() == '(') {
        c.expect('(', "ac(...)");
        std::vector<std::string> actions;
        actions.push_back(c.ident("atomic action"));
        while (c.try_eat(',')) actions.push_back(c.ident("atomic action"));
        c.expect(')', "ac(...)");
        eq.action = BasicAction::construct(std::move(actions));
      } else {
        c.expect('.', "interaction action");
        eq.action = BasicAction::interaction(word, c.ident("method"));
      }
      c.expect('[', "switch targets");
      eq.targets.push_back(c.ident("target variable"));
      while (c.try_eat(',')) eq.targets.push_back(c.ident("target variable"));
      c.expect(']', "switch targets");
    }
    c.expect(';', "equation terminator");
    spec.equations.emplace_back(std::move(var), std::move(eq));
  }
  if (spec.equations.empty())
    throw ParseError("specification has no equations", 0);
  for (const auto& [name, eq] : spec.equations)
    for (const std::string& t : eq.targets)
      if (!spec.find(t)) throw UnboundVariableError(t);
  return spec;
}

/// Projection pi_n: cuts the behaviour off below depth n, replacing it by D.
inline FiniteThread project(const ThreadAutomaton& a, int depth,
                            std::optional<StateId> from = std::nullopt) {
  StateId id = from.value_or(a.root);
  if (depth <= 0) return FiniteThread::dead();
  const ThreadState& s = a.at(id);
  switch (s.kind) {
    case ThreadState::Kind::Stop:
      return FiniteThread::stop();
    case ThreadState::Kind::Dead:
      return FiniteThread::dead();
    case ThreadState::Kind::Switch: {
      std::vector<FiniteThread> children;
      children.reserve(s.targets.size());
      for (StateId t : s.targets) children.push_back(project(a, depth - 1, t));
      return FiniteThread::make_switch(s.action, std::move(children));
    }
  }
  return FiniteThread::dead();
}

/// Structural equality of pi_n projections without materializing the trees.
inline bool projections_equal(const ThreadAutomaton& a,
                              const ThreadAutomaton& b, int depth) {
  std::map<std::tuple<StateId, StateId, int>, bool> memo;
  auto eq = [&](auto&& self, StateId x, StateId y, int n) -> bool {
    if (n <= 0) return true;  // pi_0 of anything is D
    auto key = std::make_tuple(x, y, n);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    const ThreadState& sx = a.at(x);
    const ThreadState& sy = b.at(y);
    bool result = sx.kind == sy.kind;
    if (result && sx.kind == ThreadState::Kind::Switch) {
      result = sx.action == sy.action && sx.targets.size() == sy.targets.size();
      for (std::size_t i = 0; result && i < sx.targets.size(); ++i)
        result = self(self, sx.targets[i], sy.targets[i], n - 1);
    }
    memo[key] = result;
    return result;
  };
  return eq(eq, a.root, b.root, depth);
}

/// Strong bisimilarity of thread automata (threads are deterministic, so
/// this is signature-based partition refinement on the disjoint union).
inline bool thread_equal(const ThreadAutomaton& a, const ThreadAutomaton& b) {
  int na = a.size();
  int total = na + b.size();
  auto state = [&](int i) -> const ThreadState& {
    return i < na ? a.at(i) : b.at(i - na);
  };
  std::vector<int> block(static_cast<std::size_t>(total), 0);
  int block_count = 1;
  for (;;) {
    using Sig = std::tuple<int, int, std::string, std::vector<int>>;
    std::map<Sig, int> next_ids;
    std::vector<int> next(block.size());
    for (int i = 0; i < total; ++i) {
      const ThreadState& s = state(i);
      Sig sig{block[static_cast<std::size_t>(i)], static_cast<int>(s.kind),
              s.kind == ThreadState::Kind::Switch ? s.action.to_text() : "",
              {}};
      if (s.kind == ThreadState::Kind::Switch)
        for (StateId t : s.targets)
          std::get<3>(sig).push_back(
              block[static_cast<std::size_t>(i < na ? t : t + na)]);
      auto [it, unused] =
          next_ids.emplace(std::move(sig), static_cast<int>(next_ids.size()));
      next[static_cast<std::size_t>(i)] = it->second;
    }
    int next_count = static_cast<int>(next_ids.size());
    block.swap(next);
    if (next_count == block_count) break;
    block_count = next_count;
  }
  return block[static_cast<std::size_t>(a.root)] ==
         block[static_cast<std::size_t>(na + b.root)];
}

}  // namespace isaw
