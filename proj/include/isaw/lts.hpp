#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "isaw/detail/text.hpp"
#include "isaw/errors.hpp"
#include "isaw/services.hpp"

namespace isaw {

// The ACP action alphabet: plain atomic actions, the focus channels
// snd_f(d)/rcv_f(d), the service-side channel snd_s(r)/rcv_s(m), the
// termination protocol actions, the internal action i, and tau.
struct ActionLabel {
  enum class Kind {
    Atom,
    SndFocus,
    RcvFocus,
    SndService,
    RcvService,
    Stop,
    StopBar,
    StopStar,
    Internal,
    Tau
  };

  Kind kind = Kind::Tau;
  std::string focus;  // SndFocus/RcvFocus
  std::string datum;  // atom name, method, or decimal reply value

  static ActionLabel atom(std::string name) {
    return {Kind::Atom, "", std::move(name)};
  }
  static ActionLabel snd(std::string f, std::string d) {
    return {Kind::SndFocus, std::move(f), std::move(d)};
  }
  static ActionLabel rcv(std::string f, std::string d) {
    return {Kind::RcvFocus, std::move(f), std::move(d)};
  }
  static ActionLabel snd_service(int reply) {
    return {Kind::SndService, "", std::to_string(reply)};
  }
  static ActionLabel rcv_service(std::string method) {
    return {Kind::RcvService, "", std::move(method)};
  }
  static ActionLabel stop() { return {Kind::Stop, "", ""}; }
  static ActionLabel stop_bar() { return {Kind::StopBar, "", ""}; }
  static ActionLabel stop_star() { return {Kind::StopStar, "", ""}; }
  static ActionLabel internal() { return {Kind::Internal, "", ""}; }
  static ActionLabel tau() { return {Kind::Tau, "", ""}; }

  bool operator==(const ActionLabel&) const = default;
  auto operator<=>(const ActionLabel&) const = default;

  bool is_tau() const { return kind == Kind::Tau; }

  std::string to_text() const {
    switch (kind) {
      case Kind::Atom:
        return datum;
      case Kind::SndFocus:
        return "snd_" + focus + "(" + datum + ")";
      case Kind::RcvFocus:
        return "rcv_" + focus + "(" + datum + ")";
      case Kind::SndService:
        return "snd_s(" + datum + ")";
      case Kind::RcvService:
        return "rcv_s(" + datum + ")";
      case Kind::Stop:
        return "stop";
      case Kind::StopBar:
        return "stop_bar";
      case Kind::StopStar:
        return "stop_star";
      case Kind::Internal:
        return "i";
      case Kind::Tau:
        return "tau";
    }
    return "tau";
  }

  /// Inverse of to_text. `snd_s(...)`/`rcv_s(...)` parse as the service
  /// channel, so a focus literally named `s` does not round-trip.
  static ActionLabel parse(const std::string& text) {
    if (text == "stop") return stop();
    if (text == "stop_bar") return stop_bar();
    if (text == "stop_star") return stop_star();
    if (text == "i") return internal();
    if (text == "tau") return tau();
    bool is_snd = text.starts_with("snd_");
    bool is_rcv = text.starts_with("rcv_");
    if ((is_snd || is_rcv) && text.back() == ')') {
      std::size_t open = text.find('(');
      if (open != std::string::npos && open > 4) {
        std::string f = text.substr(4, open - 4);
        std::string d = text.substr(open + 1, text.size() - open - 2);
        if (f == "s") return {is_snd ? Kind::SndService : Kind::RcvService, "", d};
        return {is_snd ? Kind::SndFocus : Kind::RcvFocus, f, d};
      }
    }
    return atom(text);
  }
};

struct LtsTransition {
  int from = 0;
  ActionLabel label;
  int to = 0;

  bool operator==(const LtsTransition&) const = default;
  auto operator<=>(const LtsTransition&) const = default;
};

// Rooted labeled transition system with a termination predicate. A state
// with no outgoing transitions that is not terminating is a deadlock.
struct Lts {
  int root = 0;
  int state_count = 0;
  std::vector<LtsTransition> transitions;
  std::vector<bool> terminating;  // size == state_count

  bool operator==(const Lts&) const = default;

  int add_state(bool term = false) {
    terminating.push_back(term);
    return state_count++;
  }
  void add_transition(int from, ActionLabel label, int to) {
    transitions.push_back({from, std::move(label), to});
  }
};

/// The communication function: snd_f(d) | rcv_f(d) = i, stop | stop_bar =
/// stop*, and delta (nullopt) for every other pair. Symmetric; tau, i and
/// plain atomic actions never communicate.
inline std::optional<ActionLabel> gamma(const ActionLabel& a,
                                        const ActionLabel& b) {
  const ActionLabel* x = &a;
  const ActionLabel* y = &b;
  if (x->kind > y->kind) std::swap(x, y);
  if (x->kind == ActionLabel::Kind::SndFocus &&
      y->kind == ActionLabel::Kind::RcvFocus && x->focus == y->focus &&
      x->datum == y->datum)
    return ActionLabel::internal();
  if (x->kind == ActionLabel::Kind::Stop &&
      y->kind == ActionLabel::Kind::StopBar)
    return ActionLabel::stop_star();
  return std::nullopt;
}

/// Renumbers states in breadth-first discovery order from the root, prunes
/// unreachable states, and sorts transitions; the result is the unique
/// serialization form.
inline Lts canonicalize(const Lts& p) {
  std::vector<std::vector<LtsTransition>> adjacency(
      static_cast<std::size_t>(p.state_count));
  for (const LtsTransition& t : p.transitions)
    adjacency[static_cast<std::size_t>(t.from)].push_back(t);
  for (auto& out : adjacency)
    std::sort(out.begin(), out.end(),
              [](const LtsTransition& a, const LtsTransition& b) {
                return std::tie(a.label, a.to) < std::tie(b.label, b.to);
              });
  std::vector<int> renumber(static_cast<std::size_t>(p.state_count), -1);
  std::vector<int> order;
  renumber[static_cast<std::size_t>(p.root)] = 0;
  order.push_back(p.root);
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (const LtsTransition& t :
         adjacency[static_cast<std::size_t>(order[i])]) {
      if (renumber[static_cast<std::size_t>(t.to)] < 0) {
        renumber[static_cast<std::size_t>(t.to)] =
            static_cast<int>(order.size());
        order.push_back(t.to);
      }
    }
  }
  Lts out;
  out.root = 0;
  out.state_count = static_cast<int>(order.size());
  out.terminating.resize(order.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    out.terminating[i] = p.terminating[static_cast<std::size_t>(order[i])];
  for (const LtsTransition& t : p.transitions) {
    int from = renumber[static_cast<std::size_t>(t.from)];
    int to = renumber[static_cast<std::size_t>(t.to)];
    if (from >= 0 && to >= 0) out.transitions.push_back({from, t.label, to});
  }
  std::sort(out.transitions.begin(), out.transitions.end());
  return out;
}

/// Parallel composition with synchronization: interleavings of both sides
/// plus a gamma(a,b)-labeled transition for every communicating pair; a
/// product state terminates iff both components do.
inline Lts par_merge(const Lts& p, const Lts& q,
                     std::size_t state_bound = kDefaultStateBound) {
  Lts out;
  std::map<std::pair<int, int>, int> ids;
  std::vector<std::pair<int, int>> pending;
  std::vector<std::vector<const LtsTransition*>> from_p(
      static_cast<std::size_t>(p.state_count));
  std::vector<std::vector<const LtsTransition*>> from_q(
      static_cast<std::size_t>(q.state_count));
  for (const LtsTransition& t : p.transitions)
    from_p[static_cast<std::size_t>(t.from)].push_back(&t);
  for (const LtsTransition& t : q.transitions)
    from_q[static_cast<std::size_t>(t.from)].push_back(&t);

  auto state_for = [&](int a, int b) -> int {
    auto it = ids.find({a, b});
    if (it != ids.end()) return it->second;
    if (ids.size() >= state_bound) throw StateBoundExceeded(state_bound);
    int id = out.add_state(p.terminating[static_cast<std::size_t>(a)] &&
                           q.terminating[static_cast<std::size_t>(b)]);
    ids.emplace(std::make_pair(a, b), id);
    pending.emplace_back(a, b);
    return id;
  };

  out.root = state_for(p.root, q.root);
  for (std::size_t i = 0; i < pending.size(); ++i) {
    auto [a, b] = pending[i];
    int id = ids.at({a, b});
    for (const LtsTransition* t : from_p[static_cast<std::size_t>(a)])
      out.add_transition(id, t->label, state_for(t->to, b));
    for (const LtsTransition* u : from_q[static_cast<std::size_t>(b)])
      out.add_transition(id, u->label, state_for(a, u->to));
    for (const LtsTransition* t : from_p[static_cast<std::size_t>(a)])
      for (const LtsTransition* u : from_q[static_cast<std::size_t>(b)])
        if (std::optional<ActionLabel> c = gamma(t->label, u->label))
          out.add_transition(id, *c, state_for(t->to, u->to));
  }
  return canonicalize(out);
}

/// Deletes transitions whose label satisfies the predicate.
inline Lts encapsulate(const Lts& p,
                       const std::function<bool(const ActionLabel&)>& blocked) {
  Lts out = p;
  out.transitions.clear();
  for (const LtsTransition& t : p.transitions)
    if (!blocked(t.label)) out.transitions.push_back(t);
  return canonicalize(out);
}

inline Lts encapsulate(const Lts& p, const std::set<ActionLabel>& labels) {
  return encapsulate(
      p, [&](const ActionLabel& l) { return labels.contains(l); });
}

/// Relabels transitions; the map must fix tau.
inline Lts rename_labels(
    const Lts& p, const std::function<ActionLabel(const ActionLabel&)>& map) {
  Lts out = p;
  for (LtsTransition& t : out.transitions) t.label = map(t.label);
  return canonicalize(out);
}

/// Turns the labels in the set into tau.
inline Lts abstract(const Lts& p, const std::set<ActionLabel>& hidden) {
  return rename_labels(p, [&](const ActionLabel& l) {
    return hidden.contains(l) ? ActionLabel::tau() : l;
  });
}

/// Fresh root with a single tau step into the old root.
inline Lts tau_prefix(const Lts& p) {
  Lts out = p;
  int root = out.add_state(false);
  out.add_transition(root, ActionLabel::tau(), p.root);
  out.root = root;
  return canonicalize(out);
}

// Linear recursive specification over the process algebra: each equation is
// a sum of action-prefixed variables, lone actions, and delta.
struct LinearProcessSpec {
  struct Summand {
    enum class Kind { Step, Terminate, Delta };
    Kind kind = Kind::Delta;
    ActionLabel label;
    std::string target;  // Step only
  };

  std::vector<std::pair<std::string, std::vector<Summand>>> equations;

  const std::vector<Summand>* find(const std::string& var) const {
    for (const auto& [name, summands] : equations)
      if (name == var) return &summands;
    return nullptr;
  }

  const std::string& root() const { return equations.front().first; }

  std::string to_text() const {
    std::string out;
    for (const auto& [name, summands] : equations) {
      out += name + " = ";
      for (std::size_t i = 0; i < summands.size(); ++i) {
        if (i) out += " + ";
        switch (summands[i].kind) {
          case Summand::Kind::Step:
            out += summands[i].label.to_text() + " . " + summands[i].target;
            break;
          case Summand::Kind::Terminate:
            out += summands[i].label.to_text();
            break;
          case Summand::Kind::Delta:
            out += "delta";
            break;
        }
      }
      if (summands.empty()) out += "delta";
      out += " ;\n";
    }
    return out;
  }
};

/// Parses `X = a . Y + b + delta ;` equation lists. Action and variable
/// names are identifiers; reserved words (delta, tau, stop, stop_bar,
/// stop_star, i) cannot name atomic actions or variables.
inline LinearProcessSpec parse_linear_process_spec(const std::string& text) {
  static const std::set<std::string> reserved = {
      "delta", "tau", "stop", "stop_bar", "stop_star", "i"};
  detail::Cursor c(text);
  LinearProcessSpec spec;
  while (!c.at_end()) {
    std::string var = c.ident("variable");
    if (reserved.contains(var))
      c.fail("'" + var + "' is reserved and cannot name a variable");
    if (spec.find(var)) c.fail("duplicate equation for " + var);
    c.expect('=', "equation");
    std::vector<LinearProcessSpec::Summand> summands;
    do {
      std::string word = c.ident("summand");
      LinearProcessSpec::Summand s;
      if (word == "delta") {
        s.kind = LinearProcessSpec::Summand::Kind::Delta;
      } else {
        if (reserved.contains(word))
          c.fail("'" + word + "' is reserved and cannot name an action");
        s.label = ActionLabel::atom(word);
        if (c.try_eat('.')) {
          s.kind = LinearProcessSpec::Summand::Kind::Step;
          s.target = c.ident("target variable");
        } else {
          s.kind = LinearProcessSpec::Summand::Kind::Terminate;
        }
      }
      summands.push_back(std::move(s));
    } while (c.try_eat('+'));
    c.expect(';', "equation terminator");
    spec.equations.emplace_back(std::move(var), std::move(summands));
  }
  if (spec.equations.empty())
    throw ParseError("specification has no equations", 0);
  for (const auto& [name, summands] : spec.equations)
    for (const auto& s : summands)
      if (s.kind == LinearProcessSpec::Summand::Kind::Step && !spec.find(s.target))
        throw UnboundVariableError(s.target);
  return spec;
}

/// The LTS denoted by a linear specification: one state per variable plus a
/// shared terminating sink; delta summands contribute nothing.
inline Lts lts_from_linear_spec(const LinearProcessSpec& spec,
                                const std::string& root) {
  if (!spec.find(root)) throw UnboundVariableError(root);
  Lts out;
  std::map<std::string, int> ids;
  for (const auto& [name, summands] : spec.equations)
    ids.emplace(name, out.add_state(false));
  std::optional<int> sink;
  for (const auto& [name, summands] : spec.equations) {
    int from = ids.at(name);
    for (const auto& s : summands) {
      switch (s.kind) {
        case LinearProcessSpec::Summand::Kind::Step:
          out.add_transition(from, s.label, ids.at(s.target));
          break;
        case LinearProcessSpec::Summand::Kind::Terminate: {
          if (!sink) sink = out.add_state(true);
          out.add_transition(from, s.label, *sink);
          break;
        }
        case LinearProcessSpec::Summand::Kind::Delta:
          break;
      }
    }
  }
  out.root = ids.at(root);
  return canonicalize(out);
}

}  // namespace isaw
