#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "isaw/errors.hpp"
#include "isaw/thread.hpp"

namespace isaw {

inline constexpr std::size_t kDefaultStateBound = 100000;

// A service is an immutable state machine: reply() yields the return value
// for processing a method in the current state, derive() the service after
// processing it. Reply 0 means the request is rejected, and rejection is
// absorbing: once a service replies 0 it replies 0 forever.
class Service {
 public:
  virtual ~Service() = default;
  virtual int reply(const std::string& method) const = 0;
  virtual std::shared_ptr<const Service> derive(
      const std::string& method) const = 0;
  // Stable identity of the current state, used to keep products finite.
  virtual std::string state_key() const = 0;
  // The declared method alphabet (reachability is explored over these plus
  // whatever methods a composed thread actually requests).
  virtual std::vector<std::string> methods() const = 0;
};

using ServicePtr = std::shared_ptr<const Service>;

enum class RegisterState { True, False, Blocked };

namespace detail {

class BooleanRegister final : public Service {
 public:
  explicit BooleanRegister(RegisterState s) : state_(s) {}

  int reply(const std::string& method) const override {
    return encode(next(method));
  }

  ServicePtr derive(const std::string& method) const override {
    return std::make_shared<BooleanRegister>(next(method));
  }

  std::string state_key() const override {
    switch (state_) {
      case RegisterState::True:
        return "T";
      case RegisterState::False:
        return "F";
      case RegisterState::Blocked:
        return "B";
    }
    return "B";
  }

  std::vector<std::string> methods() const override {
    return {"set:T", "set:F", "get"};
  }

 private:
  // Effect and yield coincide for Boolean registers.
  RegisterState next(const std::string& method) const {
    if (state_ == RegisterState::Blocked) return RegisterState::Blocked;
    if (method == "set:T") return RegisterState::True;
    if (method == "set:F") return RegisterState::False;
    if (method == "get") return state_;
    return RegisterState::Blocked;
  }

  static int encode(RegisterState s) {
    switch (s) {
      case RegisterState::True:
        return 1;
      case RegisterState::False:
        return 2;
      case RegisterState::Blocked:
        return 0;
    }
    return 0;
  }

  RegisterState state_;
};

class BoundedCounter final : public Service {
 public:
  BoundedCounter(int max, int value, bool blocked)
      : max_(max), value_(value), blocked_(blocked) {}

  int reply(const std::string& method) const override {
    if (blocked_) return 0;
    if (method == "inc") return value_ < max_ ? 1 : 0;
    if (method == "dec") return value_ > 0 ? 1 : 2;
    if (method == "iszero") return value_ == 0 ? 1 : 2;
    return 0;
  }

  ServicePtr derive(const std::string& method) const override {
    if (blocked_) return std::make_shared<BoundedCounter>(max_, 0, true);
    if (method == "inc") {
      if (value_ < max_)
        return std::make_shared<BoundedCounter>(max_, value_ + 1, false);
      return std::make_shared<BoundedCounter>(max_, 0, true);
    }
    if (method == "dec")
      return std::make_shared<BoundedCounter>(
          max_, value_ > 0 ? value_ - 1 : 0, false);
    if (method == "iszero")
      return std::make_shared<BoundedCounter>(max_, value_, false);
    return std::make_shared<BoundedCounter>(max_, 0, true);
  }

  std::string state_key() const override {
    return blocked_ ? "B" : std::to_string(value_);
  }

  std::vector<std::string> methods() const override {
    return {"inc", "dec", "iszero"};
  }

 private:
  int max_;
  int value_;
  bool blocked_;
};

class BoundedStack final : public Service {
 public:
  BoundedStack(int max, std::string alphabet, std::string word, bool blocked)
      : max_(max),
        alphabet_(std::move(alphabet)),
        word_(std::move(word)),
        blocked_(blocked) {}

  int reply(const std::string& method) const override {
    if (blocked_) return 0;
    if (method == "pop") return word_.empty() ? 2 : 1;
    if (method.starts_with("push:") && valid_symbol(method.substr(5)))
      return static_cast<int>(word_.size()) < max_ ? 1 : 0;
    if (method.starts_with("top:") && valid_symbol(method.substr(4)))
      return !word_.empty() && word_.back() == method[4] ? 1 : 2;
    return 0;
  }

  ServicePtr derive(const std::string& method) const override {
    if (blocked_) return blocked_stack();
    if (method == "pop") {
      std::string w = word_;
      if (!w.empty()) w.pop_back();
      return std::make_shared<BoundedStack>(max_, alphabet_, w, false);
    }
    if (method.starts_with("push:") && valid_symbol(method.substr(5))) {
      if (static_cast<int>(word_.size()) >= max_) return blocked_stack();
      return std::make_shared<BoundedStack>(max_, alphabet_,
                                            word_ + method[5], false);
    }
    if (method.starts_with("top:") && valid_symbol(method.substr(4)))
      return std::make_shared<BoundedStack>(max_, alphabet_, word_, false);
    return blocked_stack();
  }

  std::string state_key() const override { return blocked_ ? "!B" : word_; }

  std::vector<std::string> methods() const override {
    std::vector<std::string> out = {"pop"};
    for (char c : alphabet_) {
      out.push_back(std::string("push:") + c);
      out.push_back(std::string("top:") + c);
    }
    return out;
  }

 private:
  bool valid_symbol(const std::string& s) const {
    return s.size() == 1 && alphabet_.find(s[0]) != std::string::npos;
  }

  ServicePtr blocked_stack() const {
    return std::make_shared<BoundedStack>(max_, alphabet_, "", true);
  }

  int max_;
  std::string alphabet_;
  std::string word_;
  bool blocked_;
};

}  // namespace detail

inline ServicePtr boolean_register(RegisterState init) {
  return std::make_shared<detail::BooleanRegister>(init);
}

inline ServicePtr bounded_counter(int max) {
  return std::make_shared<detail::BoundedCounter>(max, 0, false);
}

inline ServicePtr bounded_stack(int max, std::string alphabet) {
  return std::make_shared<detail::BoundedStack>(max, std::move(alphabet), "",
                                                false);
}

/// Parses `br:<t|f|b>`, `counter:<max>`, `stack:<max>:<alphabet>`.
inline ServicePtr parse_service_descriptor(const std::string& desc) {
  if (desc == "br:t") return boolean_register(RegisterState::True);
  if (desc == "br:f") return boolean_register(RegisterState::False);
  if (desc == "br:b") return boolean_register(RegisterState::Blocked);
  if (desc.starts_with("counter:")) {
    std::string digits = desc.substr(8);
    detail::Cursor c(digits);
    std::int64_t max = c.nat("counter bound");
    if (!c.at_end()) throw ParseError("bad counter descriptor", 8);
    return bounded_counter(static_cast<int>(max));
  }
  if (desc.starts_with("stack:")) {
    std::size_t sep = desc.find(':', 6);
    if (sep == std::string::npos)
      throw ParseError("stack descriptor needs an alphabet", desc.size());
    std::string digits = desc.substr(6, sep - 6);
    detail::Cursor c(digits);
    std::int64_t max = c.nat("stack bound");
    std::string alphabet = desc.substr(sep + 1);
    if (!c.at_end() || alphabet.empty())
      throw ParseError("bad stack descriptor", sep);
    return bounded_stack(static_cast<int>(max), alphabet);
  }
  throw ParseError("unknown service descriptor: " + desc, 0);
}

/// The use operator p /f H at the thread level: requests f.m are answered by
/// the service and turn into tau steps; every other action passes through
/// with the service state threaded along unchanged.
inline ThreadAutomaton use_thread(const ThreadAutomaton& a,
                                  const std::string& focus, ServicePtr h,
                                  std::size_t state_bound = kDefaultStateBound) {
  if (state_bound < 1) throw StateBoundExceeded(state_bound);
  ThreadAutomaton out;
  std::map<std::pair<StateId, std::string>, StateId> ids;
  std::vector<std::pair<StateId, ServicePtr>> pending;

  auto state_for = [&](StateId tid, ServicePtr service) -> StateId {
    auto key = std::make_pair(tid, service->state_key());
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    if (ids.size() >= state_bound) throw StateBoundExceeded(state_bound);
    StateId id = static_cast<StateId>(out.states.size());
    out.states.emplace_back();
    ids.emplace(key, id);
    pending.emplace_back(tid, std::move(service));
    return id;
  };

  out.root = state_for(a.root, std::move(h));
  std::size_t cursor = 0;
  while (cursor < pending.size()) {
    auto [tid, service] = pending[cursor++];
    StateId id = ids.at({tid, service->state_key()});
    const ThreadState& s = a.at(tid);
    if (s.kind != ThreadState::Kind::Switch) {
      out.states[static_cast<std::size_t>(id)] =
          s.kind == ThreadState::Kind::Stop ? ThreadState::stop()
                                            : ThreadState::dead();
      continue;
    }
    bool is_request = s.action.kind == BasicAction::Kind::Interaction &&
                      s.action.focus == focus;
    if (!is_request) {
      std::vector<StateId> targets;
      targets.reserve(s.targets.size());
      for (StateId t : s.targets) targets.push_back(state_for(t, service));
      out.states[static_cast<std::size_t>(id)] =
          ThreadState::make_switch(s.action, std::move(targets));
      continue;
    }
    int i = service->reply(s.action.method);
    if (i < 1 || i > static_cast<int>(s.targets.size())) {
      out.states[static_cast<std::size_t>(id)] = ThreadState::dead();
      continue;
    }
    StateId next = state_for(s.targets[static_cast<std::size_t>(i - 1)],
                             service->derive(s.action.method));
    out.states[static_cast<std::size_t>(id)] =
        ThreadState::make_switch(BasicAction::tau(), {next});
  }
  return normalize(out);
}

}  // namespace isaw
