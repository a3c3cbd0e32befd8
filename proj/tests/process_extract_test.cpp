#include <catch2/catch_amalgamated.hpp>

#include "generators.hpp"
#include "isaw/bisim.hpp"
#include "isaw/process_extract.hpp"
#include "isaw/thread_extract.hpp"
#include "oracles.hpp"

using namespace isaw;

namespace {

ThreadAutomaton thread_of(const char* text, const char* root = "X") {
  return from_linear_spec(parse_linear_thread_spec(text), root);
}

Lts lts_of(const char* text, const char* root = "X") {
  return lts_from_linear_spec(parse_linear_process_spec(text), root);
}

int count_label(const Lts& p, const ActionLabel& l) {
  int n = 0;
  for (const LtsTransition& t : p.transitions)
    if (t.label == l) ++n;
  return n;
}

}  // namespace

TEST_CASE("pextr_c base shapes") {
  Lts stop = pextr_c(thread_of("X = S ;"));
  REQUIRE(stop.state_count == 2);
  REQUIRE(stop.transitions.size() == 1);
  REQUIRE(stop.transitions[0].label == ActionLabel::stop());
  REQUIRE(stop.terminating[static_cast<std::size_t>(stop.transitions[0].to)]);

  Lts dead = pextr_c(thread_of("X = D ;"));
  REQUIRE(dead.state_count == 2);
  REQUIRE(dead.transitions.size() == 1);
  REQUIRE(dead.transitions[0].label == ActionLabel::internal());
  REQUIRE_FALSE(dead.terminating[static_cast<std::size_t>(dead.transitions[0].to)]);

  // tau switch: exactly two i steps before the target's image.
  Lts tau = pextr_c(thread_of("X = tau[Y] ; Y = S ;"));
  REQUIRE(count_label(tau, ActionLabel::internal()) == 2);
  REQUIRE(count_label(tau, ActionLabel::stop()) == 1);

  // f.m switch: request then one reply branch per target.
  Lts req = pextr_c(thread_of("X = f.m[Y,Z] ; Y = S ; Z = D ;"));
  REQUIRE(count_label(req, ActionLabel::snd("f", "m")) == 1);
  REQUIRE(count_label(req, ActionLabel::rcv("f", "1")) == 1);
  REQUIRE(count_label(req, ActionLabel::rcv("f", "2")) == 1);

  // construct switch: one branch per action.
  Lts cons = pextr_c(thread_of("X = ac(a,b)[Y,Z] ; Y = S ; Z = D ;"));
  REQUIRE(count_label(cons, ActionLabel::atom("a")) == 1);
  REQUIRE(count_label(cons, ActionLabel::atom("b")) == 1);
}

TEST_CASE("arity mismatches match the direct defining equations") {
  std::mt19937 rng(61);
  for (int i = 0; i < 100; ++i) {
    // Raw automaton, possibly with construct/target arity mismatches and
    // wide tau switches.
    ThreadAutomaton raw = testing::random_thread_automaton(rng, 5);
    for (ThreadState& s : raw.states) {
      if (s.kind == ThreadState::Kind::Switch && testing::chance(rng, 0.5) &&
          !s.targets.empty()) {
        if (testing::chance(rng, 0.5))
          s.targets.push_back(s.targets.front());
        else if (s.targets.size() > 1)
          s.targets.pop_back();
      }
    }
    Lts direct = testing::direct_pextr_c(raw);
    Lts normalized_first = pextr_c(raw);
    REQUIRE(strong_bisimilar(direct, normalized_first));
  }
}

TEST_CASE("pextr hides the termination announcement") {
  Lts stop = pextr(thread_of("X = S ;"));
  REQUIRE(stop.transitions.size() == 1);
  REQUIRE(stop.transitions[0].label == ActionLabel::tau());
  REQUIRE(stop.terminating[static_cast<std::size_t>(stop.transitions[0].to)]);

  Lts dead = pextr(thread_of("X = D ;"));
  REQUIRE(dead.transitions[0].label == ActionLabel::internal());

  // {X = ac(a,b)[X, Stop]}: a-loop plus b into tau-then-termination.
  Lts mixed = pextr(thread_of("X = ac(a,b)[X,Y] ; Y = S ;"));
  Lts expected = lts_of("X = a . X + b . Y ; Y = t ;");
  expected = abstract(expected, {ActionLabel::atom("t")});
  REQUIRE(strong_bisimilar(mixed, expected));
}

TEST_CASE("pextr output uses only the public alphabet") {
  std::mt19937 rng(62);
  for (int i = 0; i < 50; ++i) {
    ThreadAutomaton a = normalize(testing::random_thread_automaton(rng, 6));
    Lts p = pextr(a);
    for (const LtsTransition& t : p.transitions) {
      REQUIRE(t.label.kind != ActionLabel::Kind::SndService);
      REQUIRE(t.label.kind != ActionLabel::Kind::RcvService);
      REQUIRE(t.label.kind != ActionLabel::Kind::StopBar);
      REQUIRE(t.label.kind != ActionLabel::Kind::StopStar);
      REQUIRE(t.label.kind != ActionLabel::Kind::Stop);
    }
  }
}

TEST_CASE("service_lts enumerates reachable service states") {
  // BR(True) over its own methods reaches {True, False}: 2 service states,
  // each with a stop_bar exit and 3 method handshakes.
  Lts br = service_lts(boolean_register(RegisterState::True));
  REQUIRE(count_label(br, ActionLabel::stop_bar()) == 2);
  REQUIRE(count_label(br, ActionLabel::rcv_service("get")) == 2);
  REQUIRE(count_label(br, ActionLabel::rcv_service("set:T")) == 2);

  // Blocked register: every reply is snd_s(0).
  Lts blocked = service_lts(boolean_register(RegisterState::Blocked));
  REQUIRE(count_label(blocked, ActionLabel::stop_bar()) == 1);
  for (const LtsTransition& t : blocked.transitions)
    if (t.label.kind == ActionLabel::Kind::SndService)
      REQUIRE(t.label == ActionLabel::snd_service(0));

  // Extra methods widen the explored alphabet (and block the register).
  Lts widened = service_lts(boolean_register(RegisterState::True), {"zap"});
  REQUIRE(count_label(widened, ActionLabel::rcv_service("zap")) == 3);
}

TEST_CASE("use_process composes the full pipeline") {
  // No f-actions: using a service only synchronizes termination.
  ThreadAutomaton plain = thread_of("X = ac(a)[Y] ; Y = S ;");
  Lts used = abstract(
      use_process(plain, "br1", boolean_register(RegisterState::False)),
      {ActionLabel::stop()});
  REQUIRE(strong_bisimilar(used, pextr(plain)));

  // Request answered with reply 1: i, i, then stop.
  ThreadAutomaton req = thread_of("X = br1.get[Y,Y] ; Y = S ;");
  Lts composed =
      use_process(req, "br1", boolean_register(RegisterState::True));
  Lts expected = lts_of("X = i1 . Y ; Y = i2 . Z ; Z = s ;");
  expected = rename_labels(expected, [](const ActionLabel& l) {
    if (l == ActionLabel::atom("i1") || l == ActionLabel::atom("i2"))
      return ActionLabel::internal();
    if (l == ActionLabel::atom("s")) return ActionLabel::stop();
    return l;
  });
  REQUIRE(strong_bisimilar(composed, expected));
}

TEST_CASE("thread-level and process-level use agree") {
  std::mt19937 rng(63);
  for (int i = 0; i < 100; ++i) {
    ThreadAutomaton a = normalize(testing::random_thread_automaton(rng, 8));
    RegisterState init = i % 3 == 0   ? RegisterState::True
                         : i % 3 == 1 ? RegisterState::False
                                      : RegisterState::Blocked;
    ServicePtr h = boolean_register(init);
    Lts process_route =
        abstract(use_process(a, "br1", h), {ActionLabel::stop()});
    Lts thread_route = pextr(use_thread(a, "br1", h));
    REQUIRE(strong_bisimilar(process_route, thread_route));
  }
}

TEST_CASE("extraction preserves the thread axioms") {
  std::mt19937 rng(64);
  // S2/S3/T1/T2 instances: a mismatched switch against its normal form.
  for (int i = 0; i < 60; ++i) {
    ThreadAutomaton raw = testing::random_thread_automaton(rng, 5);
    ThreadAutomaton cooked = normalize(raw);
    REQUIRE(strong_bisimilar(testing::direct_pextr_c(raw), pextr_c(cooked)));
  }
  // RDP instances: a recursion constant against its one-step unfolding.
  for (int i = 0; i < 40; ++i) {
    ThreadAutomaton a = normalize(testing::random_thread_automaton(rng, 5));
    ThreadAutomaton unfolded = a;
    unfolded.states.push_back(a.at(a.root));
    unfolded.root = static_cast<StateId>(unfolded.states.size() - 1);
    REQUIRE(strong_bisimilar(pextr_c(a), pextr_c(prune_unreachable(unfolded))));
  }
}

TEST_CASE("service enumeration respects the state bound") {
  REQUIRE_THROWS_AS(service_lts(bounded_counter(1000), {}, 10),
                    StateBoundExceeded);
}
