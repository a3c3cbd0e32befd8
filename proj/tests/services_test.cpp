#include <catch2/catch_amalgamated.hpp>

#include "generators.hpp"
#include "isaw/services.hpp"
#include "oracles.hpp"

using namespace isaw;

namespace {

// Test-only service with a fixed reply, for exercising out-of-range replies.
class ConstantReply final : public Service {
 public:
  explicit ConstantReply(int reply) : reply_(reply) {}
  int reply(const std::string&) const override { return reply_; }
  ServicePtr derive(const std::string&) const override {
    return std::make_shared<ConstantReply>(reply_);
  }
  std::string state_key() const override { return std::to_string(reply_); }
  std::vector<std::string> methods() const override { return {"m"}; }

 private:
  int reply_;
};

}  // namespace

TEST_CASE("boolean register effect and yield") {
  ServicePtr t = boolean_register(RegisterState::True);
  REQUIRE(t->reply("get") == 1);
  ServicePtr f = boolean_register(RegisterState::False);
  REQUIRE(f->reply("get") == 2);
  REQUIRE(f->derive("set:T")->reply("get") == 1);
  REQUIRE(t->derive("set:F")->reply("get") == 2);
  REQUIRE(t->reply("set:T") == 1);
  REQUIRE(t->reply("set:F") == 2);

  // Foreign methods block the register permanently.
  REQUIRE(t->reply("unknown_method") == 0);
  ServicePtr blocked = t->derive("unknown_method");
  REQUIRE(blocked->reply("get") == 0);
  REQUIRE(blocked->derive("set:T")->reply("get") == 0);
}

TEST_CASE("bounded counter blocks past its bound") {
  ServicePtr c = bounded_counter(2);
  REQUIRE(c->reply("iszero") == 1);
  c = c->derive("inc");
  REQUIRE(c->reply("iszero") == 2);
  c = c->derive("inc");           // at the bound now
  REQUIRE(c->reply("inc") == 0);  // would exceed
  ServicePtr blocked = c->derive("inc");
  REQUIRE(blocked->reply("dec") == 0);
  REQUIRE(blocked->reply("iszero") == 0);
  // dec below zero replies false but does not block.
  ServicePtr zero = bounded_counter(2);
  REQUIRE(zero->reply("dec") == 2);
  REQUIRE(zero->derive("dec")->reply("iszero") == 1);
}

TEST_CASE("bounded stack tracks its word") {
  ServicePtr s = bounded_stack(2, "ab");
  REQUIRE(s->reply("pop") == 2);
  s = s->derive("push:a");
  REQUIRE(s->reply("top:a") == 1);
  REQUIRE(s->reply("top:b") == 2);
  s = s->derive("push:b");
  REQUIRE(s->reply("push:a") == 0);  // full
  REQUIRE(s->derive("push:a")->reply("pop") == 0);
  REQUIRE(s->derive("pop")->reply("top:a") == 1);
  REQUIRE(s->reply("push:z") == 0);  // outside the alphabet
}

TEST_CASE("service descriptors parse") {
  REQUIRE(parse_service_descriptor("br:t")->reply("get") == 1);
  REQUIRE(parse_service_descriptor("br:f")->reply("get") == 2);
  REQUIRE(parse_service_descriptor("br:b")->reply("get") == 0);
  REQUIRE(parse_service_descriptor("counter:3")->reply("iszero") == 1);
  REQUIRE(parse_service_descriptor("stack:2:ab")->reply("pop") == 2);
  REQUIRE_THROWS_AS(parse_service_descriptor("oracle:42"), ParseError);
  REQUIRE_THROWS_AS(parse_service_descriptor("stack:2"), ParseError);
}

TEST_CASE("use_thread answers requests and passes other actions through") {
  // Switch(br1.get, [a Stop, b Stop]) with BR(True): tau then the a branch.
  ThreadAutomaton a = from_linear_spec(
      parse_linear_thread_spec(
          "X = br1.get[A,B] ; A = ac(a)[T] ; B = ac(b)[T] ; T = S ;"),
      "X");
  ThreadAutomaton used =
      use_thread(a, "br1", boolean_register(RegisterState::True));
  ThreadAutomaton expected = from_linear_spec(
      parse_linear_thread_spec("X = tau[A] ; A = ac(a)[T] ; T = S ;"), "X");
  REQUIRE(thread_equal(used, expected));

  // Blocked service deadlocks the request.
  ThreadAutomaton dead =
      use_thread(a, "br1", boolean_register(RegisterState::Blocked));
  REQUIRE(thread_equal(
      dead, from_linear_spec(parse_linear_thread_spec("X = D ;"), "X")));

  // A different focus is untouched, service state threaded through.
  ThreadAutomaton other = from_linear_spec(
      parse_linear_thread_spec("X = g.m[A,B] ; A = S ; B = D ;"), "X");
  REQUIRE(thread_equal(
      use_thread(other, "br1", boolean_register(RegisterState::True)), other));

  // Reply outside [1,k] deadlocks.
  ThreadAutomaton ternary = from_linear_spec(
      parse_linear_thread_spec("X = f.m[A,A,A] ; A = S ;"), "X");
  ThreadAutomaton r5 =
      use_thread(ternary, "f", std::make_shared<ConstantReply>(5));
  REQUIRE(thread_equal(
      r5, from_linear_spec(parse_linear_thread_spec("X = D ;"), "X")));
}

TEST_CASE("use_thread with an absent focus is the identity up to equality") {
  std::mt19937 rng(31);
  for (int i = 0; i < 50; ++i) {
    ThreadAutomaton a = normalize(testing::random_thread_automaton(rng, 6));
    ThreadAutomaton used =
        use_thread(a, "absent", boolean_register(RegisterState::False));
    REQUIRE(thread_equal(a, used));
  }
}

TEST_CASE("projection commutes with use (U14)") {
  std::mt19937 rng(32);
  for (int i = 0; i < 50; ++i) {
    ThreadAutomaton a = normalize(testing::random_thread_automaton(rng, 5));
    ServicePtr h = boolean_register(i % 2 == 0 ? RegisterState::True
                                               : RegisterState::False);
    for (int depth = 0; depth <= 4; ++depth) {
      FiniteThread lhs = project(use_thread(a, "br1", h), depth);
      ThreadAutomaton cut =
          normalize(testing::finite_thread_to_automaton(project(a, depth)));
      FiniteThread rhs = project(use_thread(cut, "br1", h), depth);
      REQUIRE(lhs == rhs);
    }
  }
}

TEST_CASE("a thread that overruns a counter reaches a deadlock") {
  // inc three times against a bound of 2: the last request is rejected.
  ThreadAutomaton a = from_linear_spec(
      parse_linear_thread_spec("X = c.inc[Y,Y] ; Y = c.inc[Z,Z] ; "
                               "Z = c.inc[T,T] ; T = S ;"),
      "X");
  ThreadAutomaton used = use_thread(a, "c", bounded_counter(2));
  bool has_dead = false;
  for (const ThreadState& s : used.states)
    has_dead = has_dead || s.kind == ThreadState::Kind::Dead;
  REQUIRE(has_dead);
  // With a looser bound it terminates instead.
  ThreadAutomaton fine = use_thread(a, "c", bounded_counter(3));
  for (const ThreadState& s : fine.states)
    REQUIRE(s.kind != ThreadState::Kind::Dead);
}

TEST_CASE("use_thread honours the state bound") {
  ThreadAutomaton a = from_linear_spec(
      parse_linear_thread_spec("X = c.inc[Y,Y] ; Y = c.inc[X,X] ;"), "X");
  REQUIRE_THROWS_AS(use_thread(a, "c", bounded_counter(50), 10),
                    StateBoundExceeded);
}
