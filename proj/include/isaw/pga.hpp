#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "isaw/detail/text.hpp"
#include "isaw/errors.hpp"

namespace isaw {

// A basic instruction: either a request f.m to the service named by the
// focus, or ac(e1,...,en), which performs one of the listed atomic actions
// and replies with the index of the action performed.
struct BasicInstruction {
  enum class Kind { Interaction, Construct };

  Kind kind = Kind::Interaction;
  std::string focus;
  std::string method;
  std::vector<std::string> actions;

  static BasicInstruction interaction(std::string f, std::string m) {
    BasicInstruction b;
    b.kind = Kind::Interaction;
    b.focus = std::move(f);
    b.method = std::move(m);
    return b;
  }

  static BasicInstruction construct(std::vector<std::string> es) {
    BasicInstruction b;
    b.kind = Kind::Construct;
    b.actions = std::move(es);
    return b;
  }

  bool operator==(const BasicInstruction&) const = default;

  std::string to_text() const {
    if (kind == Kind::Interaction) return focus + "." + method;
    std::string out = "ac(";
    for (std::size_t i = 0; i < actions.size(); ++i) {
      if (i) out += ',';
      out += actions[i];
    }
    out += ')';
    return out;
  }
};

struct PrimitiveInstruction {
  enum class Kind {
    Plain,
    PosTest,
    NegTest,
    PosMultiTest,
    NegMultiTest,
    FwdJump,
    Halt
  };

  Kind kind = Kind::Halt;
  std::optional<BasicInstruction> basic;
  int arity = 0;          // multi-reply tests, >= 1
  std::int64_t jump = 0;  // forward jumps, >= 0

  static PrimitiveInstruction plain(BasicInstruction b) {
    return {Kind::Plain, std::move(b), 0, 0};
  }
  static PrimitiveInstruction pos_test(BasicInstruction b) {
    return {Kind::PosTest, std::move(b), 0, 0};
  }
  static PrimitiveInstruction neg_test(BasicInstruction b) {
    return {Kind::NegTest, std::move(b), 0, 0};
  }
  static PrimitiveInstruction pos_multi(int n, BasicInstruction b) {
    return {Kind::PosMultiTest, std::move(b), n, 0};
  }
  static PrimitiveInstruction neg_multi(int n, BasicInstruction b) {
    return {Kind::NegMultiTest, std::move(b), n, 0};
  }
  static PrimitiveInstruction fwd_jump(std::int64_t l) {
    return {Kind::FwdJump, std::nullopt, 0, l};
  }
  static PrimitiveInstruction halt() { return {Kind::Halt, std::nullopt, 0, 0}; }

  bool operator==(const PrimitiveInstruction&) const = default;

  bool is_test() const {
    return kind == Kind::PosTest || kind == Kind::NegTest ||
           kind == Kind::PosMultiTest || kind == Kind::NegMultiTest;
  }

  // +a and -a are the same instructions as +[2]a and -[2]a; canonical forms
  // use the short spelling.
  PrimitiveInstruction normalized() const {
    if (kind == Kind::PosMultiTest && arity == 2)
      return pos_test(*basic);
    if (kind == Kind::NegMultiTest && arity == 2)
      return neg_test(*basic);
    return *this;
  }

  std::string to_text() const {
    switch (kind) {
      case Kind::Plain:
        return basic->to_text();
      case Kind::PosTest:
        return "+" + basic->to_text();
      case Kind::NegTest:
        return "-" + basic->to_text();
      case Kind::PosMultiTest:
        return "+[" + std::to_string(arity) + "]" + basic->to_text();
      case Kind::NegMultiTest:
        return "-[" + std::to_string(arity) + "]" + basic->to_text();
      case Kind::FwdJump:
        return "#" + std::to_string(jump);
      case Kind::Halt:
        return "!";
    }
    return "!";
  }
};

// Abstract syntax of PGAmr terms: instruction constants, concatenation,
// finite powers and the omega repetition (spelled '*' in concrete syntax).
struct PgaTerm {
  enum class Kind { Instruction, Concat, Power, Repeat };

  Kind kind = Kind::Instruction;
  PrimitiveInstruction instr;
  std::vector<PgaTerm> children;  // Concat: 2, Power/Repeat: 1
  std::int64_t exponent = 0;      // Power, >= 1

  static PgaTerm instruction(PrimitiveInstruction u) {
    PgaTerm t;
    t.kind = Kind::Instruction;
    t.instr = std::move(u);
    return t;
  }
  static PgaTerm concat(PgaTerm l, PgaTerm r) {
    PgaTerm t;
    t.kind = Kind::Concat;
    t.children.push_back(std::move(l));
    t.children.push_back(std::move(r));
    return t;
  }
  static PgaTerm power(PgaTerm base, std::int64_t n) {
    PgaTerm t;
    t.kind = Kind::Power;
    t.children.push_back(std::move(base));
    t.exponent = n;
    return t;
  }
  static PgaTerm repeat(PgaTerm base) {
    PgaTerm t;
    t.kind = Kind::Repeat;
    t.children.push_back(std::move(base));
    return t;
  }
};

// First canonical form: a finite prefix optionally followed by an infinite
// repetition of the period. An empty period vector means no repetition.
// Canonical sequences have a primitive period whose last instruction differs
// from the last prefix instruction, so equality is structural.
struct InstructionSequence {
  std::vector<PrimitiveInstruction> prefix;
  std::vector<PrimitiveInstruction> period;

  bool has_period() const { return !period.empty(); }
  bool operator==(const InstructionSequence&) const = default;

  std::string to_text() const {
    std::string out;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
      if (i) out += " ; ";
      out += prefix[i].to_text();
    }
    if (has_period()) {
      if (!prefix.empty()) out += " ; ";
      out += '(';
      for (std::size_t i = 0; i < period.size(); ++i) {
        if (i) out += " ; ";
        out += period[i].to_text();
      }
      out += ")*";
    }
    return out;
  }
};

namespace detail {

inline BasicInstruction parse_basic(Cursor& c) {
  std::string name = c.ident("basic instruction");
  if (name == "ac" && c.peek() == '(') {
    c.expect('(', "ac(...)");
    std::vector<std::string> actions;
    actions.push_back(c.ident("atomic action"));
    while (c.try_eat(',')) actions.push_back(c.ident("atomic action"));
    c.expect(')', "ac(...)");
    return BasicInstruction::construct(std::move(actions));
  }
  c.expect('.', "interaction instruction");
  std::string method = c.ident("method");
  return BasicInstruction::interaction(std::move(name), std::move(method));
}

inline PrimitiveInstruction parse_primitive(Cursor& c) {
  char ch = c.peek();
  if (ch == '!') {
    c.try_eat('!');
    return PrimitiveInstruction::halt();
  }
  if (ch == '#') {
    c.try_eat('#');
    return PrimitiveInstruction::fwd_jump(c.nat("jump"));
  }
  if (ch == '+' || ch == '-') {
    bool positive = ch == '+';
    c.try_eat(ch);
    if (c.try_eat('[')) {
      std::int64_t n = c.nat("test arity");
      if (n < 1) c.fail("multi-reply test arity must be at least 1");
      if (n > 1'000'000) c.fail("multi-reply test arity too large");
      c.expect(']', "multi-reply test");
      BasicInstruction b = parse_basic(c);
      return positive
                 ? PrimitiveInstruction::pos_multi(static_cast<int>(n), b)
                 : PrimitiveInstruction::neg_multi(static_cast<int>(n), b);
    }
    BasicInstruction b = parse_basic(c);
    return positive ? PrimitiveInstruction::pos_test(b)
                    : PrimitiveInstruction::neg_test(b);
  }
  return PrimitiveInstruction::plain(parse_basic(c));
}

inline PgaTerm parse_pga_term(Cursor& c);

inline PgaTerm parse_pga_factor(Cursor& c) {
  if (c.try_eat('(')) {
    PgaTerm inner = parse_pga_term(c);
    c.expect(')', "parenthesized term");
    if (c.try_eat('*')) return PgaTerm::repeat(std::move(inner));
    if (c.try_eat('^')) {
      std::int64_t n = c.nat("power");
      if (n < 1) c.fail("power exponent must be at least 1");
      if (n > 1'000'000) c.fail("power exponent too large");
      return PgaTerm::power(std::move(inner), n);
    }
    return inner;
  }
  return PgaTerm::instruction(parse_primitive(c));
}

inline PgaTerm parse_pga_term(Cursor& c) {
  PgaTerm t = parse_pga_factor(c);
  while (c.peek() == ';') {
    c.try_eat(';');
    t = PgaTerm::concat(std::move(t), parse_pga_factor(c));
  }
  return t;
}

// Flattens a term into prefix+period without the canonicity guarantees.
// Everything after the first repetition is dropped and powers of infinite
// sequences collapse, which is exactly what PGA2/PGA3 license.
inline InstructionSequence flatten(const PgaTerm& t) {
  switch (t.kind) {
    case PgaTerm::Kind::Instruction:
      return {{t.instr.normalized()}, {}};
    case PgaTerm::Kind::Concat: {
      InstructionSequence left = flatten(t.children[0]);
      if (left.has_period()) return left;
      InstructionSequence right = flatten(t.children[1]);
      left.prefix.insert(left.prefix.end(), right.prefix.begin(),
                         right.prefix.end());
      left.period = std::move(right.period);
      return left;
    }
    case PgaTerm::Kind::Power: {
      InstructionSequence base = flatten(t.children[0]);
      if (base.has_period()) return base;
      if (base.prefix.size() * static_cast<std::size_t>(t.exponent) >
          10'000'000)
        throw Error("finite power expands beyond the supported size");
      InstructionSequence out;
      for (std::int64_t i = 0; i < t.exponent; ++i)
        out.prefix.insert(out.prefix.end(), base.prefix.begin(),
                          base.prefix.end());
      return out;
    }
    case PgaTerm::Kind::Repeat: {
      InstructionSequence base = flatten(t.children[0]);
      if (base.has_period()) return base;
      return {{}, std::move(base.prefix)};
    }
  }
  return {};
}

// Smallest word w with period == w^k, found by scanning the divisors.
inline void reduce_period(std::vector<PrimitiveInstruction>& period) {
  std::size_t n = period.size();
  for (std::size_t p = 1; p < n; ++p) {
    if (n % p != 0) continue;
    bool repeats = true;
    for (std::size_t i = p; i < n && repeats; ++i)
      repeats = period[i] == period[i % p];
    if (repeats) {
      period.resize(p);
      return;
    }
  }
}

}  // namespace detail

/// Parses the PGAmr concrete syntax; throws ParseError on malformed input.
inline PgaTerm parse_pga(const std::string& text) {
  detail::Cursor c(text);
  PgaTerm t = detail::parse_pga_term(c);
  if (!c.at_end()) c.fail("trailing input after term");
  return t;
}

/// Reduces a term to the first canonical form under PGA1-PGA4.
inline InstructionSequence canonical_form(const PgaTerm& t) {
  InstructionSequence s = detail::flatten(t);
  if (s.has_period()) {
    detail::reduce_period(s.period);
    // Rotate prefix tails into the period: P x (Q x)^w == P (x Q)^w.
    while (!s.prefix.empty() && s.prefix.back() == s.period.back()) {
      s.prefix.pop_back();
      s.period.insert(s.period.begin(), s.period.back());
      s.period.pop_back();
    }
  }
  return s;
}

/// True iff the two canonical sequences denote the same instruction sequence.
inline bool sequences_equal(const InstructionSequence& a,
                            const InstructionSequence& b) {
  return a == b;
}

/// 1-based positional access into the (possibly infinite) sequence.
inline std::optional<PrimitiveInstruction> instruction_at(
    const InstructionSequence& s, std::int64_t pos) {
  if (pos < 1) return std::nullopt;
  std::int64_t prefix_len = static_cast<std::int64_t>(s.prefix.size());
  if (pos <= prefix_len) return s.prefix[static_cast<std::size_t>(pos - 1)];
  if (!s.has_period()) return std::nullopt;
  std::int64_t offset =
      (pos - prefix_len - 1) % static_cast<std::int64_t>(s.period.size());
  return s.period[static_cast<std::size_t>(offset)];
}

}  // namespace isaw
