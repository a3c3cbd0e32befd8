#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "isaw/detail/text.hpp"
#include "isaw/errors.hpp"
#include "isaw/pga.hpp"

namespace isaw {

// PGLDmr instruction: like a PGAmr instruction but with absolute jumps
// (##l, 1-based target) instead of forward jumps and no explicit halt;
// running past the end of the program terminates.
struct PgldInstruction {
  enum class Kind { Plain, PosTest, NegTest, PosMultiTest, NegMultiTest, AbsJump };

  Kind kind = Kind::AbsJump;
  std::optional<BasicInstruction> basic;
  int arity = 0;
  std::int64_t target = 0;  // absolute jumps, >= 0

  static PgldInstruction plain(BasicInstruction b) {
    return {Kind::Plain, std::move(b), 0, 0};
  }
  static PgldInstruction pos_test(BasicInstruction b) {
    return {Kind::PosTest, std::move(b), 0, 0};
  }
  static PgldInstruction neg_test(BasicInstruction b) {
    return {Kind::NegTest, std::move(b), 0, 0};
  }
  static PgldInstruction pos_multi(int n, BasicInstruction b) {
    return {Kind::PosMultiTest, std::move(b), n, 0};
  }
  static PgldInstruction neg_multi(int n, BasicInstruction b) {
    return {Kind::NegMultiTest, std::move(b), n, 0};
  }
  static PgldInstruction abs_jump(std::int64_t l) {
    return {Kind::AbsJump, std::nullopt, 0, l};
  }

  bool operator==(const PgldInstruction&) const = default;

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
      case Kind::AbsJump:
        return "##" + std::to_string(target);
    }
    return "##0";
  }
};

struct PgldProgram {
  std::vector<PgldInstruction> instructions;  // nonempty; positions are 1-based

  bool operator==(const PgldProgram&) const = default;

  std::string to_text() const {
    std::string out;
    for (std::size_t i = 0; i < instructions.size(); ++i) {
      if (i) out += " ; ";
      out += instructions[i].to_text();
    }
    return out;
  }
};

namespace detail {

inline PgldInstruction parse_pgld_instruction(Cursor& c) {
  char ch = c.peek();
  if (ch == '!') c.fail("'!' is not a PGLDmr instruction");
  if (ch == '#') {
    c.try_eat('#');
    if (!c.try_eat('#'))
      c.fail("relative jumps are not PGLDmr instructions; use '##'");
    return PgldInstruction::abs_jump(c.nat("jump target"));
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
      return positive ? PgldInstruction::pos_multi(static_cast<int>(n), b)
                      : PgldInstruction::neg_multi(static_cast<int>(n), b);
    }
    BasicInstruction b = parse_basic(c);
    return positive ? PgldInstruction::pos_test(b)
                    : PgldInstruction::neg_test(b);
  }
  return PgldInstruction::plain(parse_basic(c));
}

}  // namespace detail

/// Parses a PGLDmr program (semicolon-separated instruction list).
inline PgldProgram parse_pgld(const std::string& text) {
  detail::Cursor c(text);
  PgldProgram p;
  p.instructions.push_back(detail::parse_pgld_instruction(c));
  while (c.try_eat(';'))
    p.instructions.push_back(detail::parse_pgld_instruction(c));
  if (!c.at_end()) c.fail("trailing input after program");
  return p;
}

/// Meaning-preserving translation into PGAmr: the canonical form of
/// (phi_1(u_1) ; ... ; phi_k(u_k) ; ! ; !)*, where phi_j rewrites absolute
/// jumps into forward jumps through the repeated copy.
inline InstructionSequence pgld_to_pga(const PgldProgram& p) {
  std::int64_t k = static_cast<std::int64_t>(p.instructions.size());
  std::vector<PrimitiveInstruction> body;
  body.reserve(p.instructions.size() + 2);
  for (std::int64_t j = 1; j <= k; ++j) {
    const PgldInstruction& u = p.instructions[static_cast<std::size_t>(j - 1)];
    switch (u.kind) {
      case PgldInstruction::Kind::Plain:
        body.push_back(PrimitiveInstruction::plain(*u.basic));
        break;
      case PgldInstruction::Kind::PosTest:
        body.push_back(PrimitiveInstruction::pos_test(*u.basic));
        break;
      case PgldInstruction::Kind::NegTest:
        body.push_back(PrimitiveInstruction::neg_test(*u.basic));
        break;
      case PgldInstruction::Kind::PosMultiTest:
        body.push_back(PrimitiveInstruction::pos_multi(u.arity, *u.basic));
        break;
      case PgldInstruction::Kind::NegMultiTest:
        body.push_back(PrimitiveInstruction::neg_multi(u.arity, *u.basic));
        break;
      case PgldInstruction::Kind::AbsJump: {
        std::int64_t l = u.target;
        if (j <= l && l <= k) {
          body.push_back(PrimitiveInstruction::fwd_jump(l - j));
        } else if (0 < l && l < j) {
          body.push_back(PrimitiveInstruction::fwd_jump(k + 2 - (j - l)));
        } else {  // l == 0 or l > k: termination
          body.push_back(PrimitiveInstruction::halt());
        }
        break;
      }
    }
  }
  body.push_back(PrimitiveInstruction::halt());
  body.push_back(PrimitiveInstruction::halt());
  PgaTerm t = PgaTerm::repeat([&] {
    PgaTerm acc = PgaTerm::instruction(body[0]);
    for (std::size_t i = 1; i < body.size(); ++i)
      acc = PgaTerm::concat(std::move(acc), PgaTerm::instruction(body[i]));
    return acc;
  }());
  return canonical_form(t);
}

}  // namespace isaw
