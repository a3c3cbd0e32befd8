#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "isaw/errors.hpp"
#include "isaw/lts.hpp"
#include "isaw/pgld.hpp"

namespace isaw {

namespace detail {

struct SpecEquation {
  std::string var;
  std::vector<std::pair<std::string, std::string>> steps;  // (action, target)
  std::vector<std::string> terminates;                     // actions
};

// Reorders each equation into steps-then-terminates and rejects the shapes
// the constructions do not cover (no summands, delta summands).
inline std::vector<SpecEquation> synthesis_view(const LinearProcessSpec& spec) {
  if (spec.equations.empty()) throw EmptyEquationError("<spec>");
  std::vector<SpecEquation> out;
  for (const auto& [var, summands] : spec.equations) {
    if (summands.empty()) throw EmptyEquationError(var);
    SpecEquation eq;
    eq.var = var;
    for (const auto& s : summands) {
      switch (s.kind) {
        case LinearProcessSpec::Summand::Kind::Delta:
          throw DeltaSummandError();
        case LinearProcessSpec::Summand::Kind::Step:
          if (s.label.kind != ActionLabel::Kind::Atom)
            throw Error("synthesis needs plain atomic actions");
          eq.steps.emplace_back(s.label.datum, s.target);
          break;
        case LinearProcessSpec::Summand::Kind::Terminate:
          if (s.label.kind != ActionLabel::Kind::Atom)
            throw Error("synthesis needs plain atomic actions");
          eq.terminates.push_back(s.label.datum);
          break;
      }
    }
    out.push_back(std::move(eq));
  }
  return out;
}

}  // namespace detail

/// Multi-reply construction: per equation one multi-reply test over
/// ac(step actions..., terminate actions...) followed by one absolute jump
/// per reply; step replies jump to the target variable's block, terminate
/// replies jump to 0 (PGLDmr termination). The first equation is the root
/// and owns the first block.
inline PgldProgram synth_multireply(const LinearProcessSpec& spec) {
  std::vector<detail::SpecEquation> eqs = detail::synthesis_view(spec);
  std::map<std::string, std::int64_t> block_head;
  std::int64_t pos = 1;
  for (const auto& eq : eqs) {
    block_head[eq.var] = pos;
    pos += 1 + static_cast<std::int64_t>(eq.steps.size() + eq.terminates.size());
  }
  PgldProgram p;
  for (const auto& eq : eqs) {
    std::vector<std::string> actions;
    for (const auto& [action, target] : eq.steps) actions.push_back(action);
    for (const std::string& action : eq.terminates) actions.push_back(action);
    int arity = static_cast<int>(actions.size());
    p.instructions.push_back(PgldInstruction::pos_multi(
        arity, BasicInstruction::construct(std::move(actions))));
    for (const auto& [action, target] : eq.steps)
      p.instructions.push_back(
          PgldInstruction::abs_jump(block_head.at(target)));
    for (std::size_t i = 0; i < eq.terminates.size(); ++i)
      p.instructions.push_back(PgldInstruction::abs_jump(0));
  }
  return p;
}

/// Binary construction, using only binary tests over ac(e, tact): per
/// summand one three-instruction link `+ac(e,tact) ; ##then ; ##else`,
/// where `then` is the target block (steps) or 0 (terminates) and `else`
/// the next link, cycling back to the equation's first link at the end.
inline PgldProgram synth_binary(const LinearProcessSpec& spec,
                                const std::string& tact) {
  std::vector<detail::SpecEquation> eqs = detail::synthesis_view(spec);
  for (const auto& eq : eqs) {
    for (const auto& [action, target] : eq.steps)
      if (action == tact) throw TactCollisionError(tact);
    for (const std::string& action : eq.terminates)
      if (action == tact) throw TactCollisionError(tact);
  }
  std::map<std::string, std::int64_t> block_head;
  std::int64_t pos = 1;
  for (const auto& eq : eqs) {
    block_head[eq.var] = pos;
    pos += 3 * static_cast<std::int64_t>(eq.steps.size() + eq.terminates.size());
  }
  PgldProgram p;
  for (const auto& eq : eqs) {
    std::int64_t head = block_head.at(eq.var);
    std::int64_t links =
        static_cast<std::int64_t>(eq.steps.size() + eq.terminates.size());
    std::int64_t link = 0;
    auto emit = [&](const std::string& action, std::int64_t then_target) {
      std::int64_t next_link =
          link + 1 < links ? head + 3 * (link + 1) : head;
      p.instructions.push_back(PgldInstruction::pos_test(
          BasicInstruction::construct({action, tact})));
      p.instructions.push_back(PgldInstruction::abs_jump(then_target));
      p.instructions.push_back(PgldInstruction::abs_jump(next_link));
      ++link;
    };
    for (const auto& [action, target] : eq.steps)
      emit(action, block_head.at(target));
    for (const std::string& action : eq.terminates) emit(action, 0);
  }
  return p;
}

struct SingleOccurrenceResult {
  PgldProgram program;
  int registers = 0;
};

/// Rewrites a block-form program so that every test instruction occurs at
/// most once. Sites sharing a test are replaced by register-setting stubs
/// that jump to one shared copy of the test; true/false dispatch chains
/// read the registers back to recover which site was entered, reset the
/// register, and continue to that site's original continuation.
inline SingleOccurrenceResult to_single_occurrence(const PgldProgram& p) {
  std::int64_t size = static_cast<std::int64_t>(p.instructions.size());
  if (size == 0 || size % 3 != 0)
    throw NotBlockFormError("length is not a multiple of 3");
  std::int64_t n_links = size / 3;

  struct Link {
    std::vector<std::string> actions;  // the tested ac(e, t) action list
    std::int64_t then_target = 0;
    std::int64_t else_target = 0;
  };
  std::vector<Link> links;
  for (std::int64_t i = 0; i < n_links; ++i) {
    const PgldInstruction& test = p.instructions[static_cast<std::size_t>(3 * i)];
    const PgldInstruction& then_jump =
        p.instructions[static_cast<std::size_t>(3 * i + 1)];
    const PgldInstruction& else_jump =
        p.instructions[static_cast<std::size_t>(3 * i + 2)];
    if (test.kind != PgldInstruction::Kind::PosTest ||
        test.basic->kind != BasicInstruction::Kind::Construct ||
        test.basic->actions.size() != 2)
      throw NotBlockFormError("link " + std::to_string(i + 1) +
                              " does not start with a binary construct test");
    if (then_jump.kind != PgldInstruction::Kind::AbsJump ||
        else_jump.kind != PgldInstruction::Kind::AbsJump)
      throw NotBlockFormError("link " + std::to_string(i + 1) +
                              " is not followed by two jumps");
    links.push_back(
        {test.basic->actions, then_jump.target, else_jump.target});
  }
  auto link_of_target = [&](std::int64_t t) -> std::int64_t {
    // 0 = terminate; targets past the end also terminate. Returns -1 for
    // terminate, else the 0-based link index.
    if (t == 0 || t > size) return -1;
    if ((t - 1) % 3 != 0)
      throw NotBlockFormError("jump target " + std::to_string(t) +
                              " is not a link head");
    return (t - 1) / 3;
  };
  for (const Link& l : links) {
    link_of_target(l.then_target);
    link_of_target(l.else_target);
  }

  // Group links by tested action list, keeping first-occurrence order.
  std::map<std::vector<std::string>, std::vector<std::int64_t>> sites;
  std::vector<std::vector<std::string>> group_order;
  for (std::int64_t i = 0; i < n_links; ++i) {
    auto [it, inserted] = sites.try_emplace(links[static_cast<std::size_t>(i)].actions);
    if (inserted) group_order.push_back(links[static_cast<std::size_t>(i)].actions);
    it->second.push_back(i);
  }
  bool any_shared = false;
  for (const auto& [actions, occurrences] : sites)
    any_shared = any_shared || occurrences.size() > 1;
  if (!any_shared) return {p, 0};

  // Register per shared site, numbered by link position.
  std::map<std::int64_t, int> register_of;
  int registers = 0;
  auto shared = [&](std::int64_t link) {
    return sites.at(links[static_cast<std::size_t>(link)].actions).size() > 1;
  };
  for (std::int64_t i = 0; i < n_links; ++i)
    if (shared(i)) register_of[i] = ++registers;

  // Layout pass: stubs and relocated links first, then one segment per
  // shared group: head test, true dispatch chain, false dispatch chain,
  // true resets, false resets.
  std::vector<std::int64_t> new_head(static_cast<std::size_t>(n_links));
  std::int64_t pos = 1;
  for (std::int64_t i = 0; i < n_links; ++i) {
    new_head[static_cast<std::size_t>(i)] = pos;
    pos += shared(i) ? 2 : 3;
  }
  struct Segment {
    std::vector<std::string> actions;
    std::vector<std::int64_t> site_links;
    std::int64_t head = 0;
    std::int64_t true_dispatch = 0;
    std::int64_t false_dispatch = 0;
    std::int64_t true_resets = 0;
    std::int64_t false_resets = 0;
  };
  std::vector<Segment> segments;
  std::map<std::vector<std::string>, std::size_t> segment_of;
  for (const auto& actions : group_order) {
    const auto& occurrences = sites.at(actions);
    if (occurrences.size() < 2) continue;
    Segment seg;
    seg.actions = actions;
    seg.site_links = occurrences;
    std::int64_t m = static_cast<std::int64_t>(occurrences.size());
    seg.head = pos;
    seg.true_dispatch = seg.head + 3;
    seg.false_dispatch = seg.true_dispatch + 3 * m;
    seg.true_resets = seg.false_dispatch + 3 * m;
    seg.false_resets = seg.true_resets + 2 * m;
    pos = seg.false_resets + 2 * m;
    segment_of[actions] = segments.size();
    segments.push_back(std::move(seg));
  }

  auto remap = [&](std::int64_t target) -> std::int64_t {
    std::int64_t link = link_of_target(target);
    return link < 0 ? 0 : new_head[static_cast<std::size_t>(link)];
  };
  auto reg_focus = [&](std::int64_t link) {
    return "br" + std::to_string(register_of.at(link));
  };

  PgldProgram out;
  for (std::int64_t i = 0; i < n_links; ++i) {
    const Link& l = links[static_cast<std::size_t>(i)];
    if (!shared(i)) {
      out.instructions.push_back(PgldInstruction::pos_test(
          BasicInstruction::construct(l.actions)));
      out.instructions.push_back(PgldInstruction::abs_jump(remap(l.then_target)));
      out.instructions.push_back(PgldInstruction::abs_jump(remap(l.else_target)));
    } else {
      out.instructions.push_back(PgldInstruction::plain(
          BasicInstruction::interaction(reg_focus(i), "set:T")));
      out.instructions.push_back(PgldInstruction::abs_jump(
          segments[segment_of.at(l.actions)].head));
    }
  }
  for (const Segment& seg : segments) {
    std::int64_t m = static_cast<std::int64_t>(seg.site_links.size());
    out.instructions.push_back(PgldInstruction::pos_test(
        BasicInstruction::construct(seg.actions)));
    out.instructions.push_back(PgldInstruction::abs_jump(seg.true_dispatch));
    out.instructions.push_back(PgldInstruction::abs_jump(seg.false_dispatch));
    for (std::int64_t idx = 0; idx < m; ++idx) {
      std::int64_t site = seg.site_links[static_cast<std::size_t>(idx)];
      out.instructions.push_back(PgldInstruction::pos_test(
          BasicInstruction::interaction(reg_focus(site), "get")));
      out.instructions.push_back(
          PgldInstruction::abs_jump(seg.true_resets + 2 * idx));
      out.instructions.push_back(PgldInstruction::abs_jump(
          idx + 1 < m ? seg.true_dispatch + 3 * (idx + 1) : 0));
    }
    for (std::int64_t idx = 0; idx < m; ++idx) {
      std::int64_t site = seg.site_links[static_cast<std::size_t>(idx)];
      out.instructions.push_back(PgldInstruction::pos_test(
          BasicInstruction::interaction(reg_focus(site), "get")));
      out.instructions.push_back(
          PgldInstruction::abs_jump(seg.false_resets + 2 * idx));
      out.instructions.push_back(PgldInstruction::abs_jump(
          idx + 1 < m ? seg.false_dispatch + 3 * (idx + 1) : 0));
    }
    for (std::int64_t idx = 0; idx < m; ++idx) {
      std::int64_t site = seg.site_links[static_cast<std::size_t>(idx)];
      out.instructions.push_back(PgldInstruction::plain(
          BasicInstruction::interaction(reg_focus(site), "set:F")));
      out.instructions.push_back(PgldInstruction::abs_jump(
          remap(links[static_cast<std::size_t>(site)].then_target)));
    }
    for (std::int64_t idx = 0; idx < m; ++idx) {
      std::int64_t site = seg.site_links[static_cast<std::size_t>(idx)];
      out.instructions.push_back(PgldInstruction::plain(
          BasicInstruction::interaction(reg_focus(site), "set:F")));
      out.instructions.push_back(PgldInstruction::abs_jump(
          remap(links[static_cast<std::size_t>(site)].else_target)));
    }
  }
  return {std::move(out), registers};
}

}  // namespace isaw
