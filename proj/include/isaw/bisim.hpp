#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

#include "isaw/lts.hpp"

namespace isaw {
namespace detail {

// Both checkers run signature-based partition refinement on the disjoint
// union of the two systems. Labels are interned to small integers first.
struct BisimArena {
  int total = 0;
  int root_a = 0;
  int root_b = 0;
  int tau_id = -1;
  std::vector<std::vector<std::pair<int, int>>> out;  // (label, target)
  std::vector<bool> terminating;

  BisimArena(const Lts& a, const Lts& b) {
    total = a.state_count + b.state_count;
    root_a = a.root;
    root_b = a.state_count + b.root;
    out.resize(static_cast<std::size_t>(total));
    terminating.resize(static_cast<std::size_t>(total));
    std::map<ActionLabel, int> intern;
    auto label_id = [&](const ActionLabel& l) {
      auto [it, unused] = intern.emplace(l, static_cast<int>(intern.size()));
      return it->second;
    };
    tau_id = label_id(ActionLabel::tau());
    for (int i = 0; i < a.state_count; ++i)
      terminating[static_cast<std::size_t>(i)] =
          a.terminating[static_cast<std::size_t>(i)];
    for (int i = 0; i < b.state_count; ++i)
      terminating[static_cast<std::size_t>(a.state_count + i)] =
          b.terminating[static_cast<std::size_t>(i)];
    for (const LtsTransition& t : a.transitions)
      out[static_cast<std::size_t>(t.from)].emplace_back(label_id(t.label),
                                                         t.to);
    for (const LtsTransition& t : b.transitions)
      out[static_cast<std::size_t>(a.state_count + t.from)].emplace_back(
          label_id(t.label), a.state_count + t.to);
  }
};

using Signature = std::tuple<int, bool, std::vector<std::pair<int, int>>>;

inline std::vector<int> refine(
    const BisimArena& arena,
    const std::function<Signature(const std::vector<int>&, int)>& signature) {
  std::vector<int> block(static_cast<std::size_t>(arena.total), 0);
  int block_count = 1;
  for (;;) {
    std::map<Signature, int> ids;
    std::vector<int> next(block.size());
    for (int s = 0; s < arena.total; ++s) {
      Signature sig = signature(block, s);
      auto [it, unused] =
          ids.emplace(std::move(sig), static_cast<int>(ids.size()));
      next[static_cast<std::size_t>(s)] = it->second;
    }
    int next_count = static_cast<int>(ids.size());
    block.swap(next);
    if (next_count == block_count) return block;
    block_count = next_count;
  }
}

inline std::vector<int> strong_partition(const BisimArena& arena) {
  return refine(arena, [&](const std::vector<int>& block, int s) {
    std::set<std::pair<int, int>> moves;
    for (const auto& [label, target] : arena.out[static_cast<std::size_t>(s)])
      moves.emplace(label, block[static_cast<std::size_t>(target)]);
    return Signature{block[static_cast<std::size_t>(s)],
                     arena.terminating[static_cast<std::size_t>(s)],
                     {moves.begin(), moves.end()}};
  });
}

// Branching signatures: a move (a, B') is visible from s if some state s'
// is reachable from s through tau steps that stay inside s's block and
// s' -a-> t with t in B', unless a is tau and B' is s's own block (an inert
// step). Termination is treated as an extra observable reached the same
// way. The refinement is divergence-insensitive, which is exactly the sense
// in which the fair abstraction rule holds here.
inline std::vector<int> branching_partition(const BisimArena& arena) {
  return refine(arena, [&](const std::vector<int>& block, int s) {
    int home = block[static_cast<std::size_t>(s)];
    std::set<std::pair<int, int>> moves;
    bool can_terminate = false;
    std::vector<int> closure{s};
    std::set<int> seen{s};
    for (std::size_t i = 0; i < closure.size(); ++i) {
      int cur = closure[i];
      if (arena.terminating[static_cast<std::size_t>(cur)])
        can_terminate = true;
      for (const auto& [label, target] :
           arena.out[static_cast<std::size_t>(cur)]) {
        int target_block = block[static_cast<std::size_t>(target)];
        if (label == arena.tau_id && target_block == home) {
          if (seen.insert(target).second) closure.push_back(target);
        } else {
          moves.emplace(label, target_block);
        }
      }
    }
    return Signature{home, can_terminate, {moves.begin(), moves.end()}};
  });
}

// Root condition: every initial move of one root is matched by an equally
// labeled initial move of the other into the same class (tau included),
// and the roots agree on immediate termination.
inline bool roots_match(const BisimArena& arena, const std::vector<int>& block) {
  if (arena.terminating[static_cast<std::size_t>(arena.root_a)] !=
      arena.terminating[static_cast<std::size_t>(arena.root_b)])
    return false;
  auto initial = [&](int root) {
    std::set<std::pair<int, int>> moves;
    for (const auto& [label, target] :
         arena.out[static_cast<std::size_t>(root)])
      moves.emplace(label, block[static_cast<std::size_t>(target)]);
    return moves;
  };
  return initial(arena.root_a) == initial(arena.root_b);
}

}  // namespace detail

/// Strong bisimilarity, with terminating and non-terminating states
/// distinguished from the start.
inline bool strong_bisimilar(const Lts& a, const Lts& b) {
  detail::BisimArena arena(a, b);
  std::vector<int> block = detail::strong_partition(arena);
  return block[static_cast<std::size_t>(arena.root_a)] ==
         block[static_cast<std::size_t>(arena.root_b)];
}

/// Branching bisimilarity without the root condition.
inline bool branching_bisimilar(const Lts& a, const Lts& b) {
  detail::BisimArena arena(a, b);
  std::vector<int> block = detail::branching_partition(arena);
  return block[static_cast<std::size_t>(arena.root_a)] ==
         block[static_cast<std::size_t>(arena.root_b)];
}

/// Rooted branching bisimilarity: branching classes plus the root condition
/// (initial tau moves must be matched by actual tau moves).
inline bool rooted_branching_bisimilar(const Lts& a, const Lts& b) {
  detail::BisimArena arena(a, b);
  std::vector<int> block = detail::branching_partition(arena);
  if (block[static_cast<std::size_t>(arena.root_a)] !=
      block[static_cast<std::size_t>(arena.root_b)])
    return false;
  return detail::roots_match(arena, block);
}

}  // namespace isaw
