#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "isaw/errors.hpp"
#include "isaw/lts.hpp"

namespace isaw {

/// JSON form: {"root": n, "states": N, "terminating": [ids],
/// "transitions": [[from,"label",to],...]}. The LTS is canonicalized first
/// so the output is deterministic.
inline std::string lts_to_json(const Lts& p) {
  Lts c = canonicalize(p);
  nlohmann::json j;
  j["root"] = c.root;
  j["states"] = c.state_count;
  nlohmann::json terminating = nlohmann::json::array();
  for (int i = 0; i < c.state_count; ++i)
    if (c.terminating[static_cast<std::size_t>(i)]) terminating.push_back(i);
  j["terminating"] = std::move(terminating);
  nlohmann::json transitions = nlohmann::json::array();
  for (const LtsTransition& t : c.transitions)
    transitions.push_back({t.from, t.label.to_text(), t.to});
  j["transitions"] = std::move(transitions);
  return j.dump(2) + "\n";
}

inline Lts lts_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad JSON: ") + e.what(), 0);
  }
  try {
    Lts out;
    out.state_count = j.at("states").get<int>();
    out.root = j.at("root").get<int>();
    if (out.state_count < 1 || out.root < 0 || out.root >= out.state_count)
      throw ParseError("bad root or state count", 0);
    out.terminating.assign(static_cast<std::size_t>(out.state_count), false);
    for (const auto& id : j.at("terminating")) {
      int s = id.get<int>();
      if (s < 0 || s >= out.state_count)
        throw ParseError("terminating id out of range", 0);
      out.terminating[static_cast<std::size_t>(s)] = true;
    }
    for (const auto& t : j.at("transitions")) {
      if (!t.is_array() || t.size() != 3)
        throw ParseError("transition must be [from, label, to]", 0);
      int from = t[0].get<int>();
      int to = t[2].get<int>();
      if (from < 0 || from >= out.state_count || to < 0 ||
          to >= out.state_count)
        throw ParseError("transition endpoint out of range", 0);
      out.add_transition(from, ActionLabel::parse(t[1].get<std::string>()), to);
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad LTS JSON: ") + e.what(), 0);
  }
}

/// Aldebaran export. Termination has no native encoding in .aut, so every
/// terminating state gets a "term!" transition into one extra sink state;
/// the header counts include that encoding.
inline std::string lts_to_aut(const Lts& p) {
  Lts c = canonicalize(p);
  int sink = c.state_count;
  int term_count = 0;
  for (int i = 0; i < c.state_count; ++i)
    if (c.terminating[static_cast<std::size_t>(i)]) ++term_count;
  std::string out = "des (" + std::to_string(c.root) + ", " +
                    std::to_string(c.transitions.size() + term_count) + ", " +
                    std::to_string(c.state_count + 1) + ")\n";
  for (const LtsTransition& t : c.transitions)
    out += "(" + std::to_string(t.from) + ", \"" + t.label.to_text() + "\", " +
           std::to_string(t.to) + ")\n";
  for (int i = 0; i < c.state_count; ++i)
    if (c.terminating[static_cast<std::size_t>(i)])
      out += "(" + std::to_string(i) + ", \"term!\", " +
             std::to_string(sink) + ")\n";
  return out;
}

inline Lts lts_from_aut(const std::string& text) {
  std::size_t newline = text.find('\n');
  if (newline == std::string::npos)
    throw ParseError("missing .aut header", 0);
  int root = 0;
  long long transition_count = 0;
  int state_count = 0;
  {
    std::string header_line = text.substr(0, newline);
    detail::Cursor c(header_line);
    if (c.ident("header") != "des") c.fail("expected 'des' header");
    c.expect('(', "header");
    root = static_cast<int>(c.nat("root"));
    c.expect(',', "header");
    transition_count = c.nat("transition count");
    c.expect(',', "header");
    state_count = static_cast<int>(c.nat("state count"));
    c.expect(')', "header");
    if (!c.at_end()) c.fail("trailing input in header");
  }
  if (state_count < 2)
    throw ParseError(".aut encoding needs the termination sink state", 0);
  int sink = state_count - 1;
  Lts out;
  out.state_count = state_count - 1;
  out.terminating.assign(static_cast<std::size_t>(out.state_count), false);
  if (root < 0 || root >= out.state_count)
    throw ParseError("root out of range", 0);
  out.root = root;

  std::size_t pos = newline + 1;
  long long seen = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(pos, end - pos);
    pos = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::size_t q1 = line.find('"');
    std::size_t q2 = line.rfind('"');
    if (line.front() != '(' || q1 == std::string::npos || q2 <= q1)
      throw ParseError("bad .aut transition line: " + line, pos);
    detail::Cursor c(line);
    c.expect('(', "transition");
    int from = static_cast<int>(c.nat("from"));
    c.expect(',', "transition");
    std::string label = line.substr(q1 + 1, q2 - q1 - 1);
    std::string tail = line.substr(q2 + 1);
    detail::Cursor rest(tail);
    rest.expect(',', "transition");
    int to = static_cast<int>(rest.nat("to"));
    rest.expect(')', "transition");
    ++seen;
    if (label == "term!") {
      if (to != sink)
        throw ParseError("term! must target the sink state", pos);
      if (from < 0 || from >= out.state_count)
        throw ParseError("transition endpoint out of range", pos);
      out.terminating[static_cast<std::size_t>(from)] = true;
    } else {
      if (from < 0 || from >= out.state_count || to < 0 ||
          to >= out.state_count)
        throw ParseError("transition endpoint out of range", pos);
      out.add_transition(from, ActionLabel::parse(label), to);
    }
  }
  if (seen != transition_count)
    throw ParseError("transition count does not match header", 0);
  return out;
}

}  // namespace isaw
