// isaw: instruction sequences / threads / processes workbench.
//
// Subcommands: canon, translate, thread, process, synth, single-occurrence,
// equiv. Exit codes: 0 success (or equivalent), 1 not equivalent, 2 usage
// or parse error, 3 state bound exceeded.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "isaw/isaw.hpp"

namespace {

struct Attachment {
  std::string focus;
  isaw::ServicePtr service;
};

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream buffer;
    buffer << std::cin.rdbuf();
    return buffer.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw isaw::Error("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw isaw::Error("cannot open " + path + " for writing");
  out << text;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::size_t state_bound_from_env() {
  const char* env = std::getenv("ISAW_STATE_BOUND");
  if (!env) return isaw::kDefaultStateBound;
  char* end = nullptr;
  long long value = std::strtoll(env, &end, 10);
  if (end == env || *end != '\0' || value < 1)
    throw isaw::Error("ISAW_STATE_BOUND must be a positive integer");
  return static_cast<std::size_t>(value);
}

std::vector<Attachment> parse_attachments(
    const std::vector<std::string>& specs) {
  std::vector<Attachment> out;
  std::set<std::string> seen;
  for (const std::string& spec : specs) {
    std::size_t eq = spec.find('=');
    if (eq == std::string::npos || eq == 0)
      throw isaw::Error("--use expects focus=descriptor, got: " + spec);
    std::string focus = spec.substr(0, eq);
    if (!seen.insert(focus).second)
      throw isaw::Error("duplicate service focus: " + focus);
    out.push_back({focus, isaw::parse_service_descriptor(spec.substr(eq + 1))});
  }
  return out;
}

// Program text -> canonical instruction sequence, honoring --lang or the
// file extension (.pgld means PGLDmr, everything else PGAmr).
isaw::InstructionSequence load_program(const std::string& path,
                                       const std::string& lang) {
  if (!lang.empty() && lang != "pga" && lang != "pgld")
    throw isaw::Error("--lang must be pga or pgld");
  std::string text = read_input(path);
  bool pgld = lang == "pgld" || (lang.empty() && ends_with(path, ".pgld"));
  if (pgld) return isaw::pgld_to_pga(isaw::parse_pgld(text));
  return isaw::canonical_form(isaw::parse_pga(text));
}

isaw::Lts load_lts(const std::string& path) {
  std::string text = read_input(path);
  if (ends_with(path, ".aut")) return isaw::lts_from_aut(text);
  return isaw::lts_from_json(text);
}

int run(int argc, char** argv) {
  CLI::App app{"instruction-sequence / thread / process workbench"};
  app.require_subcommand(1);

  std::string input;
  std::string output;
  std::string lang;
  std::string format;
  std::string mode;
  std::string tact = "t";
  std::string kind;
  bool root_tau = false;
  std::vector<std::string> uses;
  std::vector<std::string> hide;
  std::string lhs_path, rhs_path;

  CLI::App* canon = app.add_subcommand(
      "canon", "reduce a PGAmr term to its canonical form");
  canon->add_option("input", input, "PGAmr file or -")->required();
  canon->add_option("-o,--output", output, "output file");

  CLI::App* translate = app.add_subcommand(
      "translate", "translate a PGLDmr program into canonical PGAmr");
  translate->add_option("input", input, "PGLDmr file or -")->required();
  translate->add_option("-o,--output", output, "output file");

  CLI::App* thread = app.add_subcommand(
      "thread", "extract the thread of a program as a linear spec");
  thread->add_option("input", input, "program file or -")->required();
  thread->add_option("--lang", lang, "pga or pgld (default: by extension)");
  thread->add_option("--use", uses, "attach a service, focus=descriptor");
  thread->add_option("-o,--output", output, "output file");

  CLI::App* process = app.add_subcommand(
      "process", "extract the process of a program as an LTS");
  process->add_option("input", input, "program file or -")->required();
  process->add_option("--lang", lang, "pga or pgld (default: by extension)");
  process->add_option("--use", uses, "attach a service, focus=descriptor");
  process->add_option("--abstract", hide, "additional labels to hide");
  process->add_option("-f,--format", format, "json or aut (default: json)");
  process->add_option("-o,--output", output, "output file");

  CLI::App* synth = app.add_subcommand(
      "synth", "synthesize a PGLDmr program from a linear process spec");
  synth->add_option("input", input, "spec file or -")->required();
  synth->add_option("--mode", mode, "multi or binary")->required();
  synth->add_option("--tact", tact, "auxiliary action for binary mode");
  synth->add_option("-o,--output", output, "output file");

  CLI::App* single = app.add_subcommand(
      "single-occurrence",
      "rewrite a block-form program so each test occurs once");
  single->add_option("input", input, "PGLDmr file or -")->required();
  single->add_option("-o,--output", output, "output file");

  CLI::App* equiv =
      app.add_subcommand("equiv", "compare two LTS files (.json or .aut)");
  equiv->add_option("--kind", kind, "strong or rbranching")->required();
  equiv->add_flag("--root-tau", root_tau, "compare tau-prefixed systems");
  equiv->add_option("lhs", lhs_path, "first LTS file")->required();
  equiv->add_option("rhs", rhs_path, "second LTS file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::size_t bound = state_bound_from_env();

  if (canon->parsed()) {
    isaw::InstructionSequence s =
        isaw::canonical_form(isaw::parse_pga(read_input(input)));
    write_output(output, s.to_text() + "\n");
    return 0;
  }
  if (translate->parsed()) {
    isaw::InstructionSequence s =
        isaw::pgld_to_pga(isaw::parse_pgld(read_input(input)));
    write_output(output, s.to_text() + "\n");
    return 0;
  }
  if (thread->parsed()) {
    isaw::ThreadAutomaton a = isaw::extract_thread(load_program(input, lang));
    for (const Attachment& at : parse_attachments(uses))
      a = isaw::use_thread(a, at.focus, at.service, bound);
    write_output(output, isaw::to_linear_spec(a).to_text());
    return 0;
  }
  if (process->parsed()) {
    isaw::ThreadAutomaton a = isaw::extract_thread(load_program(input, lang));
    isaw::Lts lts = isaw::pextr_c(a);
    for (const Attachment& at : parse_attachments(uses))
      lts = isaw::use_process_c(lts, at.focus, at.service, bound);
    std::set<isaw::ActionLabel> hidden = {isaw::ActionLabel::stop()};
    for (const std::string& label : hide)
      hidden.insert(isaw::ActionLabel::parse(label));
    lts = isaw::abstract(lts, hidden);
    bool aut = format == "aut" || (format.empty() && ends_with(output, ".aut"));
    write_output(output, aut ? isaw::lts_to_aut(lts) : isaw::lts_to_json(lts));
    return 0;
  }
  if (synth->parsed()) {
    isaw::LinearProcessSpec spec =
        isaw::parse_linear_process_spec(read_input(input));
    isaw::PgldProgram program;
    if (mode == "multi") {
      program = isaw::synth_multireply(spec);
    } else if (mode == "binary") {
      program = isaw::synth_binary(spec, tact);
    } else {
      throw isaw::Error("--mode must be multi or binary");
    }
    write_output(output, program.to_text() + "\n");
    return 0;
  }
  if (single->parsed()) {
    isaw::SingleOccurrenceResult result =
        isaw::to_single_occurrence(isaw::parse_pgld(read_input(input)));
    write_output(output, result.program.to_text() + "\n");
    std::cerr << "registers: " << result.registers << "\n";
    return 0;
  }
  if (equiv->parsed()) {
    isaw::Lts a = load_lts(lhs_path);
    isaw::Lts b = load_lts(rhs_path);
    if (root_tau) {
      a = isaw::tau_prefix(a);
      b = isaw::tau_prefix(b);
    }
    bool equal = false;
    if (kind == "strong") {
      equal = isaw::strong_bisimilar(a, b);
    } else if (kind == "rbranching") {
      equal = isaw::rooted_branching_bisimilar(a, b);
    } else {
      throw isaw::Error("--kind must be strong or rbranching");
    }
    std::cout << (equal ? "equivalent" : "not equivalent") << "\n";
    return equal ? 0 : 1;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const isaw::StateBoundExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
