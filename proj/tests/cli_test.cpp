#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "isaw/isaw.hpp"

using namespace isaw;

namespace {

std::filesystem::path scratch_dir() {
  static std::filesystem::path dir = [] {
    std::filesystem::path d =
        std::filesystem::temp_directory_path() / "isaw_cli_test";
    std::filesystem::create_directories(d);
    return d;
  }();
  return dir;
}

std::filesystem::path write_file(const std::string& name,
                                 const std::string& content) {
  std::filesystem::path p = scratch_dir() / name;
  std::ofstream(p) << content;
  return p;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

const char* cli_binary() { return std::getenv("ISAW_BIN"); }

int run_cli(const std::string& args, const std::string& env = "") {
  std::string cmd = env + " " + std::string(cli_binary()) + " " + args +
                    " > " + (scratch_dir() / "stdout.txt").string() + " 2> " +
                    (scratch_dir() / "stderr.txt").string();
  int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string cli_stdout() { return read_file(scratch_dir() / "stdout.txt"); }

}  // namespace

TEST_CASE("cli pipelines match the library bit for bit") {
  if (!cli_binary()) SKIP("ISAW_BIN not set");

  SECTION("canon") {
    auto in = write_file("canon.pga", "a.m ; (b.m ; a.m)*");
    REQUIRE(run_cli("canon " + in.string()) == 0);
    REQUIRE(cli_stdout() ==
            canonical_form(parse_pga("a.m ; (b.m ; a.m)*")).to_text() + "\n");
  }

  SECTION("translate") {
    auto in = write_file("prog.pgld", "+f.m ; ##1 ; ##0");
    REQUIRE(run_cli("translate " + in.string()) == 0);
    REQUIRE(cli_stdout() ==
            pgld_to_pga(parse_pgld("+f.m ; ##1 ; ##0")).to_text() + "\n");
  }

  SECTION("thread with a service attachment") {
    auto in = write_file("use.pga", "+br1.get ; ! ; #0");
    REQUIRE(run_cli("thread " + in.string() + " --use br1=br:t") == 0);
    ThreadAutomaton expected = use_thread(
        extract_thread(canonical_form(parse_pga("+br1.get ; ! ; #0"))), "br1",
        boolean_register(RegisterState::True));
    REQUIRE(cli_stdout() == to_linear_spec(expected).to_text());
  }

  SECTION("process emits the termination tau") {
    auto in = write_file("halt.pga", "!");
    auto out = scratch_dir() / "halt.json";
    REQUIRE(run_cli("process " + in.string() + " -o " + out.string()) == 0);
    Lts expected = pextr(extract_thread(canonical_form(parse_pga("!"))));
    REQUIRE(read_file(out) == lts_to_json(expected));
    REQUIRE(expected.transitions.size() == 1);
    REQUIRE(expected.transitions[0].label == ActionLabel::tau());
  }

  SECTION("synth") {
    auto in = write_file("spec.lps", "X = a . X + b ;");
    REQUIRE(run_cli("synth --mode multi " + in.string()) == 0);
    REQUIRE(cli_stdout() == "+[2]ac(a,b) ; ##1 ; ##0\n");
  }

  SECTION("process hides extra labels on request") {
    auto in = write_file("steps.pga", "ac(a) ; ac(b) ; !");
    REQUIRE(run_cli("process " + in.string() + " --abstract a") == 0);
    Lts expected = abstract(
        pextr(extract_thread(canonical_form(parse_pga("ac(a) ; ac(b) ; !")))),
        {ActionLabel::atom("a")});
    REQUIRE(cli_stdout() == lts_to_json(expected));
  }

  SECTION("single-occurrence emits a parseable program") {
    auto spec = write_file("so.lps", "X = a . Y + b ; Y = a . Y + c . X ;");
    auto prog = scratch_dir() / "so.pgld";
    REQUIRE(run_cli("synth --mode binary --tact t " + spec.string() + " -o " +
                    prog.string()) == 0);
    REQUIRE(run_cli("single-occurrence " + prog.string()) == 0);
    PgldProgram expected =
        to_single_occurrence(parse_pgld(read_file(prog))).program;
    REQUIRE(cli_stdout() == expected.to_text() + "\n");
  }
}

TEST_CASE("cli equiv reports equivalence through exit codes") {
  if (!cli_binary()) SKIP("ISAW_BIN not set");
  auto loop = write_file("loop.pga", "(ac(a))*");
  auto unrolled = write_file("unrolled.pga", "ac(a) ; (ac(a) ; ac(a))*");
  auto stop = write_file("stop.pga", "!");
  auto a_json = scratch_dir() / "a.json";
  auto b_aut = scratch_dir() / "b.aut";
  auto c_json = scratch_dir() / "c.json";
  REQUIRE(run_cli("process " + loop.string() + " -o " + a_json.string()) == 0);
  REQUIRE(run_cli("process " + unrolled.string() + " -f aut -o " +
                  b_aut.string()) == 0);
  REQUIRE(run_cli("process " + stop.string() + " -o " + c_json.string()) == 0);

  REQUIRE(run_cli("equiv --kind strong " + a_json.string() + " " +
                  a_json.string()) == 0);
  REQUIRE(run_cli("equiv --kind strong " + a_json.string() + " " +
                  b_aut.string()) == 0);
  REQUIRE(run_cli("equiv --kind strong " + a_json.string() + " " +
                  c_json.string()) == 1);
  REQUIRE(run_cli("equiv --kind rbranching " + a_json.string() + " " +
                  c_json.string()) == 1);
  REQUIRE(run_cli("equiv --kind rbranching --root-tau " + a_json.string() +
                  " " + b_aut.string()) == 0);
}

TEST_CASE("cli maps failures to documented exit codes") {
  if (!cli_binary()) SKIP("ISAW_BIN not set");
  auto bad = write_file("bad.pga", "a.m ;;; !");
  REQUIRE(run_cli("canon " + bad.string()) == 2);
  REQUIRE(run_cli("nonsense") == 2);

  auto loop = write_file("count.pgld", "c.inc ; ##1");
  REQUIRE(run_cli("thread " + loop.string() + " --use c=counter:50",
                  "ISAW_STATE_BOUND=3") == 3);
  REQUIRE(run_cli("thread " + loop.string() + " --use c=counter:5") == 0);
  REQUIRE(run_cli("thread " + loop.string() + " --use c=counter:5 --use c=br:t") ==
          2);
  REQUIRE(run_cli("thread " + loop.string(), "ISAW_STATE_BOUND=0") == 2);
}
