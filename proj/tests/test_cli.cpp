#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "plq/epssub_graph.hpp"
#include "plq/io.hpp"
#include "test_helpers.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(PLQ_CLI_PATH) + " " + args +
                          " 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  for (std::size_t got; (got = std::fread(buf, 1, sizeof buf, pipe)) > 0;) {
    out.append(buf, got);
  }
  const int status = ::pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

// Scratch directory shared by the cases in this file, removed at exit.
struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() /
          ("plq-cli-test-" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  std::string file(const std::string& name) const {
    return (dir / name).string();
  }
};

Scratch& scratch() {
  static Scratch s;
  return s;
}

std::string abs_file() {
  const std::string path = scratch().file("abs.plq");
  plq::write_plq_file(path, plqtest::abs_fn());
  return path;
}

}  // namespace

TEST_CASE("eval command prints the value or inf") {
  const std::string abs_path = abs_file();
  RunResult r = run_cli("eval " + abs_path + " 0.5");
  CHECK(r.code == 0);
  CHECK(r.out == "0.5\n");

  const std::string needle_path = scratch().file("needle.plq");
  plq::write_plq_file(needle_path, plqtest::needle_fn(1.0, 2.0));
  r = run_cli("eval " + needle_path + " 3");
  CHECK(r.code == 0);
  CHECK(r.out == "inf\n");

  const std::string bad = scratch().file("bad.plq");
  plq::write_text_file(bad, "0 0 -1\ninf 0 1 0\n");
  r = run_cli("eval " + bad + " 0");
  CHECK(r.code == 2);

  r = run_cli("eval " + scratch().file("missing.plq") + " 0");
  CHECK(r.code == 2);

  r = run_cli("eval");  // missing required positionals
  CHECK(r.code == 2);
}

TEST_CASE("esub command formats intervals and honors --check") {
  const std::string abs_path = abs_file();
  RunResult r = run_cli("esub " + abs_path + " 0.5 0.5");
  CHECK(r.code == 0);
  CHECK(r.out == "[0, 1]\n");

  const std::string sq_path = scratch().file("sqhalf.plq");
  plq::write_plq_file(sq_path, plqtest::square_on_halfline());
  r = run_cli("esub " + sq_path + " 0 1");
  CHECK(r.code == 0);
  CHECK(r.out == "[-inf, 2]\n");
  r = run_cli("esub " + sq_path + " -4 1");
  CHECK(r.code == 0);
  CHECK(r.out == "empty\n");

  // eps must be positive
  r = run_cli("esub " + abs_path + " 0.5 0");
  CHECK(r.code == 2);

  // the oracle agrees on this instance, both in output and under --check
  const RunResult fast = run_cli("esub " + abs_path + " 0.5 0.5");
  const RunResult slow = run_cli("esub " + abs_path + " 0.5 0.5 --oracle");
  CHECK(fast.out == slow.out);
  r = run_cli("esub " + abs_path + " 0.5 0.5 --check");
  CHECK(r.code == 0);
  CHECK(r.out.find("max deviation:") != std::string::npos);
}

TEST_CASE("check flag stays quiet across a generated corpus") {
  std::mt19937_64 rng(123);
  int checked = 0;
  for (const plq::PlqFunction& f : plqtest::make_corpus(12, 77, 20)) {
    const std::string path = scratch().file("corpus.plq");
    plq::write_plq_file(path, f);
    for (const double xbar : plqtest::query_points(f, 3, rng)) {
      const RunResult r =
          run_cli("esub " + path + " " + plq::format_double(xbar) + " 0.5 "
                  "--check");
      CHECK(r.code == 0);
      ++checked;
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("graph command writes table, samples and script") {
  const std::string abs_path = abs_file();
  const std::string table_path = scratch().file("table.csv");
  const std::string sample_path = scratch().file("sample.csv");
  const std::string script_path = scratch().file("band.gp");

  RunResult r = run_cli("graph " + abs_path + " 0.5 --table " + table_path +
                        " --sample 5 " + sample_path + " --xrange -1 1 " +
                        "--script " + script_path);
  CHECK(r.code == 0);

  // table round-trips to the in-memory rows field for field
  const std::string table_csv = plq::read_text_file(table_path);
  REQUIRE(table_csv.rfind("side,x,t,it,ib,v\n", 0) == 0);
  std::string lower_csv = "x,t,it,ib,v\n";
  std::string upper_csv = "x,t,it,ib,v\n";
  std::size_t pos = table_csv.find('\n') + 1;
  while (pos < table_csv.size()) {
    std::size_t eol = table_csv.find('\n', pos);
    const std::string line = table_csv.substr(pos, eol - pos);
    pos = eol + 1;
    if (line.rfind("lower,", 0) == 0) {
      lower_csv += line.substr(6) + "\n";
    } else {
      REQUIRE(line.rfind("upper,", 0) == 0);
      upper_csv += line.substr(6) + "\n";
    }
  }
  const plq::PlqFunction f = plqtest::abs_fn();
  const auto want_lower = plq::build_lower_table(f, 0.5);
  const auto want_upper = plq::build_lower_table(f.reflect(), 0.5);
  CHECK(plq::serialize_lower_table(want_lower) == lower_csv);
  CHECK(plq::serialize_lower_table(want_upper) == upper_csv);

  // sampled band over [-1, 1]: 5 evenly spaced rows, exact at 0.5
  const std::string sample_csv = plq::read_text_file(sample_path);
  CHECK(sample_csv ==
        "x,lower,upper\n"
        "-1,-1,-0.5\n"
        "-0.5,-1,0\n"
        "0,-1,1\n"
        "0.5,0,1\n"
        "1,0.5,1\n");

  const std::string script = plq::read_text_file(script_path);
  CHECK(script.find(sample_path) != std::string::npos);
  CHECK(script.find("filledcurves") != std::string::npos);

  // script without sample is a usage error, as is a window off the domain
  CHECK(run_cli("graph " + abs_path + " 0.5 --script " + script_path).code ==
        2);
  const std::string sq_path = scratch().file("sqh.plq");
  plq::write_plq_file(sq_path, plqtest::square_on_halfline());
  CHECK(run_cli("graph " + sq_path + " 1 --sample 3 " + sample_path +
                " --xrange -5 -2").code == 2);
  CHECK(run_cli("graph " + abs_path + " 0 --table " + table_path).code == 2);
  CHECK(run_cli("graph " + abs_path + " 0.5").code == 2);
}

TEST_CASE("gen command is deterministic and produces valid input") {
  const std::string out1 = scratch().file("gen1.plq");
  const std::string out2 = scratch().file("gen2.plq");
  CHECK(run_cli("gen 12 7 " + out1).code == 0);
  CHECK(run_cli("gen 12 7 " + out2).code == 0);
  CHECK(plq::read_text_file(out1) == plq::read_text_file(out2));

  const RunResult r = run_cli("esub " + out1 + " 0.25 0.5 --check");
  CHECK(r.code == 0);

  CHECK(run_cli("gen 0 7 " + out1).code == 2);
}

TEST_CASE("bench command reports a table even at toy sizes") {
  const RunResult r = run_cli("bench --sizes 10,10 --queries 2 --seed 1");
  CHECK(r.code == 0);
  CHECK(r.out.find("build_ops") != std::string::npos);
  CHECK(r.out.find("growth last/first:") != std::string::npos);
}
