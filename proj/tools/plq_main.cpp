#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "plq/epssub_graph.hpp"
#include "plq/epssub_point.hpp"
#include "plq/error.hpp"
#include "plq/function.hpp"
#include "plq/io.hpp"
#include "plq/oracle.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 2;
constexpr int kCheckMismatch = 3;

// Shortest round-trip formatting with the sign of zero dropped: computed
// endpoints may land on -0, which reads as a different number.
std::string display(double v) {
  return plq::format_double(v == 0.0 ? 0.0 : v);
}

std::string interval_text(const plq::Interval& s) {
  if (s.is_empty()) return "empty";
  return "[" + display(s.lo) + ", " + display(s.hi) + "]";
}

// Scaled endpoint distance; equal infinities count as zero, an infinite
// endpoint against anything else as infinite.
double endpoint_deviation(double a, double b) {
  if (a == b) return 0.0;
  if (!plq::is_finite(a) || !plq::is_finite(b)) return plq::kInf;
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

double interval_deviation(const plq::Interval& a, const plq::Interval& b) {
  if (a.is_empty() != b.is_empty()) return plq::kInf;
  if (a.is_empty()) return 0.0;
  return std::max(endpoint_deviation(a.lo, b.lo),
                  endpoint_deviation(a.hi, b.hi));
}

struct EvalArgs {
  std::string file;
  std::string x;
};

int run_eval(const EvalArgs& args) {
  const plq::PlqFunction f = plq::read_plq_file(args.file);
  std::cout << plq::format_double(f.eval(plq::parse_double(args.x))) << "\n";
  return kOk;
}

struct EsubArgs {
  std::string file;
  std::string xbar;
  std::string eps;
  bool oracle = false;
  bool check = false;
};

int run_esub(const EsubArgs& args) {
  const plq::PlqFunction f = plq::read_plq_file(args.file);
  const double xbar = plq::parse_double(args.xbar);
  const double eps = plq::parse_double(args.eps);
  if (args.check) {
    const plq::Interval fast = plq::eps_subdifferential(f, xbar, eps);
    const plq::Interval slow = plq::oracle::eps_sub_reference(f, xbar, eps);
    const double dev = interval_deviation(fast, slow);
    std::cout << interval_text(fast) << "\n";
    std::cout << "max deviation: " << plq::format_double(dev) << "\n";
    return dev > 1e-6 ? kCheckMismatch : kOk;
  }
  const plq::Interval s = args.oracle
                              ? plq::oracle::eps_sub_reference(f, xbar, eps)
                              : plq::eps_subdifferential(f, xbar, eps);
  std::cout << interval_text(s) << "\n";
  return kOk;
}

struct GraphArgs {
  std::string file;
  std::string eps;
  std::string table_path;
  std::vector<std::string> sample;  // m, path
  std::vector<double> xrange;       // lo, hi
  std::string script_path;
};

// serialize_lower_table output with every data line tagged by side.
void append_side_rows(std::string& out, const std::string& side,
                      const plq::LowerBoundTable& table) {
  const std::string csv = plq::serialize_lower_table(table);
  std::size_t pos = csv.find('\n') + 1;  // skip the header
  while (pos < csv.size()) {
    const std::size_t eol = csv.find('\n', pos);
    out += side;
    out += ',';
    out.append(csv, pos, eol - pos + 1);
    pos = eol + 1;
  }
}

int run_graph(const GraphArgs& args) {
  const plq::PlqFunction f = plq::read_plq_file(args.file);
  const double eps = plq::parse_double(args.eps);
  if (args.table_path.empty() && args.sample.empty()) {
    std::cerr << "error: nothing to do, pass --table and/or --sample\n";
    return kInputError;
  }
  if (!args.script_path.empty() && args.sample.empty()) {
    std::cerr << "error: --script needs --sample\n";
    return kInputError;
  }
  const plq::EpsSubGraph graph = plq::build_graph(f, eps);

  if (!args.table_path.empty()) {
    std::string csv = "side,x,t,it,ib,v\n";
    append_side_rows(csv, "lower", graph.lower());
    append_side_rows(csv, "upper", graph.upper_source());
    plq::write_text_file(args.table_path, csv);
  }

  if (!args.sample.empty()) {
    std::size_t m = 0;
    try {
      std::size_t used = 0;
      const unsigned long long raw = std::stoull(args.sample[0], &used);
      if (used != args.sample[0].size()) throw std::invalid_argument("tail");
      m = static_cast<std::size_t>(raw);
    } catch (const std::exception&) {
      std::cerr << "error: --sample count '" << args.sample[0]
                << "' is not a nonnegative integer\n";
      return kInputError;
    }
    if (m == 0) {
      std::cerr << "error: --sample count must be at least 1\n";
      return kInputError;
    }
    double win_lo = -10.0;
    double win_hi = 10.0;
    if (!args.xrange.empty()) {
      win_lo = args.xrange[0];
      win_hi = args.xrange[1];
    }
    const plq::Domain d = f.domain();
    const double lo = std::max(win_lo, d.lo);
    const double hi = std::min(win_hi, d.hi);
    if (!(lo <= hi)) {
      std::cerr << "error: sampling window misses the domain\n";
      return kInputError;
    }
    std::vector<double> xs(m);
    for (std::size_t k = 0; k < m; ++k) {
      xs[k] = m == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) /
                                     static_cast<double>(m - 1);
    }
    // Merged grid pass on each half; the upper half evaluates the
    // reflection on the negated (hence reversed) grid.
    const auto lower_vals = graph.lower().eval_grid(xs);
    std::vector<double> neg(xs.rbegin(), xs.rend());
    for (double& v : neg) v = -v;
    const auto upper_raw = graph.upper_source().eval_grid(neg);
    std::string csv = "x,lower,upper\n";
    for (std::size_t k = 0; k < m; ++k) {
      const auto& lov = lower_vals[k];
      const auto& hiv = upper_raw[m - 1 - k];
      csv += display(xs[k]);
      csv += ',';
      csv += lov ? display(*lov) : "nan";
      csv += ',';
      csv += hiv ? display(*hiv == 0.0 ? 0.0 : -*hiv) : "nan";
      csv += '\n';
    }
    plq::write_text_file(args.sample[1], csv);

    if (!args.script_path.empty()) {
      std::string gp =
          "# band between the lower and upper curves of the set-valued map\n"
          "set datafile separator ','\n"
          "set xlabel 'x'\n"
          "set ylabel 's'\n"
          "set style fill transparent solid 0.25 noborder\n"
          "plot '" +
          args.sample[1] +
          "' skip 1 using 1:2:3 with filledcurves lc rgb '#5577cc' notitle, \\\n"
          "     '' skip 1 using 1:2 with lines lw 2 lc rgb '#224488' "
          "title 'lower', \\\n"
          "     '' skip 1 using 1:3 with lines lw 2 lc rgb '#884422' "
          "title 'upper'\n";
      plq::write_text_file(args.script_path, gp);
    }
  }
  return kOk;
}

struct GenArgs {
  std::size_t n = 1;
  std::uint64_t seed = 0;
  std::string out;
};

int run_gen(const GenArgs& args) {
  plq::write_plq_file(args.out, plq::generate_convex_plq(args.n, args.seed));
  return kOk;
}

struct BenchArgs {
  std::vector<std::size_t> sizes = {4000, 40000};
  std::size_t queries = 100;
  std::uint64_t seed = 1;
};

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

int run_bench(const BenchArgs& args) {
  using clock = std::chrono::steady_clock;
  const auto seconds = [](clock::duration d) {
    return std::chrono::duration<double>(d).count();
  };
  std::printf("%10s %12s %12s %16s %16s %10s\n", "n", "build_ms", "build_ops",
              "fast_us/query", "oracle_us/query", "ratio");
  double sink = 0.0;
  std::vector<double> first_last_fast;
  std::vector<double> first_last_oracle;
  for (const std::size_t n : args.sizes) {
    const plq::PlqFunction f = plq::generate_convex_plq(n, args.seed);
    const double eps = 0.5;

    const auto t0 = clock::now();
    const plq::LowerBoundTable table = plq::build_lower_table(f, eps);
    const double build_ms = seconds(clock::now() - t0) * 1e3;

    std::mt19937_64 rng(args.seed ^ (0x9e3779b97f4a7c15ull * n));
    const double qlo = f.breakpoint(0);
    const double qhi = f.breakpoint(f.last_index() - 1);
    std::vector<double> xbars(args.queries);
    for (double& x : xbars) {
      x = qlo + (qhi - qlo) *
                    (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    }

    std::vector<double> fast_times;
    std::vector<double> oracle_times;
    fast_times.reserve(xbars.size());
    oracle_times.reserve(xbars.size());
    for (const double x : xbars) {
      constexpr int kFastReps = 64;
      const auto f0 = clock::now();
      for (int r = 0; r < kFastReps; ++r) {
        const plq::Interval s = plq::eps_subdifferential(f, x, eps);
        sink += plq::is_finite(s.lo) ? s.lo : 1.0;
      }
      fast_times.push_back(seconds(clock::now() - f0) * 1e6 / kFastReps);

      constexpr int kOracleReps = 4;
      const auto o0 = clock::now();
      for (int r = 0; r < kOracleReps; ++r) {
        const plq::Interval s = plq::oracle::eps_sub_reference(f, x, eps);
        sink += plq::is_finite(s.hi) ? s.hi : 1.0;
      }
      oracle_times.push_back(seconds(clock::now() - o0) * 1e6 / kOracleReps);
    }
    const double fast_med = median(fast_times);
    const double oracle_med = median(oracle_times);
    first_last_fast.push_back(fast_med);
    first_last_oracle.push_back(oracle_med);
    std::printf("%10zu %12.3f %12zu %16.3f %16.3f %10.1f\n", n, build_ms,
                table.stats().loop_iterations, fast_med, oracle_med,
                fast_med > 0.0 ? oracle_med / fast_med : 0.0);
  }
  if (first_last_fast.size() >= 2 && args.queries > 0) {
    const double fg = first_last_fast.back() / first_last_fast.front();
    const double og = first_last_oracle.back() / first_last_oracle.front();
    std::printf("growth last/first: fast %.2fx, oracle %.2fx\n", fg, og);
  }
  std::printf("# checksum %s\n", plq::format_double(sink).c_str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"convex piecewise linear-quadratic toolkit"};
  app.require_subcommand(1);

  EvalArgs eval_args;
  CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate f(x)");
  eval_cmd->add_option("file", eval_args.file, "PLQ input file")->required();
  eval_cmd->add_option("x", eval_args.x, "evaluation point")->required();

  EsubArgs esub_args;
  CLI::App* esub_cmd = app.add_subcommand(
      "esub", "eps-subdifferential at a point, printed as [lo, hi]");
  esub_cmd->add_option("file", esub_args.file, "PLQ input file")->required();
  esub_cmd->add_option("xbar", esub_args.xbar, "query point")->required();
  esub_cmd->add_option("eps", esub_args.eps, "eps > 0")->required();
  esub_cmd->add_flag("--oracle", esub_args.oracle,
                     "use the linear-time reference scan");
  esub_cmd->add_flag("--check", esub_args.check,
                     "run both paths, report the deviation, exit 3 if the "
                     "endpoints differ by more than 1e-6");

  GraphArgs graph_args;
  CLI::App* graph_cmd = app.add_subcommand(
      "graph", "build the full set-valued graph and export CSV");
  graph_cmd->add_option("file", graph_args.file, "PLQ input file")->required();
  graph_cmd->add_option("eps", graph_args.eps, "eps > 0")->required();
  graph_cmd->add_option("--table", graph_args.table_path,
                        "write both half-graph tables (side,x,t,it,ib,v)");
  graph_cmd->add_option("--sample", graph_args.sample,
                        "m out.csv: sample m points (x,lower,upper)")
      ->expected(2);
  graph_cmd->add_option("--xrange", graph_args.xrange,
                        "lo hi: sampling window for unbounded domains "
                        "(default -10 10)")
      ->expected(2);
  graph_cmd->add_option("--script", graph_args.script_path,
                        "write a gnuplot script plotting the sampled band");

  GenArgs gen_args;
  CLI::App* gen_cmd =
      app.add_subcommand("gen", "generate a random valid instance");
  gen_cmd->add_option("n", gen_args.n, "number of pieces")
      ->required()
      ->check(CLI::PositiveNumber);
  gen_cmd->add_option("seed", gen_args.seed, "RNG seed")->required();
  gen_cmd->add_option("out", gen_args.out, "output PLQ file")->required();

  BenchArgs bench_args;
  CLI::App* bench_cmd = app.add_subcommand(
      "bench", "time pointwise queries, linear oracle vs logarithmic path");
  bench_cmd->add_option("--sizes", bench_args.sizes, "instance sizes")
      ->delimiter(',');
  bench_cmd->add_option("--queries", bench_args.queries,
                        "query points per size");
  bench_cmd->add_option("--seed", bench_args.seed, "RNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*eval_cmd) return run_eval(eval_args);
    if (*esub_cmd) return run_esub(esub_args);
    if (*graph_cmd) return run_graph(graph_args);
    if (*gen_cmd) return run_gen(gen_args);
    if (*bench_cmd) return run_bench(bench_args);
  } catch (const plq::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
