// pfexpm: benchmark driver and root-table generator.
//
//   pfexpm bench  --family lap1d --d 100 --n 8,16,32 --mode full --out run.csv
//   pfexpm scalar --n 8,16,32 --grid -100:0:10000 --out scalar.csv
//   pfexpm tables --n 2,4,8 --dir tables/
//
// Exit codes: 0 ok, 2 bad arguments, 3 invariant violation, 4 I/O error.

#include <charconv>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pfexpm/bench.hpp"
#include "pfexpm/rootgen.hpp"
#include "pfexpm/scalar.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitArgs = 2;
constexpr int kExitInvariant = 3;
constexpr int kExitIo = 4;

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw pfexpm::IoError("failed writing to stdout");
  } else {
    pfexpm::write_text(path, text);
  }
}

struct BenchArgs {
  std::string family;
  int d = 0;
  std::string range = "-1:0";
  std::vector<int> n;
  std::string mode = "full";
  int trials = 0;
  std::string threads = "auto";
  std::uint64_t seed = 0;
  int digits = 16;
  std::string shift = "none";
  std::string out = "-";
  std::string plot;
  std::string precision = "double";
  int repeats = 3;
};

int parse_threads(const std::string& s) {
  if (s == "auto") return 0;
  int t = 0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), t);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size() || t < 1) {
    throw pfexpm::BadSpec("--threads must be a positive integer or 'auto'");
  }
  return t;
}

int run_bench(const BenchArgs& a) {
  pfexpm::MatrixSpec spec;
  spec.family = pfexpm::parse_family(a.family);
  spec.d = a.d;
  spec.seed = a.seed;
  const auto colon = a.range.find(':');
  if (colon == std::string::npos) throw pfexpm::BadSpec("--range must be lo:hi");
  const auto g = pfexpm::parse_grid(a.range + ":2");
  spec.lo = g.lo;
  spec.hi = g.hi;
  spec.validate();

  pfexpm::MatrixSuiteOptions opts;
  opts.mode = pfexpm::parse_mode(a.mode);
  opts.trials = a.trials > 0 ? a.trials : (spec.family == pfexpm::Family::RandomSpectrum ? 10 : 1);
  opts.threads = parse_threads(a.threads);
  opts.shift = pfexpm::parse_shift(a.shift);
  opts.repeats = a.repeats;
  if (a.digits < 1) throw pfexpm::BadSpec("--digits must be >= 1");
  for (const int n : a.n) {
    pfexpm::check_order(n);
    if (!pfexpm::DigitModel{a.digits}.admits(n)) {
      std::cerr << "warning: n=" << n << " violates the digit condition for D=" << a.digits << "\n";
    }
  }

  const std::vector<pfexpm::MatrixSpec> specs{spec};
  std::vector<pfexpm::BenchRecord> records;
  if (a.precision == "double") {
    records = pfexpm::run_matrix_suite<double>(specs, a.n, opts);
  } else if (a.precision == "extended") {
    records = pfexpm::run_matrix_suite<long double>(specs, a.n, opts);
  } else {
    throw pfexpm::BadSpec("--precision must be double or extended");
  }
  for (const auto& r : records) {
    if (!r.bound) std::cerr << "note: no a priori bound for n=" << r.n << ", trial " << r.trial << "\n";
  }
  write_output(a.out, pfexpm::format_csv(records));
  if (!a.plot.empty()) pfexpm::emit_plotdata(records, a.plot);
  return kExitOk;
}

int run_scalar(const std::vector<int>& n_list, const std::string& grid, int digits, const std::string& out) {
  if (digits < 1) throw pfexpm::BadSpec("--digits must be >= 1");
  const auto records = pfexpm::run_scalar_suite(n_list, pfexpm::parse_grid(grid), digits);
  write_output(out, pfexpm::format_scalar_csv(records));
  return kExitOk;
}

int run_tables(const std::vector<int>& n_list, const std::string& dir) {
  namespace fs = std::filesystem;
  for (const int n : n_list) pfexpm::check_order(n);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw pfexpm::IoError("cannot create '" + dir + "': " + ec.message());
  int status = kExitOk;
  for (const int n : n_list) {
    char name[32];
    std::snprintf(name, sizeof name, "exp_n%02d.table", n);
    const fs::path path = fs::path(dir) / name;
    const auto fresh = pfexpm::build_table(n);
    if (fs::exists(path)) {
      const auto stored = pfexpm::load_table(path);
      if (stored == fresh) {
        std::cout << "n=" << n << " validated " << path.string() << " residual=" << stored.residual() << "\n";
      } else {
        std::cout << "n=" << n << " MISMATCH " << path.string() << "\n";
        status = kExitInvariant;
      }
    } else {
      pfexpm::save_table(fresh, path);
      std::cout << "n=" << n << " generated " << path.string() << " residual=" << fresh.residual() << "\n";
    }
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matrix exponential by partial fractions of 1/exp_n(-z)"};
  app.require_subcommand(1);

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "run matrix experiments and write CSV");
  b->add_option("--family", bench.family, "lap1d | lap2d | random")->required();
  b->add_option("--d", bench.d, "dimension")->required();
  b->add_option("--range", bench.range, "spectrum lo:hi for the random family")->capture_default_str();
  b->add_option("--n", bench.n, "orders, comma separated")->required()->delimiter(',');
  b->add_option("--mode", bench.mode, "full | action")->capture_default_str();
  b->add_option("--trials", bench.trials, "trials per matrix (default 10 for random, 1 otherwise)");
  b->add_option("--threads", bench.threads, "worker threads or auto")->capture_default_str();
  b->add_option("--seed", bench.seed, "base seed")->capture_default_str();
  b->add_option("--digits", bench.digits, "decimal digits for the digit condition")->capture_default_str();
  b->add_option("--shift", bench.shift, "none | auto | c=<real>")->capture_default_str();
  b->add_option("--out", bench.out, "CSV path, - for stdout")->capture_default_str();
  b->add_option("--plot", bench.plot, "also write gnuplot data here");
  b->add_option("--precision", bench.precision, "double | extended")->capture_default_str();
  b->add_option("--repeats", bench.repeats, "timed repetitions")->capture_default_str()->check(CLI::PositiveNumber);

  std::vector<int> scalar_n;
  std::string grid = "-100:0:10000";
  int scalar_digits = 16;
  std::string scalar_out = "-";
  auto* s = app.add_subcommand("scalar", "scalar error components over a grid");
  s->add_option("--n", scalar_n, "orders, comma separated")->required()->delimiter(',');
  s->add_option("--grid", grid, "lo:hi:count")->capture_default_str();
  s->add_option("--digits", scalar_digits, "decimal digits D for M2")->capture_default_str();
  s->add_option("--out", scalar_out, "CSV path, - for stdout")->capture_default_str();

  std::vector<int> table_n;
  std::string table_dir;
  auto* t = app.add_subcommand("tables", "generate or validate root tables");
  t->add_option("--n", table_n, "orders, comma separated")->required()->delimiter(',');
  t->add_option("--dir", table_dir, "table directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitArgs;
  }

  try {
    if (*b) return run_bench(bench);
    if (*s) return run_scalar(scalar_n, grid, scalar_digits, scalar_out);
    return run_tables(table_n, table_dir);
  } catch (const pfexpm::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const pfexpm::BadSpec& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitArgs;
  } catch (const pfexpm::OrderOutOfRange& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitArgs;
  } catch (const pfexpm::ConditionViolated& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitArgs;
  } catch (const pfexpm::Overflow& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitArgs;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvariant;
  }
}
