#include "pfexpm/bench.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <tuple>

#include <Eigen/QR>

#include "pfexpm/rootgen.hpp"
#include "pfexpm/scalar.hpp"

namespace pfexpm {

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt17(double x) {
  std::array<char, 48> buf{};
  auto r = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::scientific, 16);
  return std::string(buf.data(), r.ptr);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double ms(Seconds s) { return s.count() * 1e3; }

// Runs f once untimed if warmup is set, then `repeats` timed runs (ms).
template <class F>
std::vector<double> timed(const MatrixSuiteOptions& opts, F&& f) {
  if (opts.warmup) f();
  std::vector<double> out;
  for (int r = 0; r < std::max(1, opts.repeats); ++r) {
    const auto t0 = Clock::now();
    f();
    out.push_back(ms(Clock::now() - t0));
  }
  return out;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

template <class T>
T parse_number(std::string_view s, std::string_view what) {
  T v{};
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
    throw ParseError("bad " + std::string(what) + " '" + std::string(s) + "'");
  }
  return v;
}

// Gaussian matrix (column-major draw order) followed by the eigenvalues.
std::vector<double> draw_random(const MatrixSpec& spec, Eigen::MatrixXd& g) {
  const int d = spec.d;
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif(spec.lo, spec.hi);
  g.resize(d, d);
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) g(i, j) = gauss(rng);
  }
  std::vector<double> lambda(static_cast<std::size_t>(d));
  for (auto& l : lambda) l = unif(rng);
  lambda[0] = spec.lo;
  if (d > 1) lambda[1] = spec.hi;
  return lambda;
}

}  // namespace

std::vector<double> random_spectrum(const MatrixSpec& spec) {
  spec.validate();
  if (spec.family != Family::RandomSpectrum) throw BadSpec("random_spectrum needs the random family");
  Eigen::MatrixXd g;
  auto lambda = draw_random(spec, g);
  std::sort(lambda.begin(), lambda.end());
  return lambda;
}

std::string_view to_string(Family family) {
  switch (family) {
    case Family::Lap1D:
      return "lap1d";
    case Family::Lap2D:
      return "lap2d";
    case Family::RandomSpectrum:
      return "random";
  }
  return "?";
}

Family parse_family(std::string_view text) {
  if (text == "lap1d") return Family::Lap1D;
  if (text == "lap2d") return Family::Lap2D;
  if (text == "random") return Family::RandomSpectrum;
  throw BadSpec("unknown matrix family '" + std::string(text) + "'");
}

void MatrixSpec::validate() const {
  if (d < 1) throw BadSpec("dimension must be >= 1");
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) throw BadSpec("spectrum range needs lo <= hi");
  if (family == Family::Lap2D) {
    const int m = static_cast<int>(std::lround(std::sqrt(static_cast<double>(d))));
    if (m * m != d) throw BadSpec("lap2d needs d to be a perfect square, got " + std::to_string(d));
  }
}

template <class Real>
HermitianMatrix<Real> gen_matrix(const MatrixSpec& spec) {
  spec.validate();
  const int d = spec.d;
  RMatrix<Real> a = RMatrix<Real>::Zero(d, d);
  switch (spec.family) {
    case Family::Lap1D:
      for (int i = 0; i < d; ++i) {
        a(i, i) = -2;
        if (i + 1 < d) a(i, i + 1) = a(i + 1, i) = 1;
      }
      break;
    case Family::Lap2D: {
      const int m = static_cast<int>(std::lround(std::sqrt(static_cast<double>(d))));
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
          const int p = i * m + j;
          a(p, p) = -4;
          if (j + 1 < m) a(p, p + 1) = a(p + 1, p) = 1;
          if (i + 1 < m) a(p, p + m) = a(p + m, p) = 1;
        }
      }
      break;
    }
    case Family::RandomSpectrum: {
      Eigen::MatrixXd g64;
      const auto lambda64 = draw_random(spec, g64);
      const RMatrix<Real> g = g64.cast<Real>();
      RVector<Real> lambda(d);
      for (int i = 0; i < d; ++i) lambda(i) = static_cast<Real>(lambda64[static_cast<std::size_t>(i)]);
      const RMatrix<Real> q = Eigen::HouseholderQR<RMatrix<Real>>(g).householderQ();
      const RMatrix<Real> w = q * lambda.asDiagonal();
      a = w * q.transpose();
      a = (a + a.transpose()).eval() / Real(2);
      break;
    }
  }
  return HermitianMatrix<Real>(a);
}

template <class Real>
CVector<Real> random_unit_vector(int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x5bd1e995u);
  std::normal_distribution<double> gauss;
  RVector<Real> v(d);
  for (int i = 0; i < d; ++i) v(i) = static_cast<Real>(gauss(rng));
  v /= v.norm();
  return v.template cast<std::complex<Real>>();
}

std::vector<double> Grid::points() const {
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(std::max(count, 0)));
  if (count == 1) return {lo};
  for (int i = 0; i < count; ++i) xs.push_back(lo + (hi - lo) * i / (count - 1));
  return xs;
}

Grid parse_grid(std::string_view text) {
  const auto f = split(text, ':');
  if (f.size() != 3) throw BadSpec("grid must be lo:hi:count, got '" + std::string(text) + "'");
  Grid g;
  try {
    g.lo = parse_number<double>(f[0], "grid bound");
    g.hi = parse_number<double>(f[1], "grid bound");
    g.count = parse_number<int>(f[2], "grid count");
  } catch (const ParseError& e) {
    throw BadSpec(e.what());
  }
  if (!(g.lo <= g.hi) || g.count < 1) throw BadSpec("grid needs lo <= hi and count >= 1");
  return g;
}

std::vector<ScalarRecord> run_scalar_suite(std::span<const int> n_list, const Grid& grid, int digits) {
  const auto xs = grid.points();
  std::vector<ScalarRecord> out;
  for (const int n : n_list) {
    check_order(n);
    const PartialFraction<double> pf(n);
    ScalarRecord r;
    r.n = n;
    r.m1 = bound_m1(n);
    try {
      r.m2 = bound_m2(pf, digits);
    } catch (const ConditionViolated&) {
      r.m2.reset();
    }
    for (const double x : xs) {
      const double ex = std::exp(x);
      const double p = eval_pf_real(pf, x);
      const double q = eval_reciprocal(n, x);
      r.max_e1 = std::max(r.max_e1, std::abs(ex - p));
      r.max_e2 = std::max(r.max_e2, std::abs(ex - q));
      r.max_e3 = std::max(r.max_e3, std::abs(q - p));
    }
    out.push_back(r);
  }
  return out;
}

template <class Real>
std::vector<BenchRecord> run_matrix_suite(std::span<const MatrixSpec> specs, std::span<const int> n_list,
                                          const MatrixSuiteOptions& opts) {
  if (opts.trials < 1) throw BadSpec("trials must be >= 1");
  for (const int n : n_list) check_order(n);
  std::vector<BenchRecord> out;
  for (const auto& spec : specs) {
    spec.validate();
    for (int t = 0; t < opts.trials; ++t) {
      MatrixSpec s = spec;
      s.seed = spec.seed + static_cast<std::uint64_t>(t);
      HermitianMatrix<Real> A = gen_matrix<Real>(s);
      CVector<Real> v;
      if (opts.mode == Mode::Action) v = random_unit_vector<Real>(s.d, s.seed);

      HermitianEigen<Real> eig;
      CMatrix<Real> E;
      CVector<Real> Ev;
      const double t_seq = median(timed(opts, [&] {
        eig = eig_hermitian(A);
        if (opts.mode == Mode::Full) {
          E = exp_oracle(eig);
        } else {
          Ev = exp_oracle_action(eig, v);
        }
      }));
      A.set_bounds(eig.bounds());
      const Real alpha = eig.values.maxCoeff();
      // A zero eigenvalue may come back as a tiny positive one.
      const Real slack = 64 * std::numeric_limits<double>::epsilon() * std::max<Real>(1, eig.values.cwiseAbs().maxCoeff());
      const bool relative = alpha > slack;
      const Real scale = relative ? std::exp(alpha) : Real(1);

      for (const int n : n_list) {
        ExpOptions eo;
        eo.n = n;
        eo.mode = opts.mode;
        eo.shift = opts.shift;
        eo.threads = opts.threads;
        eo.parallel = opts.threads != 1;
        ExpResult<Real> res;
        std::vector<double> para, total;
        const int runs = std::max(1, opts.repeats) + (opts.warmup ? 1 : 0);
        for (int r = 0; r < runs; ++r) {
          res = opts.mode == Mode::Full ? matexp_full(A, eo) : matexp_action(A, v, eo);
          if (opts.warmup && r == 0) continue;
          para.push_back(ms(res.t_para));
          total.push_back(ms(res.t_total));
        }

        Real err;
        if (opts.mode == Mode::Full) {
          err = hermitian_norm2<Real>(res.matrix - E);
        } else {
          err = (res.vector - Ev).norm();
        }
        BenchRecord rec;
        rec.family = s.family;
        rec.d = s.d;
        rec.n = n;
        rec.mode = opts.mode;
        rec.shift = opts.shift;
        rec.seed = s.seed;
        rec.trial = t;
        rec.error = static_cast<double>(err / scale);
        rec.error_kind = relative ? ErrorKind::Relative : ErrorKind::Absolute;
        rec.t_seq_ms = t_seq;
        rec.t_para_ms = median(para);
        rec.t_total_ms = median(total);
        rec.bound = res.error_bound;
        for (const auto& pt : res.per_term_times) rec.per_term_ms.push_back(ms(pt));
        out.push_back(std::move(rec));
      }
    }
  }
  return out;
}

std::string format_csv(std::span<const BenchRecord> records) {
  std::string out(kBenchCsvHeader);
  out += '\n';
  for (const auto& r : records) {
    out += std::string(to_string(r.family)) + ',' + std::to_string(r.d) + ',' + std::to_string(r.n) + ',' +
           std::string(to_string(r.mode)) + ',' + to_string(r.shift) + ',' + std::to_string(r.seed) + ',' +
           std::to_string(r.trial) + ',' + fmt17(r.error) + ',' +
           (r.error_kind == ErrorKind::Absolute ? "abs" : "rel") + ',' + fmt17(r.t_seq_ms) + ',' +
           fmt17(r.t_para_ms) + ',' + fmt17(r.t_total_ms) + ',' + (r.bound ? fmt17(*r.bound) : "") + '\n';
  }
  return out;
}

std::vector<BenchRecord> parse_csv(std::string_view text) {
  auto lines = split(text, '\n');
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() || lines[0] != kBenchCsvHeader) throw ParseError("missing or unexpected CSV header");
  std::vector<BenchRecord> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split(lines[i], ',');
    if (f.size() != 13) throw ParseError("line " + std::to_string(i + 1) + ": expected 13 fields");
    BenchRecord r;
    try {
      r.family = parse_family(f[0]);
      r.mode = parse_mode(f[3]);
      r.shift = parse_shift(f[4]);
    } catch (const BadSpec& e) {
      throw ParseError("line " + std::to_string(i + 1) + ": " + e.what());
    }
    r.d = parse_number<int>(f[1], "d");
    r.n = parse_number<int>(f[2], "n");
    r.seed = parse_number<std::uint64_t>(f[5], "seed");
    r.trial = parse_number<int>(f[6], "trial");
    r.error = parse_number<double>(f[7], "error");
    if (f[8] == "abs") {
      r.error_kind = ErrorKind::Absolute;
    } else if (f[8] == "rel") {
      r.error_kind = ErrorKind::Relative;
    } else {
      throw ParseError("line " + std::to_string(i + 1) + ": bad error_kind");
    }
    r.t_seq_ms = parse_number<double>(f[9], "t_seq_ms");
    r.t_para_ms = parse_number<double>(f[10], "t_para_ms");
    r.t_total_ms = parse_number<double>(f[11], "t_total_ms");
    if (!f[12].empty()) r.bound = parse_number<double>(f[12], "bound");
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_scalar_csv(std::span<const ScalarRecord> records) {
  std::string out(kScalarCsvHeader);
  out += '\n';
  for (const auto& r : records) {
    out += std::to_string(r.n) + ',' + fmt17(r.max_e1) + ',' + fmt17(r.max_e2) + ',' + fmt17(r.max_e3) + ',' +
           fmt17(r.m1) + ',' + (r.m2 ? fmt17(*r.m2) : "") + '\n';
  }
  return out;
}

std::string format_plotdata(std::span<const BenchRecord> records) {
  struct Agg {
    int count = 0;
    double error = 0, error_max = 0, t_seq = 0, t_para = 0, t_total = 0;
    std::optional<double> bound;
  };
  using Key = std::tuple<std::string, std::string, std::string, int>;
  std::map<Key, std::map<int, Agg>> blocks;
  for (const auto& r : records) {
    const Key key{std::string(to_string(r.family)), std::string(to_string(r.mode)), to_string(r.shift), r.n};
    Agg& a = blocks[key][r.d];
    ++a.count;
    a.error += r.error;
    a.error_max = std::max(a.error_max, r.error);
    a.t_seq += r.t_seq_ms;
    a.t_para += r.t_para_ms;
    a.t_total += r.t_total_ms;
    if (r.bound) a.bound = a.bound ? std::max(*a.bound, *r.bound) : *r.bound;
  }
  std::string out;
  for (const auto& [key, rows] : blocks) {
    if (!out.empty()) out += "\n\n";
    out += "# family=" + std::get<0>(key) + " mode=" + std::get<1>(key) + " shift=" + std::get<2>(key) +
           " n=" + std::to_string(std::get<3>(key)) + '\n';
    out += "# d error_mean error_max t_seq_ms t_para_ms t_total_ms bound\n";
    for (const auto& [d, a] : rows) {
      const double c = a.count;
      out += std::to_string(d) + ' ' + fmt17(a.error / c) + ' ' + fmt17(a.error_max) + ' ' + fmt17(a.t_seq / c) +
             ' ' + fmt17(a.t_para / c) + ' ' + fmt17(a.t_total / c) + ' ' + (a.bound ? fmt17(*a.bound) : "nan") +
             '\n';
    }
  }
  return out;
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void emit_csv(std::span<const BenchRecord> records, const std::filesystem::path& path) {
  write_text(path, format_csv(records));
}

void emit_plotdata(std::span<const BenchRecord> records, const std::filesystem::path& path) {
  write_text(path, format_plotdata(records));
}

bool same_csv_fields(const BenchRecord& a, const BenchRecord& b) {
  auto eq = [](double x, double y) { return x == y || (std::isnan(x) && std::isnan(y)); };
  return a.family == b.family && a.d == b.d && a.n == b.n && a.mode == b.mode && a.shift.kind == b.shift.kind &&
         a.shift.c == b.shift.c && a.seed == b.seed && a.trial == b.trial && eq(a.error, b.error) &&
         a.error_kind == b.error_kind && eq(a.t_seq_ms, b.t_seq_ms) && eq(a.t_para_ms, b.t_para_ms) &&
         eq(a.t_total_ms, b.t_total_ms) && a.bound.has_value() == b.bound.has_value() &&
         (!a.bound || eq(*a.bound, *b.bound));
}

#define PFEXPM_INSTANTIATE(R)                                                                                  \
  template HermitianMatrix<R> gen_matrix<R>(const MatrixSpec&);                                                \
  template CVector<R> random_unit_vector<R>(int, std::uint64_t);                                               \
  template std::vector<BenchRecord> run_matrix_suite<R>(std::span<const MatrixSpec>, std::span<const int>,     \
                                                        const MatrixSuiteOptions&);

PFEXPM_INSTANTIATE(double)
PFEXPM_INSTANTIATE(long double)

#undef PFEXPM_INSTANTIATE

}  // namespace pfexpm
