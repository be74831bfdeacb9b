#pragma once

// Test matrices, scalar and matrix experiment drivers, CSV and plot-data output.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pfexpm/linalg.hpp"
#include "pfexpm/matexp.hpp"

namespace pfexpm {

enum class Family { Lap1D, Lap2D, RandomSpectrum };

std::string_view to_string(Family family);
/// "lap1d", "lap2d" or "random".
Family parse_family(std::string_view text);

struct MatrixSpec {
  Family family = Family::Lap1D;
  int d = 1;
  double lo = -1.0;  // RandomSpectrum only
  double hi = 0.0;
  std::uint64_t seed = 0;

  /// Throws BadSpec.
  void validate() const;
};

/// Lap1D: tridiag(1, -2, 1). Lap2D: 5-point stencil on an m x m grid, d = m^2.
/// RandomSpectrum: Q diag(lambda) Q^T with Q from the QR factorization of a
/// seeded Gaussian matrix; lambda_0 = lo, lambda_1 = hi, the rest uniform on
/// [lo, hi]. Deterministic per seed.
template <class Real>
HermitianMatrix<Real> gen_matrix(const MatrixSpec& spec);

/// Eigenvalues gen_matrix places in a RandomSpectrum matrix, ascending.
std::vector<double> random_spectrum(const MatrixSpec& spec);

/// Seeded Gaussian vector of unit 2-norm.
template <class Real>
CVector<Real> random_unit_vector(int d, std::uint64_t seed);

struct Grid {
  double lo = -100.0;
  double hi = 0.0;
  int count = 10000;

  /// count equally spaced points including both ends.
  std::vector<double> points() const;
};

/// "lo:hi:count".
Grid parse_grid(std::string_view text);

struct ScalarRecord {
  int n = 0;
  double max_e1 = 0.0;
  double max_e2 = 0.0;
  double max_e3 = 0.0;
  double m1 = 0.0;
  std::optional<double> m2;  // empty when (n, D) breaks the digit condition

  friend bool operator==(const ScalarRecord&, const ScalarRecord&) = default;
};

std::vector<ScalarRecord> run_scalar_suite(std::span<const int> n_list, const Grid& grid, int digits = 16);

enum class ErrorKind { Absolute, Relative };

struct BenchRecord {
  Family family = Family::Lap1D;
  int d = 0;
  int n = 0;
  Mode mode = Mode::Full;
  Shift shift;
  std::uint64_t seed = 0;
  int trial = 0;
  double error = 0.0;
  ErrorKind error_kind = ErrorKind::Absolute;
  double t_seq_ms = 0.0;   // oracle
  double t_para_ms = 0.0;  // max over pair tasks
  double t_total_ms = 0.0;
  std::optional<double> bound;
  std::vector<double> per_term_ms;  // not serialized
};

struct MatrixSuiteOptions {
  Mode mode = Mode::Full;
  int trials = 1;
  int threads = 0;
  Shift shift;
  int repeats = 3;      // timed repetitions, median reported
  bool warmup = true;   // one discarded run before timing
};

/// For each spec and trial t the matrix seed is spec.seed + t; in Action mode
/// v is a unit vector seeded the same way. Errors are absolute, or relative to
/// e^alpha when the spectrum has positive eigenvalues.
template <class Real>
std::vector<BenchRecord> run_matrix_suite(std::span<const MatrixSpec> specs, std::span<const int> n_list,
                                          const MatrixSuiteOptions& opts);

inline constexpr std::string_view kBenchCsvHeader =
    "family,d,n,mode,shift,seed,trial,error,error_kind,t_seq_ms,t_para_ms,t_total_ms,bound";
inline constexpr std::string_view kScalarCsvHeader = "n,max_e1,max_e2,max_e3,m1,m2";

std::string format_csv(std::span<const BenchRecord> records);
std::vector<BenchRecord> parse_csv(std::string_view text);
std::string format_scalar_csv(std::span<const ScalarRecord> records);
/// Mean over trials per (family, mode, shift, n, d), one gnuplot block per
/// (family, mode, shift, n).
std::string format_plotdata(std::span<const BenchRecord> records);

/// Write the formatted text; throw IoError.
void write_text(const std::filesystem::path& path, std::string_view text);
void emit_csv(std::span<const BenchRecord> records, const std::filesystem::path& path);
void emit_plotdata(std::span<const BenchRecord> records, const std::filesystem::path& path);

/// Fields that round-trip through the CSV.
bool same_csv_fields(const BenchRecord& a, const BenchRecord& b);

}  // namespace pfexpm
