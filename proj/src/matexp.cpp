#include "pfexpm/matexp.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

#include "pfexpm/rootgen.hpp"
#include "pfexpm/scalar.hpp"

namespace pfexpm {

namespace {

using Clock = std::chrono::steady_clock;

// Eigenvalues this close above zero are treated as rounding of a zero eigenvalue.
double nonpositive_slack(const SpectralBounds& b) {
  return 64 * std::numeric_limits<double>::epsilon() * std::max({1.0, -b.lo, b.hi});
}

// Sums pair contributions in ascending index as they become available.
template <class Block>
class OrderedSum {
 public:
  void deposit(int index, Block block) {
    std::lock_guard<std::mutex> lock(mu_);
    pending_.emplace(index, std::move(block));
    for (auto it = pending_.find(next_); it != pending_.end(); it = pending_.find(next_)) {
      if (next_ == 0) {
        total_ = std::move(it->second);
      } else {
        total_ += it->second;
      }
      pending_.erase(it);
      ++next_;
    }
  }

  Block take() { return std::move(total_); }

 private:
  std::mutex mu_;
  std::map<int, Block> pending_;
  int next_ = 0;
  Block total_;
};

int worker_count(const ExpOptions& opts, int tasks) {
  int t = 1;
  if (opts.parallel) {
    t = opts.threads > 0 ? opts.threads : static_cast<int>(std::thread::hardware_concurrency());
  }
  return std::clamp(t, 1, std::max(1, tasks));
}

// Runs body(l) for l in [0, tasks) on a pool, timing each call.
template <class Body>
std::vector<Seconds> run_tasks(int tasks, int workers, Body&& body) {
  std::vector<Seconds> times(static_cast<std::size_t>(tasks));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto work = [&] {
    for (int l = next++; l < tasks; l = next++) {
      try {
        const auto t0 = Clock::now();
        body(l);
        times[static_cast<std::size_t>(l)] = Clock::now() - t0;
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return times;
}

template <class Real>
ExpResult<Real> run_pairs(const HermitianMatrix<Real>& A, const CVector<Real>* v, const ExpOptions& opts) {
  using Complex = std::complex<Real>;
  const PartialFraction<Real> pf(opts.n);
  const auto roots = pf.roots();
  const auto coeffs = pf.coeffs();
  const int tasks = opts.n / 2;
  const bool real_path = A.is_real() && (v == nullptr || (v->imag().array() == Real(0)).all());

  ExpResult<Real> res;
  const auto start = Clock::now();
  if (v == nullptr) {
    OrderedSum<CMatrix<Real>> sum;
    res.per_term_times = run_tasks(tasks, worker_count(opts, tasks), [&](int l) {
      const auto k = static_cast<std::size_t>(2 * l);
      const CMatrix<Real> x = coeffs[k] * ShiftedFactorization<Real>(A, roots[k]).inverse();
      if (real_path) {
        sum.deposit(l, (Real(2) * x.real()).template cast<Complex>());
      } else {
        sum.deposit(l, x + x.adjoint());
      }
    });
    res.matrix = sum.take();
  } else {
    OrderedSum<CVector<Real>> sum;
    res.per_term_times = run_tasks(tasks, worker_count(opts, tasks), [&](int l) {
      const auto k = static_cast<std::size_t>(2 * l);
      const ShiftedFactorization<Real> f(A, roots[k]);
      const CVector<Real> y = coeffs[k] * f.solve(*v);
      if (real_path) {
        sum.deposit(l, (Real(2) * y.real()).template cast<Complex>());
      } else {
        sum.deposit(l, y + std::conj(coeffs[k]) * f.solve_conjugate(*v));
      }
    });
    res.vector = sum.take();
  }
  res.t_total = Clock::now() - start;
  res.t_para = *std::max_element(res.per_term_times.begin(), res.per_term_times.end());
  return res;
}

template <class Real>
void attach_absolute_bound(ExpResult<Real>& res, const HermitianMatrix<Real>& A, int n) {
  const SpectralBounds b = A.bounds() ? *A.bounds() : gershgorin_bounds(A);
  try {
    res.error_bound = apriori_bound(b, n);
  } catch (const OrderTooSmall& e) {
    res.warnings.emplace_back(e.what());
  } catch (const BadSpec& e) {
    res.warnings.emplace_back(e.what());
  }
}

template <class Real>
ExpResult<Real> shifted_impl(const HermitianMatrix<Real>& A, const CVector<Real>* v, const ExpOptions& opts) {
  opts.validate();
  double c = 0.0;
  switch (opts.shift.kind) {
    case Shift::Kind::None:
      throw BadSpec("shifted evaluation needs shift=auto or shift=c=<real>");
    case Shift::Kind::Auto:
      c = A.bounds() ? A.bounds()->hi : gershgorin_bounds(A).hi;
      break;
    case Shift::Kind::Fixed:
      c = opts.shift.c;
      break;
  }
  if (!(c <= max_shift())) throw Overflow("e^c overflows binary64 for c=" + std::to_string(c));

  const auto start = Clock::now();
  const HermitianMatrix<Real> B = A.shifted(static_cast<Real>(c));
  ExpResult<Real> res = run_pairs(B, v, opts);
  const Real scale = std::exp(static_cast<Real>(c));
  if (v == nullptr) {
    res.matrix *= scale;
  } else {
    res.vector *= scale;
  }
  res.t_total = Clock::now() - start;
  res.shift = c;
  res.bound_is_relative = true;

  // ||exp(A) - e^c R_n(A - cI)|| / ||exp(A)|| <= e^{c - alpha} err_n(-rho').
  // alpha is at least the largest diagonal entry when not known exactly.
  const SpectralBounds enclosure = B.bounds() ? *B.bounds() : gershgorin_bounds(B);
  double alpha_lower;
  if (A.bounds() && A.bounds()->exact) {
    alpha_lower = A.bounds()->hi;
  } else {
    alpha_lower = static_cast<double>(A.entries().diagonal().real().maxCoeff());
  }
  try {
    res.error_bound = std::exp(c - alpha_lower) * apriori_bound(enclosure, opts.n);
  } catch (const OrderTooSmall& e) {
    res.warnings.emplace_back(e.what());
  } catch (const BadSpec& e) {
    res.warnings.emplace_back(std::string(e.what()) + " (shift below the largest eigenvalue)");
  }
  return res;
}

}  // namespace

std::string_view to_string(Mode mode) { return mode == Mode::Full ? "full" : "action"; }

Mode parse_mode(std::string_view text) {
  if (text == "full") return Mode::Full;
  if (text == "action") return Mode::Action;
  throw BadSpec("unknown mode '" + std::string(text) + "'");
}

std::string to_string(const Shift& shift) {
  switch (shift.kind) {
    case Shift::Kind::None:
      return "none";
    case Shift::Kind::Auto:
      return "auto";
    case Shift::Kind::Fixed:
      break;
  }
  std::array<char, 40> buf{};
  auto r = std::to_chars(buf.data(), buf.data() + buf.size(), shift.c);
  return "c=" + std::string(buf.data(), r.ptr);
}

Shift parse_shift(std::string_view text) {
  if (text == "none") return Shift::none();
  if (text == "auto") return Shift::automatic();
  if (text.substr(0, 2) == "c=") {
    const auto body = text.substr(2);
    double c = 0.0;
    auto r = std::from_chars(body.data(), body.data() + body.size(), c);
    if (r.ec == std::errc() && r.ptr == body.data() + body.size() && std::isfinite(c)) return Shift::fixed(c);
  }
  throw BadSpec("bad shift '" + std::string(text) + "', expected none, auto or c=<real>");
}

void ExpOptions::validate() const {
  check_order(n);
  if (shift.kind == Shift::Kind::Fixed && !std::isfinite(shift.c)) throw BadSpec("shift c must be finite");
  if (threads < 0) throw BadSpec("thread count must be positive or 0 for auto");
}

double max_shift() { return std::log(std::numeric_limits<double>::max()); }

double apriori_bound(const SpectralBounds& bounds, int n) {
  check_order(n);
  if (bounds.hi > nonpositive_slack(bounds)) {
    throw BadSpec("no a priori bound: spectrum enclosure reaches " + std::to_string(bounds.hi) + " > 0");
  }
  const double rho = std::max(-bounds.lo, 0.0);
  if (n <= 2 * rho) {
    throw OrderTooSmall("no a priori bound: n=" + std::to_string(n) + " <= 2 rho=" + std::to_string(2 * rho));
  }
  return truncation_error(n, -rho);
}

template <class Real>
ExpResult<Real> matexp_full(const HermitianMatrix<Real>& A, const ExpOptions& opts) {
  if (opts.shift.kind != Shift::Kind::None) return shifted_impl<Real>(A, nullptr, opts);
  opts.validate();
  ExpResult<Real> res = run_pairs<Real>(A, nullptr, opts);
  attach_absolute_bound(res, A, opts.n);
  return res;
}

template <class Real>
ExpResult<Real> matexp_action(const HermitianMatrix<Real>& A, const CVector<Real>& v, const ExpOptions& opts) {
  if (v.size() != A.dim()) throw BadSpec("vector length does not match the matrix");
  if (!v.allFinite()) throw BadSpec("vector has non-finite entries");
  if (opts.shift.kind != Shift::Kind::None) return shifted_impl<Real>(A, &v, opts);
  opts.validate();
  ExpResult<Real> res = run_pairs<Real>(A, &v, opts);
  attach_absolute_bound(res, A, opts.n);
  return res;
}

template <class Real>
ExpResult<Real> matexp_shifted(const HermitianMatrix<Real>& A, const ExpOptions& opts) {
  return shifted_impl<Real>(A, nullptr, opts);
}

template <class Real>
ExpResult<Real> matexp_shifted(const HermitianMatrix<Real>& A, const CVector<Real>& v, const ExpOptions& opts) {
  if (v.size() != A.dim()) throw BadSpec("vector length does not match the matrix");
  return shifted_impl<Real>(A, &v, opts);
}

#define PFEXPM_INSTANTIATE(R)                                                                       \
  template ExpResult<R> matexp_full<R>(const HermitianMatrix<R>&, const ExpOptions&);               \
  template ExpResult<R> matexp_action<R>(const HermitianMatrix<R>&, const CVector<R>&, const ExpOptions&); \
  template ExpResult<R> matexp_shifted<R>(const HermitianMatrix<R>&, const ExpOptions&);            \
  template ExpResult<R> matexp_shifted<R>(const HermitianMatrix<R>&, const CVector<R>&, const ExpOptions&);

PFEXPM_INSTANTIATE(double)
PFEXPM_INSTANTIATE(long double)

#undef PFEXPM_INSTANTIATE

}  // namespace pfexpm
