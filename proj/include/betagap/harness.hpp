#pragma once

// Deterministic parallel trial loop. Trials are cut into fixed-size chunks;
// every chunk owns its accumulator and chunk results are merged in index
// order, so the outcome does not depend on the number of threads.

#include <chrono>
#include <cmath>
#include <algorithm>
#include <cstdint>
#include <exception>
#include <vector>

namespace betagap {

struct RunConfig {
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  /// <= 0 selects BETAGAP_THREADS or the OpenMP default.
  int threads = 0;
};

inline constexpr std::uint64_t kChunkTrials = 1024;

/// requested > 0 wins; otherwise BETAGAP_THREADS; otherwise omp_get_max_threads().
int resolve_threads(int requested);

/// Neumaier-compensated double sum with an order-fixed merge.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = s_ + x;
    c_ += std::abs(s_) >= std::abs(x) ? (s_ - t) + x : (x - t) + s_;
    s_ = t;
  }
  void merge(const CompensatedSum& o) noexcept {
    add(o.s_);
    c_ += o.c_;
  }
  double value() const noexcept { return s_ + c_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

/// Running count, sum and sum of squares of a per-trial statistic.
struct Moments {
  std::uint64_t count = 0;
  CompensatedSum sum;
  CompensatedSum sum_sq;

  void add(double x) noexcept {
    ++count;
    sum.add(x);
    sum_sq.add(x * x);
  }
  void merge(const Moments& o) noexcept {
    count += o.count;
    sum.merge(o.sum);
    sum_sq.merge(o.sum_sq);
  }
  double mean() const noexcept { return count ? sum.value() / static_cast<double>(count) : 0.0; }
  /// Standard error of the mean (unbiased variance).
  double std_err() const noexcept {
    if (count < 2) return 0.0;
    const double n = static_cast<double>(count);
    const double m = mean();
    const double var = std::max(0.0, (sum_sq.value() - n * m * m) / (n - 1.0));
    return std::sqrt(var / n);
  }
};

class WallTimer {
 public:
  WallTimer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

/// fn(acc, trial) for every trial in [0, cfg.trials); Acc needs merge().
template <class Acc, class Fn>
Acc run_trials(const RunConfig& cfg, Fn&& fn) {
  const auto chunks = static_cast<long long>((cfg.trials + kChunkTrials - 1) / kChunkTrials);
  std::vector<Acc> partial(static_cast<std::size_t>(chunks));
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 1) num_threads(resolve_threads(cfg.threads))
  for (long long c = 0; c < chunks; ++c) {
    try {
      Acc acc;
      const std::uint64_t lo = static_cast<std::uint64_t>(c) * kChunkTrials;
      const std::uint64_t hi = std::min(lo + kChunkTrials, cfg.trials);
      for (std::uint64_t t = lo; t < hi; ++t) fn(acc, t);
      partial[static_cast<std::size_t>(c)] = std::move(acc);
    } catch (...) {
#pragma omp critical(betagap_run_trials_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  Acc total;
  for (auto& p : partial) total.merge(p);
  return total;
}

/// Single-threaded reference: one accumulator, trials in order.
template <class Acc, class Fn>
Acc run_trials_serial(const RunConfig& cfg, Fn&& fn) {
  Acc acc;
  for (std::uint64_t t = 0; t < cfg.trials; ++t) fn(acc, t);
  return acc;
}

}  // namespace betagap
