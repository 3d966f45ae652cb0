#pragma once

#include <cmath>
#include <limits>

namespace betagap {

/// sign * exp(log_abs); sign == 0 means exactly zero (log_abs is then -inf).
struct LogValue {
  double log_abs = -std::numeric_limits<double>::infinity();
  int sign = 0;

  static LogValue zero() noexcept { return {}; }
  static LogValue from_log(double log_abs, int sign = 1) noexcept { return {log_abs, sign}; }
  static LogValue from(double x) noexcept {
    if (x == 0.0) return zero();
    return {std::log(std::abs(x)), x > 0.0 ? 1 : -1};
  }

  double value() const noexcept { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }
  bool is_zero() const noexcept { return sign == 0; }

  LogValue operator-() const noexcept { return {log_abs, -sign}; }
  friend LogValue operator*(LogValue a, LogValue b) noexcept {
    if (a.sign == 0 || b.sign == 0) return zero();
    return {a.log_abs + b.log_abs, a.sign * b.sign};
  }
  friend LogValue operator/(LogValue a, LogValue b) noexcept {
    if (a.sign == 0) return zero();
    return {a.log_abs - b.log_abs, a.sign * b.sign};
  }
};

}  // namespace betagap
