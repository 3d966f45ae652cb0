#include "betagap/exact.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "betagap/errors.hpp"

namespace betagap {
namespace {

using ld = long double;

constexpr ld kLogPi = 1.144729885849400174143427351353058712L;
constexpr ld kLog2 = 0.693147180559945309417232121458176568L;
constexpr ld kLog2Pi = kLog2 + kLogPi;

int checked_tier(int beta) {
  if (beta != 1 && beta != 2 && beta != 4)
    throw DomainError("closed form needs beta in {1, 2, 4} (got " + std::to_string(beta) + ")");
  return beta;
}

/// Neumaier-compensated accumulator in extended precision.
class Sum {
 public:
  void add(ld x) {
    const ld t = s_ + x;
    c_ += std::fabs(s_) >= std::fabs(x) ? (s_ - t) + x : (x - t) + s_;
    s_ = t;
  }
  ld value() const { return s_ + c_; }

 private:
  ld s_ = 0.0L, c_ = 0.0L;
};

ld log_bigint(const boost::multiprecision::cpp_int& x) {
  const auto bits = boost::multiprecision::msb(x);
  const unsigned shift = bits > 62 ? static_cast<unsigned>(bits - 62) : 0U;
  const boost::multiprecision::cpp_int top = x >> shift;
  return std::log(static_cast<ld>(top.convert_to<unsigned long long>())) + shift * kLog2;
}

/// S_m = (-1)^{m-1} sum_{k<m} (-1)^k Gamma(k+3/2)/k!, regrouped into positive terms.
ld odd_branch_sum(std::size_t m) {
  Sum pairs;
  const std::size_t half = m % 2 == 0 ? m / 2 : (m - 1) / 2;
  for (std::size_t j = 0; j < half; ++j) {
    const ld a = 2.0L * j;
    pairs.add(std::exp(std::lgamma(a + 1.5L) - std::lgamma(a + 2.0L)));
  }
  if (m % 2 == 0) return 0.5L * pairs.value();
  const ld head = std::exp(std::lgamma(m + 0.5L) - std::lgamma(static_cast<ld>(m)));
  return head - 0.5L * pairs.value();
}

ld log_mellin_goe(std::size_t m_arg) {
  const std::size_t n = m_arg + 1;
  if (n % 2 == 0)
    return std::log(std::numbers::sqrt2_v<ld> / std::numbers::pi_v<ld>) + std::lgamma((n + 1) / 2.0L);
  const std::size_t m = (n - 1) / 2;
  const ld bracket = (m % 2 == 0 ? 1.0L : -1.0L) +
                     4.0L * std::numbers::sqrt2_v<ld> / std::sqrt(std::numbers::pi_v<ld>) * odd_branch_sum(m);
  if (!(bracket > 0.0L)) throw NumericalError("odd-n Mellin bracket lost positivity");
  return -kLog2 + std::lgamma(static_cast<ld>(n)) - std::lgamma(m + 1.0L) - (n - 1) * kLog2 + std::log(bracket);
}

ld log_mellin_gue(std::size_t m_arg) {
  const std::size_t n = m_arg + 1;
  if (n % 2 == 0) return -kLogPi + 2.0L * std::lgamma((n + 1) / 2.0L);
  return std::log(static_cast<ld>(n)) - kLog2 - kLogPi + 2.0L * std::lgamma(n / 2.0L);
}

ld log_mellin_gse(std::size_t m_arg) {
  const std::size_t n = m_arg + 1;
  const ld log_h = static_cast<ld>(hypergeom_H(n).log().log_abs);
  return -2.0L * (n - 1) * kLog2 - kLogPi + 2.0L * std::lgamma(n + 0.5L) + kLog2 + log_h;
}

ld log_mellin(int beta, std::size_t m) {
  switch (checked_tier(beta)) {
    case 1: return log_mellin_goe(m);
    case 2: return log_mellin_gue(m);
    default: return log_mellin_gse(m);
  }
}

ld log_ratio_closed_form(ld beta, std::size_t n) {
  return ((n - 1) * beta / 2.0L + 0.5L) * std::log(beta) + std::lgamma(1.0L + beta / 2.0L) -
         0.5L * kLog2Pi - std::lgamma(1.0L + beta * n / 2.0L);
}

}  // namespace

std::size_t real_dimension(int beta, std::size_t n) {
  return n + n * (n - 1) * static_cast<std::size_t>(checked_tier(beta)) / 2;
}

long double log_norm_constant_ld(double beta_d, std::size_t n) {
  if (!(beta_d > 0.0)) throw DomainError("beta must be positive");
  const ld beta = beta_d;
  Sum s;
  s.add(-0.5L * n * kLog2Pi);
  s.add((n * (n - 1.0L) * beta / 4.0L + n / 2.0L) * std::log(beta));
  const ld g0 = std::lgamma(1.0L + beta / 2.0L);
  for (std::size_t j = 1; j <= n; ++j) s.add(g0 - std::lgamma(1.0L + j * beta / 2.0L));
  return s.value();
}

LogValue log_norm_constant(double beta, std::size_t n) {
  return LogValue::from_log(static_cast<double>(log_norm_constant_ld(beta, n)));
}

LogValue norm_constant_ratio(double beta, std::size_t n) {
  if (!(beta > 0.0)) throw DomainError("beta must be positive");
  if (n == 0) throw DomainError("ratio needs n >= 1");
  return LogValue::from_log(static_cast<double>(log_ratio_closed_form(beta, n)));
}

LogValue mellin_plus(int beta, std::size_t m) {
  if (m == 0) {
    checked_tier(beta);
    return LogValue::from(0.5);
  }
  return LogValue::from_log(static_cast<double>(log_mellin(beta, m)));
}

LogValue Rational::log() const {
  if (num == 0) return LogValue::zero();
  const int s = (num < 0) != (den < 0) ? -1 : 1;
  const ld l = log_bigint(boost::multiprecision::abs(num)) - log_bigint(boost::multiprecision::abs(den));
  return LogValue::from_log(static_cast<double>(l), s);
}

Rational hypergeom_H(std::size_t n) {
  using boost::multiprecision::cpp_int;
  if (n == 0) throw DomainError("H_n needs n >= 1");
  // Horner from the innermost term; ratio of consecutive terms is
  // -2(n-1-i) / (2n-1-2i).
  cpp_int num = 1, den = 1;
  for (std::size_t i = n - 1; i-- > 0;) {
    const cpp_int p = -2 * static_cast<long long>(n - 1 - i);
    const cpp_int q = static_cast<long long>(2 * n - 1 - 2 * i);
    num = q * den + p * num;
    den = q * den;
  }
  const cpp_int g = boost::multiprecision::gcd(num, den);
  return {num / g, den / g};
}

LogValue gap_derivative_zero(int beta, std::size_t n) {
  checked_tier(beta);
  if (n == 0) throw DomainError("gap derivative needs n >= 1");
  const ld l = std::log(4.0L * n) + log_ratio_closed_form(beta, n) +
               static_cast<ld>(mellin_plus(beta, n - 1).log_abs);
  return LogValue::from_log(static_cast<double>(l), -1);
}

double c_n_even(std::size_t n) {
  if (n == 0 || n % 2 != 0) throw DomainError("c_n is defined for even n >= 2");
  const ld l = std::lgamma((n + 1) / 2.0L) - std::lgamma(n / 2.0L) - kLogPi + kLog2;
  return static_cast<double>(std::exp(l));
}

LogValue sphere_volume(std::size_t m) {
  const ld h = (m + 1) / 2.0L;
  return LogValue::from_log(static_cast<double>(kLog2 + h * kLogPi - std::lgamma(h)));
}

LogValue cone_cylinder_factor(double n_dim) {
  if (!(n_dim >= 2.0)) throw DomainError("cone/cylinder factor needs N >= 2");
  const ld nn = n_dim;
  return LogValue::from_log(static_cast<double>(0.5L * kLog2 + std::lgamma(nn / 2.0L) - std::lgamma((nn - 1.0L) / 2.0L)));
}

SigmaVolume sigma_volume(int beta, std::size_t n) {
  checked_tier(beta);
  if (n < 2) throw DomainError("sigma volume needs n >= 2");
  const ld b = beta;
  const ld log_m = log_mellin(beta, n - 1);
  const ld log_2n = std::log(2.0L * n);
  const ld via_constants = log_2n + 0.5L * kLog2Pi + log_norm_constant_ld(beta, n) -
                           log_norm_constant_ld(beta, n - 1) + log_m;
  const ld closed = log_2n + (n * b - b + 1.0L) / 2.0L * std::log(b) + std::lgamma(1.0L + b / 2.0L) -
                    std::lgamma(1.0L + b * n / 2.0L) + log_m;
  if (std::fabs(via_constants - closed) > 1e-12L)
    throw NumericalError("volume evaluation paths disagree");
  const auto ratio = LogValue::from_log(static_cast<double>(via_constants));
  const auto sphere = sphere_volume(real_dimension(beta, n) - 2);
  return {ratio * sphere, ratio, LogValue::from_log(static_cast<double>(closed))};
}

double euler_char_expectation(std::size_t k, std::size_t n) {
  if (n < k + 1 || (n - 1 - k) % 2 != 0)
    throw DomainError("Euler characteristic series needs n - 1 - k even and nonnegative");
  const std::size_t terms = (n - 1 - k) / 2;
  const ld a = -static_cast<ld>(k) / 2.0L;
  ld coeff = 1.0L;
  Sum s;
  for (std::size_t j = 0; j <= terms; ++j) {
    s.add(coeff);
    coeff *= (a - j) / (j + 1.0L);
  }
  return static_cast<double>(std::pow(2.0L, k / 2.0L) * s.value());
}

double gap_derivative_asymptotic(std::size_t n) {
  return 2.0 * std::numbers::sqrt2 / std::numbers::pi * std::sqrt(static_cast<double>(n));
}

double volume_ratio_asymptotic(std::size_t n) {
  return 2.0 / std::sqrt(std::numbers::pi) * std::sqrt(static_cast<double>(n));
}

ExactConstants exact_constants(int beta, std::size_t n) {
  ExactConstants c;
  c.beta = checked_tier(beta);
  c.n = n;
  c.C = log_norm_constant(beta, n);
  c.N_beta = real_dimension(beta, n);
  if (n >= 1) {
    c.mellin = mellin_plus(beta, n - 1);
    c.f_prime_0 = gap_derivative_zero(beta, n);
  }
  if (n >= 2) c.sigma_volume_ratio = sigma_volume(beta, n).ratio_to_sphere;
  return c;
}

}  // namespace betagap
