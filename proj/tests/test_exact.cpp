#include <doctest.h>

#include <cmath>
#include <numbers>

#include "betagap/errors.hpp"
#include "betagap/exact.hpp"
#include "betagap/quadrature.hpp"

using namespace betagap;

namespace {

const double kPi = std::numbers::pi;
const double kSqrtPi = std::sqrt(std::numbers::pi);

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Odd-n Mellin moment from the raw alternating sum, in long double; usable for small n.
double mellin_goe_odd_raw(std::size_t n) {
  const std::size_t m = (n - 1) / 2;
  long double s = 0.0L;
  for (std::size_t k = 0; k < m; ++k)
    s += (k % 2 == 0 ? 1.0L : -1.0L) * std::tgamma(k + 1.5L) / std::tgamma(k + 1.0L);
  if (m % 2 == 0) s = -s;
  const long double bracket = (m % 2 == 0 ? 1.0L : -1.0L) + 4.0L * std::sqrt(2.0L) / std::sqrt(std::numbers::pi_v<long double>) * s;
  return static_cast<double>(0.5L * std::tgamma(static_cast<long double>(n)) / std::tgamma(m + 1.0L) /
                             std::pow(2.0L, static_cast<long double>(n - 1)) * bracket);
}

// H_n by direct floating summation of the terms.
double hypergeom_direct(std::size_t n) {
  double term = 1.0, sum = 1.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    term *= (1.0 - n + k) / (0.5 - n + k) * -1.0;
    sum += term;
  }
  return sum;
}

}  // namespace

TEST_CASE("normalisation constants") {
  CHECK(log_norm_constant(1, 1).value() == doctest::Approx(1.0 / std::sqrt(2 * kPi)).epsilon(1e-14));
  CHECK(log_norm_constant(2, 1).value() == doctest::Approx(1.0 / kSqrtPi).epsilon(1e-14));
  CHECK(log_norm_constant(1, 0).value() == 1.0);
  const double r = (log_norm_constant(1, 2) / log_norm_constant(1, 1)).value();
  CHECK(r == doctest::Approx(std::numbers::sqrt2 / 4).epsilon(1e-14));
  for (double beta : {0.5, 1.0, 2.0, 3.0, 4.0}) {
    for (std::size_t n : {1, 2, 7, 50, 400}) {
      const long double diff = log_norm_constant_ld(beta, n) - log_norm_constant_ld(beta, n - 1);
      CHECK(std::abs(static_cast<double>(diff) - norm_constant_ratio(beta, n).log_abs) < 1e-11);
    }
  }
}

TEST_CASE("Mellin moment fixtures") {
  CHECK(mellin_plus(1, 1).value() == doctest::Approx(0.5 * std::sqrt(2 / kPi)).epsilon(1e-14));
  CHECK(mellin_plus(2, 1).value() == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(mellin_plus(4, 1).value() == doctest::Approx(3.0 / 32).epsilon(1e-14));
  for (int beta : {1, 2, 4}) CHECK(mellin_plus(beta, 0).value() == 0.5);
  CHECK_THROWS_AS(mellin_plus(3, 2), DomainError);
}

TEST_CASE("odd-n regrouped sum matches the raw alternating sum") {
  for (std::size_t n = 1; n <= 31; n += 2) CHECK(rel(mellin_plus(1, n - 1).value(), mellin_goe_odd_raw(n)) < 1e-12);
}

TEST_CASE("Mellin moments interleave and approach the even-n envelope") {
  auto normalised = [](std::size_t n) {
    return mellin_plus(1, n - 1).value() / (std::numbers::sqrt2 / kPi * std::tgamma((n + 1) / 2.0));
  };
  CHECK(std::abs(normalised(200) - 1.0) < 0.05);
  CHECK(std::abs(normalised(199) - 1.0) < 0.05);
  for (std::size_t n = 2; n < 150; ++n) {
    const double a = mellin_plus(1, n - 1).log_abs, b = mellin_plus(1, n).log_abs;
    CHECK(b > a);
  }
}

TEST_CASE("terminating hypergeometric sum") {
  auto h1 = hypergeom_H(1);
  CHECK(h1.num == 1);
  CHECK(h1.den == 1);
  auto h2 = hypergeom_H(2);
  CHECK(h2.num == 1);
  CHECK(h2.den == 3);
  for (std::size_t n = 1; n <= 25; ++n) CHECK(rel(hypergeom_H(n).value(), hypergeom_direct(n)) < 1e-12);
  // Reference values from a 50-digit evaluation of the same sum.
  CHECK(rel(2.0 * hypergeom_H(100).value(), 0.93976214653081297838) < 1e-13);
  CHECK(rel(2.0 * hypergeom_H(10000).value(), 0.99375835160578374434) < 1e-13);
  // Approach to 1 is like 1 - 0.62 / sqrt(n).
  for (std::size_t n : {100, 400, 1600}) {
    const double gap = (1.0 - 2.0 * hypergeom_H(n).value()) * std::sqrt(static_cast<double>(n));
    CHECK(gap > 0.55);
    CHECK(gap < 0.65);
  }
}

TEST_CASE("gap derivative fixtures") {
  CHECK(gap_derivative_zero(1, 2).value() == doctest::Approx(-2 / kSqrtPi).epsilon(1e-14));
  CHECK(gap_derivative_zero(1, 1).value() == doctest::Approx(-std::sqrt(2 / kPi)).epsilon(1e-14));
  const double r = gap_derivative_zero(1, 200).value() / -gap_derivative_asymptotic(200);
  CHECK(r >= 0.95);
  CHECK(r <= 1.05);
  for (int beta : {1, 2, 4})
    for (std::size_t n = 1; n < 30; ++n) CHECK(gap_derivative_zero(beta, n).sign == -1);
}

TEST_CASE("c_n and the even-n identity") {
  CHECK(c_n_even(2) == doctest::Approx(1 / kSqrtPi).epsilon(1e-14));
  CHECK(c_n_even(4) == doctest::Approx(3 / (2 * kSqrtPi)).epsilon(1e-14));
  CHECK_THROWS_AS(c_n_even(3), DomainError);
  for (std::size_t n = 2; n <= 60; n += 2) CHECK(rel(gap_derivative_zero(1, n).value(), -2 * c_n_even(n)) < 1e-12);
}

TEST_CASE("sphere volume and cone factor") {
  CHECK(sphere_volume(0).value() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(sphere_volume(1).value() == doctest::Approx(2 * kPi).epsilon(1e-15));
  CHECK(sphere_volume(2).value() == doctest::Approx(4 * kPi).epsilon(1e-15));
  CHECK(cone_cylinder_factor(2).value() == doctest::Approx(std::numbers::sqrt2 / kSqrtPi).epsilon(1e-14));
  CHECK(cone_cylinder_factor(3).value() == doctest::Approx(std::sqrt(kPi / 2)).epsilon(1e-14));
  CHECK(std::abs(cone_cylinder_factor(1e4).value() / 100.0 - 1.0) < 1e-3);
  CHECK_THROWS_AS(cone_cylinder_factor(1.5), DomainError);
}

TEST_CASE("volume of the singular hypersurface") {
  const auto v = sigma_volume(1, 2);
  CHECK(rel(v.absolute.value(), 2 * std::numbers::sqrt2 * kPi) < 1e-12);
  CHECK(rel(v.ratio_to_sphere.value(), std::numbers::sqrt2) < 1e-12);
  for (int beta : {1, 2, 4}) {
    for (std::size_t n = 2; n <= 500; n += 7) {
      const auto s = sigma_volume(beta, n);
      CHECK(std::abs(s.ratio_to_sphere.log_abs - s.ratio_closed_form.log_abs) < 1e-12);
      // |Sigma| / |S^{N-2}| = sqrt(pi/2) |f'(0)|.
      CHECK(rel(s.ratio_to_sphere.value(), std::sqrt(kPi / 2) * -gap_derivative_zero(beta, n).value()) < 1e-11);
    }
    const double r = sigma_volume(beta, 200).ratio_to_sphere.value() / volume_ratio_asymptotic(200);
    CHECK(r >= 0.95);
    CHECK(r <= 1.05);
  }
}

TEST_CASE("asymptotic envelopes for n in [50, 500]") {
  for (int beta : {1, 2, 4}) {
    for (std::size_t n = 50; n <= 500; n += 9) {
      const double band = 5.0 / std::sqrt(static_cast<double>(n));
      const double f = -gap_derivative_zero(beta, n).value() / gap_derivative_asymptotic(n);
      const double v = sigma_volume(beta, n).ratio_to_sphere.value() / volume_ratio_asymptotic(n);
      CHECK(std::abs(f - 1.0) <= band);
      CHECK(std::abs(v - 1.0) <= band);
    }
  }
  for (std::size_t n = 2; n <= 500; ++n)
    CHECK(std::abs(sigma_volume(1, n).ratio_to_sphere.value() - volume_ratio_asymptotic(n)) <= 10.0);
}

TEST_CASE("Euler characteristic series") {
  CHECK(euler_char_expectation(2, 7) == doctest::Approx(2.0));
  CHECK(euler_char_expectation(2, 9) == doctest::Approx(0.0));
  CHECK(euler_char_expectation(4, 7) == doctest::Approx(-4.0));
  CHECK_THROWS_AS(euler_char_expectation(2, 6), DomainError);
}

TEST_CASE("density normalisation by chamber quadrature") {
  for (double beta : {1.0, 2.0, 4.0})
    for (std::size_t n : {1, 2, 3}) CHECK(std::abs(density_moment_quadrature(beta, n, 0.0) - 1.0) < 1e-6);
}

TEST_CASE("Mellin moments against chamber quadrature") {
  for (int beta : {1, 2, 4}) {
    for (std::size_t m : {1, 2}) {
      const double q = 0.5 * density_moment_quadrature(beta, m, beta);
      CHECK(rel(mellin_plus(beta, m).value(), q) < 1e-7);
    }
  }
  CHECK(rel(gap_derivative_zero_quadrature(1.0, 3).value(), gap_derivative_zero(1, 3).value()) < 1e-7);
}
