#include "betagap/quadrature.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "betagap/errors.hpp"
#include "betagap/exact.hpp"

namespace betagap {
namespace {

using boost::math::quadrature::gauss_kronrod;

class ChamberIntegral {
 public:
  ChamberIntegral(double beta, std::size_t n, double power, double tol)
      : beta_(beta), n_(n), power_(power), tol_(tol), log_c_(static_cast<double>(log_norm_constant_ld(beta, n))),
        reach_((std::sqrt(2.0 * static_cast<double>(n) + 2.0 * power) + 9.0) / std::sqrt(beta)), x_(n) {}

  double run() { return level(0, -reach_); }

 private:
  double integrand() const {
    double q = 0.0, prod = 1.0;
    for (std::size_t j = 0; j < n_; ++j) {
      q += x_[j] * x_[j];
      for (std::size_t k = j + 1; k < n_; ++k) prod *= x_[k] - x_[j];
    }
    double det = 1.0;
    for (std::size_t j = 0; j < n_; ++j) det *= x_[j];
    return std::exp(log_c_ - 0.5 * beta_ * q) * std::pow(prod, beta_) * (power_ != 0.0 ? std::pow(std::abs(det), power_) : 1.0);
  }

  // Integral over lower < x_l < reach of the remaining ordered coordinates.
  double level(std::size_t l, double lower) {
    auto f = [&](double t) {
      x_[l] = t;
      return l + 1 == n_ ? integrand() : level(l + 1, t);
    };
    double total = 0.0;
    if (lower < 0.0) total += gauss_kronrod<double, 21>::integrate(f, lower, 0.0, 10, tol_);
    total += gauss_kronrod<double, 21>::integrate(f, std::max(lower, 0.0), reach_, 10, tol_);
    return total;
  }

  double beta_;
  std::size_t n_;
  double power_;
  double tol_;
  double log_c_;
  double reach_;  // the Gaussian factor is below e^{-40} beyond this radius
  std::vector<double> x_;
};

}  // namespace

double density_moment_quadrature(double beta, std::size_t n, double power, double tol) {
  if (!(beta > 0.0)) throw DomainError("beta must be positive");
  if (n == 0) return 1.0;
  if (n > 4) throw DomainError("chamber quadrature supports n <= 4");
  if (power < 0.0) throw DomainError("power must be nonnegative");
  double factorial = 1.0;
  for (std::size_t k = 2; k <= n; ++k) factorial *= static_cast<double>(k);
  return factorial * ChamberIntegral(beta, n, power, tol).run();
}

LogValue gap_derivative_zero_quadrature(double beta, std::size_t n) {
  if (n == 0) throw DomainError("gap derivative needs n >= 1");
  const double moment = density_moment_quadrature(beta, n - 1, beta);
  return -(LogValue::from(4.0 * static_cast<double>(n)) * norm_constant_ratio(beta, n) *
           LogValue::from(0.5 * moment));
}

}  // namespace betagap
