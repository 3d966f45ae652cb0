#pragma once

// Closed-form constants of the Gaussian beta-ensembles: normalisation,
// Mellin moments of |det|, the gap-probability slope at zero, the volume of
// the singular hypersurface, and the Euler characteristic series.

#include <cstddef>

#include <boost/multiprecision/cpp_int.hpp>

#include "betagap/log_value.hpp"

namespace betagap {

/// Real dimension N_beta = n + n(n-1) beta / 2.
std::size_t real_dimension(int beta, std::size_t n);

/// log C_beta(n); n = 0 gives log 1.
LogValue log_norm_constant(double beta, std::size_t n);
/// Same in extended precision (log_abs only).
long double log_norm_constant_ld(double beta, std::size_t n);

/// C_beta(n) / C_beta(n-1) from its direct Gamma-ratio form, n >= 1.
LogValue norm_constant_ratio(double beta, std::size_t n);

/// M+_m(beta, beta+1) = E|det Q|^beta / 2 over G_{beta,m}; beta in {1, 2, 4}.
LogValue mellin_plus(int beta, std::size_t m);

/// Exact terminating sum H_n = sum_k (1-n)_k / (1/2-n)_k (-1)^k.
struct Rational {
  boost::multiprecision::cpp_int num;
  boost::multiprecision::cpp_int den;

  LogValue log() const;
  double value() const { return log().value(); }
};
Rational hypergeom_H(std::size_t n);

/// f'_{beta,n}(0), the slope at zero of P{min |lambda_i| >= eps}; negative.
LogValue gap_derivative_zero(int beta, std::size_t n);

/// c_n = Gamma((n+1)/2) / (Gamma(n/2) Gamma(1/2) Gamma(3/2)), n even.
double c_n_even(std::size_t n);

/// |S^m| = 2 pi^{(m+1)/2} / Gamma((m+1)/2).
LogValue sphere_volume(std::size_t m);

/// sqrt(2) Gamma(N/2) / Gamma((N-1)/2), N >= 2.
LogValue cone_cylinder_factor(double n_dim);

struct SigmaVolume {
  LogValue absolute;
  /// Ratio to |S^{N-2}| via C(n)/C(n-1) from the normalisation constants.
  LogValue ratio_to_sphere;
  /// The same ratio via the direct Gamma-ratio closed form.
  LogValue ratio_closed_form;
};

/// Volume of the unit-norm singular matrices Sigma_{beta,n}, n >= 2. Throws
/// NumericalError if the two evaluation paths disagree beyond 1e-12.
SigmaVolume sigma_volume(int beta, std::size_t n);

/// a_0 + a_2 + ... + a_{dim X} for sum a_{2j} t^{2j} = (2 / (1 + t^2))^{k/2},
/// dim X = n - 1 - k (must be even and nonnegative).
double euler_char_expectation(std::size_t k, std::size_t n);

/// Leading-order growth (2 sqrt 2 / pi) sqrt n of |f'_{beta,n}(0)|.
double gap_derivative_asymptotic(std::size_t n);
/// Leading-order growth (2 / sqrt pi) sqrt n of the volume ratio.
double volume_ratio_asymptotic(std::size_t n);

struct ExactConstants {
  int beta = 1;
  std::size_t n = 1;
  LogValue C;
  LogValue mellin;
  LogValue f_prime_0;
  LogValue sigma_volume_ratio;
  std::size_t N_beta = 1;
};

/// All constants for one (beta, n); sigma_volume_ratio is zero when n < 2.
ExactConstants exact_constants(int beta, std::size_t n);

}  // namespace betagap
