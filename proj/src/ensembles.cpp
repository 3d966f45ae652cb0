#include "betagap/ensembles.hpp"

#include <algorithm>
#include <cmath>

#include "betagap/errors.hpp"
#include "betagap/exact.hpp"

namespace betagap {

void EnsembleSpec::validate(bool matrix_sampling) const {
  if (n == 0) throw DomainError("ensemble size n must be positive");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("beta must be positive");
  if (matrix_sampling && beta != 1.0 && beta != 2.0 && beta != 4.0)
    throw DomainError("matrix sampling needs beta in {1, 2, 4}");
}

int EnsembleSpec::tier() const {
  validate(true);
  return static_cast<int>(beta);
}

HermitianMatrix sample_matrix(const EnsembleSpec& spec, Stream& stream) {
  const int beta = spec.tier();
  const double sd_diag = std::sqrt(1.0 / beta);
  const double sd_off = std::sqrt(0.5 / beta);
  HermitianMatrix m(beta, spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    m.set(i, i, sd_diag * stream.normal());
    for (std::size_t j = i + 1; j < spec.n; ++j) {
      Quaternion q{sd_off * stream.normal()};
      if (beta >= 2) q.b = sd_off * stream.normal();
      if (beta == 4) {
        q.c = sd_off * stream.normal();
        q.d = sd_off * stream.normal();
      }
      m.set(i, j, q);
    }
  }
  return m;
}

Spectrum sample_spectrum_tridiagonal(const EnsembleSpec& spec, Stream& stream) {
  spec.validate(false);
  const std::size_t n = spec.n;
  kernels::Tridiagonal t;
  t.diag.resize(n);
  t.off.resize(n - 1);
  const double sd = std::sqrt(1.0 / spec.beta);
  const double off_scale = 1.0 / std::sqrt(2.0 * spec.beta);
  for (std::size_t i = 0; i < n; ++i) t.diag[i] = sd * stream.normal();
  for (std::size_t i = 0; i + 1 < n; ++i) t.off[i] = off_scale * stream.chi(static_cast<double>(n - 1 - i) * spec.beta);
  return Spectrum(spec.beta, kernels::tridiagonal_eigenvalues(std::move(t)));
}

LogValue log_joint_density(double beta, std::span<const double> lambdas) {
  if (!(beta > 0.0)) throw DomainError("beta must be positive");
  for (double x : lambdas)
    if (!std::isfinite(x)) throw DomainError("eigenvalues must be finite");
  long double acc = log_norm_constant_ld(beta, lambdas.size());
  long double sq = 0.0L, vdm = 0.0L;
  for (std::size_t j = 0; j < lambdas.size(); ++j) {
    sq += static_cast<long double>(lambdas[j]) * lambdas[j];
    for (std::size_t k = j + 1; k < lambdas.size(); ++k) {
      const double d = std::abs(lambdas[k] - lambdas[j]);
      if (d == 0.0) return LogValue::zero();
      vdm += std::log(static_cast<long double>(d));
    }
  }
  acc += -0.5L * beta * sq + beta * vdm;
  return LogValue::from_log(static_cast<double>(acc));
}

}  // namespace betagap
