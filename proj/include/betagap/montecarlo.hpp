#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "betagap/ensembles.hpp"
#include "betagap/harness.hpp"

namespace betagap {

struct Estimate {
  double mean = 0.0;
  double std_err = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;
};

Estimate to_estimate(const Moments& m, const RunConfig& cfg, double wall_seconds);

/// Draws one spectrum of G_{beta,n}: dense sampler for beta in {1, 2, 4},
/// tridiagonal model otherwise.
Spectrum sample_spectrum(const EnsembleSpec& spec, Stream& stream);

/// P{ min |lambda_i| >= eps } with binomial standard error.
Estimate gap_probability(const EnsembleSpec& spec, double eps, const RunConfig& cfg);

/// P{ min |lambda_i| >= eps ||Q|| } (Frobenius norm).
Estimate cone_gap_probability(const EnsembleSpec& spec, double eps, const RunConfig& cfg);

enum class GapCurve { cylinder, cone };

struct SlopeEstimate {
  /// Estimate of -f'(0) (a positive number).
  Estimate slope;
  /// |c| * sum eps^3 / sum eps with c from a fit of 1 - f = s eps + c eps^3.
  double bias = 0.0;
  std::vector<double> eps_grid;
  std::vector<double> one_minus_f;
};

/// Geometric grid {a, 2a, 4a} with 1 - f(a) roughly 10 / sqrt(trials).
std::vector<double> default_eps_grid(const EnsembleSpec& spec, GapCurve curve, std::uint64_t trials);

/// Weighted least-squares slope through the origin of 1 - f(eps) on the grid
/// with weights 1/eps, i.e. sum_g (1 - f(eps_g)) / sum_g eps_g. Each trial
/// contributes one term, so the standard error is exact.
SlopeEstimate derivative_at_zero(const EnsembleSpec& spec, GapCurve curve, std::span<const double> eps_grid,
                                 const RunConfig& cfg);

/// E |det Q|^power.
Estimate expected_abs_det_pow(const EnsembleSpec& spec, double power, const RunConfig& cfg);

/// Same statistic through the single-threaded reference loop.
Estimate expected_abs_det_pow_serial(const EnsembleSpec& spec, double power, const RunConfig& cfg);

}  // namespace betagap
