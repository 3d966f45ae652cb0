#pragma once

#include <cstdint>
#include <span>

#include "betagap/linalg.hpp"
#include "betagap/log_value.hpp"
#include "betagap/rng.hpp"

namespace betagap {

/// A Gaussian beta-ensemble G_{beta,n} together with a master seed.
struct EnsembleSpec {
  double beta = 1.0;
  std::size_t n = 1;
  std::uint64_t seed = 0;

  /// Throws DomainError for n == 0, beta <= 0, or (matrix) beta not in {1, 2, 4}.
  void validate(bool matrix_sampling) const;
  int tier() const;
};

/// Dense sample. Diagonal entries are N(0, 1/beta) and every real component of
/// an off-diagonal entry is N(0, 1/(2 beta)), so lambda ~ N(0, 1/beta) at n = 1.
HermitianMatrix sample_matrix(const EnsembleSpec& spec, Stream& stream);

/// Eigenvalues of the tridiagonal Hermite model (any beta > 0), O(n^2):
/// diagonal N(0, 1/beta), off-diagonal chi_{(n-i) beta} / sqrt(2 beta).
Spectrum sample_spectrum_tridiagonal(const EnsembleSpec& spec, Stream& stream);

/// log F_{beta,n}(lambda). Coincident eigenvalues give LogValue::zero().
LogValue log_joint_density(double beta, std::span<const double> lambdas);

}  // namespace betagap
