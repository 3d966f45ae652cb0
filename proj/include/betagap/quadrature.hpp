#pragma once

// Deterministic quadrature over the ordered eigenvalue chamber; the
// oracle-grade route to E|det|^p for small matrices and arbitrary beta > 0.

#include <cstddef>

#include "betagap/log_value.hpp"

namespace betagap {

/// Integral of F_{beta,n}(lambda) |prod lambda|^power over R^n, n <= 4.
double density_moment_quadrature(double beta, std::size_t n, double power, double tol = 1e-10);

/// f'_{beta,n}(0) for any beta > 0 via the quadrature value of E_{beta,n-1}|det|^beta.
LogValue gap_derivative_zero_quadrature(double beta, std::size_t n);

}  // namespace betagap
