#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "betagap/kernels.hpp"

namespace betagap {

/// q = a + b i + c j + d k.
struct Quaternion {
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

  Quaternion conj() const noexcept { return {a, -b, -c, -d}; }
  double norm2() const noexcept { return a * a + b * b + c * c + d * d; }
  friend bool operator==(const Quaternion&, const Quaternion&) = default;
};

/// Validates a scalar tier tag; throws DomainError unless beta is 1, 2 or 4.
int checked_beta(int beta);

/// Self-adjoint n x n matrix over R (beta=1), C (beta=2) or H (beta=4).
/// Only the upper triangle is stored (packed, row by row, beta reals per entry);
/// the lower triangle is its conjugate by construction.
class HermitianMatrix {
 public:
  HermitianMatrix(int beta, std::size_t n);

  static HermitianMatrix identity(int beta, std::size_t n);
  static HermitianMatrix diagonal(int beta, std::span<const double> d);
  /// Real symmetric from a dense matrix; the upper triangle is read.
  static HermitianMatrix from_real(const RealMatrix& m);
  /// Complex Hermitian from a dense matrix; the upper triangle is read.
  static HermitianMatrix from_complex(const ComplexMatrix& m);
  /// Quaternionic Hermitian from its 2n x 2n complex embedding (projected onto
  /// the quaternion structure, upper blocks read).
  static HermitianMatrix from_embedding(const ComplexMatrix& m);

  int beta() const noexcept { return beta_; }
  std::size_t n() const noexcept { return n_; }
  /// Real dimension of the ambient space: n + n(n-1)beta/2.
  std::size_t real_dimension() const noexcept { return n_ + n_ * (n_ - 1) * beta_ / 2; }

  /// Entry (i, j) for any i, j; below the diagonal the conjugate is returned.
  Quaternion at(std::size_t i, std::size_t j) const;
  /// Sets (i, j) and hence (j, i). Diagonal entries must be real; components
  /// outside the scalar tier must be zero.
  void set(std::size_t i, std::size_t j, Quaternion q);
  void set(std::size_t i, std::size_t j, double v) { set(i, j, Quaternion{v}); }
  void set(std::size_t i, std::size_t j, std::complex<double> v) {
    set(i, j, Quaternion{v.real(), v.imag()});
  }

  double frobenius_norm() const noexcept;
  /// Trace (real by self-adjointness).
  double trace() const noexcept;
  bool all_finite() const noexcept;

  /// beta=1 only.
  RealMatrix real_dense() const;
  /// beta=2: the n x n matrix; beta=4: the 2n x 2n complex embedding in which
  /// entry (i, j) occupies the 2x2 block [[a+bi, c+di], [-c+di, a-bi]].
  ComplexMatrix complex_dense() const;

  /// Raw packed storage (upper triangle, row by row, beta reals per entry).
  std::span<const double> packed() const noexcept { return data_; }

  HermitianMatrix& operator+=(const HermitianMatrix& o);
  HermitianMatrix& operator-=(const HermitianMatrix& o);
  HermitianMatrix& operator*=(double s) noexcept;
  friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) { return a += b; }
  friend HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b) { return a -= b; }
  friend HermitianMatrix operator*(double s, HermitianMatrix a) { return a *= s; }
  friend bool operator==(const HermitianMatrix&, const HermitianMatrix&) = default;

  /// sum_i w[i] * terms[i]; all terms must share beta and n.
  static HermitianMatrix combine(std::span<const double> w, std::span<const HermitianMatrix> terms);

 private:
  std::size_t offset(std::size_t i, std::size_t j) const noexcept;
  void check_compatible(const HermitianMatrix& o) const;

  int beta_;
  std::size_t n_;
  std::vector<double> data_;
};

/// Ascending eigenvalues of a HermitianMatrix (beta=4: Kramers pairs collapsed).
class Spectrum {
 public:
  Spectrum(double beta, std::vector<double> ascending);

  double beta() const noexcept { return beta_; }
  std::size_t n() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  /// sqrt(sum lambda^2), the Frobenius norm of the underlying matrix.
  double norm() const noexcept;
  /// |lambda| at or below this counts as zero: 1e-12 * max(1, norm()).
  double zero_threshold() const noexcept;
  /// log |prod lambda|; -infinity when some eigenvalue is exactly zero.
  double log_abs_det() const noexcept;

 private:
  double beta_;
  std::vector<double> values_;
};

/// Throws DomainError on non-finite entries.
Spectrum eigenvalues(const HermitianMatrix& q);

/// Number of eigenvalues above the zero threshold.
std::size_t index_plus(const Spectrum& s) noexcept;

/// min |lambda_i|.
double least_singular(const Spectrum& s) noexcept;

struct NearestSingular {
  double distance = 0.0;
  HermitianMatrix nearest;
  /// Set when the input was already singular; then distance = 0 and nearest = q.
  bool degenerate = false;
};

/// Nearest singular matrix in Frobenius norm: the eigenvalue of least modulus
/// replaced by zero in its eigenbasis.
NearestSingular eckart_young(const HermitianMatrix& q);

struct PencilRoots {
  /// Ascending angles in [0, 2 pi) where det(cos t Q1 + sin t Q2) = 0.
  std::vector<double> angles;
  /// Set when two polished roots coincided within 1e-8 and were merged.
  bool merged = false;
};

/// Singular angles together with the jump of i+ when t increases through each
/// of them (+1 or -1 for a simple root, summed over merged roots).
struct PencilCrossings {
  std::vector<double> angles;
  std::vector<int> crossing;
  bool merged = false;
};

/// Eigenvalues of ref^{-1} orth for a well-conditioned reference direction
/// give every singular direction; each real eigenvalue yields an antipodal pair.
PencilCrossings pencil_crossings(const HermitianMatrix& q1, const HermitianMatrix& q2);

/// Real singular angles of the pencil cos t Q1 + sin t Q2. Throws
/// DegeneratePencilError if the pencil is singular for every t.
PencilRoots pencil_real_roots(const HermitianMatrix& q1, const HermitianMatrix& q2);

/// Full inertia of a real symmetric matrix with the index_plus zero threshold.
kernels::Inertia inertia(const HermitianMatrix& q);

}  // namespace betagap
