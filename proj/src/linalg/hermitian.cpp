#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "betagap/errors.hpp"
#include "betagap/linalg.hpp"

namespace betagap {

int checked_beta(int beta) {
  if (beta != 1 && beta != 2 && beta != 4)
    throw DomainError("beta must be 1, 2 or 4 (got " + std::to_string(beta) + ")");
  return beta;
}

HermitianMatrix::HermitianMatrix(int beta, std::size_t n)
    : beta_(checked_beta(beta)), n_(n), data_(n * (n + 1) / 2 * static_cast<std::size_t>(beta), 0.0) {
  if (n == 0) throw DomainError("matrix size must be positive");
}

HermitianMatrix HermitianMatrix::identity(int beta, std::size_t n) {
  HermitianMatrix m(beta, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1.0);
  return m;
}

HermitianMatrix HermitianMatrix::diagonal(int beta, std::span<const double> d) {
  HermitianMatrix m(beta, d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m.set(i, i, d[i]);
  return m;
}

HermitianMatrix HermitianMatrix::from_real(const RealMatrix& a) {
  if (a.rows() != a.cols()) throw DomainError("matrix must be square");
  HermitianMatrix m(1, static_cast<std::size_t>(a.rows()));
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = i; j < a.cols(); ++j) m.set(i, j, a(i, j));
  return m;
}

HermitianMatrix HermitianMatrix::from_complex(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw DomainError("matrix must be square");
  HermitianMatrix m(2, static_cast<std::size_t>(a.rows()));
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    m.set(i, i, a(i, i).real());
    for (Eigen::Index j = i + 1; j < a.cols(); ++j) m.set(i, j, a(i, j));
  }
  return m;
}

HermitianMatrix HermitianMatrix::from_embedding(const ComplexMatrix& e) {
  if (e.rows() != e.cols() || e.rows() % 2 != 0) throw DomainError("embedding must be 2n x 2n");
  const std::size_t n = static_cast<std::size_t>(e.rows() / 2);
  HermitianMatrix m(4, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const auto ab = 0.5 * (e(2 * i, 2 * j) + std::conj(e(2 * i + 1, 2 * j + 1)));
      const auto cd = 0.5 * (e(2 * i, 2 * j + 1) - std::conj(e(2 * i + 1, 2 * j)));
      if (i == j) m.set(i, i, ab.real());
      else m.set(i, j, Quaternion{ab.real(), ab.imag(), cd.real(), cd.imag()});
    }
  }
  return m;
}

std::size_t HermitianMatrix::offset(std::size_t i, std::size_t j) const noexcept {
  return (i * n_ - i * (i - 1) / 2 + (j - i)) * static_cast<std::size_t>(beta_);
}

Quaternion HermitianMatrix::at(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_) throw DomainError("matrix index out of range");
  if (i > j) return at(j, i).conj();
  const double* p = data_.data() + offset(i, j);
  Quaternion q{p[0]};
  if (beta_ >= 2) q.b = p[1];
  if (beta_ == 4) {
    q.c = p[2];
    q.d = p[3];
  }
  return q;
}

void HermitianMatrix::set(std::size_t i, std::size_t j, Quaternion q) {
  if (i >= n_ || j >= n_) throw DomainError("matrix index out of range");
  if (i > j) {
    set(j, i, q.conj());
    return;
  }
  if (i == j && (q.b != 0.0 || q.c != 0.0 || q.d != 0.0))
    throw DomainError("diagonal entries of a self-adjoint matrix are real");
  if ((beta_ < 2 && q.b != 0.0) || (beta_ < 4 && (q.c != 0.0 || q.d != 0.0)))
    throw DomainError("entry lies outside the scalar tier");
  double* p = data_.data() + offset(i, j);
  p[0] = q.a;
  if (beta_ >= 2) p[1] = q.b;
  if (beta_ == 4) {
    p[2] = q.c;
    p[3] = q.d;
  }
}

double HermitianMatrix::frobenius_norm() const noexcept {
  double diag = 0.0, off = 0.0;
  const auto b = static_cast<std::size_t>(beta_);
  for (std::size_t i = 0; i < n_; ++i) {
    const double* p = data_.data() + offset(i, i);
    diag += p[0] * p[0];
    for (std::size_t k = b; k < (n_ - i) * b; ++k) off += p[k] * p[k];
  }
  return std::sqrt(diag + 2.0 * off);
}

double HermitianMatrix::trace() const noexcept {
  double t = 0.0;
  for (std::size_t i = 0; i < n_; ++i) t += data_[offset(i, i)];
  return t;
}

bool HermitianMatrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

RealMatrix HermitianMatrix::real_dense() const {
  if (beta_ != 1) throw DomainError("real_dense requires beta = 1");
  RealMatrix m(n_, n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i; j < n_; ++j) m(i, j) = m(j, i) = data_[offset(i, j)];
  return m;
}

ComplexMatrix HermitianMatrix::complex_dense() const {
  using C = std::complex<double>;
  if (beta_ == 1) return real_dense().cast<C>();
  if (beta_ == 2) {
    ComplexMatrix m(n_, n_);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i; j < n_; ++j) {
        const double* p = data_.data() + offset(i, j);
        m(i, j) = C(p[0], p[1]);
        m(j, i) = std::conj(m(i, j));
      }
    }
    return m;
  }
  ComplexMatrix m(2 * n_, 2 * n_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      const Quaternion q = at(i, j);
      m(2 * i, 2 * j) = C(q.a, q.b);
      m(2 * i, 2 * j + 1) = C(q.c, q.d);
      m(2 * i + 1, 2 * j) = C(-q.c, q.d);
      m(2 * i + 1, 2 * j + 1) = C(q.a, -q.b);
    }
  }
  return m;
}

void HermitianMatrix::check_compatible(const HermitianMatrix& o) const {
  if (o.beta_ != beta_ || o.n_ != n_) throw DomainError("matrices differ in beta or size");
}

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& o) {
  check_compatible(o);
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

HermitianMatrix& HermitianMatrix::operator-=(const HermitianMatrix& o) {
  check_compatible(o);
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

HermitianMatrix& HermitianMatrix::operator*=(double s) noexcept {
  for (double& x : data_) x *= s;
  return *this;
}

HermitianMatrix HermitianMatrix::combine(std::span<const double> w,
                                         std::span<const HermitianMatrix> terms) {
  if (terms.empty() || w.size() != terms.size())
    throw DomainError("combine needs one weight per matrix");
  HermitianMatrix out(terms[0].beta_, terms[0].n_);
  for (std::size_t t = 0; t < terms.size(); ++t) {
    out.check_compatible(terms[t]);
    for (std::size_t k = 0; k < out.data_.size(); ++k) out.data_[k] += w[t] * terms[t].data_[k];
  }
  return out;
}

Spectrum::Spectrum(double beta, std::vector<double> ascending)
    : beta_(beta), values_(std::move(ascending)) {
  if (values_.empty()) throw DomainError("empty spectrum");
  if (!std::is_sorted(values_.begin(), values_.end()))
    throw DomainError("spectrum must be ascending");
}

double Spectrum::norm() const noexcept {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return std::sqrt(s);
}

double Spectrum::zero_threshold() const noexcept { return 1e-12 * std::max(1.0, norm()); }

double Spectrum::log_abs_det() const noexcept {
  double s = 0.0;
  for (double v : values_) {
    if (v == 0.0) return -std::numeric_limits<double>::infinity();
    s += std::log(std::abs(v));
  }
  return s;
}

namespace {

std::vector<double> collapse_kramers(const std::vector<double>& doubled) {
  double scale = 1.0;
  for (double v : doubled) scale = std::max(scale, std::abs(v));
  std::vector<double> out(doubled.size() / 2);
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double a = doubled[2 * k], b = doubled[2 * k + 1];
    if (std::abs(a - b) > 1e-9 * scale) throw NumericalError("Kramers pairs failed to pair up");
    out[k] = 0.5 * (a + b);
  }
  return out;
}

}  // namespace

Spectrum eigenvalues(const HermitianMatrix& q) {
  if (!q.all_finite()) throw DomainError("matrix has non-finite entries");
  switch (q.beta()) {
    case 1: return Spectrum(1, kernels::symmetric_eigenvalues(q.real_dense()));
    case 2: return Spectrum(2, kernels::hermitian_eigenvalues(q.complex_dense()));
    default: return Spectrum(4, collapse_kramers(kernels::hermitian_eigenvalues(q.complex_dense())));
  }
}

std::size_t index_plus(const Spectrum& s) noexcept {
  const double tol = s.zero_threshold();
  return static_cast<std::size_t>(
      std::count_if(s.values().begin(), s.values().end(), [tol](double v) { return v > tol; }));
}

double least_singular(const Spectrum& s) noexcept {
  double m = std::numeric_limits<double>::infinity();
  for (double v : s.values()) m = std::min(m, std::abs(v));
  return m;
}

NearestSingular eckart_young(const HermitianMatrix& q) {
  if (!q.all_finite()) throw DomainError("matrix has non-finite entries");
  auto argmin_abs = [](const std::vector<double>& v, std::size_t stride) {
    std::size_t best = 0;
    for (std::size_t k = 0; k < v.size(); k += stride)
      if (std::abs(v[k]) < std::abs(v[best])) best = k;
    return best;
  };
  auto degenerate = [&](double lambda, double norm) {
    return std::abs(lambda) <= 1e-12 * std::max(1.0, norm);
  };

  const double norm = q.frobenius_norm();
  if (q.beta() == 1) {
    const auto eig = kernels::symmetric_eigen(q.real_dense());
    const std::size_t k = argmin_abs(eig.values, 1);
    const double lambda = eig.values[k];
    if (degenerate(lambda, norm)) return {0.0, q, true};
    const RealVector v = eig.vectors.col(k);
    RealMatrix m = q.real_dense() - lambda * v * v.transpose();
    return {std::abs(lambda), HermitianMatrix::from_real(m), false};
  }
  const auto eig = kernels::hermitian_eigen(q.complex_dense());
  const std::size_t stride = q.beta() == 4 ? 2 : 1;
  const std::size_t k = argmin_abs(eig.values, stride);
  const double lambda =
      stride == 2 ? 0.5 * (eig.values[k] + eig.values[k + 1]) : eig.values[k];
  if (degenerate(lambda, norm)) return {0.0, q, true};
  ComplexMatrix m = q.complex_dense();
  for (std::size_t s = 0; s < stride; ++s) {
    const ComplexVector v = eig.vectors.col(k + s);
    m -= lambda * v * v.adjoint();
  }
  auto nearest = q.beta() == 2 ? HermitianMatrix::from_complex(m) : HermitianMatrix::from_embedding(m);
  return {std::abs(lambda), std::move(nearest), false};
}

kernels::Inertia inertia(const HermitianMatrix& q) {
  const double tol = 1e-12 * std::max(1.0, q.frobenius_norm());
  if (q.beta() == 1) return kernels::symmetric_inertia(q.real_dense(), tol);
  const Spectrum s = eigenvalues(q);
  kernels::Inertia in;
  for (double v : s.values()) {
    if (std::abs(v) <= tol) ++in.zero;
    else if (v > 0.0) ++in.positive;
    else ++in.negative;
  }
  return in;
}

}  // namespace betagap
