#include "betagap/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "betagap/errors.hpp"

namespace betagap::kernels {
namespace {

constexpr int kMaxQlIterations = 60;

template <class Matrix>
void ql_impl(Tridiagonal& t, Matrix* z) {
  auto& d = t.diag;
  const int n = static_cast<int>(d.size());
  if (n == 0) return;
  std::vector<double> e(t.off);
  e.resize(n, 0.0);
  e[n - 1] = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (iter++ == kMaxQlIterations) throw NumericalError("implicit QL did not converge");

      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      int i = m - 1;
      for (; i >= l; --i) {
        double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
        if (z) {
          for (Eigen::Index k = 0; k < z->rows(); ++k) {
            const auto zf = (*z)(k, i + 1);
            (*z)(k, i + 1) = s * (*z)(k, i) + c * zf;
            (*z)(k, i) = c * (*z)(k, i) - s * zf;
          }
        }
      }
      if (r == 0.0 && i >= l) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    } while (m != l);
  }
}

std::vector<std::size_t> ascending_order(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  return idx;
}

template <class Matrix>
void require_finite(const Matrix& a) {
  if (!a.allFinite()) throw DomainError("matrix has non-finite entries");
}

}  // namespace

Tridiagonal tridiagonalize(RealMatrix a, RealMatrix* q) {
  const Eigen::Index n = a.rows();
  Tridiagonal t;
  t.diag.resize(n);
  t.off.resize(n > 0 ? n - 1 : 0);
  std::vector<double> taus(n > 1 ? n - 1 : 0, 0.0);

  for (Eigen::Index k = 0; k + 2 < n; ++k) {
    const Eigen::Index m = n - k - 1;
    auto x = a.col(k).tail(m);
    const double alpha = x(0);
    const double xnorm = x.tail(m - 1).norm();
    if (xnorm == 0.0) {
      t.off[k] = alpha;
      x.tail(m - 1).setZero();
      continue;
    }
    const double beta = -std::copysign(std::hypot(alpha, xnorm), alpha);
    const double tau = (beta - alpha) / beta;
    x.tail(m - 1) /= (alpha - beta);
    x(0) = 1.0;
    RealVector v = x;
    t.off[k] = beta;
    taus[k] = tau;

    auto a22 = a.bottomRightCorner(m, m);
    RealVector p = tau * (a22.selfadjointView<Eigen::Lower>() * v);
    const double kappa = -0.5 * tau * p.dot(v);
    p += kappa * v;
    a22.selfadjointView<Eigen::Lower>().rankUpdate(v, p, -1.0);
  }
  for (Eigen::Index i = 0; i < n; ++i) t.diag[i] = a(i, i);
  if (n >= 2) t.off[n - 2] = a(n - 1, n - 2);

  if (q) {
    *q = RealMatrix::Identity(n, n);
    for (Eigen::Index k = n - 3; k >= 0; --k) {
      if (taus[k] == 0.0) continue;
      const Eigen::Index m = n - k - 1;
      RealVector v = a.col(k).tail(m);
      v(0) = 1.0;
      auto qs = q->bottomRightCorner(m, m);
      RealVector w = qs.transpose() * v;
      qs.noalias() -= taus[k] * v * w.transpose();
    }
  }
  return t;
}

Tridiagonal tridiagonalize(ComplexMatrix a, ComplexMatrix* q) {
  using C = std::complex<double>;
  const Eigen::Index n = a.rows();
  Tridiagonal t;
  t.diag.resize(n);
  t.off.resize(n > 0 ? n - 1 : 0);
  std::vector<C> sub(n > 1 ? n - 1 : 0);
  std::vector<double> taus(n > 1 ? n - 1 : 0, 0.0);

  for (Eigen::Index k = 0; k + 2 < n; ++k) {
    const Eigen::Index m = n - k - 1;
    auto x = a.col(k).tail(m);
    const C alpha = x(0);
    const double rest2 = x.tail(m - 1).squaredNorm();
    if (rest2 == 0.0) {
      sub[k] = alpha;
      x.tail(m - 1).setZero();
      continue;
    }
    const double xn = std::sqrt(std::norm(alpha) + rest2);
    const C phase = std::abs(alpha) == 0.0 ? C(1.0) : alpha / std::abs(alpha);
    const C beta = -phase * xn;
    x(0) = alpha - beta;
    const double tau = 2.0 / x.squaredNorm();
    ComplexVector v = x;
    sub[k] = beta;
    taus[k] = tau;

    auto a22 = a.bottomRightCorner(m, m);
    ComplexVector p = tau * (a22.selfadjointView<Eigen::Lower>() * v);
    const double kappa = 0.5 * tau * std::real(v.dot(p));
    p -= kappa * v;
    a22.selfadjointView<Eigen::Lower>().rankUpdate(v, p, -1.0);
  }
  for (Eigen::Index i = 0; i < n; ++i) t.diag[i] = std::real(a(i, i));
  if (n >= 2) sub[n - 2] = a(n - 1, n - 2);

  std::vector<C> phases(n, C(1.0));
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    const double r = std::abs(sub[k]);
    t.off[k] = r;
    phases[k + 1] = r == 0.0 ? phases[k] : phases[k] * (sub[k] / r);
  }

  if (q) {
    *q = ComplexMatrix::Identity(n, n);
    for (Eigen::Index k = n - 3; k >= 0; --k) {
      if (taus[k] == 0.0) continue;
      const Eigen::Index m = n - k - 1;
      ComplexVector v = a.col(k).tail(m);
      auto qs = q->bottomRightCorner(m, m);
      ComplexVector w = qs.adjoint() * v;
      qs.noalias() -= taus[k] * v * w.adjoint();
    }
    for (Eigen::Index j = 0; j < n; ++j) q->col(j) *= phases[j];
  }
  return t;
}

void ql_implicit(Tridiagonal& t, RealMatrix* z) { ql_impl(t, z); }
void ql_implicit(Tridiagonal& t, ComplexMatrix* z) { ql_impl(t, z); }

std::vector<double> tridiagonal_eigenvalues(Tridiagonal t) {
  ql_impl<RealMatrix>(t, nullptr);
  std::sort(t.diag.begin(), t.diag.end());
  return std::move(t.diag);
}

std::vector<double> symmetric_eigenvalues(const RealMatrix& a) {
  require_finite(a);
  return tridiagonal_eigenvalues(tridiagonalize(a));
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a) {
  require_finite(a);
  return tridiagonal_eigenvalues(tridiagonalize(a));
}

RealEigen symmetric_eigen(const RealMatrix& a) {
  require_finite(a);
  RealMatrix q;
  Tridiagonal t = tridiagonalize(a, &q);
  ql_implicit(t, &q);
  const auto order = ascending_order(t.diag);
  RealEigen out{std::vector<double>(order.size()), RealMatrix(q.rows(), q.cols())};
  for (std::size_t j = 0; j < order.size(); ++j) {
    out.values[j] = t.diag[order[j]];
    out.vectors.col(j) = q.col(order[j]);
  }
  return out;
}

ComplexEigen hermitian_eigen(const ComplexMatrix& a) {
  require_finite(a);
  ComplexMatrix q;
  Tridiagonal t = tridiagonalize(a, &q);
  ql_implicit(t, &q);
  const auto order = ascending_order(t.diag);
  ComplexEigen out{std::vector<double>(order.size()), ComplexMatrix(q.rows(), q.cols())};
  for (std::size_t j = 0; j < order.size(); ++j) {
    out.values[j] = t.diag[order[j]];
    out.vectors.col(j) = q.col(order[j]);
  }
  return out;
}

Inertia symmetric_inertia(RealMatrix a, double zero_tol) {
  const double alpha = (1.0 + std::sqrt(17.0)) / 8.0;
  const Eigen::Index n = a.rows();
  Inertia in;
  auto count = [&](double d) {
    if (std::abs(d) <= zero_tol) ++in.zero;
    else if (d > 0.0) ++in.positive;
    else ++in.negative;
  };
  // Symmetric swap of indices i < j inside the trailing lower triangle from k on.
  auto swap_sym = [&](Eigen::Index k, Eigen::Index i, Eigen::Index j) {
    if (i == j) return;
    for (Eigen::Index c = k; c < i; ++c) std::swap(a(i, c), a(j, c));
    for (Eigen::Index r = i + 1; r < j; ++r) std::swap(a(r, i), a(j, r));
    for (Eigen::Index r = j + 1; r < n; ++r) std::swap(a(r, i), a(r, j));
    std::swap(a(i, i), a(j, j));
  };

  Eigen::Index k = 0;
  while (k < n) {
    const double absakk = std::abs(a(k, k));
    double colmax = 0.0;
    Eigen::Index imax = k;
    if (k + 1 < n) {
      colmax = a.col(k).tail(n - k - 1).cwiseAbs().maxCoeff(&imax);
      imax += k + 1;
    }

    if (std::max(absakk, colmax) == 0.0) {
      ++in.zero;
      ++k;
      continue;
    }
    Eigen::Index kstep = 1;
    Eigen::Index kp = k;
    if (absakk < alpha * colmax) {
      double rowmax = 0.0;
      for (Eigen::Index j = k; j < imax; ++j) rowmax = std::max(rowmax, std::abs(a(imax, j)));
      for (Eigen::Index i = imax + 1; i < n; ++i) rowmax = std::max(rowmax, std::abs(a(i, imax)));
      if (absakk >= alpha * colmax * (colmax / rowmax)) {
        kp = k;
      } else if (std::abs(a(imax, imax)) >= alpha * rowmax) {
        kp = imax;
      } else {
        kp = imax;
        kstep = 2;
      }
    }
    const Eigen::Index kk = k + kstep - 1;
    swap_sym(k, kk, kp);
    const Eigen::Index rest = n - k - kstep;

    if (kstep == 1) {
      const double d = a(k, k);
      count(d);
      if (rest > 0 && d != 0.0) {
        RealVector x = a.col(k).tail(rest);
        a.bottomRightCorner(rest, rest).selfadjointView<Eigen::Lower>().rankUpdate(x, -1.0 / d);
      }
    } else {
      const double d11 = a(k, k), d21 = a(k + 1, k), d22 = a(k + 1, k + 1);
      const double det = d11 * d22 - d21 * d21;
      // A Bunch-Kaufman 2x2 pivot always has det < 0: one eigenvalue of each sign.
      if (det < 0.0) {
        ++in.positive;
        ++in.negative;
      } else {
        count(0.5 * (d11 + d22) + std::sqrt(0.25 * (d11 - d22) * (d11 - d22) + d21 * d21));
        count(0.5 * (d11 + d22) - std::sqrt(0.25 * (d11 - d22) * (d11 - d22) + d21 * d21));
      }
      if (rest > 0) {
        RealVector x = a.col(k).tail(rest);
        RealVector y = a.col(k + 1).tail(rest);
        // W = [x y] D^{-1}; trailing -= W [x y]^T.
        const RealVector wx = (d22 * x - d21 * y) / det;
        const RealVector wy = (d11 * y - d21 * x) / det;
        auto trail = a.bottomRightCorner(rest, rest).selfadjointView<Eigen::Lower>();
        trail.rankUpdate(wx, x, -0.5);
        trail.rankUpdate(wy, y, -0.5);
      }
    }
    k += kstep;
  }
  return in;
}

}  // namespace betagap::kernels
