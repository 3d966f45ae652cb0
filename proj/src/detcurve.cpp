#include "betagap/detcurve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "betagap/errors.hpp"

namespace betagap {
namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;
// The whole-line scan stops this far short of u = +-pi/2 (|t| < 1e9).
constexpr double kEdge = 1e-9;
constexpr int kBisections = 60;
// Monomial tails below this are flushed to zero rather than left subnormal.
constexpr double kTiny = 1e-290;
constexpr int kMaxPanelDepth = 20;
constexpr double kPanelTol = 1e-10;

int det_sign(const HermitianMatrix& m) {
  if (m.beta() == 1) {
    Eigen::PartialPivLU<RealMatrix> lu(m.real_dense());
    int s = static_cast<int>(lu.permutationP().determinant());
    for (Eigen::Index i = 0; i < lu.matrixLU().rows(); ++i) {
      const double u = lu.matrixLU()(i, i);
      if (u == 0.0) return 0;
      if (u < 0.0) s = -s;
    }
    return s;
  }
  const Spectrum s = eigenvalues(m);
  int sign = 1;
  for (double v : s.values()) {
    if (v == 0.0) return 0;
    if (v < 0.0) sign = -sign;
  }
  return sign;
}

class Combiner {
 public:
  Combiner(const CurveBasis& basis, std::span<const HermitianMatrix> matrices)
      : basis_(basis), matrices_(matrices), value_(basis.size()), deriv_(basis.size()) {}

  HermitianMatrix at(double t) {
    basis_.eval(t, value_, deriv_);
    double norm = 0.0;
    for (double v : value_) norm += v * v;
    norm = std::sqrt(norm);
    if (!(norm > 0.0) || !std::isfinite(norm)) throw DomainError("basis curve vanishes or is not finite");
    for (double& v : value_) v /= norm;
    return HermitianMatrix::combine(value_, matrices_);
  }

 private:
  const CurveBasis& basis_;
  std::span<const HermitianMatrix> matrices_;
  std::vector<double> value_, deriv_;
};

RootCount companion_roots(std::size_t degree, std::span<const HermitianMatrix> a) {
  const auto n = static_cast<Eigen::Index>(a[0].n());
  const auto k = static_cast<Eigen::Index>(degree);
  Eigen::PartialPivLU<RealMatrix> lead(a[degree].real_dense());
  RealMatrix c = RealMatrix::Zero(n * k, n * k);
  for (Eigen::Index j = 0; j < k; ++j)
    c.block(0, (k - 1 - j) * n, n, n) = -lead.solve(a[static_cast<std::size_t>(j)].real_dense());
  for (Eigen::Index b = 1; b < k; ++b) c.block(b * n, (b - 1) * n, n, n).setIdentity();
  Eigen::EigenSolver<RealMatrix> es(c, false);
  if (es.info() != Eigen::Success) throw NumericalError("companion eigenproblem did not converge");
  RootCount out;
  out.method = RootMethod::companion;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i).imag() == 0.0) out.roots.push_back(es.eigenvalues()(i).real());
  std::sort(out.roots.begin(), out.roots.end());
  out.count = out.roots.size();
  return out;
}

RootCount scan_roots(const CurveBasis& basis, std::span<const HermitianMatrix> a) {
  Combiner comb(basis, a);
  auto sign_at = [&](double u) { return det_sign(comb.at(basis.to_t(u))); };
  const double lo = basis.scan_lo(), hi = basis.scan_hi();
  const std::size_t p = basis.panels();
  const double h = (hi - lo) / static_cast<double>(p);
  RootCount out;
  out.method = RootMethod::sign_scan;
  int prev = sign_at(lo);
  for (std::size_t i = 1; i <= p; ++i) {
    const double u1 = i == p ? hi : lo + static_cast<double>(i) * h;
    const int cur = sign_at(u1);
    if (cur == 0) {
      out.flagged = true;
      out.roots.push_back(basis.to_t(u1));
      prev = cur;
      continue;
    }
    if (prev != 0 && cur != prev) {
      double a0 = u1 - h, b0 = u1;
      for (int it = 0; it < kBisections; ++it) {
        const double mid = 0.5 * (a0 + b0);
        const int sm = sign_at(mid);
        if (sm == 0) {
          a0 = b0 = mid;
          break;
        }
        (sm == prev ? a0 : b0) = mid;
      }
      out.roots.push_back(basis.to_t(0.5 * (a0 + b0)));
    }
    prev = cur;
  }
  out.count = out.roots.size();
  return out;
}

// Bisection around a fixed Kronrod rule. Boost reports the error estimate in
// the unscaled [-1, 1] frame.
template <class F>
double adaptive_panel(const F& f, double a, double b, int depth) {
  using boost::math::quadrature::gauss_kronrod;
  double err = 0.0;
  const double v = gauss_kronrod<double, 31>::integrate(f, a, b, 0, 0.0, &err);
  const double scaled = 0.5 * (b - a) * err;
  const double tol = std::max(kPanelTol, 64.0 * std::numeric_limits<double>::epsilon());
  if (depth >= kMaxPanelDepth || scaled <= tol * std::abs(v)) return v;
  const double mid = 0.5 * (a + b);
  return adaptive_panel(f, a, mid, depth + 1) + adaptive_panel(f, mid, b, depth + 1);
}

}  // namespace

CurveBasis::CurveBasis(std::size_t size, Eval eval, CurveDomain domain, double lo, double hi)
    : size_(size), eval_(std::move(eval)), domain_(domain), lo_(lo), hi_(hi) {
  if (size < 2) throw DomainError("a curve basis needs at least two functions");
  if (domain == CurveDomain::interval && !(hi > lo)) throw DomainError("empty parameter interval");
}

CurveBasis CurveBasis::monomials(std::size_t degree) {
  auto eval = [degree](double t, std::span<double> v, std::span<double> d) {
    if (std::abs(t) <= 1.0) {
      double p = 1.0;
      for (std::size_t j = 0; j <= degree; ++j) {
        d[j] = static_cast<double>(j) * (j > 0 ? v[j - 1] : 0.0);
        v[j] = p;
        p = std::abs(p) < kTiny ? 0.0 : p * t;
      }
      return;
    }
    // Scaled by |t|^{-degree}: v_j = t^j / |t|^degree.
    v[degree] = (degree % 2 == 0 || t > 0.0) ? 1.0 : -1.0;
    for (std::size_t j = degree; j-- > 0;) v[j] = std::abs(v[j + 1]) < kTiny ? 0.0 : v[j + 1] / t;
    for (std::size_t j = 0; j <= degree; ++j) d[j] = static_cast<double>(j) * v[j] / t;
  };
  CurveBasis b(degree + 1, eval, CurveDomain::whole_line);
  b.degree_ = degree;
  return b;
}

CurveBasis CurveBasis::circle() {
  auto eval = [](double t, std::span<double> v, std::span<double> d) {
    v[0] = std::cos(t);
    v[1] = std::sin(t);
    d[0] = -v[1];
    d[1] = v[0];
  };
  return CurveBasis(2, eval, CurveDomain::interval, 0.0, 2.0 * std::numbers::pi);
}

void CurveBasis::set_panels(std::size_t p) {
  if (p == 0) throw DomainError("panel count must be positive");
  panels_ = p;
}

double CurveBasis::scan_lo() const noexcept { return domain_ == CurveDomain::whole_line ? -kHalfPi + kEdge : lo_; }
double CurveBasis::scan_hi() const noexcept { return domain_ == CurveDomain::whole_line ? kHalfPi - kEdge : hi_; }
double CurveBasis::to_t(double u) const noexcept { return domain_ == CurveDomain::whole_line ? std::tan(u) : u; }

double projected_speed(const CurveBasis& basis, double t) {
  std::vector<double> v(basis.size()), d(basis.size());
  basis.eval(t, v, d);
  long double gg = 0.0L, gd = 0.0L;
  for (std::size_t j = 0; j < v.size(); ++j) {
    gg += static_cast<long double>(v[j]) * v[j];
    gd += static_cast<long double>(v[j]) * d[j];
  }
  if (!(gg > 0.0L)) throw DomainError("basis curve passes through zero");
  // Component of gamma' orthogonal to gamma, formed explicitly.
  const long double c = gd / gg;
  long double perp = 0.0L;
  for (std::size_t j = 0; j < v.size(); ++j) {
    const long double w = d[j] - c * v[j];
    perp += w * w;
  }
  return static_cast<double>(std::sqrt(perp / gg));
}

double alpha1(const CurveBasis& basis) {
  const bool line = basis.domain() == CurveDomain::whole_line;
  auto f = [&](double u) {
    if (!line) return projected_speed(basis, u);
    const double t = std::tan(u);
    return projected_speed(basis, t) * (1.0 + t * t);
  };
  const double lo = line ? -kHalfPi : basis.lo();
  const double hi = line ? kHalfPi : basis.hi();
  const std::size_t p = basis.panels();
  const double h = (hi - lo) / static_cast<double>(p);
  long double total = 0.0L;
  for (std::size_t i = 0; i < p; ++i) {
    const double a = lo + static_cast<double>(i) * h;
    const double b = i + 1 == p ? hi : a + h;
    total += adaptive_panel(f, a, b, 0);
  }
  return static_cast<double>(total / std::numbers::pi_v<long double>);
}

RootCount count_roots(const CurveBasis& basis, std::span<const HermitianMatrix> matrices,
                      std::optional<RootMethod> method) {
  if (matrices.size() != basis.size()) throw DomainError("need one matrix per basis function");
  for (const auto& m : matrices)
    if (m.beta() != matrices[0].beta() || m.n() != matrices[0].n())
      throw DomainError("matrices differ in beta or size");

  const auto degree = basis.polynomial_degree();
  const bool companion_ok = degree && matrices[0].beta() == 1;
  const RootMethod chosen = method.value_or(companion_ok ? RootMethod::companion : RootMethod::sign_scan);
  if (chosen == RootMethod::companion) {
    if (!companion_ok) throw DomainError("companion method needs a real polynomial basis");
    Eigen::PartialPivLU<RealMatrix> lead(matrices[*degree].real_dense());
    if (lead.rcond() > 1e-13) return companion_roots(*degree, matrices);
  }
  {
    Combiner comb(basis, matrices);
    const double lo = basis.scan_lo(), hi = basis.scan_hi();
    bool singular = true;
    for (double f : {0.1234567, 0.5012345, 0.8765432})
      if (det_sign(comb.at(basis.to_t(lo + f * (hi - lo)))) != 0) singular = false;
    if (singular) throw NumericalError("combination is singular along the whole curve");
  }
  const auto out = scan_roots(basis, matrices);
  return out;
}

Estimate alpha_ratio_mc(const CurveBasis& basis, const EnsembleSpec& spec, const RunConfig& cfg) {
  if (cfg.trials == 0) throw DomainError("trials must be positive");
  spec.validate(true);
  WallTimer timer;
  const auto m = run_trials<Moments>(cfg, [&](Moments& acc, std::uint64_t t) {
    Stream st = Stream::for_trial(cfg.seed, t);
    std::vector<HermitianMatrix> a;
    a.reserve(basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j) a.push_back(sample_matrix(spec, st));
    acc.add(static_cast<double>(count_roots(basis, a).count));
  });
  return to_estimate(m, cfg, timer.seconds());
}

}  // namespace betagap
