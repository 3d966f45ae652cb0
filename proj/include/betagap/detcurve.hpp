#pragma once

// Real zeros of t -> det(A_0 f_0(t) + ... + A_k f_k(t)) and the length
// constant alpha_1 of the projected coefficient curve.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "betagap/linalg.hpp"
#include "betagap/montecarlo.hpp"

namespace betagap {

enum class CurveDomain { interval, whole_line };

/// gamma(t) = (f_0(t), ..., f_k(t)) with its derivative. The evaluator may
/// return lambda(t) * (gamma, gamma') for any lambda(t) > 0: only the
/// direction of gamma and the part of gamma' orthogonal to it matter.
class CurveBasis {
 public:
  using Eval = std::function<void(double t, std::span<double> value, std::span<double> deriv)>;

  CurveBasis(std::size_t size, Eval eval, CurveDomain domain, double lo = 0.0, double hi = 0.0);

  /// (1, t, ..., t^degree) on the whole line.
  static CurveBasis monomials(std::size_t degree);
  /// (cos t, sin t) on [0, 2 pi).
  static CurveBasis circle();

  std::size_t size() const noexcept { return size_; }
  CurveDomain domain() const noexcept { return domain_; }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  std::size_t panels() const noexcept { return panels_; }
  void set_panels(std::size_t p);
  /// Set for monomial bases; enables the companion root finder.
  std::optional<std::size_t> polynomial_degree() const noexcept { return degree_; }

  void eval(double t, std::span<double> value, std::span<double> deriv) const { eval_(t, value, deriv); }

  /// Scan parameter range: [lo, hi] or u in (-pi/2, pi/2) with t = tan u.
  double scan_lo() const noexcept;
  double scan_hi() const noexcept;
  double to_t(double u) const noexcept;

 private:
  std::size_t size_;
  Eval eval_;
  CurveDomain domain_;
  double lo_, hi_;
  std::size_t panels_ = 4096;
  std::optional<std::size_t> degree_;
};

/// ||d/dt (gamma / ||gamma||)||. Throws DomainError where gamma vanishes.
double projected_speed(const CurveBasis& basis, double t);

/// (1/pi) * length of gamma/||gamma|| on the sphere.
double alpha1(const CurveBasis& basis);

enum class RootMethod { companion, sign_scan };

struct RootCount {
  std::size_t count = 0;
  std::vector<double> roots;
  RootMethod method = RootMethod::sign_scan;
  /// Sign scan only sees odd-multiplicity crossings; set when a bracket
  /// could not be resolved cleanly.
  bool flagged = false;
};

/// Real t in the domain with singular sum_j f_j(t) A_j.
RootCount count_roots(const CurveBasis& basis, std::span<const HermitianMatrix> matrices,
                      std::optional<RootMethod> method = std::nullopt);

/// Monte Carlo mean of the root count with A_j drawn from G_{beta,n}.
Estimate alpha_ratio_mc(const CurveBasis& basis, const EnsembleSpec& spec, const RunConfig& cfg);

}  // namespace betagap
