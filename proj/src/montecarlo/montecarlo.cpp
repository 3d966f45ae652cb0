#include "betagap/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "betagap/errors.hpp"
#include "betagap/exact.hpp"

namespace betagap {
namespace {

struct Counter {
  std::uint64_t hits = 0;
  std::uint64_t total = 0;
  void merge(const Counter& o) noexcept {
    hits += o.hits;
    total += o.total;
  }
};

struct SlopeAcc {
  Moments z;
  std::vector<std::uint64_t> below;
  void merge(const SlopeAcc& o) {
    z.merge(o.z);
    if (below.empty()) below.assign(o.below.size(), 0);
    for (std::size_t g = 0; g < o.below.size(); ++g) below[g] += o.below[g];
  }
};

void require_trials(const RunConfig& cfg) {
  if (cfg.trials == 0) throw DomainError("trials must be positive");
}

Estimate binomial(const Counter& c, const RunConfig& cfg, double wall) {
  const double t = static_cast<double>(c.total);
  const double p = static_cast<double>(c.hits) / t;
  return {p, std::sqrt(p * (1.0 - p) / t), cfg.trials, cfg.seed, wall};
}

Estimate gap_curve_probability(const EnsembleSpec& spec, double eps, const RunConfig& cfg, bool cone) {
  require_trials(cfg);
  spec.validate(false);
  if (!(eps >= 0.0)) throw DomainError("eps must be nonnegative");
  WallTimer timer;
  const auto c = run_trials<Counter>(cfg, [&](Counter& acc, std::uint64_t t) {
    Stream st = Stream::for_trial(cfg.seed, t);
    const Spectrum s = sample_spectrum(spec, st);
    const double threshold = cone ? eps * s.norm() : eps;
    acc.hits += least_singular(s) >= threshold ? 1 : 0;
    ++acc.total;
  });
  return binomial(c, cfg, timer.seconds());
}

Estimate abs_det_pow(const EnsembleSpec& spec, double power, const RunConfig& cfg, bool serial) {
  require_trials(cfg);
  spec.validate(false);
  if (!(power > 0.0)) throw DomainError("power must be positive");
  WallTimer timer;
  auto fn = [&](Moments& acc, std::uint64_t t) {
    Stream st = Stream::for_trial(cfg.seed, t);
    const Spectrum s = sample_spectrum(spec, st);
    acc.add(std::exp(power * s.log_abs_det()));
  };
  const Moments m = serial ? run_trials_serial<Moments>(cfg, fn) : run_trials<Moments>(cfg, fn);
  return to_estimate(m, cfg, timer.seconds());
}

}  // namespace

Estimate to_estimate(const Moments& m, const RunConfig& cfg, double wall_seconds) {
  return {m.mean(), m.std_err(), cfg.trials, cfg.seed, wall_seconds};
}

Spectrum sample_spectrum(const EnsembleSpec& spec, Stream& stream) {
  if (spec.beta == 1.0 || spec.beta == 2.0 || spec.beta == 4.0) return eigenvalues(sample_matrix(spec, stream));
  return sample_spectrum_tridiagonal(spec, stream);
}

Estimate gap_probability(const EnsembleSpec& spec, double eps, const RunConfig& cfg) {
  return gap_curve_probability(spec, eps, cfg, false);
}

Estimate cone_gap_probability(const EnsembleSpec& spec, double eps, const RunConfig& cfg) {
  return gap_curve_probability(spec, eps, cfg, true);
}

std::vector<double> default_eps_grid(const EnsembleSpec& spec, GapCurve curve, std::uint64_t trials) {
  spec.validate(false);
  if (trials == 0) throw DomainError("trials must be positive");
  double s = spec.beta == 1.0 || spec.beta == 2.0 || spec.beta == 4.0
                 ? -gap_derivative_zero(static_cast<int>(spec.beta), spec.n).value()
                 : gap_derivative_asymptotic(spec.n) * std::sqrt(spec.beta);
  if (curve == GapCurve::cone) {
    const double nd = spec.n + spec.n * (spec.n - 1.0) * spec.beta / 2.0;
    s *= (nd >= 2.0 ? cone_cylinder_factor(nd).value() : 1.0) / std::sqrt(spec.beta);
  }
  const double a = 10.0 / std::sqrt(static_cast<double>(trials)) / s;
  return {a, 2.0 * a, 4.0 * a};
}

SlopeEstimate derivative_at_zero(const EnsembleSpec& spec, GapCurve curve, std::span<const double> eps_grid,
                                 const RunConfig& cfg) {
  require_trials(cfg);
  spec.validate(false);
  if (eps_grid.empty() || !(eps_grid.front() > 0.0) || !std::is_sorted(eps_grid.begin(), eps_grid.end()) ||
      std::adjacent_find(eps_grid.begin(), eps_grid.end()) != eps_grid.end())
    throw DomainError("eps grid must be ascending, distinct and positive");
  const std::size_t g = eps_grid.size();
  double eps_sum = 0.0;
  for (double e : eps_grid) eps_sum += e;

  WallTimer timer;
  const auto acc = run_trials<SlopeAcc>(cfg, [&](SlopeAcc& a, std::uint64_t t) {
    if (a.below.empty()) a.below.assign(g, 0);
    Stream st = Stream::for_trial(cfg.seed, t);
    const Spectrum s = sample_spectrum(spec, st);
    const double sigma = least_singular(s);
    const double scale = curve == GapCurve::cone ? s.norm() : 1.0;
    std::uint64_t k = 0;
    for (std::size_t i = 0; i < g; ++i) {
      if (sigma < eps_grid[i] * scale) {
        ++a.below[i];
        ++k;
      }
    }
    a.z.add(static_cast<double>(k) / eps_sum);
  });

  SlopeEstimate out;
  out.slope = to_estimate(acc.z, cfg, timer.seconds());
  out.eps_grid.assign(eps_grid.begin(), eps_grid.end());
  const double total = static_cast<double>(cfg.trials);
  double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0, e3 = 0;
  for (std::size_t i = 0; i < g; ++i) {
    const double e = eps_grid[i];
    const double y = static_cast<double>(acc.below[i]) / total;
    out.one_minus_f.push_back(y);
    const double w = 1.0 / e;
    a11 += w * e * e;
    a12 += w * std::pow(e, 4);
    a22 += w * std::pow(e, 6);
    b1 += w * e * y;
    b2 += w * std::pow(e, 3) * y;
    e3 += std::pow(e, 3);
  }
  const double det = a11 * a22 - a12 * a12;
  if (g >= 2 && det > 0.0) {
    const double c = (a11 * b2 - a12 * b1) / det;
    out.bias = std::abs(c) * e3 / eps_sum;
  }
  return out;
}

Estimate expected_abs_det_pow(const EnsembleSpec& spec, double power, const RunConfig& cfg) {
  return abs_det_pow(spec, power, cfg, false);
}

Estimate expected_abs_det_pow_serial(const EnsembleSpec& spec, double power, const RunConfig& cfg) {
  return abs_det_pow(spec, power, cfg, true);
}

}  // namespace betagap
