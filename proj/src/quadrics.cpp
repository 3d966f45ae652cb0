#include "betagap/quadrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "betagap/ensembles.hpp"
#include "betagap/errors.hpp"

namespace betagap {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t positive_at(const HermitianMatrix& q1, const HermitianMatrix& q2, double t) {
  return inertia(std::cos(t) * q1 + std::sin(t) * q2).positive;
}

bool propagated_ok(const PencilArcs& arcs, std::span<const int> crossing) {
  const std::size_t m = arcs.arc_index.size();
  const long last = static_cast<long>(arcs.arc_index.back());
  if (last + crossing[0] != static_cast<long>(arcs.arc_index.front())) return false;
  if (m % 2 != 0) return false;
  for (std::size_t a = 0; a < m / 2; ++a)
    if (arcs.arc_index[a] + arcs.arc_index[a + m / 2] != arcs.n) return false;
  return true;
}

void check_family(std::span<const HermitianMatrix> qs) {
  for (const auto& q : qs) {
    if (q.beta() != 1) throw DomainError("quadrics are real symmetric (beta = 1)");
    if (q.n() != qs[0].n()) throw DomainError("quadrics differ in size");
  }
}

class IndexOracle {
 public:
  explicit IndexOracle(std::span<const HermitianMatrix> qs) : qs_(qs) {}

  /// i+ at w and at -w.
  std::pair<std::size_t, std::size_t> both(std::span<const double> w) const {
    const auto in = inertia(HermitianMatrix::combine(w, qs_));
    return {in.positive, in.negative};
  }

 private:
  std::span<const HermitianMatrix> qs_;
};

std::vector<double> normalized(std::vector<double> w) {
  double s = 0.0;
  for (double x : w) s += x * x;
  s = std::sqrt(s);
  for (double& x : w) x /= s;
  return w;
}

// Orthonormal basis of the complement of the unit vector d.
std::vector<std::vector<double>> tangent_basis(const std::vector<double>& d) {
  std::vector<std::vector<double>> out;
  for (std::size_t e = 0; e < d.size() && out.size() + 1 < d.size(); ++e) {
    std::vector<double> v(d.size(), 0.0);
    v[e] = 1.0;
    auto remove = [&](const std::vector<double>& u) {
      double dot = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) dot += v[i] * u[i];
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= dot * u[i];
    };
    remove(d);
    for (const auto& u : out) remove(u);
    double norm = 0.0;
    for (double x : v) norm += x * x;
    if (norm < 1e-6) continue;
    out.push_back(normalized(std::move(v)));
  }
  return out;
}

struct Best {
  std::size_t value = 0;
  std::vector<double> direction;
  bool seen = false;

  void offer(std::size_t v, const std::vector<double>& w, bool flip) {
    if (seen && v <= value) return;
    seen = true;
    value = v;
    direction = w;
    if (flip)
      for (double& x : direction) x = -x;
  }
};

void visit(const IndexOracle& oracle, const std::vector<double>& w, Best& best) {
  const auto [pos, neg] = oracle.both(w);
  best.offer(pos, w, false);
  best.offer(neg, w, true);
}

void fibonacci_grid(const IndexOracle& oracle, std::size_t count, Best& best) {
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (std::size_t i = 0; i < count; ++i) {
    const double z = (static_cast<double>(i) + 0.5) / static_cast<double>(count);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * static_cast<double>(i);
    visit(oracle, {r * std::cos(phi), r * std::sin(phi), z}, best);
  }
}

void product_grid(const IndexOracle& oracle, std::size_t k, std::size_t per_axis, Best& best) {
  // Hyperspherical angles phi_1..phi_{k-2} in (0, pi), phi_{k-1} in [0, pi):
  // antipodes are covered by visit().
  std::vector<std::size_t> idx(k - 1, 0);
  while (true) {
    std::vector<double> w(k);
    double sin_prod = 1.0;
    for (std::size_t a = 0; a + 1 < k; ++a) {
      const double frac = (static_cast<double>(idx[a]) + 0.5) / static_cast<double>(per_axis);
      const double ang = frac * std::numbers::pi;
      w[a] = sin_prod * std::cos(ang);
      sin_prod *= std::sin(ang);
    }
    w[k - 1] = sin_prod;
    visit(oracle, w, best);
    std::size_t a = 0;
    while (a < idx.size() && ++idx[a] == per_axis) idx[a++] = 0;
    if (a == idx.size()) break;
  }
}

void refine(const IndexOracle& oracle, double step, std::size_t steps, Best& best) {
  for (std::size_t s = 0; s < steps; ++s) {
    const auto d = best.direction;
    const auto tangents = tangent_basis(d);
    bool moved = false;
    for (const auto& t : tangents) {
      for (double sign : {1.0, -1.0}) {
        std::vector<double> w(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) w[i] = d[i] + sign * step * t[i];
        const std::size_t before = best.value;
        visit(oracle, normalized(std::move(w)), best);
        moved = moved || best.value > before;
      }
    }
    if (!moved) step *= 0.5;
  }
}

}  // namespace

PencilArcs pencil_arcs(const HermitianMatrix& q1, const HermitianMatrix& q2) {
  const HermitianMatrix pair[] = {q1, q2};
  check_family(pair);
  PencilArcs out;
  out.n = q1.n();
  auto c = pencil_crossings(q1, q2);
  out.merged = c.merged;
  out.singular_angles = std::move(c.angles);
  const std::size_t m = out.singular_angles.size();
  if (m == 0) {
    out.arc_index = {positive_at(q1, q2, 0.0)};
    out.mu = out.nu = out.arc_index[0];
    return out;
  }
  auto midpoint = [&](std::size_t a) {
    const double lo = out.singular_angles[a];
    const double hi = a + 1 < m ? out.singular_angles[a + 1] : out.singular_angles[0] + kTwoPi;
    return 0.5 * (lo + hi);
  };
  out.arc_index.resize(m);
  long idx = static_cast<long>(positive_at(q1, q2, midpoint(0)));
  bool ok = true;
  out.arc_index[0] = static_cast<std::size_t>(idx);
  for (std::size_t a = 1; a < m; ++a) {
    idx += c.crossing[a];
    if (idx < 0 || idx > static_cast<long>(out.n)) ok = false;
    out.arc_index[a] = static_cast<std::size_t>(std::clamp(idx, 0L, static_cast<long>(out.n)));
  }
  if (!ok || !propagated_ok(out, c.crossing)) {
    out.recomputed = true;
    for (std::size_t a = 0; a < m; ++a) out.arc_index[a] = positive_at(q1, q2, midpoint(a));
  }
  const auto [lo, hi] = std::minmax_element(out.arc_index.begin(), out.arc_index.end());
  out.mu = *hi;
  out.nu = *lo;
  return out;
}

std::size_t components_at_least(const PencilArcs& arcs, std::size_t j) {
  const auto& idx = arcs.arc_index;
  const std::size_t m = idx.size();
  std::size_t inside = 0, starts = 0;
  for (std::size_t a = 0; a < m; ++a) {
    const bool in = idx[a] >= j;
    const bool prev = idx[(a + m - 1) % m] >= j;
    inside += in;
    starts += in && !prev;
  }
  if (inside == 0) return 0;
  return inside == m ? 1 : starts;
}

TableE table_E_k2(const PencilArcs& arcs) {
  TableE t;
  t.k = 2;
  t.n = arcs.n;
  t.entries.assign(3, std::vector<std::size_t>(arcs.n, 0));
  for (std::size_t j = 0; j < arcs.n; ++j) {
    t.entries[0][j] = j >= arcs.mu ? 1 : 0;
    t.entries[2][j] = j < arcs.nu ? 1 : 0;
    const std::size_t c = components_at_least(arcs, j + 1);
    t.entries[1][j] = c > 0 ? c - 1 : 0;
  }
  return t;
}

std::size_t betti_bound(const TableE& table, std::size_t i) {
  if (i >= table.n) throw DomainError("Betti index out of range");
  std::size_t sum = 0;
  for (std::size_t t = 0; t <= table.k && t + i + 1 <= table.n; ++t) sum += table.at(t, table.n - 1 - i - t);
  return sum;
}

std::size_t total_betti(const TableE& table) {
  std::size_t sum = 0;
  for (const auto& col : table.entries)
    for (std::size_t e : col) sum += e;
  return sum;
}

long euler_bound(const TableE& table) {
  long chi = 0;
  for (std::size_t i = 0; i < table.n; ++i) {
    const auto b = static_cast<long>(betti_bound(table, i));
    chi += i % 2 == 0 ? b : -b;
  }
  return chi;
}

std::optional<std::size_t> small_betti_value(std::size_t mu, std::size_t k, std::size_t n, std::size_t i) {
  const long bound = static_cast<long>(n) - static_cast<long>(mu) - static_cast<long>(k) - 2;
  if (static_cast<long>(i) < bound) return 1;
  return std::nullopt;
}

MuSearch mu_max_sphere(std::span<const HermitianMatrix> matrices, const MuGrid& grid) {
  const std::size_t k = matrices.size();
  if (k < 2) throw DomainError("need at least two quadrics");
  check_family(matrices);
  const std::size_t n = matrices[0].n();
  MuSearch out;
  if (k == 2) {
    const auto arcs = pencil_arcs(matrices[0], matrices[1]);
    const auto best = std::max_element(arcs.arc_index.begin(), arcs.arc_index.end()) - arcs.arc_index.begin();
    const auto a = static_cast<std::size_t>(best);
    const std::size_t m = arcs.singular_angles.size();
    double t = 0.0;
    if (m > 0) {
      const double hi = a + 1 < m ? arcs.singular_angles[a + 1] : arcs.singular_angles[0] + kTwoPi;
      t = 0.5 * (arcs.singular_angles[a] + hi);
    }
    out.mu = out.grid_mu = arcs.mu;
    out.nu = arcs.nu;
    out.direction = {std::cos(t), std::sin(t)};
    return out;
  }
  if (grid.directions == 0 || grid.per_axis == 0) throw DomainError("empty search grid");
  const IndexOracle oracle(matrices);
  Best best;
  for (std::size_t a = 0; a < k; ++a) {
    std::vector<double> e(k, 0.0);
    e[a] = 1.0;
    visit(oracle, e, best);
  }
  double step;
  if (k == 3) {
    fibonacci_grid(oracle, grid.directions, best);
    step = std::sqrt(2.0 * std::numbers::pi / static_cast<double>(grid.directions));
  } else {
    product_grid(oracle, k, grid.per_axis, best);
    step = std::numbers::pi / static_cast<double>(grid.per_axis);
  }
  out.grid_mu = best.value;
  refine(oracle, step, grid.refine_steps, best);
  out.mu = best.value;
  out.nu = n >= out.mu ? n - out.mu : 0;
  out.direction = best.direction;
  return out;
}

PencilArcs sample_pencil(std::size_t n, Stream& stream) {
  const EnsembleSpec spec{1.0, n, 0};
  const auto q1 = sample_matrix(spec, stream);
  const auto q2 = sample_matrix(spec, stream);
  return pencil_arcs(q1, q2);
}

namespace {

template <class Stat>
Estimate pencil_mc(std::size_t n, const RunConfig& cfg, Stat stat) {
  if (cfg.trials == 0) throw DomainError("trials must be positive");
  if (n == 0) throw DomainError("n must be positive");
  WallTimer timer;
  const auto m = run_trials<Moments>(cfg, [&](Moments& acc, std::uint64_t t) {
    Stream st = Stream::for_trial(cfg.seed, t);
    acc.add(stat(sample_pencil(n, st)));
  });
  return to_estimate(m, cfg, timer.seconds());
}

}  // namespace

Estimate expected_betti_mc(std::size_t n, const RunConfig& cfg) {
  return pencil_mc(n, cfg, [](const PencilArcs& a) { return static_cast<double>(total_betti(table_E_k2(a))); });
}

Estimate expected_card_mc(std::size_t n, const RunConfig& cfg) {
  return pencil_mc(n, cfg, [](const PencilArcs& a) { return static_cast<double>(a.card()); });
}

Estimate expected_mu_mc(std::size_t k, std::size_t n, const RunConfig& cfg, const MuGrid& grid) {
  if (k == 2) return pencil_mc(n, cfg, [](const PencilArcs& a) { return static_cast<double>(a.mu); });
  if (cfg.trials == 0) throw DomainError("trials must be positive");
  const EnsembleSpec spec{1.0, n, 0};
  spec.validate(true);
  WallTimer timer;
  const auto m = run_trials<Moments>(cfg, [&](Moments& acc, std::uint64_t t) {
    Stream st = Stream::for_trial(cfg.seed, t);
    std::vector<HermitianMatrix> qs;
    for (std::size_t j = 0; j < k; ++j) qs.push_back(sample_matrix(spec, st));
    acc.add(static_cast<double>(mu_max_sphere(qs, grid).mu));
  });
  return to_estimate(m, cfg, timer.seconds());
}

}  // namespace betagap
