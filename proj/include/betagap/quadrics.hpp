#pragma once

// Index function of a family of real quadrics on the sphere of directions and
// the table whose diagonals bound the Betti numbers of their intersection.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "betagap/linalg.hpp"
#include "betagap/montecarlo.hpp"

namespace betagap {

/// Index function of the pencil cos t Q1 + sin t Q2 on the circle.
struct PencilArcs {
  std::size_t n = 0;
  /// Ascending in [0, 2 pi).
  std::vector<double> singular_angles;
  /// arc_index[a] is i+ on the open arc from singular_angles[a] to the next
  /// angle (cyclically). With no singular angles there is one arc, the circle.
  std::vector<std::size_t> arc_index;
  std::size_t mu = 0;
  std::size_t nu = 0;
  /// Set when propagated indices failed the antipodal check and every arc
  /// was re-evaluated at its midpoint.
  bool recomputed = false;
  bool merged = false;

  std::size_t card() const noexcept { return singular_angles.size(); }
};

/// Real symmetric pencils only. DegeneratePencilError propagates.
PencilArcs pencil_arcs(const HermitianMatrix& q1, const HermitianMatrix& q2);

/// Number of connected components of {arcs with index >= j} on the circle.
std::size_t components_at_least(const PencilArcs& arcs, std::size_t j);

/// entries[t][j] for t in [0, k], j in [0, n - 1].
struct TableE {
  std::size_t k = 0;
  std::size_t n = 0;
  std::vector<std::vector<std::size_t>> entries;

  std::size_t at(std::size_t t, std::size_t j) const { return entries.at(t).at(j); }
};

TableE table_E_k2(const PencilArcs& arcs);

/// Sum of e_{t, n-1-i-t} over t. Throws DomainError unless i < n.
std::size_t betti_bound(const TableE& table, std::size_t i);
std::size_t total_betti(const TableE& table);
/// sum_i (-1)^i betti_bound(table, i).
long euler_bound(const TableE& table);

/// 1 when i < n - mu - k - 2, otherwise unknown.
std::optional<std::size_t> small_betti_value(std::size_t mu, std::size_t k, std::size_t n, std::size_t i);

struct MuSearch {
  std::size_t mu = 0;
  std::size_t nu = 0;
  /// Largest index seen on the grid alone (before refinement).
  std::size_t grid_mu = 0;
  std::vector<double> direction;
};

struct MuGrid {
  /// Fibonacci directions on the half sphere for k = 3 (coordinate axes are added).
  std::size_t directions = 10'000;
  /// Points per hyperspherical angle for k >= 4.
  std::size_t per_axis = 12;
  std::size_t refine_steps = 20;
};

/// max i+ over the unit sphere of span(Q_1..Q_k). Exact for k = 2; for k >= 3 a
/// grid search with local refinement, so mu is a certified lower bound.
MuSearch mu_max_sphere(std::span<const HermitianMatrix> matrices, const MuGrid& grid = {});

/// Two independent GOE(n) quadrics.
PencilArcs sample_pencil(std::size_t n, Stream& stream);

/// Means over random GOE pencils of total_betti, card and mu.
Estimate expected_betti_mc(std::size_t n, const RunConfig& cfg);
Estimate expected_card_mc(std::size_t n, const RunConfig& cfg);
Estimate expected_mu_mc(std::size_t k, std::size_t n, const RunConfig& cfg, const MuGrid& grid = {});

}  // namespace betagap
