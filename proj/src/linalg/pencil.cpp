#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "betagap/errors.hpp"
#include "betagap/linalg.hpp"

namespace betagap {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMergeTol = 1e-8;
constexpr double kReferenceAngles[] = {0.3, 1.1, 2.0, 2.7, 0.7, 1.6, 2.4};

double wrap(double t) {
  t = std::fmod(t, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  return t >= kTwoPi ? 0.0 : t;
}

template <class Matrix>
struct Reference {
  double phi = 0.0;
  Matrix ref, orth;
  Eigen::PartialPivLU<Matrix> lu;
};

// Picks the reference angle whose matrix is best conditioned.
template <class Matrix>
Reference<Matrix> choose_reference(const Matrix& a, const Matrix& b) {
  Reference<Matrix> best;
  double best_rcond = -1.0;
  for (double phi : kReferenceAngles) {
    Matrix ref = std::cos(phi) * a + std::sin(phi) * b;
    Eigen::PartialPivLU<Matrix> lu(ref);
    const bool zero_pivot = (lu.matrixLU().diagonal().array() == 0.0).any();
    const double rc = zero_pivot ? 0.0 : lu.rcond();
    if (rc > best_rcond) {
      best_rcond = rc;
      best.phi = phi;
      best.ref = std::move(ref);
      best.lu = std::move(lu);
    }
    if (rc > 1e-3) break;
  }
  if (!(best_rcond > 1e-14)) throw DegeneratePencilError("pencil is singular at every reference angle");
  best.orth = -std::sin(best.phi) * a + std::cos(best.phi) * b;
  return best;
}

struct Candidate {
  double theta;
  int crossing;
};

// Converts an eigenpair (rho, v) of ref^{-1} orth into the two antipodal roots,
// with a Rayleigh-quotient Newton step and the sign of the index change.
template <class Matrix, class Vector>
void push_roots(const Reference<Matrix>& r, double rho, const Vector& v, std::vector<Candidate>& out) {
  const double vrv = std::real(v.dot(r.ref * v));
  const double vov = std::real(v.dot(r.orth * v));
  const double psi0 = std::atan2(1.0, -rho);
  for (double psi : {psi0, psi0 + std::numbers::pi}) {
    const double c = std::cos(psi), s = std::sin(psi);
    const double lam = c * vrv + s * vov;
    const double dlam = -s * vrv + c * vov;
    double step = dlam != 0.0 ? lam / dlam : 0.0;
    if (!(std::abs(step) < 1e-6)) step = 0.0;
    const int sgn = vrv > 0.0 ? 1 : (vrv < 0.0 ? -1 : 0);
    out.push_back({wrap(r.phi + psi - step), s > 0.0 ? -sgn : sgn});
  }
}

PencilCrossings assemble(std::vector<Candidate> cands, std::size_t multiplicity) {
  std::sort(cands.begin(), cands.end(), [](auto& x, auto& y) { return x.theta < y.theta; });
  PencilCrossings out;
  // Group roots closer than the merge tolerance, including across 0 = 2 pi.
  std::vector<std::vector<Candidate>> groups;
  for (const auto& c : cands) {
    if (!groups.empty() && c.theta - groups.back().back().theta <= kMergeTol) groups.back().push_back(c);
    else groups.push_back({c});
  }
  if (groups.size() > 1 && groups.front().front().theta + kTwoPi - groups.back().back().theta <= kMergeTol) {
    for (auto& c : groups.back()) c.theta -= kTwoPi;
    groups.front().insert(groups.front().begin(), groups.back().begin(), groups.back().end());
    groups.pop_back();
  }
  for (const auto& g : groups) {
    double sum = 0.0;
    int crossing = 0;
    for (const auto& c : g) {
      sum += c.theta;
      crossing += c.crossing;
    }
    if (g.size() > multiplicity) out.merged = true;
    out.angles.push_back(wrap(sum / static_cast<double>(g.size())));
    out.crossing.push_back(crossing / static_cast<int>(multiplicity));
  }
  // Re-sort: a group straddling 0 may have wrapped to the end.
  std::vector<std::size_t> idx(out.angles.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](auto x, auto y) { return out.angles[x] < out.angles[y]; });
  PencilCrossings sorted{{}, {}, out.merged};
  for (auto i : idx) {
    sorted.angles.push_back(out.angles[i]);
    sorted.crossing.push_back(out.crossing[i]);
  }
  return sorted;
}

PencilCrossings real_pencil(const RealMatrix& a, const RealMatrix& b) {
  const auto r = choose_reference(a, b);
  const RealMatrix m = r.lu.solve(r.orth);
  Eigen::EigenSolver<RealMatrix> es(m, true);
  if (es.info() != Eigen::Success) throw NumericalError("pencil eigenproblem did not converge");
  std::vector<Candidate> cands;
  const auto& vals = es.eigenvalues();
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    if (vals(i).imag() != 0.0) continue;
    const RealVector v = es.eigenvectors().col(i).real();
    push_roots(r, vals(i).real(), v, cands);
  }
  return assemble(std::move(cands), 1);
}

PencilCrossings complex_pencil(const ComplexMatrix& a, const ComplexMatrix& b, std::size_t multiplicity) {
  const auto r = choose_reference(a, b);
  const ComplexMatrix m = r.lu.solve(r.orth);
  Eigen::ComplexEigenSolver<ComplexMatrix> es(m, true);
  if (es.info() != Eigen::Success) throw NumericalError("pencil eigenproblem did not converge");
  std::vector<Candidate> cands;
  const auto& vals = es.eigenvalues();
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    const auto rho = vals(i);
    if (std::abs(rho.imag()) > 1e-8 * std::max(1.0, std::abs(rho))) continue;
    const ComplexVector v = es.eigenvectors().col(i);
    push_roots(r, rho.real(), v, cands);
  }
  if (cands.size() % (2 * multiplicity) != 0) throw NumericalError("unpaired Kramers roots in pencil");
  // Kramers copies are merged by the grouping step; it only flags excess.
  return assemble(std::move(cands), multiplicity);
}

}  // namespace

PencilCrossings pencil_crossings(const HermitianMatrix& q1, const HermitianMatrix& q2) {
  if (q1.beta() != q2.beta() || q1.n() != q2.n()) throw DomainError("pencil matrices differ in beta or size");
  if (!q1.all_finite() || !q2.all_finite()) throw DomainError("matrix has non-finite entries");
  if (q1.beta() == 1) return real_pencil(q1.real_dense(), q2.real_dense());
  return complex_pencil(q1.complex_dense(), q2.complex_dense(), q1.beta() == 4 ? 2 : 1);
}

PencilRoots pencil_real_roots(const HermitianMatrix& q1, const HermitianMatrix& q2) {
  auto c = pencil_crossings(q1, q2);
  return {std::move(c.angles), c.merged};
}

}  // namespace betagap
