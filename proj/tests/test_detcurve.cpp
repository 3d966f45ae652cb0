#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "betagap/detcurve.hpp"
#include "betagap/ensembles.hpp"
#include "betagap/errors.hpp"
#include "generators.hpp"

using namespace betagap;

namespace {

CurveBasis reparametrized(const CurveBasis& base, double speed, double scale) {
  auto eval = [base, speed, scale](double t, std::span<double> v, std::span<double> d) {
    base.eval(speed * t, v, d);
    for (auto& x : v) x *= scale;
    for (auto& x : d) x *= scale * speed;
  };
  return CurveBasis(base.size(), eval, base.domain(), base.lo() / speed, base.hi() / speed);
}

CurveBasis rotated_line(double phi) {
  auto eval = [phi](double t, std::span<double> v, std::span<double> d) {
    const double c = std::cos(phi), s = std::sin(phi);
    v[0] = c - s * t;
    v[1] = s + c * t;
    d[0] = -s;
    d[1] = c;
  };
  return CurveBasis(2, eval, CurveDomain::whole_line);
}

}  // namespace

TEST_CASE("alpha1 fixtures") {
  CHECK(alpha1(CurveBasis::monomials(1)) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(alpha1(CurveBasis::circle()) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(alpha1(rotated_line(0.7)) == doctest::Approx(1.0).epsilon(1e-10));
  // Kac: expected real roots of a random quadratic with iid coefficients.
  const double a2 = alpha1(CurveBasis::monomials(2));
  CHECK(a2 > 1.0);
  CHECK(a2 < 2.0);
}

TEST_CASE("alpha1 reparametrization and scaling invariance") {
  for (std::size_t k : {1u, 2u, 3u, 5u}) {
    const auto base = CurveBasis::monomials(k);
    const double a = alpha1(base);
    CHECK(alpha1(reparametrized(base, 2.0, 1.0)) == doctest::Approx(a).epsilon(1e-9));
    CHECK(alpha1(reparametrized(base, 1.0, 3.0)) == doctest::Approx(a).epsilon(1e-9));
  }
  const auto c = CurveBasis::circle();
  CHECK(alpha1(reparametrized(c, 2.0, 3.0)) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("alpha1 grows logarithmically for monomials") {
  double prev = alpha1(CurveBasis::monomials(10));
  for (std::size_t k : {100u, 1000u}) {
    const double a = alpha1(CurveBasis::monomials(k));
    CHECK(a > prev);
    prev = a;
  }
  // Kac expansion (2/pi) log k + C + 2/(pi k), C from the real-root count literature.
  const double kac = 2.0 / std::numbers::pi * std::log(1000.0) + 0.6257358072 + 2.0 / (std::numbers::pi * 1000.0);
  CHECK(prev == doctest::Approx(kac).epsilon(1e-6));
  CHECK(prev < 2.0 * std::log(1000.0));
}

TEST_CASE("alpha1 rejects a vanishing curve") {
  auto eval = [](double t, std::span<double> v, std::span<double> d) {
    v[0] = t;
    v[1] = t * t;
    d[0] = 1.0;
    d[1] = 2.0 * t;
  };
  const CurveBasis bad(2, eval, CurveDomain::interval, -1.0, 1.0);
  CHECK_THROWS_AS(projected_speed(bad, 0.0), DomainError);
}

TEST_CASE("root count fixtures") {
  const auto lin = CurveBasis::monomials(1);
  {
    std::vector<HermitianMatrix> a{HermitianMatrix::diagonal(1, std::vector{0.3}),
                                   HermitianMatrix::diagonal(1, std::vector{-2.0})};
    for (auto m : {RootMethod::companion, RootMethod::sign_scan}) {
      const auto r = count_roots(lin, a, m);
      REQUIRE(r.count == 1);
      CHECK(r.roots[0] == doctest::Approx(0.15).epsilon(1e-9));
    }
  }
  {
    std::vector<HermitianMatrix> a{HermitianMatrix::diagonal(1, std::vector{1.0, -1.0}),
                                   HermitianMatrix::identity(1, 2)};
    for (auto m : {RootMethod::companion, RootMethod::sign_scan}) {
      const auto r = count_roots(lin, a, m);
      REQUIRE(r.count == 2);
      CHECK(r.roots[0] == doctest::Approx(-1.0).epsilon(1e-9));
      CHECK(r.roots[1] == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
  {
    // Complex Hermitian goes through the scan.
    std::vector<HermitianMatrix> a{HermitianMatrix::diagonal(2, std::vector{1.0, -1.0}),
                                   HermitianMatrix::identity(2, 2)};
    const auto r = count_roots(lin, a);
    CHECK(r.method == RootMethod::sign_scan);
    CHECK(r.count == 2);
  }
  {
    std::vector<HermitianMatrix> a{HermitianMatrix::diagonal(1, std::vector{1.0, 0.0}),
                                   HermitianMatrix::diagonal(1, std::vector{1.0, 0.0})};
    CHECK_THROWS_AS(count_roots(lin, a, RootMethod::sign_scan), NumericalError);
  }
  std::vector<HermitianMatrix> wrong{HermitianMatrix::identity(1, 2)};
  CHECK_THROWS_AS(count_roots(lin, wrong), DomainError);
}

TEST_CASE("companion and sign scan agree on random matrix polynomials") {
  testing::Gen g(2024);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = g.index(1, 6), k = g.index(1, 3);
    const auto basis = CurveBasis::monomials(k);
    std::vector<HermitianMatrix> a;
    for (std::size_t j = 0; j <= k; ++j) a.push_back(g.hermitian(1, n));
    const auto comp = count_roots(basis, a, RootMethod::companion);
    const auto scan = count_roots(basis, a, RootMethod::sign_scan);
    CHECK(comp.method == RootMethod::companion);
    REQUIRE(comp.count == scan.count);
    for (std::size_t i = 0; i < comp.count; ++i)
      CHECK(comp.roots[i] == doctest::Approx(scan.roots[i]).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("mean root count at n = 1 equals alpha1") {
  for (std::size_t k : {1u, 2u}) {
    const auto basis = CurveBasis::monomials(k);
    const auto e = alpha_ratio_mc(basis, {1.0, 1, 0}, {100'000, 5, 0});
    CHECK(std::abs(e.mean - alpha1(basis)) <= 3 * e.std_err + 1e-8);
  }
  const auto c = CurveBasis::circle();
  auto coarse = c;
  coarse.set_panels(512);
  const auto e = alpha_ratio_mc(coarse, {1.0, 1, 0}, {20'000, 9, 0});
  CHECK(std::abs(e.mean - 2.0) <= 3 * e.std_err + 1e-12);
}

TEST_CASE("mean root count depends on the basis only through alpha1") {
  auto rot = rotated_line(1.1);
  rot.set_panels(512);
  const EnsembleSpec spec{1.0, 3, 0};
  const auto a = alpha_ratio_mc(CurveBasis::monomials(1), spec, {20'000, 3, 0});
  const auto b = alpha_ratio_mc(rot, spec, {20'000, 4, 0});
  CHECK(std::abs(a.mean - b.mean) <= 3 * std::hypot(a.std_err, b.std_err));
}

TEST_CASE("mean root count is invariant under a fixed orthogonal conjugation") {
  testing::Gen g(77);
  const RealMatrix u = g.orthogonal(4);
  const EnsembleSpec spec{1.0, 4, 0};
  const auto basis = CurveBasis::monomials(2);
  const RunConfig cfg{20'000, 12, 0};
  const auto m = run_trials<Moments>(cfg, [&](Moments& acc, std::uint64_t t) {
    Stream st = Stream::for_trial(cfg.seed, t);
    std::vector<HermitianMatrix> a;
    for (int j = 0; j < 3; ++j)
      a.push_back(HermitianMatrix::from_real(u.transpose() * sample_matrix(spec, st).real_dense() * u));
    acc.add(static_cast<double>(count_roots(basis, a).count));
  });
  const auto plain = alpha_ratio_mc(basis, spec, {20'000, 13, 0});
  CHECK(std::abs(m.mean() - plain.mean) <= 3 * std::hypot(m.std_err(), plain.std_err));
}

TEST_CASE("root count MC is thread invariant") {
  const auto basis = CurveBasis::monomials(2);
  const EnsembleSpec spec{1.0, 5, 0};
  const auto one = alpha_ratio_mc(basis, spec, {3'000, 21, 1});
  const auto four = alpha_ratio_mc(basis, spec, {3'000, 21, 4});
  CHECK(one.mean == four.mean);
  CHECK(one.std_err == four.std_err);
}
