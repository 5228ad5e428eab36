#include <doctest.h>

#include "cyclica/orbit.hpp"
#include "oracles.hpp"

#include <map>

using namespace cyclica;

namespace {

VectorSeries random_series(std::mt19937_64& rng, Index d, Exponent top) {
  std::vector<Term> terms;
  for (Exponent e = 0; e <= top; ++e) {
    if (rng() % 2) terms.push_back({e, oracle::gaussian(rng, d)});
  }
  if (terms.empty()) terms.push_back({top, oracle::gaussian(rng, d)});
  return VectorSeries(d, std::move(terms), top);
}

// Dense least squares over the stacked coefficients of S*^n f, n <= budget.
double dense_residual(const VectorSeries& f, const VectorSeries& g, Exponent budget) {
  const Exponent top = std::max(f.truncation_degree(), g.truncation_degree());
  const Index d = f.dim();
  const Index rows = Index(top + 1) * d;
  CMatrix a = CMatrix::Zero(rows, Index(budget + 1));
  for (Exponent n = 0; n <= budget; ++n) {
    for (const auto& t : f.terms()) {
      if (t.exp >= n) a.block(Index(t.exp - n) * d, Index(n), d, 1) = t.coeff;
    }
  }
  CVector b = CVector::Zero(rows);
  for (const auto& t : g.terms()) b.segment(Index(t.exp) * d, d) = t.coeff;
  Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(a);
  return (a * cod.solve(b) - b).norm();
}

VectorSeries dss(int kmax) {
  std::vector<Exponent> ex;
  std::vector<Scalar> c;
  for (int k = 0; k <= kmax; ++k) {
    ex.push_back(Exponent{1} << k);
    c.push_back(std::exp2(-k));
  }
  return VectorSeries::scalar(ex, c);
}

}  // namespace

TEST_CASE("orbit residual matches dense least squares") {
  Tolerances tol;
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 25; ++trial) {
    const Index d = 1 + Index(rng() % 3);
    const VectorSeries f = random_series(rng, d, 20 + rng() % 20);
    const VectorSeries g = random_series(rng, d, 10);
    const Exponent budget = rng() % 12;
    const OrbitReport r = orbit_project(f, g, budget, tol);
    REQUIRE(r.residuals.size() == budget + 1);
    const double want = dense_residual(f, g, budget);
    CHECK(std::abs(r.residuals.back() - want) < 1e-8 * std::max(1.0, g.norm()));
    CHECK(std::abs(r.final_residual - want) < 1e-8 * std::max(1.0, g.norm()));
    for (std::size_t b = 1; b < r.residuals.size(); ++b) CHECK(r.residuals[b] <= r.residuals[b - 1] + 1e-12);
    CHECK(r.residuals.front() <= r.target_norm + 1e-12);
  }
}

TEST_CASE("gram matrix is the inner-product matrix of the shifts") {
  std::mt19937_64 rng(9);
  const VectorSeries f = random_series(rng, 2, 30);
  const Exponent budget = 9;
  const CMatrix g = orbit_gram(f, budget);
  for (Exponent m = 0; m <= budget; ++m) {
    for (Exponent n = 0; n <= budget; ++n) {
      const Scalar want = inner_product(backward_shift(f, n), backward_shift(f, m));
      CHECK(std::abs(g(Index(m), Index(n)) - want) < 1e-12);
    }
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(g);
  CHECK(es.eigenvalues().minCoeff() >= -1e-10);
}

TEST_CASE("trivial targets") {
  Tolerances tol;
  std::mt19937_64 rng(10);
  const VectorSeries f = random_series(rng, 2, 15);
  // The curve comes from the Gram system, so it is exact only to about
  // sqrt(eps) relative to the target; the direct residual is exact.
  const auto self = orbit_project(f, f, 0, tol);
  CHECK(self.residuals[0] < 1e-6 * f.norm());
  CHECK(self.final_residual < 1e-12);
  // 1 + z reaches 1 after one shift.
  const VectorSeries lin = VectorSeries::scalar(std::vector<Exponent>{0, 1}, std::vector<Scalar>{1.0, 1.0});
  const VectorSeries one = VectorSeries::scalar(std::vector<Exponent>{0}, std::vector<Scalar>{1.0});
  const auto r = orbit_project(lin, one, 1, tol);
  CHECK(r.residuals[0] > 0.5);
  CHECK(r.residuals[1] < 1e-12);
  CHECK(std::abs(r.coefficients(1) - Scalar(1.0)) < 1e-12);
}

TEST_CASE("orbit errors") {
  Tolerances tol;
  const VectorSeries one = VectorSeries::scalar(std::vector<Exponent>{0}, std::vector<Scalar>{1.0});
  CHECK_THROWS_AS(orbit_project(VectorSeries::zero(1), one, 4, tol), InputError);
  CHECK_THROWS_AS(orbit_project(one, one, kMaxOrbitBudget + 1, tol), InputError);
  CHECK_THROWS_AS(orbit_project(one, VectorSeries::zero(2), 4, tol), InputError);
}

TEST_CASE("the lacunary series approaches the constant 1") {
  Tolerances tol;
  const VectorSeries f = dss(12);
  const VectorSeries one = VectorSeries::scalar(std::vector<Exponent>{0}, std::vector<Scalar>{1.0});
  const auto r = orbit_project(f, one, 256, tol);
  CHECK(r.residuals.size() == 257);
  CHECK(r.residuals.back() < 0.5 * r.residuals.front());
  CHECK(std::abs(r.residuals.back() - dense_residual(f, one, 256)) < 1e-8);
}

TEST_CASE("multiple targets share one factorization") {
  Tolerances tol;
  std::mt19937_64 rng(12);
  const VectorSeries f = random_series(rng, 2, 40);
  const std::vector<VectorSeries> gs = {random_series(rng, 2, 5), random_series(rng, 2, 8)};
  const auto many = orbit_project_many(f, gs, 10, tol);
  for (std::size_t i = 0; i < gs.size(); ++i) {
    const auto one = orbit_project(f, gs[i], 10, tol);
    CHECK(many[i].residuals == one.residuals);
  }
}

TEST_CASE("polydisc orbit") {
  Tolerances tol;
  const PolySeries f(2, 1, {{{1, 1}, CVector::Ones(1)}, {{2, 3}, CVector::Constant(1, 0.5)}});
  CHECK(orbit_project_polydisc(f, f, {0, 0}, tol).residuals.back() < 1e-12);
  // Nothing with a positive second exponent ever reaches z2 when f has none.
  const PolySeries h(2, 1, {{{1, 0}, CVector::Ones(1)}, {{4, 0}, CVector::Ones(1)}});
  const PolySeries z2(2, 1, {{{0, 1}, CVector::Ones(1)}});
  const auto r = orbit_project_polydisc(h, z2, {4, 4}, tol);
  CHECK(std::abs(r.residuals.back() - 1.0) < 1e-12);
  // Residuals along the chain are nonincreasing.
  const PolySeries one(2, 1, {{{0, 0}, CVector::Ones(1)}});
  const auto c = orbit_project_polydisc(f, one, {2, 3}, tol, 4);
  CHECK(c.boxes.size() == 5);
  for (std::size_t i = 1; i < c.residuals.size(); ++i) CHECK(c.residuals[i] <= c.residuals[i - 1] + 1e-12);
  CHECK(c.residuals.back() < 1e-12);
}

TEST_CASE("one in orbit on a polydisc series") {
  Tolerances tol;
  std::vector<PolyTerm> terms;
  for (int k = 0; k <= 4; ++k) {
    terms.push_back({{Exponent{1} << k, static_cast<Exponent>(std::pow(3, k))}, CVector::Constant(1, std::exp2(-k))});
  }
  const PolySeries f(2, 1, terms);
  const auto r = one_in_orbit_check(f, {16, 81}, tol);
  CHECK(r.reached);
  CHECK(r.residual < 1e-9);
  CHECK(r.replay.size() == 2);
  CHECK_THROWS_AS(one_in_orbit_check(f, {0, 0}, tol), InputError);
}

TEST_CASE("tail diagnostics") {
  // |a_k|^2 = 2^-k: the weight terms tend to 1.
  std::vector<Exponent> ex;
  std::vector<Scalar> c;
  for (int k = 0; k < 40; ++k) {
    ex.push_back(Exponent{1} << k);
    c.push_back(std::exp2(-k / 2.0));
  }
  const VectorSeries f = VectorSeries::scalar(ex, c);
  const std::vector<VectorSeries> probes = {f, VectorSeries::zero(1)};
  const auto t = tail_diagnostics(f, probes);
  REQUIRE(t.weight_terms.size() == 39);
  for (std::size_t k = 0; k < 20; ++k) CHECK(std::abs(t.weight_terms[k] - 1.0) < 1e-5);
  for (double w : t.weight_terms) CHECK(w >= 1.0 - 1e-12);
  CHECK(t.weight_partial.back() > 38.0);
  // Probe f: only n_(k+1) - n_k = 2^k lands on the spectrum.
  for (std::size_t k = 0; k < 39; ++k) CHECK(std::abs(t.double_sum_terms[0][k] - std::exp2(-double(k))) < 1e-15);
  CHECK(t.last_quarter_increment[0] < 1e-6);
  for (double p : t.pairings[1]) CHECK(p == 0.0);
  CHECK(default_probes(f, 42).size() == 8);
  CHECK_THROWS_AS(tail_diagnostics(VectorSeries::scalar(std::vector<Exponent>{1}, std::vector<Scalar>{1.0}), probes),
                  InputError);
}
