#include <doctest.h>

#include "cyclica/core.hpp"

#include <cmath>
#include <map>
#include <random>

using namespace cyclica;

namespace {

CVector vec(std::initializer_list<Scalar> xs) {
  CVector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (auto x : xs) v(i++) = x;
  return v;
}

// Dense coefficient map, the test-side model of a series.
std::map<Exponent, CVector> dense(const VectorSeries& f) {
  std::map<Exponent, CVector> m;
  for (const auto& t : f.terms()) m[t.exp] = t.coeff;
  return m;
}

VectorSeries random_series(std::mt19937_64& rng, Index d, std::size_t n, Exponent spread) {
  std::normal_distribution<double> g;
  std::vector<Term> terms;
  Exponent e = 0;
  for (std::size_t i = 0; i < n; ++i) {
    e += 1 + rng() % spread;
    CVector c(d);
    for (Index j = 0; j < d; ++j) c(j) = Scalar(g(rng), g(rng));
    terms.push_back({e, c});
  }
  return VectorSeries(d, std::move(terms));
}

}  // namespace

TEST_CASE("tolerances reject nonpositive values") {
  Tolerances t;
  CHECK_NOTHROW(t.validate());
  t.rank = 0.0;
  CHECK_THROWS_AS(t.validate(), InputError);
  t.rank = 1e-9;
  t.unitary = std::nan("");
  CHECK_THROWS_AS(t.validate(), InputError);
}

TEST_CASE("numerical span rank and basis") {
  std::vector<CVector> v{vec({1, 0, 0}), vec({1, 1, 0}), vec({2, 1, 0})};
  const Subspace s = numerical_span(3, v, 1e-9);
  CHECK(s.dim() == 2);
  CHECK((s.basis().adjoint() * s.basis() - CMatrix::Identity(2, 2)).norm() < 1e-12);
  CHECK(s.distance(vec({0, 0, 1})) == doctest::Approx(1.0));
  CHECK(s.distance(vec({3, -2, 0})) < 1e-12);
  CHECK(s.complement().dim() == 1);
  CHECK(numerical_span(3, std::vector<CVector>{}, 1e-9).is_zero());
}

TEST_CASE("numerical span ignores vector order") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  std::vector<CVector> v;
  for (int i = 0; i < 4; ++i) {
    CVector c(6);
    for (Index j = 0; j < 6; ++j) c(j) = Scalar(g(rng), g(rng));
    v.push_back(c);
  }
  auto w = v;
  std::reverse(w.begin(), w.end());
  CHECK(projection_defect(numerical_span(6, v, 1e-9), numerical_span(6, w, 1e-9)) < 1e-8);
}

TEST_CASE("projection is idempotent and self-adjoint") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  CMatrix a(5, 2);
  for (Index i = 0; i < a.size(); ++i) a(i) = Scalar(g(rng), g(rng));
  const Subspace s = numerical_span(a, 1e-9);
  CVector v(5), w(5);
  for (Index i = 0; i < 5; ++i) {
    v(i) = Scalar(g(rng), g(rng));
    w(i) = Scalar(g(rng), g(rng));
  }
  const CVector pv = project_vector(v, s);
  CHECK((project_vector(pv, s) - pv).norm() < 1e-12);
  CHECK(std::abs(w.dot(pv) - s.project(w).dot(v)) < 1e-12);
  CHECK((s.project_out(v) + pv - v).norm() < 1e-12);
}

TEST_CASE("projection defect of two lines is the sine of the angle") {
  for (double th : {0.1, 0.7, 1.3}) {
    const Subspace a = numerical_span(2, std::vector<CVector>{vec({1, 0})}, 1e-9);
    const Subspace b = numerical_span(2, std::vector<CVector>{vec({std::cos(th), std::sin(th)})}, 1e-9);
    CHECK(projection_defect(a, b) == doctest::Approx(std::sin(th)).epsilon(1e-12));
  }
  const Subspace l = numerical_span(3, std::vector<CVector>{vec({1, 0, 0})}, 1e-9);
  CHECK(containment_defect(l, Subspace::full(3)) < 1e-14);
  CHECK(containment_defect(Subspace::full(3), l) == doctest::Approx(1.0));
}

TEST_CASE("series validation") {
  CHECK_THROWS_AS(VectorSeries(2, {{3, vec({1, 0})}, {3, vec({0, 1})}}), InputError);
  CHECK_THROWS_AS(VectorSeries(2, {{3, vec({1, 0})}, {1, vec({0, 1})}}), InputError);
  CHECK_THROWS_AS(VectorSeries(2, {{3, vec({1, 0, 0})}}), InputError);
  CHECK_THROWS_AS(VectorSeries(1, {{3, vec({std::nan("")})}}), InputError);
  CHECK_THROWS_AS(VectorSeries(0, {}), InputError);
  const VectorSeries f(2, {{1, vec({0, 0})}, {4, vec({1, 2})}});
  CHECK(f.size() == 1);
  CHECK(f.spectrum() == std::vector<Exponent>{4});
  CHECK(f.coefficient(7).isZero());
  CHECK(f.squared_norm() == doctest::Approx(5.0));
}

TEST_CASE("shifts agree with the dense coefficient model") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const VectorSeries f = random_series(rng, 3, 12, 9);
    const auto df = dense(f);
    for (Exponent n : {0u, 1u, 5u, 40u, 200u}) {
      const auto ds = dense(backward_shift(f, n));
      std::map<Exponent, CVector> want;
      for (const auto& [e, c] : df) {
        if (e >= n) want[e - n] = c;
      }
      REQUIRE(ds.size() == want.size());
      for (const auto& [e, c] : want) CHECK((ds.at(e) - c).norm() == 0.0);
      CHECK(backward_shift(f, n).norm() <= f.norm() + 1e-15);
      const auto fs = dense(forward_shift(f, n));
      for (const auto& [e, c] : df) CHECK((fs.at(e + n) - c).norm() == 0.0);
    }
    // S* S = I
    CHECK((backward_shift(forward_shift(f, 3), 3) - f).norm() == 0.0);
  }
}

TEST_CASE("inner product is linear in the first argument") {
  std::mt19937_64 rng(23);
  const VectorSeries f = random_series(rng, 2, 8, 3);
  const VectorSeries g = random_series(rng, 2, 8, 3);
  const Scalar c(0.3, -1.7);
  CHECK(std::abs(inner_product(c * f, g) - c * inner_product(f, g)) < 1e-12);
  CHECK(std::abs(inner_product(f, c * g) - std::conj(c) * inner_product(f, g)) < 1e-12);
  CHECK(std::abs(inner_product(f, f) - f.squared_norm()) < 1e-12);
  // brute force over the union of exponents
  Scalar want = 0.0;
  const auto df = dense(f), dg = dense(g);
  for (const auto& [e, a] : df) {
    auto it = dg.find(e);
    if (it != dg.end()) want += it->second.dot(a);
  }
  CHECK(std::abs(inner_product(f, g) - want) < 1e-12);
}

TEST_CASE("sum and difference cancel exactly") {
  std::mt19937_64 rng(29);
  const VectorSeries f = random_series(rng, 2, 6, 4);
  const VectorSeries g = random_series(rng, 2, 6, 4);
  CHECK((f - f).size() == 0);
  CHECK(((f + g) - g - f).norm() < 1e-14);
  CHECK_THROWS_AS(f + VectorSeries(3, {}), InputError);
}
