#include <doctest.h>

#include "cyclica/polydisc.hpp"
#include "oracles.hpp"

using namespace cyclica;

namespace {

PolySeries two_three(int kmax, Index d, std::mt19937_64* rng = nullptr) {
  std::vector<PolyTerm> terms;
  for (int k = 0; k <= kmax; ++k) {
    const MultiIndex e = {Exponent{1} << k, static_cast<Exponent>(std::llround(std::pow(3.0, k)))};
    CVector c = rng ? oracle::gaussian(*rng, d) : CVector::Constant(d, std::exp2(-k));
    terms.push_back({e, c});
  }
  return PolySeries(2, d, std::move(terms));
}

}  // namespace

TEST_CASE("poly series validation") {
  CHECK_THROWS_AS(PolySeries(0, 1, {}), InputError);
  CHECK_THROWS_AS(PolySeries(2, 1, {{{1}, CVector::Ones(1)}}), InputError);
  CHECK_THROWS_AS(PolySeries(2, 1, {{{1, 2}, CVector::Ones(2)}}), InputError);
  CHECK_THROWS_AS(PolySeries(2, 1, {{{1, 2}, CVector::Ones(1)}, {{1, 2}, CVector::Ones(1)}}), InputError);
  CHECK_THROWS_AS(PolySeries(2, 1, {{{1, 2}, CVector::Ones(1)}}, Enumeration::GradedLex, MultiIndex{1, 1}),
                  InputError);
  CVector nan(1);
  nan(0) = Scalar(std::nan(""), 0.0);
  CHECK_THROWS_AS(PolySeries(1, 1, {{{1}, nan}}), InputError);
}

TEST_CASE("graded lex enumeration and truncation") {
  const PolySeries f(2, 1, {{{3, 0}, CVector::Ones(1)}, {{0, 1}, CVector::Ones(1)}, {{1, 2}, CVector::Ones(1)},
                            {{2, 1}, CVector::Ones(1)}});
  std::vector<MultiIndex> got;
  for (const auto& t : f.terms()) got.push_back(t.exp);
  CHECK(got == std::vector<MultiIndex>{{0, 1}, {1, 2}, {2, 1}, {3, 0}});
  CHECK(f.truncation() == MultiIndex{3, 2});

  const PolySeries g(2, 1, {{{3, 0}, CVector::Ones(1)}, {{0, 1}, CVector::Ones(1)}}, Enumeration::AsGiven);
  CHECK(g.terms().front().exp == MultiIndex{3, 0});
  CHECK(to_string(g.enumeration()) == "as_given");

  const PolySeries t = f.truncate({2, 2});
  CHECK(t.size() == 3);
  CHECK(t.truncation() == MultiIndex{2, 2});
  CHECK(std::abs(t.squared_norm() - 3.0) < 1e-15);
}

TEST_CASE("polydisc backward shift") {
  const PolySeries f(2, 1, {{{3, 1}, CVector::Ones(1)}, {{1, 4}, CVector::Constant(1, 2.0)}});
  const PolySeries s = poly_backward_shift(f, {1, 1});
  REQUIRE(s.size() == 2);
  CHECK(s.terms()[0].exp == MultiIndex{2, 0});
  CHECK(s.terms()[1].exp == MultiIndex{0, 3});
  CHECK(poly_backward_shift(f, {2, 2}).size() == 0);
  CHECK(dominates({3, 1}, {3, 0}));
  CHECK_FALSE(dominates({3, 1}, {0, 2}));
  CHECK_THROWS_AS(poly_backward_shift(f, {1}), InputError);
}

TEST_CASE("scalar lacunary polydisc series is cyclic") {
  Tolerances tol;
  const PolySeries f = two_three(10, 1);
  const auto r = polydisc_cyclicity(f, nullptr, tol);
  CHECK(r.verdict.cyclic());
  CHECK(r.verdict.strength == Strength::AtHorizon);
  CHECK(r.c1.constant <= 1);
  CHECK(r.c1.certified);
  CHECK(r.c2.holds_at_horizon);
  CHECK(r.enumeration == Enumeration::GradedLex);
}

TEST_CASE("vector valued polydisc series") {
  Tolerances tol;
  std::mt19937_64 rng(5);
  CHECK(polydisc_cyclicity(two_three(10, 2, &rng), nullptr, tol).verdict.cyclic());
  // Every coefficient along (1, 1): X_* is a line.
  const auto r = polydisc_cyclicity(two_three(10, 2), nullptr, tol);
  CHECK_FALSE(r.verdict.cyclic());
  CHECK(r.x_star.dim() == 1);
}

TEST_CASE("failing (C2) is reported as an input error") {
  Tolerances tol;
  std::vector<PolyTerm> terms;
  for (Exponent k = 1; k <= 10; ++k) terms.push_back({{k, k * k}, CVector::Ones(1)});
  const PolySeries f(2, 1, terms);
  CHECK_FALSE(polydisc_c2(f.spectrum()).holds_at_horizon);
  CHECK(polydisc_c2(f.spectrum()).failing_coordinates == std::vector<Index>{0});
  CHECK_THROWS_AS(polydisc_cyclicity(f, nullptr, tol), InputError);
  CHECK_THROWS_AS(polydisc_cyclicity(PolySeries(2, 1, {}), nullptr, tol), InputError);
}
