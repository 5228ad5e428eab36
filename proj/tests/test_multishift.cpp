#include <doctest.h>

#include "cyclica/multishift.hpp"
#include "oracles.hpp"

#include <map>

using namespace cyclica;

namespace {

VectorSeries dss(int kmax, Exponent shift = 0) {
  std::vector<Exponent> ex;
  std::vector<Scalar> c;
  for (int k = 0; k <= kmax; ++k) {
    ex.push_back((Exponent{1} << k) - (k > 0 ? shift : 0));
    c.push_back(std::pow(2.0, -k));
  }
  return VectorSeries::scalar(ex, c);
}

std::vector<Scalar> random_coeffs(std::mt19937_64& rng, std::size_t n) {
  std::vector<Scalar> c;
  for (std::size_t i = 0; i < n; ++i) c.push_back(oracle::gaussian(rng, 1)(0));
  return c;
}

}  // namespace

TEST_CASE("reshaping matches the dense block model") {
  std::mt19937_64 rng(3);
  const VectorSeries f(2, {{1, oracle::gaussian(rng, 2)},
                           {2, oracle::gaussian(rng, 2)},
                           {7, oracle::gaussian(rng, 2)},
                           {20, oracle::gaussian(rng, 2)}});
  const Exponent n = 3;
  const VectorSeries g = psi_reshape(f, n);
  CHECK(g.dim() == 6);
  std::map<Exponent, CVector> want;
  for (const auto& t : f.terms()) {
    auto& v = want.try_emplace(t.exp / n, CVector::Zero(6)).first->second;
    v.segment(static_cast<Index>(t.exp % n) * 2, 2) = t.coeff;
  }
  REQUIRE(g.size() == want.size());
  for (const auto& t : g.terms()) CHECK((want.at(t.exp) - t.coeff).norm() == 0.0);
  CHECK(g.norm() == doctest::Approx(f.norm()));
  CHECK((psi_unreshape(g, 2, n) - f).norm() == 0.0);
  // Psi_N S*^N = S* Psi_N
  CHECK((psi_reshape(backward_shift(f, n), n) - backward_shift(g, 1)).norm() == 0.0);
}

TEST_CASE("S*^N cyclicity of scalar lacunary series") {
  const Tolerances tol;
  // all exponents past the first are even
  CHECK_FALSE(sstarN_cyclicity(dss(20), 2, tol).cyclic());
  CHECK(sstarN_cyclicity(dss(20), 1, tol).cyclic());
  std::vector<Exponent> fact;
  std::vector<Scalar> c;
  for (std::size_t k = 1; k <= 19; ++k) {
    fact.push_back(factorial_sequence(k));
    c.push_back(1.0 / static_cast<double>(k));
  }
  const auto f = VectorSeries::scalar(fact, c);
  for (Exponent n = 1; n <= 4; ++n) CHECK(sstarN_cyclicity(f, n, tol).cyclic());
}

TEST_CASE("non-lacunary reshaped spectra are refused") {
  std::vector<Exponent> ex;
  std::vector<Scalar> c;
  for (Exponent k = 1; k <= 40; ++k) {
    ex.push_back(k);
    c.push_back(1.0);
  }
  CHECK_THROWS_AS(sstarN_cyclicity(VectorSeries::scalar(ex, c), 2, Tolerances{}), InputError);
}

TEST_CASE("exact mode uses the reshaped model") {
  const Tolerances tol;
  const VectorSeries f = dss(12);
  // Psi_2 f has coefficient (1, 0) everywhere but the first block (z^1 -> (0, 1)).
  const TailModel m(2, {{0, basis_vector(2, 1)}}, {basis_vector(2, 0)});
  const Verdict v = sstarN_cyclicity(f, 2, m, tol);
  CHECK_FALSE(v.cyclic());
  CHECK(v.strength == Strength::Proven);
}

TEST_CASE("A(f) for the CRT construction") {
  const auto s = IntegerSpectrum::crt(DivisorClosedSet({4, 6}));
  const std::vector<std::uint64_t> want{1, 2, 3, 4, 6};
  CHECK(af_membership(s, 8) == want);
  CHECK(af_membership(s, 8, 64, 4) == want);
  CHECK(af_membership(IntegerSpectrum::factorial_plus_k(), 12).size() == 12);
  CHECK(af_membership(IntegerSpectrum::geometric(2), 12) == std::vector<std::uint64_t>{1});
}

TEST_CASE("A(f) is closed under divisors") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Exponent> t;
    Exponent e = 5 + rng() % 7;
    for (int k = 0; k < 48; ++k) {
      t.push_back(e);
      e = e + e / 2 + rng() % 17;
    }
    const auto a = af_membership(IntegerSpectrum::explicit_list(t), 12);
    for (auto n : a) {
      for (std::uint64_t m = 1; m < n; ++m) {
        if (n % m == 0) CHECK(std::find(a.begin(), a.end(), m) != a.end());
      }
    }
  }
}

TEST_CASE("residue view agrees with the modular criterion") {
  const Tolerances tol;
  std::mt19937_64 rng(8);
  const std::vector<IntegerSpectrum> gens{IntegerSpectrum::factorial_plus_k(), IntegerSpectrum::geometric(2),
                                          IntegerSpectrum::geometric(3), IntegerSpectrum::crt(DivisorClosedSet({4, 6})),
                                          IntegerSpectrum::crt(DivisorClosedSet({5}))};
  for (int trial = 0; trial < 40; ++trial) {
    const auto& s = gens[rng() % gens.size()];
    const std::uint64_t n = 1 + rng() % 6;
    const auto c = random_coeffs(rng, 64);
    const Crosscheck x = residue_crosscheck(c, s, n, tol);
    CHECK_MESSAGE(x.agree, s.name(), " N = ", n);
  }
}

TEST_CASE("bounded-block family") {
  const Tolerances tol;
  const VectorSeries f = dss(20);
  const VectorSeries sf = backward_shift(f, 1);
  // F = (f, S* f) as one C^2 valued series
  std::vector<Term> terms;
  std::map<Exponent, CVector> m;
  for (const auto& t : f.terms()) m.try_emplace(t.exp, CVector::Zero(2)).first->second(0) = t.coeff(0);
  for (const auto& t : sf.terms()) m.try_emplace(t.exp, CVector::Zero(2)).first->second(1) = t.coeff(0);
  for (auto& [e, c] : m) terms.push_back({e, c});
  const std::vector<VectorSeries> fam{VectorSeries(2, terms)};
  const FamilyReport r = bounded_block_family_cyclicity(fam, 2, tol);
  CHECK_FALSE(r.verdict.cyclic());
  CHECK(r.span.dim() == 2);
}
