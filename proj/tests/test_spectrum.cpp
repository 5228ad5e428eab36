#include <doctest.h>

#include "cyclica/spectrum.hpp"

#include <cmath>
#include <map>
#include <set>

using namespace cyclica;

namespace {

std::size_t brute_multiplicity(const std::vector<Exponent>& v) {
  std::size_t best = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (v[i] <= v[j]) continue;
      std::size_t c = 0;
      for (std::size_t a = 0; a < v.size(); ++a) {
        for (std::size_t b = 0; b < v.size(); ++b) c += v[a] > v[b] && v[a] - v[b] == v[i] - v[j];
      }
      best = std::max(best, c);
    }
  }
  return best;
}

}  // namespace

TEST_CASE("explicit spectra validate their terms") {
  CHECK_THROWS_AS(IntegerSpectrum::explicit_list({1, 1}), InputError);
  CHECK_THROWS_AS(IntegerSpectrum::explicit_list({3, 2}), InputError);
  const auto s = IntegerSpectrum::explicit_list({1, 2, 4, 7});
  CHECK(s.first_index() == 0);
  CHECK(s.available(64) == 4);
  CHECK(s.value(3) == 7);
  CHECK_THROWS_AS(s.value(4), InputError);
  CHECK(lacunarity_ratio(s, 64) == doctest::Approx(1.75));
}

TEST_CASE("generator values") {
  const auto g = IntegerSpectrum::geometric(3);
  CHECK(g.first_index() == 1);
  CHECK(g.value(1) == 3);
  CHECK(g.value(4) == 81);
  CHECK(lacunarity_ratio(g, 30) == doctest::Approx(3.0));
  CHECK(is_hadamard_lacunary(g, 2.0, 30));
  const auto f = IntegerSpectrum::factorial_plus_k();
  CHECK(f.value(1) == 3);
  CHECK(f.value(4) == 124);
  CHECK(f.residue(100, 7) == (100 % 7));  // 101! = 0 mod 7
  CHECK_THROWS_AS(g.value(0), InputError);
}

TEST_CASE("difference multiplicity by brute force") {
  const std::vector<Exponent> ap{1, 2, 3, 4, 5};
  CHECK(difference_multiplicity(IntegerSpectrum::explicit_list(ap), 64) == brute_multiplicity(ap));
  CHECK(brute_multiplicity(ap) == 4);
  const std::vector<Exponent> mixed{1, 3, 4, 8, 9, 13};
  CHECK(difference_multiplicity(IntegerSpectrum::explicit_list(mixed), 64) == brute_multiplicity(mixed));
  for (std::size_t h : {16u, 32u, 64u}) CHECK(difference_multiplicity(IntegerSpectrum::geometric(2), h) == 1);
}

TEST_CASE("factorial spectrum admits every power") {
  const auto s = IntegerSpectrum::factorial_plus_k();
  for (std::uint64_t n = 1; n <= 12; ++n) {
    CHECK(spectrum_admits_SstarN(s, n, 64).kind == ResidueVerdict::Kind::Proven);
    // exact residues over a late window cover Z/N
    std::set<std::uint64_t> hit;
    for (std::size_t k = 20; k < 20 + n; ++k) hit.insert(s.residue(k, n));
    CHECK(hit.size() == n);
  }
}

TEST_CASE("geometric spectrum has a witness") {
  const auto s = IntegerSpectrum::geometric(2);
  const auto v = spectrum_admits_SstarN(s, 2, 64);
  CHECK(v.kind == ResidueVerdict::Kind::NoWitness);
  CHECK(v.missing_residue == 1);
  for (std::size_t k = 1; k < 60; ++k) CHECK(s.residue(k, 2) == 0);
  const auto w = spectrum_admits_SstarN(IntegerSpectrum::geometric(3), 4, 64);
  CHECK(w.kind == ResidueVerdict::Kind::NoWitness);
  CHECK(w.missing_residue == 0);
  CHECK(spectrum_admits_SstarN(s, 1, 64).kind == ResidueVerdict::Kind::Proven);
}

TEST_CASE("explicit spectra are judged on the last half") {
  std::vector<Exponent> t;
  for (Exponent k = 1; k <= 20; ++k) t.push_back(k * k);
  const auto s = IntegerSpectrum::explicit_list(t);
  // squares mod 3 hit {0, 1} only
  const auto v = spectrum_admits_SstarN(s, 3, 64);
  CHECK(v.kind == ResidueVerdict::Kind::NoWitness);
  CHECK(v.missing_residue == 2);
  CHECK(spectrum_admits_SstarN(s, 2, 64).kind == ResidueVerdict::Kind::YesAtHorizon);
  CHECK(residues_hit(s, 4, 0, 20) == std::set<std::uint64_t>{0, 1});
}

TEST_CASE("CRT spectra follow the divisor-closed set") {
  const auto s = IntegerSpectrum::crt(DivisorClosedSet({4, 6}));
  for (std::uint64_t n = 1; n <= 12; ++n) {
    const bool member = n == 1 || n == 2 || n == 3 || n == 4 || n == 6;
    CHECK(spectrum_admits_SstarN(s, n, 64).admits() == member);
  }
}

TEST_CASE("bounded-block check") {
  const auto g = IntegerSpectrum::geometric(2);
  CHECK(bounded_block_check(g, 4, 30, 1.5, 2));
  CHECK_FALSE(bounded_block_check(IntegerSpectrum::explicit_list({10, 11, 12, 40}), 3, 64, 1.25));
}

TEST_CASE("polydisc conditions") {
  std::vector<MultiIndex> e;
  for (Exponent k = 0; k <= 10; ++k) e.push_back({Exponent{1} << k, static_cast<Exponent>(std::pow(3.0, k))});
  const MultiSpectrum ms(2, e);
  CHECK(polydisc_c1(ms) == 1);
  const auto cert = polydisc_c1_certificate(ms);
  CHECK(cert.certified);
  CHECK(cert.certifying_coordinate == 0);
  CHECK(polydisc_c2(ms).holds_at_horizon);

  const MultiSpectrum grid(2, {{0, 0}, {1, 0}, {0, 1}, {1, 1}});
  CHECK(polydisc_c1(grid) == 2);
  CHECK_FALSE(polydisc_c1_certificate(grid).certified);

  std::vector<MultiIndex> ap;
  for (Exponent k = 0; k < 12; ++k) ap.push_back({k, k * k});
  const auto c2 = polydisc_c2(MultiSpectrum(2, ap));
  CHECK_FALSE(c2.holds_at_horizon);
  CHECK(c2.failing_coordinates == std::vector<Index>{0});
  CHECK_THROWS_AS(MultiSpectrum(2, {{1, 2}, {1, 2}}), InputError);
}
