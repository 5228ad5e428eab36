#include "cyclica/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace cyclica {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::uint64_t powmod(std::uint64_t a, std::size_t k, std::uint64_t n) {
  std::uint64_t r = 1 % n, b = a % n;
  while (k) {
    if (k & 1) r = mulmod(r, b, n);
    b = mulmod(b, b, n);
    k >>= 1;
  }
  return r;
}

}  // namespace

IntegerSpectrum IntegerSpectrum::explicit_list(std::vector<Exponent> terms) {
  for (std::size_t i = 1; i < terms.size(); ++i) {
    if (terms[i] <= terms[i - 1]) throw InputError("spectrum terms must be strictly increasing");
  }
  return IntegerSpectrum(Explicit{std::move(terms)});
}

IntegerSpectrum IntegerSpectrum::geometric(std::uint64_t base) {
  if (base < 2) throw InputError("geometric spectrum needs base >= 2");
  return IntegerSpectrum(Geometric{base});
}

IntegerSpectrum IntegerSpectrum::factorial_plus_k() { return IntegerSpectrum(FactorialPlusK{}); }

IntegerSpectrum IntegerSpectrum::crt(DivisorClosedSet set) { return IntegerSpectrum(Crt{CrtSequence(std::move(set))}); }

bool IntegerSpectrum::is_generator() const { return !std::holds_alternative<Explicit>(backing_); }

std::string IntegerSpectrum::name() const {
  return std::visit(overloaded{
                        [](const Explicit&) { return std::string("explicit"); },
                        [](const Geometric& g) { return "geometric(" + std::to_string(g.base) + ")"; },
                        [](const FactorialPlusK&) { return std::string("factorial_plus_k"); },
                        [](const Crt& c) {
                          std::string s = "crt(";
                          for (std::size_t i = 0; i < c.sequence.set().generators().size(); ++i) {
                            if (i) s += ",";
                            s += std::to_string(c.sequence.set().generators()[i]);
                          }
                          return s + ")";
                        },
                    },
                    backing_);
}

std::size_t IntegerSpectrum::available(std::size_t horizon) const {
  if (auto e = std::get_if<Explicit>(&backing_)) return std::min(horizon, e->terms.size());
  return horizon;
}

std::optional<U128> IntegerSpectrum::exact(std::size_t k) const {
  return std::visit(overloaded{
                        [k](const Explicit& e) -> std::optional<U128> {
                          if (k >= e.terms.size()) throw InputError("spectrum index beyond the explicit list");
                          return e.terms[k];
                        },
                        [k](const Geometric& g) -> std::optional<U128> {
                          if (k == 0) throw InputError("generator index starts at 1");
                          U128 v = 1;
                          for (std::size_t i = 0; i < k; ++i) {
                            if (__builtin_mul_overflow(v, static_cast<U128>(g.base), &v)) return std::nullopt;
                          }
                          return v;
                        },
                        [k](const FactorialPlusK&) { return factorial_exact(k); },
                        [k](const Crt& c) {
                          if (k == 0) throw InputError("generator index starts at 1");
                          return c.sequence.exact(k);
                        },
                    },
                    backing_);
}

Exponent IntegerSpectrum::value(std::size_t k) const {
  auto e = exact(k);
  if (!e || *e > std::numeric_limits<Exponent>::max()) {
    throw InputError("spectrum term " + std::to_string(k) + " of " + name() + " exceeds 64 bits");
  }
  return static_cast<Exponent>(*e);
}

long double IntegerSpectrum::approx(std::size_t k) const {
  if (auto e = exact(k)) return static_cast<long double>(*e);
  return std::visit(overloaded{
                        [](const Explicit&) { return 0.0L; },
                        [k](const Geometric& g) {
                          return std::pow(static_cast<long double>(g.base), static_cast<long double>(k));
                        },
                        [k](const FactorialPlusK&) { return factorial_approx(k); },
                        [k](const Crt& c) { return c.sequence.approx(k); },
                    },
                    backing_);
}

std::uint64_t IntegerSpectrum::residue(std::size_t k, std::uint64_t n) const {
  if (n == 0) throw InputError("modulus must be positive");
  return std::visit(overloaded{
                        [k, n](const Explicit& e) {
                          if (k >= e.terms.size()) throw InputError("spectrum index beyond the explicit list");
                          return e.terms[k] % n;
                        },
                        [k, n](const Geometric& g) {
                          if (k == 0) throw InputError("generator index starts at 1");
                          return powmod(g.base, k, n);
                        },
                        [k, n](const FactorialPlusK&) { return factorial_residue(k, n); },
                        [k, n](const Crt& c) { return c.sequence.residue(k, n); },
                    },
                    backing_);
}

double lacunarity_ratio(std::span<const Exponent> terms) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < terms.size(); ++i) {
    if (terms[i + 1] <= terms[i]) throw InputError("spectrum terms must be strictly increasing");
    if (terms[i] == 0) continue;
    best = std::min(best, static_cast<double>(terms[i + 1]) / static_cast<double>(terms[i]));
  }
  return best;
}

double lacunarity_ratio(const IntegerSpectrum& s, std::size_t horizon) {
  const std::size_t first = s.first_index(), count = s.available(horizon);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = first; k + 1 < first + count; ++k) {
    long double a = s.approx(k), b = s.approx(k + 1);
    if (a <= 0.0L) continue;
    best = std::min(best, static_cast<double>(b / a));
  }
  return best;
}

bool is_hadamard_lacunary(const IntegerSpectrum& s, double d, std::size_t horizon) {
  return lacunarity_ratio(s, horizon) >= d;
}

std::size_t difference_multiplicity(const IntegerSpectrum& s, std::size_t horizon) {
  const std::size_t first = s.first_index(), count = s.available(horizon);
  std::vector<U128> v;
  for (std::size_t k = first; k < first + count; ++k) {
    auto e = s.exact(k);
    if (!e) throw InputError("difference multiplicity needs exact terms; " + s.name() + " overflows at index " + std::to_string(k));
    v.push_back(*e);
  }
  std::map<U128, std::size_t> counts;
  std::size_t best = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) best = std::max(best, ++counts[v[i] - v[j]]);
  }
  return best;
}

std::set<std::uint64_t> residues_hit(const IntegerSpectrum& s, std::uint64_t n, std::size_t from_k, std::size_t window) {
  std::set<std::uint64_t> out;
  for (std::size_t k = from_k; k < from_k + window; ++k) out.insert(s.residue(k, n));
  return out;
}

std::string to_string(ResidueVerdict::Kind k) {
  switch (k) {
    case ResidueVerdict::Kind::Proven: return "proven";
    case ResidueVerdict::Kind::YesAtHorizon: return "yes-at-horizon";
    case ResidueVerdict::Kind::NoWitness: return "no-witness";
  }
  return "unknown";
}

ResidueVerdict spectrum_admits_SstarN(const IntegerSpectrum& s, std::uint64_t n, std::size_t horizon) {
  using Kind = ResidueVerdict::Kind;
  if (n == 0) throw InputError("N must be positive");
  if (n == 1) return {Kind::Proven, 0, 0, "every sequence covers Z/1"};
  return std::visit(
      overloaded{
          [&](const IntegerSpectrum::FactorialPlusK&) {
            return ResidueVerdict{Kind::Proven, 0, 0, "(k+1)! = 0 mod N for k >= N-1, so n_k = k mod N"};
          },
          [&](const IntegerSpectrum::Geometric& g) {
            // Either N | a^k eventually (cycle {0}) or a^k is never 0 mod N.
            std::uint64_t x = g.base % n;
            for (std::size_t k = 1; k <= 64; ++k) {
              if (x == 0) return ResidueVerdict{Kind::NoWitness, k, 1, "a^k = 0 mod N from this index on"};
              x = mulmod(x, g.base % n, n);
            }
            return ResidueVerdict{Kind::NoWitness, 1, 0, "a^k is never 0 mod N"};
          },
          [&](const IntegerSpectrum::Crt& c) {
            if (c.sequence.set().contains(n)) {
              return ResidueVerdict{Kind::Proven, 0, 0, "N lies in the divisor-closed set"};
            }
            return ResidueVerdict{Kind::NoWitness, std::max<std::size_t>(1, n - 1), n - 1,
                                  "N outside the divisor-closed set; class N-1 is never hit"};
          },
          [&](const IntegerSpectrum::Explicit&) {
            const std::size_t count = s.available(horizon);
            const std::size_t start = count / 2;
            std::vector<bool> hit(n < (1u << 24) ? n : 0, false);
            if (hit.empty()) return ResidueVerdict{Kind::NoWitness, start, 0, "N larger than any finite window can cover"};
            for (std::size_t k = start; k < count; ++k) hit[s.residue(k, n)] = true;
            for (std::uint64_t r = 0; r < n; ++r) {
              if (!hit[r]) return ResidueVerdict{Kind::NoWitness, start, r, "class missing from the last half of the prefix"};
            }
            return ResidueVerdict{Kind::YesAtHorizon, start, 0, "last half of the prefix covers Z/N"};
          },
      },
      s.backing());
}

bool bounded_block_check(const IntegerSpectrum& s, std::uint64_t n, std::size_t horizon, double d_min, std::size_t burn_in) {
  if (n == 0) throw InputError("N must be positive");
  const std::size_t first = s.first_index(), count = s.available(horizon);
  std::optional<long double> prev;
  bool have_exact = false;
  U128 prev_exact = 0;
  for (std::size_t k = first + burn_in; k < first + count; ++k) {
    auto e = s.exact(k);
    long double b;
    if (e) {
      U128 q = *e / n;
      if (have_exact && q <= prev_exact) return false;
      have_exact = true;
      prev_exact = q;
      b = static_cast<long double>(q);
    } else {
      b = std::floor(s.approx(k) / static_cast<long double>(n));
      have_exact = false;
    }
    if (prev) {
      if (b <= *prev) return false;
      if (*prev > 0.0L && static_cast<double>(b / *prev) < d_min) return false;
    }
    prev = b;
  }
  return true;
}

MultiSpectrum::MultiSpectrum(Index poly_dim, std::vector<MultiIndex> entries) : poly_dim_(poly_dim), entries_(std::move(entries)) {
  if (poly_dim < 1) throw InputError("polydisc dimension must be at least 1");
  std::set<MultiIndex> seen;
  for (const auto& e : entries_) {
    if (static_cast<Index>(e.size()) != poly_dim) throw InputError("multi-index has wrong length");
    if (!seen.insert(e).second) throw InputError("multi-indices must be pairwise distinct");
  }
}

std::size_t polydisc_c1(const MultiSpectrum& ms) {
  std::map<MultiIndex, std::size_t> counts;
  std::size_t best = 0;
  const auto& e = ms.entries();
  MultiIndex beta(static_cast<std::size_t>(ms.poly_dim()));
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (std::size_t j = 0; j < e.size(); ++j) {
      if (i == j) continue;
      bool ok = true;
      for (std::size_t c = 0; c < beta.size() && ok; ++c) {
        if (e[i][c] < e[j][c]) ok = false;
        else beta[c] = e[i][c] - e[j][c];
      }
      if (ok) best = std::max(best, ++counts[beta]);
    }
  }
  return best;
}

C1Certificate polydisc_c1_certificate(const MultiSpectrum& ms) {
  C1Certificate out;
  out.constant = polydisc_c1(ms);
  for (Index c = 0; c < ms.poly_dim(); ++c) {
    std::vector<Exponent> v;
    for (const auto& e : ms.entries()) v.push_back(e[static_cast<std::size_t>(c)]);
    std::sort(v.begin(), v.end());
    if (std::adjacent_find(v.begin(), v.end()) != v.end()) continue;
    if (lacunarity_ratio(v) >= kLacunarityFloor) {
      out.certified = true;
      out.certifying_coordinate = c;
      break;
    }
  }
  return out;
}

C2Report polydisc_c2(const MultiSpectrum& ms) {
  C2Report out;
  const auto& e = ms.entries();
  out.window_start = e.size() / 2;
  if (e.size() < out.window_start + 3) {
    for (Index c = 0; c < ms.poly_dim(); ++c) out.failing_coordinates.push_back(c);
    return out;
  }
  for (Index c = 0; c < ms.poly_dim(); ++c) {
    const auto cc = static_cast<std::size_t>(c);
    bool ok = true;
    for (std::size_t j = out.window_start; j + 2 < e.size() && ok; ++j) {
      __int128 g0 = static_cast<__int128>(e[j + 1][cc]) - static_cast<__int128>(e[j][cc]);
      __int128 g1 = static_cast<__int128>(e[j + 2][cc]) - static_cast<__int128>(e[j + 1][cc]);
      if (!(g1 > g0)) ok = false;
    }
    if (!ok) out.failing_coordinates.push_back(c);
  }
  out.holds_at_horizon = out.failing_coordinates.empty();
  return out;
}

}  // namespace cyclica
