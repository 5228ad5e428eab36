#pragma once

#include "cyclica/constructions.hpp"
#include "cyclica/core.hpp"

#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace cyclica {

// Ratio below which a prefix is not treated as lacunary.
inline constexpr double kLacunarityFloor = 1.25;

// Strictly increasing positive integers, either an explicit list or a
// generator. Explicit lists are indexed from 0, generators from 1 (the
// index k of the defining formula).
class IntegerSpectrum {
 public:
  struct Explicit {
    std::vector<Exponent> terms;
  };
  struct Geometric {
    std::uint64_t base;
  };
  struct FactorialPlusK {};
  struct Crt {
    CrtSequence sequence;
  };

  static IntegerSpectrum explicit_list(std::vector<Exponent> terms);
  static IntegerSpectrum geometric(std::uint64_t base);
  static IntegerSpectrum factorial_plus_k();
  static IntegerSpectrum crt(DivisorClosedSet set);

  bool is_generator() const;
  std::string name() const;
  std::size_t first_index() const { return is_generator() ? 1 : 0; }
  // Number of terms available within a horizon of K terms.
  std::size_t available(std::size_t horizon) const;

  std::optional<U128> exact(std::size_t k) const;
  Exponent value(std::size_t k) const;
  long double approx(std::size_t k) const;
  std::uint64_t residue(std::size_t k, std::uint64_t n) const;

  const std::variant<Explicit, Geometric, FactorialPlusK, Crt>& backing() const { return backing_; }

 private:
  explicit IntegerSpectrum(std::variant<Explicit, Geometric, FactorialPlusK, Crt> b) : backing_(std::move(b)) {}
  std::variant<Explicit, Geometric, FactorialPlusK, Crt> backing_;
};

// min n_{k+1}/n_k over the first K terms.
double lacunarity_ratio(const IntegerSpectrum& s, std::size_t horizon);
double lacunarity_ratio(std::span<const Exponent> terms);
bool is_hadamard_lacunary(const IntegerSpectrum& s, double d, std::size_t horizon);

// max over I > 0 of #{(k, j) : n_k - n_j = I} within the first K terms.
std::size_t difference_multiplicity(const IntegerSpectrum& s, std::size_t horizon);

std::set<std::uint64_t> residues_hit(const IntegerSpectrum& s, std::uint64_t n, std::size_t from_k, std::size_t window);

struct ResidueVerdict {
  enum class Kind { Proven, YesAtHorizon, NoWitness };
  Kind kind = Kind::NoWitness;
  std::size_t witness_index = 0;
  std::uint64_t missing_residue = 0;
  std::string reason;

  bool admits() const { return kind != Kind::NoWitness; }
};

std::string to_string(ResidueVerdict::Kind k);

// Whether n_k mod N hits every class infinitely often.
ResidueVerdict spectrum_admits_SstarN(const IntegerSpectrum& s, std::uint64_t n, std::size_t horizon);

// floor(n_k / N), k >= first + burn_in, strictly increasing with ratio >= d_min.
bool bounded_block_check(const IntegerSpectrum& s, std::uint64_t n, std::size_t horizon, double d_min,
                         std::size_t burn_in = 0);

class MultiSpectrum {
 public:
  MultiSpectrum(Index poly_dim, std::vector<MultiIndex> entries);

  Index poly_dim() const { return poly_dim_; }
  const std::vector<MultiIndex>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  Index poly_dim_;
  std::vector<MultiIndex> entries_;
};

// max over beta in Z_+^n \ {0} of #{(a, a') : a - a' = beta}.
std::size_t polydisc_c1(const MultiSpectrum& ms);

struct C1Certificate {
  std::size_t constant = 0;
  bool certified = false;  // some coordinate projection is lacunary with distinct values
  Index certifying_coordinate = -1;
};
C1Certificate polydisc_c1_certificate(const MultiSpectrum& ms);

struct C2Report {
  bool holds_at_horizon = false;
  std::vector<Index> failing_coordinates;
  std::size_t window_start = 0;
};

// Per-coordinate consecutive gaps strictly increasing over the last half.
C2Report polydisc_c2(const MultiSpectrum& ms);

}  // namespace cyclica
