#pragma once

#include "cyclica/core.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace cyclica {

// Primes below 100000, generated once.
const std::vector<std::uint64_t>& prime_table();

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::optional<std::uint64_t> modinv(std::uint64_t a, std::uint64_t m);

// Set of positive integers closed under taking divisors, given by generators.
class DivisorClosedSet {
 public:
  explicit DivisorClosedSet(std::vector<std::uint64_t> generators);

  const std::vector<std::uint64_t>& generators() const { return generators_; }
  std::vector<std::uint64_t> closure() const;
  bool contains(std::uint64_t m) const;
  std::uint64_t lcm() const { return lcm_; }
  // Largest exponent of p among the generators.
  unsigned alpha(std::uint64_t p) const;

 private:
  std::vector<std::uint64_t> generators_;
  std::uint64_t lcm_ = 1;
};

// n_k = M (k+1)! + r_k, k >= 1. Residues mod N of n_k cover Z/N exactly
// when N lies in the set; otherwise the class N-1 is eventually missed.
class CrtSequence {
 public:
  explicit CrtSequence(DivisorClosedSet set);

  const DivisorClosedSet& set() const { return set_; }
  std::uint64_t block_modulus() const { return modulus_; }
  std::size_t cycle_length() const { return pairs_.size(); }

  std::vector<std::uint64_t> excluded_primes(std::size_t k) const;
  std::uint64_t target_residue(std::size_t k) const;
  std::uint64_t residue(std::size_t k, std::uint64_t n) const;
  std::optional<U128> exact(std::size_t k) const;
  long double approx(std::size_t k) const;

 private:
  struct Pair {
    std::uint64_t g;
    std::uint64_t j;
  };
  // r_k = Q_k t_k with Q_k the product of excluded primes.
  std::uint64_t t_of(std::size_t k) const;

  DivisorClosedSet set_;
  std::vector<std::pair<std::uint64_t, unsigned>> factor_;  // p, alpha_p
  std::uint64_t modulus_ = 1;
  std::vector<Pair> pairs_;
};

// (k+1)! + k for k >= 1.
std::uint64_t factorial_sequence(std::size_t k);
std::optional<U128> factorial_exact(std::size_t k);
std::uint64_t factorial_residue(std::size_t k, std::uint64_t n);
long double factorial_approx(std::size_t k);

struct CrcPointSet {
  CMatrix basis;                // columns x_0 .. x_{d-1}
  std::vector<Scalar> lambdas;  // lambda_k for k = 1, 2, ...

  static CrcPointSet standard(Index dim, std::size_t count);
  void validate() const;
};

// a_k = sum_j lambda_k^j x_j.
CVector crc_sequence(const CrcPointSet& points, std::size_t k);

// R_k = |a_k|^2 / sum_{j>k} |a_j|^2 for every stored term but the last.
std::vector<double> abakumov_weights(const VectorSeries& f);

}  // namespace cyclica
