#include "cyclica/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace cyclica {

namespace {

constexpr std::uint64_t kSieveLimit = 100000;
constexpr std::size_t kMaxCycle = 1u << 20;

bool mul_overflows(std::uint64_t a, std::uint64_t b, std::uint64_t& out) {
  return __builtin_mul_overflow(a, b, &out);
}

unsigned valuation(std::uint64_t n, std::uint64_t p) {
  unsigned v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

std::uint64_t ipow(std::uint64_t p, unsigned e) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (mul_overflows(r, p, r)) throw InputError("modulus exceeds 64 bits");
  }
  return r;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

const std::vector<std::uint64_t>& prime_table() {
  static const std::vector<std::uint64_t> primes = [] {
    std::vector<bool> composite(kSieveLimit + 1, false);
    std::vector<std::uint64_t> out;
    for (std::uint64_t i = 2; i <= kSieveLimit; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (std::uint64_t j = i * i; j <= kSieveLimit; j += i) composite[j] = true;
    }
    return out;
  }();
  return primes;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<U128>(a) * b % m);
}

std::optional<std::uint64_t> modinv(std::uint64_t a, std::uint64_t m) {
  if (m == 1) return 0;
  __int128 t = 0, nt = 1, r = m, nr = a % m;
  while (nr != 0) {
    __int128 q = r / nr;
    std::tie(t, nt) = std::make_pair(nt, t - q * nt);
    std::tie(r, nr) = std::make_pair(nr, r - q * nr);
  }
  if (r != 1) return std::nullopt;
  if (t < 0) t += m;
  return static_cast<std::uint64_t>(t);
}

DivisorClosedSet::DivisorClosedSet(std::vector<std::uint64_t> generators) {
  if (generators.empty()) generators.push_back(1);
  for (auto g : generators) {
    if (g == 0) throw InputError("divisor-closed set generators must be positive");
  }
  std::sort(generators.begin(), generators.end());
  generators.erase(std::unique(generators.begin(), generators.end()), generators.end());
  generators_ = std::move(generators);
  for (auto g : generators_) {
    std::uint64_t next = lcm_ / std::gcd(lcm_, g);
    if (mul_overflows(next, g, next)) throw InputError("lcm of generators exceeds 64 bits");
    lcm_ = next;
  }
}

std::vector<std::uint64_t> DivisorClosedSet::closure() const {
  std::set<std::uint64_t> out;
  for (auto g : generators_) {
    for (std::uint64_t d = 1; d * d <= g; ++d) {
      if (g % d == 0) {
        out.insert(d);
        out.insert(g / d);
      }
    }
  }
  return {out.begin(), out.end()};
}

bool DivisorClosedSet::contains(std::uint64_t m) const {
  if (m == 0) return false;
  return std::any_of(generators_.begin(), generators_.end(), [m](std::uint64_t g) { return g % m == 0; });
}

unsigned DivisorClosedSet::alpha(std::uint64_t p) const {
  unsigned a = 0;
  for (auto g : generators_) a = std::max(a, valuation(g, p));
  return a;
}

CrtSequence::CrtSequence(DivisorClosedSet set) : set_(std::move(set)) {
  for (auto p : prime_factors(set_.lcm())) {
    unsigned a = set_.alpha(p);
    factor_.emplace_back(p, a);
    if (mul_overflows(modulus_, ipow(p, a + 1), modulus_)) throw InputError("CRT block modulus exceeds 64 bits");
  }
  std::size_t total = 0;
  for (auto g : set_.generators()) total += g;
  if (total > kMaxCycle) throw InputError("divisor-closed set generators too large for the residue cycle");
  for (auto g : set_.generators()) {
    for (std::uint64_t j = 0; j < g; ++j) pairs_.push_back({g, j});
  }
}

std::vector<std::uint64_t> CrtSequence::excluded_primes(std::size_t k) const {
  if (k + 1 > kSieveLimit) throw InputError("CRT index beyond the prime table");
  std::vector<std::uint64_t> out;
  for (auto p : prime_table()) {
    if (p > k + 1) break;
    if (set_.lcm() % p != 0) out.push_back(p);
  }
  return out;
}

std::uint64_t CrtSequence::target_residue(std::size_t k) const {
  const Pair& pr = pairs_[k % pairs_.size()];
  std::uint64_t x = 0;
  for (auto [p, a] : factor_) {
    std::uint64_t q = ipow(p, a + 1);
    std::uint64_t want = pr.j % ipow(p, valuation(pr.g, p));
    std::uint64_t rest = modulus_ / q;
    std::uint64_t inv = *modinv(rest % q, q);
    x = (x + mulmod(mulmod(want, inv, q), rest, modulus_)) % modulus_;
  }
  return x;
}

std::uint64_t CrtSequence::t_of(std::size_t k) const {
  if (modulus_ == 1) return 0;
  std::uint64_t q = 1;
  for (auto p : excluded_primes(k)) q = mulmod(q, p % modulus_, modulus_);
  return mulmod(target_residue(k), *modinv(q, modulus_), modulus_);
}

std::uint64_t CrtSequence::residue(std::size_t k, std::uint64_t n) const {
  if (n == 0) throw InputError("modulus must be positive");
  if (k == 0) throw InputError("CRT sequence index starts at 1");
  std::uint64_t fact = 1;
  for (std::uint64_t i = 2; i <= k + 1 && fact != 0; ++i) fact = mulmod(fact, i % n, n);
  std::uint64_t q = 1;
  for (auto p : excluded_primes(k)) q = mulmod(q, p % n, n);
  std::uint64_t head = mulmod(modulus_ % n, fact, n);
  std::uint64_t tail = mulmod(q, t_of(k) % n, n);
  return (head + tail) % n;
}

std::optional<U128> CrtSequence::exact(std::size_t k) const {
  if (k == 0) throw InputError("CRT sequence index starts at 1");
  U128 head = modulus_;
  for (std::uint64_t i = 2; i <= k + 1; ++i) {
    if (__builtin_mul_overflow(head, static_cast<U128>(i), &head)) return std::nullopt;
  }
  U128 q = 1;
  for (auto p : excluded_primes(k)) {
    if (__builtin_mul_overflow(q, static_cast<U128>(p), &q)) return std::nullopt;
  }
  U128 r;
  if (__builtin_mul_overflow(q, static_cast<U128>(t_of(k)), &r)) return std::nullopt;
  U128 out;
  if (__builtin_add_overflow(head, r, &out)) return std::nullopt;
  return out;
}

long double CrtSequence::approx(std::size_t k) const {
  if (auto e = exact(k)) return static_cast<long double>(*e);
  long double head = factorial_approx(k) - static_cast<long double>(k);
  head *= static_cast<long double>(modulus_);
  long double q = 1.0L;
  for (auto p : excluded_primes(k)) q *= static_cast<long double>(p);
  return head + q * static_cast<long double>(t_of(k));
}

std::uint64_t factorial_sequence(std::size_t k) {
  auto e = factorial_exact(k);
  if (!e || *e > UINT64_MAX) throw InputError("factorial sequence term " + std::to_string(k) + " exceeds 64 bits");
  return static_cast<std::uint64_t>(*e);
}

std::optional<U128> factorial_exact(std::size_t k) {
  if (k == 0) throw InputError("factorial sequence index starts at 1");
  U128 f = 1;
  for (std::uint64_t i = 2; i <= k + 1; ++i) {
    if (__builtin_mul_overflow(f, static_cast<U128>(i), &f)) return std::nullopt;
  }
  if (__builtin_add_overflow(f, static_cast<U128>(k), &f)) return std::nullopt;
  return f;
}

std::uint64_t factorial_residue(std::size_t k, std::uint64_t n) {
  if (n == 0) throw InputError("modulus must be positive");
  if (k == 0) throw InputError("factorial sequence index starts at 1");
  std::uint64_t f = 1 % n;
  for (std::uint64_t i = 2; i <= k + 1 && f != 0; ++i) f = mulmod(f, i % n, n);
  return (f + k % n) % n;
}

long double factorial_approx(std::size_t k) {
  long double f = 1.0L;
  for (std::uint64_t i = 2; i <= k + 1; ++i) f *= static_cast<long double>(i);
  return f + static_cast<long double>(k);
}

CrcPointSet CrcPointSet::standard(Index dim, std::size_t count) {
  CrcPointSet ps;
  ps.basis = CMatrix::Identity(dim, dim);
  for (std::size_t k = 1; k <= count; ++k) ps.lambdas.emplace_back(1.0 / static_cast<double>(k + 1), 0.0);
  return ps;
}

void CrcPointSet::validate() const {
  if (basis.rows() < 1 || basis.rows() != basis.cols()) throw InputError("CRC basis must be square");
  if (Eigen::FullPivLU<CMatrix>(basis).rank() != basis.rows()) throw InputError("CRC basis is not a basis");
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    double m = std::abs(lambdas[i]);
    if (!(m > 0.0) || !(m < 1.0)) throw InputError("CRC points must satisfy 0 < |lambda| < 1");
    for (std::size_t j = 0; j < i; ++j) {
      if (lambdas[j] == lambdas[i]) throw InputError("CRC points must be distinct");
    }
  }
}

CVector crc_sequence(const CrcPointSet& points, std::size_t k) {
  if (k == 0 || k > points.lambdas.size()) throw InputError("CRC index out of range");
  const Scalar lam = points.lambdas[k - 1];
  CVector a = CVector::Zero(points.basis.rows());
  Scalar w = 1.0;
  for (Index j = 0; j < points.basis.cols(); ++j) {
    a += w * points.basis.col(j);
    w *= lam;
  }
  return a;
}

std::vector<double> abakumov_weights(const VectorSeries& f) {
  if (f.size() < 2) throw InputError("weights need at least two stored terms");
  const auto& t = f.terms();
  std::vector<double> tail(t.size() + 1, 0.0);
  for (std::size_t k = t.size(); k-- > 0;) tail[k] = tail[k + 1] + t[k].coeff.squaredNorm();
  std::vector<double> r;
  for (std::size_t k = 0; k + 1 < t.size(); ++k) {
    if (!(tail[k + 1] > 0.0)) throw InputError("zero tail in weights");
    r.push_back(t[k].coeff.squaredNorm() / tail[k + 1]);
  }
  return r;
}

}  // namespace cyclica
