#include "cyclica/multishift.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <sstream>

namespace cyclica {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

// Block-index lacunarity of Psi_N(f) after dropping the first quarter.
double reshaped_ratio(const VectorSeries& g) {
  auto s = g.spectrum();
  std::vector<Exponent> tail(s.begin() + static_cast<std::ptrdiff_t>(s.size() / 4), s.end());
  return lacunarity_ratio(tail);
}

std::vector<std::string> check_reshaped(const VectorSeries& f, const VectorSeries& g, const SstarNOptions& opts) {
  std::vector<std::string> w;
  const double r = reshaped_ratio(g);
  if (r < opts.min_block_ratio) {
    throw InputError("reshaped spectrum is not lacunary (block ratio " + fmt(r) +
                     "); use the polynomial-block criterion instead");
  }
  const double d0 = lacunarity_ratio(f.spectrum());
  if (std::isfinite(d0) && r < (d0 + 1.0) / 2.0) {
    w.push_back("reshaped block ratio " + fmt(r) + " below (d0+1)/2 for d0 = " + fmt(d0));
  }
  w.push_back("reshaped lacunarity verified at the horizon only");
  return w;
}

}  // namespace

VectorSeries psi_reshape(const VectorSeries& f, Exponent n) {
  if (n == 0) throw InputError("N must be positive");
  const Index d = f.dim();
  std::map<Exponent, CVector> blocks;
  for (const auto& t : f.terms()) {
    auto [it, fresh] = blocks.try_emplace(t.exp / n, CVector::Zero(d * static_cast<Index>(n)));
    it->second.segment(static_cast<Index>(t.exp % n) * d, d) = t.coeff;
  }
  std::vector<Term> terms;
  for (auto& [q, v] : blocks) terms.push_back({q, std::move(v)});
  return VectorSeries(d * static_cast<Index>(n), std::move(terms), f.truncation_degree() / n);
}

VectorSeries psi_unreshape(const VectorSeries& g, Index base_dim, Exponent n) {
  if (n == 0 || base_dim < 1 || g.dim() != base_dim * static_cast<Index>(n)) {
    throw InputError("reshaped dimension does not match d * N");
  }
  std::vector<Term> terms;
  for (const auto& t : g.terms()) {
    for (Exponent r = 0; r < n; ++r) {
      CVector c = t.coeff.segment(static_cast<Index>(r) * base_dim, base_dim);
      if (c.squaredNorm() > 0.0) terms.push_back({t.exp * n + r, c});
    }
  }
  return VectorSeries(base_dim, std::move(terms), (g.truncation_degree() + 1) * n - 1);
}

Verdict sstarN_cyclicity(const VectorSeries& f, Exponent n, const Tolerances& tol, const SstarNOptions& opts) {
  if (f.empty()) throw InputError("series has no stored terms");
  VectorSeries g = psi_reshape(f, n);
  auto warnings = check_reshaped(f, g, opts);
  Decomposition d = decompose(g, nullptr, tol);
  d.verdict.notes.insert(d.verdict.notes.begin(), warnings.begin(), warnings.end());
  return d.verdict;
}

Verdict sstarN_cyclicity(const VectorSeries& f, Exponent n, const TailModel& reshaped_model, const Tolerances& tol,
                         const SstarNOptions& opts) {
  if (f.empty()) throw InputError("series has no stored terms");
  VectorSeries g = psi_reshape(f, n);
  if (reshaped_model.dim() != g.dim()) throw InputError("reshaped model must live in C^{dN}");
  auto warnings = check_reshaped(f, g, opts);
  Decomposition d = decompose(g, &reshaped_model, tol);
  d.verdict.notes.insert(d.verdict.notes.begin(), warnings.begin(), warnings.end());
  return d.verdict;
}

ResidueStack residue_stack(std::span<const Scalar> coeffs, const IntegerSpectrum& s, std::uint64_t n,
                           const Tolerances& tol) {
  if (n == 0) throw InputError("N must be positive");
  if (coeffs.empty()) throw InputError("no coefficients");
  if (n > (1u << 16)) throw InputError("N too large for the residue stack");
  const std::size_t first = s.first_index();
  const std::size_t count = s.available(coeffs.size());
  if (count < coeffs.size()) throw InputError("spectrum shorter than the coefficient list");
  ResidueStack out;
  out.window_start = first + count / 2;
  // Terms sharing a block add into one stacked vector.
  std::vector<std::pair<long double, CVector>> blocks;
  bool have_prev = false;
  U128 prev_block = 0;
  for (std::size_t i = count / 2; i < count; ++i) {
    const std::size_t k = first + i;
    if (coeffs[i] == Scalar(0.0)) continue;
    CVector v = CVector::Zero(static_cast<Index>(n));
    v(static_cast<Index>(s.residue(k, n))) = coeffs[i];
    bool merged = false;
    if (auto e = s.exact(k)) {
      U128 q = *e / n;
      if (have_prev && prev_block == q) {
        blocks.back().second += v;
        merged = true;
      }
      prev_block = q;
      have_prev = true;
    } else {
      if (!blocks.empty() && s.approx(k) - blocks.back().first <= 2.0L * static_cast<long double>(n)) {
        throw InputError("cannot separate blocks of huge consecutive terms");
      }
      have_prev = false;
    }
    if (!merged) blocks.emplace_back(s.approx(k), v);
  }
  std::vector<CVector> vs;
  for (auto& b : blocks) vs.push_back(b.second);
  out.span = numerical_span(static_cast<Index>(n), vs, tol.rank);
  return out;
}

Verdict sstarN_cyclicity_scalar(std::span<const Scalar> coeffs, const IntegerSpectrum& s, std::uint64_t n,
                                const Tolerances& tol) {
  ResidueStack st = residue_stack(coeffs, s, n, tol);
  Verdict v{st.span.is_full() ? Cyclicity::Cyclic : Cyclicity::NonCyclic, Strength::AtHorizon, {}};
  v.notes.push_back("stacked rank " + std::to_string(st.span.dim()) + " of " + std::to_string(n) +
                    " from index " + std::to_string(st.window_start));
  return v;
}

Crosscheck residue_crosscheck(std::span<const Scalar> coeffs, const IntegerSpectrum& s, std::uint64_t n,
                              const Tolerances& tol) {
  Crosscheck c;
  c.modular = spectrum_admits_SstarN(s, n, coeffs.size());
  c.numerical = sstarN_cyclicity_scalar(coeffs, s, n, tol);
  c.agree = c.modular.admits() == c.numerical.cyclic();
  return c;
}

std::vector<std::uint64_t> af_membership(const IntegerSpectrum& s, std::uint64_t n_max, std::size_t horizon,
                                         unsigned jobs) {
  if (n_max == 0) return {};
  std::vector<char> ok(n_max + 1, 0);
  auto work = [&](std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t n = lo; n < hi; ++n) ok[n] = spectrum_admits_SstarN(s, n, horizon).admits();
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n_max)));
  std::vector<std::future<void>> tasks;
  const std::uint64_t chunk = (n_max + jobs - 1) / jobs;
  for (std::uint64_t lo = 1; lo <= n_max; lo += chunk) {
    std::uint64_t hi = std::min(n_max + 1, lo + chunk);
    tasks.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred, work, lo, hi));
  }
  for (auto& t : tasks) t.get();
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    if (ok[n]) out.push_back(n);
  }
  return out;
}

FamilyReport bounded_block_family_cyclicity(std::span<const VectorSeries> family, Exponent n, const Tolerances& tol,
                                            const SstarNOptions& opts) {
  if (family.empty()) throw InputError("empty family");
  FamilyReport out;
  std::vector<CVector> v;
  std::vector<std::string> lacunarity_failures;
  const Index d = family.front().dim();
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto& f = family[i];
    if (f.dim() != d) throw InputError("dimension mismatch across the family");
    if (f.empty()) throw InputError("family member has no stored terms");
    VectorSeries g = psi_reshape(f, n);
    const double r = reshaped_ratio(g);
    if (r < opts.min_block_ratio) {
      lacunarity_failures.push_back("member " + std::to_string(i) + " lacks the bounded-block property (block ratio " +
                                    fmt(r) + ")");
    }
    for (std::size_t k = g.size() / 2; k < g.size(); ++k) v.push_back(g.terms()[k].coeff);
  }
  out.span = numerical_span(d * static_cast<Index>(n), v, tol.rank);
  if (out.span.is_full()) {
    if (!lacunarity_failures.empty()) throw InputError(lacunarity_failures.front());
    out.verdict = {Cyclicity::Cyclic, Strength::AtHorizon, {"stacked tail span is full"}};
  } else {
    out.verdict = {Cyclicity::NonCyclic, Strength::AtHorizon,
                   {"stacked tail span has rank " + std::to_string(out.span.dim()) + " < " +
                    std::to_string(d * static_cast<Index>(n))}};
    out.warnings = lacunarity_failures;
  }
  return out;
}

}  // namespace cyclica
