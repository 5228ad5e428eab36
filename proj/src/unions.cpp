#include "cyclica/unions.hpp"

#include "cyclica/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

namespace cyclica {

VectorSeries stack_shifted(const ShiftedSpectrumFamily& fam) {
  if (fam.components.empty()) throw InputError("empty family");
  if (fam.shifts.size() != fam.components.size()) throw InputError("one shift per component is required");
  for (std::size_t i = 1; i < fam.base.size(); ++i) {
    if (fam.base[i] <= fam.base[i - 1]) throw InputError("base spectrum must be strictly increasing");
  }
  const std::int64_t mmin = *std::min_element(fam.shifts.begin(), fam.shifts.end());
  Index total = 0;
  for (std::size_t i = 0; i < fam.components.size(); ++i) {
    const auto& c = fam.components[i];
    for (const auto& t : c.terms()) {
      const __int128 lambda = static_cast<__int128>(t.exp) - fam.shifts[i];
      if (lambda < 0 || !std::binary_search(fam.base.begin(), fam.base.end(), static_cast<Exponent>(lambda))) {
        throw InputError("component " + std::to_string(i) + " has exponent " + std::to_string(t.exp) +
                         " outside base + shift");
      }
    }
    total += c.dim();
  }
  std::vector<Term> terms;
  Exponent trunc = 0;
  for (Exponent lambda : fam.base) {
    const __int128 out = static_cast<__int128>(lambda) + mmin;
    if (out < 0) continue;
    CVector v(total);
    Index off = 0;
    for (std::size_t i = 0; i < fam.components.size(); ++i) {
      const auto& c = fam.components[i];
      const __int128 e = static_cast<__int128>(lambda) + fam.shifts[i];
      v.segment(off, c.dim()) = e >= 0 ? c.coefficient(static_cast<Exponent>(e)) : CVector::Zero(c.dim());
      off += c.dim();
    }
    terms.push_back({static_cast<Exponent>(out), v});
    trunc = static_cast<Exponent>(out);
  }
  return VectorSeries(total, std::move(terms), trunc);
}

Decomposition shifted_stack_cyclicity(const ShiftedSpectrumFamily& fam, const TailModel* stacked_model,
                                      const Tolerances& tol) {
  return decompose(stack_shifted(fam), stacked_model, tol);
}

VectorSeries apply_conj_multiplier(const VectorSeries& f, std::span<const Scalar> theta) {
  std::map<Exponent, CVector> acc;
  for (const auto& t : f.terms()) {
    for (std::size_t l = 0; l < theta.size(); ++l) {
      if (theta[l] == Scalar(0.0) || t.exp < l) continue;
      auto [it, fresh] = acc.try_emplace(t.exp - l, CVector::Zero(f.dim()));
      it->second += std::conj(theta[l]) * t.coeff;
    }
  }
  std::vector<Term> terms;
  for (auto& [e, c] : acc) terms.push_back({e, std::move(c)});
  return VectorSeries(f.dim(), std::move(terms), f.truncation_degree());
}

std::vector<VectorSeries> multiplier_reduce(std::span<const VectorSeries> components,
                                            std::span<const std::vector<Scalar>> multipliers) {
  if (components.size() != multipliers.size()) throw InputError("one multiplier per component is required");
  std::vector<VectorSeries> out;
  for (std::size_t i = 0; i < components.size(); ++i) out.push_back(apply_conj_multiplier(components[i], multipliers[i]));
  return out;
}

std::string to_string(Sufficiency s) { return s == Sufficiency::CyclicSufficient ? "cyclic-sufficient" : "inconclusive"; }

Sufficiency stacked_sufficient(std::span<const VectorSeries> phis, const std::vector<Exponent>& base,
                               const TailModel* stacked_model, const Tolerances& tol) {
  ShiftedSpectrumFamily fam;
  fam.base = base;
  for (std::size_t i = 0; i < phis.size(); ++i) {
    fam.components.push_back(forward_shift(phis[i], i));
    fam.shifts.push_back(static_cast<std::int64_t>(i));
  }
  return shifted_stack_cyclicity(fam, stacked_model, tol).verdict.cyclic() ? Sufficiency::CyclicSufficient
                                                                          : Sufficiency::Inconclusive;
}

namespace {

std::vector<Exponent> spectrum_window(const IntegerSpectrum& s, const PrescribedOptions& opts, std::size_t i) {
  std::vector<Exponent> out;
  const auto* ex = std::get_if<IntegerSpectrum::Explicit>(&s.backing());
  for (std::size_t k = s.first_index();; ++k) {
    if (ex && k >= ex->terms.size()) {
      throw InputError("spectrum " + std::to_string(i) + " is finite below the degree cap");
    }
    auto e = s.exact(k);
    if (!e || *e > opts.degree_cap) break;
    out.push_back(static_cast<Exponent>(*e));
  }
  if (out.size() < opts.min_terms) {
    throw InputError("spectrum " + std::to_string(i) + " has fewer than " + std::to_string(opts.min_terms) +
                     " terms below the degree cap");
  }
  if (lacunarity_ratio(out) < kLacunarityFloor) throw InputError("spectrum " + std::to_string(i) + " is not lacunary");
  return out;
}

CVector random_unit(std::mt19937_64& rng, Index n) {
  std::normal_distribution<double> nd(0.0, 1.0);
  CVector v(n);
  for (Index i = 0; i < n; ++i) v(i) = Scalar(nd(rng), nd(rng));
  return v / v.norm();
}

VectorSeries stack_components(const std::vector<VectorSeries>& comps) {
  std::map<Exponent, CVector> acc;
  const Index d = static_cast<Index>(comps.size());
  for (Index i = 0; i < d; ++i) {
    for (const auto& t : comps[static_cast<std::size_t>(i)].terms()) {
      auto [it, fresh] = acc.try_emplace(t.exp, CVector::Zero(d));
      it->second(i) = t.coeff(0);
    }
  }
  std::vector<Term> terms;
  for (auto& [e, c] : acc) terms.push_back({e, std::move(c)});
  return VectorSeries(d, std::move(terms));
}

// Some constant shift maps every window onto the first one.
std::optional<std::vector<std::int64_t>> common_shifts(const std::vector<std::vector<Exponent>>& windows) {
  std::vector<std::int64_t> shifts;
  for (const auto& w : windows) {
    if (w.size() != windows.front().size()) return std::nullopt;
    const std::int64_t m = static_cast<std::int64_t>(w[0]) - static_cast<std::int64_t>(windows.front()[0]);
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (static_cast<std::int64_t>(w[k]) - static_cast<std::int64_t>(windows.front()[k]) != m) return std::nullopt;
    }
    shifts.push_back(m);
  }
  return shifts;
}

struct Candidate {
  bool passed = false;
  double score = std::numeric_limits<double>::infinity();
  Strength strength = Strength::AtHorizon;
  std::vector<double> residuals;
};

Candidate test_extension(const std::vector<VectorSeries>& comps, const std::vector<std::vector<Exponent>>& windows,
                         const Tolerances& tol) {
  Candidate c;
  if (auto shifts = common_shifts(windows)) {
    ShiftedSpectrumFamily fam{windows.front(), *shifts, comps};
    c.passed = shifted_stack_cyclicity(fam, nullptr, tol).verdict.cyclic();
    c.score = 0.0;
    return c;
  }
  // Orbit harness: the tail span must be full and every constant target must
  // be approached, with residual at least halved over the shift budget.
  c.strength = Strength::Numerical;
  const VectorSeries stacked = stack_components(comps);
  if (!decompose(stacked, nullptr, tol).x_star.is_full()) return c;
  std::vector<VectorSeries> targets;
  for (Index i = 0; i < stacked.dim(); ++i) targets.push_back(VectorSeries(stacked.dim(), {{0, basis_vector(stacked.dim(), i)}}));
  const Exponent budget = std::min(stacked.truncation_degree(), kMaxOrbitBudget);
  auto reps = orbit_project_many(stacked, targets, budget, tol);
  c.passed = true;
  c.score = 0.0;
  for (const auto& r : reps) {
    c.residuals.push_back(r.final_residual);
    c.score = std::max(c.score, r.final_residual);
    if (!(r.residuals.back() <= 0.5 * r.residuals.front())) c.passed = false;
  }
  return c;
}

}  // namespace

PrescribedConstruction construct_prescribed_spectra(std::span<const IntegerSpectrum> spectra, const Tolerances& tol,
                                                    const PrescribedOptions& opts) {
  tol.validate();
  if (spectra.empty()) throw InputError("at least one spectrum is required");
  std::vector<std::vector<Exponent>> windows;
  for (std::size_t i = 0; i < spectra.size(); ++i) windows.push_back(spectrum_window(spectra[i], opts, i));

  std::mt19937_64 rng(opts.seed);
  // Coefficients decay like 2^-k so the truncations stay in one H^2 ball.
  auto draw = [&](const std::vector<Exponent>& w, Index n) {
    std::vector<Term> terms;
    for (std::size_t k = 0; k < w.size(); ++k) terms.push_back({w[k], std::exp2(-static_cast<double>(k)) * random_unit(rng, n)});
    return VectorSeries(n, std::move(terms));
  };
  auto coordinate = [](const VectorSeries& s, Index i) {
    std::vector<Term> terms;
    for (const auto& t : s.terms()) terms.push_back({t.exp, t.coeff.segment(i, 1)});
    return VectorSeries(1, std::move(terms));
  };

  PrescribedConstruction out;
  out.components.push_back(draw(windows[0], 1));
  out.attempts = 1;
  out.verdict = {Cyclicity::Cyclic, Strength::AtHorizon, {"scalar component with nonzero coefficients"}};
  for (std::size_t j = 1; j < spectra.size(); ++j) {
    const Index n = static_cast<Index>(j + 1);
    std::vector<std::vector<Exponent>> ws(windows.begin(), windows.begin() + static_cast<std::ptrdiff_t>(j + 1));
    bool done = false;
    for (std::size_t attempt = 0; attempt < opts.max_attempts && !done; ++attempt) {
      ++out.attempts;
      VectorSeries psi = draw(windows[j], n);
      if (!decompose(psi, nullptr, tol).x_star.is_full()) continue;
      Candidate best;
      std::optional<VectorSeries> pick;
      for (Index i = 0; i < n; ++i) {
        std::vector<VectorSeries> comps = out.components;
        comps.push_back(coordinate(psi, i));
        Candidate c = test_extension(comps, ws, tol);
        if (c.passed && c.score < best.score) {
          best = c;
          pick = comps.back();
        }
      }
      if (pick) {
        out.components.push_back(*pick);
        out.target_residuals = best.residuals;
        out.verdict.strength = best.strength == Strength::Numerical ? Strength::Numerical : out.verdict.strength;
        done = true;
      }
    }
    if (!done) {
      throw NumericalError("no extension of step " + std::to_string(j + 1) + " passed after " +
                           std::to_string(opts.max_attempts) + " attempts");
    }
  }
  out.stacked = stack_components(out.components);
  if (out.verdict.strength == Strength::Numerical) {
    out.verdict.notes = {"orbit residuals against every constant target at least halved over the shift budget"};
  } else if (spectra.size() > 1) {
    out.verdict.notes = {"shifted-stack tail span is full at the horizon"};
  }
  return out;
}

std::vector<DcCheck> dc_checks(const DcLedger& ledger) {
  std::vector<DcCheck> out;
  auto get = [&](const std::string& name) {
    auto it = ledger.declared.find(name);
    if (it == ledger.declared.end()) throw InputError("dc not declared for '" + name + "'");
    return it->second;
  };
  for (const auto& [name, v] : ledger.declared) {
    out.push_back({"0 <= dc(" + name + ") <= d", v >= 0 && v <= ledger.dim,
                   "dc = " + std::to_string(v) + ", d = " + std::to_string(ledger.dim)});
  }
  for (const auto& [name, c] : ledger.cyclic) {
    const Index v = get(name);
    out.push_back({"cyclic(" + name + ") iff dc = d", c == (v == ledger.dim),
                   std::string(c ? "declared cyclic" : "declared noncyclic") + " with dc = " + std::to_string(v)});
  }
  for (const auto& [a, b] : ledger.inclusions) {
    out.push_back({"dc(" + a + ") <= dc(" + b + ")", get(a) <= get(b), "inclusion " + a + " in " + b});
  }
  for (const auto& s : ledger.sums) {
    const Index fs = get(s.f), gs = get(s.g), ss = get(s.sum);
    out.push_back({"dc(" + s.sum + ") <= dc(" + s.f + ") + dc(" + s.g + ")", ss <= fs + gs, "subadditivity"});
    out.push_back({"max(dc(" + s.f + "), dc(" + s.g + ")) <= dc(" + s.sum + ")", std::max(fs, gs) <= ss,
                   "monotonicity of the sum"});
  }
  return out;
}

}  // namespace cyclica
