#include "cyclica/coefspace.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cyclica {

namespace {

bool in_span(const Subspace& s, const CVector& v, const Tolerances& tol) {
  return s.distance(v) <= tol.rank * std::max(v.norm(), 1e-300);
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

TailModel::TailModel(Index dim, std::vector<TransientEntry> transient, std::vector<CVector> recurrent,
                     std::optional<IntegerSpectrum> spectrum)
    : dim_(dim), transient_(std::move(transient)), recurrent_(std::move(recurrent)), spectrum_(std::move(spectrum)) {
  if (dim < 1) throw InputError("tail model dimension must be at least 1");
  std::sort(transient_.begin(), transient_.end(), [](const auto& a, const auto& b) { return a.index < b.index; });
  for (std::size_t i = 0; i < transient_.size(); ++i) {
    if (transient_[i].coeff.size() != dim) throw InputError("transient vector has wrong dimension");
    if (!all_finite(transient_[i].coeff)) throw InputError("transient vector is not finite");
    if (i && transient_[i].index == transient_[i - 1].index) throw InputError("duplicate transient index");
  }
  for (const auto& r : recurrent_) {
    if (r.size() != dim) throw InputError("recurrent vector has wrong dimension");
    if (!all_finite(r)) throw InputError("recurrent vector is not finite");
  }
}

std::size_t TailModel::transient_end() const { return transient_.empty() ? 0 : transient_.back().index + 1; }

const TransientEntry* TailModel::find(std::size_t index) const {
  auto it = std::lower_bound(transient_.begin(), transient_.end(), index,
                             [](const TransientEntry& t, std::size_t i) { return t.index < i; });
  return (it != transient_.end() && it->index == index) ? &*it : nullptr;
}

Subspace tail_span(const TailModel& model, std::size_t m, const Tolerances& tol) {
  std::vector<CVector> v = model.recurrent();
  for (const auto& t : model.transient()) {
    if (t.index >= m) v.push_back(t.coeff);
  }
  return numerical_span(model.dim(), v, tol.rank);
}

Subspace x_star(const TailModel& model, const Tolerances& tol) {
  return numerical_span(model.dim(), model.recurrent(), tol.rank);
}

Subspace tail_span(const VectorSeries& f, std::size_t m, const Tolerances& tol, bool* beyond_data) {
  if (beyond_data) *beyond_data = m >= f.size();
  std::vector<CVector> v;
  for (std::size_t k = m; k < f.size(); ++k) v.push_back(f.terms()[k].coeff);
  return numerical_span(f.dim(), v, tol.rank);
}

void check_consistency(std::span<const CVector> coeffs, const TailModel& model, const Tolerances& tol) {
  if (!model.transient().empty() && model.transient().back().index >= coeffs.size()) {
    throw InputError("transient index " + std::to_string(model.transient().back().index) + " beyond the stored terms");
  }
  const Subspace xs = x_star(model, tol);
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k].size() != model.dim()) throw InputError("tail model and series dimensions differ");
    if (const auto* t = model.find(k)) {
      if ((t->coeff - coeffs[k]).norm() > tol.rank * std::max(1.0, coeffs[k].norm())) {
        throw InputError("transient vector at index " + std::to_string(k) + " does not match the stored coefficient");
      }
    } else if (!in_span(xs, coeffs[k], tol)) {
      throw InputError("coefficient at index " + std::to_string(k) +
                       " is neither transient nor in the recurrent span (relative residual " +
                       fmt(xs.distance(coeffs[k]) / coeffs[k].norm()) + ")");
    }
  }
}

TailAnalysis analyze_tail(Index dim, std::span<const CVector> coeffs, const TailModel* model, const Tolerances& tol) {
  tol.validate();
  TailAnalysis out;
  if (model) {
    if (model->dim() != dim) throw InputError("tail model and series dimensions differ");
    check_consistency(coeffs, *model, tol);
    out.x_star = x_star(*model, tol);
    out.strength = Strength::Proven;
    out.window_start = model->transient_end();
    for (auto it = model->transient().rbegin(); it != model->transient().rend(); ++it) {
      if (!in_span(out.x_star, it->coeff, tol)) {
        out.n_of_f = it->index + 1;
        break;
      }
    }
    return out;
  }
  if (coeffs.empty()) throw InputError("no stored terms; X_* cannot be determined");
  out.window_start = coeffs.size() / 2;
  std::vector<CVector> window(coeffs.begin() + static_cast<std::ptrdiff_t>(out.window_start), coeffs.end());
  out.x_star = numerical_span(dim, window, tol.rank);
  out.strength = Strength::AtHorizon;
  for (std::size_t k = out.window_start; k-- > 0;) {
    if (!in_span(out.x_star, coeffs[k], tol)) {
      out.n_of_f = k + 1;
      break;
    }
  }
  return out;
}

std::vector<std::string> lacunarity_warnings(std::span<const Exponent> spectrum,
                                             const std::optional<IntegerSpectrum>& declared) {
  std::vector<std::string> w;
  if (declared && declared->is_generator()) return w;
  double r = lacunarity_ratio(spectrum);
  if (r < kLacunarityFloor) {
    w.push_back("spectrum not lacunary at the horizon (min ratio " + fmt(r) + "); the criterion may not apply");
  } else {
    w.push_back("lacunarity verified at the horizon only (min ratio " + fmt(r) + ")");
  }
  return w;
}

Decomposition decompose(const VectorSeries& f, const TailModel* model, const Tolerances& tol) {
  if (f.empty()) throw InputError("series has no stored terms; it must be nonzero");
  const auto coeffs = f.coefficients();
  TailAnalysis ta = analyze_tail(f.dim(), coeffs, model, tol);
  Decomposition d;
  d.x_star = ta.x_star;
  d.n_of_f = ta.n_of_f;
  d.window_start = ta.window_start;
  d.warnings = lacunarity_warnings(f.spectrum(), model ? model->spectrum() : std::nullopt);
  if (model && model->spectrum()) {
    const auto& s = *model->spectrum();
    for (std::size_t j = 0; j < f.size() && j < s.available(f.size()); ++j) {
      auto e = s.exact(s.first_index() + j);
      if (e && *e != f.terms()[j].exp) throw InputError("stored exponent " + std::to_string(j) + " disagrees with the declared spectrum");
    }
  }
  std::vector<Term> p;
  for (std::size_t k = 0; k < ta.n_of_f; ++k) {
    CVector c = ta.x_star.project_out(coeffs[k]);
    if (c.norm() > tol.rank * coeffs[k].norm()) p.push_back({f.terms()[k].exp, c});
  }
  d.p = VectorSeries(f.dim(), std::move(p), f.truncation_degree());
  if (!d.p.empty()) d.p_exponent_degree = d.p.terms().back().exp;
  d.p_index_degree = static_cast<std::ptrdiff_t>(ta.n_of_f) - 1;
  d.verdict.value = d.x_star.is_full() ? Cyclicity::Cyclic : Cyclicity::NonCyclic;
  d.verdict.strength = ta.strength;
  d.verdict.notes = d.warnings;
  return d;
}

Verdict cyclicity_single(const VectorSeries& f, const TailModel* model, const Tolerances& tol) {
  return decompose(f, model, tol).verdict;
}

Verdict cyclicity_family(std::span<const TailModel> models, const Tolerances& tol) {
  if (models.empty()) throw InputError("empty family");
  std::vector<CVector> v;
  for (const auto& m : models) {
    if (m.dim() != models.front().dim()) throw InputError("dimension mismatch across the family");
    v.insert(v.end(), m.recurrent().begin(), m.recurrent().end());
  }
  Subspace s = numerical_span(models.front().dim(), v, tol.rank);
  return {s.is_full() ? Cyclicity::Cyclic : Cyclicity::NonCyclic, Strength::Proven, {}};
}

Verdict cyclicity_family(std::span<const VectorSeries> family, const Tolerances& tol) {
  if (family.empty()) throw InputError("empty family");
  std::vector<CVector> v;
  for (const auto& f : family) {
    if (f.dim() != family.front().dim()) throw InputError("dimension mismatch across the family");
    if (f.empty()) throw InputError("family member has no stored terms");
    for (std::size_t k = f.size() / 2; k < f.size(); ++k) v.push_back(f.terms()[k].coeff);
  }
  Subspace s = numerical_span(family.front().dim(), v, tol.rank);
  return {s.is_full() ? Cyclicity::Cyclic : Cyclicity::NonCyclic, Strength::AtHorizon, {}};
}

NecessaryResult necessary_condition(std::span<const VectorSeries> family, const Tolerances& tol) {
  if (family.empty()) throw InputError("empty family");
  const Index d = family.front().dim();
  std::size_t limit = family.front().size();
  for (const auto& f : family) {
    if (f.dim() != d) throw InputError("dimension mismatch across the family");
    limit = std::min(limit, f.size());
  }
  limit /= 2;
  NecessaryResult out;
  out.strength = Strength::AtHorizon;
  // Union spans shrink with m; find the first proper one.
  for (std::size_t m = 0; m <= limit; ++m) {
    std::vector<CVector> v;
    for (const auto& f : family) {
      for (std::size_t k = m; k < f.size(); ++k) v.push_back(f.terms()[k].coeff);
    }
    out.span = numerical_span(d, v, tol.rank);
    if (!out.span.is_full()) {
      out.possibly_cyclic = false;
      out.witness = m;
      return out;
    }
  }
  return out;
}

NecessaryResult necessary_condition(std::span<const TailModel> models, const Tolerances& tol) {
  if (models.empty()) throw InputError("empty family");
  const Index d = models.front().dim();
  std::size_t limit = 0;
  for (const auto& m : models) {
    if (m.dim() != d) throw InputError("dimension mismatch across the family");
    limit = std::max(limit, m.transient_end());
  }
  NecessaryResult out;
  out.strength = Strength::Proven;
  for (std::size_t m = 0; m <= limit; ++m) {
    std::vector<CVector> v;
    for (const auto& model : models) {
      Subspace s = tail_span(model, m, tol);
      for (Index j = 0; j < s.dim(); ++j) v.push_back(s.basis().col(j));
    }
    out.span = numerical_span(d, v, tol.rank);
    if (!out.span.is_full()) {
      out.possibly_cyclic = false;
      out.witness = m;
      return out;
    }
  }
  return out;
}

}  // namespace cyclica
