#include "cyclica/blocks.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace cyclica {

BlockSeries::BlockSeries(Index dim, std::size_t degree, std::vector<Block> blocks)
    : dim_(dim), degree_(degree), blocks_(std::move(blocks)) {
  if (dim < 1) throw InputError("series dimension must be at least 1");
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    const auto& b = blocks_[k];
    if (b.poly.size() != degree + 1) throw InputError("block " + std::to_string(k) + " must hold N+1 coefficients");
    double norm = 0.0;
    for (const auto& c : b.poly) {
      if (c.size() != dim) throw InputError("block coefficient has wrong dimension");
      if (!all_finite(c)) throw InputError("non-finite block coefficient");
      norm += c.squaredNorm();
    }
    if (norm == 0.0) throw InputError("block " + std::to_string(k) + " is zero");
    if (k && b.start <= blocks_[k - 1].start + degree) throw InputError("blocks must be separated by more than N");
  }
}

VectorSeries BlockSeries::to_series() const {
  std::vector<Term> terms;
  for (const auto& b : blocks_) {
    for (std::size_t i = 0; i < b.poly.size(); ++i) terms.push_back({b.start + i, b.poly[i]});
  }
  return VectorSeries(dim_, std::move(terms));
}

CVector BlockSeries::stack(std::size_t k) const { return stack_poly(blocks_.at(k).poly); }

CVector stack_poly(const std::vector<CVector>& poly) {
  if (poly.empty()) return CVector(0);
  const Index d = poly.front().size();
  CVector v(d * static_cast<Index>(poly.size()));
  for (std::size_t i = 0; i < poly.size(); ++i) v.segment(static_cast<Index>(i) * d, d) = poly[i];
  return v;
}

std::vector<CVector> unstack_poly(const CVector& v, Index dim) {
  if (dim < 1 || v.size() % dim != 0) throw InputError("stack length is not a multiple of the dimension");
  std::vector<CVector> out;
  for (Index i = 0; i < v.size() / dim; ++i) out.push_back(v.segment(i * dim, dim));
  return out;
}

Subspace compute_L(const BlockSeries& bs, const PolyDirectionModel& model, const Tolerances& tol) {
  const Index n = bs.dim() * static_cast<Index>(bs.degree() + 1);
  for (const auto& r : model.recurrent) {
    if (r.size() != n) throw InputError("recurrent block polynomial has wrong length");
  }
  Subspace l = numerical_span(n, model.recurrent, tol.rank);
  for (std::size_t k = 0; k < bs.size(); ++k) {
    const CVector s = bs.stack(k);
    auto t = std::find_if(model.transient.begin(), model.transient.end(), [k](const auto& e) { return e.index == k; });
    if (t != model.transient.end()) {
      if (t->coeff.size() != n || (t->coeff - s).norm() > tol.rank * std::max(1.0, s.norm())) {
        throw InputError("transient block " + std::to_string(k) + " does not match the stored block");
      }
    } else if (l.distance(s) > tol.rank * s.norm()) {
      throw InputError("block " + std::to_string(k) + " is neither transient nor in the recurrent span");
    }
  }
  for (const auto& t : model.transient) {
    if (t.index >= bs.size()) throw InputError("transient block index beyond the stored blocks");
  }
  return l;
}

Index local_rank(const Subspace& l, Index dim, std::size_t degree, std::size_t samples, std::uint64_t seed,
                 const Tolerances& tol) {
  if (l.ambient_dim() != dim * static_cast<Index>(degree + 1)) throw InputError("L has the wrong ambient dimension");
  if (l.dim() == 0) return 0;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Index best = 0;
  for (std::size_t s = 0; s < std::max<std::size_t>(samples, 1); ++s) {
    const Scalar z = std::polar(0.95 * std::sqrt(u(rng)), 2.0 * M_PI * u(rng));
    CMatrix e = CMatrix::Zero(dim, l.dim());
    Scalar w = 1.0;
    for (std::size_t i = 0; i <= degree; ++i) {
      e += w * l.basis().middleRows(static_cast<Index>(i) * dim, dim);
      w *= z;
    }
    best = std::max(best, numerical_span(e, tol.rank).dim());
  }
  return best;
}

BlocksVerdict blocks_cyclicity(const BlockSeries& bs, const PolyDirectionModel& model, const Tolerances& tol,
                               std::uint64_t seed, std::size_t samples) {
  tol.validate();
  BlocksVerdict out;
  out.l = compute_L(bs, model, tol);
  out.local_rank = local_rank(out.l, bs.dim(), bs.degree(), samples, seed, tol);
  out.verdict.value = out.local_rank == bs.dim() ? Cyclicity::Cyclic : Cyclicity::NonCyclic;
  out.verdict.strength = Strength::Proven;
  out.verdict.notes.push_back("local rank " + std::to_string(out.local_rank) + " from " + std::to_string(samples) +
                              " seeded evaluation points");
  return out;
}

BlocksDecomposition blocks_decompose(const BlockSeries& bs, const PolyDirectionModel& model, const Tolerances& tol) {
  const Subspace l = compute_L(bs, model, tol);
  BlocksDecomposition out;
  std::vector<Term> g, p;
  for (std::size_t k = 0; k < bs.size(); ++k) {
    const CVector s = bs.stack(k);
    CVector on = l.project(s);
    CVector off = s - on;
    if (off.norm() <= tol.rank * s.norm()) {
      off.setZero();
      on = s;
    } else {
      ++out.transient_blocks;
    }
    auto gp = unstack_poly(on, bs.dim()), pp = unstack_poly(off, bs.dim());
    for (std::size_t i = 0; i < gp.size(); ++i) {
      g.push_back({bs.blocks()[k].start + i, gp[i]});
      p.push_back({bs.blocks()[k].start + i, pp[i]});
    }
  }
  out.g = VectorSeries(bs.dim(), std::move(g));
  out.p = VectorSeries(bs.dim(), std::move(p));
  return out;
}

NecessaryResult blocks_necessary(const BlockSeries& bs, const Tolerances& tol) {
  if (bs.size() == 0) throw InputError("no stored blocks");
  NecessaryResult out;
  out.strength = Strength::AtHorizon;
  const std::size_t start = bs.size() / 2;
  std::vector<CVector> v;
  for (std::size_t k = start; k < bs.size(); ++k) {
    for (const auto& c : bs.blocks()[k].poly) v.push_back(c);
  }
  out.span = numerical_span(bs.dim(), v, tol.rank);
  if (!out.span.is_full()) {
    out.possibly_cyclic = false;
    out.witness = start;
  }
  return out;
}

}  // namespace cyclica
