#include "cyclica/core.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace cyclica {

void Tolerances::validate() const {
  for (double t : {rank, orth, unitary, residual}) {
    if (!(t > 0.0) || !std::isfinite(t)) throw InputError("tolerances must be positive and finite");
  }
}

std::string to_string(Cyclicity c) { return c == Cyclicity::Cyclic ? "cyclic" : "noncyclic"; }

std::string to_string(Strength s) {
  switch (s) {
    case Strength::Proven: return "proven";
    case Strength::AtHorizon: return "at-horizon";
    case Strength::Numerical: return "numerical";
  }
  return "unknown";
}

bool all_finite(const CVector& v) {
  for (Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v(i).real()) || !std::isfinite(v(i).imag())) return false;
  }
  return true;
}

CVector basis_vector(Index dim, Index i) {
  CVector e = CVector::Zero(dim);
  e(i) = 1.0;
  return e;
}

Subspace::Subspace(Index ambient_dim) : ambient_(ambient_dim), basis_(ambient_dim, 0) {}

Subspace::Subspace(Index ambient_dim, CMatrix orthonormal_basis)
    : ambient_(ambient_dim), basis_(std::move(orthonormal_basis)) {
  if (basis_.rows() != ambient_) throw InputError("subspace basis has wrong ambient dimension");
}

Subspace Subspace::full(Index ambient_dim) {
  return Subspace(ambient_dim, CMatrix::Identity(ambient_dim, ambient_dim));
}

CMatrix Subspace::projector() const { return basis_ * basis_.adjoint(); }

CVector Subspace::project(const CVector& v) const {
  if (v.size() != ambient_) throw InputError("vector and subspace dimensions differ");
  if (dim() == 0) return CVector::Zero(ambient_);
  return basis_ * (basis_.adjoint() * v);
}

CVector Subspace::project_out(const CVector& v) const { return v - project(v); }

double Subspace::distance(const CVector& v) const { return project_out(v).norm(); }

Subspace Subspace::complement() const {
  if (dim() == 0) return full(ambient_);
  if (is_full()) return Subspace(ambient_);
  CMatrix q = Eigen::HouseholderQR<CMatrix>(basis_).householderQ();
  return Subspace(ambient_, q.rightCols(ambient_ - dim()));
}

Subspace numerical_span(Index dim, std::span<const CVector> vectors, double tol_rank) {
  CMatrix a(dim, static_cast<Index>(vectors.size()));
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    if (vectors[j].size() != dim) throw InputError("vector dimension mismatch in span");
    a.col(static_cast<Index>(j)) = vectors[j];
  }
  return numerical_span(a, tol_rank);
}

Subspace subspace_sum(const Subspace& a, const Subspace& b, double tol_rank) {
  if (a.ambient_dim() != b.ambient_dim()) throw InputError("subspace dimension mismatch");
  CMatrix m(a.ambient_dim(), a.dim() + b.dim());
  m << a.basis(), b.basis();
  return numerical_span(m, tol_rank);
}

double projection_defect(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw InputError("subspace dimension mismatch");
  if (a.ambient_dim() == 0) return 0.0;
  CMatrix d = a.projector() - b.projector();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(d, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double containment_defect(const Subspace& inner, const Subspace& outer) {
  double worst = 0.0;
  for (Index j = 0; j < inner.dim(); ++j) worst = std::max(worst, outer.distance(inner.basis().col(j)));
  return worst;
}

VectorSeries::VectorSeries(Index dim, std::vector<Term> terms, std::optional<Exponent> truncation)
    : dim_(dim) {
  if (dim < 1) throw InputError("series dimension must be at least 1");
  Exponent top = 0;
  bool first = true;
  for (auto& t : terms) {
    if (t.coeff.size() != dim) throw InputError("coefficient dimension mismatch at exponent " + std::to_string(t.exp));
    if (!all_finite(t.coeff)) throw InputError("non-finite coefficient at exponent " + std::to_string(t.exp));
    if (!first && t.exp <= top) throw InputError("exponents must be strictly increasing");
    top = t.exp;
    first = false;
    if (t.coeff.squaredNorm() == 0.0) continue;
    terms_.push_back(std::move(t));
  }
  truncation_ = truncation.value_or(top);
  if (!terms_.empty() && truncation_ < terms_.back().exp) throw InputError("truncation degree below the largest exponent");
}

VectorSeries VectorSeries::zero(Index dim, Exponent truncation) { return VectorSeries(dim, {}, truncation); }

VectorSeries VectorSeries::scalar(std::span<const Exponent> exps, std::span<const Scalar> coeffs) {
  if (exps.size() != coeffs.size()) throw InputError("exponent and coefficient counts differ");
  std::vector<Term> terms;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    CVector c(1);
    c(0) = coeffs[i];
    terms.push_back({exps[i], c});
  }
  return VectorSeries(1, std::move(terms));
}

std::vector<Exponent> VectorSeries::spectrum() const {
  std::vector<Exponent> s;
  s.reserve(terms_.size());
  for (const auto& t : terms_) s.push_back(t.exp);
  return s;
}

std::vector<CVector> VectorSeries::coefficients() const {
  std::vector<CVector> c;
  c.reserve(terms_.size());
  for (const auto& t : terms_) c.push_back(t.coeff);
  return c;
}

CVector VectorSeries::coefficient(Exponent n) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), n, [](const Term& t, Exponent e) { return t.exp < e; });
  if (it != terms_.end() && it->exp == n) return it->coeff;
  return CVector::Zero(dim_);
}

double VectorSeries::squared_norm() const {
  double s = 0.0;
  for (const auto& t : terms_) s += t.coeff.squaredNorm();
  return s;
}

double VectorSeries::norm() const { return std::sqrt(squared_norm()); }

VectorSeries backward_shift(const VectorSeries& f, Exponent n) {
  std::vector<Term> out;
  for (const auto& t : f.terms()) {
    if (t.exp >= n) out.push_back({t.exp - n, t.coeff});
  }
  Exponent trunc = f.truncation_degree() >= n ? f.truncation_degree() - n : 0;
  return VectorSeries(f.dim(), std::move(out), trunc);
}

VectorSeries forward_shift(const VectorSeries& f, Exponent n) {
  std::vector<Term> out;
  for (const auto& t : f.terms()) {
    if (t.exp > UINT64_MAX - n) throw InputError("forward shift overflows the exponent range");
    out.push_back({t.exp + n, t.coeff});
  }
  if (f.truncation_degree() > UINT64_MAX - n) throw InputError("forward shift overflows the exponent range");
  return VectorSeries(f.dim(), std::move(out), f.truncation_degree() + n);
}

Scalar inner_product(const VectorSeries& f, const VectorSeries& g) {
  if (f.dim() != g.dim()) throw InputError("inner product of series with different dimensions");
  Scalar s = 0.0;
  auto i = f.terms().begin();
  auto j = g.terms().begin();
  while (i != f.terms().end() && j != g.terms().end()) {
    if (i->exp < j->exp) {
      ++i;
    } else if (j->exp < i->exp) {
      ++j;
    } else {
      s += j->coeff.dot(i->coeff);
      ++i;
      ++j;
    }
  }
  return s;
}

namespace {

VectorSeries combine(const VectorSeries& f, const VectorSeries& g, Scalar b) {
  if (f.dim() != g.dim()) throw InputError("cannot combine series with different dimensions");
  std::map<Exponent, CVector> acc;
  for (const auto& t : f.terms()) acc.emplace(t.exp, t.coeff);
  for (const auto& t : g.terms()) {
    auto [it, fresh] = acc.emplace(t.exp, b * t.coeff);
    if (!fresh) it->second += b * t.coeff;
  }
  std::vector<Term> terms;
  for (auto& [e, c] : acc) terms.push_back({e, std::move(c)});
  return VectorSeries(f.dim(), std::move(terms), std::max(f.truncation_degree(), g.truncation_degree()));
}

}  // namespace

VectorSeries operator+(const VectorSeries& f, const VectorSeries& g) { return combine(f, g, 1.0); }
VectorSeries operator-(const VectorSeries& f, const VectorSeries& g) { return combine(f, g, -1.0); }

VectorSeries operator*(Scalar c, const VectorSeries& f) {
  std::vector<Term> terms;
  for (const auto& t : f.terms()) terms.push_back({t.exp, c * t.coeff});
  return VectorSeries(f.dim(), std::move(terms), f.truncation_degree());
}

}  // namespace cyclica
