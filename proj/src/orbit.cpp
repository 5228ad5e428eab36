#include "cyclica/orbit.hpp"

#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <unordered_map>

namespace cyclica {

namespace {

using SparseC = Eigen::SparseMatrix<Scalar>;

struct MultiIndexHash {
  std::size_t operator()(const MultiIndex& m) const {
    std::size_t h = 0xcbf29ce484222325ull;
    for (auto x : m) h = (h ^ std::hash<Exponent>{}(x)) * 0x100000001b3ull;
    return h;
  }
};

void check_budget(const VectorSeries& f, Exponent n_max) {
  if (f.empty()) throw InputError("orbit of the zero series");
  if (n_max > kMaxOrbitBudget) throw InputError("shift budget above " + std::to_string(kMaxOrbitBudget));
}

CVector projection_rhs(const VectorSeries& f, const VectorSeries& g, Exponent n_max) {
  CVector b = CVector::Zero(static_cast<Index>(n_max + 1));
  for (const auto& gt : g.terms()) {
    auto lo = std::lower_bound(f.terms().begin(), f.terms().end(), gt.exp,
                               [](const Term& t, Exponent e) { return t.exp < e; });
    for (auto it = lo; it != f.terms().end() && it->exp - gt.exp <= n_max; ++it) {
      b(static_cast<Index>(it->exp - gt.exp)) += it->coeff.dot(gt.coeff);
    }
  }
  return b;
}

double direct_residual(const VectorSeries& f, const VectorSeries& g, const CVector& c) {
  std::map<Exponent, CVector> acc;
  for (Index n = 0; n < c.size(); ++n) {
    if (c(n) == Scalar(0.0)) continue;
    for (const auto& t : f.terms()) {
      if (t.exp < static_cast<Exponent>(n)) continue;
      auto [it, fresh] = acc.try_emplace(t.exp - static_cast<Exponent>(n), CVector::Zero(f.dim()));
      it->second += c(n) * t.coeff;
    }
  }
  for (const auto& t : g.terms()) {
    auto [it, fresh] = acc.try_emplace(t.exp, CVector::Zero(f.dim()));
    it->second -= t.coeff;
  }
  double s = 0.0;
  for (const auto& [e, v] : acc) s += v.squaredNorm();
  return std::sqrt(s);
}

double lsqr_residual(const SparseC& a, const CVector& b) {
  const double bnorm = b.norm();
  if (bnorm == 0.0) return 0.0;
  CVector x = CVector::Zero(a.cols());
  CVector u = b / bnorm;
  CVector v = a.adjoint() * u;
  double alpha = v.norm();
  if (alpha == 0.0) return bnorm;
  v /= alpha;
  CVector w = v;
  double phibar = bnorm, rhobar = alpha, anorm2 = 0.0;
  const int maxit = static_cast<int>(std::min<Index>(5000, 4 * a.cols() + 20));
  for (int it = 0; it < maxit; ++it) {
    u = a * v - alpha * u;
    double beta = u.norm();
    if (beta > 0.0) u /= beta;
    anorm2 += alpha * alpha + beta * beta;
    v = a.adjoint() * u - beta * v;
    alpha = v.norm();
    if (alpha > 0.0) v /= alpha;
    const double rho = std::hypot(rhobar, beta);
    const double c = rhobar / rho, s = beta / rho;
    const double theta = s * alpha;
    rhobar = -c * alpha;
    const double phi = c * phibar;
    phibar = s * phibar;
    x += (phi / rho) * w;
    w = v - (theta / rho) * w;
    const double arnorm = phibar * alpha * std::abs(c);
    if (phibar <= 1e-14 * bnorm || arnorm <= 1e-13 * std::sqrt(anorm2) * phibar || alpha == 0.0) break;
  }
  return (a * x - b).norm();
}

double ls_residual(const SparseC& a, const CVector& b, const Tolerances& tol) {
  if (a.cols() == 0) return b.norm();
  if (static_cast<double>(a.rows()) * static_cast<double>(a.cols()) <= 4e6) {
    CMatrix dense(a);
    Eigen::CompleteOrthogonalDecomposition<CMatrix> cod;
    cod.setThreshold(tol.rank);
    cod.compute(dense);
    return (dense * cod.solve(b) - b).norm();
  }
  return lsqr_residual(a, b);
}

}  // namespace

CMatrix orbit_gram(const VectorSeries& f, Exponent n_max) {
  check_budget(f, n_max);
  const Index n = static_cast<Index>(n_max + 1);
  CMatrix g = CMatrix::Zero(n, n);
  const auto& t = f.terms();
  // Last column: G(m, n_max) = sum_e <f^(e + n_max), f^(e + m)>.
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k].exp < n_max) continue;
    const Exponent e = t[k].exp - n_max;
    auto lo = std::lower_bound(t.begin(), t.end(), e, [](const Term& x, Exponent v) { return x.exp < v; });
    for (auto it = lo; it != t.end() && it->exp - e <= n_max; ++it) {
      g(static_cast<Index>(it->exp - e), n - 1) += it->coeff.dot(t[k].coeff);
    }
  }
  std::vector<const CVector*> head(static_cast<std::size_t>(n), nullptr);
  for (const auto& x : t) {
    if (x.exp <= n_max) head[x.exp] = &x.coeff;
  }
  for (Index m = n - 2; m >= 0; --m) {
    for (Index j = n - 2; j >= m; --j) {
      Scalar v = g(m + 1, j + 1);
      if (head[static_cast<std::size_t>(m)] && head[static_cast<std::size_t>(j)]) {
        v += head[static_cast<std::size_t>(m)]->dot(*head[static_cast<std::size_t>(j)]);
      }
      g(m, j) = v;
    }
  }
  for (Index m = 0; m < n; ++m) {
    g(m, m) = g(m, m).real();
    for (Index j = m + 1; j < n; ++j) g(j, m) = std::conj(g(m, j));
  }
  return g;
}

std::vector<OrbitReport> orbit_project_many(const VectorSeries& f, std::span<const VectorSeries> targets,
                                            Exponent n_max, const Tolerances& tol) {
  tol.validate();
  check_budget(f, n_max);
  const Index n = static_cast<Index>(n_max + 1);
  const CMatrix g = orbit_gram(f, n_max);
  std::vector<CVector> rhs;
  std::vector<OrbitReport> reports(targets.size());
  std::vector<CVector> y(targets.size(), CVector::Zero(n));
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i].dim() != f.dim()) throw InputError("target and series dimensions differ");
    rhs.push_back(projection_rhs(f, targets[i], n_max));
    reports[i].target_norm = targets[i].norm();
    reports[i].truncation_degree = std::max(f.truncation_degree(), targets[i].truncation_degree());
  }
  CMatrix l = CMatrix::Zero(n, n);
  std::vector<Index> acc;
  double pmax = 0.0, pmin = 0.0;
  for (Index j = 0; j < n; ++j) {
    const Index r = static_cast<Index>(acc.size());
    const double gjj = g(j, j).real();
    if (gjj > 0.0) {
      CVector col(r);
      for (Index i = 0; i < r; ++i) col(i) = g(acc[static_cast<std::size_t>(i)], j);
      CVector w = r ? CVector(l.topLeftCorner(r, r).triangularView<Eigen::Lower>().solve(col)) : CVector(0);
      const double delta = gjj - w.squaredNorm();
      if (delta > tol.rank * gjj) {
        l.row(r).head(r) = w.adjoint();
        l(r, r) = std::sqrt(delta);
        for (std::size_t i = 0; i < targets.size(); ++i) {
          Scalar lead = r ? w.dot(y[i].head(r)) : Scalar(0.0);
          y[i](r) = (rhs[i](j) - lead) / l(r, r);
        }
        acc.push_back(j);
        pmax = acc.size() == 1 ? delta : std::max(pmax, delta);
        pmin = acc.size() == 1 ? delta : std::min(pmin, delta);
      }
    }
    const Index rr = static_cast<Index>(acc.size());
    for (std::size_t i = 0; i < targets.size(); ++i) {
      const double t2 = reports[i].target_norm * reports[i].target_norm;
      reports[i].residuals.push_back(std::sqrt(std::max(0.0, t2 - y[i].head(rr).squaredNorm())));
      reports[i].gram_condition.push_back(rr ? pmax / pmin : 0.0);
    }
  }
  const Index r = static_cast<Index>(acc.size());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    CVector c = l.topLeftCorner(r, r).adjoint().triangularView<Eigen::Upper>().solve(y[i].head(r));
    reports[i].coefficients = CVector::Zero(n);
    for (Index k = 0; k < r; ++k) reports[i].coefficients(acc[static_cast<std::size_t>(k)]) = c(k);
    for (auto a : acc) reports[i].accepted.push_back(static_cast<Exponent>(a));
    reports[i].final_residual = direct_residual(f, targets[i], reports[i].coefficients);
  }
  return reports;
}

OrbitReport orbit_project(const VectorSeries& f, const VectorSeries& g, Exponent n_max, const Tolerances& tol) {
  return orbit_project_many(f, std::span<const VectorSeries>(&g, 1), n_max, tol).front();
}

PolyOrbitReport orbit_project_polydisc(const PolySeries& f, const PolySeries& g, const MultiIndex& box,
                                       const Tolerances& tol, std::size_t chain_steps) {
  tol.validate();
  if (f.size() == 0) throw InputError("orbit of the zero series");
  if (f.poly_dim() != g.poly_dim() || f.dim() != g.dim()) throw InputError("target and series shapes differ");
  const auto nd = static_cast<std::size_t>(f.poly_dim());
  if (box.size() != nd) throw InputError("box has wrong length");
  if (chain_steps == 0) chain_steps = 1;
  double count = 1.0;
  for (auto b : box) count *= static_cast<double>(b) + 1.0;
  if (count > 2e7) throw InputError("shift box too large");

  const Index d = f.dim();
  std::unordered_map<MultiIndex, Index, MultiIndexHash> rows;
  auto row_of = [&](const MultiIndex& m) {
    auto [it, fresh] = rows.try_emplace(m, static_cast<Index>(rows.size()));
    return it->second;
  };
  for (const auto& t : g.terms()) row_of(t.exp);

  struct Column {
    MultiIndex alpha;
    std::vector<std::pair<Index, std::size_t>> entries;  // row block, term
  };
  std::vector<Column> cols;
  MultiIndex alpha(nd, 0), e(nd);
  while (true) {
    Column c{alpha, {}};
    for (std::size_t k = 0; k < f.size(); ++k) {
      const auto& t = f.terms()[k];
      if (!dominates(t.exp, alpha)) continue;
      for (std::size_t i = 0; i < nd; ++i) e[i] = t.exp[i] - alpha[i];
      c.entries.emplace_back(row_of(e), k);
    }
    if (!c.entries.empty()) cols.push_back(std::move(c));
    std::size_t i = 0;
    while (i < nd && alpha[i] == box[i]) alpha[i++] = 0;
    if (i == nd) break;
    ++alpha[i];
  }

  CVector b = CVector::Zero(static_cast<Index>(rows.size()) * d);
  for (const auto& t : g.terms()) b.segment(rows.at(t.exp) * d, d) = t.coeff;

  PolyOrbitReport out;
  out.target_norm = b.norm();
  for (std::size_t step = 0; step <= chain_steps; ++step) {
    MultiIndex sub(nd);
    for (std::size_t i = 0; i < nd; ++i) {
      sub[i] = static_cast<Exponent>((static_cast<U128>(box[i]) * step + chain_steps - 1) / chain_steps);
    }
    std::vector<Eigen::Triplet<Scalar>> trip;
    Index ncol = 0;
    for (const auto& c : cols) {
      if (!dominates(sub, c.alpha)) continue;
      for (const auto& [row, k] : c.entries) {
        const CVector& a = f.terms()[k].coeff;
        for (Index q = 0; q < d; ++q) {
          if (a(q) != Scalar(0.0)) trip.emplace_back(row * d + q, ncol, a(q));
        }
      }
      ++ncol;
    }
    SparseC a(b.size(), ncol);
    a.setFromTriplets(trip.begin(), trip.end());
    out.boxes.push_back(sub);
    out.columns.push_back(static_cast<std::size_t>(ncol));
    out.residuals.push_back(ls_residual(a, b, tol));
  }
  return out;
}

OneInOrbit one_in_orbit_check(const PolySeries& f, const MultiIndex& box, const Tolerances& tol) {
  const PolySeries ft = f.truncate(box);
  if (ft.size() == 0) throw InputError("no stored terms inside the box");
  const auto nd = static_cast<std::size_t>(f.poly_dim());
  auto constant_target = [&](const MultiIndex& eta, Index q) {
    CVector c = basis_vector(f.dim(), q);
    return PolySeries(f.poly_dim(), f.dim(), {{eta, c}}, Enumeration::AsGiven);
  };
  OneInOrbit out;
  for (Index q = 0; q < f.dim(); ++q) {
    auto rep = orbit_project_polydisc(ft, constant_target(MultiIndex(nd, 0), q), box, tol, 1);
    out.residual = std::max(out.residual, rep.residuals.back());
  }
  out.reached = out.residual < tol.residual;
  for (std::size_t i = 0; i < nd; ++i) {
    MultiIndex eta(nd, 0);
    eta[i] = 1;
    if (!dominates(box, eta)) continue;
    double worst = 0.0;
    for (Index q = 0; q < f.dim(); ++q) {
      auto rep = orbit_project_polydisc(ft, constant_target(eta, q), box, tol, 1);
      worst = std::max(worst, rep.residuals.back());
    }
    out.replay.emplace_back(eta, worst);
  }
  return out;
}

TailDiagnostics tail_diagnostics(const VectorSeries& f, std::span<const VectorSeries> probes) {
  if (f.size() < 2) throw InputError("diagnostics need at least two stored terms");
  const auto& t = f.terms();
  const std::size_t k_count = t.size();
  TailDiagnostics out;
  std::vector<double> tail(k_count + 1, 0.0);
  for (std::size_t k = k_count; k-- > 0;) tail[k] = tail[k + 1] + t[k].coeff.squaredNorm();
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < k_count; ++k) {
    out.weight_terms.push_back(t[k].coeff.squaredNorm() / tail[k + 1]);
    acc += out.weight_terms.back();
    out.weight_partial.push_back(acc);
  }
  for (const auto& h : probes) {
    if (h.dim() != f.dim()) throw InputError("probe and series dimensions differ");
    std::vector<double> terms, partial, pair;
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < k_count; ++k) {
      double term = 0.0;
      Scalar ip = 0.0;
      for (std::size_t l = k + 1; l < k_count; ++l) {
        CVector c = h.coefficient(t[l].exp - t[k].exp);
        term += c.squaredNorm();
        ip += c.dot(t[l].coeff);
      }
      terms.push_back(term);
      s += term;
      partial.push_back(s);
      pair.push_back(std::abs(ip) / t[k].coeff.norm());
    }
    const std::size_t q = (3 * terms.size()) / 4;
    const double head = q ? partial[q - 1] : 0.0;
    out.last_quarter_increment.push_back(s > 0.0 ? (s - head) / s : 0.0);
    out.double_sum_terms.push_back(std::move(terms));
    out.double_sum_partial.push_back(std::move(partial));
    out.pairings.push_back(std::move(pair));
  }
  return out;
}

std::vector<VectorSeries> default_probes(const VectorSeries& f, std::uint64_t seed) {
  std::vector<VectorSeries> out;
  for (Exponent n = 1; n <= 4; ++n) {
    VectorSeries s = backward_shift(f, n);
    if (!s.empty()) out.push_back(std::move(s));
  }
  const Exponent top = std::min<Exponent>(f.truncation_degree(), 255);
  for (std::uint64_t i = 0; i < 4; ++i) {
    std::mt19937_64 rng(seed + i);
    std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
    std::vector<Term> terms;
    for (Exponent m = 0; m <= top; ++m) {
      CVector c(f.dim());
      for (Index q = 0; q < f.dim(); ++q) c(q) = Scalar(nd(rng), nd(rng));
      terms.push_back({m, c * std::exp2(-static_cast<double>(m) / 16.0)});
    }
    out.emplace_back(f.dim(), std::move(terms));
  }
  return out;
}

}  // namespace cyclica
