#pragma once

// Test-side reference computations. They use column-pivoted QR and plain
// loops so they share no code path with the SVD-based library routines.

#include "cyclica/coefspace.hpp"
#include "cyclica/core.hpp"

#include <random>
#include <vector>

namespace oracle {

using namespace cyclica;

// Orthonormal basis of span(vs) by column-pivoted QR.
inline CMatrix qr_basis(Index dim, const std::vector<CVector>& vs, double tol = 1e-9) {
  if (vs.empty()) return CMatrix(dim, 0);
  CMatrix a(dim, static_cast<Index>(vs.size()));
  for (std::size_t i = 0; i < vs.size(); ++i) a.col(static_cast<Index>(i)) = vs[i];
  Eigen::ColPivHouseholderQR<CMatrix> qr(a);
  qr.setThreshold(tol);
  const Index r = qr.rank();
  CMatrix q = qr.householderQ() * CMatrix::Identity(dim, dim);
  return q.leftCols(r);
}

inline double distance(const CMatrix& q, const CVector& v) { return (v - q * (q.adjoint() * v)).norm(); }

inline CVector gaussian(std::mt19937_64& rng, Index d) {
  std::normal_distribution<double> g;
  CVector v(d);
  for (Index i = 0; i < d; ++i) v(i) = Scalar(g(rng), g(rng));
  return v;
}

struct TailInstance {
  VectorSeries f;
  TailModel model;
  Index rank = 0;  // dim of the recurrent span
};

// Random series with a declared tail: a few generic transient vectors, then
// coefficients drawn from a random recurrent span, on a lacunary spectrum.
inline TailInstance random_tail_instance(std::mt19937_64& rng) {
  const Index d = 1 + static_cast<Index>(rng() % 4);
  const Index r = static_cast<Index>(rng() % static_cast<std::uint64_t>(d + 1));
  std::vector<CVector> recurrent;
  for (Index i = 0; i < r; ++i) recurrent.push_back(gaussian(rng, d));
  const std::size_t count = 16 + rng() % 16;
  const std::size_t n_transient = r == 0 ? 1 + rng() % 4 : rng() % 5;
  std::vector<TransientEntry> transient;
  std::vector<Term> terms;
  Exponent e = 1 + rng() % 3;
  for (std::size_t k = 0; k < count; ++k) {
    CVector c;
    if (k < n_transient) {
      c = gaussian(rng, d);
      transient.push_back({k, c});
    } else if (r > 0) {
      c = CVector::Zero(d);
      for (const auto& v : recurrent) c += gaussian(rng, 1)(0) * v;
    } else {
      break;
    }
    terms.push_back({e, c});
    e = 2 * e + rng() % 3;
  }
  std::vector<Exponent> exps;
  for (const auto& t : terms) exps.push_back(t.exp);
  VectorSeries f(d, std::move(terms));
  return {f, TailModel(d, transient, recurrent, IntegerSpectrum::explicit_list(exps)), r};
}

}  // namespace oracle
