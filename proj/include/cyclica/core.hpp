#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cyclica {

using Scalar = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using Index = Eigen::Index;
using Exponent = std::uint64_t;
using MultiIndex = std::vector<Exponent>;
using U128 = unsigned __int128;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input or a violated precondition.
class InputError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

struct Tolerances {
  double rank = 1e-9;
  double orth = 1e-10;
  double unitary = 1e-8;
  double residual = 1e-6;

  void validate() const;
};

enum class Cyclicity { Cyclic, NonCyclic };
enum class Strength { Proven, AtHorizon, Numerical };

struct Verdict {
  Cyclicity value = Cyclicity::NonCyclic;
  Strength strength = Strength::AtHorizon;
  std::vector<std::string> notes;

  bool cyclic() const { return value == Cyclicity::Cyclic; }
};

std::string to_string(Cyclicity c);
std::string to_string(Strength s);

bool all_finite(const CVector& v);
CVector basis_vector(Index dim, Index i);

// Orthonormal basis of a subspace of C^n, stored column-wise.
class Subspace {
 public:
  explicit Subspace(Index ambient_dim = 0);
  Subspace(Index ambient_dim, CMatrix orthonormal_basis);

  static Subspace full(Index ambient_dim);

  Index ambient_dim() const { return ambient_; }
  Index dim() const { return basis_.cols(); }
  bool is_full() const { return dim() == ambient_; }
  bool is_zero() const { return dim() == 0; }
  const CMatrix& basis() const { return basis_; }

  CMatrix projector() const;
  CVector project(const CVector& v) const;
  CVector project_out(const CVector& v) const;
  double distance(const CVector& v) const;
  Subspace complement() const;

 private:
  Index ambient_;
  CMatrix basis_;
};

// Column span of `columns`, keeping singular directions with
// sigma >= tol_rank * sigma_max.
template <typename Derived>
Subspace numerical_span(const Eigen::MatrixBase<Derived>& columns, double tol_rank) {
  const Index n = columns.rows();
  if (columns.cols() == 0 || n == 0) return Subspace(n);
  CMatrix a = columns.template cast<Scalar>();
  Eigen::BDCSVD<CMatrix> svd(a, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || !(s(0) > 0.0)) return Subspace(n);
  Index r = 0;
  while (r < s.size() && s(r) >= tol_rank * s(0)) ++r;
  return Subspace(n, svd.matrixU().leftCols(r));
}

Subspace numerical_span(Index dim, std::span<const CVector> vectors, double tol_rank);
Subspace subspace_sum(const Subspace& a, const Subspace& b, double tol_rank);

template <typename Derived>
CVector project_vector(const Eigen::MatrixBase<Derived>& v, const Subspace& s) {
  return s.project(v.template cast<Scalar>());
}

// Spectral norm of P_a - P_b.
double projection_defect(const Subspace& a, const Subspace& b);

// Largest distance from a unit basis vector of `inner` to `outer`.
double containment_defect(const Subspace& inner, const Subspace& outer);

struct Term {
  Exponent exp = 0;
  CVector coeff;
};

// Finitely stored C^d valued power series sum_k a_k z^{n_k}.
// Exponents strictly increase, coefficients are finite and nonzero.
class VectorSeries {
 public:
  VectorSeries() = default;
  VectorSeries(Index dim, std::vector<Term> terms, std::optional<Exponent> truncation = {});

  static VectorSeries zero(Index dim, Exponent truncation = 0);
  static VectorSeries scalar(std::span<const Exponent> exps, std::span<const Scalar> coeffs);

  Index dim() const { return dim_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  Exponent truncation_degree() const { return truncation_; }

  std::vector<Exponent> spectrum() const;
  std::vector<CVector> coefficients() const;
  CVector coefficient(Exponent n) const;
  double squared_norm() const;
  double norm() const;

 private:
  Index dim_ = 1;
  std::vector<Term> terms_;
  Exponent truncation_ = 0;
};

VectorSeries backward_shift(const VectorSeries& f, Exponent n);
VectorSeries forward_shift(const VectorSeries& f, Exponent n);

// Linear in the first argument.
Scalar inner_product(const VectorSeries& f, const VectorSeries& g);

VectorSeries operator+(const VectorSeries& f, const VectorSeries& g);
VectorSeries operator-(const VectorSeries& f, const VectorSeries& g);
VectorSeries operator*(Scalar c, const VectorSeries& f);

}  // namespace cyclica
