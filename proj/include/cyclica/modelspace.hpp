#pragma once

#include "cyclica/core.hpp"

#include <cstdint>
#include <vector>

namespace cyclica {

// The orbit of p has a constant space of dimension != 1 at some peeling step.
class NotCyclicGenerator : public Error {
 public:
  using Error::Error;
};

// p = 0 or its orbit is numerically dependent.
class DegenerateInput : public InputError {
 public:
  using InputError::InputError;
};

// Theta(z) = sum_j coeffs[j] z^j with d x d coefficients.
class MatrixPolynomial {
 public:
  explicit MatrixPolynomial(Index dim = 1);
  MatrixPolynomial(Index dim, std::vector<CMatrix> coeffs);

  static MatrixPolynomial identity(Index dim);

  Index dim() const { return dim_; }
  // Largest index with a nonzero coefficient, 0 for the zero polynomial.
  std::size_t degree() const;
  const std::vector<CMatrix>& coeffs() const { return coeffs_; }
  const CMatrix& coeff(std::size_t j) const { return coeffs_.at(j); }

  CMatrix operator()(Scalar z) const;

 private:
  Index dim_;
  std::vector<CMatrix> coeffs_;
};

MatrixPolynomial operator*(const MatrixPolynomial& a, const MatrixPolynomial& b);

// (I - x x*) + z x x*
MatrixPolynomial potapov_factor(const CVector& x);

// b(x_1) b(x_2) ... b(x_{N+1}), leftmost first.
struct PotapovProduct {
  Index dim = 1;
  std::vector<CVector> factors;

  MatrixPolynomial assembled() const;
  // N, or -1 for the empty product.
  long degree_n() const { return static_cast<long>(factors.size()) - 1; }
};

// Nullity of Theta(0)* with an absolute singular value cutoff.
Index kernel_dim_theta0star(const MatrixPolynomial& theta, const Tolerances& tol);

// Distance of x_j from the image of the previous factors' adjoint chain
// (x_1^perp, then pushed through 1 - P_{x_j}), j = 2..N+1.
// All margins above tol_rank means dim Ker Theta(0)* = 1.
std::vector<double> nesting_margins(const std::vector<CVector>& factors);

// Coefficients of a polynomial of degree <= n stacked into C^{(n+1)d}.
CVector poly_stack(const VectorSeries& p, std::size_t n);
VectorSeries poly_unstack(const CVector& v, Index dim);

// span{S*^j p : 0 <= j <= n} inside C^{(n+1)d}.
Subspace orbit_span(const VectorSeries& p, std::size_t n, const Tolerances& tol);

// K_Theta = null of T*, T the block Toeplitz matrix of Theta truncated to degree n.
Subspace model_space_basis(const MatrixPolynomial& theta, std::size_t n, const Tolerances& tol);

PotapovProduct factorize_Ep(const VectorSeries& p, const Tolerances& tol);

struct PotapovReport {
  double unitarity_defect = 0.0;  // max ||Theta* Theta - I|| on the circle
  double norm_defect = 0.0;       // max | ||x_k|| - 1 |
  Scalar gamma{1.0, 0.0};
  double gamma_defect = 0.0;  // | |gamma| - 1 |
  double det_fit_defect = 0.0;  // max |det Theta(z) / z^{N+1} - gamma|
  Index kernel_dim = 0;
  std::vector<double> nesting_margins;
  Index k_theta_dim = 0;

  bool unitary_ok = true;
  bool det_ok = true;
  bool kernel_ok = true;
  bool nesting_ok = true;
  bool dimension_ok = true;

  bool ok() const { return unitary_ok && det_ok && kernel_ok && nesting_ok && dimension_ok; }
};

PotapovReport verify_potapov(const PotapovProduct& pp, std::size_t trials, std::uint64_t seed, const Tolerances& tol);

struct Synthesis {
  PotapovProduct product;
  VectorSeries generator;
  Subspace k_theta;
  std::size_t attempts = 0;
};

Synthesis synthesize_from_vectors(const std::vector<CVector>& factors, const Tolerances& tol, std::uint64_t seed = 42);

}  // namespace cyclica
