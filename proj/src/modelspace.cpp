#include "cyclica/modelspace.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace cyclica {

namespace {

CMatrix thin_q(const CMatrix& a) {
  Eigen::HouseholderQR<CMatrix> qr(a);
  return qr.householderQ() * CMatrix::Identity(a.rows(), a.cols());
}

// Scales v so that its largest entry is real and positive.
CVector fix_phase(CVector v) {
  Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  const double m = std::abs(v(arg));
  if (m > 0.0) v *= std::conj(v(arg)) / m;
  return v;
}

std::size_t poly_degree(const VectorSeries& p) {
  if (p.empty()) throw DegenerateInput("p is zero");
  return static_cast<std::size_t>(p.terms().back().exp);
}

// Block lower-triangular Toeplitz matrix of theta acting on degree <= n.
CMatrix toeplitz(const MatrixPolynomial& theta, std::size_t n) {
  const Index d = theta.dim();
  const Index size = d * static_cast<Index>(n + 1);
  CMatrix t = CMatrix::Zero(size, size);
  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t j = 0; j <= i && i - j < theta.coeffs().size(); ++j) {
      t.block(static_cast<Index>(i) * d, static_cast<Index>(j) * d, d, d) = theta.coeff(i - j);
    }
  }
  return t;
}

double hermitian_norm(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

MatrixPolynomial::MatrixPolynomial(Index dim) : dim_(dim) {
  if (dim < 1) throw InputError("matrix polynomial dimension must be at least 1");
}

MatrixPolynomial::MatrixPolynomial(Index dim, std::vector<CMatrix> coeffs) : dim_(dim), coeffs_(std::move(coeffs)) {
  if (dim < 1) throw InputError("matrix polynomial dimension must be at least 1");
  for (const auto& c : coeffs_) {
    if (c.rows() != dim || c.cols() != dim) throw InputError("matrix coefficient has wrong shape");
  }
}

MatrixPolynomial MatrixPolynomial::identity(Index dim) { return MatrixPolynomial(dim, {CMatrix::Identity(dim, dim)}); }

std::size_t MatrixPolynomial::degree() const {
  for (std::size_t j = coeffs_.size(); j-- > 0;) {
    if (!coeffs_[j].isZero(0.0)) return j;
  }
  return 0;
}

CMatrix MatrixPolynomial::operator()(Scalar z) const {
  CMatrix acc = CMatrix::Zero(dim_, dim_);
  for (std::size_t j = coeffs_.size(); j-- > 0;) acc = acc * z + coeffs_[j];
  return acc;
}

MatrixPolynomial operator*(const MatrixPolynomial& a, const MatrixPolynomial& b) {
  if (a.dim() != b.dim()) throw InputError("matrix polynomial dimensions differ");
  if (a.coeffs().empty() || b.coeffs().empty()) return MatrixPolynomial(a.dim());
  std::vector<CMatrix> c(a.coeffs().size() + b.coeffs().size() - 1, CMatrix::Zero(a.dim(), a.dim()));
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs().size(); ++j) c[i + j] += a.coeff(i) * b.coeff(j);
  }
  return MatrixPolynomial(a.dim(), std::move(c));
}

MatrixPolynomial potapov_factor(const CVector& x) {
  const Index d = x.size();
  const CMatrix p = x * x.adjoint();
  return MatrixPolynomial(d, {CMatrix::Identity(d, d) - p, p});
}

MatrixPolynomial PotapovProduct::assembled() const {
  MatrixPolynomial theta = MatrixPolynomial::identity(dim);
  for (const auto& x : factors) {
    if (x.size() != dim) throw InputError("factor vector has wrong dimension");
    theta = theta * potapov_factor(x);
  }
  return theta;
}

Index kernel_dim_theta0star(const MatrixPolynomial& theta, const Tolerances& tol) {
  const CMatrix t0 = theta.coeffs().empty() ? CMatrix::Zero(theta.dim(), theta.dim()) : theta.coeff(0);
  Eigen::JacobiSVD<CMatrix> svd(t0.adjoint());
  Index n = 0;
  for (Index i = 0; i < svd.singularValues().size(); ++i) n += svd.singularValues()(i) <= tol.rank;
  return n;
}

std::vector<double> nesting_margins(const std::vector<CVector>& factors) {
  std::vector<double> out;
  if (factors.empty()) return out;
  const Index d = factors.front().size();
  const CVector x1 = factors.front().normalized();
  CMatrix u = Subspace(d, x1).complement().basis();
  for (std::size_t j = 1; j < factors.size(); ++j) {
    const CVector x = factors[j].normalized();
    if (u.cols() == 0) {
      out.push_back(1.0);
      continue;
    }
    out.push_back((x - u * (u.adjoint() * x)).norm());
    u = thin_q((CMatrix::Identity(d, d) - x * x.adjoint()) * u);
  }
  return out;
}

CVector poly_stack(const VectorSeries& p, std::size_t n) {
  const Index d = p.dim();
  CVector v = CVector::Zero(d * static_cast<Index>(n + 1));
  for (const auto& t : p.terms()) {
    if (t.exp > n) throw InputError("polynomial degree exceeds " + std::to_string(n));
    v.segment(static_cast<Index>(t.exp) * d, d) = t.coeff;
  }
  return v;
}

VectorSeries poly_unstack(const CVector& v, Index dim) {
  if (dim < 1 || v.size() == 0 || v.size() % dim != 0) throw InputError("stack length is not a multiple of the dimension");
  std::vector<Term> terms;
  const Index n = v.size() / dim;
  for (Index i = 0; i < n; ++i) {
    CVector c = v.segment(i * dim, dim);
    if (!c.isZero(0.0)) terms.push_back({static_cast<Exponent>(i), c});
  }
  return VectorSeries(dim, std::move(terms), static_cast<Exponent>(n - 1));
}

namespace {

CMatrix orbit_columns(const VectorSeries& p, std::size_t n) {
  const Index d = p.dim();
  const CVector s = poly_stack(p, n);
  const Index rows = d * static_cast<Index>(n + 1);
  CMatrix b = CMatrix::Zero(rows, static_cast<Index>(n + 1));
  for (std::size_t j = 0; j <= n; ++j) {
    const Index off = static_cast<Index>(j) * d;
    b.col(static_cast<Index>(j)).head(rows - off) = s.tail(rows - off);
  }
  return b;
}

}  // namespace

Subspace orbit_span(const VectorSeries& p, std::size_t n, const Tolerances& tol) {
  return numerical_span(orbit_columns(p, n), tol.rank);
}

Subspace model_space_basis(const MatrixPolynomial& theta, std::size_t n, const Tolerances& tol) {
  const CMatrix t = toeplitz(theta, n);
  Eigen::BDCSVD<CMatrix> svd(t, Eigen::ComputeFullU);
  const auto& s = svd.singularValues();
  const double cut = tol.rank * std::max(1.0, s.size() ? s(0) : 0.0);
  Index r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  return Subspace(t.rows(), svd.matrixU().rightCols(t.rows() - r));
}

PotapovProduct factorize_Ep(const VectorSeries& p, const Tolerances& tol) {
  tol.validate();
  const std::size_t n = poly_degree(p);
  const Index d = p.dim();
  const Index rows = d * static_cast<Index>(n + 1);

  const CMatrix orbit = orbit_columns(p, n);
  {
    Eigen::JacobiSVD<CMatrix> svd(orbit);
    const auto& s = svd.singularValues();
    if (s(s.size() - 1) <= tol.rank * s(0)) throw DegenerateInput("orbit of p is numerically dependent");
  }

  PotapovProduct pp;
  pp.dim = d;
  CMatrix q = thin_q(orbit);
  for (std::size_t step = 0; step <= n; ++step) {
    const Index m = q.cols();
    // Constants in M: combinations whose coefficients past degree 0 vanish.
    CVector c;
    if (rows == d) {
      if (m != 1) throw NotCyclicGenerator("constant space of dimension " + std::to_string(m));
      c = CVector::Ones(1);
    } else {
      Eigen::JacobiSVD<CMatrix> svd(q.bottomRows(rows - d), Eigen::ComputeFullV);
      const auto& s = svd.singularValues();
      Index rank = 0;
      while (rank < s.size() && s(rank) > tol.rank) ++rank;
      if (m - rank != 1) {
        throw NotCyclicGenerator("constant space of dimension " + std::to_string(m - rank) + " at step " +
                                 std::to_string(step));
      }
      c = svd.matrixV().col(m - 1);
    }
    const CVector v = q * c;
    const CVector e = fix_phase(v.head(d).normalized());
    pp.factors.push_back(e);
    if (m == 1) break;

    // M minus the constant direction, pushed through b(e)*.
    CVector w = CVector::Zero(rows);
    w.head(d) = e;
    Eigen::JacobiSVD<CMatrix> rest(q - w * (w.adjoint() * q), Eigen::ComputeThinU);
    const CMatrix g = rest.matrixU().leftCols(m - 1);
    const CMatrix proj = e * e.adjoint();
    const CMatrix comp = CMatrix::Identity(d, d) - proj;
    CMatrix h = CMatrix::Zero(rows, m - 1);
    for (std::size_t i = 0; i <= n; ++i) {
      const Index off = static_cast<Index>(i) * d;
      h.middleRows(off, d) = comp * g.middleRows(off, d);
      if (i < n) h.middleRows(off, d) += proj * g.middleRows(off + d, d);
    }
    q = thin_q(h);
  }
  if (pp.factors.size() != n + 1) throw NumericalError("peeling stopped early");

  // Postconditions.
  const MatrixPolynomial theta = pp.assembled();
  const CMatrix t = toeplitz(theta, n);
  const double leak = (t.adjoint() * thin_q(orbit)).norm();
  if (leak > tol.unitary) throw NumericalError("orbit of p is not orthogonal to Theta H^2");
  if (kernel_dim_theta0star(theta, tol) != 1) throw NotCyclicGenerator("dim Ker Theta(0)* != 1");
  return pp;
}

PotapovReport verify_potapov(const PotapovProduct& pp, std::size_t trials, std::uint64_t seed, const Tolerances& tol) {
  PotapovReport r;
  const MatrixPolynomial theta = pp.assembled();
  const Index d = pp.dim;
  const long n = pp.degree_n();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);

  for (const auto& x : pp.factors) r.norm_defect = std::max(r.norm_defect, std::abs(x.norm() - 1.0));

  for (std::size_t t = 0; t < trials; ++t) {
    const CMatrix u = theta(std::polar(1.0, angle(rng)));
    r.unitarity_defect = std::max(r.unitarity_defect, hermitian_norm(u.adjoint() * u - CMatrix::Identity(d, d)));
  }
  r.unitary_ok = std::isfinite(r.unitarity_defect) && r.unitarity_defect < tol.unitary;

  const double radii[] = {0.5, 0.8, 1.0};
  std::vector<Scalar> gammas;
  for (long i = 0; i < n + 3 + 1; ++i) {
    const Scalar z = std::polar(radii[i % 3], angle(rng));
    gammas.push_back(theta(z).determinant() / std::pow(z, static_cast<double>(n + 1)));
  }
  r.gamma = Scalar(0.0);
  for (const auto& g : gammas) r.gamma += g;
  r.gamma /= static_cast<double>(gammas.size());
  for (const auto& g : gammas) r.det_fit_defect = std::max(r.det_fit_defect, std::abs(g - r.gamma));
  r.gamma_defect = std::abs(std::abs(r.gamma) - 1.0);
  r.det_ok = r.det_fit_defect < tol.unitary && r.gamma_defect < tol.unitary;

  r.kernel_dim = kernel_dim_theta0star(theta, tol);
  r.kernel_ok = r.kernel_dim == (pp.factors.empty() ? 0 : 1);

  r.nesting_margins = nesting_margins(pp.factors);
  r.nesting_ok = std::all_of(r.nesting_margins.begin(), r.nesting_margins.end(), [&](double m) { return m > tol.rank; });

  if (n >= 0) r.k_theta_dim = model_space_basis(theta, static_cast<std::size_t>(n), tol).dim();
  r.dimension_ok = r.k_theta_dim == n + 1;
  return r;
}

Synthesis synthesize_from_vectors(const std::vector<CVector>& factors, const Tolerances& tol, std::uint64_t seed) {
  tol.validate();
  if (factors.empty()) throw InputError("at least one factor vector is required");
  const Index d = factors.front().size();
  if (d < 1) throw InputError("factor vectors must be nonempty");
  Synthesis out;
  out.product.dim = d;
  for (const auto& x : factors) {
    if (x.size() != d) throw InputError("factor vectors have different dimensions");
    if (!all_finite(x) || std::abs(x.norm() - 1.0) > tol.orth) throw InputError("factor vector is not a unit vector");
    out.product.factors.push_back(x.normalized());
  }
  for (double m : nesting_margins(out.product.factors)) {
    if (m <= tol.rank) throw InputError("nesting condition violated");
  }
  const std::size_t n = factors.size() - 1;
  const MatrixPolynomial theta = out.product.assembled();
  out.k_theta = model_space_basis(theta, n, tol);
  if (out.k_theta.dim() != static_cast<Index>(n + 1)) throw NumericalError("K_Theta has the wrong dimension");

  std::normal_distribution<double> gauss;
  for (std::size_t a = 0; a < 16; ++a) {
    std::mt19937_64 rng(seed + a);
    CVector c(out.k_theta.dim());
    for (Index i = 0; i < c.size(); ++i) c(i) = Scalar(gauss(rng), gauss(rng));
    const CVector v = fix_phase((out.k_theta.basis() * c).normalized());
    const VectorSeries p = poly_unstack(v, d);
    out.attempts = a + 1;
    if (orbit_span(p, n, tol).dim() == static_cast<Index>(n + 1)) {
      out.generator = p;
      return out;
    }
  }
  throw NumericalError("no generator found after 16 attempts");
}

}  // namespace cyclica
