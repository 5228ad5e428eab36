#pragma once

#include "cyclica/coefspace.hpp"
#include "cyclica/core.hpp"
#include "cyclica/spectrum.hpp"

#include <optional>
#include <vector>

namespace cyclica {

struct PolyTerm {
  MultiIndex exp;
  CVector coeff;
};

enum class Enumeration { AsGiven, GradedLex };

std::string to_string(Enumeration e);

// C^d valued series on the polydisc D^n with finitely many stored terms.
class PolySeries {
 public:
  PolySeries(Index poly_dim, Index dim, std::vector<PolyTerm> terms, Enumeration order = Enumeration::GradedLex,
             std::optional<MultiIndex> truncation = std::nullopt);

  Index poly_dim() const { return poly_dim_; }
  Index dim() const { return dim_; }
  const std::vector<PolyTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  Enumeration enumeration() const { return order_; }
  const MultiIndex& truncation() const { return truncation_; }

  MultiSpectrum spectrum() const;
  std::vector<CVector> coefficients() const;
  double squared_norm() const;
  // Terms with exponent <= box componentwise; the box becomes the truncation.
  PolySeries truncate(const MultiIndex& box) const;

 private:
  Index poly_dim_;
  Index dim_;
  std::vector<PolyTerm> terms_;
  Enumeration order_;
  MultiIndex truncation_;
};

bool dominates(const MultiIndex& a, const MultiIndex& b);  // a >= b componentwise

PolySeries poly_backward_shift(const PolySeries& f, const MultiIndex& alpha);

struct PolydiscReport {
  C1Certificate c1;
  C2Report c2;
  Verdict verdict;
  Subspace x_star;
  std::size_t n_of_f = 0;
  Enumeration enumeration = Enumeration::GradedLex;
};

// Throws InputError when (C2) fails at the horizon; use the orbit harness then.
PolydiscReport polydisc_cyclicity(const PolySeries& f, const TailModel* model, const Tolerances& tol);

}  // namespace cyclica
