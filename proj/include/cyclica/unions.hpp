#pragma once

#include "cyclica/coefspace.hpp"
#include "cyclica/core.hpp"
#include "cyclica/spectrum.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace cyclica {

// Components F_i with spectrum inside base + shifts[i].
struct ShiftedSpectrumFamily {
  std::vector<Exponent> base;
  std::vector<std::int64_t> shifts;
  std::vector<VectorSeries> components;
};

// Components moved onto the common spectrum base + min(shifts) and stacked.
VectorSeries stack_shifted(const ShiftedSpectrumFamily& fam);
Decomposition shifted_stack_cyclicity(const ShiftedSpectrumFamily& fam, const TailModel* stacked_model,
                                      const Tolerances& tol);

// Coefficients of conj(theta)(S*) f: c_j = sum_l conj(theta_l) f^(j + l).
VectorSeries apply_conj_multiplier(const VectorSeries& f, std::span<const Scalar> theta);
std::vector<VectorSeries> multiplier_reduce(std::span<const VectorSeries> components,
                                            std::span<const std::vector<Scalar>> multipliers);

enum class Sufficiency { CyclicSufficient, Inconclusive };
std::string to_string(Sufficiency s);

// (phi_1, z phi_2, ..., z^{d-1} phi_d) with every phi_i on `base`.
Sufficiency stacked_sufficient(std::span<const VectorSeries> phis, const std::vector<Exponent>& base,
                               const TailModel* stacked_model, const Tolerances& tol);

struct PrescribedOptions {
  Exponent degree_cap = 1024;
  std::size_t min_terms = 4;
  std::uint64_t seed = 42;
  std::size_t max_attempts = 16;
};

struct PrescribedConstruction {
  std::vector<VectorSeries> components;  // scalar psi_i with spectrum Lambda_i
  VectorSeries stacked;                  // (psi_1, ..., psi_d)
  Verdict verdict;
  std::size_t attempts = 0;
  std::vector<double> target_residuals;  // orbit residuals against e_i at the last step
};

PrescribedConstruction construct_prescribed_spectra(std::span<const IntegerSpectrum> spectra, const Tolerances& tol,
                                                    const PrescribedOptions& opts = {});

// Declared values of dc (least number of generators) and the relations
// they must respect.
struct DcLedger {
  Index dim = 1;
  std::map<std::string, Index> declared;
  std::vector<std::pair<std::string, std::string>> inclusions;  // first inside second
  struct Sum {
    std::string f, g, sum;
  };
  std::vector<Sum> sums;
  std::map<std::string, bool> cyclic;  // declared cyclicity
};

struct DcCheck {
  std::string relation;
  bool satisfied = true;
  std::string detail;
};

std::vector<DcCheck> dc_checks(const DcLedger& ledger);

}  // namespace cyclica
