#pragma once

#include "cyclica/coefspace.hpp"
#include "cyclica/core.hpp"
#include "cyclica/spectrum.hpp"

#include <span>
#include <vector>

namespace cyclica {

// Psi_N: stacks N consecutive C^d coefficients into one C^{dN} coefficient.
VectorSeries psi_reshape(const VectorSeries& f, Exponent n);
VectorSeries psi_unreshape(const VectorSeries& g, Index base_dim, Exponent n);

struct SstarNOptions {
  double min_block_ratio = kLacunarityFloor;
};

// Horizon mode: X_* of the reshaped series from the last half of its terms.
Verdict sstarN_cyclicity(const VectorSeries& f, Exponent n, const Tolerances& tol, const SstarNOptions& opts = {});
// Exact mode: `reshaped_model` describes Psi_N(f).
Verdict sstarN_cyclicity(const VectorSeries& f, Exponent n, const TailModel& reshaped_model, const Tolerances& tol,
                         const SstarNOptions& opts = {});

// Scalar series sum_i c_i z^{n_{first+i}} seen through residues only, so
// generator spectra far beyond 64 bits can be used.
struct ResidueStack {
  Subspace span;
  std::size_t window_start = 0;  // spectrum index
};
ResidueStack residue_stack(std::span<const Scalar> coeffs, const IntegerSpectrum& s, std::uint64_t n, const Tolerances& tol);
Verdict sstarN_cyclicity_scalar(std::span<const Scalar> coeffs, const IntegerSpectrum& s, std::uint64_t n,
                                const Tolerances& tol);

struct Crosscheck {
  bool agree = false;
  ResidueVerdict modular;
  Verdict numerical;
};
Crosscheck residue_crosscheck(std::span<const Scalar> coeffs, const IntegerSpectrum& s, std::uint64_t n,
                              const Tolerances& tol);

// {N <= n_max : S*^N f is cyclic} for any scalar f with spectrum s.
std::vector<std::uint64_t> af_membership(const IntegerSpectrum& s, std::uint64_t n_max, std::size_t horizon = 64,
                                         unsigned jobs = 1);

struct FamilyReport {
  Verdict verdict;
  Subspace span;
  std::vector<std::string> warnings;
};
FamilyReport bounded_block_family_cyclicity(std::span<const VectorSeries> family, Exponent n, const Tolerances& tol,
                                            const SstarNOptions& opts = {});

}  // namespace cyclica
