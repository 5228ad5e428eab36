#pragma once

#include "cyclica/core.hpp"
#include "cyclica/polydisc.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace cyclica {

// Least-squares approximation of g by span{S*^n f : 0 <= n <= n_max},
// computed exactly on the stored (truncated) data.
struct OrbitReport {
  std::vector<double> residuals;       // entry b: best residual with shifts 0..b
  std::vector<double> gram_condition;  // largest over smallest accepted pivot
  CVector coefficients;                // c_n for the full budget, 0 on skipped shifts
  std::vector<Exponent> accepted;      // shifts kept by the pivoted factorization
  double final_residual = 0.0;         // |sum c_n S*^n f - g| evaluated directly
  double target_norm = 0.0;
  Exponent truncation_degree = 0;
};

inline constexpr Exponent kMaxOrbitBudget = 4096;

CMatrix orbit_gram(const VectorSeries& f, Exponent n_max);
OrbitReport orbit_project(const VectorSeries& f, const VectorSeries& g, Exponent n_max, const Tolerances& tol);
// One factorization shared by several targets.
std::vector<OrbitReport> orbit_project_many(const VectorSeries& f, std::span<const VectorSeries> targets,
                                            Exponent n_max, const Tolerances& tol);

struct PolyOrbitReport {
  std::vector<MultiIndex> boxes;  // nested chain ending at the requested box
  std::vector<double> residuals;
  std::vector<std::size_t> columns;
  double target_norm = 0.0;
};

// Least squares over {S*^alpha f : alpha <= box}, residual on the stored data,
// for a nested chain of `chain_steps` boxes.
PolyOrbitReport orbit_project_polydisc(const PolySeries& f, const PolySeries& g, const MultiIndex& box,
                                       const Tolerances& tol, std::size_t chain_steps = 4);

struct OneInOrbit {
  bool reached = false;
  double residual = 0.0;
  std::vector<std::pair<MultiIndex, double>> replay;  // z^{e_i} targets
};

// f is truncated to `box`, which also bounds the shifts.
OneInOrbit one_in_orbit_check(const PolySeries& f, const MultiIndex& box, const Tolerances& tol);

struct TailDiagnostics {
  std::vector<double> weight_terms;  // |a_k|^2 / sum_{l>k} |a_l|^2
  std::vector<double> weight_partial;
  std::vector<std::vector<double>> double_sum_terms;  // per probe: sum_{l>k} |h^(n_l - n_k)|^2
  std::vector<std::vector<double>> double_sum_partial;
  std::vector<double> last_quarter_increment;  // per probe, relative to the total
  std::vector<std::vector<double>> pairings;   // per probe: |<r_k, h>|
};

TailDiagnostics tail_diagnostics(const VectorSeries& f, std::span<const VectorSeries> probes);
std::vector<VectorSeries> default_probes(const VectorSeries& f, std::uint64_t seed);

}  // namespace cyclica
