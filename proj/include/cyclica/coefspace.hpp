#pragma once

#include "cyclica/core.hpp"
#include "cyclica/spectrum.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cyclica {

struct TransientEntry {
  std::size_t index = 0;  // 0-based position in the stored spectrum
  CVector coeff;
};

// Eventual behaviour of a coefficient sequence: finitely many transient
// coefficients, after which every coefficient lies in span(recurrent).
class TailModel {
 public:
  TailModel(Index dim, std::vector<TransientEntry> transient, std::vector<CVector> recurrent,
            std::optional<IntegerSpectrum> spectrum = std::nullopt);

  Index dim() const { return dim_; }
  const std::vector<TransientEntry>& transient() const { return transient_; }
  const std::vector<CVector>& recurrent() const { return recurrent_; }
  const std::optional<IntegerSpectrum>& spectrum() const { return spectrum_; }
  std::size_t transient_end() const;
  const TransientEntry* find(std::size_t index) const;

 private:
  Index dim_;
  std::vector<TransientEntry> transient_;
  std::vector<CVector> recurrent_;
  std::optional<IntegerSpectrum> spectrum_;
};

Subspace tail_span(const TailModel& model, std::size_t m, const Tolerances& tol);
Subspace x_star(const TailModel& model, const Tolerances& tol);

// Span of the stored coefficients with index >= m. `beyond_data` is set
// when m passes the last stored term.
Subspace tail_span(const VectorSeries& f, std::size_t m, const Tolerances& tol, bool* beyond_data = nullptr);

// Throws InputError when stored coefficients contradict the model.
void check_consistency(std::span<const CVector> coeffs, const TailModel& model, const Tolerances& tol);

struct TailAnalysis {
  Subspace x_star;
  std::size_t n_of_f = 0;  // least m with every coefficient of index >= m in X_*
  Strength strength = Strength::AtHorizon;
  std::size_t window_start = 0;
};

// Model mode when `model` is given, otherwise the last half of the data.
TailAnalysis analyze_tail(Index dim, std::span<const CVector> coeffs, const TailModel* model, const Tolerances& tol);

struct Decomposition {
  Subspace x_star;
  std::size_t n_of_f = 0;
  VectorSeries p;
  std::optional<Exponent> p_exponent_degree;
  std::ptrdiff_t p_index_degree = -1;
  Verdict verdict;
  std::size_t window_start = 0;
  std::vector<std::string> warnings;
};

Decomposition decompose(const VectorSeries& f, const TailModel* model, const Tolerances& tol);
Verdict cyclicity_single(const VectorSeries& f, const TailModel* model, const Tolerances& tol);
Verdict cyclicity_family(std::span<const TailModel> models, const Tolerances& tol);
Verdict cyclicity_family(std::span<const VectorSeries> family, const Tolerances& tol);

struct NecessaryResult {
  bool possibly_cyclic = true;
  std::optional<std::size_t> witness;
  Strength strength = Strength::AtHorizon;
  Subspace span;  // union span at the witness, or the last one examined
};

NecessaryResult necessary_condition(std::span<const VectorSeries> family, const Tolerances& tol);
NecessaryResult necessary_condition(std::span<const TailModel> models, const Tolerances& tol);

// Warnings about the lacunarity of a stored spectrum.
std::vector<std::string> lacunarity_warnings(std::span<const Exponent> spectrum,
                                             const std::optional<IntegerSpectrum>& declared);

}  // namespace cyclica
