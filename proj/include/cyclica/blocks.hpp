#pragma once

#include "cyclica/coefspace.hpp"
#include "cyclica/core.hpp"

#include <cstdint>
#include <vector>

namespace cyclica {

// z^{n_k} P_k(z) with deg P_k <= N.
struct Block {
  Exponent start = 0;
  std::vector<CVector> poly;  // N+1 coefficient vectors
};

class BlockSeries {
 public:
  BlockSeries(Index dim, std::size_t degree, std::vector<Block> blocks);

  Index dim() const { return dim_; }
  std::size_t degree() const { return degree_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  std::size_t size() const { return blocks_.size(); }

  VectorSeries to_series() const;
  // P_k as one vector of C^{(N+1)d}.
  CVector stack(std::size_t k) const;

 private:
  Index dim_;
  std::size_t degree_;
  std::vector<Block> blocks_;
};

CVector stack_poly(const std::vector<CVector>& poly);
std::vector<CVector> unstack_poly(const CVector& v, Index dim);

// Eventual structure of the block polynomials, as stacks in C^{(N+1)d}.
struct PolyDirectionModel {
  std::vector<CVector> recurrent;
  std::vector<TransientEntry> transient;  // index = block position
};

// Span of the recurrent block polynomials.
Subspace compute_L(const BlockSeries& bs, const PolyDirectionModel& model, const Tolerances& tol);

// max over sampled z in D of dim{P(z) : P in L}.
Index local_rank(const Subspace& l, Index dim, std::size_t degree, std::size_t samples, std::uint64_t seed,
                 const Tolerances& tol);

struct BlocksVerdict {
  Verdict verdict;
  Subspace l;
  Index local_rank = 0;
};

BlocksVerdict blocks_cyclicity(const BlockSeries& bs, const PolyDirectionModel& model, const Tolerances& tol,
                               std::uint64_t seed = 42, std::size_t samples = 8);

struct BlocksDecomposition {
  VectorSeries g;  // sum z^{n_k} P_L(P_k)
  VectorSeries p;  // f - g, blocks orthogonal to L
  std::size_t transient_blocks = 0;
};

BlocksDecomposition blocks_decompose(const BlockSeries& bs, const PolyDirectionModel& model, const Tolerances& tol);

// Tail span of the block coefficient vectors over the last half of the blocks.
NecessaryResult blocks_necessary(const BlockSeries& bs, const Tolerances& tol);

}  // namespace cyclica
