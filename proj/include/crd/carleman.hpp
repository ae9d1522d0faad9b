#pragma once

// Truncated Carleman embedding of a discretised polynomial RDE.
//
// Block i of the embedded state holds degree-i monomials of the state. The
// transfer block B_j^i (i >= 1, j >= 0) sits at block row i, block column
// i + j, and carries the order-(j + 1) coefficient tensor through the
// Leibniz sum
//
//   B_j^i = sum_{v=1..i} I^{(x)(v-1)} (x) F~_{j+1} (x) I^{(x)(i-v)}.
//
// The source F~_0 is kept out of M and enters only the first block of b.
//
// Two representations are supported:
//   full     Z_i = Y~^{(x)i}, block dimension (S n_d)^i. Exact embedding.
//   grouped  node-local monomials y_{s1,p} ... y_{si,p}, block dimension
//            S^i n_d, ordered species-tuple-major then node. Coefficient
//            entries become n_d x n_d blocks (the Laplacian enters through
//            the linear blocks), so this is an approximation whenever
//            diffusion couples nodes.

#include <span>
#include <vector>

#include "crd/common.hpp"
#include "crd/spatial.hpp"

namespace crd {

enum class Representation { full, grouped };

const char* to_string(Representation repr);
Representation parse_representation(const std::string& text);

struct CarlemanLimits {
  Index max_dim = 1'000'000;
  Index max_nonzeros = 100'000'000;
};

struct CarlemanSystem {
  int k = 0;
  Representation repr = Representation::grouped;
  int species = 0;
  Index nodes = 0;
  SparseMatrix M;
  std::vector<double> b;
  std::vector<Index> block_offsets;  // k + 1 entries, last one is dim()

  Index dim() const { return block_offsets.empty() ? 0 : block_offsets.back(); }
  Index block_dim(int i) const { return block_offsets[i] - block_offsets[i - 1]; }
};

Index block_dimension(int species, Index nodes, int i, Representation repr);

SparseMatrix transfer_block(const DiscretizedSystem& system, int i, int j,
                            Representation repr,
                            const CarlemanLimits& limits = {});

CarlemanSystem assemble(const DiscretizedSystem& system, int k,
                        Representation repr, const CarlemanLimits& limits = {});

std::vector<double> embed(std::span<const double> y0, int species, Index nodes,
                          int k, Representation repr);

/// First Carleman block of z.
std::vector<double> extract(std::span<const double> z,
                            const CarlemanSystem& system);

enum class NormBoundVariant {
  general,       // sum_j C_max,j sqrt(sigma_max tau_max) for the nonlinear part
  autocatalytic  // sqrt(2(2S - 1)) sum_j C_max,j
};

/// k [ 4 d n^2 max D + ||F_1|| + nonlinear term ]; ||F_1|| is max |mu| for
/// diagonal linear kinetics.
double norm_bound(const DiscretizedSystem& system, int k,
                  NormBoundVariant variant = NormBoundVariant::general);

struct BlockPatternEntry {
  Index block_row = 0;
  Index block_col = 0;
  Index nnz = 0;
};

/// Non-zero count per block for the given block boundaries; only non-empty
/// blocks are listed, row-major.
std::vector<BlockPatternEntry> block_pattern(const SparseMatrix& m,
                                             std::span<const Index> offsets);

/// Block boundaries used when dumping patterns: Carleman levels in full
/// mode, n_d-sized coefficient blocks in grouped mode.
std::vector<Index> pattern_offsets(const CarlemanSystem& system);

}  // namespace crd
