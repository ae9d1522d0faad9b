#include "crd/carleman.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace crd {

namespace {

using Triplet = Eigen::Triplet<double>;

// One coefficient of F~_{j+1} at the level of the Kronecker base: a scalar in
// full mode, an n_d x n_d block in grouped mode.
struct BlockEntry {
  Index row = 0;
  Index col = 0;
  std::vector<Triplet> local;
};

Index base_of(const DiscretizedSystem& sys, Representation repr) {
  return repr == Representation::full ? sys.dim() : sys.species();
}

Index inner_of(const DiscretizedSystem& sys, Representation repr) {
  return repr == Representation::full ? 1 : sys.nodes();
}

std::vector<BlockEntry> coefficient_entries(const DiscretizedSystem& sys,
                                            int order, Representation repr) {
  std::vector<BlockEntry> out;
  const auto& lin = sys.linear_operator();
  if (repr == Representation::full) {
    if (order == 1) {
      for (Index r = 0; r < lin.outerSize(); ++r)
        for (SparseMatrix::InnerIterator it(lin, r); it; ++it)
          out.push_back({it.row(), it.col(), {Triplet(0, 0, it.value())}});
    } else {
      for (const auto& e : sys.lifted(order).entries)
        out.push_back({e.row, e.col, {Triplet(0, 0, e.value)}});
    }
    return out;
  }

  const Index nd = sys.nodes();
  if (order == 1) {
    std::map<std::pair<Index, Index>, std::vector<Triplet>> blocks;
    for (Index r = 0; r < lin.outerSize(); ++r)
      for (SparseMatrix::InnerIterator it(lin, r); it; ++it)
        blocks[{it.row() / nd, it.col() / nd}].emplace_back(
            it.row() % nd, it.col() % nd, it.value());
    for (auto& [key, trips] : blocks)
      out.push_back({key.first, key.second, std::move(trips)});
    return out;
  }
  const auto* f = sys.reactions().order(order);
  if (f == nullptr) return out;
  const auto& scale = sys.node_scaling();
  for (const auto& e : f->entries) {
    BlockEntry b{e.row, e.col, {}};
    b.local.reserve(nd);
    for (Index p = 0; p < nd; ++p) {
      const double v = e.value * (scale.empty() ? 1.0 : scale[p]);
      if (v != 0.0) b.local.emplace_back(p, p, v);
    }
    out.push_back(std::move(b));
  }
  return out;
}

Index leibniz_nonzeros(const std::vector<BlockEntry>& entries, Index base, int i) {
  Index per = 0;
  for (const auto& e : entries) per += static_cast<Index>(e.local.size());
  return per * i * checked_pow(base, i - 1);
}

// Appends sum_v I^{(v-1)} (x) F (x) I^{(i-v)} with F of shape base x base^{j+1}
// to trips at the given offsets.
void expand_leibniz(const std::vector<BlockEntry>& entries, Index base, int i,
                    int j, Index inner, Index row_off, Index col_off,
                    std::vector<Triplet>& trips) {
  const Index fcols = checked_pow(base, j + 1);
  for (int v = 1; v <= i; ++v) {
    const Index left = checked_pow(base, v - 1);
    const Index right = checked_pow(base, i - v);
    for (Index a = 0; a < left; ++a)
      for (const auto& e : entries) {
        const Index rbase = (a * base + e.row) * right;
        const Index cbase = (a * fcols + e.col) * right;
        for (Index b = 0; b < right; ++b)
          for (const auto& t : e.local)
            trips.emplace_back(row_off + (rbase + b) * inner + t.row(),
                               col_off + (cbase + b) * inner + t.col(),
                               t.value());
      }
  }
}

void check_limits(Index dim, Index nnz, const CarlemanLimits& limits,
                  const char* what) {
  if (dim > limits.max_dim)
    throw ResourceLimitError(std::string(what) + ": dimension " +
                             std::to_string(dim) + " exceeds limit " +
                             std::to_string(limits.max_dim));
  if (nnz > limits.max_nonzeros)
    throw ResourceLimitError(std::string(what) + ": " + std::to_string(nnz) +
                             " non-zeros exceed limit " +
                             std::to_string(limits.max_nonzeros));
}

}  // namespace

const char* to_string(Representation repr) {
  return repr == Representation::full ? "full" : "grouped";
}

Representation parse_representation(const std::string& text) {
  if (text == "full") return Representation::full;
  if (text == "grouped") return Representation::grouped;
  throw DomainError("unknown representation '" + text + "' (expected full or grouped)");
}

Index block_dimension(int species, Index nodes, int i, Representation repr) {
  if (i < 1) throw DomainError("block_dimension: level must be >= 1");
  if (repr == Representation::full) return checked_pow(species * nodes, i);
  return checked_pow(species, i) * nodes;
}

SparseMatrix transfer_block(const DiscretizedSystem& sys, int i, int j,
                            Representation repr, const CarlemanLimits& limits) {
  if (i < 1 || j < 0)
    throw DomainError("transfer_block: need i >= 1 and j >= 0");
  const Index rows = block_dimension(sys.species(), sys.nodes(), i, repr);
  const Index cols = block_dimension(sys.species(), sys.nodes(), i + j, repr);
  check_limits(std::max(rows, cols), 0, limits, "transfer_block");
  SparseMatrix out(rows, cols);
  if (j + 1 > sys.max_order()) return out;

  const auto entries = coefficient_entries(sys, j + 1, repr);
  const Index base = base_of(sys, repr);
  check_limits(cols, leibniz_nonzeros(entries, base, i), limits, "transfer_block");
  std::vector<Triplet> trips;
  expand_leibniz(entries, base, i, j, inner_of(sys, repr), 0, 0, trips);
  out.setFromTriplets(trips.begin(), trips.end());
  out.prune(0.0);
  return out;
}

CarlemanSystem assemble(const DiscretizedSystem& sys, int k,
                        Representation repr, const CarlemanLimits& limits) {
  if (k < 1) throw DomainError("assemble: truncation level k must be >= 1");
  CarlemanSystem out;
  out.k = k;
  out.repr = repr;
  out.species = sys.species();
  out.nodes = sys.nodes();
  out.block_offsets.assign(k + 1, 0);
  for (int i = 1; i <= k; ++i) {
    const Index bd = block_dimension(sys.species(), sys.nodes(), i, repr);
    if (out.block_offsets[i - 1] > limits.max_dim - bd)
      check_limits(limits.max_dim + 1, 0, limits, "assemble");
    out.block_offsets[i] = out.block_offsets[i - 1] + bd;
  }
  const Index dim = out.dim();
  check_limits(dim, 0, limits, "assemble");

  const Index base = base_of(sys, repr);
  const Index inner = inner_of(sys, repr);
  std::vector<std::vector<BlockEntry>> coeffs(sys.max_order());
  Index nnz = 0;
  for (int j = 0; j < sys.max_order(); ++j) {
    coeffs[j] = coefficient_entries(sys, j + 1, repr);
    for (int i = 1; i + j <= k; ++i) nnz += leibniz_nonzeros(coeffs[j], base, i);
  }
  check_limits(dim, nnz, limits, "assemble");

  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(nnz));
  for (int i = 1; i <= k; ++i)
    for (int j = 0; j < sys.max_order() && i + j <= k; ++j)
      expand_leibniz(coeffs[j], base, i, j, inner, out.block_offsets[i - 1],
                     out.block_offsets[i + j - 1], trips);
  out.M.resize(dim, dim);
  out.M.setFromTriplets(trips.begin(), trips.end());
  out.M.prune(0.0);
  out.M.makeCompressed();

  out.b.assign(dim, 0.0);
  const auto src = sys.source();
  std::copy(src.begin(), src.end(), out.b.begin());
  return out;
}

std::vector<double> embed(std::span<const double> y0, int species, Index nodes,
                          int k, Representation repr) {
  if (k < 1) throw DomainError("embed: k must be >= 1");
  if (static_cast<Index>(y0.size()) != species * nodes)
    throw DomainError("embed: state length must equal species * nodes");
  std::vector<double> z;
  if (repr == Representation::full) {
    for (int i = 1; i <= k; ++i) {
      const auto block = tensor_power(y0, i);
      z.insert(z.end(), block.begin(), block.end());
    }
    return z;
  }
  std::vector<double> prev(y0.begin(), y0.end());
  z = prev;
  // level i from level i-1: tuple (t, s) at node p is prev[t, p] * y[s, p]
  for (int i = 2; i <= k; ++i) {
    const Index tuples = checked_pow(species, i - 1);
    std::vector<double> next(tuples * species * nodes);
    for (Index t = 0; t < tuples; ++t)
      for (int s = 0; s < species; ++s)
        for (Index p = 0; p < nodes; ++p)
          next[(t * species + s) * nodes + p] =
              prev[t * nodes + p] * y0[s * nodes + p];
    z.insert(z.end(), next.begin(), next.end());
    prev = std::move(next);
  }
  return z;
}

std::vector<double> extract(std::span<const double> z, const CarlemanSystem& sys) {
  if (static_cast<Index>(z.size()) != sys.dim())
    throw DomainError("extract: vector length does not match the Carleman dimension");
  const Index n = sys.block_dim(1);
  return {z.begin(), z.begin() + n};
}

double norm_bound(const DiscretizedSystem& sys, int k, NormBoundVariant variant) {
  if (k < 1) throw DomainError("norm_bound: k must be >= 1");
  const auto& grid = sys.grid();
  double scale_max = sys.node_scaling().empty() ? 1.0 : 0.0;
  for (double s : sys.node_scaling()) scale_max = std::max(scale_max, std::abs(s));
  const double dmax = *std::max_element(sys.diffusion().begin(), sys.diffusion().end());

  double f1 = 0.0;
  if (const auto* t = sys.reactions().order(1); t != nullptr && !t->empty())
    f1 = tensor_norms(*t).two_norm * scale_max;
  const double linear = 4.0 * grid.d * static_cast<double>(grid.n) * grid.n * dmax + f1;

  double nonlinear = 0.0;
  const double S = sys.species();
  for (int j = 2; j <= sys.reactions().max_order(); ++j) {
    const auto* t = sys.reactions().order(j);
    if (t == nullptr || t->empty()) continue;
    if (variant == NormBoundVariant::autocatalytic)
      nonlinear += std::sqrt(2.0 * (2.0 * S - 1.0)) * t->max_rate * scale_max;
    else
      nonlinear += tensor_norms(*t).two_bound * scale_max;
  }
  return k * (linear + nonlinear);
}

std::vector<BlockPatternEntry> block_pattern(const SparseMatrix& m,
                                             std::span<const Index> offsets) {
  if (offsets.size() < 2 || offsets.front() != 0 || offsets.back() != m.rows() ||
      m.rows() != m.cols())
    throw DomainError("block_pattern: offsets must span the square matrix");
  std::map<std::pair<Index, Index>, Index> counts;
  auto block_of = [&](Index x) {
    return static_cast<Index>(std::upper_bound(offsets.begin(), offsets.end(), x) -
                              offsets.begin()) - 1;
  };
  for (Index r = 0; r < m.outerSize(); ++r) {
    const Index br = block_of(r);
    for (SparseMatrix::InnerIterator it(m, r); it; ++it)
      ++counts[{br, block_of(it.col())}];
  }
  std::vector<BlockPatternEntry> out;
  out.reserve(counts.size());
  for (const auto& [key, nnz] : counts) out.push_back({key.first, key.second, nnz});
  return out;
}

std::vector<Index> pattern_offsets(const CarlemanSystem& sys) {
  if (sys.repr == Representation::full) return sys.block_offsets;
  std::vector<Index> out;
  for (Index x = 0; x <= sys.dim(); x += sys.nodes) out.push_back(x);
  return out;
}

}  // namespace crd
