#pragma once

// Matrix-vector products over every coupling storage form.
//
// Dense and CSR products split rows across workers. Procedural (and other
// tile-addressable) matrices go through a block plan: the matrix is cut into
// b x b tiles, each tile is materialized on demand, multiplied, and dropped.
// A row block's tiles are always owned by one worker and accumulated in
// ascending column-block order, so the result is bitwise independent of the
// worker count.

#include <cstddef>
#include <span>
#include <vector>

#include "isingdc/config.hpp"
#include "isingdc/model.hpp"

namespace isingdc {

struct Tile {
  std::size_t row_block = 0;
  std::size_t col_block = 0;
  bool operator==(const Tile&) const = default;
};

struct BlockPlan {
  std::size_t n = 0;
  std::size_t block = 0;
  std::size_t workers = 1;
  /// assignment[g] = tiles processed by worker g, in processing order.
  std::vector<std::vector<Tile>> assignment;

  std::size_t blocks_per_side() const {
    return block == 0 ? 0 : (n + block - 1) / block;
  }
};

/// Row blocks dealt round-robin to workers; each worker walks its row
/// blocks' tiles in (row_block, col_block) order.
BlockPlan make_block_plan(std::size_t n, std::size_t block,
                          std::size_t workers);

/// Throws std::invalid_argument unless the tiles partition the n x n index
/// space exactly once and each row block is owned by a single worker.
void validate_plan(const BlockPlan& plan);

/// y = J v using the storage-native path.
std::vector<double> matvec(const CouplingMatrix& J, std::span<const double> v,
                           const MatvecConfig& cfg = {});
void matvec_into(const CouplingMatrix& J, std::span<const double> v,
                 std::span<double> y, const MatvecConfig& cfg = {});

/// Tile-by-tile product following plan.
std::vector<double> blocked_matvec(const CouplingMatrix& J,
                                   std::span<const double> v,
                                   const BlockPlan& plan);

struct OperatorEnergy {
  std::vector<double> jx;
  double energy = 0.0;  // -1/2 xᵀ(Jx)
};

/// Jx and -1/2 xᵀJx from a single product.
OperatorEnergy operator_energy(const CouplingMatrix& J,
                               std::span<const double> x,
                               const MatvecConfig& cfg = {});

/// Sum of a[i]*b[i] with a fixed four-lane accumulation order.
double dot(std::span<const double> a, std::span<const double> b);

}  // namespace isingdc
