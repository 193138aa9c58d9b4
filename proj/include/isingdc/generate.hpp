#pragma once

// Benchmark instance generators. Each row draws from its own Rng stream
// keyed by (seed, row), so any row range can be produced independently.

#include <cstdint>
#include <string>

#include "isingdc/model.hpp"

namespace isingdc {

enum class GeneratorKind { sk_gaussian, dense_pm1, sparse_9bit, procedural_sin };

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::sk_gaussian;
  std::size_t n = 0;
  /// Connectivity p in percent; sparse_9bit only.
  double connectivity_pct = 1.0;
  std::uint64_t seed = 0;

  /// n >= 2 and p in (0, 100].
  void validate() const;
};

std::string to_string(GeneratorKind kind);
/// Throws std::invalid_argument on unknown names.
GeneratorKind generator_kind_from_string(const std::string& name);

/// Dense, off-diagonals i.i.d. N(0,1), mirrored.
CouplingMatrix gen_sk(std::size_t n, std::uint64_t seed);

/// Dense, off-diagonals uniform on {-1, +1}, mirrored.
CouplingMatrix gen_dense_pm1(std::size_t n, std::uint64_t seed);

/// N_p = floor(102300 / p). Each (i, j), j < i, draws z uniform on 1..N_p and
/// stores J = z - 511 when z < 1023, so values lie in {-510, ..., 511}.
/// Accepted draws of z = 511 stay as explicit zeros. Memory is O(nnz).
CouplingMatrix gen_sparse_9bit(std::size_t n, double connectivity_pct, std::uint64_t seed);

/// N_p for a connectivity percentage.
std::uint64_t sparse_9bit_range(double connectivity_pct);

/// entry(i, j) = sin(i*j + seed) with 0-based i, j; zero diagonal; no storage.
CouplingMatrix gen_procedural_sin(std::size_t n, std::uint64_t seed = 100);

CouplingMatrix generate(const GeneratorSpec& spec);

}  // namespace isingdc
