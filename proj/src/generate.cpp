#include "isingdc/generate.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "isingdc/rng.hpp"

namespace isingdc {

namespace {

void require_n(std::size_t n, const char* what) {
  if (n < 2) throw std::invalid_argument(std::string(what) + ": n must be at least 2");
}

// Lower triangle of row i from stream (seed, i), mirrored into a dense buffer.
template <typename Draw>
CouplingMatrix dense_from_rows(std::size_t n, std::uint64_t seed, Draw draw, ValueKind kind) {
  if (n > 0 && n > std::numeric_limits<std::size_t>::max() / n) {
    throw std::length_error("dense generator: n*n overflows");
  }
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    Rng rng(seed, i);
    for (std::size_t j = 0; j < i; ++j) {
      const double x = draw(rng);
      v[i * n + j] = x;
      v[j * n + i] = x;
    }
  }
  return CouplingMatrix::dense(n, std::move(v), kind);
}

}  // namespace

void GeneratorSpec::validate() const {
  require_n(n, "generator");
  if (kind == GeneratorKind::sparse_9bit &&
      !(connectivity_pct > 0.0 && connectivity_pct <= 100.0)) {
    throw std::invalid_argument("generator: connectivity must lie in (0, 100]");
  }
}

std::string to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::sk_gaussian: return "sk";
    case GeneratorKind::dense_pm1: return "dense_pm1";
    case GeneratorKind::sparse_9bit: return "sparse_9bit";
    case GeneratorKind::procedural_sin: return "procedural_sin";
  }
  return "unknown";
}

GeneratorKind generator_kind_from_string(const std::string& name) {
  if (name == "sk" || name == "sk_gaussian") return GeneratorKind::sk_gaussian;
  if (name == "dense_pm1" || name == "pm1") return GeneratorKind::dense_pm1;
  if (name == "sparse_9bit" || name == "sparse") return GeneratorKind::sparse_9bit;
  if (name == "procedural_sin" || name == "sin") return GeneratorKind::procedural_sin;
  throw std::invalid_argument("unknown generator kind '" + name + "'");
}

CouplingMatrix gen_sk(std::size_t n, std::uint64_t seed) {
  require_n(n, "gen_sk");
  return dense_from_rows(n, seed, [](Rng& r) { return r.normal(); }, ValueKind::real);
}

CouplingMatrix gen_dense_pm1(std::size_t n, std::uint64_t seed) {
  require_n(n, "gen_dense_pm1");
  return dense_from_rows(
      n, seed, [](Rng& r) { return static_cast<double>(r.spin()); }, ValueKind::integer);
}

std::uint64_t sparse_9bit_range(double connectivity_pct) {
  if (!(connectivity_pct > 0.0 && connectivity_pct <= 100.0)) {
    throw std::invalid_argument("gen_sparse_9bit: connectivity must lie in (0, 100]");
  }
  return static_cast<std::uint64_t>(std::floor(102300.0 / connectivity_pct));
}

CouplingMatrix gen_sparse_9bit(std::size_t n, double connectivity_pct, std::uint64_t seed) {
  require_n(n, "gen_sparse_9bit");
  const std::uint64_t np = sparse_9bit_range(connectivity_pct);

  // Pass 1: lower triangle, row by row, in column order.
  std::vector<std::uint64_t> lower_offsets(n + 1, 0);
  std::vector<std::uint64_t> lower_cols;
  std::vector<double> lower_vals;
  std::vector<std::uint64_t> degree(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(seed, i);
    for (std::size_t j = 0; j < i; ++j) {
      const std::uint64_t z = 1 + rng.below(np);
      if (z < 1023) {
        lower_cols.push_back(j);
        lower_vals.push_back(static_cast<double>(static_cast<std::int64_t>(z) - 511));
        ++degree[i];
        ++degree[j];
      }
    }
    lower_offsets[i + 1] = lower_cols.size();
  }

  // Pass 2: merge mirrored entries. Row i holds (i, j<i) from its own lower
  // row, then (i, j>i) from the lower rows of j, already in increasing j.
  CsrData d;
  d.n = n;
  d.row_offsets.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) d.row_offsets[i + 1] = d.row_offsets[i] + degree[i];
  const auto nnz = d.row_offsets[n];
  d.column_indices.resize(nnz);
  d.values.resize(nnz);
  std::vector<std::uint64_t> cursor(d.row_offsets.begin(), d.row_offsets.end() - 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto k = lower_offsets[i]; k < lower_offsets[i + 1]; ++k) {
      d.column_indices[cursor[i]] = lower_cols[k];
      d.values[cursor[i]++] = lower_vals[k];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (auto k = lower_offsets[i]; k < lower_offsets[i + 1]; ++k) {
      const auto j = lower_cols[k];
      d.column_indices[cursor[j]] = i;
      d.values[cursor[j]++] = lower_vals[k];
    }
  }
  return CouplingMatrix::csr(std::move(d), ValueKind::integer);
}

CouplingMatrix gen_procedural_sin(std::size_t n, std::uint64_t seed) {
  require_n(n, "gen_procedural_sin");
  ProceduralRule rule;
  rule.name = "sin";
  rule.seed = static_cast<double>(seed);
  const double s = rule.seed;
  rule.fn = [s](std::uint64_t i, std::uint64_t j) {
    return std::sin(static_cast<double>(i * j) + s);
  };
  return CouplingMatrix::procedural(n, std::move(rule));
}

CouplingMatrix generate(const GeneratorSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case GeneratorKind::sk_gaussian: return gen_sk(spec.n, spec.seed);
    case GeneratorKind::dense_pm1: return gen_dense_pm1(spec.n, spec.seed);
    case GeneratorKind::sparse_9bit:
      return gen_sparse_9bit(spec.n, spec.connectivity_pct, spec.seed);
    case GeneratorKind::procedural_sin: return gen_procedural_sin(spec.n, spec.seed);
  }
  throw std::invalid_argument("generator: unknown kind");
}

}  // namespace isingdc
