#include "isingdc/matvec.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <thread>

namespace isingdc {

namespace {

// Runs body(g) for g in [0, workers); worker 0 runs on the calling thread.
template <typename Body>
void run_workers(std::size_t workers, Body&& body) {
  if (workers <= 1) {
    body(std::size_t{0});
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t g = 1; g < workers; ++g) pool.emplace_back([&body, g] { body(g); });
  body(std::size_t{0});
}

// Contiguous row range of worker g when n rows are split across workers.
std::pair<std::size_t, std::size_t> row_range(std::size_t n, std::size_t workers,
                                              std::size_t g) {
  const std::size_t chunk = n / workers;
  const std::size_t extra = n % workers;
  const std::size_t begin = g * chunk + std::min(g, extra);
  return {begin, begin + chunk + (g < extra ? 1 : 0)};
}

double dot_raw(const double* a, const double* b, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    s0 += a[k] * b[k];
    s1 += a[k + 1] * b[k + 1];
    s2 += a[k + 2] * b[k + 2];
    s3 += a[k + 3] * b[k + 3];
  }
  for (; k < n; ++k) s0 += a[k] * b[k];
  return (s0 + s1) + (s2 + s3);
}

void dense_rows(const CouplingMatrix::Dense& d, std::span<const double> v,
                std::span<double> y, std::size_t r0, std::size_t r1) {
  const std::size_t n = d.n;
  for (std::size_t i = r0; i < r1; ++i) y[i] = dot_raw(d.values.data() + i * n, v.data(), n);
}

void csr_rows(const CsrData& c, std::span<const double> v, std::span<double> y,
              std::size_t r0, std::size_t r1) {
  for (std::size_t i = r0; i < r1; ++i) {
    double acc = 0.0;
    for (auto k = c.row_offsets[i]; k < c.row_offsets[i + 1]; ++k) {
      acc += c.values[k] * v[c.column_indices[k]];
    }
    y[i] = acc;
  }
}

void blocked_into(const CouplingMatrix& J, std::span<const double> v, std::span<double> y,
                  const BlockPlan& plan) {
  const std::size_t n = plan.n;
  const std::size_t b = plan.block;
  std::fill(y.begin(), y.end(), 0.0);
  const auto* dense = J.as_dense();
  run_workers(plan.workers, [&](std::size_t g) {
    std::vector<double> tile;
    if (!dense) tile.resize(b * b);
    for (const Tile& t : plan.assignment[g]) {
      const std::size_t r0 = t.row_block * b, r1 = std::min(n, r0 + b);
      const std::size_t c0 = t.col_block * b, c1 = std::min(n, c0 + b);
      const std::size_t w = c1 - c0;
      if (dense) {
        for (std::size_t i = r0; i < r1; ++i) {
          y[i] += dot_raw(dense->values.data() + i * n + c0, v.data() + c0, w);
        }
      } else {
        J.fill_block(r0, r1, c0, c1, tile);
        for (std::size_t i = r0; i < r1; ++i) {
          y[i] += dot_raw(tile.data() + (i - r0) * w, v.data() + c0, w);
        }
      }
    }
  });
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  return dot_raw(a.data(), b.data(), a.size());
}

BlockPlan make_block_plan(std::size_t n, std::size_t block, std::size_t workers) {
  if (block == 0 || workers == 0) {
    throw std::invalid_argument("block plan: block size and workers must be positive");
  }
  BlockPlan plan;
  plan.n = n;
  plan.block = block;
  plan.workers = workers;
  plan.assignment.resize(workers);
  const std::size_t nb = plan.blocks_per_side();
  for (std::size_t rb = 0; rb < nb; ++rb) {
    auto& list = plan.assignment[rb % workers];
    for (std::size_t cb = 0; cb < nb; ++cb) list.push_back({rb, cb});
  }
  return plan;
}

void validate_plan(const BlockPlan& plan) {
  if (plan.block == 0 || plan.workers == 0 || plan.assignment.size() != plan.workers) {
    throw std::invalid_argument("block plan: inconsistent worker count or block size");
  }
  const std::size_t nb = plan.blocks_per_side();
  std::vector<std::uint8_t> seen(nb * nb, 0);
  std::vector<std::size_t> owner(nb, plan.workers);
  std::vector<std::size_t> last_col(nb, 0);
  std::vector<std::uint8_t> started(nb, 0);
  for (std::size_t g = 0; g < plan.workers; ++g) {
    for (const Tile& t : plan.assignment[g]) {
      if (t.row_block >= nb || t.col_block >= nb) {
        throw std::invalid_argument("block plan: tile outside the index space");
      }
      auto& mark = seen[t.row_block * nb + t.col_block];
      if (mark) throw std::invalid_argument("block plan: tile assigned twice");
      mark = 1;
      if (owner[t.row_block] == plan.workers) owner[t.row_block] = g;
      if (owner[t.row_block] != g) {
        throw std::invalid_argument("block plan: row block " +
                                    std::to_string(t.row_block) +
                                    " split across workers");
      }
      if (started[t.row_block] && t.col_block < last_col[t.row_block]) {
        throw std::invalid_argument("block plan: tiles of a row block out of order");
      }
      started[t.row_block] = 1;
      last_col[t.row_block] = t.col_block;
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
    throw std::invalid_argument("block plan: tiles do not cover the matrix");
  }
}

void matvec_into(const CouplingMatrix& J, std::span<const double> v, std::span<double> y,
                 const MatvecConfig& cfg) {
  const std::size_t n = J.size();
  if (v.size() != n || y.size() != n) {
    throw std::invalid_argument("matvec: dimension mismatch (matrix " + std::to_string(n) +
                                ", vector " + std::to_string(v.size()) + ")");
  }
  const std::size_t workers = std::max<std::size_t>(1, std::min(cfg.workers, n));
  if (const auto* d = J.as_dense()) {
    run_workers(workers, [&](std::size_t g) {
      const auto [r0, r1] = row_range(n, workers, g);
      dense_rows(*d, v, y, r0, r1);
    });
    return;
  }
  if (const auto* c = J.as_csr()) {
    run_workers(workers, [&](std::size_t g) {
      const auto [r0, r1] = row_range(n, workers, g);
      csr_rows(*c, v, y, r0, r1);
    });
    return;
  }
  if (const auto* b = J.as_bordered()) {
    const std::size_t m = n - 1;
    matvec_into(*b->inner, v.first(m), y.first(m), cfg);
    const double last = v[m];
    for (std::size_t i = 0; i < m; ++i) y[i] += b->border[i] * last;
    y[m] = dot_raw(b->border.data(), v.data(), m);
    return;
  }
  blocked_into(J, v, y, make_block_plan(n, std::max<std::size_t>(1, cfg.block_size), workers));
}

std::vector<double> matvec(const CouplingMatrix& J, std::span<const double> v,
                           const MatvecConfig& cfg) {
  std::vector<double> y(J.size());
  matvec_into(J, v, y, cfg);
  return y;
}

std::vector<double> blocked_matvec(const CouplingMatrix& J, std::span<const double> v,
                                   const BlockPlan& plan) {
  if (plan.n != J.size() || v.size() != J.size()) {
    throw std::invalid_argument("blocked_matvec: plan/dimension mismatch");
  }
  validate_plan(plan);
  if (J.as_bordered()) {
    throw std::invalid_argument("blocked_matvec: bordered matrices use matvec");
  }
  std::vector<double> y(J.size());
  if (const auto* c = J.as_csr()) {
    // CSR rows are the unit of work; the plan's row blocks set the split.
    const std::size_t b = plan.block;
    const std::size_t n = plan.n;
    run_workers(plan.workers, [&](std::size_t g) {
      std::size_t prev = plan.blocks_per_side();
      for (const Tile& t : plan.assignment[g]) {
        if (t.row_block == prev) continue;
        prev = t.row_block;
        const std::size_t r0 = t.row_block * b;
        csr_rows(*c, v, y, r0, std::min(n, r0 + b));
      }
    });
    return y;
  }
  blocked_into(J, v, y, plan);
  return y;
}

OperatorEnergy operator_energy(const CouplingMatrix& J, std::span<const double> x,
                               const MatvecConfig& cfg) {
  OperatorEnergy out;
  out.jx = matvec(J, x, cfg);
  out.energy = -0.5 * dot_raw(x.data(), out.jx.data(), x.size());
  return out;
}

}  // namespace isingdc
