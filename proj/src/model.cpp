#include "isingdc/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "isingdc/matvec.hpp"

namespace isingdc {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

CouplingMatrix CouplingMatrix::dense(std::size_t n, std::vector<double> values,
                                     ValueKind kind) {
  require(values.size() == n * n, "dense coupling: expected " +
                                      std::to_string(n * n) + " values, got " +
                                      std::to_string(values.size()));
  for (std::size_t i = 0; i < n; ++i) {
    require(values[i * n + i] == 0.0,
            "dense coupling: nonzero diagonal at " + std::to_string(i));
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a = values[i * n + j];
      require(std::isfinite(a), "dense coupling: non-finite entry");
      require(a == values[j * n + i],
              "dense coupling: asymmetric at (" + std::to_string(i) + "," +
                  std::to_string(j) + ")");
    }
  }
  auto s = std::make_shared<const Storage>(Dense{n, std::move(values)});
  return CouplingMatrix(n, kind, std::move(s));
}

CouplingMatrix CouplingMatrix::csr(CsrData d, ValueKind kind) {
  const std::size_t n = d.n;
  require(d.row_offsets.size() == n + 1, "csr: row_offsets must have n+1 entries");
  require(d.row_offsets.front() == 0, "csr: row_offsets must start at 0");
  require(d.row_offsets.back() == d.values.size(),
          "csr: row_offsets must end at nnz");
  require(d.column_indices.size() == d.values.size(),
          "csr: column_indices and values differ in length");
  for (std::size_t i = 0; i < n; ++i) {
    const auto b = d.row_offsets[i];
    const auto e = d.row_offsets[i + 1];
    require(b <= e, "csr: row_offsets decrease at row " + std::to_string(i));
    for (auto k = b; k < e; ++k) {
      const auto c = d.column_indices[k];
      require(c < n, "csr: column index out of range in row " + std::to_string(i));
      require(c != i, "csr: diagonal entry stored in row " + std::to_string(i));
      require(k == b || d.column_indices[k - 1] < c,
              "csr: column indices not strictly increasing in row " +
                  std::to_string(i));
      require(std::isfinite(d.values[k]), "csr: non-finite value");
    }
  }
  // Symmetry: every (i,j,v) has a mirror (j,i,v).
  for (std::size_t i = 0; i < n; ++i) {
    for (auto k = d.row_offsets[i]; k < d.row_offsets[i + 1]; ++k) {
      const auto j = d.column_indices[k];
      const auto first = d.column_indices.begin() +
                         static_cast<std::ptrdiff_t>(d.row_offsets[j]);
      const auto last = d.column_indices.begin() +
                        static_cast<std::ptrdiff_t>(d.row_offsets[j + 1]);
      const auto it = std::lower_bound(first, last, static_cast<std::uint64_t>(i));
      require(it != last && *it == i &&
                  d.values[static_cast<std::size_t>(it - d.column_indices.begin())] ==
                      d.values[k],
              "csr: asymmetric at (" + std::to_string(i) + "," +
                  std::to_string(j) + ")");
    }
  }
  auto s = std::make_shared<const Storage>(std::move(d));
  return CouplingMatrix(n, kind, std::move(s));
}

CouplingMatrix CouplingMatrix::procedural(std::size_t n, ProceduralRule rule) {
  require(static_cast<bool>(rule.fn), "procedural coupling: empty rule");
  auto s = std::make_shared<const Storage>(Procedural{n, std::move(rule)});
  return CouplingMatrix(n, ValueKind::real, std::move(s));
}

CouplingMatrix CouplingMatrix::bordered(CouplingMatrix inner,
                                        std::vector<double> border) {
  require(border.size() == inner.size(), "bordered coupling: border length mismatch");
  const std::size_t n = inner.size() + 1;
  const ValueKind kind = inner.value_kind();
  auto s = std::make_shared<const Storage>(BorderedData{
      std::make_shared<const CouplingMatrix>(std::move(inner)), std::move(border)});
  return CouplingMatrix(n, kind, std::move(s));
}

CouplingMatrix CouplingMatrix::zeros(std::size_t n) {
  CsrData d;
  d.n = n;
  d.row_offsets.assign(n + 1, 0);
  return csr(std::move(d), ValueKind::integer);
}

StorageKind CouplingMatrix::storage() const {
  switch (storage_->index()) {
    case 0: return StorageKind::dense;
    case 1: return StorageKind::csr;
    case 2: return StorageKind::procedural;
    default: return StorageKind::bordered;
  }
}

const CouplingMatrix::Dense* CouplingMatrix::as_dense() const {
  return std::get_if<Dense>(storage_.get());
}
const CsrData* CouplingMatrix::as_csr() const {
  return std::get_if<CsrData>(storage_.get());
}
const CouplingMatrix::Procedural* CouplingMatrix::as_procedural() const {
  return std::get_if<Procedural>(storage_.get());
}
const BorderedData* CouplingMatrix::as_bordered() const {
  return std::get_if<BorderedData>(storage_.get());
}

double CouplingMatrix::entry(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_) throw std::out_of_range("coupling entry out of range");
  if (i == j) return 0.0;
  if (const auto* d = as_dense()) return d->values[i * n_ + j];
  if (const auto* c = as_csr()) {
    const auto first = c->column_indices.begin() +
                       static_cast<std::ptrdiff_t>(c->row_offsets[i]);
    const auto last = c->column_indices.begin() +
                      static_cast<std::ptrdiff_t>(c->row_offsets[i + 1]);
    const auto it = std::lower_bound(first, last, static_cast<std::uint64_t>(j));
    if (it == last || *it != j) return 0.0;
    return c->values[static_cast<std::size_t>(it - c->column_indices.begin())];
  }
  if (const auto* p = as_procedural()) return p->rule.fn(i, j);
  const auto* b = as_bordered();
  const std::size_t m = n_ - 1;
  if (i == m) return b->border[j];
  if (j == m) return b->border[i];
  return b->inner->entry(i, j);
}

void CouplingMatrix::fill_block(std::size_t r0, std::size_t r1, std::size_t c0,
                                std::size_t c1, std::span<double> out) const {
  const std::size_t w = c1 - c0;
  if (r1 > n_ || c1 > n_ || r0 > r1 || c0 > c1 || out.size() < (r1 - r0) * w) {
    throw std::invalid_argument("fill_block: bad block bounds");
  }
  if (const auto* p = as_procedural()) {
    const auto& fn = p->rule.fn;
    for (std::size_t i = r0; i < r1; ++i) {
      double* row = out.data() + (i - r0) * w;
      for (std::size_t j = c0; j < c1; ++j) row[j - c0] = (i == j) ? 0.0 : fn(i, j);
    }
    return;
  }
  if (const auto* d = as_dense()) {
    for (std::size_t i = r0; i < r1; ++i) {
      std::copy_n(d->values.begin() + static_cast<std::ptrdiff_t>(i * n_ + c0), w,
                  out.begin() + static_cast<std::ptrdiff_t>((i - r0) * w));
    }
    return;
  }
  if (const auto* c = as_csr()) {
    std::fill_n(out.begin(), (r1 - r0) * w, 0.0);
    for (std::size_t i = r0; i < r1; ++i) {
      for (auto k = c->row_offsets[i]; k < c->row_offsets[i + 1]; ++k) {
        const auto j = c->column_indices[k];
        if (j >= c0 && j < c1) out[(i - r0) * w + (j - c0)] = c->values[k];
      }
    }
    return;
  }
  for (std::size_t i = r0; i < r1; ++i) {
    for (std::size_t j = c0; j < c1; ++j) out[(i - r0) * w + (j - c0)] = entry(i, j);
  }
}

std::vector<double> CouplingMatrix::row_abs_sums() const {
  std::vector<double> sums(n_, 0.0);
  if (const auto* d = as_dense()) {
    for (std::size_t i = 0; i < n_; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n_; ++j) acc += std::abs(d->values[i * n_ + j]);
      sums[i] = acc;
    }
  } else if (const auto* c = as_csr()) {
    for (std::size_t i = 0; i < n_; ++i) {
      double acc = 0.0;
      for (auto k = c->row_offsets[i]; k < c->row_offsets[i + 1]; ++k) {
        acc += std::abs(c->values[k]);
      }
      sums[i] = acc;
    }
  } else if (const auto* b = as_bordered()) {
    const auto inner = b->inner->row_abs_sums();
    double last = 0.0;
    for (std::size_t i = 0; i + 1 < n_; ++i) {
      sums[i] = inner[i] + std::abs(b->border[i]);
      last += std::abs(b->border[i]);
    }
    sums[n_ - 1] = last;
  } else {
    const std::size_t bs = 256;
    std::vector<double> tile(bs * n_);
    for (std::size_t r0 = 0; r0 < n_; r0 += bs) {
      const std::size_t r1 = std::min(n_, r0 + bs);
      fill_block(r0, r1, 0, n_, tile);
      for (std::size_t i = r0; i < r1; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n_; ++j) acc += std::abs(tile[(i - r0) * n_ + j]);
        sums[i] = acc;
      }
    }
  }
  return sums;
}

bool CouplingMatrix::has_nonzero() const {
  if (const auto* d = as_dense()) {
    return std::any_of(d->values.begin(), d->values.end(),
                       [](double v) { return v != 0.0; });
  }
  if (const auto* c = as_csr()) {
    return std::any_of(c->values.begin(), c->values.end(),
                       [](double v) { return v != 0.0; });
  }
  if (const auto* b = as_bordered()) {
    return b->inner->has_nonzero() ||
           std::any_of(b->border.begin(), b->border.end(),
                       [](double v) { return v != 0.0; });
  }
  const auto sums = row_abs_sums();
  return std::any_of(sums.begin(), sums.end(), [](double v) { return v != 0.0; });
}

std::size_t CouplingMatrix::stored_nonzeros() const {
  if (const auto* c = as_csr()) return c->nnz();
  if (const auto* d = as_dense()) {
    return static_cast<std::size_t>(std::count_if(
        d->values.begin(), d->values.end(), [](double v) { return v != 0.0; }));
  }
  return n_ * (n_ == 0 ? 0 : n_ - 1);
}

std::vector<double> CouplingMatrix::to_dense_values() const {
  if (const auto* d = as_dense()) return d->values;
  std::vector<double> out(n_ * n_);
  fill_block(0, n_, 0, n_, out);
  return out;
}

ExternalField::ExternalField(std::vector<double> values) : h(std::move(values)) {
  for (double v : h) require(std::isfinite(v), "external field: non-finite entry");
}

SpinVector::SpinVector(std::vector<std::int8_t> values) : s_(std::move(values)) {
  for (auto v : s_) require(v == 1 || v == -1, "spin vector entries must be +/-1");
}

SpinVector SpinVector::filled(std::size_t n, int value) {
  require(value == 1 || value == -1, "spin vector entries must be +/-1");
  return SpinVector(std::vector<std::int8_t>(n, static_cast<std::int8_t>(value)));
}

SpinVector SpinVector::sign_of(std::span<const double> x) {
  std::vector<std::int8_t> s(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) s[i] = x[i] < 0.0 ? -1 : 1;
  SpinVector out;
  out.s_ = std::move(s);
  return out;
}

std::vector<double> SpinVector::as_doubles() const {
  return {s_.begin(), s_.end()};
}

SpinVector SpinVector::negated() const {
  SpinVector out = *this;
  for (auto& v : out.s_) v = static_cast<std::int8_t>(-v);
  return out;
}

void ProblemInstance::validate() const {
  if (field && field->size() != coupling.size()) {
    throw std::invalid_argument("instance: field length " +
                                std::to_string(field->size()) +
                                " != coupling size " +
                                std::to_string(coupling.size()));
  }
}

double energy(const CouplingMatrix& J, const SpinVector& s, const MatvecConfig& cfg) {
  require(s.size() == J.size(), "energy: dimension mismatch");
  const auto x = s.as_doubles();
  return operator_energy(J, x, cfg).energy;
}

double relaxed_energy(const CouplingMatrix& J, std::span<const double> x,
                      const MatvecConfig& cfg) {
  require(x.size() == J.size(), "relaxed_energy: dimension mismatch");
  return operator_energy(J, x, cfg).energy;
}

double energy_with_field(const CouplingMatrix& J, const ExternalField& h,
                         const SpinVector& s, const MatvecConfig& cfg) {
  require(s.size() == J.size() && h.size() == J.size(),
          "energy_with_field: dimension mismatch");
  const auto x = s.as_doubles();
  return operator_energy(J, x, cfg).energy - dot(h.h, x);
}

double instance_energy(const ProblemInstance& inst, const SpinVector& s,
                       const MatvecConfig& cfg) {
  if (inst.field) return energy_with_field(inst.coupling, *inst.field, s, cfg);
  return energy(inst.coupling, s, cfg);
}

CouplingMatrix homogenize(const CouplingMatrix& J, const ExternalField& h) {
  require(h.size() == J.size(), "homogenize: dimension mismatch");
  const std::size_t n = J.size();
  const std::size_t m = n + 1;
  if (m <= kMaterializeLimit) {
    if (const auto* d = J.as_dense()) {
      std::vector<double> v(m * m, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        std::copy_n(d->values.begin() + static_cast<std::ptrdiff_t>(i * n), n,
                    v.begin() + static_cast<std::ptrdiff_t>(i * m));
        v[i * m + n] = h.h[i];
        v[n * m + i] = h.h[i];
      }
      return CouplingMatrix::dense(m, std::move(v), J.value_kind());
    }
    if (const auto* c = J.as_csr()) {
      CsrData out;
      out.n = m;
      out.row_offsets.reserve(m + 1);
      out.row_offsets.push_back(0);
      for (std::size_t i = 0; i < n; ++i) {
        for (auto k = c->row_offsets[i]; k < c->row_offsets[i + 1]; ++k) {
          out.column_indices.push_back(c->column_indices[k]);
          out.values.push_back(c->values[k]);
        }
        if (h.h[i] != 0.0) {
          out.column_indices.push_back(n);
          out.values.push_back(h.h[i]);
        }
        out.row_offsets.push_back(out.values.size());
      }
      for (std::size_t j = 0; j < n; ++j) {
        if (h.h[j] != 0.0) {
          out.column_indices.push_back(j);
          out.values.push_back(h.h[j]);
        }
      }
      out.row_offsets.push_back(out.values.size());
      return CouplingMatrix::csr(std::move(out), J.value_kind());
    }
  }
  return CouplingMatrix::bordered(J, h.h);
}

SpinVector dehomogenize(const SpinVector& sigma) {
  require(sigma.size() >= 2, "dehomogenize: need at least two spins");
  const std::size_t n = sigma.size() - 1;
  const int t = sigma[n];
  std::vector<std::int8_t> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = static_cast<std::int8_t>(t * sigma[i]);
  return SpinVector(std::move(s));
}

CouplingMatrix maxcut_to_ising(const CouplingMatrix& W) {
  if (const auto* d = W.as_dense()) {
    std::vector<double> v = d->values;
    for (auto& x : v) x *= -0.5;
    return CouplingMatrix::dense(W.size(), std::move(v));
  }
  if (const auto* c = W.as_csr()) {
    CsrData out = *c;
    for (auto& x : out.values) x *= -0.5;
    return CouplingMatrix::csr(std::move(out));
  }
  throw std::invalid_argument("maxcut_to_ising: needs dense or CSR adjacency");
}

double cut_value(const CouplingMatrix& W, const SpinVector& s) {
  require(s.size() == W.size(), "cut_value: dimension mismatch");
  const std::size_t n = W.size();
  double cut = 0.0;
  if (const auto* c = W.as_csr()) {
    for (std::size_t i = 0; i < n; ++i) {
      for (auto k = c->row_offsets[i]; k < c->row_offsets[i + 1]; ++k) {
        const auto j = c->column_indices[k];
        if (j > i && s[i] != s[j]) cut += c->values[k];
      }
    }
    return cut;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (s[i] != s[j]) cut += W.entry(i, j);
    }
  }
  return cut;
}

double shifted_inf_norm(const CouplingMatrix& J, double alpha) {
  const auto sums = J.row_abs_sums();
  double best = 0.0;
  for (double v : sums) best = std::max(best, std::abs(alpha) + v);
  if (sums.empty()) best = std::abs(alpha);
  return best;
}

}  // namespace isingdc
