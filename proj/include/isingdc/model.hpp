#pragma once

// Core Ising domain types: couplings in several storage forms, spin and state
// vectors, problem instances, energy evaluation, the external-field reduction
// and the MAX-CUT correspondence.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "isingdc/config.hpp"

namespace isingdc {

/// Continuous relaxation of a spin configuration.
using StateVector = std::vector<double>;

enum class ValueKind { real, integer };
enum class StorageKind { dense, csr, procedural, bordered };

/// Compressed sparse row arrays. Both triangles are stored.
struct CsrData {
  std::size_t n = 0;
  std::vector<std::uint64_t> row_offsets;
  std::vector<std::uint64_t> column_indices;
  std::vector<double> values;

  std::size_t nnz() const { return values.size(); }
  bool operator==(const CsrData&) const = default;
};

/// A coupling defined by a formula evaluated on demand.
struct ProceduralRule {
  std::string name;  // e.g. "sin"
  double seed = 0.0;
  std::function<double(std::uint64_t, std::uint64_t)> fn;
};

class CouplingMatrix;

/// Ĵ = [[J, h], [hᵀ, 0]] without copying J.
struct BorderedData {
  std::shared_ptr<const CouplingMatrix> inner;
  std::vector<double> border;
};

/// Symmetric, zero-diagonal coupling matrix. Immutable once built; copies
/// share storage.
class CouplingMatrix {
 public:
  struct Dense {
    std::size_t n = 0;
    std::vector<double> values;  // row-major n*n
  };
  struct Procedural {
    std::size_t n = 0;
    ProceduralRule rule;
  };

  /// Validates symmetry, zero diagonal and finiteness.
  static CouplingMatrix dense(std::size_t n, std::vector<double> values,
                              ValueKind kind = ValueKind::real);
  /// Validates CSR well-formedness and symmetry.
  static CouplingMatrix csr(CsrData data, ValueKind kind = ValueKind::real);
  static CouplingMatrix procedural(std::size_t n, ProceduralRule rule);
  static CouplingMatrix bordered(CouplingMatrix inner,
                                 std::vector<double> border);
  static CouplingMatrix zeros(std::size_t n);

  std::size_t size() const { return n_; }
  StorageKind storage() const;
  ValueKind value_kind() const { return kind_; }

  /// Coupling J(i,j); zero on the diagonal for every storage form.
  double entry(std::size_t i, std::size_t j) const;

  /// Writes rows [r0,r1) x cols [c0,c1) row-major into out.
  void fill_block(std::size_t r0, std::size_t r1, std::size_t c0,
                  std::size_t c1, std::span<double> out) const;

  /// Row sums of |J(i,j)| over j != i.
  std::vector<double> row_abs_sums() const;
  bool has_nonzero() const;
  /// Explicitly stored off-diagonal nonzeros (n(n-1) bound for formulas).
  std::size_t stored_nonzeros() const;

  std::vector<double> to_dense_values() const;

  const Dense* as_dense() const;
  const CsrData* as_csr() const;
  const Procedural* as_procedural() const;
  const BorderedData* as_bordered() const;

 private:
  using Storage = std::variant<Dense, CsrData, Procedural, BorderedData>;
  CouplingMatrix(std::size_t n, ValueKind kind, std::shared_ptr<const Storage> s)
      : n_(n), kind_(kind), storage_(std::move(s)) {}

  std::size_t n_ = 0;
  ValueKind kind_ = ValueKind::real;
  std::shared_ptr<const Storage> storage_;
};

/// External field h; finite entries.
struct ExternalField {
  std::vector<double> h;
  explicit ExternalField(std::vector<double> values);
  std::size_t size() const { return h.size(); }
};

/// Vector of ±1 spins.
class SpinVector {
 public:
  SpinVector() = default;
  /// Throws unless every value is exactly -1 or +1.
  explicit SpinVector(std::vector<std::int8_t> values);
  static SpinVector filled(std::size_t n, int value);
  /// sign(x) with sign(0) = +1.
  static SpinVector sign_of(std::span<const double> x);

  std::size_t size() const { return s_.size(); }
  int operator[](std::size_t i) const { return s_[i]; }
  void flip(std::size_t i) { s_[i] = static_cast<std::int8_t>(-s_[i]); }
  const std::vector<std::int8_t>& values() const { return s_; }
  std::vector<double> as_doubles() const;
  SpinVector negated() const;

  /// Lexicographic, with -1 < +1.
  auto operator<=>(const SpinVector&) const = default;

 private:
  std::vector<std::int8_t> s_;
};

struct ProblemInstance {
  CouplingMatrix coupling;
  std::optional<ExternalField> field;
  std::string name;
  std::optional<double> best_known;
  /// Set for graph-derived instances: cut(s) = cut_offset - energy(s).
  std::optional<double> cut_offset;

  std::size_t size() const { return coupling.size(); }
  /// Throws if the field length disagrees with the coupling.
  void validate() const;
};

/// E(s) = -1/2 sᵀJs via one matvec and a dot product.
double energy(const CouplingMatrix& J, const SpinVector& s,
              const MatvecConfig& cfg = {});
/// Relaxed energy -1/2 xᵀJx for a continuous state.
double relaxed_energy(const CouplingMatrix& J, std::span<const double> x,
                      const MatvecConfig& cfg = {});
/// E(s) = -1/2 sᵀJs - hᵀs.
double energy_with_field(const CouplingMatrix& J, const ExternalField& h,
                         const SpinVector& s, const MatvecConfig& cfg = {});
/// Energy of an instance, with its field when present.
double instance_energy(const ProblemInstance& inst, const SpinVector& s,
                       const MatvecConfig& cfg = {});

/// Bordered (n+1)-spin zero-field coupling. Materialized up to
/// kMaterializeLimit spins for dense and CSR storage.
CouplingMatrix homogenize(const CouplingMatrix& J, const ExternalField& h);
inline constexpr std::size_t kMaterializeLimit = 100000;

/// (s0, t0) -> t0 * s0.
SpinVector dehomogenize(const SpinVector& sigma);

/// J = -W/2. Throws on asymmetric or nonzero-diagonal W (validated on
/// construction) or procedural W.
CouplingMatrix maxcut_to_ising(const CouplingMatrix& W);

/// Total weight of edges crossing the partition given by s.
double cut_value(const CouplingMatrix& W, const SpinVector& s);

/// max_i (alpha + sum_{j != i} |J(i,j)|), the induced inf-norm of J + alpha I.
double shifted_inf_norm(const CouplingMatrix& J, double alpha);

}  // namespace isingdc
