#pragma once

// Eigenvalue estimation for λmax(-J) and the derived solver settings
//   alpha = eta * λmax(-J)
//   beta  = n * sqrt(n) * ||J + alpha I||_inf

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "isingdc/config.hpp"
#include "isingdc/model.hpp"

namespace isingdc {

struct SolverParams {
  double alpha = 1.0;
  double beta = 1.0;
  double eta = 1.0;
  int lookback_q = 5;
  std::int64_t max_iters = 1000;
  std::optional<double> time_budget_s;
  std::uint64_t seed = 0;
  /// Stop once ||x(k+1) - x(k)||_inf falls to this value.
  double step_tol = 1e-10;

  /// Throws std::invalid_argument on alpha <= 0, beta <= 0 or q < 1.
  void validate() const;
};

enum class SpectralMethod { automatic, power_iteration, wigner };

struct SpectralEstimate {
  double lambda_max_negJ = 0.0;
  SpectralMethod method = SpectralMethod::power_iteration;
  std::int64_t iterations_used = 0;
  std::optional<double> sample_variance;
};

/// Sizes at or above this use the semicircle estimate under `automatic`.
inline constexpr std::size_t kWignerThreshold = 10000;

inline const std::vector<double> kDefaultEtaGrid = {0.25, 0.5, 0.75, 1.0,
                                                    1.25, 1.5, 2.0};

using LinearOp = std::function<void(std::span<const double>, std::span<double>)>;

struct PowerResult {
  double value = 0.0;  // Rayleigh quotient (signed) or magnitude
  std::int64_t iterations = 0;
  bool converged = false;
  double residual = 0.0;  // relative
  std::vector<double> vector;
};

/// Dominant eigenpair of a symmetric operator by Rayleigh-quotient power
/// iteration. Starts from the normalized all-ones vector; one seeded random
/// restart is made when the first pass stalls, breaks down, or lands on an
/// eigenvector in at most two steps. Never throws on non-convergence.
PowerResult dominant_eigenpair(const LinearOp& op, std::size_t n, double tol,
                               std::int64_t max_iters, std::uint64_t seed = 0x5EED);

/// Spectral radius of a symmetric operator. Converges on the squared
/// operator, so ± pairs of equal magnitude are handled.
PowerResult spectral_radius(const LinearOp& op, std::size_t n, double tol,
                            std::int64_t max_iters);

/// Dominant eigenvalue magnitude of a coupling matrix.
double power_method_lambda_max(const CouplingMatrix& M, double tol = 1e-10,
                               std::int64_t max_iters = 100000,
                               const MatvecConfig& cfg = {});

/// λmax(-J) by power iteration on -J shifted by its spectral radius.
/// Throws std::domain_error for an all-zero matrix.
SpectralEstimate power_lambda_max_negJ(const CouplingMatrix& J, double tol = 1e-9,
                                       std::int64_t max_iters = 200000,
                                       const MatvecConfig& cfg = {});

struct OffDiagonalStats {
  double mean = 0.0;
  double variance = 0.0;  // over all n(n-1) off-diagonal slots
};

/// Mean and variance of J(i,j) over i != j; absent CSR entries count as 0.
OffDiagonalStats offdiag_stats(const CouplingMatrix& J);

/// 2 * stddev * sqrt(n). Zero for constant couplings; throws std::domain_error
/// for an all-zero matrix or n < 2.
double wigner_lambda_max(const CouplingMatrix& J);

/// λmax(-J) by the requested method. `automatic` picks power iteration below
/// kWignerThreshold spins. A non-positive semicircle estimate falls back to
/// power iteration.
SpectralEstimate estimate_lambda_max_negJ(const CouplingMatrix& J,
                                          SpectralMethod method = SpectralMethod::automatic,
                                          const MatvecConfig& cfg = {});

/// Settings from a known λmax(-J).
SolverParams params_from_lambda(const CouplingMatrix& J, double eta,
                                double lambda_max_negJ);

SolverParams derive_params(const CouplingMatrix& J, double eta,
                           SpectralMethod method = SpectralMethod::automatic,
                           const MatvecConfig& cfg = {});

/// Probes DOCH for probe_iters iterations per candidate and returns the eta
/// with the lowest final Ising energy; ties go to the smaller eta.
double tune_eta(const ProblemInstance& instance, std::vector<double> candidate_etas,
                std::int64_t probe_iters, std::uint64_t seed = 0,
                SpectralMethod method = SpectralMethod::automatic,
                const MatvecConfig& cfg = {});

}  // namespace isingdc
