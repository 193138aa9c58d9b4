#pragma once

// Reference Ising heuristics used for comparison:
//   SA      single-flip Metropolis, β(t) = β0 log(1 + t/T)
//   bSB     ballistic simulated bifurcation
//   SimCIM  simulated coherent Ising machine
//   SIA     spring Ising algorithm
// Each run is deterministic given (seed, params). All four report the best
// spin state seen at traced iterations plus the final state.

#include <cstdint>
#include <optional>

#include "isingdc/model.hpp"
#include "isingdc/trace.hpp"

namespace isingdc {

struct SaParams {
  double beta0 = 1.0;
  /// Cooling constant T in β(t) = β0 log(1 + t/T).
  double total_T = 1000.0;
  /// Flip attempts.
  std::int64_t attempts = 100000;
  /// Compare the running energy with a full recomputation every this many
  /// accepted flips (0 disables).
  std::int64_t check_interval = 0;
};

struct BsbParams {
  double a0 = 1.0;
  /// Coupling strength; derived from the couplings when unset.
  std::optional<double> c0;
  double dt = 1.0;
  std::int64_t steps = 1000;
};

struct SimCimParams {
  double noise_A = 0.25;
  double a0 = 1.0;
  std::optional<double> c0;
  double dt = 1.0;
  std::int64_t steps = 1000;
};

struct SiaParams {
  double mass_m = 1.0;
  double elastic_k = 0.5;
  double zeta0 = 0.05;
  double dt = 0.5;
  std::int64_t steps = 1000;
};

struct BaselineParams {
  SaParams sa;
  BsbParams bsb;
  SimCimParams simcim;
  SiaParams sia;
  std::optional<double> time_budget_s;

  /// Throws std::invalid_argument on non-positive knobs or dt outside (0, 1.25].
  void validate() const;
};

/// c0 = 1 / (2 <J> sqrt(n)), <J> the off-diagonal sample standard deviation.
double default_c0(const CouplingMatrix& J);

/// Diagnostics beyond the common result.
struct SaStats {
  std::int64_t accepted = 0;
  std::int64_t energy_checks = 0;
  double max_energy_drift = 0.0;
};

SolveResult sa_solve(const ProblemInstance& instance, const BaselineParams& p,
                     std::uint64_t seed, const SolveOptions& options = {},
                     SaStats* stats = nullptr);
SolveResult bsb_solve(const ProblemInstance& instance, const BaselineParams& p,
                      std::uint64_t seed, const SolveOptions& options = {});
SolveResult simcim_solve(const ProblemInstance& instance, const BaselineParams& p,
                         std::uint64_t seed, const SolveOptions& options = {});
SolveResult sia_solve(const ProblemInstance& instance, const BaselineParams& p,
                      std::uint64_t seed, const SolveOptions& options = {});

/// SIA box: q in [-√2, √2], p in [-2, 2].
void sia_boundary(std::span<double> q, std::span<double> p);

}  // namespace isingdc
