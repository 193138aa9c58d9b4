#pragma once

// Run records shared by every solver: per-iteration trace rows, callback
// hooks and the result bundle.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "isingdc/config.hpp"
#include "isingdc/model.hpp"

namespace isingdc {

struct TraceRecord {
  std::int64_t iter = 0;
  double elapsed_s = 0.0;
  double energy = 0.0;       // Ising energy of the current spin state
  double best_energy = 0.0;  // nonincreasing over a run
  std::optional<double> cut_value;
  std::optional<std::string> event;

  bool operator==(const TraceRecord&) const = default;
};

using TraceCallback = std::function<void(const TraceRecord&)>;
/// Observes the continuous state after each iteration (k = 0 is the start).
using IterateObserver = std::function<void(std::int64_t, std::span<const double>)>;

/// How ADOCH evaluates H at the extrapolated point.
enum class MomentumEval {
  exact,    // a second product J y per iteration
  economy,  // J y = (1 + c) J x(k) - c J x(k-1) from cached products
};

struct SolveOptions {
  MatvecConfig matvec;
  /// Trace rows (and best-so-far checks) every this many iterations; the
  /// first and last iterations are always recorded.
  std::int64_t trace_stride = 1;
  bool keep_trace = true;
  TraceCallback on_trace;
  IterateObserver on_iterate;
  MomentumEval momentum_eval = MomentumEval::economy;
};

struct SolveResult {
  SpinVector spins;  // best spin state seen
  double energy = 0.0;
  std::vector<double> state;  // final continuous state (solver coordinates)
  std::vector<TraceRecord> trace;
  std::int64_t iterations = 0;
  bool converged = false;
  double elapsed_s = 0.0;
  std::int64_t descent_violations = 0;
  /// ADOCH window decisions, one per iteration (1 = extrapolation kept).
  std::vector<std::uint8_t> momentum_accepted;
  std::optional<double> cut_value;
};

}  // namespace isingdc
