#pragma once

// Shared bookkeeping for solver runs: wall clock, budget checks, best-so-far
// spins, strided trace rows, and mapping results back from the bordered
// (field-free) model.

#include <chrono>
#include <optional>
#include <span>
#include <string>

#include "isingdc/model.hpp"
#include "isingdc/trace.hpp"

namespace isingdc::detail {

class RunRecorder {
 public:
  RunRecorder(const ProblemInstance& instance, const SolveOptions& options,
              std::optional<double> time_budget_s);

  /// Zero-field coupling the solver iterates on.
  const CouplingMatrix& coupling() const { return coupling_; }
  std::size_t size() const { return coupling_.size(); }
  bool homogenized() const { return homogenized_; }

  double elapsed() const;
  bool out_of_time() const;
  bool due(std::int64_t iter) const {
    return options_.trace_stride <= 1 || iter % options_.trace_stride == 0;
  }

  /// Scores sign(x) (one product) and emits a trace row.
  void record_state(std::int64_t iter, std::span<const double> x,
                    std::optional<std::string> event = std::nullopt);
  /// Emits a trace row for spins whose energy is already known.
  void record_spins(std::int64_t iter, const SpinVector& s, double energy,
                    std::optional<std::string> event = std::nullopt);
  /// Updates best-so-far without a trace row.
  void offer(const SpinVector& s, double energy);

  double best_energy() const { return best_energy_; }
  const IterateObserver& observer() const { return options_.on_iterate; }
  const MatvecConfig& matvec() const { return options_.matvec; }

  SolveResult finish(std::vector<double> state, std::int64_t iterations, bool converged);

 private:
  const ProblemInstance& instance_;
  const SolveOptions& options_;
  std::optional<double> budget_;
  CouplingMatrix coupling_;
  bool homogenized_ = false;
  std::chrono::steady_clock::time_point start_;
  SpinVector best_;
  double best_energy_;
  bool have_best_ = false;
  std::vector<TraceRecord> trace_;
};

}  // namespace isingdc::detail
