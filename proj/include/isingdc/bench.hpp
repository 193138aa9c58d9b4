#pragma once

// Benchmark harness: exhaustive oracle, solver dispatch, restarts under a
// shared budget, time-to-solution and energy histograms.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "isingdc/baselines.hpp"
#include "isingdc/model.hpp"
#include "isingdc/spectral.hpp"
#include "isingdc/trace.hpp"

namespace isingdc {

inline constexpr std::size_t kBruteForceMaxSpins = 24;

struct GroundState {
  SpinVector spins;
  double energy = 0.0;
};

/// Exhaustive minimum over all 2^n states by Gray-code enumeration, with
/// O(n) field updates per step. Among states within a rounding tolerance of
/// the minimum the lexicographically smallest (-1 < +1) wins. Fields are
/// supported. Throws std::invalid_argument for n > 24.
GroundState brute_force_ground_state(const ProblemInstance& instance);

/// Same contract, by full recomputation of every state in lexicographic
/// order. Slow; for cross-checking.
GroundState naive_ground_state(const ProblemInstance& instance);

// ---------------------------------------------------------------------------
// Solver dispatch

enum class SolverKind { doch, adoch, sa, bsb, simcim, sia };
std::string to_string(SolverKind kind);
SolverKind solver_kind_from_string(const std::string& name);

struct SolverConfig {
  SolverKind kind = SolverKind::adoch;
  std::string label;  // report name; defaults to the kind
  /// Unset: tuned over kDefaultEtaGrid.
  std::optional<double> eta;
  std::int64_t lookback_q = 5;
  /// Iterations (flip attempts for SA, steps otherwise).
  std::optional<std::int64_t> iters;
  std::optional<double> seconds;
  double step_tol = 1e-10;
  SpectralMethod spectral = SpectralMethod::automatic;
  BaselineParams baseline;
};

/// Settings derived once per (instance, config) and reused across restarts.
class PreparedSolver {
 public:
  PreparedSolver(const ProblemInstance& instance, SolverConfig config,
                 const SolveOptions& options = {});
  SolveResult run(std::uint64_t seed) const;
  const SolverConfig& config() const { return config_; }
  const std::string& label() const { return label_; }
  /// DOCH/ADOCH only.
  const std::optional<SolverParams>& doch_params() const { return doch_; }

 private:
  ProblemInstance instance_;
  SolverConfig config_;
  SolveOptions options_;
  std::string label_;
  std::optional<SolverParams> doch_;
};

// ---------------------------------------------------------------------------
// Metrics

struct TtsSummary {
  std::optional<double> mean_s;  // over runs that reached the target
  std::size_t reached = 0;
  std::size_t runs = 0;
  /// Per run: first elapsed time at target quality, if any.
  std::vector<std::optional<double>> per_run;
  /// "0.0123 s" or "not reached (k/R)" style text.
  std::string describe() const;
};

/// Target: quality >= fraction * reference quality, where quality is the cut
/// when every record carries one and -energy otherwise.
TtsSummary average_tts(const std::vector<std::vector<TraceRecord>>& traces,
                       double reference_energy, double fraction,
                       std::optional<double> reference_cut = std::nullopt);

struct Histogram {
  std::vector<double> edges;  // bins + 1
  std::vector<std::size_t> counts;
};

/// Freedman–Diaconis bin width over [min, max], at least min_bins bins.
Histogram freedman_diaconis_histogram(const std::vector<double>& values,
                                      std::size_t min_bins = 10,
                                      std::size_t max_bins = 1000);

// ---------------------------------------------------------------------------
// Harness

enum class ReferenceKind { none, automatic, brute_force, long_sa, fixed };

struct ReferenceSpec {
  ReferenceKind kind = ReferenceKind::automatic;
  std::optional<double> energy;  // fixed
  std::int64_t sa_attempts = 100000;
  std::int64_t sa_restarts = 10;
};

struct BenchSpec {
  std::filesystem::path instance_path;
  std::vector<SolverConfig> solvers;
  std::int64_t restarts = 10;
  std::uint64_t seed = 1;
  ReferenceSpec reference;
  double tts_fraction = 0.99;
  bool compute_tts = true;
  std::int64_t trace_stride = 1;
  MatvecConfig matvec;

  void validate() const;
};

/// Reads the JSON form; relative instance paths resolve against the file.
BenchSpec load_bench_spec(const std::filesystem::path& path);
BenchSpec parse_bench_spec(const std::string& json_text,
                           const std::filesystem::path& base_dir = {});

struct RunSummary {
  std::uint64_t seed = 0;
  double energy = 0.0;
  std::optional<double> cut_value;
  double elapsed_s = 0.0;
  std::int64_t iterations = 0;
  std::vector<TraceRecord> trace;
};

struct SolverReport {
  std::string label;
  SolverKind kind = SolverKind::adoch;
  std::vector<RunSummary> runs;
  double best_energy = 0.0;
  double mean_energy = 0.0;
  double worst_energy = 0.0;
  Histogram histogram;
  std::optional<TtsSummary> tts;
  /// Share of runs within tolerance of the reference energy.
  std::optional<double> attainment;
  std::optional<double> eta;
};

struct BenchReport {
  std::string instance_name;
  std::size_t n = 0;
  std::optional<double> reference_energy;
  std::string reference_source;
  std::vector<SolverReport> solvers;
  // Not part of any determinism check.
  std::string environment;
};

BenchReport run_bench(const BenchSpec& spec);
BenchReport run_bench(const BenchSpec& spec, const ProblemInstance& instance);

void write_report_json(std::ostream& out, const BenchReport& report, bool with_environment = true);
/// solver,runs,best_energy,mean_energy,worst_energy,attainment,avg_tts_s,tts_reached
void write_summary_csv(std::ostream& out, const BenchReport& report);
/// solver,run,iter,elapsed_s,energy
void write_long_csv(std::ostream& out, const BenchReport& report);

/// Energies within this distance of the reference count as attained.
double energy_tolerance(double reference_energy);

}  // namespace isingdc
