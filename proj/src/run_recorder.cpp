#include "run_recorder.hpp"

#include <limits>
#include <utility>

namespace isingdc::detail {

namespace {

CouplingMatrix solver_coupling(const ProblemInstance& instance) {
  instance.validate();
  if (instance.field) return homogenize(instance.coupling, *instance.field);
  return instance.coupling;
}

}  // namespace

RunRecorder::RunRecorder(const ProblemInstance& instance, const SolveOptions& options,
                         std::optional<double> time_budget_s)
    : instance_(instance),
      options_(options),
      budget_(time_budget_s),
      coupling_(solver_coupling(instance)),
      homogenized_(instance.field.has_value()),
      start_(std::chrono::steady_clock::now()),
      best_energy_(std::numeric_limits<double>::infinity()) {}

double RunRecorder::elapsed() const {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
}

bool RunRecorder::out_of_time() const { return budget_ && elapsed() >= *budget_; }

void RunRecorder::record_state(std::int64_t iter, std::span<const double> x,
                               std::optional<std::string> event) {
  auto s = SpinVector::sign_of(x);
  const double e = energy(coupling_, s, options_.matvec);
  record_spins(iter, s, e, std::move(event));
}

void RunRecorder::offer(const SpinVector& s, double energy) {
  if (!have_best_ || energy < best_energy_) {
    best_ = s;
    best_energy_ = energy;
    have_best_ = true;
  }
}

void RunRecorder::record_spins(std::int64_t iter, const SpinVector& s, double energy,
                               std::optional<std::string> event) {
  offer(s, energy);
  if (!options_.keep_trace && !options_.on_trace) return;
  TraceRecord rec;
  rec.iter = iter;
  rec.elapsed_s = elapsed();
  rec.energy = energy;
  rec.best_energy = best_energy_;
  if (instance_.cut_offset) rec.cut_value = *instance_.cut_offset - energy;
  rec.event = std::move(event);
  if (options_.on_trace) options_.on_trace(rec);
  if (options_.keep_trace) trace_.push_back(std::move(rec));
}

SolveResult RunRecorder::finish(std::vector<double> state, std::int64_t iterations,
                                bool converged) {
  SolveResult r;
  r.spins = homogenized_ ? dehomogenize(best_) : best_;
  r.energy = best_energy_;
  r.state = std::move(state);
  r.trace = std::move(trace_);
  r.iterations = iterations;
  r.converged = converged;
  r.elapsed_s = elapsed();
  if (instance_.cut_offset) r.cut_value = *instance_.cut_offset - best_energy_;
  return r;
}

}  // namespace isingdc::detail
