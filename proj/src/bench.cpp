#include "isingdc/bench.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "isingdc/doch.hpp"
#include "isingdc/io.hpp"
#include "isingdc/matvec.hpp"

namespace isingdc {

using nlohmann::json;

namespace {

std::string fmt17(double v) {
  std::array<char, 40> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", v);
  return buf.data();
}

void check_oracle_size(std::size_t n) {
  if (n > kBruteForceMaxSpins) {
    throw std::invalid_argument("brute force is capped at " +
                                std::to_string(kBruteForceMaxSpins) + " spins, got " +
                                std::to_string(n));
  }
  if (n == 0) throw std::invalid_argument("brute force: empty instance");
}

// Rounding slack for comparing energies of one instance.
double oracle_tolerance(const std::vector<double>& J, const std::vector<double>& h) {
  double scale = 1.0;
  for (double v : J) scale += 0.5 * std::abs(v);
  for (double v : h) scale += std::abs(v);
  return 1e-10 * scale;
}

// Spin i is +1 iff bit (n-1-i) of code is set, so code order is
// lexicographic order with -1 < +1.
SpinVector spins_from_code(std::uint64_t code, std::size_t n) {
  std::vector<std::int8_t> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = (code >> (n - 1 - i)) & 1U ? 1 : -1;
  return SpinVector(std::move(s));
}

double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Linear-interpolated quantile of sorted data.
double quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::string environment_text() {
  std::ostringstream os;
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::array<char, 32> ts{};
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::strftime(ts.data(), ts.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
  os << "compiler=" << __VERSION__ << "; hardware_threads=" << std::thread::hardware_concurrency()
     << "; utc=" << ts.data();
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// Oracle

GroundState brute_force_ground_state(const ProblemInstance& instance) {
  instance.validate();
  const std::size_t n = instance.size();
  check_oracle_size(n);
  const std::vector<double> J = instance.coupling.to_dense_values();
  const std::vector<double> h =
      instance.field ? instance.field->h : std::vector<double>(n, 0.0);
  const double tol = oracle_tolerance(J, h);

  // All spins -1 (code 0). f = Js + h, E = -1/2 sᵀJs - hᵀs.
  std::vector<double> s(n, -1.0), f(n);
  const auto resync = [&](double& e) {
    e = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += J[i * n + j] * s[j];
      f[i] = acc + h[i];
      e -= s[i] * (0.5 * acc + h[i]);
    }
  };
  double e = 0.0;
  resync(e);
  std::uint64_t code = 0;
  std::uint64_t best_code = 0;
  double best = e;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < total; ++k) {
    const auto bit = static_cast<std::size_t>(std::countr_zero(k));
    const std::size_t i = n - 1 - bit;
    e += 2.0 * s[i] * f[i];
    const double two_si = 2.0 * s[i];
    const double* row = &J[i * n];
    for (std::size_t j = 0; j < n; ++j) f[j] -= two_si * row[j];
    s[i] = -s[i];
    code ^= std::uint64_t{1} << bit;
    if ((k & 4095U) == 0) resync(e);
    if (e < best - tol) {
      best = e;
      best_code = code;
    } else if (e <= best + tol && code < best_code) {
      best = std::min(best, e);
      best_code = code;
    }
  }
  GroundState g{spins_from_code(best_code, n), 0.0};
  g.energy = instance_energy(instance, g.spins);
  return g;
}

GroundState naive_ground_state(const ProblemInstance& instance) {
  instance.validate();
  const std::size_t n = instance.size();
  check_oracle_size(n);
  const std::vector<double> J = instance.coupling.to_dense_values();
  const std::vector<double> h =
      instance.field ? instance.field->h : std::vector<double>(n, 0.0);
  const double tol = oracle_tolerance(J, h);
  std::uint64_t best_code = 0;
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> s(n);
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << n); ++code) {
    for (std::size_t i = 0; i < n; ++i) s[i] = (code >> (n - 1 - i)) & 1U ? 1.0 : -1.0;
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) e -= 0.5 * s[i] * J[i * n + j] * s[j];
      e -= h[i] * s[i];
    }
    if (e < best - tol) {
      best = e;
      best_code = code;
    }
  }
  GroundState g{spins_from_code(best_code, n), 0.0};
  g.energy = instance_energy(instance, g.spins);
  return g;
}

// ---------------------------------------------------------------------------
// Solver dispatch

std::string to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::doch: return "doch";
    case SolverKind::adoch: return "adoch";
    case SolverKind::sa: return "sa";
    case SolverKind::bsb: return "bsb";
    case SolverKind::simcim: return "simcim";
    case SolverKind::sia: return "sia";
  }
  return "unknown";
}

SolverKind solver_kind_from_string(const std::string& name) {
  for (auto k : {SolverKind::doch, SolverKind::adoch, SolverKind::sa, SolverKind::bsb,
                 SolverKind::simcim, SolverKind::sia}) {
    if (name == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown solver '" + name +
                              "' (doch, adoch, sa, bsb, simcim, sia)");
}

namespace {

// Product count that fits in 90% of the budget, from a short timing probe.
std::int64_t steps_for_budget(const CouplingMatrix& J, double seconds, const MatvecConfig& cfg) {
  std::vector<double> x(J.size(), 1.0), y(J.size());
  constexpr int kProbe = 5;
  const auto t0 = std::chrono::steady_clock::now();
  for (int k = 0; k < kProbe; ++k) {
    matvec_into(J, x, y, cfg);
    x[0] = y[0] == 0.0 ? 1.0 : 1.0 / y[0];
  }
  const double per = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() /
                     kProbe;
  const double steps = 0.9 * seconds / std::max(per, 1e-9);
  return static_cast<std::int64_t>(std::clamp(steps, 1.0, 1e12));
}

}  // namespace

PreparedSolver::PreparedSolver(const ProblemInstance& instance, SolverConfig config,
                               const SolveOptions& options)
    : instance_(instance), config_(std::move(config)), options_(options) {
  instance_.validate();
  label_ = config_.label.empty() ? to_string(config_.kind) : config_.label;
  if (config_.iters && *config_.iters < 0) {
    throw std::invalid_argument("iteration budget must be non-negative");
  }
  if (config_.seconds && !(*config_.seconds > 0.0)) {
    throw std::invalid_argument("time budget must be positive");
  }
  const CouplingMatrix J = instance_.field
                               ? homogenize(instance_.coupling, *instance_.field)
                               : instance_.coupling;
  if (config_.kind == SolverKind::doch || config_.kind == SolverKind::adoch) {
    double eta = 0.0;
    if (config_.eta) {
      eta = *config_.eta;
    } else {
      eta = tune_eta(instance_, {kDefaultEtaGrid.begin(), kDefaultEtaGrid.end()}, 100, 0,
                     config_.spectral, options_.matvec);
      config_.eta = eta;
    }
    SolverParams p = J.has_nonzero()
                         ? derive_params(J, eta, config_.spectral, options_.matvec)
                         : params_from_lambda(J, eta, 1.0);
    p.lookback_q = config_.lookback_q;
    p.step_tol = config_.step_tol;
    p.time_budget_s = config_.seconds;
    if (config_.iters) {
      p.max_iters = *config_.iters;
    } else if (config_.seconds) {
      p.max_iters = std::numeric_limits<std::int64_t>::max();
    }
    p.validate();
    doch_ = p;
    return;
  }
  // SA traces once per sweep of n attempts.
  if (config_.kind == SolverKind::sa) {
    const auto n = static_cast<std::int64_t>(std::max<std::size_t>(1, J.size()));
    options_.trace_stride = options_.trace_stride > std::numeric_limits<std::int64_t>::max() / n
                                ? std::numeric_limits<std::int64_t>::max()
                                : options_.trace_stride * n;
  }
  auto& b = config_.baseline;
  b.time_budget_s = config_.seconds;
  if (config_.iters) {
    b.sa.attempts = *config_.iters;
    b.bsb.steps = b.simcim.steps = b.sia.steps = std::max<std::int64_t>(1, *config_.iters);
  } else if (config_.seconds) {
    constexpr std::int64_t kOpen = std::numeric_limits<std::int64_t>::max() / 2;
    if (config_.kind == SolverKind::sa) {
      b.sa.attempts = kOpen;
    } else {
      // The dynamical schedules need a step count; size it to the budget.
      const std::int64_t steps = steps_for_budget(J, *config_.seconds, options_.matvec);
      b.bsb.steps = b.simcim.steps = b.sia.steps = steps;
    }
  }
  if (!b.bsb.c0) b.bsb.c0 = default_c0(J);
  if (!b.simcim.c0) b.simcim.c0 = default_c0(J);
  b.validate();
}

SolveResult PreparedSolver::run(std::uint64_t seed) const {
  switch (config_.kind) {
    case SolverKind::doch:
    case SolverKind::adoch: {
      SolverParams p = *doch_;
      p.seed = seed;
      return config_.kind == SolverKind::doch
                 ? doch_solve(instance_, p, std::nullopt, options_)
                 : adoch_solve(instance_, p, std::nullopt, options_);
    }
    case SolverKind::sa: return sa_solve(instance_, config_.baseline, seed, options_);
    case SolverKind::bsb: return bsb_solve(instance_, config_.baseline, seed, options_);
    case SolverKind::simcim: return simcim_solve(instance_, config_.baseline, seed, options_);
    case SolverKind::sia: return sia_solve(instance_, config_.baseline, seed, options_);
  }
  throw std::logic_error("unreachable solver kind");
}

// ---------------------------------------------------------------------------
// Metrics

std::string TtsSummary::describe() const {
  std::ostringstream os;
  const std::size_t missed = runs - reached;
  if (mean_s) {
    os << fmt17(*mean_s) << " s";
    if (missed) os << "; ";
  }
  if (missed) os << "not reached (" << missed << "/" << runs << ")";
  return os.str();
}

TtsSummary average_tts(const std::vector<std::vector<TraceRecord>>& traces,
                       double reference_energy, double fraction,
                       std::optional<double> reference_cut) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("TTS fraction must lie in (0, 1]");
  }
  TtsSummary out;
  out.runs = traces.size();
  double sum = 0.0;
  for (const auto& trace : traces) {
    const bool by_cut =
        reference_cut && !trace.empty() &&
        std::all_of(trace.begin(), trace.end(), [](const auto& r) { return r.cut_value; });
    std::optional<double> hit;
    double best_cut = -std::numeric_limits<double>::infinity();
    for (const auto& r : trace) {
      bool ok = false;
      if (by_cut) {
        best_cut = std::max(best_cut, *r.cut_value);
        ok = best_cut >= fraction * *reference_cut;
      } else {
        ok = -r.best_energy >= fraction * -reference_energy;
      }
      if (ok) {
        hit = r.elapsed_s;
        break;
      }
    }
    out.per_run.push_back(hit);
    if (hit) {
      ++out.reached;
      sum += *hit;
    }
  }
  if (out.reached) out.mean_s = sum / static_cast<double>(out.reached);
  return out;
}

Histogram freedman_diaconis_histogram(const std::vector<double>& values, std::size_t min_bins,
                                      std::size_t max_bins) {
  if (min_bins == 0 || max_bins < min_bins) {
    throw std::invalid_argument("histogram: need 0 < min_bins <= max_bins");
  }
  Histogram h;
  if (values.empty()) return h;
  std::vector<double> v = values;
  std::sort(v.begin(), v.end());
  double lo = v.front();
  double hi = v.back();
  std::size_t bins = min_bins;
  if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
  } else {
    const double iqr = quantile(v, 0.75) - quantile(v, 0.25);
    const double width = 2.0 * iqr / std::cbrt(static_cast<double>(v.size()));
    if (width > 0.0) {
      const double want = std::ceil((hi - lo) / width);
      bins = static_cast<std::size_t>(
          std::clamp(want, static_cast<double>(min_bins), static_cast<double>(max_bins)));
    }
  }
  const double w = (hi - lo) / static_cast<double>(bins);
  h.edges.resize(bins + 1);
  for (std::size_t k = 0; k <= bins; ++k) h.edges[k] = lo + w * static_cast<double>(k);
  h.edges.back() = hi;
  h.counts.assign(bins, 0);
  for (double x : v) {
    auto k = static_cast<std::size_t>(std::floor((x - lo) / w));
    ++h.counts[std::min(k, bins - 1)];
  }
  return h;
}

double energy_tolerance(double reference_energy) {
  return 1e-9 * std::max(1.0, std::abs(reference_energy));
}

// ---------------------------------------------------------------------------
// Specs

void BenchSpec::validate() const {
  if (restarts < 1) throw std::invalid_argument("bench: restarts must be >= 1");
  if (!(tts_fraction > 0.0 && tts_fraction <= 1.0)) {
    throw std::invalid_argument("bench: tts_fraction must lie in (0, 1]");
  }
  if (solvers.empty()) throw std::invalid_argument("bench: no solvers listed");
  if (trace_stride < 1) throw std::invalid_argument("bench: trace_stride must be >= 1");
  if (compute_tts && reference.kind == ReferenceKind::none) {
    throw std::invalid_argument("bench: TTS requested but no reference configured");
  }
  if (reference.kind == ReferenceKind::fixed && !reference.energy) {
    throw std::invalid_argument("bench: fixed reference needs an energy");
  }
  if (reference.sa_attempts < 1 || reference.sa_restarts < 1) {
    throw std::invalid_argument("bench: reference SA budget must be positive");
  }
}

namespace {

ReferenceKind reference_kind_from_string(const std::string& s) {
  if (s == "none") return ReferenceKind::none;
  if (s == "auto") return ReferenceKind::automatic;
  if (s == "brute_force") return ReferenceKind::brute_force;
  if (s == "long_sa") return ReferenceKind::long_sa;
  if (s == "fixed") return ReferenceKind::fixed;
  throw std::invalid_argument("unknown reference kind '" + s + "'");
}

SolverConfig solver_from_json(const json& j, const json& budget) {
  SolverConfig c;
  if (j.is_string()) {
    c.kind = solver_kind_from_string(j.get<std::string>());
  } else {
    c.kind = solver_kind_from_string(j.at("solver").get<std::string>());
    c.label = j.value("label", std::string{});
    if (j.contains("eta")) c.eta = j["eta"].get<double>();
    c.lookback_q = j.value("q", c.lookback_q);
    c.step_tol = j.value("step_tol", c.step_tol);
    if (j.contains("iters")) c.iters = j["iters"].get<std::int64_t>();
    if (j.contains("seconds")) c.seconds = j["seconds"].get<double>();
    if (j.contains("params")) {
      const auto& p = j["params"];
      auto& b = c.baseline;
      b.sa.beta0 = p.value("beta0", b.sa.beta0);
      b.sa.total_T = p.value("T", b.sa.total_T);
      b.sa.attempts = p.value("attempts", b.sa.attempts);
      const double a0 = p.value("a0", 1.0);
      const double dt = p.value("dt", std::numeric_limits<double>::quiet_NaN());
      b.bsb.a0 = b.simcim.a0 = a0;
      if (!std::isnan(dt)) b.bsb.dt = b.simcim.dt = b.sia.dt = dt;
      if (p.contains("c0")) b.bsb.c0 = b.simcim.c0 = p["c0"].get<double>();
      b.simcim.noise_A = p.value("A", b.simcim.noise_A);
      b.sia.mass_m = p.value("m", b.sia.mass_m);
      b.sia.elastic_k = p.value("k", b.sia.elastic_k);
      b.sia.zeta0 = p.value("zeta0", b.sia.zeta0);
    }
  }
  if (!c.iters && budget.contains("iters")) c.iters = budget["iters"].get<std::int64_t>();
  if (!c.seconds && budget.contains("seconds")) c.seconds = budget["seconds"].get<double>();
  return c;
}

}  // namespace

BenchSpec parse_bench_spec(const std::string& json_text, const std::filesystem::path& base_dir) {
  BenchSpec s;
  try {
    const json j = json::parse(json_text);
    std::filesystem::path inst = j.at("instance").get<std::string>();
    s.instance_path = inst.is_absolute() || base_dir.empty() ? inst : base_dir / inst;
    s.restarts = j.value("restarts", s.restarts);
    s.seed = j.value("seed", s.seed);
    s.tts_fraction = j.value("tts_fraction", s.tts_fraction);
    s.compute_tts = j.value("tts", s.compute_tts);
    s.trace_stride = j.value("trace_stride", s.trace_stride);
    s.matvec.workers = j.value("workers", s.matvec.workers);
    s.matvec.block_size = j.value("block_size", s.matvec.block_size);
    const json budget = j.value("budget", json::object());
    if (j.contains("reference")) {
      const auto& r = j["reference"];
      if (r.is_string()) {
        s.reference.kind = reference_kind_from_string(r.get<std::string>());
      } else {
        s.reference.kind = reference_kind_from_string(r.value("kind", std::string("auto")));
        if (r.contains("energy")) s.reference.energy = r["energy"].get<double>();
        s.reference.sa_attempts = r.value("sa_attempts", s.reference.sa_attempts);
        s.reference.sa_restarts = r.value("sa_restarts", s.reference.sa_restarts);
      }
    }
    for (const auto& sj : j.at("solvers")) s.solvers.push_back(solver_from_json(sj, budget));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bench spec: ") + e.what());
  }
  s.validate();
  return s;
}

BenchSpec load_bench_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_bench_spec(ss.str(), path.parent_path());
}

// ---------------------------------------------------------------------------
// Harness

BenchReport run_bench(const BenchSpec& spec) {
  spec.validate();
  const ProblemInstance instance = load_instance(spec.instance_path);
  return run_bench(spec, instance);
}

BenchReport run_bench(const BenchSpec& spec, const ProblemInstance& instance) {
  spec.validate();
  instance.validate();
  BenchReport report;
  report.instance_name = instance.name;
  report.n = instance.size();
  report.environment = environment_text();

  auto ref_kind = spec.reference.kind;
  if (ref_kind == ReferenceKind::automatic) {
    ref_kind = instance.size() <= kBruteForceMaxSpins ? ReferenceKind::brute_force
                                                      : ReferenceKind::long_sa;
  }
  switch (ref_kind) {
    case ReferenceKind::brute_force:
      report.reference_energy = brute_force_ground_state(instance).energy;
      report.reference_source = "brute_force";
      break;
    case ReferenceKind::long_sa: {
      SolverConfig c;
      c.kind = SolverKind::sa;
      c.iters = spec.reference.sa_attempts;
      SolveOptions o;
      o.matvec = spec.matvec;
      o.keep_trace = false;
      o.trace_stride = std::numeric_limits<std::int64_t>::max();
      const PreparedSolver sa(instance, c, o);
      double best = std::numeric_limits<double>::infinity();
      for (std::int64_t r = 0; r < spec.reference.sa_restarts; ++r) {
        best = std::min(best, sa.run(spec.seed + 1000003 + static_cast<std::uint64_t>(r)).energy);
      }
      report.reference_energy = best;
      report.reference_source = "long_sa";
      break;
    }
    case ReferenceKind::fixed:
      report.reference_energy = spec.reference.energy;
      report.reference_source = "fixed";
      break;
    default: report.reference_source = "none"; break;
  }

  SolveOptions opts;
  opts.matvec = spec.matvec;
  opts.trace_stride = spec.trace_stride;
  for (const auto& cfg : spec.solvers) {
    const PreparedSolver solver(instance, cfg, opts);
    SolverReport sr;
    sr.label = solver.label();
    sr.kind = cfg.kind;
    if (solver.doch_params()) sr.eta = solver.doch_params()->eta;
    std::vector<double> energies;
    std::vector<std::vector<TraceRecord>> traces;
    for (std::int64_t r = 0; r < spec.restarts; ++r) {
      const std::uint64_t seed = spec.seed + static_cast<std::uint64_t>(r);
      auto res = solver.run(seed);
      energies.push_back(res.energy);
      traces.push_back(res.trace);
      sr.runs.push_back({seed, res.energy, res.cut_value, res.elapsed_s, res.iterations,
                         std::move(res.trace)});
    }
    sr.best_energy = *std::min_element(energies.begin(), energies.end());
    sr.worst_energy = *std::max_element(energies.begin(), energies.end());
    sr.mean_energy = std::clamp(mean_of(energies), sr.best_energy, sr.worst_energy);
    sr.histogram = freedman_diaconis_histogram(energies);
    if (report.reference_energy) {
      const double ref = *report.reference_energy;
      const double tol = energy_tolerance(ref);
      const auto hits = std::count_if(energies.begin(), energies.end(),
                                      [&](double e) { return e <= ref + tol; });
      sr.attainment = static_cast<double>(hits) / static_cast<double>(energies.size());
      if (spec.compute_tts) {
        std::optional<double> ref_cut;
        if (instance.cut_offset) ref_cut = *instance.cut_offset - ref;
        sr.tts = average_tts(traces, ref, spec.tts_fraction, ref_cut);
      }
    }
    report.solvers.push_back(std::move(sr));
  }
  return report;
}

void write_report_json(std::ostream& out, const BenchReport& report, bool with_environment) {
  json j;
  j["instance"] = report.instance_name;
  j["n"] = report.n;
  j["reference_source"] = report.reference_source;
  j["reference_energy"] = report.reference_energy ? json(*report.reference_energy) : json();
  json solvers = json::array();
  for (const auto& s : report.solvers) {
    json sj;
    sj["solver"] = s.label;
    sj["kind"] = to_string(s.kind);
    if (s.eta) sj["eta"] = *s.eta;
    sj["best_energy"] = s.best_energy;
    sj["mean_energy"] = s.mean_energy;
    sj["worst_energy"] = s.worst_energy;
    sj["attainment"] = s.attainment ? json(*s.attainment) : json();
    if (s.tts) {
      json t;
      t["mean_s"] = s.tts->mean_s ? json(*s.tts->mean_s) : json();
      t["reached"] = s.tts->reached;
      t["runs"] = s.tts->runs;
      t["summary"] = s.tts->describe();
      json per = json::array();
      for (const auto& v : s.tts->per_run) per.push_back(v ? json(*v) : json());
      t["per_run_s"] = per;
      sj["tts"] = t;
    }
    sj["histogram"] = {{"edges", s.histogram.edges}, {"counts", s.histogram.counts}};
    json runs = json::array();
    for (const auto& r : s.runs) {
      json rj = {{"seed", r.seed},
                 {"energy", r.energy},
                 {"elapsed_s", r.elapsed_s},
                 {"iterations", r.iterations}};
      if (r.cut_value) rj["cut_value"] = *r.cut_value;
      runs.push_back(rj);
    }
    sj["runs"] = runs;
    solvers.push_back(sj);
  }
  j["solvers"] = solvers;
  if (with_environment) j["environment"] = report.environment;
  out << j.dump(2) << '\n';
}

void write_summary_csv(std::ostream& out, const BenchReport& report) {
  out << "solver,runs,best_energy,mean_energy,worst_energy,attainment,avg_tts_s,tts_reached\n";
  for (const auto& s : report.solvers) {
    out << s.label << ',' << s.runs.size() << ',' << fmt17(s.best_energy) << ','
        << fmt17(s.mean_energy) << ',' << fmt17(s.worst_energy) << ','
        << (s.attainment ? fmt17(*s.attainment) : "") << ','
        << (s.tts && s.tts->mean_s ? fmt17(*s.tts->mean_s) : "") << ','
        << (s.tts ? std::to_string(s.tts->reached) + "/" + std::to_string(s.tts->runs) : "")
        << '\n';
  }
}

void write_long_csv(std::ostream& out, const BenchReport& report) {
  out << "solver,run,iter,elapsed_s,energy\n";
  for (const auto& s : report.solvers) {
    for (std::size_t r = 0; r < s.runs.size(); ++r) {
      for (const auto& t : s.runs[r].trace) {
        out << s.label << ',' << r << ',' << t.iter << ',' << fmt17(t.elapsed_s) << ','
            << fmt17(t.energy) << '\n';
      }
    }
  }
}

}  // namespace isingdc
