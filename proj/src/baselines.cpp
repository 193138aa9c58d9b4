#include "isingdc/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "isingdc/matvec.hpp"
#include "isingdc/rng.hpp"
#include "isingdc/spectral.hpp"
#include "run_recorder.hpp"

namespace isingdc {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

void check_dt(double dt, const char* what) {
  require(dt > 0.0 && dt <= 1.25, what);
}

// (Js)_i from row i only: O(row degree).
double local_field(const CouplingMatrix& J, std::span<const double> s, std::size_t i) {
  const std::size_t n = J.size();
  if (const auto* d = J.as_dense()) return dot({d->values.data() + i * n, n}, s);
  if (const auto* c = J.as_csr()) {
    double acc = 0.0;
    for (auto k = c->row_offsets[i]; k < c->row_offsets[i + 1]; ++k) {
      acc += c->values[k] * s[c->column_indices[k]];
    }
    return acc;
  }
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) acc += J.entry(i, j) * s[j];
  return acc;
}

std::vector<double> random_pm1(std::size_t n, Rng& rng) {
  std::vector<double> x(n);
  for (auto& v : x) v = rng.spin();
  return x;
}

double coupling_strength(const std::optional<double>& c0, const CouplingMatrix& J) {
  return c0 ? *c0 : default_c0(J);
}

}  // namespace

void BaselineParams::validate() const {
  require(sa.beta0 > 0.0, "SA: beta0 must be positive");
  require(sa.total_T > 0.0, "SA: T must be positive");
  require(sa.attempts >= 0, "SA: attempts must be non-negative");
  require(bsb.a0 > 0.0 && bsb.steps > 0, "bSB: a0 and steps must be positive");
  require(!bsb.c0 || *bsb.c0 >= 0.0, "bSB: c0 must be non-negative");
  check_dt(bsb.dt, "bSB: dt must lie in (0, 1.25]");
  require(simcim.a0 > 0.0 && simcim.steps > 0, "SimCIM: a0 and steps must be positive");
  require(simcim.noise_A >= 0.0, "SimCIM: noise amplitude must be non-negative");
  require(!simcim.c0 || *simcim.c0 >= 0.0, "SimCIM: c0 must be non-negative");
  check_dt(simcim.dt, "SimCIM: dt must lie in (0, 1.25]");
  require(sia.mass_m > 0.0 && sia.elastic_k > 0.0 && sia.zeta0 > 0.0 && sia.steps > 0,
          "SIA: m, k, zeta0 and steps must be positive");
  check_dt(sia.dt, "SIA: dt must lie in (0, 1.25]");
  require(!time_budget_s || *time_budget_s > 0.0, "time budget must be positive");
}

double default_c0(const CouplingMatrix& J) {
  if (J.size() < 2 || !J.has_nonzero()) return 0.0;
  const double sd = std::sqrt(offdiag_stats(J).variance);
  if (sd == 0.0) return 0.0;
  return 1.0 / (2.0 * sd * std::sqrt(static_cast<double>(J.size())));
}

SolveResult sa_solve(const ProblemInstance& instance, const BaselineParams& p,
                     std::uint64_t seed, const SolveOptions& options, SaStats* stats) {
  p.validate();
  detail::RunRecorder rec(instance, options, p.time_budget_s);
  const CouplingMatrix& J = rec.coupling();
  const std::size_t n = J.size();
  Rng rng(seed, 0x5A);
  std::vector<double> s = random_pm1(n, rng);
  SpinVector spins = SpinVector::sign_of(s);
  double e = energy(J, spins, options.matvec);
  SaStats local;

  rec.record_spins(0, spins, e);
  if (rec.observer()) rec.observer()(0, s);
  std::int64_t t = 0;
  bool last_recorded = true;
  const double beta0 = p.sa.beta0;
  const double T = p.sa.total_T;
  while (t < p.sa.attempts) {
    if ((t & 1023) == 0 && rec.out_of_time()) break;
    ++t;
    const double beta = beta0 * std::log1p(static_cast<double>(t) / T);
    const auto i = static_cast<std::size_t>(rng.below(n));
    const double delta = 2.0 * s[i] * local_field(J, s, i);
    const double z = rng.uniform_open01();
    if (delta < 0.0 || std::exp(-beta * delta) >= z) {
      s[i] = -s[i];
      spins.flip(i);
      e += delta;
      ++local.accepted;
      if (e < rec.best_energy()) rec.offer(spins, e);
      if (p.sa.check_interval > 0 && local.accepted % p.sa.check_interval == 0) {
        const double full = energy(J, spins, options.matvec);
        local.max_energy_drift = std::max(local.max_energy_drift, std::abs(full - e));
        ++local.energy_checks;
      }
    }
    last_recorded = rec.due(t) || t == p.sa.attempts;
    if (last_recorded) {
      rec.record_spins(t, spins, e);
      if (rec.observer()) rec.observer()(t, s);
    }
  }
  if (!last_recorded) rec.record_spins(t, spins, e);
  if (stats) *stats = local;
  return rec.finish(std::move(s), t, false);
}

SolveResult bsb_solve(const ProblemInstance& instance, const BaselineParams& p,
                      std::uint64_t seed, const SolveOptions& options) {
  p.validate();
  detail::RunRecorder rec(instance, options, p.time_budget_s);
  const CouplingMatrix& J = rec.coupling();
  const std::size_t n = J.size();
  const auto& q = p.bsb;
  const double c0 = coupling_strength(q.c0, J);
  Rng rng(seed, 0xB5B);
  std::vector<double> x = random_pm1(n, rng);
  std::vector<double> y(n, 0.0), jx(n);

  rec.record_state(0, x);
  if (rec.observer()) rec.observer()(0, x);
  std::int64_t t = 0;
  bool last_recorded = true;
  while (t < q.steps && !rec.out_of_time()) {
    ++t;
    const double at = q.a0 * static_cast<double>(t) / static_cast<double>(q.steps);
    matvec_into(J, x, jx, options.matvec);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] += (-(q.a0 - at) * x[i] + c0 * jx[i]) * q.dt;
      x[i] += q.a0 * y[i] * q.dt;
      if (x[i] >= 1.0 || x[i] <= -1.0) {
        x[i] = x[i] > 0.0 ? 1.0 : -1.0;
        y[i] = 0.0;
      }
    }
    if (rec.observer()) rec.observer()(t, x);
    last_recorded = rec.due(t) || t == q.steps;
    if (last_recorded) rec.record_state(t, x);
  }
  if (!last_recorded) rec.record_state(t, x);
  return rec.finish(std::move(x), t, false);
}

SolveResult simcim_solve(const ProblemInstance& instance, const BaselineParams& p,
                         std::uint64_t seed, const SolveOptions& options) {
  p.validate();
  detail::RunRecorder rec(instance, options, p.time_budget_s);
  const CouplingMatrix& J = rec.coupling();
  const std::size_t n = J.size();
  const auto& q = p.simcim;
  const double c0 = coupling_strength(q.c0, J);
  const double noise = q.noise_A * std::sqrt(q.dt);
  Rng rng(seed, 0xC13);
  std::vector<double> x = random_pm1(n, rng);
  std::vector<double> js(n);

  if (rec.observer()) rec.observer()(0, x);
  std::int64_t t = 0;
  while (t < q.steps && !rec.out_of_time()) {
    const SpinVector s = SpinVector::sign_of(x);
    const auto sd = s.as_doubles();
    matvec_into(J, sd, js, options.matvec);
    // The product scores the pre-update state for free.
    const double e = -0.5 * dot(sd, js);
    if (rec.due(t)) {
      rec.record_spins(t, s, e);
    } else {
      rec.offer(s, e);
    }
    ++t;
    const double at = q.a0 * static_cast<double>(t) / static_cast<double>(q.steps);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += (-(q.a0 - at) * x[i] + c0 * js[i]) * q.dt + noise * rng.normal();
      x[i] = std::clamp(x[i], -1.0, 1.0);
    }
    if (rec.observer()) rec.observer()(t, x);
  }
  rec.record_state(t, x);
  return rec.finish(std::move(x), t, false);
}

void sia_boundary(std::span<double> q, std::span<double> p) {
  const double qmax = std::numbers::sqrt2;
  for (auto& v : q) v = std::clamp(v, -qmax, qmax);
  for (auto& v : p) v = std::clamp(v, -2.0, 2.0);
}

SolveResult sia_solve(const ProblemInstance& instance, const BaselineParams& p,
                      std::uint64_t seed, const SolveOptions& options) {
  p.validate();
  detail::RunRecorder rec(instance, options, p.time_budget_s);
  const CouplingMatrix& J = rec.coupling();
  const std::size_t n = J.size();
  const auto& s = p.sia;
  Rng rng(seed, 0x51A);
  std::vector<double> q(n, 0.0), mom(n), jq(n);
  for (auto& v : mom) v = rng.uniform(-0.0005, 0.0005);

  // The clamp at the top of each step is applied at the end of the previous
  // one instead; the first clamp is a no-op on (0, p0).
  rec.record_state(0, q);
  if (rec.observer()) rec.observer()(0, q);
  std::int64_t t = 0;
  bool last_recorded = true;
  const double span_steps = static_cast<double>(std::max<std::int64_t>(1, s.steps - 1));
  while (t < s.steps && !rec.out_of_time()) {
    const double zeta = s.zeta0 * (0.8 + 9.2 * static_cast<double>(t) / span_steps);
    ++t;
    for (std::size_t i = 0; i < n; ++i) q[i] += (s.dt / s.mass_m) * mom[i];
    matvec_into(J, q, jq, options.matvec);
    for (std::size_t i = 0; i < n; ++i) {
      mom[i] += -s.dt * s.elastic_k * q[i] + zeta * s.dt * jq[i];
    }
    sia_boundary(q, mom);
    if (rec.observer()) rec.observer()(t, q);
    last_recorded = rec.due(t) || t == s.steps;
    if (last_recorded) rec.record_state(t, q);
  }
  if (!last_recorded) rec.record_state(t, q);
  return rec.finish(std::move(q), t, false);
}

}  // namespace isingdc
