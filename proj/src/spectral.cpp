#include "isingdc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "isingdc/doch.hpp"
#include "isingdc/matvec.hpp"
#include "isingdc/rng.hpp"

namespace isingdc {

namespace {

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

void scale(std::span<double> v, double s) {
  for (auto& x : v) x *= s;
}

std::vector<double> ones_start(std::size_t n) {
  return std::vector<double>(n, 1.0 / std::sqrt(static_cast<double>(n)));
}

std::vector<double> random_start(std::size_t n, std::uint64_t seed) {
  Rng rng(seed, 0xE16E);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.normal();
  const double nv = norm2(v);
  scale(v, 1.0 / nv);
  return v;
}

struct RunOutcome {
  PowerResult result;
  bool breakdown = false;
};

// Rayleigh-quotient power iteration from a unit start vector.
RunOutcome rayleigh_run(const LinearOp& op, std::vector<double> v, double tol,
                        std::int64_t max_iters) {
  const std::size_t n = v.size();
  std::vector<double> w(n);
  RunOutcome out;
  out.result.vector = v;
  for (std::int64_t it = 1; it <= max_iters; ++it) {
    op(v, w);
    const double rho = dot(v, w);
    const double nw = norm2(w);
    out.result.iterations = it;
    out.result.value = rho;
    if (nw == 0.0) {
      out.breakdown = true;
      out.result.residual = 0.0;
      out.result.converged = true;
      out.result.vector = v;
      return out;
    }
    double r2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = w[i] - rho * v[i];
      r2 += d * d;
    }
    const double res = std::sqrt(r2) / std::max(std::abs(rho), 1e-300);
    out.result.residual = res;
    out.result.vector = v;
    if (res <= tol) {
      out.result.converged = true;
      return out;
    }
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / nw;
  }
  return out;
}

// Power iteration converging on the squared operator: ||M v|| approaches the
// spectral radius from below.
RunOutcome radius_run(const LinearOp& op, std::vector<double> v, double tol,
                      std::int64_t max_iters) {
  const std::size_t n = v.size();
  std::vector<double> w(n), w_next(n);
  RunOutcome out;
  op(v, w);
  double nw = norm2(w);
  out.result.iterations = 1;
  for (std::int64_t it = 2; it <= max_iters + 1; ++it) {
    if (nw == 0.0) {
      out.breakdown = true;
      out.result.value = 0.0;
      out.result.converged = true;
      out.result.vector = v;
      return out;
    }
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / nw;
    op(v, w_next);
    out.result.iterations = it;
    // ||M² u - r² u|| / r² with u the previous unit vector, r = nw.
    double r2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      // w / nw is v; M u = w  =>  M² u = nw * w_next.
      const double d = w_next[i] - w[i];
      r2 += d * d;
    }
    const double res = std::sqrt(r2) / nw;
    const double nw_next = norm2(w_next);
    out.result.value = std::max(nw, nw_next);
    out.result.residual = res;
    out.result.vector = v;
    if (res <= tol) {
      out.result.converged = true;
      return out;
    }
    std::swap(w, w_next);
    nw = nw_next;
  }
  return out;
}

template <typename Run>
PowerResult with_restart(Run run, const LinearOp& op, std::size_t n, double tol,
                         std::int64_t max_iters, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("power iteration: empty operator");
  auto first = run(op, ones_start(n), tol, max_iters);
  const bool suspicious =
      !first.result.converged || first.breakdown || first.result.iterations <= 2;
  if (!suspicious) return first.result;
  auto second = run(op, random_start(n, seed), tol, max_iters);
  const std::int64_t total = first.result.iterations + second.result.iterations;
  PowerResult best = std::abs(second.result.value) > std::abs(first.result.value)
                         ? second.result
                         : first.result;
  best.iterations = total;
  return best;
}

LinearOp coupling_op(const CouplingMatrix& J, double scale_by, double shift,
                     const MatvecConfig& cfg) {
  return [&J, scale_by, shift, cfg](std::span<const double> v, std::span<double> y) {
    matvec_into(J, v, y, cfg);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = scale_by * y[i] + shift * v[i];
  };
}

}  // namespace

void SolverParams::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("solver params: alpha must be positive");
  }
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("solver params: beta must be positive");
  }
  if (lookback_q < 1) throw std::invalid_argument("solver params: lookback q must be >= 1");
  if (max_iters < 0) throw std::invalid_argument("solver params: negative iteration budget");
}

PowerResult dominant_eigenpair(const LinearOp& op, std::size_t n, double tol,
                               std::int64_t max_iters, std::uint64_t seed) {
  return with_restart(rayleigh_run, op, n, tol, max_iters, seed);
}

PowerResult spectral_radius(const LinearOp& op, std::size_t n, double tol,
                            std::int64_t max_iters) {
  return with_restart(radius_run, op, n, tol, max_iters, 0x5EED);
}

double power_method_lambda_max(const CouplingMatrix& M, double tol, std::int64_t max_iters,
                               const MatvecConfig& cfg) {
  if (!M.has_nonzero()) {
    throw std::domain_error("power method: matrix has no nonzero entry");
  }
  return spectral_radius(coupling_op(M, 1.0, 0.0, cfg), M.size(), tol, max_iters).value;
}

SpectralEstimate power_lambda_max_negJ(const CouplingMatrix& J, double tol,
                                       std::int64_t max_iters, const MatvecConfig& cfg) {
  if (!J.has_nonzero()) {
    throw std::domain_error("λmax(-J): coupling matrix is all zeros");
  }
  const std::size_t n = J.size();
  // A loose radius is enough for the shift: it only has to make λmax(-J) + c
  // the eigenvalue of largest magnitude.
  const auto radius = spectral_radius(coupling_op(J, -1.0, 0.0, cfg), n, 1e-4,
                                      std::min<std::int64_t>(max_iters, 5000));
  const double shift = radius.value;
  auto top = dominant_eigenpair(coupling_op(J, -1.0, shift, cfg), n, tol, max_iters);
  double lambda = top.value - shift;
  std::int64_t iters = radius.iterations + top.iterations;
  if (!(lambda > 0.0)) {
    // Trace zero and J != 0 force λmax(-J) > 0; retry from a random start.
    auto retry = rayleigh_run(coupling_op(J, -1.0, shift, cfg), random_start(n, 0xA11CE),
                              tol, max_iters);
    iters += retry.result.iterations;
    lambda = std::max(lambda, retry.result.value - shift);
    if (!(lambda > 0.0)) {
      throw std::runtime_error("λmax(-J): power iteration failed to resolve a positive eigenvalue");
    }
  }
  SpectralEstimate est;
  est.lambda_max_negJ = lambda;
  est.method = SpectralMethod::power_iteration;
  est.iterations_used = iters;
  return est;
}

OffDiagonalStats offdiag_stats(const CouplingMatrix& J) {
  const std::size_t n = J.size();
  if (n < 2) throw std::domain_error("off-diagonal statistics need n >= 2");
  const double slots = static_cast<double>(n) * static_cast<double>(n - 1);
  OffDiagonalStats st;
  if (const auto* c = J.as_csr()) {
    double sum = 0.0;
    for (double v : c->values) sum += v;
    st.mean = sum / slots;
    double ss = 0.0;
    for (double v : c->values) ss += (v - st.mean) * (v - st.mean);
    ss += (slots - static_cast<double>(c->nnz())) * st.mean * st.mean;
    st.variance = ss / slots;
    return st;
  }
  // Row strips, two passes (mean, then centered squares).
  const std::size_t strip = std::max<std::size_t>(1, std::min<std::size_t>(n, 65536 / n + 1));
  std::vector<double> buf(strip * n);
  auto for_each_offdiag = [&](auto&& fn) {
    for (std::size_t r0 = 0; r0 < n; r0 += strip) {
      const std::size_t r1 = std::min(n, r0 + strip);
      J.fill_block(r0, r1, 0, n, buf);
      for (std::size_t i = r0; i < r1; ++i) {
        const double* row = buf.data() + (i - r0) * n;
        for (std::size_t j = 0; j < n; ++j) {
          if (j != i) fn(row[j]);
        }
      }
    }
  };
  double sum = 0.0;
  for_each_offdiag([&](double v) { sum += v; });
  st.mean = sum / slots;
  double ss = 0.0;
  for_each_offdiag([&](double v) { ss += (v - st.mean) * (v - st.mean); });
  st.variance = ss / slots;
  return st;
}

double wigner_lambda_max(const CouplingMatrix& J) {
  if (J.size() < 2) throw std::domain_error("semicircle estimate needs n >= 2");
  if (!J.has_nonzero()) {
    throw std::domain_error("semicircle estimate: coupling matrix is all zeros");
  }
  const auto st = offdiag_stats(J);
  return 2.0 * std::sqrt(st.variance) * std::sqrt(static_cast<double>(J.size()));
}

SpectralEstimate estimate_lambda_max_negJ(const CouplingMatrix& J, SpectralMethod method,
                                          const MatvecConfig& cfg) {
  if (method == SpectralMethod::automatic) {
    method = J.size() >= kWignerThreshold ? SpectralMethod::wigner
                                          : SpectralMethod::power_iteration;
  }
  if (method == SpectralMethod::wigner) {
    const double est = wigner_lambda_max(J);
    if (est > 0.0) {
      SpectralEstimate out;
      out.lambda_max_negJ = est;
      out.method = SpectralMethod::wigner;
      out.sample_variance = offdiag_stats(J).variance;
      return out;
    }
  }
  return power_lambda_max_negJ(J, 1e-7, 200000, cfg);
}

SolverParams params_from_lambda(const CouplingMatrix& J, double eta, double lambda_max_negJ) {
  if (!(eta > 0.0 && eta <= 2.0)) {
    throw std::invalid_argument("eta must lie in (0, 2], got " + std::to_string(eta));
  }
  SolverParams p;
  p.eta = eta;
  p.alpha = eta * lambda_max_negJ;
  const double n = static_cast<double>(J.size());
  p.beta = n * std::sqrt(n) * shifted_inf_norm(J, p.alpha);
  p.validate();
  return p;
}

SolverParams derive_params(const CouplingMatrix& J, double eta, SpectralMethod method,
                           const MatvecConfig& cfg) {
  if (!(eta > 0.0 && eta <= 2.0)) {
    throw std::invalid_argument("eta must lie in (0, 2], got " + std::to_string(eta));
  }
  const auto est = estimate_lambda_max_negJ(J, method, cfg);
  return params_from_lambda(J, eta, est.lambda_max_negJ);
}

double tune_eta(const ProblemInstance& instance, std::vector<double> candidate_etas,
                std::int64_t probe_iters, std::uint64_t seed, SpectralMethod method,
                const MatvecConfig& cfg) {
  if (candidate_etas.empty()) throw std::invalid_argument("tune_eta: no candidates");
  if (probe_iters < 1) throw std::invalid_argument("tune_eta: probe_iters must be >= 1");
  std::sort(candidate_etas.begin(), candidate_etas.end());
  if (candidate_etas.size() == 1) return candidate_etas.front();

  const CouplingMatrix J =
      instance.field ? homogenize(instance.coupling, *instance.field) : instance.coupling;
  if (!J.has_nonzero()) return candidate_etas.front();
  const double lambda = estimate_lambda_max_negJ(J, method, cfg).lambda_max_negJ;

  SolveOptions opts;
  opts.matvec = cfg;
  opts.keep_trace = false;
  opts.trace_stride = probe_iters + 1;

  double best_eta = candidate_etas.front();
  double best_energy = 0.0;
  bool first = true;
  for (double eta : candidate_etas) {
    auto p = params_from_lambda(J, eta, lambda);
    p.max_iters = probe_iters;
    p.seed = seed;
    p.step_tol = 0.0;
    const auto r = doch_solve(instance, p, std::nullopt, opts);
    const double e = energy(J, SpinVector::sign_of(r.state), cfg);
    if (first || e < best_energy) {
      best_energy = e;
      best_eta = eta;
      first = false;
    }
  }
  return best_eta;
}

}  // namespace isingdc
