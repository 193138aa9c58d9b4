#include "isingdc/doch.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <string>

#include "isingdc/matvec.hpp"
#include "isingdc/rng.hpp"
#include "run_recorder.hpp"

namespace isingdc {

namespace {

void check_size(std::span<const double> x, std::size_t n, const char* what) {
  if (x.size() != n) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (expected " +
                                std::to_string(n) + ", got " + std::to_string(x.size()) +
                                ")");
  }
}

// x_next = cbrt((Jv + αv) / β); returns ||x_next - x_prev||_inf.
double fixed_point_step(std::span<const double> v, std::span<const double> jv, double alpha,
                        double beta, std::span<const double> x_prev,
                        std::vector<double>& x_next) {
  double step = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    x_next[i] = real_cbrt((jv[i] + alpha * v[i]) / beta);
    step = std::max(step, std::abs(x_next[i] - x_prev[i]));
  }
  return step;
}

bool descent_broken(double h_before, double h_after) {
  return h_after - h_before > 1e-9 * std::max(1.0, std::abs(h_before));
}

std::vector<double> start_state(std::optional<std::vector<double>> x0, std::size_t n,
                                const SolverParams& p) {
  std::vector<double> x = x0 ? std::move(*x0) : initial_state(n, p.alpha, p.beta, p.seed);
  check_size(x, n, "initial state");
  if (std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; })) {
    throw std::invalid_argument("initial state must be nonzero");
  }
  for (double v : x) {
    if (!std::isfinite(v)) throw std::invalid_argument("initial state must be finite");
  }
  return x;
}

}  // namespace

HamiltonianView::HamiltonianView(CouplingMatrix J, double alpha_, double beta_)
    : coupling(std::move(J)), alpha(alpha_), beta(beta_) {
  if (!(alpha > 0.0) || !(beta > 0.0)) {
    throw std::invalid_argument("Hamiltonian: alpha and beta must be positive");
  }
}

double attractor(std::span<const double> x, double alpha, double beta) {
  double quartic = 0.0, square = 0.0;
  for (double v : x) {
    const double v2 = v * v;
    square += v2;
    quartic += v2 * v2;
  }
  return 0.25 * beta * quartic - 0.5 * alpha * square;
}

double hamiltonian_from_product(const HamiltonianView& H, std::span<const double> x,
                                std::span<const double> jx) {
  return attractor(x, H.alpha, H.beta) - 0.5 * dot(x, jx);
}

double hamiltonian(const HamiltonianView& H, std::span<const double> x,
                   const MatvecConfig& cfg) {
  check_size(x, H.size(), "hamiltonian");
  const auto jx = matvec(H.coupling, x, cfg);
  return hamiltonian_from_product(H, x, jx);
}

double hamiltonian_split(const HamiltonianView& H, std::span<const double> x,
                         const MatvecConfig& cfg) {
  check_size(x, H.size(), "hamiltonian");
  auto ax = matvec(H.coupling, x, cfg);
  double f = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    ax[i] += H.alpha * x[i];
    f += x[i] * x[i] * x[i] * x[i];
  }
  f *= 0.25 * H.beta;
  const double g = 0.5 * dot(x, ax);
  return f - g;
}

std::vector<double> hamiltonian_gradient(const HamiltonianView& H, std::span<const double> x,
                                         const MatvecConfig& cfg) {
  check_size(x, H.size(), "hamiltonian_gradient");
  auto g = matvec(H.coupling, x, cfg);
  for (std::size_t i = 0; i < x.size(); ++i) {
    g[i] = H.beta * x[i] * x[i] * x[i] - g[i] - H.alpha * x[i];
  }
  return g;
}

std::vector<double> apply_T(const HamiltonianView& H, std::span<const double> x,
                            const MatvecConfig& cfg) {
  check_size(x, H.size(), "apply_T");
  auto y = matvec(H.coupling, x, cfg);
  for (std::size_t i = 0; i < x.size(); ++i) {
    y[i] = real_cbrt((y[i] + H.alpha * x[i]) / H.beta);
  }
  return y;
}

std::vector<double> initial_state(std::size_t n, double alpha, double beta,
                                  std::uint64_t seed) {
  const double lambda = std::sqrt(alpha / beta);
  Rng rng(seed, 0xD0C4);
  std::vector<double> x(n);
  for (auto& v : x) {
    do {
      v = lambda * (2.0 * rng.uniform01() - 1.0);
    } while (v == 0.0);
  }
  return x;
}

double momentum_t_next(double t) { return 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t)); }

SolveResult doch_solve(const ProblemInstance& instance, const SolverParams& params,
                       std::optional<std::vector<double>> x0, const SolveOptions& options) {
  params.validate();
  detail::RunRecorder rec(instance, options, params.time_budget_s);
  const CouplingMatrix& J = rec.coupling();
  const HamiltonianView H(J, params.alpha, params.beta);
  const std::size_t n = J.size();
  const auto& cfg = options.matvec;

  std::vector<double> x = start_state(std::move(x0), n, params);
  std::vector<double> jx = matvec(J, x, cfg);
  std::vector<double> x_next(n), jx_next(n);
  double h = hamiltonian_from_product(H, x, jx);

  if (rec.observer()) rec.observer()(0, x);
  rec.record_state(0, x);

  std::int64_t k = 0;
  std::int64_t violations = 0;
  bool converged = false;
  bool last_recorded = true;
  while (k < params.max_iters && !rec.out_of_time()) {
    const double step = fixed_point_step(x, jx, H.alpha, H.beta, x, x_next);
    matvec_into(J, x_next, jx_next, cfg);
    const double h_next = hamiltonian_from_product(H, x_next, jx_next);
    std::optional<std::string> event;
    if (descent_broken(h, h_next)) {
      ++violations;
      event = "descent_violation";
    }
    std::swap(x, x_next);
    std::swap(jx, jx_next);
    h = h_next;
    ++k;
    if (rec.observer()) rec.observer()(k, x);
    converged = step <= params.step_tol;
    last_recorded = rec.due(k) || converged || k == params.max_iters || event.has_value();
    if (last_recorded) rec.record_state(k, x, std::move(event));
    if (converged) break;
  }
  if (!last_recorded) rec.record_state(k, x);
  auto result = rec.finish(std::move(x), k, converged);
  result.descent_violations = violations;
  return result;
}

SolveResult adoch_solve(const ProblemInstance& instance, const SolverParams& params,
                        std::optional<std::vector<double>> x0, const SolveOptions& options) {
  params.validate();
  detail::RunRecorder rec(instance, options, params.time_budget_s);
  const CouplingMatrix& J = rec.coupling();
  const HamiltonianView H(J, params.alpha, params.beta);
  const std::size_t n = J.size();
  const auto& cfg = options.matvec;
  const auto window_len = static_cast<std::size_t>(params.lookback_q) + 1;

  std::vector<double> x = start_state(std::move(x0), n, params);
  std::vector<double> jx = matvec(J, x, cfg);
  std::vector<double> x_prev, jx_prev;
  std::vector<double> y(n), jy(n), x_next(n), jx_next(n);
  std::deque<double> window{hamiltonian_from_product(H, x, jx)};
  std::vector<std::uint8_t> decisions;
  double t = 1.0;

  if (rec.observer()) rec.observer()(0, x);
  rec.record_state(0, x);

  std::int64_t k = 0;
  bool converged = false;
  bool last_recorded = true;
  while (k < params.max_iters && !rec.out_of_time()) {
    const double t_next = momentum_t_next(t);
    bool accept = true;
    if (k >= 1) {
      const double c = (t - 1.0) / t_next;
      for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + c * (x[i] - x_prev[i]);
      if (options.momentum_eval == MomentumEval::exact) {
        matvec_into(J, y, jy, cfg);
      } else {
        for (std::size_t i = 0; i < n; ++i) jy[i] = (1.0 + c) * jx[i] - c * jx_prev[i];
      }
      const double hy = hamiltonian_from_product(H, y, jy);
      accept = hy <= *std::max_element(window.begin(), window.end());
    }
    const bool use_y = k >= 1 && accept;
    const std::span<const double> v = use_y ? std::span<const double>(y) : x;
    const std::span<const double> jv = use_y ? std::span<const double>(jy) : jx;
    const double step = fixed_point_step(v, jv, H.alpha, H.beta, x, x_next);
    matvec_into(J, x_next, jx_next, cfg);

    x_prev.swap(x);
    jx_prev.swap(jx);
    x.swap(x_next);
    jx.swap(jx_next);
    if (x_next.size() != n) {
      x_next.resize(n);
      jx_next.resize(n);
    }
    window.push_back(hamiltonian_from_product(H, x, jx));
    while (window.size() > window_len) window.pop_front();
    t = t_next;
    decisions.push_back(accept ? 1 : 0);
    ++k;

    if (rec.observer()) rec.observer()(k, x);
    std::optional<std::string> event;
    if (k >= 2) event = accept ? "momentum_accepted" : "momentum_rejected";
    converged = step <= params.step_tol;
    last_recorded = rec.due(k) || converged || k == params.max_iters || !accept;
    if (last_recorded) rec.record_state(k, x, std::move(event));
    if (converged) break;
  }
  if (!last_recorded) rec.record_state(k, x);
  auto result = rec.finish(std::move(x), k, converged);
  result.momentum_accepted = std::move(decisions);
  return result;
}

double jacobian_norm_at(const HamiltonianView& H, std::span<const double> x_star,
                        const MatvecConfig& cfg, double tol, std::int64_t max_iters) {
  check_size(x_star, H.size(), "jacobian_norm_at");
  const std::size_t n = x_star.size();
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (x_star[i] == 0.0) {
      throw std::domain_error("Jacobian undefined: component " + std::to_string(i) +
                              " of the fixed point is zero");
    }
    const double d = 1.0 / (3.0 * H.beta * x_star[i] * x_star[i]);
    d2[i] = d * d;
  }
  std::vector<double> tmp(n);
  // MᵀM v = A D² A v with A = J + αI, D = diag(1/(3β x*²)).
  const LinearOp gram = [&](std::span<const double> v, std::span<double> out) {
    matvec_into(H.coupling, v, tmp, cfg);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = (tmp[i] + H.alpha * v[i]) * d2[i];
    matvec_into(H.coupling, tmp, out, cfg);
    for (std::size_t i = 0; i < n; ++i) out[i] += H.alpha * tmp[i];
  };
  const auto top = dominant_eigenpair(gram, n, tol, max_iters);
  return std::sqrt(std::max(0.0, top.value));
}

}  // namespace isingdc
