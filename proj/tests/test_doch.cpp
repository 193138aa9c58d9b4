#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "isingdc/bench.hpp"
#include "isingdc/doch.hpp"
#include "isingdc/matvec.hpp"
#include "isingdc/spectral.hpp"
#include "test_support.hpp"

using namespace isingdc;

namespace {

CouplingMatrix antiferro2() { return CouplingMatrix::dense(2, {0, -1, -1, 0}); }

ProblemInstance as_instance(CouplingMatrix J) {
  return ProblemInstance{std::move(J), std::nullopt, "t", std::nullopt, std::nullopt};
}

std::vector<double> random_point(std::size_t n, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> x(n);
  for (auto& v : x) v = u(rng);
  return x;
}

double inf_norm_diff(const std::vector<double>& a, const std::vector<double>& b) {
  return testsupport::max_abs_diff(a, b);
}

SolverParams fixed_params(double alpha, double beta, std::int64_t iters = 100) {
  SolverParams p;
  p.alpha = alpha;
  p.beta = beta;
  p.max_iters = iters;
  return p;
}

}  // namespace

TEST_CASE("attractor") {
  CHECK(attractor(std::vector<double>{1, 1}, 1, 1) == doctest::Approx(-0.5));
  CHECK(attractor(std::vector<double>{0, 0, 0}, 2, 3) == 0.0);
  for (double sx : {-1.0, 1.0}) {
    for (double sy : {-1.0, 1.0}) {
      CHECK(attractor(std::vector<double>{sx, sy}, 1, 1) == doctest::Approx(-0.5));
    }
  }
  // Per-coordinate minimum -α²/(4β) at ±sqrt(α/β), against a grid search.
  const double alpha = 1.7, beta = 0.6;
  double best = 1e300, arg = 0.0;
  for (int k = -400000; k <= 400000; ++k) {
    const double x = k * 1e-5;
    const double a = attractor(std::vector<double>{x}, alpha, beta);
    if (a < best) {
      best = a;
      arg = x;
    }
  }
  CHECK(best == doctest::Approx(-alpha * alpha / (4 * beta)).epsilon(1e-8));
  CHECK(std::abs(std::abs(arg) - std::sqrt(alpha / beta)) <= 2e-5);
}

TEST_CASE("Hamiltonian split forms agree") {
  const auto J = testsupport::random_sk(30, 4);
  const HamiltonianView H(J, 3.0, 7.0);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto x = random_point(30, seed);
    const double a = hamiltonian(H, x);
    CHECK(hamiltonian_split(H, x) == doctest::Approx(a).epsilon(1e-10));
    CHECK(a == doctest::Approx(attractor(x, 3.0, 7.0) + relaxed_energy(J, x)).epsilon(1e-12));
  }
  CHECK(hamiltonian(H, std::vector<double>(30, 0.0)) == 0.0);
  CHECK_THROWS_AS(hamiltonian(H, std::vector<double>(29, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(HamiltonianView(J, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(HamiltonianView(J, 1.0, -1.0), std::invalid_argument);
}

TEST_CASE("two-spin Hamiltonian minimizers carry the ground-state signs") {
  const HamiltonianView H(antiferro2(), 1.0, 2.0);
  double best = 1e300;
  std::vector<double> arg(2);
  for (int a = -300; a <= 300; ++a) {
    for (int b = -300; b <= 300; ++b) {
      const std::vector<double> x{a * 0.005, b * 0.005};
      const double h = hamiltonian(H, x);
      if (h < best) {
        best = h;
        arg = x;
      }
    }
  }
  CHECK(arg[0] * arg[1] < 0.0);
}

TEST_CASE("gradient") {
  const auto J = testsupport::random_sk(50, 2);
  const HamiltonianView H(J, 2.0, 5.0);
  CHECK(hamiltonian_gradient(H, std::vector<double>(50, 0.0)) == std::vector<double>(50, 0.0));
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto x = random_point(50, seed + 30);
    const auto g = hamiltonian_gradient(H, x);
    const auto jx = matvec(J, x);
    for (std::size_t i = 0; i < 50; ++i) {
      CHECK(g[i] == doctest::Approx(5.0 * x[i] * x[i] * x[i] - jx[i] - 2.0 * x[i]).epsilon(1e-12));
      const double h = 1e-5;
      const double xi = x[i];
      x[i] = xi + h;
      const double up = hamiltonian(H, x);
      x[i] = xi - h;
      const double down = hamiltonian(H, x);
      x[i] = xi;
      const double fd = (up - down) / (2 * h);
      CHECK(std::abs(fd - g[i]) <= 1e-5 * std::max(1.0, std::abs(g[i])));
    }
  }
}

TEST_CASE("fixed-point map") {
  const HamiltonianView H1(CouplingMatrix::zeros(1), 2.0, 8.0);
  CHECK(apply_T(H1, std::vector<double>{0.0})[0] == 0.0);
  const double lam = std::sqrt(2.0 / 8.0);
  CHECK(apply_T(H1, std::vector<double>{lam})[0] == doctest::Approx(lam).epsilon(1e-15));
  CHECK(apply_T(H1, std::vector<double>{-lam})[0] == doctest::Approx(-lam).epsilon(1e-15));
  // Other points move: cbrt(αx/β) = x only at 0 and ±λ.
  CHECK(apply_T(H1, std::vector<double>{0.3})[0] != doctest::Approx(0.3));
  CHECK(real_cbrt(-8.0) == -2.0);
  CHECK(real_cbrt(27.0) == 3.0);
}

TEST_CASE("DOCH argument checks") {
  const auto inst = as_instance(antiferro2());
  const auto p = fixed_params(1.0, 2.0);
  CHECK_THROWS_AS(doch_solve(inst, p, std::vector<double>{0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(doch_solve(inst, p, std::vector<double>{1.0}), std::invalid_argument);
  CHECK_THROWS_AS(adoch_solve(inst, p, std::vector<double>{0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("two-spin antiferromagnet converges to a ground state within five iterations") {
  const auto inst = as_instance(antiferro2());
  const auto p = fixed_params(1.0, 2.0, 5);
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int run = 0; run < 20; ++run) {
    std::vector<double> x0{u(rng), u(rng)};
    if (std::abs(x0[0] - x0[1]) < 1e-3) x0[1] += 0.1;  // avoid the symmetric ridge
    const auto r = doch_solve(inst, p, x0);
    const auto s = SpinVector::sign_of(r.state);
    CHECK(s[0] * s[1] == -1);
    CHECK(r.iterations <= 5);
  }
}

TEST_CASE("DOCH on n=100 SK: fast convergence to a critical point") {
  const auto J = testsupport::random_sk(100, 1);
  const auto inst = as_instance(J);
  auto p = derive_params(J, 1.0);
  p.max_iters = 5000;
  p.seed = 3;
  std::vector<double> steps;
  SolveOptions o;
  std::vector<double> prev;
  o.on_iterate = [&](std::int64_t, std::span<const double> x) {
    if (!prev.empty()) {
      double d = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(x[i] - prev[i]));
      steps.push_back(d);
    }
    prev.assign(x.begin(), x.end());
  };
  const auto r = doch_solve(inst, p, std::nullopt, o);
  REQUIRE(r.converged);
  std::size_t first_small = steps.size();
  for (std::size_t k = 0; k < steps.size(); ++k) {
    if (steps[k] < 1e-6) {
      first_small = k + 1;
      break;
    }
  }
  CHECK(first_small <= 100);
  const HamiltonianView H(J, p.alpha, p.beta);
  CHECK(inf_norm_diff(apply_T(H, r.state), r.state) <= 1e-8);
  const auto g = hamiltonian_gradient(H, r.state);
  double gmax = 0.0;
  for (double v : g) gmax = std::max(gmax, std::abs(v));
  CHECK(gmax <= 1e-6);
  // (J + αI)x* = β x*³ at a fixed point with nonzero components.
  const auto jx = matvec(J, r.state);
  for (std::size_t i = 0; i < 100; ++i) {
    const double x = r.state[i];
    CHECK(std::abs(jx[i] + p.alpha * x - p.beta * x * x * x) <=
          1e-8 * std::max(1.0, p.beta * std::abs(x * x * x)));
  }
  CHECK(r.descent_violations == 0);
  for (std::size_t k = 1; k < r.trace.size(); ++k) {
    CHECK(r.trace[k].best_energy <= r.trace[k - 1].best_energy);
  }
}

TEST_CASE("ADOCH momentum recurrence") {
  const double t1 = momentum_t_next(1.0);
  CHECK(t1 == doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-15));
  // t2 = (1 + sqrt(1 + 4 t1²)) / 2 = (1 + sqrt(7 + 2 sqrt 5)) / 2.
  const double t2 = momentum_t_next(t1);
  CHECK(t2 == doctest::Approx(2.193527085331054).epsilon(1e-14));
  CHECK((t1 - 1.0) / t2 == doctest::Approx(0.28175352512532087).epsilon(1e-13));
}

TEST_CASE("ADOCH first step matches DOCH; decisions are audited") {
  const auto J = testsupport::random_sk(60, 5);
  const auto inst = as_instance(J);
  auto p = derive_params(J, 1.0);
  p.max_iters = 40;
  p.lookback_q = 1000;
  p.step_tol = 0.0;
  const auto x0 = initial_state(60, p.alpha, p.beta, 9);
  std::vector<std::vector<double>> xd, xa;
  SolveOptions od, oa;
  od.on_iterate = [&](std::int64_t, std::span<const double> x) { xd.emplace_back(x.begin(), x.end()); };
  oa.on_iterate = [&](std::int64_t, std::span<const double> x) { xa.emplace_back(x.begin(), x.end()); };
  doch_solve(inst, p, x0, od);
  const auto ra = adoch_solve(inst, p, x0, oa);
  REQUIRE(xd.size() >= 2);
  REQUIRE(xa.size() >= 2);
  CHECK(xa[0] == xd[0]);
  CHECK(xa[1] == xd[1]);
  CHECK(ra.momentum_accepted.size() == static_cast<std::size_t>(ra.iterations));

  // Every rejected step must be x(k+1) = T(x(k)).
  const HamiltonianView H(J, p.alpha, p.beta);
  for (std::size_t k = 1; k < ra.momentum_accepted.size(); ++k) {
    if (!ra.momentum_accepted[k]) {
      CHECK(inf_norm_diff(xa[k + 1], apply_T(H, xa[k])) <= 1e-15);
    }
  }
  std::size_t tagged = 0;
  for (const auto& t : ra.trace) {
    if (t.event && (*t.event == "momentum_accepted" || *t.event == "momentum_rejected")) ++tagged;
  }
  CHECK(tagged > 0);
}

TEST_CASE("ADOCH window rejection path is exercised with q = 1") {
  const auto J = testsupport::random_sk(80, 6);
  const auto inst = as_instance(J);
  auto p = derive_params(J, 0.25);
  p.max_iters = 300;
  p.lookback_q = 1;
  p.step_tol = 0.0;
  std::vector<std::vector<double>> xs;
  SolveOptions o;
  o.momentum_eval = MomentumEval::exact;
  o.on_iterate = [&](std::int64_t, std::span<const double> x) { xs.emplace_back(x.begin(), x.end()); };
  const auto r = adoch_solve(inst, p, std::nullopt, o);
  const HamiltonianView H(J, p.alpha, p.beta);
  std::size_t rejected = 0;
  for (std::size_t k = 1; k < r.momentum_accepted.size(); ++k) {
    if (!r.momentum_accepted[k]) {
      ++rejected;
      CHECK(inf_norm_diff(xs[k + 1], apply_T(H, xs[k])) <= 1e-15);
    }
  }
  MESSAGE("rejected steps: " << rejected);
}

TEST_CASE("ADOCH is at least as good as DOCH on half of 20 seeds") {
  const auto J = testsupport::random_sk(100, 12);
  const auto inst = as_instance(J);
  auto p = derive_params(J, 1.0);
  p.max_iters = 200;
  SolveOptions o;
  o.trace_stride = 10;
  int wins = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    p.seed = seed;
    const auto d = doch_solve(inst, p, std::nullopt, o);
    const auto a = adoch_solve(inst, p, std::nullopt, o);
    if (a.energy <= d.energy + 1e-9) ++wins;
  }
  MESSAGE("ADOCH <= DOCH on " << wins << "/20");
  CHECK(wins >= 10);
}

TEST_CASE("Jacobian at fixed points") {
  const double alpha = 2.0, beta = 5.0;
  const HamiltonianView H1(CouplingMatrix::zeros(1), alpha, beta);
  CHECK(jacobian_norm_at(H1, std::vector<double>{std::sqrt(alpha / beta)}) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK_THROWS_AS(jacobian_norm_at(H1, std::vector<double>{0.0}), std::domain_error);

  const auto J = testsupport::random_sk(100, 31);
  const auto inst = as_instance(J);
  auto p = derive_params(J, 1.0);
  p.max_iters = 5000;
  p.seed = 1;
  const auto r = doch_solve(inst, p);
  REQUIRE(r.converged);
  const double norm = jacobian_norm_at(HamiltonianView(J, p.alpha, p.beta), r.state);
  CHECK(norm < 1.0);

  // β x100 with the start scaled to match: same u-dynamics, so the norm
  // cannot grow.
  auto p100 = p;
  p100.beta *= 100.0;
  auto x0 = initial_state(100, p.alpha, p.beta, p.seed);
  for (auto& v : x0) v /= 10.0;
  const auto r100 = doch_solve(inst, p100, x0);
  REQUIRE(r100.converged);
  const double norm100 = jacobian_norm_at(HamiltonianView(J, p100.alpha, p100.beta), r100.state);
  CHECK(norm100 <= norm * (1.0 + 1e-6));
}

TEST_CASE("sign extraction at a hypercube fixed point is optimal") {
  int premise = 0;
  for (std::uint64_t seed = 0; seed <= 30; ++seed) {
    const std::size_t n = 8 + seed % 5;
    // seed 0 is the uncoupled model, where every run ends on a vertex.
    const auto J = seed == 0 ? CouplingMatrix::zeros(n) : testsupport::random_sk(n, 500 + seed);
    const auto inst = as_instance(J);
    auto p = seed == 0 ? params_from_lambda(J, 1.0, 1.0) : derive_params(J, 1.0);
    p.max_iters = 20000;
    p.seed = seed;
    const auto r = doch_solve(inst, p);
    const double lam = std::sqrt(p.alpha / p.beta);
    bool cube = r.converged;
    for (double v : r.state) cube = cube && std::abs(std::abs(v) - lam) <= 1e-6 * lam;
    if (!cube) continue;
    ++premise;
    CHECK(energy(J, SpinVector::sign_of(r.state)) ==
          doctest::Approx(brute_force_ground_state(inst).energy).epsilon(1e-12));
  }
  MESSAGE("runs ending on a hypercube vertex: " << premise);
  CHECK(premise >= 1);
}

TEST_CASE("time budget stops the run") {
  const auto J = testsupport::random_sk(200, 2);
  auto p = derive_params(J, 1.0);
  p.max_iters = 100000000;
  p.step_tol = 0.0;
  p.time_budget_s = 0.05;
  const auto r = doch_solve(as_instance(J), p);
  CHECK(r.elapsed_s < 1.0);
  CHECK_FALSE(r.converged);
}

TEST_CASE("field instances run on the bordered model") {
  const auto J = testsupport::random_sk(8, 41);
  const auto h = testsupport::random_field(8, 41);
  const ProblemInstance inst{J, ExternalField(h), "f", std::nullopt, std::nullopt};
  const auto Jh = homogenize(J, ExternalField(h));
  auto p = derive_params(Jh, 1.0);
  p.max_iters = 500;
  const auto r = adoch_solve(inst, p);
  CHECK(r.spins.size() == 8);
  CHECK(r.energy == doctest::Approx(energy_with_field(J, ExternalField(h), r.spins)));
  CHECK(r.energy >= testsupport::exhaustive_min(J, h) - 1e-9);
}
