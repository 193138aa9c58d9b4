#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "isingdc/baselines.hpp"
#include "isingdc/generate.hpp"
#include "test_support.hpp"

using namespace isingdc;

namespace {

ProblemInstance as_instance(CouplingMatrix J) {
  return ProblemInstance{std::move(J), std::nullopt, "t", std::nullopt, std::nullopt};
}

BaselineParams small_params(std::int64_t steps) {
  BaselineParams p;
  p.sa.attempts = steps;
  p.bsb.steps = steps;
  p.simcim.steps = steps;
  p.sia.steps = steps;
  return p;
}

using Solver = SolveResult (*)(const ProblemInstance&, const BaselineParams&, std::uint64_t,
                               const SolveOptions&);

SolveResult run_sa(const ProblemInstance& i, const BaselineParams& p, std::uint64_t s,
                   const SolveOptions& o) {
  return sa_solve(i, p, s, o);
}

const std::pair<const char*, Solver> kSolvers[] = {
    {"sa", run_sa}, {"bsb", bsb_solve}, {"simcim", simcim_solve}, {"sia", sia_solve}};

}  // namespace

TEST_CASE("parameter validation") {
  BaselineParams p;
  CHECK_NOTHROW(p.validate());
  auto q = p;
  q.bsb.dt = 1.3;
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
  q = p;
  q.sia.dt = 0.0;
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
  q = p;
  q.simcim.noise_A = -0.1;
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
  q = p;
  q.sa.beta0 = 0.0;
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
  q = p;
  q.bsb.c0 = -1.0;
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
  q = p;
  q.simcim.dt = 1.25;
  CHECK_NOTHROW(q.validate());
}

TEST_CASE("runs are reproducible from (seed, params)") {
  const auto inst = as_instance(testsupport::random_sk(40, 3));
  const auto p = small_params(300);
  for (const auto& [name, solve] : kSolvers) {
    CAPTURE(name);
    const auto a = solve(inst, p, 11, {});
    const auto b = solve(inst, p, 11, {});
    CHECK(a.spins == b.spins);
    CHECK(a.energy == b.energy);
    CHECK(a.state == b.state);
    REQUIRE(a.trace.size() == b.trace.size());
    for (std::size_t k = 0; k < a.trace.size(); ++k) {
      CHECK(a.trace[k].energy == b.trace[k].energy);
      CHECK(a.trace[k].iter == b.trace[k].iter);
    }
    std::vector<std::vector<double>> starts;
    SolveOptions o;
    o.on_iterate = [&](std::int64_t k, std::span<const double> x) {
      if (k == 1) starts.emplace_back(x.begin(), x.end());
    };
    solve(inst, p, 11, o);
    solve(inst, p, 12, o);
    REQUIRE(starts.size() == 2);
    CHECK(starts[0] != starts[1]);
  }
}

TEST_CASE("reported energy matches the reported spins; best is nonincreasing") {
  const auto J = testsupport::random_sk(30, 8);
  const auto inst = as_instance(J);
  const auto p = small_params(500);
  for (const auto& [name, solve] : kSolvers) {
    CAPTURE(name);
    const auto r = solve(inst, p, 2, {});
    CHECK(r.energy == doctest::Approx(testsupport::direct_energy(J, r.spins.as_doubles()))
                          .epsilon(1e-12));
    double min_traced = 1e300;
    for (std::size_t k = 0; k < r.trace.size(); ++k) {
      min_traced = std::min(min_traced, r.trace[k].energy);
      if (k > 0) CHECK(r.trace[k].best_energy <= r.trace[k - 1].best_energy);
    }
    CHECK(r.energy <= min_traced);
  }
}

TEST_CASE("c0 from the coupling statistics") {
  const auto J = gen_dense_pm1(2000, 4);
  const auto v = J.to_dense_values();
  long double sum = 0, sq = 0;
  const double slots = 2000.0 * 1999.0;
  for (std::size_t i = 0; i < 2000; ++i) {
    for (std::size_t j = 0; j < 2000; ++j) {
      if (i != j) sum += v[i * 2000 + j];
    }
  }
  const double mean = static_cast<double>(sum / slots);
  for (std::size_t i = 0; i < 2000; ++i) {
    for (std::size_t j = 0; j < 2000; ++j) {
      if (i != j) sq += (v[i * 2000 + j] - mean) * (v[i * 2000 + j] - mean);
    }
  }
  const double sd = std::sqrt(static_cast<double>(sq / slots));
  CHECK(default_c0(J) == doctest::Approx(1.0 / (2.0 * sd * std::sqrt(2000.0))).epsilon(1e-12));
  // 1 / (2 sqrt 2000) to 40 digits.
  CHECK(default_c0(J) == doctest::Approx(0.0111803398874989484820458683436563811772).epsilon(0.05));
  CHECK(default_c0(CouplingMatrix::zeros(5)) == 0.0);
}

TEST_CASE("bSB and SimCIM stay inside [-1, 1]") {
  const auto inst = as_instance(testsupport::random_sk(50, 5));
  auto p = small_params(400);
  p.simcim.noise_A = 2.0;  // large noise so the clamp is active
  double worst = 0.0;
  SolveOptions o;
  o.on_iterate = [&](std::int64_t, std::span<const double> x) {
    for (double v : x) worst = std::max(worst, std::abs(v));
  };
  bsb_solve(inst, p, 1, o);
  CHECK(worst <= 1.0);
  worst = 0.0;
  simcim_solve(inst, p, 1, o);
  CHECK(worst <= 1.0);
  CHECK(worst == 1.0);
}

TEST_CASE("SIA box") {
  std::vector<double> q{-3.0, 0.5, 2.0, 1.41};
  std::vector<double> m{5.0, -5.0, 1.0, -2.0};
  sia_boundary(q, m);
  CHECK(q == std::vector<double>{-std::sqrt(2.0), 0.5, std::sqrt(2.0), 1.41});
  CHECK(m == std::vector<double>{2.0, -2.0, 1.0, -2.0});

  const auto inst = as_instance(testsupport::random_sk(40, 6));
  auto p = small_params(500);
  p.sia.zeta0 = 1.0;
  double worst = 0.0;
  SolveOptions o;
  o.on_iterate = [&](std::int64_t, std::span<const double> x) {
    for (double v : x) worst = std::max(worst, std::abs(v));
  };
  sia_solve(inst, p, 3, o);
  CHECK(worst <= std::sqrt(2.0));
}

TEST_CASE("SIA with no couplings is a bounded oscillator") {
  const auto inst = as_instance(CouplingMatrix::zeros(10));
  double worst = 0.0;
  SolveOptions o;
  o.on_iterate = [&](std::int64_t, std::span<const double> x) {
    for (double v : x) worst = std::max(worst, std::abs(v));
  };
  const auto r = sia_solve(inst, small_params(2000), 4, o);
  // |p0| <= 5e-4 and a symplectic step with k dt² / m = 0.125 keeps the
  // amplitude near |p0| sqrt(1/(k m)).
  CHECK(worst < 5e-3);
  CHECK(r.energy == 0.0);
}

TEST_CASE("SA incremental energy tracks the full recomputation") {
  const auto inst = as_instance(gen_sparse_9bit(300, 5.0, 2));
  auto p = small_params(200000);
  p.sa.check_interval = 1000;
  p.sa.beta0 = 1e-4;
  SaStats stats;
  sa_solve(inst, p, 9, {}, &stats);
  CHECK(stats.energy_checks > 10);
  CHECK(stats.max_energy_drift <= 1e-6);
  CHECK(stats.accepted > 0);
}

TEST_CASE("SA finds the ground state of small instances") {
  int hits = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto J = testsupport::random_sk(12, 900 + seed);
    const double ground = testsupport::exhaustive_min(J);
    auto p = small_params(100000);
    const auto r = sa_solve(as_instance(J), p, seed, {});
    if (std::abs(r.energy - ground) <= 1e-9) ++hits;
  }
  CHECK(hits == 10);
}

TEST_CASE("two-spin antiferromagnet") {
  const auto inst = as_instance(CouplingMatrix::dense(2, {0, -1, -1, 0}));
  for (const auto& [name, solve] : kSolvers) {
    CAPTURE(name);
    const auto r = solve(inst, small_params(200), 5, {});
    CHECK(r.energy == -1.0);
    CHECK(r.spins[0] == -r.spins[1]);
  }
}

TEST_CASE("field instances") {
  const auto J = testsupport::random_sk(8, 77);
  const auto h = testsupport::random_field(8, 77);
  const ProblemInstance inst{J, ExternalField(h), "f", std::nullopt, std::nullopt};
  const double ground = testsupport::exhaustive_min(J, h);
  for (const auto& [name, solve] : kSolvers) {
    CAPTURE(name);
    const auto r = solve(inst, small_params(2000), 5, {});
    CHECK(r.spins.size() == 8);
    CHECK(r.energy == doctest::Approx(testsupport::direct_energy(J, r.spins.as_doubles(), h)));
    CHECK(r.energy >= ground - 1e-9);
  }
}

TEST_CASE("time budget") {
  const auto inst = as_instance(testsupport::random_sk(300, 1));
  auto p = small_params(100000000);
  p.time_budget_s = 0.05;
  for (const auto& [name, solve] : kSolvers) {
    CAPTURE(name);
    const auto r = solve(inst, p, 1, {});
    CHECK(r.elapsed_s < 1.0);
    CHECK(r.iterations < 100000000);
  }
}
