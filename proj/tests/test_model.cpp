#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "isingdc/generate.hpp"
#include "isingdc/io.hpp"
#include "isingdc/model.hpp"
#include "test_support.hpp"

using namespace isingdc;
using testsupport::direct_energy;
using testsupport::random_sk;
using testsupport::spins_of;

namespace {

CouplingMatrix antiferro2() { return CouplingMatrix::dense(2, {0, -1, -1, 0}, ValueKind::integer); }

SpinVector sv(std::vector<std::int8_t> v) { return SpinVector(std::move(v)); }

SpinVector sv_from(const std::vector<double>& x) { return SpinVector::sign_of(x); }

}  // namespace

TEST_CASE("coupling invariants are enforced on construction") {
  CHECK_THROWS_AS(CouplingMatrix::dense(2, {0, 1, 2, 0}), std::invalid_argument);
  CHECK_THROWS_AS(CouplingMatrix::dense(2, {1, 1, 1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(CouplingMatrix::dense(2, {0, 1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(CouplingMatrix::dense(2, {0, NAN, NAN, 0}), std::invalid_argument);

  CsrData bad;
  bad.n = 2;
  bad.row_offsets = {0, 1, 1};
  bad.column_indices = {1};
  bad.values = {3.0};
  CHECK_THROWS_AS(CouplingMatrix::csr(bad), std::invalid_argument);  // no mirror

  CsrData diag;
  diag.n = 2;
  diag.row_offsets = {0, 1, 1};
  diag.column_indices = {0};
  diag.values = {1.0};
  CHECK_THROWS_AS(CouplingMatrix::csr(diag), std::invalid_argument);

  CsrData unsorted;
  unsorted.n = 3;
  unsorted.row_offsets = {0, 2, 3, 4};
  unsorted.column_indices = {2, 1, 0, 0};
  unsorted.values = {1, 1, 1, 1};
  CHECK_THROWS_AS(CouplingMatrix::csr(unsorted), std::invalid_argument);
}

TEST_CASE("spin vectors hold only -1 and +1") {
  CHECK_THROWS_AS(sv({1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(sv({2, -1}), std::invalid_argument);
  const auto s = SpinVector::sign_of(std::vector<double>{0.0, -0.3, 2.0});
  CHECK(s[0] == 1);
  CHECK(s[1] == -1);
  CHECK(s[2] == 1);
  CHECK(sv({-1, 1}) < sv({1, -1}));
}

TEST_CASE("energy of the two-spin antiferromagnet") {
  const auto J = antiferro2();
  CHECK(energy(J, sv({1, -1})) == doctest::Approx(-1.0));
  CHECK(energy(J, sv({-1, 1})) == doctest::Approx(-1.0));
  CHECK(energy(J, sv({1, 1})) == doctest::Approx(1.0));
  CHECK(energy(J, sv({-1, -1})) == doctest::Approx(1.0));
  CHECK_THROWS_AS(energy(J, sv({1, 1, 1})), std::invalid_argument);
}

TEST_CASE("zero couplings give zero energy") {
  const auto J = CouplingMatrix::zeros(5);
  for (std::uint64_t m = 0; m < 32; ++m) CHECK(energy(J, sv_from(spins_of(m, 5))) == 0.0);
}

TEST_CASE("4-spin minimum matches exhaustive enumeration") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto J = random_sk(4, seed);
    double best = 1e300;
    for (std::uint64_t m = 0; m < 16; ++m) best = std::min(best, energy(J, sv_from(spins_of(m, 4))));
    CHECK(best == doctest::Approx(testsupport::exhaustive_min(J)).epsilon(1e-12));
  }
}

TEST_CASE("energy with field") {
  const auto J0 = CouplingMatrix::zeros(6);
  const ExternalField ones(std::vector<double>(6, 1.0));
  CHECK(energy_with_field(J0, ones, SpinVector::filled(6, 1)) == doctest::Approx(-6.0));

  const ExternalField zero(std::vector<double>(2, 0.0));
  CHECK(energy_with_field(antiferro2(), zero, sv({1, -1})) == doctest::Approx(-1.0));

  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto J = random_sk(3, seed);
    const auto h = testsupport::random_field(3, seed);
    const ExternalField f(h);
    double best = 1e300;
    for (std::uint64_t m = 0; m < 8; ++m) {
      const auto s = spins_of(m, 3);
      const double e = energy_with_field(J, f, sv_from(s));
      CHECK(e == doctest::Approx(direct_energy(J, s, h)).epsilon(1e-12));
      best = std::min(best, e);
    }
    CHECK(best == doctest::Approx(testsupport::exhaustive_min(J, h)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(ExternalField(std::vector<double>{1.0, INFINITY}), std::invalid_argument);
}

TEST_CASE("spin-flip symmetry of the homogeneous energy") {
  const auto J = random_sk(9, 3);
  for (std::uint64_t m = 0; m < 512; m += 7) {
    const auto s = sv_from(spins_of(m, 9));
    CHECK(energy(J, s) == doctest::Approx(energy(J, s.negated())).epsilon(1e-12));
  }
}

TEST_CASE("homogenize borders J with h") {
  const auto J = random_sk(4, 11);
  const auto h = testsupport::random_field(4, 11);
  const auto Jh = homogenize(J, ExternalField(h));
  REQUIRE(Jh.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(Jh.entry(i, i) == 0.0);
    for (std::size_t j = 0; j < 5; ++j) {
      CHECK(Jh.entry(i, j) == Jh.entry(j, i));
      if (i < 4 && j < 4) CHECK(Jh.entry(i, j) == J.entry(i, j));
    }
    if (i < 4) CHECK(Jh.entry(i, 4) == h[i]);
  }
  CHECK_THROWS_AS(homogenize(J, ExternalField(std::vector<double>(3, 0.0))),
                  std::invalid_argument);
}

TEST_CASE("homogenized energy equals field energy of t*s") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const std::size_t n = 5;
    const auto J = random_sk(n, seed);
    const auto h = testsupport::random_field(n, seed);
    const auto Jh = homogenize(J, ExternalField(h));
    for (std::uint64_t m = 0; m < (1U << (n + 1)); ++m) {
      const auto sigma = spins_of(m, n + 1);
      const double t = sigma[n];
      std::vector<double> ts(sigma.begin(), sigma.begin() + n);
      for (auto& v : ts) v *= t;
      CHECK(energy(Jh, sv_from(sigma)) == doctest::Approx(direct_energy(J, ts, h)).epsilon(1e-12));
      CHECK(energy_with_field(J, ExternalField(h), dehomogenize(sv_from(sigma))) ==
            doctest::Approx(energy(Jh, sv_from(sigma))).epsilon(1e-12));
    }
  }
}

TEST_CASE("zero field: bordered model has the same ground energy") {
  const auto J = random_sk(6, 21);
  const auto Jh = homogenize(J, ExternalField(std::vector<double>(6, 0.0)));
  CHECK(testsupport::exhaustive_min(Jh) == doctest::Approx(testsupport::exhaustive_min(J)));
}

TEST_CASE("homogenized ground state maps to a field ground state") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const std::size_t n = 3 + seed % 5;
    const auto J = random_sk(n, seed * 7);
    const auto h = testsupport::random_field(n, seed * 7);
    const auto Jh = homogenize(J, ExternalField(h));
    double best = 1e300;
    std::vector<double> arg;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << (n + 1)); ++m) {
      const auto s = spins_of(m, n + 1);
      const double e = direct_energy(Jh, s);
      if (e < best) {
        best = e;
        arg = s;
      }
    }
    const auto s = dehomogenize(sv_from(arg));
    CHECK(energy_with_field(J, ExternalField(h), s) ==
          doctest::Approx(testsupport::exhaustive_min(J, h)).epsilon(1e-12));
  }
}

TEST_CASE("dehomogenize") {
  CHECK(dehomogenize(SpinVector::filled(4, 1)) == SpinVector::filled(3, 1));
  CHECK(dehomogenize(sv({1, -1, 1, -1})) == sv({-1, 1, -1}));
  CHECK_THROWS_AS(dehomogenize(sv({1})), std::invalid_argument);
}

TEST_CASE("storage forms agree on energies") {
  const std::size_t n = 40;
  const auto P = gen_procedural_sin(n, 100);
  const auto D = CouplingMatrix::dense(n, P.to_dense_values());
  const auto C = CouplingMatrix::csr(to_csr(D));
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::vector<std::int8_t> s(n);
    std::uint64_t z = seed * 0x9E3779B97F4A7C15ULL + 1;
    for (auto& v : s) {
      z ^= z << 13;
      z ^= z >> 7;
      z ^= z << 17;
      v = (z & 1U) ? 1 : -1;
    }
    const SpinVector sp(s);
    const double ed = energy(D, sp);
    CHECK(energy(C, sp) == doctest::Approx(ed).epsilon(1e-10));
    CHECK(energy(P, sp) == doctest::Approx(ed).epsilon(1e-10));
  }
}

TEST_CASE("MAX-CUT mapping") {
  const auto W = CouplingMatrix::dense(3, {0, 1, 1, 1, 0, 1, 1, 1, 0});
  const auto J = maxcut_to_ising(W);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) CHECK(J.entry(i, j) == (i == j ? 0.0 : -0.5));
  }
  CHECK(cut_value(W, SpinVector::filled(3, 1)) == 0.0);
  CHECK(cut_value(W, sv({1, 1, -1})) == 2.0);
  CHECK(testsupport::exhaustive_max_cut(W) == 2.0);

  // The Ising minimizer of J attains the maximum cut.
  double best = 1e300;
  SpinVector arg;
  for (std::uint64_t m = 0; m < 8; ++m) {
    const auto s = sv_from(spins_of(m, 3));
    const double e = energy(J, s);
    if (e < best) {
      best = e;
      arg = s;
    }
  }
  CHECK(cut_value(W, arg) == 2.0);
  CHECK_THROWS_AS(maxcut_to_ising(gen_procedural_sin(4)), std::invalid_argument);
}

TEST_CASE("cut identity on small random graphs") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const std::size_t n = 2 + seed % 3;
    std::vector<double> w(n * n, 0.0);
    std::uint64_t z = seed;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        z = z * 6364136223846793005ULL + 1442695040888963407ULL;
        const double v = static_cast<double>((z >> 33) % 5) - 2.0;
        w[i * n + j] = w[j * n + i] = v;
      }
    }
    const auto W = CouplingMatrix::dense(n, w);
    const auto J = maxcut_to_ising(W);
    double total = 0.0;
    for (double v : w) total += v;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
      const auto s = spins_of(m, n);
      double quarter = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) quarter += 0.25 * (1.0 - s[i] * s[j]) * w[i * n + j];
      }
      CHECK(cut_value(W, sv_from(s)) == doctest::Approx(quarter));
      CHECK(cut_value(W, sv_from(s)) == doctest::Approx(total / 4.0 - energy(J, sv_from(s))));
    }
  }
}

TEST_CASE("max-cut argmax equals Ising argmin for n up to 10") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const std::size_t n = 7 + seed;
    std::vector<double> w(n * n, 0.0);
    std::uint64_t z = seed * 99;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        z = z * 6364136223846793005ULL + 1442695040888963407ULL;
        w[i * n + j] = w[j * n + i] = static_cast<double>((z >> 40) % 3);
      }
    }
    const auto W = CouplingMatrix::dense(n, w);
    const auto J = maxcut_to_ising(W);
    double best = 1e300;
    SpinVector arg;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
      const auto s = sv_from(spins_of(m, n));
      const double e = energy(J, s);
      if (e < best) {
        best = e;
        arg = s;
      }
    }
    CHECK(cut_value(W, arg) == testsupport::exhaustive_max_cut(W));
  }
}

TEST_CASE("instance validation and shifted norm") {
  ProblemInstance inst{antiferro2(), ExternalField(std::vector<double>(3, 0.0)), "x",
                       std::nullopt, std::nullopt};
  CHECK_THROWS_AS(inst.validate(), std::invalid_argument);
  CHECK(shifted_inf_norm(antiferro2(), 1.0) == 2.0);
}

TEST_CASE("large field instances use the bordered wrapper for formulas") {
  const auto P = gen_procedural_sin(50);
  const auto h = testsupport::random_field(50, 5);
  const auto Jh = homogenize(P, ExternalField(h));
  CHECK(Jh.storage() == StorageKind::bordered);
  CHECK(Jh.entry(3, 50) == h[3]);
  CHECK(Jh.entry(50, 50) == 0.0);
  CHECK(Jh.entry(2, 3) == P.entry(2, 3));
}
