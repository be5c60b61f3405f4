#include "doctest.h"
#include "oracles.hpp"

#include "ergolin/clt.hpp"
#include "ergolin/error.hpp"

#include <cmath>
#include <cstdlib>
#include <random>

using namespace ergolin;

namespace {
Real256 rr(const char* text) { return parse_rational_real(text); }
}  // namespace

TEST_SUITE("clt") {

TEST_CASE("KS statistic") {
  CHECK(ks_normal({0.0}) == doctest::Approx(0.5));
  CHECK(ks_normal({-1e9, 1e9}) == doctest::Approx(0.5));
  SUBCASE("exact formula dominates a dense grid sup and is close to it") {
    std::mt19937_64 gen(4);
    std::normal_distribution<double> nd(0.3, 1.2);
    std::vector<double> v(60);
    for (auto& x : v) x = nd(gen);
    const double exact = ks_normal(v);
    double grid = 0;
    for (int j = 0; j <= 400000; ++j) {
      double x = -8.0 + 16.0 * j / 400000.0, cnt = 0;
      for (double y : v) cnt += y <= x;
      grid = std::max(grid, std::abs(cnt / v.size() - oracle::normal_cdf(x)));
    }
    CHECK(exact >= grid - 1e-12);
    CHECK(exact - grid < 1e-4);
  }
  SUBCASE("self-calibration: normal samples stay under the experiment threshold") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) CHECK(ks_reference(20000, seed) < 0.02);
  }
}

TEST_CASE("empirical distribution") {
  SUBCASE("doubling, b = 1/2: i.i.d. signs") {
    CltExperiment e;
    e.f = favourite_f(rr("1/2"));
    e.n = 4096;
    e.samples = 20000;
    e.seed = 42;
    auto rep = empirical_distribution(e);
    CHECK(rep.variance >= 0.95);
    CHECK(rep.variance <= 1.05);
    REQUIRE(rep.ks);
    CHECK(*rep.ks <= 0.02);
    CHECK(std::abs(rep.mean) < 0.05);
    std::uint64_t total = rep.histogram.below + rep.histogram.above;
    for (auto c : rep.histogram.counts) total += c;
    CHECK(total == 20000);
  }
  SUBCASE("n = 1 puts mass b on 1 and 1-b on -b/(1-b)") {
    CltExperiment e;
    e.f = favourite_f(rr("1/3"));
    e.n = 1;
    e.samples = 9000;
    e.seed = 7;
    auto rep = empirical_distribution(e);
    std::size_t ones = 0;
    for (double v : rep.values) {
      REQUIRE((v == 1.0 || v == -0.5));
      ones += v == 1.0;
    }
    const double sd = std::sqrt((1.0 / 3) * (2.0 / 3) / 9000);
    CHECK(std::abs(ones / 9000.0 - 1.0 / 3) < 4 * sd);
  }
  SUBCASE("golden rotation, b = 1/2: bounded sums, no CLT at sqrt(n)") {
    CltExperiment e;
    e.transformation = Transformation::rotation(golden_alpha());
    e.f = favourite_f(rr("1/2"));
    e.n = 10000;
    e.samples = 1000;
    e.seed = 1;
    auto rep = empirical_distribution(e);
    CHECK(rep.variance < 0.01);
  }
  SUBCASE("few samples: KS not reported; zero function is degenerate") {
    CltExperiment e;
    e.f = favourite_f(rr("1/2"));
    e.n = 16;
    e.samples = 100;
    CHECK_FALSE(empirical_distribution(e).ks);
    e.f = StepFunction();
    e.normalization = Normalization::L2Norm;
    CHECK(empirical_distribution(e).degenerate);
  }
  SUBCASE("deterministic under the seed and independent of the thread count") {
    CltExperiment e;
    e.f = favourite_f(rr("1/3"));
    e.n = 300;
    e.samples = 257;
    e.seed = 99;
    setenv("ERGOLIN_THREADS", "1", 1);
    auto a = empirical_distribution(e);
    setenv("ERGOLIN_THREADS", "5", 1);
    auto b = empirical_distribution(e);
    unsetenv("ERGOLIN_THREADS");
    CHECK(a.values == b.values);
    e.seed = 100;
    CHECK(empirical_distribution(e).values != a.values);
  }
}

TEST_CASE("Kac variance from exact lag correlations") {
  auto half = favourite_f(rr("1/2"));
  auto third = favourite_f(rr("1/3"));
  CHECK(kac_sigma2(half, 24) == 1.0);
  for (unsigned k = 1; k <= 24; ++k) REQUIRE(doubling_correlation(half, k) == 0.0);
  CHECK(kac_sigma2(StepFunction(), 16) == 0.0);
  CHECK(kac_sigma2(third, 16) > 0.0);
  CHECK_THROWS_AS(kac_sigma2(third, 25), Error);
  CHECK(doubling_correlation(third, 0) == doctest::Approx(third.l2_norm_squared()));

  SUBCASE("correlations match midpoint quadrature") {
    StepFunction g({rr("0"), rr("0.3"), rr("5/7")}, {1.0, -2.0, 0.75});
    auto gv = [&](double x) { return x < 0.3 ? 1.0 : (x < 5.0 / 7 ? -2.0 : 0.75); };
    const int M = 1 << 20;
    for (unsigned k : {1u, 2u, 5u, 8u}) {
      double acc = 0;
      for (int j = 0; j < M; ++j) {
        double x = (j + 0.5) / M;
        double y = std::ldexp(x, k);
        y -= std::floor(y);
        acc += gv(x) * gv(y);
      }
      CHECK(std::abs(doubling_correlation(g, k) - acc / M) < 2e-5);
    }
  }
  SUBCASE("sigma^2 is the growth rate of Var S_n between 2^10 and 2^12") {
    for (const char* b : {"1/3", "1/2"}) {
      auto f = favourite_f(rr(b));
      auto var_at = [&](std::uint64_t n) {
        CltExperiment e;
        e.f = f;
        e.normalization = Normalization::Scale;
        e.scale = 1.0;
        e.n = n;
        e.samples = 20000;
        e.seed = 5 + n;
        return empirical_distribution(e).variance;
      };
      const double slope = (var_at(4096) - var_at(1024)) / 3072.0;
      CHECK(slope == doctest::Approx(kac_sigma2(f, 24)).epsilon(0.05));
      CHECK(doubling_l2_squared(f, 4096) / 4096 == doctest::Approx(kac_sigma2(f, 24)).epsilon(0.01));
    }
  }
}

TEST_CASE("range growth") {
  auto t = Transformation::rotation(golden_alpha());
  const std::vector<std::uint64_t> cps = {1000, 10000, 100000, 1000000};
  Omega w = omega_point(TorusPoint::from_double(0.3));
  Real256 b3;
  b3.value = golden_alpha().value * Fixed256(3);
  auto bounded = range_growth_probe(t, favourite_f(b3), w, cps);
  CHECK(bounded.plateau);
  auto growing = range_growth_probe(t, favourite_f(rr("1/2")), w, cps);
  CHECK_FALSE(growing.plateau);
  CHECK(growing.runmax.back() > growing.runmax.front());
  CHECK(growing.runmin.back() < growing.runmin.front());
  auto d = Transformation::doubling();
  auto walk = range_growth_probe(d, favourite_f(rr("1/2")), random_omega(d, 1, 1000000), cps);
  CHECK(walk.runmax.back() - walk.runmin.back() >= 300.0);
  CHECK_FALSE(walk.plateau);
  CHECK_THROWS_AS(range_growth_probe(t, favourite_f(rr("1/2")), w, {10, 5}), Error);
  CHECK_THROWS_AS(range_growth_probe(d, favourite_f(rr("1/2")), random_omega(d, 1, 100), {1000}), Error);
}

TEST_CASE("W-set density") {
  auto t = Transformation::rotation(golden_alpha());
  auto cf = cf_expand(golden_alpha(), 100);
  auto rep = w_set_report(t, favourite_f(rr("1/3")), cf, 10000, {0.0, 0.05, 1e6});
  CHECK(rep.density[0] == 1.0);
  CHECK(rep.density[1] >= 0.9);
  CHECK(rep.density[2] == 0.0);
  auto cv = convergents(cf);
  for (std::size_t k = 2; k < 19; ++k) CHECK(rep.m[cv.q[k].convert_to<std::size_t>() - 1] == k);
  CHECK_THROWS_AS(w_set_report(Transformation::doubling(), favourite_f(rr("1/3")), cf, 10, {0.1}), Error);
}

TEST_CASE("L_n scale experiment") {
  auto golden = cf_expand(golden_alpha(), 100);
  auto g = ln_scale_experiment(Transformation::rotation(golden_alpha()), favourite_f(rr("1/3")), golden, 1.5, 4, 100, 1);
  CHECK_FALSE(g.selection.hypothesis_met);
  CHECK_FALSE(g.distribution);

  auto cf = cf_expand(powers_of_two_alpha(), 30);
  auto cv = convergents(cf);
  auto rep = ln_scale_experiment(Transformation::rotation(powers_of_two_alpha()), favourite_f(rr("1/3")), cf, 1.5, 6, 1000, 3, 200);
  REQUIRE(rep.selection.hypothesis_met);
  REQUIRE(rep.distribution);
  CHECK(rep.L == 57156);
  CHECK(rep.l2 > 0);
  CHECK(rep.distribution->ks);
  CHECK(rep.distribution->variance == doctest::Approx(1.0).epsilon(0.15));
  REQUIRE(rep.gamma_lower_bound);
  const double lb = 0.75 / ((2.0 / 3) * (2.0 / 3) * std::numbers::pi * std::numbers::pi);
  CHECK(*rep.gamma_lower_bound == doctest::Approx(lb));
  for (std::size_t k = 0; k < 6; ++k)
    if (cv.q[rep.selection.t[k]] % 3 != 0) CHECK(rep.gamma_sq[k] >= lb * (1 - 1e-9));
}

}  // TEST_SUITE
