#include "doctest.h"
#include "oracles.hpp"

#include "ergolin/birkhoff.hpp"
#include "ergolin/error.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace ergolin;
namespace mp = boost::multiprecision;
using std::numbers::pi;

namespace {
Real256 rr(const char* text) { return parse_rational_real(text); }

Real256 random_unit(std::mt19937_64& gen) {
  Real256 b;
  for (int w = 0; w < 4; ++w) b.value = (b.value << 64) | Fixed256(gen());
  return b;
}

// c_r of favourite_f(b) straight from the defining integral
std::complex<double> favourite_coeff(double b, double r) {
  const std::complex<double> i(0, 1);
  return (1.0 / (1.0 - b)) * (1.0 - std::exp(-2.0 * pi * i * r * b)) / (2.0 * pi * i * r);
}

Transformation golden_rotation() { return Transformation::rotation(golden_alpha(), "golden"); }
}  // namespace

TEST_SUITE("birkhoff") {

TEST_CASE("favourite function") {
  auto half = favourite_f(rr("1/2"));
  CHECK(half.values() == std::vector<double>{1.0, -1.0});
  auto third = favourite_f(rr("1/3"));
  REQUIRE(third.exact_values());
  CHECK((*third.exact_values())[0] == 1);
  CHECK((*third.exact_values())[1] == Rational(-1, 2));
  CHECK(third.eval_exact(Rational(1, 3)) == Rational(-1, 2));
  CHECK(third.eval_exact(Rational(0)) == 1);
  CHECK(std::abs(third.integral()) < 1e-15);
  // variation from the jump sizes: |1-(-1)| at 0 and |(-1)-1| at 1/2
  double v = 0;
  for (std::size_t i = 0; i < half.values().size(); ++i) {
    double left = half.values()[(i + half.values().size() - 1) % half.values().size()];
    v += std::abs(half.values()[i] - left);
  }
  CHECK(v == 4.0);
  CHECK(half.total_variation() == 4.0);
  CHECK_THROWS_AS(favourite_f(Real256{}), Error);
}

TEST_CASE("fourier coefficients") {
  auto f = favourite_f(rr("1/2"));
  auto oracle_c1 = oracle::fourier_trapezoid([](double t) { return t < 0.5 ? 1.0 : -1.0; }, 1, 1 << 16);
  auto c1 = f.fourier(1);
  CHECK(std::abs(c1 - oracle_c1) < 1e-8);
  CHECK(std::abs(c1 - std::complex<double>(0, -2 / pi)) < 1e-15);
  CHECK(std::abs(f.fourier(2)) < 1e-15);

  SUBCASE("general pieces match quadrature") {
    StepFunction g({rr("0"), rr("1/5"), rr("0.55")}, {2.0, -1.0, 0.5});
    auto gf = [](double t) { return t < 0.2 ? 2.0 : (t < 0.55 ? -1.0 : 0.5); };
    for (long long r : {-7LL, -1LL, 1LL, 3LL, 10LL}) {
      CHECK(std::abs(g.fourier(r) - oracle::fourier_trapezoid(gf, r, 1 << 18)) < 1e-5);
    }
  }
  SUBCASE("closed form, piecewise integral and |gamma_r| bound agree (property)") {
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 25; ++trial) {
      Real256 b = random_unit(gen);
      if (b.to_double() < 1e-3 || b.to_double() > 1 - 1e-3) continue;
      auto fb = favourite_f(b);
      auto data = fourier_coeffs(fb, 500);
      CHECK(data.gamma_bound == doctest::Approx(fb.total_variation() / (2 * pi)));
      for (std::int64_t r = 1; r <= 500; ++r) {
        auto c = data.c[r - 1];
        REQUIRE(std::abs(c - favourite_coeff(b.to_double(), static_cast<double>(r))) < 1e-9);
        REQUIRE(std::abs(c - favourite_fourier(b, BigInt(r))) < 1e-12);
        REQUIRE(std::abs(data.gamma[r - 1]) <= data.gamma_bound * (1 + 1e-12));
      }
      BigInt huge = BigInt(1) << 90;
      CHECK(std::abs(fb.fourier(huge)) * std::ldexp(1.0, 90) <= data.gamma_bound * (1 + 1e-9));
    }
  }
}

TEST_CASE("birkhoff sums basics") {
  auto f = favourite_f(rr("1/2"));
  auto t = golden_rotation();
  SUBCASE("N = 1") {
    auto s = birkhoff_sums(t, f, omega_point(TorusPoint::from_double(0.3)), 1);
    CHECK(s.sum(1) == 1.0);
    CHECK(s.sum(0) == 0.0);
    auto s2 = birkhoff_sums(t, f, omega_point(TorusPoint::from_double(0.7)), 1);
    CHECK(s2.sum(1) == -1.0);
  }
  SUBCASE("exact period sum for alpha = 1/5") {
    auto rot = Transformation::rotation_rational(1, 5);
    auto g = favourite_f(rr("2/5"));
    auto s = birkhoff_sums(rot, g, omega_point(TorusPoint::from_rational(Rational(1, 20))), 5);
    REQUIRE(s.sum_exact(5));
    CHECK(*s.sum_exact(5) == 0);
    // direct evaluation: 0.05, 0.25 in [0,2/5); 0.45, 0.65, 0.85 outside
    CHECK(*s.sum_exact(5) == Rational(2) - 3 * Rational(2, 3));
  }
  SUBCASE("prefix property and counters (property)") {
    std::mt19937_64 gen(3);
    for (int trial = 0; trial < 5; ++trial) {
      Real256 b = random_unit(gen);
      auto g = favourite_f(b);
      Omega w = omega_point(TorusPoint(static_cast<u128>(gen()) << 64));
      const std::uint64_t N = 2000;
      auto s = birkhoff_sums(t, g, w, N);
      auto pts = orbit(t, w, N);
      double runmax = -1e300, runmin = 1e300;
      for (std::uint64_t n = 0; n < N; ++n) {
        REQUIRE(s.a1(n) + s.a2(n) == n);
        REQUIRE(s.sum(n + 1) - s.sum(n) == doctest::Approx(g(pts[n])).epsilon(1e-9));
        REQUIRE(s.accumulated(n + 1) == doctest::Approx(s.sum(n + 1)).epsilon(1e-9).scale(1));
        runmax = std::max(runmax, s.sum(n + 1));
        runmin = std::min(runmin, s.sum(n + 1));
        REQUIRE(s.runmax(n + 1) == doctest::Approx(runmax).scale(1));
        REQUIRE(s.runmin(n + 1) == doctest::Approx(runmin).scale(1));
      }
      CHECK(birkhoff_sum(t, g, w, N) == doctest::Approx(s.sum(N)).scale(1));
    }
  }
  SUBCASE("sign changes for b = 1/2") {
    auto s = birkhoff_sums(t, f, omega_point(TorusPoint::from_double(0.3)), 100000);
    CHECK(s.runmax(100000) > 0);
    CHECK(s.runmin(100000) < 0);
  }
}

TEST_CASE("Denjoy-Koksma bound at convergent denominators") {
  auto t = golden_rotation();
  auto cv = convergents(cf_expand(golden_alpha(), 40));
  std::mt19937_64 gen(17);
  for (const char* bt : {"1/2", "1/3", "0.123"}) {
    auto f = favourite_f(rr(bt));
    for (int trial = 0; trial < 6; ++trial) {
      auto s = birkhoff_sums(t, f, omega_point(TorusPoint((static_cast<u128>(gen()) << 64) | gen())), 1000000);
      auto rep = denjoy_koksma(s, f, cv);
      CHECK(rep.holds);
      CHECK(rep.q.size() >= 20);
      for (double v : rep.sums) REQUIRE(std::abs(v) <= f.total_variation() + 1e-9);
    }
  }
}

TEST_CASE("Oren coset analysis") {
  auto t = golden_rotation();
  SUBCASE("b = 3 alpha is bounded") {
    Real256 b;
    b.value = golden_alpha().value * Fixed256(3);
    auto rep = oren_analysis(favourite_f(b), t);
    CHECK(rep.verdict == OrenVerdict::BoundedPredicted);
    REQUIRE(rep.cosets.size() == 1);
    CHECK(std::abs(rep.cosets[0].delta_sum) < 1e-12);
  }
  SUBCASE("b = 1/2 is unbounded with jumps +-1/(1-b)") {
    auto rep = oren_analysis(favourite_f(rr("1/2")), t);
    CHECK(rep.verdict == OrenVerdict::UnboundedPredicted);
    REQUIRE(rep.jump_sizes.size() == 2);
    CHECK(rep.jump_points[0] == 0.0);
    CHECK(rep.jump_sizes[0] == doctest::Approx(2.0));
    CHECK(rep.jump_sizes[1] == doctest::Approx(-2.0));
    REQUIRE(rep.cosets.size() == 2);
    CHECK(rep.cosets[0].delta_sum == doctest::Approx(2.0));
  }
  SUBCASE("a shift beyond the search bound is not found") {
    Real256 b;
    b.value = golden_alpha().value * Fixed256(50);
    CHECK(oren_analysis(favourite_f(b), t, 40).verdict != OrenVerdict::BoundedPredicted);
    CHECK(oren_analysis(favourite_f(b), t, 60).verdict == OrenVerdict::BoundedPredicted);
  }
}

TEST_CASE("variance by Parseval") {
  auto t = golden_rotation();
  auto f = favourite_f(rr("1/2"));
  CHECK(variance_exact(t, f, 0, 1000).value == 0.0);
  auto one = variance_exact(t, f, 1, 100000);
  CHECK(std::abs(one.value - 1.0) < 1e-5);
  CHECK(std::abs(one.value - 1.0) <= 2 * one.tail_estimate + 1e-12);

  SUBCASE("bounded by V(f)^2 at convergent denominators") {
    auto cv = convergents(cf_expand(golden_alpha(), 30));
    for (std::size_t k = 1; k <= 20; ++k) {
      auto v = variance_exact(t, f, cv.q[k].convert_to<std::uint64_t>(), 100000);
      CHECK(std::sqrt(v.value) <= 4.0);
    }
  }
  SUBCASE("agrees with grid quadrature and the autocorrelation oracle") {
    const int grid = 1 << 14;
    const double a = golden_alpha().to_double();
    auto curve = variance_curve(t, f, 1000, 100000);
    for (long long n : {1LL, 7LL, 55LL, 200LL, 1000LL}) {
      auto v = variance_exact(t, f, n, 100000);
      double acc = 0;
      for (int j = 0; j < grid; ++j) {
        double x = (j + 0.5) / grid, s = 0;
        for (long long i = 0; i < n; ++i) {
          s += x < 0.5 ? 1.0 : -1.0;
          x += a;
          if (x >= 1) x -= 1;
        }
        acc += s * s;
      }
      const double mc = acc / grid;
      const double ac = oracle::birkhoff_l2_squared({0.0, 0.5}, {1.0, -1.0}, oracle::golden(), n);
      CHECK(v.value == doctest::Approx(mc).epsilon(0.01));
      CHECK(v.value == doctest::Approx(ac).epsilon(0.01));
      CHECK(curve[n - 1] == doctest::Approx(v.value).epsilon(1e-9));
    }
  }
  SUBCASE("exact resonance for rational alpha") {
    auto rot = Transformation::rotation_rational(1, 5);
    auto g = favourite_f(rr("2/5"));
    // S_5 vanishes identically, so the variance is zero at n = 5 and periodic in n
    CHECK(variance_exact(rot, g, 5, 20000).value < 1e-3);
    CHECK(variance_exact(rot, g, 7, 20000).value ==
          doctest::Approx(oracle::birkhoff_l2_squared({0.0, 0.4}, {1.0, -2.0 / 3.0}, oracle::HP(1) / 5, 2))
              .epsilon(0.01));
  }
}

TEST_CASE("rational coboundary") {
  SUBCASE("alpha = 1/5, b = 2/5 solves exactly and telescopes") {
    RationalAngle ang{1, 5};
    auto f = favourite_f(rr("2/5"));
    auto res = rational_coboundary(ang, f);
    REQUIRE(res.solved);
    REQUIRE(res.h);
    const Rational alpha(1, 5);
    for (int j = 0; j < 200; ++j) {
      Rational x(j, 200);
      REQUIRE(res.h->eval_exact(x) - res.h->eval_exact(frac(x + alpha)) == f.eval_exact(x));
      Rational s = 0;
      for (int n = 1; n <= 15; ++n) {
        s += f.eval_exact(frac(x + (n - 1) * alpha));
        REQUIRE(s == res.h->eval_exact(x) - res.h->eval_exact(frac(x + n * alpha)));
      }
    }
  }
  SUBCASE("alpha = 1/5, b = 1/2 has no solution") {
    auto f = favourite_f(rr("1/2"));
    auto res = rational_coboundary({1, 5}, f);
    CHECK_FALSE(res.solved);
    Rational direct = 0;
    for (int j = 0; j < 5; ++j) direct += f.eval_exact(frac(res.witness_x + Rational(j, 5)));
    CHECK(direct == res.witness_sum);
    CHECK(direct != 0);
  }
  SUBCASE("q = 1") {
    CHECK_FALSE(rational_coboundary({0, 1}, favourite_f(rr("1/2"))).solved);
    StepFunction zero({rr("0")}, {0.0}, std::vector<Rational>{Rational(0)});
    CHECK(rational_coboundary({0, 1}, zero).solved);
  }
}

TEST_CASE("doubling-map obstruction") {
  auto rep = doubling_coboundary_obstruction(rr("1/2"), 3, 10);
  const double bound = -2.0 / (3.0 * pi);
  CHECK(rep.bound == doctest::Approx(bound));
  CHECK(rep.below_bound);
  CHECK(rep.no_l2_solution);
  REQUIRE(rep.c_g.size() == 11);
  CHECK(rep.c_g[0] == rep.c_f[0]);
  std::complex<double> partial = 0;
  for (int j = 0; j <= 10; ++j) {
    auto oracle_c = favourite_coeff(0.5, 3.0 * std::ldexp(1.0, j));
    CHECK(std::abs(rep.c_f[j] - oracle_c) < 1e-12);
    partial += oracle_c;
    CHECK(std::abs(rep.c_g[j] - partial) < 1e-12);
    CHECK(rep.c_g[j].imag() <= bound + 1e-12);
  }
  CHECK(std::abs(rep.c_g.back()) >= 2.0 / (3.0 * pi) - 1e-12);
  CHECK_THROWS_AS(doubling_coboundary_obstruction(rr("1/2"), 4, 10), Error);
  CHECK_THROWS_AS(doubling_coboundary_obstruction(rr("1/3"), 3, 10), Error);
}

}  // TEST_SUITE
