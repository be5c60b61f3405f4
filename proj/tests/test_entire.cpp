#include "doctest.h"

#include "ergolin/entire.hpp"
#include "ergolin/error.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <random>

using namespace ergolin;

namespace {

using QPoly = std::vector<Rational>;

QPoly q_derivative(const QPoly& f) {
  QPoly g(f.size() > 1 ? f.size() - 1 : 1, Rational(0));
  for (std::size_t j = 1; j < f.size(); ++j) g[j - 1] = f[j] * static_cast<long>(j);
  return g;
}

// f(lambda z + b) by expanding every power
QPoly q_affine(const QPoly& f, const Rational& lambda, const Rational& b) {
  QPoly g(f.size(), Rational(0));
  for (std::size_t j = 0; j < f.size(); ++j) {
    if (f[j] == 0) continue;
    BigInt binom = 1;
    for (std::size_t i = 0; i <= j; ++i) {
      Rational term = f[j] * Rational(binom);
      for (std::size_t e = 0; e < i; ++e) term *= lambda;
      for (std::size_t e = 0; e < j - i; ++e) term *= b;
      g[i] += term;
      binom = binom * (j - i) / (i + 1);
    }
  }
  return g;
}

QPoly q_product(const std::vector<std::uint8_t>& pattern, QPoly f, const Rational& lambda, const Rational& b) {
  for (auto s : pattern) f = s ? q_affine(f, lambda, b) : q_derivative(f);
  return f;
}

Rational q_pow(const Rational& x, std::uint64_t e) {
  Rational r = 1;
  for (std::uint64_t i = 0; i < e; ++i) r *= x;
  return r;
}

std::vector<std::uint8_t> random_pattern(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<std::uint8_t> p(n);
  for (auto& s : p) s = gen() & 1;
  return p;
}

long double rel_to(const cld& a, const Rational& q) {
  long double x = static_cast<long double>(q);
  return std::abs(a - cld(x)) / std::max<long double>(std::abs(x), 1e-300L);
}

}  // namespace

TEST_SUITE("entire") {

TEST_CASE("phi(D) and affine substitution") {
  const std::size_t N = 16;
  SUBCASE("D, e^D and the identity") {
    auto d = apply_phiD(ExpTypeSymbol::derivative(), PolyVector::monomial(N, 5));
    CHECK(d[4] == cld(5));
    CHECK(d.degree() == 4);
    auto t = apply_phiD(ExpTypeSymbol::exponential(1, N), PolyVector::monomial(N, 2));
    CHECK(std::abs(t[0] - cld(1)) < 1e-12L);
    CHECK(std::abs(t[1] - cld(2)) < 1e-12L);
    CHECK(std::abs(t[2] - cld(1)) < 1e-12L);
    auto f = PolyVector::random(N, 9, 1);
    auto g = apply_phiD(ExpTypeSymbol::identity(), f);
    for (std::size_t j = 0; j < N; ++j) CHECK(g[j] == f[j]);
  }
  SUBCASE("affine examples and the iterate law") {
    auto f = PolyVector::random(N, 7, 2);
    auto id = apply_affine(AffineOp{1, 0}, f);
    for (std::size_t j = 0; j < N; ++j) CHECK(id[j] == f[j]);
    auto sq = apply_affine(AffineOp{2, 1}, PolyVector::monomial(N, 2));
    CHECK(sq[2] == cld(4));
    CHECK(sq[1] == cld(4));
    CHECK(sq[0] == cld(1));
    AffineOp op{cld(0.5L, 0.25L), cld(-1, 2)};
    auto three = apply_affine(op, apply_affine(op, apply_affine(op, f)));
    auto once = apply_affine(op.power(3), f);
    for (std::size_t j = 0; j < N; ++j) CHECK(std::abs(three[j] - once[j]) < 1e-15L * (1 + std::abs(once[j])));
  }
  SUBCASE("translation by e^{aD} matches the affine shift") {
    auto f = PolyVector::random(N, 10, 3);
    auto a = apply_phiD(ExpTypeSymbol::exponential(cld(0.3L, -0.2L), N), f);
    auto b = apply_affine(AffineOp{1, cld(0.3L, -0.2L)}, f);
    for (std::size_t j = 0; j < N; ++j) CHECK(std::abs(a[j] - b[j]) < 1e-14L);
  }
}

TEST_CASE("commutation D T = lambda T D") {
  SUBCASE("exact on monomials with rational lambda, b") {
    const Rational lam(3, 2), b(-2, 5);
    for (std::size_t k = 0; k < 40; ++k) {
      QPoly z(k + 1, Rational(0));
      z[k] = 1;
      QPoly lhs = q_derivative(q_affine(z, lam, b));
      QPoly rhs = q_affine(q_derivative(z), lam, b);
      for (auto& c : rhs) c *= lam;
      rhs.resize(lhs.size(), Rational(0));
      CHECK(lhs == rhs);
    }
  }
  SUBCASE("extended precision on every monomial below N - 1") {
    const std::size_t N = 1024;
    const cld lam = 2, b = 1;
    for (std::size_t k = 0; k + 1 < N; k += 37) {
      auto z = PolyVector::monomial(N, k);
      auto lhs = derivative(apply_affine(AffineOp{lam, b}, z));
      auto rhs = apply_affine(AffineOp{lam, b}, derivative(z));
      for (std::size_t j = 0; j < N; ++j) {
        long double scale = std::abs(lhs[j]) + std::abs(lam * rhs[j]);
        if (scale > 0) CHECK(std::abs(lhs[j] - lam * rhs[j]) <= 1e-12L * scale);
      }
    }
  }
  SUBCASE("D T z^2 = 2 T D z^2 for lambda = 2, b = 1") {
    auto dt = derivative(apply_affine(AffineOp{2, 1}, PolyVector::monomial(8, 2)));
    CHECK(dt[1] == cld(8));
    CHECK(dt[0] == cld(4));
    auto td = apply_affine(AffineOp{2, 1}, derivative(PolyVector::monomial(8, 2)));
    CHECK(dt[1] == cld(2) * td[1]);
    CHECK(dt[0] == cld(2) * td[0]);
  }
}

TEST_CASE("normal form of the random product") {
  SUBCASE("pair count") {
    auto nf = normal_form({1, 0, 1, 0}, 2, 1);
    CHECK(nf.a1 == 2);
    CHECK(nf.a2 == 2);
    CHECK(nf.c == 3);
    CHECK(nf.r == cld(3));
    CHECK(normal_form({0, 0, 1, 1}, 2, 1).c == 0);
    CHECK(normal_form({1, 1, 0, 0}, 2, 1).c == 4);
  }
  SUBCASE("closed form equals the exact rational product") {
    const Rational lam(2), b(1);
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      auto pat = random_pattern(12, seed);
      const std::size_t deg = 14;
      QPoly f(deg + 1);
      std::mt19937_64 gen(seed + 50);
      PolyVector fv(64);
      for (std::size_t j = 0; j <= deg; ++j) {
        f[j] = Rational(static_cast<long>(gen() % 21) - 10, static_cast<long>(gen() % 7) + 1);
        fv[j] = static_cast<long double>(f[j]);
      }
      QPoly exact = q_product(pat, f, lam, b);
      auto nf = normal_form(pat, 2, 1);
      auto closed = closed_product(nf, 2, fv);
      for (std::size_t j = 0; j < exact.size(); ++j)
        if (exact[j] != 0) CHECK(rel_to(closed[j], exact[j]) < 1e-15L);
    }
  }
  SUBCASE("trivial patterns") {
    const std::size_t N = 32;
    auto f = PolyVector::random(N, 20, 4);
    EntireProductSpec spec;
    spec.N = N;
    auto allT = noncommuting_product(spec, std::vector<std::uint8_t>(5, 1), f);
    CHECK(allT.nf.c == 0);
    auto iter = apply_affine(AffineOp{2, 1}.power(5), f);
    for (std::size_t j = 0; j < N; ++j) CHECK(std::abs(allT.closed[j] - iter[j]) <= 1e-15L * (1 + std::abs(iter[j])));
    auto allD = noncommuting_product(spec, std::vector<std::uint8_t>(5, 0), f);
    CHECK(allD.nf.c == 0);
    auto d5 = f;
    for (int i = 0; i < 5; ++i) d5 = derivative(d5);
    for (std::size_t j = 0; j < N; ++j) CHECK(allD.closed[j] == d5[j]);
  }
  SUBCASE("direct and closed agree along doubling orbits") {
    EntireProductSpec spec;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      auto om = random_omega(spec.transformation, seed, 256);
      auto f = PolyVector::random(spec.N, 48, seed);
      auto out = noncommuting_product(spec, om, 100, f);
      CHECK(out.rel_diff <= 1e-9L);
      // degree bookkeeping
      long expect = 48 - static_cast<long>(out.nf.a2);
      CHECK(out.direct.degree() == std::max(expect, -1L));
    }
  }
  SUBCASE("guards") {
    EntireProductSpec spec;
    spec.N = 10;
    CHECK_THROWS_AS(noncommuting_product(spec, std::vector<std::uint8_t>(10, 1), PolyVector(10)), Error);
  }
}

TEST_CASE("right inverse") {
  SUBCASE("a single derivative step integrates") {
    EntireProductSpec spec;
    spec.N = 8;
    auto nf = normal_form({0}, spec.lambda, spec.shift);
    auto s = right_inverse(spec, nf, 0);
    CHECK(std::abs(s[1] - cld(1)) < 1e-18L);
    CHECK(s.degree() == 1);
    CHECK(right_inverse_identity(spec, {0}, 0).error < 1e-18L);
  }
  SUBCASE("lambda = 2 composition identity") {
    EntireProductSpec spec;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      auto pat = random_pattern(100, seed);
      for (std::size_t k = 0; k <= 8; ++k) CHECK(right_inverse_identity(spec, pat, k).error <= 1e-6L);
    }
  }
  SUBCASE("coefficients agree with the exact rational right inverse, which inverts exactly") {
    for (Rational lam : {Rational(2), Rational(1, 2)}) {
      EntireProductSpec spec;
      spec.lambda = static_cast<long double>(lam);
      spec.N = 64;
      auto pat = random_pattern(24, 9);
      auto nf = normal_form(pat, spec.lambda, spec.shift);
      for (std::size_t k : {0u, 3u, 6u}) {
        // S z^k = lam^{-c - k a1} k!/m! sum_{j<=k} C(m,j) z^{m-j} (-r)^j
        const std::uint64_t m = k + nf.a2;
        Rational r = 0;
        for (std::uint64_t i = 0; i < nf.a1; ++i) r = r * lam + 1;
        Rational A = 1 / q_pow(lam, static_cast<std::uint64_t>(nf.c) + k * nf.a1);
        for (std::uint64_t i = k + 1; i <= m; ++i) A /= i;
        QPoly s(m + 1, Rational(0));
        BigInt binom = 1;
        for (std::size_t j = 0; j <= k; ++j) {
          s[m - j] = A * Rational(binom) * q_pow(-r, j);
          binom = binom * (m - j) / (j + 1);
        }
        QPoly back = q_product(pat, s, lam, Rational(1));
        back.resize(spec.N, Rational(0));
        for (std::size_t j = 0; j < back.size(); ++j) CHECK(back[j] == (j == k ? Rational(1) : Rational(0)));
        auto sv = right_inverse(spec, nf, k);
        for (std::size_t j = 0; j <= m; ++j)
          if (s[j] != 0) CHECK(rel_to(sv[j], s[j]) < 1e-13L);
      }
    }
  }
  SUBCASE("log seminorm matches the polynomial") {
    EntireProductSpec spec;
    auto pat = random_pattern(60, 3);
    auto nf = normal_form(pat, spec.lambda, spec.shift);
    for (std::size_t k = 0; k <= 4; ++k) {
      auto s = right_inverse(spec, nf, k);
      CHECK(log_seminorm_right_inverse(spec, nf, k, 5.0) ==
            doctest::Approx(static_cast<double>(std::log(s.seminorm(5.0L)))).epsilon(1e-12));
    }
  }
  SUBCASE("seminorm decay for lambda = 2") {
    EntireProductSpec spec;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      auto tr = seminorm_trajectory(spec, random_pattern(100, seed), 4, 5.0);
      auto onset = decay_onset(tr, 1e-6);
      CHECK(onset >= 1);
      CHECK(onset <= 50);
    }
  }
  SUBCASE("lambda = 1/2: the pinned leading coefficient grows") {
    // the top coefficient of any right inverse is lambda^{-c - k a1} k!/(k+a2)!, and c grows like a1 a2 / 2
    EntireProductSpec spec;
    spec.lambda = 0.5L;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      auto tr = seminorm_trajectory(spec, random_pattern(100, seed), 4, 5.0);
      CHECK(tr.log_max[99] > tr.log_max[49]);
      CHECK(decay_onset(tr, 1e-6) == 0);
    }
  }
  SUBCASE("size guard") {
    EntireProductSpec spec;
    spec.N = 10;
    auto nf = normal_form(std::vector<std::uint8_t>(9, 0), spec.lambda, spec.shift);
    CHECK_THROWS_AS(right_inverse(spec, nf, 1), Error);
  }
}

TEST_CASE("eigenfunction classifier") {
  SUBCASE("translation and derivative mix") {
    auto rep = phiD_classify(ExpTypeSymbol::exponential(1, 64), ExpTypeSymbol::derivative(), 0.5);
    CHECK(rep.verdict == EntireVerdict::Mixing);
    CHECK(rep.mu_below == cld(0));
    CHECK(rep.g_below == 0.0);
    // g(3) = sqrt(3 e^3) > 1
    CHECK(rep.g_above >= std::sqrt(3 * std::exp(3.0)));
  }
  SUBCASE("equal symbols reduce to a single operator") {
    auto e = ExpTypeSymbol::exponential(1, 64);
    CHECK(phiD_classify(e, e, 0.3).verdict == EntireVerdict::Mixing);
    auto one = ExpTypeSymbol::identity();
    CHECK(phiD_classify(one, one, 0.5).verdict == EntireVerdict::Inconclusive);
  }
  SUBCASE("truncated exponentials are eigenvectors") {
    const std::size_t N = 512;
    for (auto phi : {ExpTypeSymbol::exponential(1, N), ExpTypeSymbol::derivative(),
                     ExpTypeSymbol::polynomial({1, cld(0, 2), -3})})
      for (int j = 0; j < 8; ++j) {
        cld lam = std::polar<long double>(0.25L * (j + 1), 0.9L * j);
        CHECK(eigen_residual(phi, lam, N, 1.0L) <= 1e-6L);
      }
  }
}

}  // TEST_SUITE
