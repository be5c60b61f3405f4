#include "doctest.h"
#include "oracles.hpp"

#include "ergolin/contfrac.hpp"
#include "ergolin/error.hpp"
#include "ergolin/torus.hpp"

#include <random>

using namespace ergolin;

namespace {
BitStream stream_with_prefix(std::vector<std::uint8_t> prefix, std::size_t length) {
  prefix.resize(length, 0);
  return BitStream(prefix);
}
}  // namespace

TEST_SUITE("torus") {

TEST_CASE("rational rotation cycles through quarters") {
  auto t = Transformation::rotation_rational(1, 4);
  auto pts = orbit(t, omega_point(TorusPoint(0)), 4);
  CHECK(pts[0].to_double() == 0.0);
  CHECK(pts[1].to_double() == 0.25);
  CHECK(pts[2].to_double() == 0.5);
  CHECK(pts[3].to_double() == 0.75);
}

TEST_CASE("doubling orbit reads leading digits") {
  auto t = Transformation::doubling();
  auto pts = orbit(t, omega_bits(stream_with_prefix({0, 1, 1, 0}, 132)), 2);
  CHECK(pts[0].to_double() < 0.5);
  CHECK(pts[1].to_double() >= 0.5);
}

TEST_CASE("short stream raises a horizon error") {
  auto t = Transformation::doubling();
  auto omega = omega_bits(stream_with_prefix({0, 1}, 130));
  CHECK_NOTHROW(orbit(t, omega, 3));
  try {
    orbit(t, omega, 4);
    FAIL("expected horizon error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Horizon);
  }
}

TEST_CASE("golden rotation after 1e6 steps matches a 320-bit evaluation") {
  auto t = Transformation::rotation(golden_alpha(), "golden");
  OrbitCursor cur(t, omega_point(TorusPoint(0)));
  for (int i = 0; i < 1000000; ++i) cur.advance();
  auto exact = oracle::frac(oracle::HP(1000000) * oracle::golden());
  auto got = oracle::from_u128(cur.current().frac);
  CHECK(oracle::torus_dist(exact, got) < boost::multiprecision::ldexp(oracle::HP(1), -88));
}

TEST_CASE("drift is at most i * 2^-128 (property)") {
  auto t = Transformation::rotation(golden_alpha(), "golden");
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 20; ++trial) {
    u128 w = (static_cast<u128>(gen()) << 64) | gen();
    std::uint64_t i = gen() % 5000000 + 1;
    auto got = oracle::from_u128(t.rotate(TorusPoint(w), i).frac);
    auto ideal = oracle::frac(oracle::from_u128(w) + oracle::HP(i) * oracle::golden());
    CHECK(oracle::torus_dist(got, ideal) <= oracle::HP(i) * boost::multiprecision::ldexp(oracle::HP(1), -128));
  }
}

TEST_CASE("iterated addition equals one-shot rotate") {
  auto t = Transformation::rotation(sqrt2_minus_one());
  OrbitCursor cur(t, omega_point(TorusPoint::from_double(0.3)));
  for (int i = 0; i < 12345; ++i) cur.advance();
  CHECK(cur.current() == t.rotate(TorusPoint::from_double(0.3), 12345));
}

TEST_CASE("rational rotations have exact period q (property)") {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 30; ++trial) {
    std::int64_t q = static_cast<std::int64_t>(gen() % 997) + 2;
    std::int64_t p = static_cast<std::int64_t>(gen() % q);
    if (std::gcd(p, q) != 1) continue;
    auto t = Transformation::rotation_rational(p, q);
    TorusPoint w(static_cast<u128>(gen()) << 64 | gen());
    auto pts = orbit(t, omega_point(w), static_cast<std::uint64_t>(2 * q + 1));
    CHECK(pts[q] == pts[0]);
    CHECK(pts[2 * q] == pts[0]);
    for (std::int64_t i = 1; i < q; ++i) REQUIRE(pts[i] != pts[0]);
  }
}

TEST_CASE("doubling shift law on the leading 127 digits") {
  auto t = Transformation::doubling();
  auto pts = orbit(t, omega_bits(BitStream::random(3, 1000 + 128)), 1000);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    u128 doubled = pts[i].frac << 1;
    REQUIRE((pts[i + 1].frac >> 1) == (doubled >> 1));
  }
}

TEST_CASE("membership counts") {
  auto half = Partition::split_at(TorusPoint::from_double(0.5));
  SUBCASE("single point in A1") {
    auto c = membership_counts(Transformation::rotation(golden_alpha()), omega_point(TorusPoint::from_double(0.1)), 1, half);
    CHECK(c.a1 == std::vector<std::uint64_t>{1});
    CHECK(c.a2 == std::vector<std::uint64_t>{0});
  }
  SUBCASE("doubling digits 0,1,1,0") {
    auto c = membership_counts(Transformation::doubling(), omega_bits(stream_with_prefix({0, 1, 1, 0}, 256)), 4, half);
    CHECK(c.a1 == std::vector<std::uint64_t>{1, 1, 1, 2});
  }
  SUBCASE("golden frequency of [0,1/2) against a 320-bit count") {
    const int n = 100000;
    auto c = membership_counts(Transformation::rotation(golden_alpha()), omega_point(TorusPoint(0)), n, half);
    double freq = static_cast<double>(c.a1.back()) / n;
    CHECK(freq >= 0.499);
    CHECK(freq <= 0.501);
    auto g = oracle::golden();
    oracle::HP x = 0;
    std::uint64_t count = 0;
    for (int i = 0; i < n; ++i) {
      if (x < oracle::HP(0.5)) ++count;
      x = oracle::frac(x + g);
    }
    CHECK(count == c.a1.back());
  }
  SUBCASE("prefix identity a1 + a2 = i (property)") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      auto c = membership_counts(Transformation::doubling(), random_omega(Transformation::doubling(), seed, 500), 500,
                                 Partition::split_at(TorusPoint::from_double(0.3)));
      for (std::size_t i = 0; i < 500; ++i) REQUIRE(c.a1[i] + c.a2[i] == i + 1);
    }
  }
  SUBCASE("overlapping intervals are rejected") {
    auto a = Interval::closed_open(TorusPoint(0), TorusPoint::from_double(0.6));
    auto b = Interval::to_one(TorusPoint::from_double(0.5));
    CHECK_THROWS_AS(Partition::make(a, b), Error);
  }
  SUBCASE("endpoint belongs to the right-hand interval") {
    auto p = Partition::split_at(TorusPoint::from_double(0.25));
    CHECK_FALSE(p.in_a1(TorusPoint::from_double(0.25)));
    CHECK(p.in_a1(TorusPoint(TorusPoint::from_double(0.25).frac - 1)));
  }
}

TEST_CASE("iid bit check") {
  CHECK(iid_bit_check(BitStream({0, 1}), 2));
  CHECK(iid_bit_check(BitStream({1, 1, 1, 1}), 4));
  CHECK(iid_bit_check(BitStream::random(99, 10000 + 128), 10000));
}

}  // TEST_SUITE
