#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace ergolin {

using u128 = unsigned __int128;
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
// Unsigned 256-bit integer with wrap-around arithmetic; as a torus coordinate it means x / 2^256.
using Fixed256 = boost::multiprecision::uint256_t;

inline constexpr double kTwoPow128 = 340282366920938463463374607431768211456.0;

double u128_to_unit(u128 x);
u128 unit_to_u128(double x);
std::string u128_to_string(u128 x);

u128 fixed256_to_u128(const Fixed256& x);  // rounds to nearest, wraps mod 1
Fixed256 u128_to_fixed256(u128 x);
double fixed256_to_unit(const Fixed256& x);

// Fractional part in [0,1).
Rational frac(const Rational& q);

// floor(frac(q) * 2^256); q may be negative or exceed 1.
Fixed256 rational_to_fixed256(const Rational& q);
// floor(frac(q) * 2^128)
u128 rational_to_u128(const Rational& q);

// Reduces an arbitrary integer modulo 2^256.
Fixed256 bigint_mod_fixed(const BigInt& x);

// A real number in [0,1) known to 256 bits, optionally with its exact rational value.
struct Real256 {
  Fixed256 value = 0;
  std::optional<Rational> exact;

  static Real256 from_rational(const Rational& q);
  double to_double() const { return fixed256_to_unit(value); }
  u128 to_u128() const { return fixed256_to_u128(value); }
};

// Parses "p/q", a decimal literal such as "0.30" or "1e-3"; the result is reduced mod 1 and exact.
Real256 parse_rational_real(const std::string& text);

// 64-bit mixer used to derive independent per-sample seeds.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace ergolin
