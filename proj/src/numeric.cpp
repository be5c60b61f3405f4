#include "ergolin/numeric.hpp"

#include "ergolin/error.hpp"


#include <cctype>
#include <cmath>

namespace ergolin {

namespace mp = boost::multiprecision;

const char* error_kind_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Config: return "config";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Precision: return "precision";
    case ErrorKind::Horizon: return "horizon";
    case ErrorKind::Size: return "size";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::Internal: return "internal";
  }
  return "unknown";
}

double u128_to_unit(u128 x) {
  auto hi = static_cast<std::uint64_t>(x >> 64);
  auto lo = static_cast<std::uint64_t>(x);
  return std::ldexp(static_cast<double>(hi), -64) + std::ldexp(static_cast<double>(lo), -128);
}

u128 unit_to_u128(double x) {
  x -= std::floor(x);
  double hi = std::floor(std::ldexp(x, 64));
  double rem = std::ldexp(x, 64) - hi;
  auto h = static_cast<std::uint64_t>(hi);
  auto l = static_cast<std::uint64_t>(std::ldexp(rem, 64));
  return (static_cast<u128>(h) << 64) | l;
}

std::string u128_to_string(u128 x) {
  if (x == 0) return "0";
  std::string s;
  while (x > 0) {
    s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(x % 10)));
    x /= 10;
  }
  return s;
}

namespace {
const BigInt kTwo256 = BigInt(1) << 256;
const BigInt kTwo128 = BigInt(1) << 128;

u128 small_bigint_to_u128(const BigInt& v) {
  auto hi = static_cast<std::uint64_t>(v >> 64);
  auto lo = static_cast<std::uint64_t>(v & BigInt(0xFFFFFFFFFFFFFFFFull));
  return (static_cast<u128>(hi) << 64) | lo;
}
}  // namespace

u128 fixed256_to_u128(const Fixed256& x) {
  BigInt v(x);
  v = (v + (BigInt(1) << 127)) >> 128;
  if (v >= kTwo128) v -= kTwo128;
  return small_bigint_to_u128(v);
}

Fixed256 u128_to_fixed256(u128 x) {
  Fixed256 v = static_cast<std::uint64_t>(x >> 64);
  v <<= 64;
  v |= static_cast<std::uint64_t>(x);
  return v << 128;
}

double fixed256_to_unit(const Fixed256& x) {
  Fixed256 top = x >> 192;
  Fixed256 next = (x >> 128) & Fixed256(0xFFFFFFFFFFFFFFFFull);
  return std::ldexp(static_cast<double>(static_cast<std::uint64_t>(top)), -64) +
         std::ldexp(static_cast<double>(static_cast<std::uint64_t>(next)), -128);
}

Fixed256 bigint_mod_fixed(const BigInt& x) {
  BigInt r = x % kTwo256;
  if (r < 0) r += kTwo256;
  return Fixed256(r);
}

Rational frac(const Rational& q) {
  BigInt num = mp::numerator(q);
  BigInt den = mp::denominator(q);
  BigInt r = num % den;
  if (r < 0) r += den;
  return Rational(r, den);
}

Fixed256 rational_to_fixed256(const Rational& q) {
  BigInt num = mp::numerator(q);
  BigInt den = mp::denominator(q);
  BigInt r = num % den;
  if (r < 0) r += den;
  return Fixed256((r << 256) / den);
}

u128 rational_to_u128(const Rational& q) {
  BigInt num = mp::numerator(q);
  BigInt den = mp::denominator(q);
  BigInt r = num % den;
  if (r < 0) r += den;
  return small_bigint_to_u128((r << 128) / den);
}

Real256 Real256::from_rational(const Rational& q) {
  Real256 out;
  BigInt num = mp::numerator(q);
  BigInt den = mp::denominator(q);
  BigInt r = num % den;
  if (r < 0) r += den;
  Rational reduced(r, den);
  out.value = rational_to_fixed256(reduced);
  out.exact = reduced;
  return out;
}

Real256 parse_rational_real(const std::string& raw) {
  std::string text;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) text += c;
  if (text.empty()) fail(ErrorKind::Config, "empty number");
  try {
    auto slash = text.find('/');
    if (slash != std::string::npos) {
      BigInt p(text.substr(0, slash));
      BigInt q(text.substr(slash + 1));
      if (q == 0) fail(ErrorKind::Config, "zero denominator in '" + raw + "'");
      return Real256::from_rational(Rational(p, q));
    }
    // decimal with optional exponent
    bool neg = false;
    std::size_t i = 0;
    if (text[i] == '+' || text[i] == '-') neg = text[i++] == '-';
    BigInt digits = 0;
    std::int64_t scale = 0;
    bool seen_digit = false, after_point = false;
    for (; i < text.size(); ++i) {
      char c = text[i];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        digits = digits * 10 + (c - '0');
        if (after_point) --scale;
        seen_digit = true;
      } else if (c == '.' && !after_point) {
        after_point = true;
      } else {
        break;
      }
    }
    if (!seen_digit) fail(ErrorKind::Config, "not a number: '" + raw + "'");
    if (i < text.size()) {
      if (text[i] != 'e' && text[i] != 'E') fail(ErrorKind::Config, "not a number: '" + raw + "'");
      scale += std::stoll(text.substr(i + 1));
    }
    if (neg) digits = -digits;
    Rational value = scale >= 0 ? Rational(digits * mp::pow(BigInt(10), static_cast<unsigned>(scale)))
                                : Rational(digits, mp::pow(BigInt(10), static_cast<unsigned>(-scale)));
    return Real256::from_rational(value);
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    fail(ErrorKind::Config, "not a number: '" + raw + "'");
  }
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632BE59BD9B4E019ull));
}

}  // namespace ergolin
