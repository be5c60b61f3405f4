#include "ergolin/torus.hpp"

#include "ergolin/error.hpp"

#include <numeric>
#include <random>
#include <sstream>

namespace ergolin {

TorusPoint TorusPoint::from_double(double x) { return TorusPoint(unit_to_u128(x)); }

TorusPoint TorusPoint::from_rational(const Rational& q) { return TorusPoint(rational_to_u128(q)); }

u128 torus_distance(TorusPoint a, TorusPoint b) {
  u128 d = a.frac - b.frac;
  u128 e = b.frac - a.frac;
  return d < e ? d : e;
}

BitStream::BitStream(std::vector<std::uint8_t> bits) : length_(bits.size()) {
  words_.assign((length_ + 63) / 64 + 2, 0);
  for (std::size_t j = 0; j < length_; ++j)
    if (bits[j]) words_[j / 64] |= 1ull << (63 - j % 64);
}

BitStream BitStream::random(std::uint64_t seed, std::size_t length) {
  BitStream s;
  s.length_ = length;
  s.words_.assign((length + 63) / 64 + 2, 0);
  std::mt19937_64 gen(seed);
  for (std::size_t w = 0; w < (length + 63) / 64; ++w) s.words_[w] = gen();
  if (length % 64) s.words_[length / 64] &= ~0ull << (64 - length % 64);
  return s;
}

BitStream BitStream::from_point(TorusPoint x, std::size_t length) {
  require(length >= 128, ErrorKind::Precondition, "bit stream needs at least 128 digits");
  BitStream s;
  s.length_ = length;
  s.words_.assign((length + 63) / 64 + 2, 0);
  s.words_[0] = static_cast<std::uint64_t>(x.frac >> 64);
  s.words_[1] = static_cast<std::uint64_t>(x.frac);
  return s;
}

bool BitStream::bit(std::size_t j) const {
  require(j < length_, ErrorKind::Horizon, "bit index beyond stream length");
  return (words_[j / 64] >> (63 - j % 64)) & 1u;
}

u128 BitStream::window(std::size_t j) const {
  if (j + 128 > length_)
    fail(ErrorKind::Horizon, "orbit step " + std::to_string(j) + " needs " + std::to_string(j + 128) +
                                 " digits but the stream has " + std::to_string(length_));
  std::size_t w = j / 64;
  unsigned s = j % 64;
  std::uint64_t a = words_[w], b = words_[w + 1], c = words_[w + 2];
  std::uint64_t hi = s ? (a << s) | (b >> (64 - s)) : a;
  std::uint64_t lo = s ? (b << s) | (c >> (64 - s)) : b;
  return (static_cast<u128>(hi) << 64) | lo;
}

u128 BitStream::window_padded(std::size_t j) const {
  if (j + 128 <= length_) return window(j);
  u128 out = 0;
  for (std::size_t k = 0; k < 128; ++k) out = (out << 1) | (j + k < length_ && bit(j + k) ? 1u : 0u);
  return out;
}

Transformation Transformation::doubling() { return Transformation(); }

Transformation Transformation::rotation(const Real256& alpha, std::string description) {
  Transformation t;
  t.kind_ = Kind::Rotation;
  t.alpha_hi_ = alpha;
  t.alpha_ = TorusPoint(alpha.to_u128());
  t.description_ = description.empty() ? "rotation" : std::move(description);
  if (alpha.exact) {
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    BigInt p = numerator(*alpha.exact), q = denominator(*alpha.exact);
    if (q <= BigInt(std::int64_t{1} << 40)) {
      t.rational_ = RationalAngle{static_cast<std::int64_t>(p), static_cast<std::int64_t>(q)};
    }
  }
  return t;
}

Transformation Transformation::rotation_rational(std::int64_t p, std::int64_t q) {
  require(q >= 1, ErrorKind::Precondition, "rational rotation needs q >= 1");
  p %= q;
  if (p < 0) p += q;
  std::int64_t g = std::gcd(p, q);
  if (g > 1) {
    p /= g;
    q /= g;
  }
  return rotation(Real256::from_rational(Rational(p, q)), std::to_string(p) + "/" + std::to_string(q));
}

TorusPoint Transformation::rotate(TorusPoint omega, std::uint64_t i) const {
  require(is_rotation(), ErrorKind::Precondition, "rotate() on the doubling map");
  if (rational_) {
    // index arithmetic mod q keeps the orbit exactly periodic
    auto k = static_cast<std::uint64_t>((static_cast<u128>(i % rational_->q) * rational_->p) % rational_->q);
    return omega + TorusPoint(rational_to_u128(Rational(static_cast<long long>(k), rational_->q)));
  }
  return omega + TorusPoint(alpha_.frac * static_cast<u128>(i));
}

Omega omega_point(TorusPoint x) { return x; }

Omega omega_bits(BitStream bits) { return std::make_shared<const BitStream>(std::move(bits)); }

Omega random_omega(const Transformation& t, std::uint64_t seed, std::size_t horizon) {
  if (t.is_rotation()) {
    std::mt19937_64 gen(seed);
    u128 hi = gen(), lo = gen();
    return TorusPoint((hi << 64) | lo);
  }
  return omega_bits(BitStream::random(seed, horizon + 128));
}

std::string describe_omega(const Omega& omega) {
  if (auto p = std::get_if<TorusPoint>(&omega)) {
    std::ostringstream os;
    os.precision(17);
    os << p->to_double();
    return os.str();
  }
  const auto& bits = std::get<std::shared_ptr<const BitStream>>(omega);
  return "bitstream[" + std::to_string(bits->size()) + "]";
}

OrbitCursor::OrbitCursor(const Transformation& t, const Omega& omega) : t_(&t) {
  if (t.is_rotation()) {
    auto p = std::get_if<TorusPoint>(&omega);
    require(p != nullptr, ErrorKind::Precondition, "rotation orbit needs a torus point");
    start_ = point_ = *p;
  } else {
    auto b = std::get_if<std::shared_ptr<const BitStream>>(&omega);
    require(b != nullptr && *b, ErrorKind::Precondition, "doubling orbit needs a bit stream");
    bits_ = *b;
    point_ = TorusPoint(bits_->window(0));
  }
}

TorusPoint OrbitCursor::current() const { return point_; }

void OrbitCursor::advance() {
  ++index_;
  if (!t_->is_rotation()) {
    point_ = TorusPoint(bits_->window(index_));
  } else if (t_->rational()) {
    point_ = t_->rotate(start_, index_);
  } else {
    point_ = point_ + t_->alpha();
  }
}

std::uint64_t OrbitCursor::capacity() const {
  if (t_->is_rotation()) return ~0ull;
  return bits_->size() >= 128 ? bits_->size() - 127 : 0;
}

std::vector<TorusPoint> orbit(const Transformation& t, const Omega& omega, std::uint64_t n) {
  require(n >= 1, ErrorKind::Precondition, "orbit length must be >= 1");
  OrbitCursor cur(t, omega);
  if (cur.capacity() < n)
    fail(ErrorKind::Horizon, "bit stream supports " + std::to_string(cur.capacity()) + " steps, " +
                                 std::to_string(n) + " requested");
  std::vector<TorusPoint> out;
  out.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    if (i) cur.advance();
    out.push_back(cur.current());
  }
  return out;
}

double Interval::length() const {
  if (hi_is_one) return 1.0 - lo.to_double();
  return hi <= lo ? 0.0 : (hi - lo).to_double();
}

Partition Partition::split_at(TorusPoint b) {
  require(b.frac != 0, ErrorKind::Config, "split point must lie in (0,1)");
  return {Interval::closed_open(TorusPoint(0), b), Interval::to_one(b)};
}

Partition Partition::make(const Interval& a1, const Interval& a2) {
  bool ok = false;
  if (!a1.empty() && !a2.empty()) {
    if (a1.lo.frac == 0 && !a1.hi_is_one && a2.hi_is_one) ok = a2.lo == a1.hi;
    if (a2.lo.frac == 0 && !a2.hi_is_one && a1.hi_is_one) ok = a1.lo == a2.hi;
  }
  require(ok, ErrorKind::Config, "A1 and A2 must be disjoint half-open intervals covering [0,1)");
  return {a1, a2};
}

MembershipCounts membership_counts(const Transformation& t, const Omega& omega, std::uint64_t n,
                                   const Partition& part) {
  MembershipCounts out;
  out.a1.reserve(n);
  out.a2.reserve(n);
  OrbitCursor cur(t, omega);
  if (cur.capacity() < n) fail(ErrorKind::Horizon, "bit stream too short for " + std::to_string(n) + " steps");
  std::uint64_t c1 = 0, c2 = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    if (i) cur.advance();
    if (part.in_a1(cur.current())) ++c1; else ++c2;
    out.a1.push_back(c1);
    out.a2.push_back(c2);
  }
  return out;
}

std::vector<std::uint8_t> step_pattern(const Transformation& t, const Omega& omega, std::uint64_t n,
                                       const Partition& part) {
  std::vector<std::uint8_t> out;
  out.reserve(n);
  OrbitCursor cur(t, omega);
  if (cur.capacity() < n) fail(ErrorKind::Horizon, "bit stream too short for " + std::to_string(n) + " steps");
  for (std::uint64_t i = 0; i < n; ++i) {
    if (i) cur.advance();
    out.push_back(part.in_a1(cur.current()) ? 1 : 0);
  }
  return out;
}

bool iid_bit_check(const BitStream& omega, std::uint64_t n) {
  const u128 half = static_cast<u128>(1) << 127;
  for (std::uint64_t j = 0; j < n; ++j) {
    bool in_a1 = omega.window_padded(j) < half;
    if (in_a1 != !omega.bit(j)) return false;
  }
  return true;
}

}  // namespace ergolin
