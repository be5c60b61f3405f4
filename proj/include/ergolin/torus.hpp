#pragma once

#include "ergolin/numeric.hpp"

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ergolin {

// A point of R/Z stored as frac / 2^128.
struct TorusPoint {
  u128 frac = 0;

  constexpr TorusPoint() = default;
  constexpr explicit TorusPoint(u128 f) : frac(f) {}

  static TorusPoint from_double(double x);
  static TorusPoint from_rational(const Rational& q);
  double to_double() const { return u128_to_unit(frac); }

  friend constexpr TorusPoint operator+(TorusPoint a, TorusPoint b) { return TorusPoint(a.frac + b.frac); }
  friend constexpr TorusPoint operator-(TorusPoint a, TorusPoint b) { return TorusPoint(a.frac - b.frac); }
  friend constexpr auto operator<=>(TorusPoint, TorusPoint) = default;
};

// Distance to the nearest integer, as a 128-bit fraction (at most 2^127).
u128 torus_distance(TorusPoint a, TorusPoint b);

// Binary digits of a point: bit j is the j-th digit after the binary point.
class BitStream {
 public:
  BitStream() = default;
  explicit BitStream(std::vector<std::uint8_t> bits);
  static BitStream random(std::uint64_t seed, std::size_t length);
  static BitStream from_point(TorusPoint x, std::size_t length);  // pads with zeros after 128 digits

  std::size_t size() const { return length_; }
  bool bit(std::size_t j) const;
  // The 128 digits starting at j, i.e. the truncation of tau^j(omega).
  u128 window(std::size_t j) const;
  // Same digits, reading past the end as zeros.
  u128 window_padded(std::size_t j) const;

 private:
  std::vector<std::uint64_t> words_;
  std::size_t length_ = 0;
};

struct RationalAngle {
  std::int64_t p = 0;
  std::int64_t q = 1;  // q >= 1, gcd(p, q) = 1, 0 <= p < q
};

class Transformation {
 public:
  enum class Kind { Rotation, Doubling };

  static Transformation doubling();
  static Transformation rotation(const Real256& alpha, std::string description = {});
  static Transformation rotation_rational(std::int64_t p, std::int64_t q);

  Kind kind() const { return kind_; }
  bool is_rotation() const { return kind_ == Kind::Rotation; }
  TorusPoint alpha() const { return alpha_; }
  const Real256& alpha_hi() const { return alpha_hi_; }
  const std::optional<RationalAngle>& rational() const { return rational_; }
  const std::string& description() const { return description_; }

  // Point reached after i rotation steps from omega (rotation only).
  TorusPoint rotate(TorusPoint omega, std::uint64_t i) const;

 private:
  Kind kind_ = Kind::Doubling;
  TorusPoint alpha_;
  Real256 alpha_hi_;
  std::optional<RationalAngle> rational_;
  std::string description_ = "doubling";
};

// Starting point: a torus point for rotations, a digit stream for the doubling map.
using Omega = std::variant<TorusPoint, std::shared_ptr<const BitStream>>;

Omega omega_point(TorusPoint x);
Omega omega_bits(BitStream bits);
// Draws omega suitable for t with enough digits for `horizon` doubling steps.
Omega random_omega(const Transformation& t, std::uint64_t seed, std::size_t horizon);
std::string describe_omega(const Omega& omega);

// Walks tau^0 omega, tau^1 omega, ...
class OrbitCursor {
 public:
  OrbitCursor(const Transformation& t, const Omega& omega);

  TorusPoint current() const;
  std::uint64_t index() const { return index_; }
  void advance();
  // Remaining steps supported by the digit stream (unbounded for rotations).
  std::uint64_t capacity() const;

 private:
  const Transformation* t_;
  TorusPoint start_;
  TorusPoint point_;
  std::shared_ptr<const BitStream> bits_;
  std::uint64_t index_ = 0;
};

std::vector<TorusPoint> orbit(const Transformation& t, const Omega& omega, std::uint64_t n);

// Half-open arc [lo, hi); hi_is_one marks the right end 1.
struct Interval {
  TorusPoint lo;
  TorusPoint hi;
  bool hi_is_one = false;

  static Interval closed_open(TorusPoint lo, TorusPoint hi) { return {lo, hi, false}; }
  static Interval to_one(TorusPoint lo) { return {lo, TorusPoint(0), true}; }

  bool contains(TorusPoint x) const { return x >= lo && (hi_is_one || x < hi); }
  double length() const;
  bool empty() const { return !hi_is_one && hi <= lo; }
};

// Two intervals partitioning [0,1): either A1=[0,b), A2=[b,1) or the mirrored layout.
struct Partition {
  Interval a1;
  Interval a2;

  static Partition split_at(TorusPoint b);                  // A1 = [0,b)
  static Partition make(const Interval& a1, const Interval& a2);  // validates
  double m1() const { return a1.length(); }
  double m2() const { return a2.length(); }
  bool in_a1(TorusPoint x) const { return a1.contains(x); }
};

struct MembershipCounts {
  std::vector<std::uint64_t> a1;  // a1[i] = #{j <= i : tau^j omega in A1}
  std::vector<std::uint64_t> a2;
};

MembershipCounts membership_counts(const Transformation& t, const Omega& omega, std::uint64_t n,
                                   const Partition& part);

// Operator choices along the orbit: entry i is 1 when tau^i omega lies in A1, else 0.
std::vector<std::uint8_t> step_pattern(const Transformation& t, const Omega& omega, std::uint64_t n,
                                       const Partition& part);

// True iff membership of tau^j omega in [0,1/2) agrees with digit j being 0 for all j < n.
bool iid_bit_check(const BitStream& omega, std::uint64_t n);

}  // namespace ergolin
