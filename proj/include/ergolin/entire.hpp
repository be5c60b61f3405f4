#pragma once

#include "ergolin/numeric.hpp"
#include "ergolin/torus.hpp"

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ergolin {

using cld = std::complex<long double>;

// Polynomial of degree < N with extended-range coefficients.
class PolyVector {
 public:
  explicit PolyVector(std::size_t N = 0) : c_(N, cld(0)) {}
  static PolyVector monomial(std::size_t N, std::size_t k, cld coeff = 1);
  // Complex Gaussian coefficients up to `degree`.
  static PolyVector random(std::size_t N, std::size_t degree, std::uint64_t seed);

  std::size_t N() const { return c_.size(); }
  long degree() const;  // -1 for the zero polynomial
  cld& operator[](std::size_t j) { return c_[j]; }
  const cld& operator[](std::size_t j) const { return c_[j]; }
  const std::vector<cld>& coeffs() const { return c_; }

  // sum |c_j| R^j, an upper bound for sup_{|z| <= R} |f|
  long double seminorm(long double R) const;
  cld eval(cld z) const;
  // Same coefficients with moduli taken.
  PolyVector majorant() const;

 private:
  std::vector<cld> c_;
};

// phi(D) for phi of exponential type, through its Taylor coefficients.
struct ExpTypeSymbol {
  std::string name;
  std::vector<cld> taylor;  // a_0..a_{N-1}
  std::function<cld(cld)> eval;

  static ExpTypeSymbol exponential(cld a, std::size_t N);  // e^{a lambda}: translation by a
  static ExpTypeSymbol polynomial(std::vector<cld> coeffs);
  static ExpTypeSymbol derivative();  // lambda
  static ExpTypeSymbol identity();
};

PolyVector derivative(const PolyVector& f);
PolyVector apply_phiD(const ExpTypeSymbol& phi, const PolyVector& f);

// T f = f(lambda z + b)
struct AffineOp {
  cld lambda = 1;
  cld b = 0;
  AffineOp power(std::uint64_t n) const;  // (lambda^n, b sum_{k<n} lambda^k)
};

PolyVector apply_affine(const AffineOp& op, const PolyVector& f);
// f(z + s)
PolyVector taylor_shift(const PolyVector& f, cld s);

struct EntireProductSpec {
  cld lambda = 2;
  cld shift = 1;  // b of T_{lambda,b}
  Real256 cut = Real256::from_rational(Rational(1, 2));  // A1 = [0,cut) applies T, A2 applies D
  Transformation transformation = Transformation::doubling();
  std::size_t N = 1024;
};

struct NormalForm {
  std::uint64_t a1 = 0, a2 = 0;
  BigInt c = 0;  // pairs i < j with step i = T and step j = D
  cld r = 0;     // b sum_{k<a1} lambda^k
};

// pattern[i] = 1 for T, 0 for D
NormalForm normal_form(const std::vector<std::uint8_t>& pattern, cld lambda, cld b);
std::vector<std::uint8_t> entire_pattern(const EntireProductSpec& spec, const Omega& omega, std::uint64_t n);

// lambda^c f^{(a2)}(lambda^{a1} z + r)
PolyVector closed_product(const NormalForm& nf, cld lambda, const PolyVector& f);
PolyVector direct_product(const std::vector<std::uint8_t>& pattern, const AffineOp& op, const PolyVector& f);

struct ProductOutcome {
  PolyVector direct, closed;
  NormalForm nf;
  long double rel_diff = 0;  // max_j |direct_j - closed_j| / majorant_j
};

// Both routes; throws Internal when they disagree beyond 1e-9 relative to the coefficient majorant.
ProductOutcome noncommuting_product(const EntireProductSpec& spec, const std::vector<std::uint8_t>& pattern,
                                    const PolyVector& f);
ProductOutcome noncommuting_product(const EntireProductSpec& spec, const Omega& omega, std::uint64_t n,
                                    const PolyVector& f);

// S_n z^k with T_n S_n z^k = z^k.
PolyVector right_inverse(const EntireProductSpec& spec, const NormalForm& nf, std::size_t k);
// log of sum_j |c_j| R^j for S_n z^k, computed from the closed coefficients in log form.
double log_seminorm_right_inverse(const EntireProductSpec& spec, const NormalForm& nf, std::size_t k, double R);

struct SeminormTrajectory {
  std::vector<std::uint64_t> n;
  std::vector<std::uint64_t> a1, a2;
  std::vector<BigInt> c;
  std::vector<std::vector<double>> log_seminorm;  // [n index][k]
  std::vector<double> log_max;                    // max over k
};

SeminormTrajectory seminorm_trajectory(const EntireProductSpec& spec, const std::vector<std::uint8_t>& pattern,
                                       std::size_t kmax, double R);
// First n0 such that log_max is non-increasing (relative tolerance rel_tol) from n0 on; 0 if never.
std::uint64_t decay_onset(const SeminormTrajectory& tr, double rel_tol);

struct IdentityCheck {
  std::uint64_t n = 0;
  std::size_t k = 0;
  long double error = 0;  // max_j |(T_n S_n z^k)_j - delta_jk|
};

IdentityCheck right_inverse_identity(const EntireProductSpec& spec, const std::vector<std::uint8_t>& pattern,
                                     std::size_t k);

enum class EntireVerdict { Mixing, Inconclusive };
const char* entire_verdict_name(EntireVerdict v);

struct EntireClassifyReport {
  EntireVerdict verdict = EntireVerdict::Inconclusive;
  double radius = 0;
  std::size_t grid_points = 0;
  bool found_above = false, found_below = false;
  cld lambda_above, mu_below;  // g > 1 and g < 1
  double g_above = 0, g_below = 0;
  std::string note;
};

// g = |phi1|^m1 |phi2|^m2 on a polar grid of the given radius.
EntireClassifyReport phiD_classify(const ExpTypeSymbol& phi1, const ExpTypeSymbol& phi2, double m1, double radius = 4.0,
                                   std::size_t rings = 32, std::size_t angles = 64);

// sum_j |(phi(D) P_N e_lambda - phi(lambda) P_N e_lambda)_j| R^j
long double eigen_residual(const ExpTypeSymbol& phi, cld lambda, std::size_t N, long double R);

}  // namespace ergolin
