#pragma once

#include "ergolin/numeric.hpp"
#include "ergolin/torus.hpp"

#include <complex>
#include <optional>
#include <vector>

namespace ergolin {

using cdouble = std::complex<double>;

// Piecewise-constant function on [0,1): value values[i] on [breakpoints[i], breakpoints[i+1]).
// breakpoints[0] is always 0; the last piece runs to 1.
class StepFunction {
 public:
  StepFunction();  // f = 0
  StepFunction(std::vector<Real256> breakpoints, std::vector<double> values,
               std::optional<std::vector<Rational>> exact_values = std::nullopt);

  std::size_t pieces() const { return values_.size(); }
  const std::vector<Real256>& breakpoints() const { return breaks_; }
  const std::vector<TorusPoint>& breakpoints_fixed() const { return breaks_fixed_; }
  const std::vector<double>& values() const { return values_; }
  const std::optional<std::vector<Rational>>& exact_values() const { return exact_values_; }
  bool is_exact() const;  // exact breakpoints and values

  std::size_t piece_of(TorusPoint x) const;
  double operator()(TorusPoint x) const { return values_[piece_of(x)]; }
  // Exact evaluation at a rational point; requires is_exact().
  Rational eval_exact(const Rational& x) const;
  std::size_t piece_of_exact(const Rational& x) const;

  double integral() const;
  double l2_norm_squared() const;
  // Jump f(x+) - f(x-) at breakpoint i (breakpoint 0 compares against the last piece).
  double jump(std::size_t i) const { return jumps_[i]; }
  const std::vector<double>& jumps() const { return jumps_; }
  double total_variation() const { return variation_; }

  // c_r = integral of f(t) e^{-2 pi i r t} dt, exact piecewise; r != 0 reduced modulo 2^256.
  cdouble fourier(const BigInt& r) const;
  cdouble fourier(std::int64_t r) const { return fourier(BigInt(r)); }

  // Set when built by favourite_f: the split point b.
  const std::optional<Real256>& favourite_b() const { return favourite_b_; }
  void set_favourite_b(const Real256& b) { favourite_b_ = b; }

 private:
  std::vector<Real256> breaks_;
  std::vector<TorusPoint> breaks_fixed_;
  std::vector<double> values_;
  std::optional<std::vector<Rational>> exact_values_;
  std::vector<double> jumps_;
  double variation_ = 0.0;
  std::optional<Real256> favourite_b_;
};

// f = 1_[0,b) - (b/(1-b)) 1_[b,1).
StepFunction favourite_f(const Real256& b);

// Closed form c_r for favourite_f(b), using only frac(r*b).
cdouble favourite_fourier(const Real256& b, const BigInt& r);

struct FourierData {
  std::int64_t R = 0;
  std::vector<cdouble> c;      // c[r-1] = c_r for r = 1..R; c_{-r} = conj(c_r) for real f
  std::vector<cdouble> gamma;  // gamma_r = r c_r
  double gamma_bound = 0.0;    // V(f) / (2 pi)
};

FourierData fourier_coeffs(const StepFunction& f, std::int64_t R);

// frac(r * x) for a 256-bit point, as a double in [0,1).
double frac_product(const BigInt& r, const Real256& x);

}  // namespace ergolin
