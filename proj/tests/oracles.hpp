#pragma once
// Independent reference computations. Nothing here calls into the library's arithmetic.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

namespace oracle {

namespace mp = boost::multiprecision;
using HP = mp::number<mp::cpp_bin_float<320, mp::digit_base_2>>;

inline HP golden() { return (mp::sqrt(HP(5)) - 1) / 2; }
inline HP sqrt2m1() { return mp::sqrt(HP(2)) - 1; }

inline HP frac(const HP& x) { return x - mp::floor(x); }

inline HP from_u128(unsigned __int128 x) {
  HP v = 0;
  for (int s = 96; s >= 0; s -= 32) v = v * HP(4294967296.0) + HP(static_cast<double>(static_cast<std::uint32_t>(x >> s)));
  return mp::ldexp(v, -128);
}

// Torus distance of two reals.
inline HP torus_dist(const HP& a, const HP& b) {
  HP d = frac(a - b);
  return d < HP(0.5) ? d : HP(1) - d;
}

// Plain Gauss map iteration in 320-bit floats; returns the first k quotients.
inline std::vector<long long> gauss_quotients(HP x, int k) {
  std::vector<long long> a;
  for (int i = 0; i < k; ++i) {
    HP inv = 1 / x;
    HP fl = mp::floor(inv);
    a.push_back(fl.convert_to<long long>());
    x = inv - fl;
  }
  return a;
}

// Star discrepancy by brute force over the candidate anchors t = x_i and t -> x_i^+.
inline double star_discrepancy_bruteforce(const std::vector<double>& pts) {
  const double n = static_cast<double>(pts.size());
  double best = 0.0;
  std::vector<double> anchors = pts;
  anchors.push_back(1.0);
  for (double t : anchors) {
    double below = 0, at_or_below = 0;
    for (double x : pts) {
      if (x < t) ++below;
      if (x <= t) ++at_or_below;
    }
    best = std::max(best, std::abs(below / n - t));
    best = std::max(best, std::abs(at_or_below / n - t));
  }
  return best;
}

// Trapezoid quadrature of int_0^1 f(t) e^{-2 pi i r t} dt.
template <class F>
std::complex<double> fourier_trapezoid(F f, long long r, int nodes) {
  std::complex<double> acc = 0.0;
  for (int j = 0; j < nodes; ++j) {
    double t = (j + 0.5) / nodes;
    acc += f(t) * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(r) * t);
  }
  return acc / static_cast<double>(nodes);
}

// |[a, a+la) ∩ [c, c+lc)| on the circle, arcs of length <= 1 with a, c in [0,1).
inline double arc_overlap(double a, double la, double c, double lc) {
  double total = 0.0;
  for (int k = -1; k <= 1; ++k) total += std::max(0.0, std::min(a + la, c + lc + k) - std::max(a, c + k));
  return total;
}

// ||S_n f||_2^2 = sum_{|d|<n} (n-|d|) C(d alpha) with C(t) = int f(x) f(x+t) dx, for a step
// function given by left endpoints `starts` (starting at 0) and `values`.
inline double birkhoff_l2_squared(const std::vector<double>& starts, const std::vector<double>& values,
                                  const HP& alpha, long long n) {
  const std::size_t m = starts.size();
  auto corr = [&](double t) {
    double c = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double li = (i + 1 < m ? starts[i + 1] : 1.0) - starts[i];
      for (std::size_t j = 0; j < m; ++j) {
        double lj = (j + 1 < m ? starts[j + 1] : 1.0) - starts[j];
        double cj = starts[j] - t;
        cj -= std::floor(cj);
        c += values[i] * values[j] * arc_overlap(starts[i], li, cj, lj);
      }
    }
    return c;
  };
  double total = n * corr(0.0);
  for (long long d = 1; d < n; ++d) total += 2.0 * (n - d) * corr(frac(HP(d) * alpha).convert_to<double>());
  return total;
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace oracle
