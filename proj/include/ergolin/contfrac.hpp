#pragma once

#include "ergolin/numeric.hpp"
#include "ergolin/step_function.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ergolin {

struct ContinuedFraction {
  Real256 alpha;
  std::vector<BigInt> a;    // a[0] = a_1, a[1] = a_2, ...
  bool exhausted = false;   // stopped early: the 256-bit enclosure no longer fixes the next digit
  bool terminated = false;  // the input is rational and its expansion ended

  std::size_t depth() const { return a.size(); }
  // a_j for j >= 1
  const BigInt& quotient(std::size_t j) const { return a.at(j - 1); }
};

// Expands alpha in (0,1); digits are emitted only while both ends of the enclosure agree.
ContinuedFraction cf_expand(const Real256& alpha, std::size_t depth);

Real256 golden_alpha();      // (sqrt 5 - 1)/2
Real256 sqrt2_minus_one();
// Value of [0; a_1, ..., a_k] rounded to 256 bits.
Real256 alpha_from_quotients(const std::vector<BigInt>& a);
// [0; 1, 2, 4, 8, ...] truncated where the 256-bit value stops changing.
Real256 powers_of_two_alpha();

// Accepts golden, sqrt2-1, pow2, a literal "[0;a1,a2,...]", "p/q" or a decimal.
Real256 parse_alpha(const std::string& text);

struct Convergents {
  std::vector<BigInt> p;  // p[0..depth]
  std::vector<BigInt> q;
};

Convergents convergents(const ContinuedFraction& cf);

// Signed q_k alpha - p_k, scaled by 2^256.
BigInt theta_scaled(const ContinuedFraction& cf, const Convergents& cv, std::size_t k);

struct OstrowskiExpansion {
  std::vector<BigInt> digits;       // b_n paired with q_n
  double residual = 0.0;            // |b - sum b_n theta_n| with b taken in [0,1)
  bool partial = false;             // some step found no admissible digit
  bool vanishing_regime = false;    // |b_n|/a_{n+1} -> 0 and ||q_k b|| -> 0 on the tail
  std::vector<double> qk_b_distance;  // ||q_k b|| for k = 0..depth-1
};

OstrowskiExpansion ostrowski(const Real256& b, const ContinuedFraction& cf);

double star_discrepancy(std::vector<double> points);
// Supremum over arcs of the circle (extreme discrepancy).
double circle_discrepancy(std::vector<double> points);
std::vector<double> qk_b_points(const ContinuedFraction& cf, const Real256& b, std::size_t K);
double discrepancy_qk_b(const ContinuedFraction& cf, const Real256& b, std::size_t K);

struct HypothesisReport {
  // a_n <= A n^p
  std::vector<double> p_values;
  std::vector<double> minimal_A;
  // fraction of 0 <= j <= N with a_{j+1} |gamma_{q_j}| >= eta
  std::vector<double> eta_grid;
  std::vector<double> count_fraction;
  std::vector<double> gamma_qj;  // |gamma_{q_j}| for j = 0..N
  // running averages of sum_{0<|r|<=R} |gamma_{r q_k}|^2 / r^2
  std::vector<double> partial_averages;
  std::size_t N = 0;
  std::int64_t R = 0;
};

HypothesisReport hypothesis_checks(const ContinuedFraction& cf, const StepFunction& f, std::size_t N,
                                   const std::vector<double>& eta_grid, std::int64_t R);

// Earliest strictly increasing t_1 < t_2 < ... with a_{t_k+1} >= k^beta.
struct ScaleSelection {
  std::vector<std::size_t> t;
  std::vector<BigInt> L;      // L[0] = 0, L[n] = sum_{k<=n} q_{t_k}
  double beta = 1.5;
  bool hypothesis_met = false;  // `count` indices were found
};

ScaleSelection select_scales(const ContinuedFraction& cf, const Convergents& cv, double beta,
                             std::size_t count);

}  // namespace ergolin
