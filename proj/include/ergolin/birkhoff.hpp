#pragma once

#include "ergolin/contfrac.hpp"
#include "ergolin/step_function.hpp"
#include "ergolin/torus.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ergolin {

// Birkhoff sums S_n = sum_{i<n} f(tau^i omega) kept as exact per-piece hit counters.
class BirkhoffSeries {
 public:
  BirkhoffSeries(const StepFunction& f, std::uint64_t N);

  std::uint64_t length() const { return N_; }
  std::size_t pieces() const { return pieces_; }
  // Hits of piece k among the first n points.
  std::uint64_t count(std::uint64_t n, std::size_t piece) const { return counts_[n * pieces_ + piece]; }
  std::uint64_t a1(std::uint64_t n) const { return count(n, 0); }
  std::uint64_t a2(std::uint64_t n) const { return n - count(n, 0); }

  double sum(std::uint64_t n) const;  // from the counters
  std::optional<Rational> sum_exact(std::uint64_t n) const;
  double accumulated(std::uint64_t n) const { return accumulated_[n]; }  // running float sum
  double runmax(std::uint64_t n) const { return runmax_[n]; }           // max over 1 <= i <= n
  double runmin(std::uint64_t n) const { return runmin_[n]; }

 private:
  friend BirkhoffSeries birkhoff_sums(const Transformation&, const StepFunction&, const Omega&, std::uint64_t);
  std::uint64_t N_;
  std::size_t pieces_;
  std::vector<double> values_;
  std::optional<std::vector<Rational>> exact_values_;
  std::vector<std::uint64_t> counts_;  // (N+1) x pieces
  std::vector<double> accumulated_, runmax_, runmin_;
};

BirkhoffSeries birkhoff_sums(const Transformation& t, const StepFunction& f, const Omega& omega, std::uint64_t N);

// Plain S_n for one omega without storing the series.
double birkhoff_sum(const Transformation& t, const StepFunction& f, const Omega& omega, std::uint64_t n);

struct DenjoyKoksmaReport {
  std::vector<BigInt> q;       // denominators checked (q_k <= N)
  std::vector<double> sums;    // S_{q_k}
  double bound = 0.0;          // V(f)
  bool holds = true;
};

DenjoyKoksmaReport denjoy_koksma(const BirkhoffSeries& s, const StepFunction& f, const Convergents& cv);

enum class OrenVerdict { BoundedPredicted, UnboundedPredicted, Inconclusive };
const char* oren_verdict_name(OrenVerdict v);

struct OrenReport {
  struct Coset {
    std::vector<std::size_t> jumps;   // indices of breakpoints in the coset
    std::vector<std::int64_t> shift;  // x_j = x_root + shift_j * alpha (mod 1)
    double delta_sum = 0.0;
  };
  OrenVerdict verdict = OrenVerdict::Inconclusive;
  std::vector<Coset> cosets;
  std::vector<double> jump_points;
  std::vector<double> jump_sizes;
  std::int64_t K = 0;
  double tol = 0.0;
  double closest_miss = 1.0;  // smallest torus distance outside tol among searched shifts
  std::string note;
};

OrenReport oren_analysis(const StepFunction& f, const Transformation& rotation, std::int64_t K = 10000,
                         double tol = 0x1p-64);

struct VarianceReport {
  double value = 0.0;
  std::int64_t R = 0;
  std::vector<std::int64_t> excluded;  // near-resonant frequencies
  double tail_estimate = 0.0;
};

// ||S_n f||_2^2 by Parseval, truncated at |r| <= R.
VarianceReport variance_exact(const Transformation& rotation, const StepFunction& f, std::uint64_t n, std::int64_t R);
// Same for n = 1..N (entry n-1), sharing the Fourier data.
std::vector<double> variance_curve(const Transformation& rotation, const StepFunction& f, std::uint64_t N,
                                   std::int64_t R);

struct CoboundaryResult {
  bool solved = false;
  std::optional<StepFunction> h;  // exact, with h - h o tau = f
  Rational witness_x = 0;         // where the period sum fails
  Rational witness_sum = 0;
};

CoboundaryResult rational_coboundary(const RationalAngle& alpha, const StepFunction& f);

struct ObstructionReport {
  std::int64_t q = 0;
  int K = 0;
  std::vector<cdouble> c_f;  // c_{q 2^j}(f), j = 0..K
  std::vector<cdouble> c_g;  // partial sums c_{q 2^j}(g)
  double bound = 0.0;        // -sin^2(pi q b) / (q pi (1-b))
  bool below_bound = true;
  bool no_l2_solution = false;
};

ObstructionReport doubling_coboundary_obstruction(const Real256& b, std::int64_t q, int K);

}  // namespace ergolin
