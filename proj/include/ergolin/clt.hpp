#pragma once

#include "ergolin/birkhoff.hpp"
#include "ergolin/contfrac.hpp"
#include "ergolin/step_function.hpp"
#include "ergolin/torus.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace ergolin {

enum class Normalization {
  SqrtN,   // S_n / sqrt(n)
  L2Norm,  // S_n / ||S_n||_2 (rotations: Parseval; doubling: exact lag correlations)
  Scale,   // S_n / scale, scale supplied (e.g. sqrt(k) along a subsequence)
};
const char* normalization_name(Normalization n);

struct CltExperiment {
  Transformation transformation = Transformation::doubling();
  StepFunction f;
  Normalization normalization = Normalization::SqrtN;
  double scale = 1.0;  // used by Normalization::Scale
  std::uint64_t n = 1;
  std::uint64_t samples = 1000;
  std::uint64_t seed = 0;
  std::int64_t R = 100000;  // Fourier truncation for the L2 norm of rotations
};

struct Histogram {
  std::vector<double> edges;  // bins + 1 edges
  std::vector<std::uint64_t> counts;
  std::uint64_t below = 0, above = 0;
};

Histogram make_histogram(const std::vector<double>& values, double lo, double hi, std::size_t bins);

// Two-sided Kolmogorov-Smirnov distance between the empirical law of `values` and N(0,1).
double ks_normal(std::vector<double> values);

struct DistributionReport {
  double mean = 0.0;
  double variance = 0.0;  // unbiased sample variance
  std::optional<double> ks;  // reported only for samples >= 1000
  double scale = 1.0;     // the divisor actually used
  bool degenerate = false;  // zero normalising scale or constant sample
  std::uint64_t n = 0, samples = 0, seed = 0;
  std::vector<double> values;  // normalised sums, indexed by sample
  Histogram histogram;
};

DistributionReport empirical_distribution(const CltExperiment& exp);

// KS distance of `samples` draws from N(0,1) itself (harness self-calibration).
double ks_reference(std::uint64_t samples, std::uint64_t seed);

// int f . f o tau^k dm for the doubling map, exact up to double rounding of breakpoints.
double doubling_correlation(const StepFunction& f, unsigned k);
// ||f||^2 + 2 sum_{k=1}^{max_lag} int f . f o tau^k; max_lag <= 24.
double kac_sigma2(const StepFunction& f, unsigned max_lag);
// ||S_n f||_2^2 under the doubling map from the exact correlations (n - 1 <= 24 or tail dropped).
double doubling_l2_squared(const StepFunction& f, std::uint64_t n, unsigned max_lag = 24);

struct RangeGrowthReport {
  std::vector<std::uint64_t> checkpoints;
  std::vector<double> runmax, runmin;
  bool plateau = false;  // extrema unchanged over the last two decades of n
};

RangeGrowthReport range_growth_probe(const Transformation& t, const StepFunction& f, const Omega& omega,
                                     const std::vector<std::uint64_t>& checkpoints);

struct WSetReport {
  std::uint64_t N = 0;
  std::int64_t R = 0;
  std::vector<double> c_grid;
  std::vector<double> density;       // with m(n) from the convergent denominators
  std::vector<double> density_logn;  // m(n) replaced by log n
  std::vector<double> l2;            // ||S_n f||_2 for n = 1..N
  std::vector<std::size_t> m;        // m(n)
};

// Fraction of n <= N with ||S_n f||_2 >= c (log m(n))^{-1/2} m(n)^{1/2}; log is floored at 1.
WSetReport w_set_report(const Transformation& rotation, const StepFunction& f, const ContinuedFraction& cf,
                        std::uint64_t N, const std::vector<double>& c_grid, std::int64_t R = 1 << 14);

struct LnScaleReport {
  ScaleSelection selection;
  std::size_t n = 0;
  BigInt L = 0;                   // L_n
  double l2 = 0.0;                // ||S_{L_n} f||_2
  double variance_equivalent = 0.0;  // sum_k sum_{0<|r|<=R} |gamma_{r q_{t_k}}|^2 / r^2
  std::vector<double> gamma_sq;   // |gamma_{q_{t_k}}|^2 per k
  std::optional<double> gamma_lower_bound;  // for rational b = p'/q'
  std::optional<DistributionReport> distribution;  // absent when the hypothesis is unmet
};

LnScaleReport ln_scale_experiment(const Transformation& rotation, const StepFunction& f, const ContinuedFraction& cf,
                                  double beta, std::size_t n, std::uint64_t samples, std::uint64_t seed,
                                  std::int64_t R = 1000);

}  // namespace ergolin
