#include "ergolin/clt.hpp"

#include "ergolin/error.hpp"
#include "ergolin/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace ergolin {

namespace mp = boost::multiprecision;

namespace {
double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

struct ScaledPoint {
  double whole;  // floor(2^k a)
  double frac;   // {2^k a}
};

ScaledPoint scale_dyadic(const Fixed256& a, bool is_one, unsigned k) {
  if (is_one) return {std::ldexp(1.0, static_cast<int>(k)), 0.0};
  if (k == 0) return {0.0, fixed256_to_unit(a)};
  Fixed256 whole = a >> (256 - k);
  return {static_cast<double>(static_cast<std::uint64_t>(whole)), fixed256_to_unit(a << k)};
}
}  // namespace

const char* normalization_name(Normalization n) {
  switch (n) {
    case Normalization::SqrtN: return "sqrt-n";
    case Normalization::L2Norm: return "l2";
    case Normalization::Scale: return "scale";
  }
  return "?";
}

Histogram make_histogram(const std::vector<double>& values, double lo, double hi, std::size_t bins) {
  require(bins >= 1 && hi > lo, ErrorKind::Precondition, "histogram needs bins >= 1 and hi > lo");
  Histogram h;
  h.counts.assign(bins, 0);
  for (std::size_t i = 0; i <= bins; ++i) h.edges.push_back(lo + (hi - lo) * static_cast<double>(i) / bins);
  for (double v : values) {
    if (v < lo) {
      ++h.below;
    } else if (v >= hi) {
      ++h.above;
    } else {
      auto b = static_cast<std::size_t>((v - lo) / (hi - lo) * static_cast<double>(bins));
      ++h.counts[std::min(b, bins - 1)];
    }
  }
  return h;
}

double ks_normal(std::vector<double> values) {
  require(!values.empty(), ErrorKind::Precondition, "KS statistic of an empty sample");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double F = normal_cdf(values[i]);
    d = std::max({d, (i + 1) / n - F, F - i / n});
  }
  return d;
}

double ks_reference(std::uint64_t samples, std::uint64_t seed) {
  std::mt19937_64 gen(splitmix64(seed));
  std::normal_distribution<double> normal;
  std::vector<double> v(samples);
  for (auto& x : v) x = normal(gen);
  return ks_normal(std::move(v));
}

DistributionReport empirical_distribution(const CltExperiment& exp) {
  require(exp.n >= 1 && exp.samples >= 1, ErrorKind::Config, "need n >= 1 and samples >= 1");
  const Transformation& t = exp.transformation;
  DistributionReport rep;
  rep.n = exp.n;
  rep.samples = exp.samples;
  rep.seed = exp.seed;
  switch (exp.normalization) {
    case Normalization::SqrtN: rep.scale = std::sqrt(static_cast<double>(exp.n)); break;
    case Normalization::Scale: rep.scale = exp.scale; break;
    case Normalization::L2Norm:
      rep.scale = t.is_rotation() ? std::sqrt(variance_exact(t, exp.f, exp.n, exp.R).value)
                                  : std::sqrt(doubling_l2_squared(exp.f, exp.n));
      break;
  }
  if (!(rep.scale > 0.0) || !std::isfinite(rep.scale)) {
    rep.degenerate = true;
    rep.scale = 1.0;
  }
  rep.values.assign(exp.samples, 0.0);
  parallel_for(exp.samples, [&](std::size_t i) {
    Omega w = random_omega(t, derive_seed(exp.seed, i), exp.n);
    rep.values[i] = birkhoff_sum(t, exp.f, w, exp.n) / rep.scale;
  });
  double mean = 0.0;
  for (double v : rep.values) mean += v;
  mean /= static_cast<double>(exp.samples);
  double ss = 0.0;
  for (double v : rep.values) ss += (v - mean) * (v - mean);
  rep.mean = mean;
  rep.variance = exp.samples > 1 ? ss / static_cast<double>(exp.samples - 1) : 0.0;
  if (rep.variance == 0.0) rep.degenerate = true;
  if (exp.samples >= 1000 && !rep.degenerate) rep.ks = ks_normal(rep.values);
  rep.histogram = make_histogram(rep.values, -4.0, 4.0, 40);
  return rep;
}

double doubling_correlation(const StepFunction& f, unsigned k) {
  require(k <= 24, ErrorKind::Size, "lag " + std::to_string(k) + " exceeds 24 (piece explosion)");
  const auto& br = f.breakpoints();
  const auto& v = f.values();
  const std::size_t m = v.size();
  std::vector<double> lo(m), len(m);
  for (std::size_t l = 0; l < m; ++l) {
    lo[l] = br[l].to_double();
    len[l] = (l + 1 < m ? br[l + 1].to_double() : 1.0) - lo[l];
  }
  // |{x in [a, a') : {2^k x} in piece l}| = 2^-k (F_l(2^k a') - F_l(2^k a))
  auto F = [&](const ScaledPoint& u, std::size_t l) {
    return u.whole * len[l] + std::clamp(u.frac - lo[l], 0.0, len[l]);
  };
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const ScaledPoint a = scale_dyadic(br[i].value, false, k);
    const ScaledPoint b = i + 1 < m ? scale_dyadic(br[i + 1].value, false, k) : scale_dyadic(0, true, k);
    for (std::size_t l = 0; l < m; ++l) total += v[i] * v[l] * (F(b, l) - F(a, l));
  }
  return std::ldexp(total, -static_cast<int>(k));
}

double kac_sigma2(const StepFunction& f, unsigned max_lag) {
  require(max_lag <= 24, ErrorKind::Size, "max_lag > 24 rejected (piece explosion)");
  double s = doubling_correlation(f, 0);
  for (unsigned k = 1; k <= max_lag; ++k) s += 2.0 * doubling_correlation(f, k);
  return s;
}

double doubling_l2_squared(const StepFunction& f, std::uint64_t n, unsigned max_lag) {
  max_lag = std::min<unsigned>(std::min<unsigned>(max_lag, 24), n > 0 ? static_cast<unsigned>(std::min<std::uint64_t>(n - 1, 24)) : 0);
  const double dn = static_cast<double>(n);
  double s = dn * doubling_correlation(f, 0);
  for (unsigned k = 1; k <= max_lag; ++k) s += 2.0 * (dn - k) * doubling_correlation(f, k);
  return s;
}

RangeGrowthReport range_growth_probe(const Transformation& t, const StepFunction& f, const Omega& omega,
                                     const std::vector<std::uint64_t>& checkpoints) {
  require(!checkpoints.empty(), ErrorKind::Config, "range growth needs checkpoints");
  for (std::size_t i = 0; i < checkpoints.size(); ++i)
    require(checkpoints[i] >= 1 && (i == 0 || checkpoints[i] > checkpoints[i - 1]), ErrorKind::Config,
            "checkpoints must be positive and increasing");
  RangeGrowthReport rep;
  rep.checkpoints = checkpoints;
  OrbitCursor cur(t, omega);
  const std::uint64_t last = checkpoints.back();
  require(cur.capacity() >= last, ErrorKind::Horizon, "omega too short for " + std::to_string(last) + " steps");
  std::vector<std::uint64_t> hits(f.pieces(), 0);
  double hi = -INFINITY, lo = INFINITY;
  std::size_t next = 0;
  for (std::uint64_t n = 1; n <= last; ++n) {
    if (n > 1) cur.advance();
    ++hits[f.piece_of(cur.current())];
    double s = 0.0;
    for (std::size_t k = 0; k < hits.size(); ++k) s += f.values()[k] * static_cast<double>(hits[k]);
    hi = std::max(hi, s);
    lo = std::min(lo, s);
    if (n == checkpoints[next]) {
      rep.runmax.push_back(hi);
      rep.runmin.push_back(lo);
      ++next;
    }
  }
  // plateau: range at the last checkpoint equals the range at the latest checkpoint <= last/100
  for (std::size_t i = checkpoints.size(); i-- > 0;) {
    if (checkpoints[i] * 100 <= last) {
      const double early = rep.runmax[i] - rep.runmin[i], late = rep.runmax.back() - rep.runmin.back();
      rep.plateau = late - early <= 1e-3 * std::max(1.0, late);
      break;
    }
  }
  return rep;
}

WSetReport w_set_report(const Transformation& rotation, const StepFunction& f, const ContinuedFraction& cf,
                        std::uint64_t N, const std::vector<double>& c_grid, std::int64_t R) {
  require(rotation.is_rotation(), ErrorKind::Precondition, "W-set report needs a rotation");
  require(N >= 1, ErrorKind::Config, "W-set report needs N >= 1");
  const Convergents cv = convergents(cf);
  require(cv.q.back() > BigInt(N), ErrorKind::Precision, "not enough convergents to place n <= N");
  WSetReport rep;
  rep.N = N;
  rep.R = R;
  rep.c_grid = c_grid;
  auto var = variance_curve(rotation, f, N, R);
  rep.l2.resize(N);
  rep.m.resize(N);
  std::size_t k = 0;
  for (std::uint64_t n = 1; n <= N; ++n) {
    while (k + 1 < cv.q.size() && cv.q[k + 1] <= BigInt(n)) ++k;
    rep.m[n - 1] = k;
    rep.l2[n - 1] = std::sqrt(std::max(0.0, var[n - 1]));
  }
  for (double c : c_grid) {
    std::uint64_t hit = 0, hit_log = 0;
    for (std::uint64_t n = 1; n <= N; ++n) {
      const double m = static_cast<double>(std::max<std::size_t>(rep.m[n - 1], 1));
      const double ln = std::log(static_cast<double>(n));
      if (rep.l2[n - 1] >= c * std::sqrt(m / std::log(std::max(m, std::numbers::e)))) ++hit;
      if (rep.l2[n - 1] >= c * std::sqrt(ln / std::log(std::max(ln, std::numbers::e)))) ++hit_log;
    }
    rep.density.push_back(static_cast<double>(hit) / static_cast<double>(N));
    rep.density_logn.push_back(static_cast<double>(hit_log) / static_cast<double>(N));
  }
  return rep;
}

LnScaleReport ln_scale_experiment(const Transformation& rotation, const StepFunction& f, const ContinuedFraction& cf,
                                  double beta, std::size_t n, std::uint64_t samples, std::uint64_t seed,
                                  std::int64_t R) {
  require(rotation.is_rotation(), ErrorKind::Precondition, "L_n scale experiment needs a rotation");
  require(beta > 1.0, ErrorKind::Config, "beta must exceed 1");
  require(n >= 1, ErrorKind::Config, "L_n scale experiment needs n >= 1");
  const Convergents cv = convergents(cf);
  LnScaleReport rep;
  rep.n = n;
  rep.selection = select_scales(cf, cv, beta, n);
  if (!rep.selection.hypothesis_met) return rep;
  rep.L = rep.selection.L[n];
  require(rep.L < (BigInt(1) << 40), ErrorKind::Size, "L_n = " + rep.L.str() + " is too long to simulate");
  for (std::size_t k = 0; k < n; ++k) {
    const BigInt& q = cv.q[rep.selection.t[k]];
    const double g = std::abs(f.fourier(q)) * q.convert_to<double>();
    rep.gamma_sq.push_back(g * g);
    for (std::int64_t r = 1; r <= R; ++r) {
      const BigInt rq = BigInt(r) * q;
      const double gr = std::abs(f.fourier(rq)) * rq.convert_to<double>();
      rep.variance_equivalent += 2.0 * gr * gr / (static_cast<double>(r) * static_cast<double>(r));
    }
  }
  if (const auto& b = f.favourite_b(); b && b->exact) {
    const BigInt p = mp::numerator(*b->exact), q = mp::denominator(*b->exact);
    const double bd = static_cast<double>(*b->exact);
    double lb = INFINITY;
    for (BigInt j = 1; j < q; ++j) {
      const double s = std::sin(std::numbers::pi * static_cast<double>(Rational(frac(Rational(j * p, q)))));
      lb = std::min(lb, s * s / ((1 - bd) * (1 - bd) * std::numbers::pi * std::numbers::pi));
    }
    if (std::isfinite(lb)) rep.gamma_lower_bound = lb;
  }
  const auto L = rep.L.convert_to<std::uint64_t>();
  rep.l2 = std::sqrt(variance_exact(rotation, f, L, 100000).value);
  CltExperiment exp;
  exp.transformation = rotation;
  exp.f = f;
  exp.normalization = Normalization::Scale;
  exp.scale = rep.l2;
  exp.n = L;
  exp.samples = samples;
  exp.seed = seed;
  rep.distribution = empirical_distribution(exp);
  return rep;
}

}  // namespace ergolin
