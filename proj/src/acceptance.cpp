#include "ergolin/acceptance.hpp"

#include "ergolin/birkhoff.hpp"
#include "ergolin/clt.hpp"
#include "ergolin/contfrac.hpp"
#include "ergolin/entire.hpp"
#include "ergolin/error.hpp"
#include "ergolin/hardy.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace ergolin {

namespace {

using std::numbers::pi;

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void need(bool cond, const std::string& what) {
    if (!cond) {
      if (!ok) detail << "; ";
      ok = false;
      detail << "FAILED " << what;
    }
  }
};

Real256 multiple_of(const Real256& x, unsigned k) {
  Real256 y;
  y.value = x.value * Fixed256(k);
  return y;
}

Transformation golden() { return Transformation::rotation(golden_alpha(), "golden"); }

Omega rotation_omega(std::uint64_t seed, std::uint64_t i) { return random_omega(golden(), derive_seed(seed, i), 0); }
Omega doubling_omega(std::uint64_t seed, std::uint64_t i, std::size_t horizon) {
  return random_omega(Transformation::doubling(), derive_seed(seed, i), horizon);
}

void c1_denjoy_koksma(std::uint64_t seed, Outcome& o) {
  auto t = golden();
  auto f = favourite_f(Real256::from_rational(Rational(1, 2)));
  auto cv = convergents(cf_expand(golden_alpha(), 40));
  double worst = 0;
  std::size_t checked = 0;
  for (std::uint64_t i = 0; i < 16; ++i) {
    auto s = birkhoff_sums(t, f, rotation_omega(seed, i), 1000000);
    auto dk = denjoy_koksma(s, f, cv);
    for (double v : dk.sums) worst = std::max(worst, std::abs(v));
    checked += dk.sums.size();
    o.need(dk.bound == 4.0, "variation is 4");
  }
  o.need(worst <= 4.0, "|S_qk| <= 4");
  o.detail << "max |S_qk| = " << worst << " over " << checked << " (omega, q_k) pairs";
}

void c2_oren(Outcome& o) {
  auto t = golden();
  const Omega om = omega_point(TorusPoint::from_double(0.3));
  const std::vector<std::uint64_t> cps{1000, 10000, 100000, 1000000};

  auto f3 = favourite_f(multiple_of(golden_alpha(), 3));
  auto oren3 = oren_analysis(f3, t);
  auto g3 = range_growth_probe(t, f3, om, cps);
  const double r5 = g3.runmax[2] - g3.runmin[2], r6 = g3.runmax[3] - g3.runmin[3];
  o.need(oren3.verdict == OrenVerdict::BoundedPredicted, "b = 3 alpha predicted bounded");
  o.need(r6 - r5 <= 1e-3 * std::max(1.0, r6), "range constant on [1e5, 1e6]");

  auto fh = favourite_f(Real256::from_rational(Rational(1, 2)));
  auto orenh = oren_analysis(fh, t);
  auto gh = range_growth_probe(t, fh, om, cps);
  const double h3 = gh.runmax[0] - gh.runmin[0], h6 = gh.runmax[3] - gh.runmin[3];
  o.need(orenh.verdict == OrenVerdict::UnboundedPredicted, "b = 1/2 predicted unbounded");
  o.need(h6 >= 2 * h3, "range(1e6) >= 2 range(1e3)");
  o.detail << "3alpha: range(1e5) = " << r5 << ", range(1e6) = " << r6 << "; 1/2: range(1e3) = " << h3
           << ", range(1e6) = " << h6;
}

void c3_rational_coboundary(Outcome& o) {
  const Rational alpha(1, 5);
  auto f = favourite_f(Real256::from_rational(Rational(2, 5)));
  auto res = rational_coboundary(RationalAngle{1, 5}, f);
  o.need(res.solved && res.h.has_value(), "h constructed");
  if (!res.solved || !res.h) return;
  const StepFunction& h = *res.h;
  std::size_t mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    Rational x(i, 1000);
    if (f.eval_exact(x) != h.eval_exact(x) - h.eval_exact(x + alpha)) ++mismatches;
  }
  o.need(mismatches == 0, "f = h - h o tau on the grid");
  const auto& hv = *h.exact_values();
  const Rational spread = *std::max_element(hv.begin(), hv.end()) - *std::min_element(hv.begin(), hv.end());
  Rational worst = 0;
  for (int i = 0; i < 1000; i += 7) {
    Rational x(i, 1000), s = 0;
    for (int n = 1; n <= 100; ++n) {
      s += f.eval_exact(x + alpha * (n - 1));
      worst = std::max(worst, s < 0 ? Rational(-s) : s);
    }
  }
  o.need(worst <= spread, "|S_n| <= max h - min h");
  o.detail << "grid mismatches " << mismatches << ", max |S_n| = " << worst << " <= " << spread;
}

void c4_kac(std::uint64_t seed, Outcome& o) {
  CltExperiment e;
  e.f = favourite_f(Real256::from_rational(Rational(1, 2)));
  e.n = 4096;
  e.samples = 20000;
  e.seed = seed;
  auto rep = empirical_distribution(e);
  o.need(rep.variance >= 0.95 && rep.variance <= 1.05, "variance in [0.95, 1.05]");
  o.need(rep.ks && *rep.ks <= 0.02, "KS <= 0.02");
  o.detail << "variance " << rep.variance << ", KS " << (rep.ks ? *rep.ks : -1.0);
}

void c5_obstruction(Outcome& o) {
  auto rep = doubling_coboundary_obstruction(Real256::from_rational(Rational(1, 2)), 3, 12);
  const double bound = -2.0 / (3.0 * pi);
  double worst = -1e300;
  for (const auto& c : rep.c_g) worst = std::max(worst, c.imag());
  o.need(rep.c_g.size() == 13, "k = 0..12 evaluated");
  o.need(worst <= bound + 1e-12, "Im c_{3 2^k}(g) <= -2/(3 pi)");
  o.detail << "max Im = " << worst << ", bound " << bound;
}

void c6_eigen(Outcome& o) {
  const std::size_t N = 512;
  double worst = 0;
  for (auto phi : {AnalyticSymbol::polynomial({0.0, 2.0}), AnalyticSymbol::polynomial({1.0, 0.5}),
                   AnalyticSymbol::polynomial({1.5, 0.25})}) {
    for (int j = 0; j < 16; ++j) {
      cdouble lam = std::polar(0.8 * (j + 1) / 16.0, 2 * pi * j * 0.382);
      auto k = kernel(lam, N);
      auto y = adjoint_apply(phi, k);
      const cdouble ev = std::conj(phi(lam));
      double res = 0;
      for (std::size_t n = 0; n + phi.degree() < N; ++n) res += std::norm(y[n] - ev * k[n]);
      worst = std::max(worst, std::sqrt(res));
    }
  }
  o.need(worst <= 1e-9, "eigen residual <= 1e-9");
  o.detail << "max residual " << worst;
}

void c7_product(std::uint64_t seed, Outcome& o) {
  auto spec = builtin_spec("mixing-demo");
  std::mt19937_64 gen(derive_seed(seed, 7));
  std::normal_distribution<double> nd;
  cvec x(256);
  for (auto& c : x) c = {nd(gen), nd(gen)};
  try {
    auto r = product_apply(spec, doubling_omega(seed, 7, 200), 200, x);
    o.need(r.rel_diff <= 1e-8, "relative difference <= 1e-8");
    o.detail << "a1 = " << r.a1 << ", a2 = " << r.a2 << ", relative difference " << r.rel_diff;
  } catch (const Error& e) {
    o.need(false, e.what());
  }
}

void c8_classifier(std::uint64_t seed, Outcome& o) {
  auto mix = classify(builtin_spec("mixing-demo"));
  o.need(mix.verdict == HardyVerdict::MixingByEigenvalues, "mixing-demo verdict");
  auto rem = classify(builtin_spec("remark-3.8"));
  o.need(rem.verdict == HardyVerdict::LimitCaseInnerProduct, "remark-3.8 verdict");
  o.need(!rem.image1_meets_circle && !rem.image2_meets_circle, "remark-3.8 images miss the circle");

  auto ex = builtin_spec("example-5.1");
  std::vector<std::uint64_t> cps;
  for (std::uint64_t n = 100; n <= 2000; ++n) cps.push_back(n);
  double worst_inv = 0;
  for (std::uint64_t i = 0; i < 8; ++i) {
    auto nt = norm_trajectory(ex, doubling_omega(seed, 800 + i, 2000), cps);
    for (double v : nt.log_inverse_norm) worst_inv = std::max(worst_inv, std::abs(std::expm1(v)));
  }
  o.need(worst_inv <= 1e-9, "example-5.1 inverse norm 1 for n >= 100");

  auto nd = builtin_spec("norm-decay");
  auto ndc = classify(nd);
  o.need(ndc.verdict == HardyVerdict::NonUniversalNormDecay, "norm-decay verdict");
  double worst_norm = -1e300;
  for (std::uint64_t i = 0; i < 8; ++i) {
    auto nt = norm_trajectory(nd, doubling_omega(seed, 900 + i, 200), {200});
    worst_norm = std::max(worst_norm, nt.log_norm[0]);
  }
  o.need(worst_norm <= std::log(1e-6), "norm-decay ||T_200|| <= 1e-6");
  o.detail << hardy_verdict_name(mix.verdict) << ", " << hardy_verdict_name(rem.verdict) << ", example-5.1 max |inv-1| "
           << worst_inv << " (" << hardy_verdict_name(classify(ex).verdict) << "), "
           << hardy_verdict_name(ndc.verdict) << " max ||T_200|| " << std::exp(worst_norm);
}

void c9_slope(std::uint64_t seed, Outcome& o) {
  auto ex = builtin_spec("example-5.1");
  double worst = 0;
  for (std::uint64_t i = 0; i < 8; ++i) {
    auto nt = norm_trajectory(ex, doubling_omega(seed, 1000 + i, 10000), {10000});
    worst = std::max(worst, std::abs(nt.log_norm[0] / 10000.0 - 0.5));
  }
  o.need(worst <= 0.05, "slope within 0.05 of 1/2");
  o.detail << "max |slope - 1/2| = " << worst;
}

void c10_certificate(std::uint64_t seed, Outcome& o) {
  auto spec = builtin_spec("balanced-exp", 1.0, multiple_of(golden_alpha(), 2));
  spec.transformation = golden();
  auto cert = nonuniversality_certificate(spec, rotation_omega(seed, 10), 10000);
  o.need(cert.produced, "certificate produced (" + cert.failing_check + ")");
  o.need(cert.trajectory_below, "norm trajectory under the bound");
  o.detail << "route " << cert.route << ", log bound " << cert.log_bound << ", max log norm " << cert.max_log_norm;
}

void c11_entire(std::uint64_t seed, Outcome& o) {
  EntireProductSpec spec;  // lambda = 2, b = 1, N = 1024
  const std::vector<std::uint64_t> cps{1, 2, 5, 10, 20, 50, 100};
  long double worst_rel = 0, worst_id = 0;
  std::uint64_t worst_onset2 = 0, worst_onset_half = 0;
  bool never2 = false, never_half = false;
  EntireProductSpec half = spec;
  half.lambda = 0.5L;
  for (std::uint64_t i = 0; i < 50; ++i) {
    auto pattern = entire_pattern(spec, doubling_omega(seed, 1100 + i, 100), 100);
    auto f = PolyVector::random(spec.N, 48, derive_seed(seed, 1200 + i));
    for (auto n : cps) {
      std::vector<std::uint8_t> head(pattern.begin(), pattern.begin() + static_cast<std::ptrdiff_t>(n));
      try {
        worst_rel = std::max(worst_rel, noncommuting_product(spec, head, f).rel_diff);
      } catch (const Error&) {
        worst_rel = std::numeric_limits<long double>::infinity();
      }
    }
    for (std::size_t k = 0; k <= 8; ++k) worst_id = std::max(worst_id, right_inverse_identity(spec, pattern, k).error);
    auto on2 = decay_onset(seminorm_trajectory(spec, pattern, 8, 5.0), 1e-6);
    auto onh = decay_onset(seminorm_trajectory(half, pattern, 8, 5.0), 1e-6);
    never2 = never2 || on2 == 0;
    never_half = never_half || onh == 0;
    worst_onset2 = std::max(worst_onset2, on2);
    worst_onset_half = std::max(worst_onset_half, onh);
  }
  o.need(worst_rel <= 1e-9L, "direct vs closed <= 1e-9");
  o.need(worst_id <= 1e-6L, "T_n S_n z^k = z^k to 1e-6");
  o.need(!never2 && worst_onset2 <= 50, "lambda = 2 seminorm decreasing from n <= 50");
  o.need(!never_half && worst_onset_half <= 50, "lambda = 1/2 seminorm decreasing from n <= 50");
  o.detail << (o.ok ? "" : "; ") << "rel diff " << static_cast<double>(worst_rel) << ", identity error " << static_cast<double>(worst_id)
           << ", decay onset lambda=2: " << (never2 ? std::string("never") : std::to_string(worst_onset2))
           << ", lambda=1/2: " << (never_half ? std::string("never") : std::to_string(worst_onset_half));
}

void c12_echo(std::uint64_t seed, Outcome& o) {
  for (const auto& name : builtin_pair_names()) {
    auto spec = builtin_spec(name);
    auto cls = classify(spec);
    std::size_t agree = 0;
    for (std::uint64_t i = 0; i < 32; ++i) {
      auto pr = probe_verdict(spec, cls, doubling_omega(seed, 1300 + i, 16384), 16384);
      if (pr.verdict == cls.verdict) ++agree;
    }
    o.need(agree == 32, name + " verdict identical across 32 omega");
    o.detail << name << ": " << hardy_verdict_name(cls.verdict) << " " << agree << "/32; ";
  }
}

struct Criterion {
  int id;
  const char* name;
  double budget;
  std::function<void(std::uint64_t, Outcome&)> run;
};

}  // namespace

std::vector<CriterionResult> run_acceptance(std::uint64_t seed, const std::vector<int>& only) {
  const std::vector<Criterion> all{
      {1, "Denjoy-Koksma certificate", 5, c1_denjoy_koksma},
      {2, "Oren dichotomy", 30, [](std::uint64_t, Outcome& o) { c2_oren(o); }},
      {3, "rational-rotation coboundary", 1, [](std::uint64_t, Outcome& o) { c3_rational_coboundary(o); }},
      {4, "Kac CLT", 60, c4_kac},
      {5, "doubling coboundary obstruction", 1, [](std::uint64_t, Outcome& o) { c5_obstruction(o); }},
      {6, "Hardy eigen-relation", 1, [](std::uint64_t, Outcome& o) { c6_eigen(o); }},
      {7, "product cross-implementation", 5, c7_product},
      {8, "classifier cases", 30, c8_classifier},
      {9, "log-norm slope law", 30, c9_slope},
      {10, "non-universality certificate", 30, c10_certificate},
      {11, "entire-function normal form", 60, c11_entire},
      {12, "0-1 echo", 30, c12_echo},
  };
  std::vector<CriterionResult> out;
  for (const auto& c : all) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    CriterionResult r;
    r.id = c.id;
    r.name = c.name;
    r.budget_seconds = c.budget;
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(seed, o);
    } catch (const std::exception& e) {
      o.need(false, std::string("exception: ") + e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.checks_passed = o.ok;
    r.passed = o.ok && r.seconds <= r.budget_seconds;
    r.detail = o.detail.str();
    if (o.ok && !r.passed) r.detail += "; over time budget";
    out.push_back(std::move(r));
  }
  return out;
}

std::string acceptance_table(const std::vector<CriterionResult>& results) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  for (const auto& r : results) {
    os << (r.passed ? "PASS" : "FAIL") << "  " << r.id << ". " << r.name << "  [" << r.seconds << " s / "
       << r.budget_seconds << " s]  " << r.detail << "\n";
  }
  return os.str();
}

}  // namespace ergolin
