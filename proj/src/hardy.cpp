#include "ergolin/hardy.hpp"

#include "ergolin/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace ergolin {

namespace {

using std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double log_abs_of(cdouble w) {
  double a = std::abs(w);
  return a == 0.0 ? -kInf : std::log(a);
}

cdouble horner(const cvec& c, cdouble z) {
  cdouble acc = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * z + c[k];
  return acc;
}

double max_abs(const cvec& c) {
  double m = 0.0;
  for (const auto& v : c) m = std::max(m, std::abs(v));
  return m;
}

// Drops trailing coefficients whose absolute sum stays below tol * scale; returns the dropped mass.
double trim_tail(cvec& c, double tol) {
  double scale = std::max(1.0, max_abs(c));
  double dropped = 0.0;
  while (c.size() > 1 && dropped + std::abs(c.back()) <= tol * scale) {
    dropped += std::abs(c.back());
    c.pop_back();
  }
  return dropped;
}

// a * x with 0 * (-inf) = 0
double scaled(double a, double x) { return a == 0.0 ? 0.0 : a * x; }

struct BoundaryTable {
  std::vector<double> L1, L2;

  BoundaryTable(const HardyProductSpec& spec) {
    auto pts = boundary_points(spec.M);
    L1.resize(pts.size());
    L2.resize(pts.size());
    for (std::size_t j = 0; j < pts.size(); ++j) {
      L1[j] = spec.phi1.log_abs(pts[j]);
      L2[j] = spec.phi2.log_abs(pts[j]);
    }
  }

  double log_norm(double a1, double a2) const {
    double m = -kInf;
    for (std::size_t j = 0; j < L1.size(); ++j) m = std::max(m, scaled(a1, L1[j]) + scaled(a2, L2[j]));
    return m;
  }
  double log_inverse_norm(double a1, double a2) const {
    double m = -kInf;
    for (std::size_t j = 0; j < L1.size(); ++j) m = std::max(m, -(scaled(a1, L1[j]) + scaled(a2, L2[j])));
    return m;
  }
};

std::pair<std::uint64_t, std::uint64_t> counts_of(const std::vector<std::uint8_t>& pattern, std::uint64_t n) {
  std::uint64_t a1 = 0;
  for (std::uint64_t i = 0; i < n; ++i) a1 += pattern[i];
  return {a1, n - a1};
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

AnalyticSymbol AnalyticSymbol::polynomial(cvec coeffs, std::string name) {
  require(!coeffs.empty(), ErrorKind::Precondition, "polynomial needs at least one coefficient");
  while (coeffs.size() > 1 && coeffs.back() == cdouble(0.0)) coeffs.pop_back();
  AnalyticSymbol s;
  s.kind_ = Kind::Polynomial;
  s.name_ = name.empty() ? "polynomial" : std::move(name);
  s.taylor_ = coeffs;
  s.eval_ = [c = std::move(coeffs)](cdouble z) { return horner(c, z); };
  auto ev = s.eval_;
  s.log_abs_ = [ev](cdouble z) { return log_abs_of(ev(z)); };
  return s;
}

AnalyticSymbol AnalyticSymbol::exp_affine(cdouble c0, cdouble c1, std::string name) {
  AnalyticSymbol s;
  s.kind_ = Kind::ExpAffine;
  s.name_ = name.empty() ? "exp-affine" : std::move(name);
  // e^{c0} sum c1^k z^k / k!, cut once the remaining tail is below 1e-16 of the sup bound
  const double r = std::abs(c1);
  const double sup = std::exp(c0.real() + r);
  const double a0 = std::abs(std::exp(c0));
  auto tail_from = [&](std::size_t k) {
    // sum_{j >= k} a0 r^j / j!
    double term = a0, t = 0.0;
    for (std::size_t j = 1; j <= k; ++j) term *= r / static_cast<double>(j);
    for (std::size_t j = k; j < k + 400 && term > 0.0; ++j) {
      t += term;
      term *= r / static_cast<double>(j + 1);
      if (term < 1e-30 * t) break;
    }
    return t;
  };
  std::size_t K = 1;
  while (K < 400 && tail_from(K) > 1e-16 * std::max(1.0, sup)) ++K;
  cdouble term = std::exp(c0);
  for (std::size_t k = 0; k < K; ++k) {
    s.taylor_.push_back(term);
    term *= c1 / static_cast<double>(k + 1);
  }
  s.tail_ = tail_from(K);
  s.eval_ = [c0, c1](cdouble z) { return std::exp(c0 + c1 * z); };
  s.log_abs_ = [c0, c1](cdouble z) { return (c0 + c1 * z).real(); };
  return s;
}

AnalyticSymbol AnalyticSymbol::quotient(const AnalyticSymbol& num, const AnalyticSymbol& den, std::string name) {
  const std::size_t M = 4096;
  double den_min = kInf;
  for (const auto& w : boundary_points(M)) den_min = std::min(den_min, std::abs(den(w)));
  require(den_min > 1e-12 && winding_number(den, M) == 0, ErrorKind::Unsupported,
          "quotient needs a denominator without zeros on the closed disk");
  const cvec& a = num.taylor();
  const cvec& d = den.taylor();
  require(std::abs(d[0]) > 0.0, ErrorKind::Unsupported, "quotient denominator vanishes at 0");
  const std::size_t cap = 4096;
  cvec q;
  q.reserve(64);
  double scale = 1.0;
  for (std::size_t n = 0; n < cap; ++n) {
    cdouble acc = n < a.size() ? a[n] : cdouble(0.0);
    for (std::size_t k = 1; k <= std::min(n, d.size() - 1); ++k) acc -= d[k] * q[n - k];
    q.push_back(acc / d[0]);
    scale = std::max(scale, std::abs(q.back()));
    // stop after the numerator is used up and eight consecutive coefficients are negligible
    if (n >= a.size() + 8) {
      double recent = 0.0;
      for (std::size_t j = q.size() - 8; j < q.size(); ++j) recent += std::abs(q[j]);
      if (recent < 1e-18 * scale) break;
    }
  }
  double dropped = trim_tail(q, 1e-16);
  AnalyticSymbol s;
  s.kind_ = Kind::Quotient;
  s.name_ = name.empty() ? "(" + num.name() + ")/(" + den.name() + ")" : std::move(name);
  s.taylor_ = std::move(q);
  s.tail_ = dropped + (num.tail_bound() + sup_norm(num, M) * den.tail_bound() / den_min) / den_min;
  s.eval_ = [num, den](cdouble z) { return num(z) / den(z); };
  s.log_abs_ = [num, den](cdouble z) { return num.log_abs(z) - den.log_abs(z); };
  return s;
}

AnalyticSymbol AnalyticSymbol::product(const AnalyticSymbol& a, const AnalyticSymbol& b, std::string name) {
  cvec c = series_multiply(a.taylor(), b.taylor(), a.taylor().size() + b.taylor().size() - 1);
  double dropped = trim_tail(c, 1e-15);
  const double sa = sup_norm(a), sb = sup_norm(b);
  AnalyticSymbol s;
  s.kind_ = Kind::Product;
  s.name_ = name.empty() ? "(" + a.name() + ")(" + b.name() + ")" : std::move(name);
  s.taylor_ = std::move(c);
  s.tail_ = dropped + a.tail_bound() * sb + b.tail_bound() * sa + a.tail_bound() * b.tail_bound();
  s.eval_ = [a, b](cdouble z) { return a(z) * b(z); };
  s.log_abs_ = [a, b](cdouble z) { return a.log_abs(z) + b.log_abs(z); };
  return s;
}

cdouble AnalyticSymbol::taylor_eval(cdouble z) const { return horner(taylor_, z); }

std::vector<cdouble> boundary_points(std::size_t M) {
  require(M >= 1, ErrorKind::Precondition, "need at least one boundary sample");
  std::vector<cdouble> pts(M);
  for (std::size_t j = 0; j < M; ++j) pts[j] = std::polar(1.0, 2.0 * pi * static_cast<double>(j) / static_cast<double>(M));
  return pts;
}

int winding_number(const AnalyticSymbol& phi, std::size_t M) {
  auto pts = boundary_points(M);
  std::vector<cdouble> v(M);
  for (std::size_t j = 0; j < M; ++j) {
    v[j] = phi(pts[j]);
    require(v[j] != cdouble(0.0), ErrorKind::Precondition, "symbol vanishes on a boundary sample");
  }
  double total = 0.0;
  for (std::size_t j = 0; j < M; ++j) total += std::arg(v[(j + 1) % M] / v[j]);
  return static_cast<int>(std::lround(total / (2.0 * pi)));
}

double sup_norm(const AnalyticSymbol& phi, std::size_t M) {
  double m = -kInf;
  for (const auto& w : boundary_points(M)) m = std::max(m, phi.log_abs(w));
  return std::exp(m);
}

cvec adjoint_apply(const cvec& taylor, const cvec& x) {
  const std::size_t N = x.size();
  cvec y(N, 0.0);
  for (std::size_t n = 0; n < N; ++n) {
    cdouble acc = 0.0;
    const std::size_t kmax = std::min(taylor.size(), N - n);
    for (std::size_t k = 0; k < kmax; ++k) acc += std::conj(taylor[k]) * x[n + k];
    y[n] = acc;
  }
  return y;
}

cvec adjoint_apply(const AnalyticSymbol& phi, const cvec& x) { return adjoint_apply(phi.taylor(), x); }

cvec multiply_apply(const cvec& taylor, const cvec& x, std::size_t out_len) {
  cvec y(out_len, 0.0);
  for (std::size_t i = 0; i < x.size() && i < out_len; ++i) {
    if (x[i] == cdouble(0.0)) continue;
    const std::size_t kmax = std::min(taylor.size(), out_len - i);
    for (std::size_t k = 0; k < kmax; ++k) y[i + k] += taylor[k] * x[i];
  }
  return y;
}

cvec series_multiply(const cvec& a, const cvec& b, std::size_t len) { return multiply_apply(a, b, len); }

cvec series_power(const cvec& a, std::uint64_t p, std::size_t len) {
  cvec result(len, 0.0);
  if (len == 0) return result;
  result[0] = 1.0;
  cvec base(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(std::min(a.size(), len)));
  while (p > 0) {
    if (p & 1) result = series_multiply(base, result, len);
    p >>= 1;
    if (p > 0) base = series_multiply(base, base, len);
  }
  return result;
}

cvec kernel(cdouble lambda, std::size_t N) {
  require(std::abs(lambda) < 1.0, ErrorKind::Precondition, "kernel needs |lambda| < 1");
  cvec k(N);
  cdouble c = std::conj(lambda), p = 1.0;
  for (std::size_t n = 0; n < N; ++n) {
    k[n] = p;
    p *= c;
  }
  return k;
}

double kernel_tail(cdouble lambda, std::size_t N) {
  double r = std::abs(lambda);
  return std::pow(r, static_cast<double>(N)) / std::sqrt(1.0 - r * r);
}

cdouble inner(const cvec& x, const cvec& y) {
  cdouble acc = 0.0;
  for (std::size_t n = 0; n < std::min(x.size(), y.size()); ++n) acc += x[n] * std::conj(y[n]);
  return acc;
}

double norm2(const cvec& x) {
  double s = 0.0;
  for (const auto& v : x) s += std::norm(v);
  return std::sqrt(s);
}

std::vector<std::string> builtin_pair_names() {
  return {"mixing-demo", "remark-3.8", "example-5.1", "norm-decay", "balanced-exp"};
}

HardyProductSpec builtin_spec(const std::string& name, double s, std::optional<Real256> b) {
  HardyProductSpec spec;
  if (b) {
    require(b->value != 0, ErrorKind::Config, "b must lie in (0,1)");
    spec.b = *b;
  }
  using P = AnalyticSymbol;
  if (name == "mixing-demo") {
    spec.phi1 = P::polynomial({0.0, 2.0}, "2z");
    spec.phi2 = P::polynomial({1.0, 0.5}, "1+z/2");
  } else if (name == "remark-3.8") {
    auto den = P::polynomial({1.5, 0.25}, "3/2+z/4");
    spec.phi1 = P::quotient(P::polynomial({0.0, 1.0}, "z"), den, "z/(3/2+z/4)");
    spec.phi2 = den;
  } else if (name == "example-5.1") {
    spec.phi1 = P::exp_affine(1.0, -1.0, "exp(1-z)");
    spec.phi2 = P::exp_affine(-0.5, 0.5, "exp((z-1)/2)");
  } else if (name == "norm-decay") {
    spec.phi1 = P::polynomial({0.0, 0.25}, "z/4");
    spec.phi2 = P::polynomial({0.25, 0.25}, "(1+z)/4");
  } else if (name == "balanced-exp") {
    require(s != 0.0 && std::isfinite(s), ErrorKind::Config, "balanced-exp needs s != 0");
    double r = spec.m1() / spec.m2();
    spec.phi1 = P::exp_affine(s, -s, "exp(s(1-z))");
    spec.phi2 = P::exp_affine(-s * r, s * r, "exp(-s(m1/m2)(1-z))");
  } else {
    fail(ErrorKind::Config, "unknown symbol pair '" + name + "'");
  }
  return spec;
}

ProductResult product_apply(const HardyProductSpec& spec, const Omega& omega, std::uint64_t n, const cvec& x) {
  require(n >= 1, ErrorKind::Precondition, "product_apply needs n >= 1");
  auto pattern = step_pattern(spec.transformation, omega, n, spec.partition());
  ProductResult res;
  std::tie(res.a1, res.a2) = counts_of(pattern, n);

  cvec y = x;
  for (std::uint64_t i = 0; i < n; ++i) y = adjoint_apply(pattern[i] ? spec.phi1 : spec.phi2, y);
  res.step_by_step = std::move(y);

  const std::size_t len = x.size();
  cvec psi = series_multiply(series_power(spec.phi1.taylor(), res.a1, len),
                             series_power(spec.phi2.taylor(), res.a2, len), len);
  res.closed_form = adjoint_apply(psi, x);

  double scale = max_abs(res.closed_form);
  for (std::size_t j = 0; j < len; ++j)
    res.max_abs_diff = std::max(res.max_abs_diff, std::abs(res.step_by_step[j] - res.closed_form[j]));
  res.rel_diff = scale > 0.0 ? res.max_abs_diff / scale : res.max_abs_diff;
  require(res.rel_diff <= 1e-8, ErrorKind::Internal,
          "step-by-step and closed-form products disagree (relative " + fmt(res.rel_diff) + ")");
  return res;
}

EigenTrajectory eigen_trajectory(const HardyProductSpec& spec, const Omega& omega, const std::vector<cdouble>& z,
                                 const std::vector<std::uint64_t>& checkpoints) {
  require(!checkpoints.empty() && std::is_sorted(checkpoints.begin(), checkpoints.end()) && checkpoints.front() >= 1,
          ErrorKind::Config, "checkpoints must be increasing and >= 1");
  for (const auto& w : z) require(std::abs(w) < 1.0, ErrorKind::Precondition, "eigen points must lie in the open disk");
  const std::uint64_t n = checkpoints.back();
  auto pattern = step_pattern(spec.transformation, omega, n, spec.partition());
  EigenTrajectory out;
  out.z = z;
  out.checkpoints = checkpoints;
  for (const auto& w : z) {
    const double L1 = spec.phi1.log_abs(w), L2 = spec.phi2.log_abs(w);
    std::vector<double> row;
    std::uint64_t a1 = 0, i = 0;
    for (auto c : checkpoints) {
      for (; i < c; ++i) a1 += pattern[i];
      row.push_back(scaled(static_cast<double>(a1), L1) + scaled(static_cast<double>(c - a1), L2));
    }
    out.slope.push_back(row.back() / static_cast<double>(n));
    out.expected_slope.push_back(scaled(spec.m1(), L1) + scaled(spec.m2(), L2));
    out.log_modulus.push_back(std::move(row));
  }
  return out;
}

NormTrajectory norm_trajectory(const HardyProductSpec& spec, const Omega& omega,
                               const std::vector<std::uint64_t>& checkpoints) {
  require(!checkpoints.empty() && std::is_sorted(checkpoints.begin(), checkpoints.end()) && checkpoints.front() >= 1,
          ErrorKind::Config, "checkpoints must be increasing and >= 1");
  auto pattern = step_pattern(spec.transformation, omega, checkpoints.back(), spec.partition());
  BoundaryTable table(spec);
  NormTrajectory out;
  out.checkpoints = checkpoints;
  std::uint64_t a1 = 0, i = 0;
  for (auto c : checkpoints) {
    for (; i < c; ++i) a1 += pattern[i];
    out.a1.push_back(a1);
    out.a2.push_back(c - a1);
    out.log_norm.push_back(table.log_norm(static_cast<double>(a1), static_cast<double>(c - a1)));
    out.log_inverse_norm.push_back(table.log_inverse_norm(static_cast<double>(a1), static_cast<double>(c - a1)));
  }
  out.limit_slope = table.log_norm(spec.m1(), spec.m2());
  out.inverse_limit_slope = table.log_inverse_norm(spec.m1(), spec.m2());
  return out;
}

double log_product_norm(const HardyProductSpec& spec, std::uint64_t a1, std::uint64_t a2) {
  return BoundaryTable(spec).log_norm(static_cast<double>(a1), static_cast<double>(a2));
}

double log_product_inverse_norm(const HardyProductSpec& spec, std::uint64_t a1, std::uint64_t a2) {
  return BoundaryTable(spec).log_inverse_norm(static_cast<double>(a1), static_cast<double>(a2));
}

const char* hardy_verdict_name(HardyVerdict v) {
  switch (v) {
    case HardyVerdict::MixingByEigenvalues: return "MixingByEigenvalues";
    case HardyVerdict::LimitCaseInnerProduct: return "LimitCaseInnerProduct";
    case HardyVerdict::LimitCaseOuterSide: return "LimitCaseOuterSide";
    case HardyVerdict::NonUniversalNormDecay: return "NonUniversalNormDecay";
    case HardyVerdict::NonUniversalBounded: return "NonUniversalBounded";
    case HardyVerdict::TrivialContraction: return "TrivialContraction";
    case HardyVerdict::TrivialExpansion: return "TrivialExpansion";
    case HardyVerdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

std::vector<cdouble> default_disk_grid() {
  std::vector<cdouble> grid{0.0};
  const double radii[] = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99};
  const int angles = 64;
  for (double r : radii)
    for (int k = 0; k < angles; ++k) grid.push_back(std::polar(r, 2.0 * pi * k / angles));
  return grid;
}

ClassifyReport classify(const HardyProductSpec& spec, const std::vector<cdouble>& grid) {
  require(!grid.empty(), ErrorKind::Precondition, "classify needs a nonempty grid");
  const double tau = spec.tau, m1 = spec.m1(), m2 = spec.m2();
  ClassifyReport rep;
  rep.tau = tau;

  double lg_min = kInf, lg_max = -kInf, linf1 = kInf, linf2 = kInf;
  for (const auto& w : grid) {
    require(std::abs(w) < 1.0, ErrorKind::Precondition, "grid points must lie in the open disk");
    double L1 = spec.phi1.log_abs(w), L2 = spec.phi2.log_abs(w);
    linf1 = std::min(linf1, L1);
    linf2 = std::min(linf2, L2);
    double lg = scaled(m1, L1) + scaled(m2, L2);
    if (lg < lg_min) lg_min = lg, rep.lambda_min = w;
    if (lg > lg_max) lg_max = lg, rep.mu_max = w;
  }
  BoundaryTable table(spec);
  double lb_min = kInf, lb_max = -kInf, ln1 = -kInf, ln2 = -kInf;
  for (std::size_t j = 0; j < table.L1.size(); ++j) {
    ln1 = std::max(ln1, table.L1[j]);
    ln2 = std::max(ln2, table.L2[j]);
    linf1 = std::min(linf1, table.L1[j]);
    linf2 = std::min(linf2, table.L2[j]);
    double lb = scaled(m1, table.L1[j]) + scaled(m2, table.L2[j]);
    lb_min = std::min(lb_min, lb);
    lb_max = std::max(lb_max, lb);
  }
  rep.g_min = std::exp(lg_min);
  rep.g_max = std::exp(lg_max);
  rep.boundary_min = std::exp(lb_min);
  rep.boundary_max = std::exp(lb_max);
  rep.norm1 = std::exp(ln1);
  rep.norm2 = std::exp(ln2);
  rep.norm_product = std::exp(scaled(m1, ln1) + scaled(m2, ln2));
  rep.inf1 = std::exp(linf1);
  rep.inf2 = std::exp(linf2);
  // the image of the open disk is connected, open, and bounded by the boundary sup
  rep.image1_meets_circle = rep.inf1 < 1.0 - tau && rep.norm1 > 1.0 + tau;
  rep.image2_meets_circle = rep.inf2 < 1.0 - tau && rep.norm2 > 1.0 + tau;
  auto zero_free = [&](const AnalyticSymbol& phi, double linf) {
    if (!std::isfinite(linf)) return false;
    try {
      return winding_number(phi, spec.M) == 0;
    } catch (const Error&) {
      return false;
    }
  };
  rep.zero_free1 = zero_free(spec.phi1, linf1);
  rep.zero_free2 = zero_free(spec.phi2, linf2);
  rep.inverse_slope = table.log_inverse_norm(m1, m2);

  if (rep.norm_product < 1.0 - tau) {
    rep.verdict = HardyVerdict::NonUniversalNormDecay;
    rep.note = "norm1^m1 norm2^m2 = " + fmt(rep.norm_product) + " < 1";
  } else if (rep.norm1 <= 1.0 + tau && rep.norm2 <= 1.0 + tau) {
    rep.verdict = HardyVerdict::TrivialContraction;
    rep.note = "both images inside the closed disk";
  } else if (rep.inf1 >= 1.0 - tau && rep.inf2 >= 1.0 - tau) {
    rep.verdict = HardyVerdict::TrivialExpansion;
    rep.note = "both images outside the open disk";
  } else if (rep.g_min < 1.0 - tau && rep.g_max > 1.0 + tau) {
    rep.verdict = HardyVerdict::MixingByEigenvalues;
    rep.note = "g < 1 at lambda_min and g > 1 at mu_max";
  } else if (rep.boundary_min >= 1.0 - tau && rep.boundary_max <= 1.0 + tau) {
    if (rep.g_max <= 1.0 + tau) {
      rep.verdict = HardyVerdict::LimitCaseInnerProduct;
      rep.note = "boundary product is 1 and g <= 1 on the grid";
    } else {
      rep.verdict = HardyVerdict::LimitCaseOuterSide;
      rep.note = "boundary product is 1 and g >= 1 on the grid";
    }
  } else if (rep.zero_free1 && rep.zero_free2 && rep.g_min >= 1.0 - tau && rep.boundary_min >= 1.0 - tau &&
             rep.inverse_slope <= tau) {
    rep.verdict = HardyVerdict::NonUniversalBounded;
    rep.note = "g >= 1 with boundary product >= 1: inverse products stay bounded";
  } else {
    rep.verdict = HardyVerdict::Inconclusive;
    rep.note = "no case matched";
  }
  return rep;
}

ProbeResult probe_verdict(const HardyProductSpec& spec, const ClassifyReport& cls, const Omega& omega,
                          std::uint64_t n) {
  require(n >= 16, ErrorKind::Config, "probe needs n >= 16");
  ProbeResult res;
  const std::vector<std::uint64_t> cps{n / 4, n / 2, n};
  const double tol_slope = 0.1;
  std::ostringstream ev;
  bool ok = false;
  switch (cls.verdict) {
    case HardyVerdict::MixingByEigenvalues: {
      auto et = eigen_trajectory(spec, omega, {cls.lambda_min, cls.mu_max}, cps);
      ok = et.log_modulus[0].back() < 0.0 && et.log_modulus[1].back() > 0.0;
      for (std::size_t k = 0; k < 2; ++k)
        if (std::isfinite(et.expected_slope[k]))
          ok = ok && std::abs(et.slope[k] - et.expected_slope[k]) <= tol_slope;
      ev << "log|eig| at lambda " << fmt(et.log_modulus[0].back()) << ", at mu " << fmt(et.log_modulus[1].back());
      break;
    }
    case HardyVerdict::LimitCaseInnerProduct:
    case HardyVerdict::LimitCaseOuterSide: {
      auto et = eigen_trajectory(spec, omega, {cls.lambda_min, cls.mu_max}, cps);
      ok = true;
      for (std::size_t k = 0; k < 2; ++k)
        if (std::isfinite(et.expected_slope[k]))
          ok = ok && std::abs(et.slope[k] - et.expected_slope[k]) <= tol_slope;
      ev << "eigen slopes " << fmt(et.slope[0]) << ", " << fmt(et.slope[1]);
      break;
    }
    case HardyVerdict::NonUniversalNormDecay: {
      auto nt = norm_trajectory(spec, omega, cps);
      ok = nt.log_norm.back() < 0.0 &&
           std::abs(nt.log_norm.back() / static_cast<double>(n) - nt.limit_slope) <=
               tol_slope * std::max(1.0, std::abs(nt.limit_slope));
      ev << "log norm " << fmt(nt.log_norm.back()) << " at n = " << n;
      break;
    }
    case HardyVerdict::TrivialContraction: {
      auto nt = norm_trajectory(spec, omega, cps);
      ok = std::all_of(nt.log_norm.begin(), nt.log_norm.end(),
                       [&](double v) { return v <= spec.tau * static_cast<double>(n); });
      ev << "log norm " << fmt(nt.log_norm.back());
      break;
    }
    case HardyVerdict::TrivialExpansion: {
      auto nt = norm_trajectory(spec, omega, cps);
      ok = std::all_of(nt.log_inverse_norm.begin(), nt.log_inverse_norm.end(),
                       [&](double v) { return v <= spec.tau * static_cast<double>(n); });
      ev << "log inverse norm " << fmt(nt.log_inverse_norm.back());
      break;
    }
    case HardyVerdict::NonUniversalBounded: {
      auto nt = norm_trajectory(spec, omega, cps);
      ok = std::all_of(nt.log_inverse_norm.begin(), nt.log_inverse_norm.end(),
                       [](double v) { return v <= 1e-9; });
      ev << "log inverse norm " << fmt(nt.log_inverse_norm.back());
      break;
    }
    case HardyVerdict::Inconclusive:
      ok = true;
      ev << "nothing to confirm";
      break;
  }
  res.confirmed = ok;
  res.verdict = ok ? cls.verdict : HardyVerdict::Inconclusive;
  res.evidence = ev.str();
  return res;
}

OuterFactor outer_factor(const AnalyticSymbol& phi, cdouble z, std::size_t M_quad) {
  require(std::abs(z) <= 0.95, ErrorKind::Precondition, "outer factor needs |z| <= 0.95");
  require(M_quad >= 16, ErrorKind::Config, "too few quadrature nodes");
  const double floor_log = std::log(1e-12);
  OuterFactor out;
  cdouble acc = 0.0;
  for (const auto& w : boundary_points(M_quad)) {
    double L = phi.log_abs(w);
    if (L < floor_log) {
      L = floor_log;
      out.regularized = true;
    }
    acc += (w + z) / (w - z) * L;
  }
  out.outer = std::exp(acc / static_cast<double>(M_quad));
  out.inner = phi(z) / out.outer;
  return out;
}

std::size_t monomial_inner_order(const AnalyticSymbol& phi) {
  const cvec& a = phi.taylor();
  const double scale = max_abs(a);
  std::size_t m = 0;
  while (m < a.size() && std::abs(a[m]) <= 1e-14 * scale) ++m;
  require(m < a.size(), ErrorKind::Unsupported, "symbol is zero");
  double bmin = kInf;
  for (const auto& w : boundary_points(4096)) bmin = std::min(bmin, std::abs(phi(w)));
  require(bmin > 1e-12, ErrorKind::Unsupported, "symbol vanishes on the circle: inner part not a monomial");
  require(winding_number(phi) == static_cast<int>(m), ErrorKind::Unsupported,
          "symbol has zeros away from the origin: inner part not a monomial");
  return m;
}

cvec model_space_annihilation(const AnalyticSymbol& phi, const cvec& x, std::uint64_t n) {
  const std::size_t m = monomial_inner_order(phi);
  cvec taylor = phi.taylor();
  std::fill(taylor.begin(), taylor.begin() + static_cast<std::ptrdiff_t>(m), cdouble(0.0));
  cvec y = x;
  for (std::uint64_t i = 0; i < n; ++i) y = adjoint_apply(taylor, y);
  return y;
}

std::vector<std::uint64_t> record_times(const std::vector<std::uint8_t>& pattern, int direction, std::size_t count) {
  require(direction == 1 || direction == -1, ErrorKind::Config, "direction must be +1 or -1");
  std::vector<std::uint64_t> times;
  std::int64_t d = 0, best = 0;
  bool zero_taken = false;
  for (std::size_t i = 0; i < pattern.size() && times.size() < count; ++i) {
    d += pattern[i] ? 1 : -1;
    std::int64_t v = direction * d;
    if (v > best) {
      best = v;
      times.push_back(i + 1);
    } else if (d == 0 && !zero_taken) {
      zero_taken = true;
      times.push_back(i + 1);
    }
  }
  return times;
}

RightInverseReport right_inverse_probe(const HardyProductSpec& spec, const Omega& omega, std::uint64_t n_max,
                                       const std::vector<cdouble>& z_set, std::size_t count,
                                       std::optional<int> direction) {
  require(n_max >= 1 && !z_set.empty(), ErrorKind::Config, "right-inverse probe needs n_max >= 1 and points");
  RightInverseReport rep;
  const AnalyticSymbol phi = AnalyticSymbol::product(spec.phi1, spec.phi2);
  for (const auto& w : boundary_points(spec.M)) rep.inner_deviation = std::max(rep.inner_deviation, std::abs(std::abs(phi(w)) - 1.0));
  require(rep.inner_deviation <= 1e-9, ErrorKind::Precondition, "phi1 phi2 is not inner (max deviation " +
                                                                    fmt(rep.inner_deviation) + ")");
  for (const auto& z : z_set) {
    require(std::abs(z) < 1.0, ErrorKind::Precondition, "points must lie in the open disk");
    require(std::abs(spec.phi1(z)) > 0.0 && std::abs(spec.phi2(z)) > 0.0, ErrorKind::Precondition,
            "points must avoid zeros of phi1 and phi2");
  }
  if (direction) {
    rep.direction = *direction;
  } else {
    bool phi2_big = std::all_of(z_set.begin(), z_set.end(), [&](cdouble z) { return std::abs(spec.phi2(z)) > 1.0; });
    bool phi1_big = std::all_of(z_set.begin(), z_set.end(), [&](cdouble z) { return std::abs(spec.phi1(z)) > 1.0; });
    rep.direction = phi2_big ? -1 : (phi1_big ? 1 : -1);
  }

  const std::size_t N = spec.N;
  const std::size_t deg_phi = std::max<std::size_t>(phi.degree(), 1);
  const std::size_t deg1 = spec.phi1.degree(), deg2 = spec.phi2.degree();
  const std::size_t budget = 1u << 24;
  require(N + n_max * std::max({deg_phi, deg1, deg2}) <= budget, ErrorKind::Size,
          "working buffer too long; reduce n_max below " + std::to_string((budget - N) / std::max({deg_phi, deg1, deg2})));

  auto pattern = step_pattern(spec.transformation, omega, n_max, spec.partition());
  rep.times = record_times(pattern, rep.direction, count);

  for (auto n : rep.times) {
    auto [a1, a2] = counts_of(pattern, n);
    const std::int64_t d = static_cast<std::int64_t>(a1) - static_cast<std::int64_t>(a2);
    const std::uint64_t mult = d >= 0 ? a2 : a1;
    // T_n lowers the degree by at most a1 deg1 + a2 deg2; S_n raises it by mult deg(phi)
    const std::size_t lower = a1 * deg1 + a2 * deg2;
    const std::size_t L = std::max(N + lower, N + mult * deg_phi);
    for (const auto& z : z_set) {
      RightInverseRecord rec;
      rec.n = n;
      rec.a1 = a1;
      rec.a2 = a2;
      rec.d = d;
      rec.z = z;
      cvec v = kernel(z, L);
      for (std::uint64_t k = 0; k < mult; ++k) v = multiply_apply(phi.taylor(), v, L);
      cdouble factor = d >= 0 ? std::pow(std::conj(spec.phi1(z)), -static_cast<double>(d))
                              : std::pow(std::conj(spec.phi2(z)), static_cast<double>(d));
      for (auto& c : v) c *= factor;
      rec.log_norm = std::log(norm2(v));
      const double log_kz = -0.5 * std::log(1.0 - std::norm(z));
      rec.log_bound = (d >= 0 ? -static_cast<double>(d) * spec.phi1.log_abs(z)
                              : static_cast<double>(d) * spec.phi2.log_abs(z)) +
                      log_kz;

      // apply T_n, shrinking the buffer to what later steps can still read
      std::size_t remaining = lower;
      cvec u = std::move(v);
      for (std::uint64_t i = 0; i < n; ++i) {
        const bool first = pattern[i] != 0;
        u = adjoint_apply(first ? spec.phi1.taylor() : spec.phi2.taylor(), u);
        remaining -= first ? deg1 : deg2;
        u.resize(N + remaining);
      }
      cvec kz = kernel(z, N);
      double diff = 0.0;
      for (std::size_t j = 0; j < N; ++j) diff += std::norm(u[j] - kz[j]);
      rec.residual = std::sqrt(diff) / norm2(kz);
      rep.records.push_back(rec);
    }
  }
  return rep;
}

Certificate nonuniversality_certificate(const HardyProductSpec& spec, const Omega& omega, std::uint64_t steps) {
  require(steps >= 1, ErrorKind::Config, "certificate needs steps >= 1");
  Certificate cert;
  cert.steps = steps;
  BoundaryTable table(spec);
  const double m1 = spec.m1(), m2 = spec.m2();
  for (std::size_t j = 0; j < table.L1.size(); ++j)
    cert.boundary_deviation =
        std::max(cert.boundary_deviation, std::abs(scaled(m1, table.L1[j]) + scaled(m2, table.L2[j])));
  cert.log_F1 = *std::max_element(table.L1.begin(), table.L1.end());
  cert.log_F2 = *std::max_element(table.L2.begin(), table.L2.end());
  if (!(cert.boundary_deviation <= 1e-9)) {
    cert.failing_check = "boundary product not 1 (log deviation " + fmt(cert.boundary_deviation) + ")";
    return cert;
  }
  if (!spec.transformation.is_rotation()) {
    cert.failing_check = "transformation is not a rotation";
    return cert;
  }
  const StepFunction f = spec.birkhoff_function();
  if (spec.transformation.rational()) {
    auto cob = rational_coboundary(*spec.transformation.rational(), f);
    if (!cob.solved) {
      cert.failing_check = "Birkhoff sums unbounded: no coboundary solution";
      return cert;
    }
    cert.route = "coboundary";
  } else {
    auto oren = oren_analysis(f, spec.transformation);
    if (oren.verdict != OrenVerdict::BoundedPredicted) {
      cert.failing_check = std::string("Birkhoff sums unbounded: Oren verdict ") + oren_verdict_name(oren.verdict);
      return cert;
    }
    cert.route = "oren";
  }
  auto series = birkhoff_sums(spec.transformation, f, omega, steps);
  cert.S_plus = std::max(0.0, series.runmax(steps));
  cert.S_minus = std::max(0.0, -series.runmin(steps));
  cert.log_bound = std::max({0.0, cert.S_plus * std::max(cert.log_F1, 0.0),
                             cert.S_minus * (m2 / m1) * std::max(cert.log_F2, 0.0)});
  cert.max_log_norm = 0.0;  // T_0 = I
  for (std::uint64_t n = 1; n <= steps; ++n)
    cert.max_log_norm = std::max(cert.max_log_norm, table.log_norm(static_cast<double>(series.a1(n)),
                                                                   static_cast<double>(series.a2(n))));
  cert.trajectory_below = cert.max_log_norm <= cert.log_bound + 1e-9;
  cert.produced = cert.trajectory_below;
  if (!cert.produced) cert.failing_check = "norm trajectory exceeds the bound";
  return cert;
}

}  // namespace ergolin
