#include "ergolin/entire.hpp"

#include "ergolin/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace ergolin {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

cld ipow(cld x, std::uint64_t e) {
  cld r = 1;
  while (e > 0) {
    if (e & 1) r *= x;
    e >>= 1;
    if (e > 0) x *= x;
  }
  return r;
}

double log_choose(std::uint64_t m, std::uint64_t j) {
  return std::lgamma(m + 1.0) - std::lgamma(j + 1.0) - std::lgamma(m - j + 1.0);
}

std::uint64_t to_u64(const BigInt& c) {
  require(c >= 0 && c <= BigInt(std::numeric_limits<std::uint64_t>::max()), ErrorKind::Precision,
          "commutation exponent exceeds 64 bits");
  return static_cast<std::uint64_t>(c);
}

// log |coef_j| and arg coef_j of S_n z^k at z^{k + a2 - j}
struct LogCoeff {
  double log_abs;
  double arg;
};

std::vector<LogCoeff> right_inverse_log_coeffs(cld lambda, const NormalForm& nf, std::size_t k) {
  const std::uint64_t m = k + nf.a2;
  const double e = static_cast<double>(to_u64(nf.c)) + static_cast<double>(k) * static_cast<double>(nf.a1);
  const double log_lam = std::log(std::abs(static_cast<std::complex<double>>(lambda)));
  const double arg_lam = std::arg(static_cast<std::complex<double>>(lambda));
  const std::complex<double> r(static_cast<double>(nf.r.real()), static_cast<double>(nf.r.imag()));
  const double base = std::lgamma(k + 1.0) - std::lgamma(m + 1.0) - e * log_lam;
  const std::size_t terms = std::abs(r) == 0.0 ? 1 : k + 1;
  std::vector<LogCoeff> out;
  for (std::size_t j = 0; j < terms; ++j) {
    double la = base + log_choose(m, j) + (j == 0 ? 0.0 : static_cast<double>(j) * std::log(std::abs(r)));
    double ar = -e * arg_lam + (j == 0 ? 0.0 : static_cast<double>(j) * std::arg(-r));
    out.push_back({la, ar});
  }
  return out;
}

}  // namespace

PolyVector PolyVector::monomial(std::size_t N, std::size_t k, cld coeff) {
  require(k < N, ErrorKind::Size, "monomial degree must be below N");
  PolyVector p(N);
  p[k] = coeff;
  return p;
}

PolyVector PolyVector::random(std::size_t N, std::size_t degree, std::uint64_t seed) {
  require(degree < N, ErrorKind::Size, "degree must be below N");
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  PolyVector p(N);
  for (std::size_t j = 0; j <= degree; ++j) p[j] = cld(nd(gen), nd(gen));
  return p;
}

long PolyVector::degree() const {
  for (std::size_t j = c_.size(); j-- > 0;)
    if (c_[j] != cld(0)) return static_cast<long>(j);
  return -1;
}

long double PolyVector::seminorm(long double R) const {
  long double s = 0, p = 1;
  for (const auto& c : c_) {
    s += std::abs(c) * p;
    p *= R;
  }
  return s;
}

cld PolyVector::eval(cld z) const {
  cld acc = 0;
  for (std::size_t j = c_.size(); j-- > 0;) acc = acc * z + c_[j];
  return acc;
}

PolyVector PolyVector::majorant() const {
  PolyVector m(N());
  for (std::size_t j = 0; j < N(); ++j) m[j] = std::abs(c_[j]);
  return m;
}

ExpTypeSymbol ExpTypeSymbol::exponential(cld a, std::size_t N) {
  ExpTypeSymbol s;
  s.name = "exp";
  cld t = 1;
  for (std::size_t k = 0; k < N; ++k) {
    s.taylor.push_back(t);
    t *= a / static_cast<long double>(k + 1);
  }
  s.eval = [a](cld z) { return std::exp(a * z); };
  return s;
}

ExpTypeSymbol ExpTypeSymbol::polynomial(std::vector<cld> coeffs) {
  require(!coeffs.empty(), ErrorKind::Precondition, "polynomial needs coefficients");
  ExpTypeSymbol s;
  s.name = "polynomial";
  s.taylor = coeffs;
  s.eval = [c = std::move(coeffs)](cld z) {
    cld acc = 0;
    for (std::size_t j = c.size(); j-- > 0;) acc = acc * z + c[j];
    return acc;
  };
  return s;
}

ExpTypeSymbol ExpTypeSymbol::derivative() {
  auto s = polynomial({0, 1});
  s.name = "D";
  return s;
}

ExpTypeSymbol ExpTypeSymbol::identity() {
  auto s = polynomial({1});
  s.name = "I";
  return s;
}

PolyVector derivative(const PolyVector& f) {
  PolyVector g(f.N());
  const long d = f.degree();
  for (long j = 0; j < d; ++j) g[j] = static_cast<long double>(j + 1) * f[j + 1];
  return g;
}

PolyVector apply_phiD(const ExpTypeSymbol& phi, const PolyVector& f) {
  PolyVector out(f.N());
  PolyVector dk = f;
  for (std::size_t k = 0; k < phi.taylor.size() && dk.degree() >= 0; ++k) {
    if (phi.taylor[k] != cld(0))
      for (std::size_t j = 0; j < f.N(); ++j) out[j] += phi.taylor[k] * dk[j];
    dk = derivative(dk);
  }
  return out;
}

AffineOp AffineOp::power(std::uint64_t n) const {
  AffineOp p{ipow(lambda, n), 0};
  cld r = 0;
  for (std::uint64_t k = 0; k < n; ++k) r = r * lambda + b;
  p.b = r;
  return p;
}

PolyVector taylor_shift(const PolyVector& f, cld s) {
  PolyVector g = f;
  const long d = f.degree();
  if (s == cld(0)) return g;
  for (long i = 0; i < d; ++i)
    for (long j = d - 1; j >= i; --j) g[j] += s * g[j + 1];
  return g;
}

PolyVector apply_affine(const AffineOp& op, const PolyVector& f) {
  PolyVector g = taylor_shift(f, op.b);
  cld p = 1;
  const long d = g.degree();
  for (long j = 0; j <= d; ++j) {
    g[j] *= p;
    p *= op.lambda;
  }
  return g;
}

NormalForm normal_form(const std::vector<std::uint8_t>& pattern, cld lambda, cld b) {
  NormalForm nf;
  std::uint64_t c = 0;
  for (auto step : pattern) {
    if (step) {
      ++nf.a1;
      nf.r = nf.r * lambda + b;
    } else {
      ++nf.a2;
      c += nf.a1;
    }
  }
  nf.c = c;
  return nf;
}

std::vector<std::uint8_t> entire_pattern(const EntireProductSpec& spec, const Omega& omega, std::uint64_t n) {
  return step_pattern(spec.transformation, omega, n, Partition::split_at(TorusPoint(spec.cut.to_u128())));
}

PolyVector closed_product(const NormalForm& nf, cld lambda, const PolyVector& f) {
  PolyVector h = f;
  for (std::uint64_t i = 0; i < nf.a2 && h.degree() >= 0; ++i) h = derivative(h);
  if (h.degree() < 0) return h;
  PolyVector g = taylor_shift(h, nf.r);
  const cld mu = ipow(lambda, nf.a1);
  cld p = ipow(lambda, to_u64(nf.c));
  const long d = g.degree();
  for (long j = 0; j <= d; ++j) {
    g[j] *= p;
    p *= mu;
  }
  return g;
}

PolyVector direct_product(const std::vector<std::uint8_t>& pattern, const AffineOp& op, const PolyVector& f) {
  PolyVector g = f;
  for (auto step : pattern) {
    if (g.degree() < 0) break;
    g = step ? apply_affine(op, g) : derivative(g);
  }
  return g;
}

ProductOutcome noncommuting_product(const EntireProductSpec& spec, const std::vector<std::uint8_t>& pattern,
                                    const PolyVector& f) {
  require(!pattern.empty(), ErrorKind::Precondition, "product needs n >= 1");
  require(spec.N > pattern.size(), ErrorKind::Size, "truncation N must exceed n");
  require(f.N() == spec.N, ErrorKind::Precondition, "polynomial length differs from N");
  require(spec.lambda != cld(0), ErrorKind::Config, "lambda must be nonzero");
  ProductOutcome out;
  out.nf = normal_form(pattern, spec.lambda, spec.shift);
  out.direct = direct_product(pattern, AffineOp{spec.lambda, spec.shift}, f);
  out.closed = closed_product(out.nf, spec.lambda, f);

  // positive-coefficient version bounds every intermediate term of both routes
  NormalForm maj = normal_form(pattern, std::abs(spec.lambda), std::abs(spec.shift));
  PolyVector M = closed_product(maj, std::abs(spec.lambda), f.majorant());
  for (std::size_t j = 0; j < f.N(); ++j) {
    long double diff = std::abs(out.direct[j] - out.closed[j]);
    if (diff == 0) continue;
    long double scale = std::abs(M[j]);
    out.rel_diff = std::max(out.rel_diff, scale > 0 ? diff / scale : std::numeric_limits<long double>::infinity());
  }
  require(out.rel_diff <= 1e-9L, ErrorKind::Internal, "direct and closed-form products disagree");
  return out;
}

ProductOutcome noncommuting_product(const EntireProductSpec& spec, const Omega& omega, std::uint64_t n,
                                    const PolyVector& f) {
  return noncommuting_product(spec, entire_pattern(spec, omega, n), f);
}

PolyVector right_inverse(const EntireProductSpec& spec, const NormalForm& nf, std::size_t k) {
  const std::size_t m = k + nf.a2;
  require(m < spec.N, ErrorKind::Size, "k + a2 must stay below N (raise N to " + std::to_string(m + 1) + ")");
  PolyVector s(spec.N);
  auto lc = right_inverse_log_coeffs(spec.lambda, nf, k);
  for (std::size_t j = 0; j < lc.size(); ++j)
    s[m - j] = std::polar(std::exp(static_cast<long double>(lc[j].log_abs)), static_cast<long double>(lc[j].arg));
  return s;
}

double log_seminorm_right_inverse(const EntireProductSpec& spec, const NormalForm& nf, std::size_t k, double R) {
  require(R > 0, ErrorKind::Config, "seminorm radius must be positive");
  const std::size_t m = k + nf.a2;
  auto lc = right_inverse_log_coeffs(spec.lambda, nf, k);
  double top = kNegInf;
  std::vector<double> terms;
  for (std::size_t j = 0; j < lc.size(); ++j) {
    terms.push_back(lc[j].log_abs + static_cast<double>(m - j) * std::log(R));
    top = std::max(top, terms.back());
  }
  double s = 0;
  for (double t : terms) s += std::exp(t - top);
  return top + std::log(s);
}

SeminormTrajectory seminorm_trajectory(const EntireProductSpec& spec, const std::vector<std::uint8_t>& pattern,
                                       std::size_t kmax, double R) {
  SeminormTrajectory tr;
  NormalForm nf;
  std::uint64_t c = 0;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (pattern[i]) {
      ++nf.a1;
      nf.r = nf.r * spec.lambda + spec.shift;
    } else {
      ++nf.a2;
      c += nf.a1;
    }
    nf.c = c;
    tr.n.push_back(i + 1);
    tr.a1.push_back(nf.a1);
    tr.a2.push_back(nf.a2);
    tr.c.push_back(nf.c);
    std::vector<double> row;
    double mx = kNegInf;
    for (std::size_t k = 0; k <= kmax; ++k) {
      row.push_back(log_seminorm_right_inverse(spec, nf, k, R));
      mx = std::max(mx, row.back());
    }
    tr.log_seminorm.push_back(std::move(row));
    tr.log_max.push_back(mx);
  }
  return tr;
}

std::uint64_t decay_onset(const SeminormTrajectory& tr, double rel_tol) {
  if (tr.n.size() < 2) return 0;
  const double slack = std::log1p(rel_tol);
  std::size_t last_bad = 0;
  bool any_bad = false;
  for (std::size_t i = 0; i + 1 < tr.log_max.size(); ++i)
    if (tr.log_max[i + 1] > tr.log_max[i] + slack) {
      last_bad = i;
      any_bad = true;
    }
  if (!any_bad) return tr.n.front();
  if (last_bad + 2 >= tr.n.size()) return 0;
  return tr.n[last_bad + 1];
}

IdentityCheck right_inverse_identity(const EntireProductSpec& spec, const std::vector<std::uint8_t>& pattern,
                                     std::size_t k) {
  IdentityCheck chk;
  chk.n = pattern.size();
  chk.k = k;
  NormalForm nf = normal_form(pattern, spec.lambda, spec.shift);
  PolyVector s = right_inverse(spec, nf, k);
  PolyVector back = direct_product(pattern, AffineOp{spec.lambda, spec.shift}, s);
  for (std::size_t j = 0; j < back.N(); ++j)
    chk.error = std::max(chk.error, std::abs(back[j] - (j == k ? cld(1) : cld(0))));
  return chk;
}

const char* entire_verdict_name(EntireVerdict v) {
  return v == EntireVerdict::Mixing ? "Mixing" : "Inconclusive";
}

EntireClassifyReport phiD_classify(const ExpTypeSymbol& phi1, const ExpTypeSymbol& phi2, double m1, double radius,
                                   std::size_t rings, std::size_t angles) {
  require(m1 > 0 && m1 < 1, ErrorKind::Config, "m1 must lie in (0,1)");
  require(radius > 0 && rings >= 1 && angles >= 1, ErrorKind::Config, "grid must be nonempty");
  EntireClassifyReport rep;
  rep.radius = radius;
  const double m2 = 1 - m1;
  auto log_g = [&](cld z) {
    long double a = std::abs(phi1.eval(z)), b = std::abs(phi2.eval(z));
    double la = a == 0 ? kNegInf : static_cast<double>(std::log(a));
    double lb = b == 0 ? kNegInf : static_cast<double>(std::log(b));
    return m1 * la + m2 * lb;
  };
  double best_hi = kNegInf, best_lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i <= rings; ++i) {
    const double rad = radius * static_cast<double>(i) / static_cast<double>(rings);
    const std::size_t na = i == 0 ? 1 : angles;
    for (std::size_t a = 0; a < na; ++a) {
      cld z = std::polar<long double>(rad, 2 * std::numbers::pi_v<long double> * a / na);
      double lg = log_g(z);
      ++rep.grid_points;
      if (lg > best_hi) best_hi = lg, rep.lambda_above = z;
      if (lg < best_lo) best_lo = lg, rep.mu_below = z;
    }
  }
  rep.g_above = std::exp(best_hi);
  rep.g_below = std::exp(best_lo);
  rep.found_above = best_hi > 1e-12;
  rep.found_below = best_lo < -1e-12;
  if (rep.found_above && rep.found_below) {
    rep.verdict = EntireVerdict::Mixing;
    rep.note = "g > 1 and g < 1 both attained; eigenvectors e_lambda span dense sets";
  } else {
    rep.note = "witness missing on the grid; refine or enlarge the radius";
  }
  return rep;
}

long double eigen_residual(const ExpTypeSymbol& phi, cld lambda, std::size_t N, long double R) {
  PolyVector e(N);
  cld t = 1;
  for (std::size_t j = 0; j < N; ++j) {
    e[j] = t;
    t *= lambda / static_cast<long double>(j + 1);
  }
  PolyVector y = apply_phiD(phi, e);
  const cld ev = phi.eval(lambda);
  long double s = 0, p = 1;
  for (std::size_t j = 0; j < N; ++j) {
    s += std::abs(y[j] - ev * e[j]) * p;
    p *= R;
  }
  return s;
}

}  // namespace ergolin
