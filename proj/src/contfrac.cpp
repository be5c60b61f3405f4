#include "ergolin/contfrac.hpp"

#include "ergolin/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ergolin {

namespace mp = boost::multiprecision;

namespace {
const BigInt kOne256 = BigInt(1) << 256;

double bigint_to_double(const BigInt& x) { return x.convert_to<double>(); }

// floor division for possibly negative numerators, positive denominator
BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
  return q;
}

double nearest_integer_distance(double x) {
  double f = x - std::floor(x);
  return std::min(f, 1.0 - f);
}
}  // namespace

ContinuedFraction cf_expand(const Real256& alpha, std::size_t depth) {
  require(depth >= 1, ErrorKind::Precondition, "cf_expand needs depth >= 1");
  require(alpha.value != 0, ErrorKind::Precondition, "cf_expand needs alpha in (0,1)");
  ContinuedFraction cf;
  cf.alpha = alpha;
  if (alpha.exact) {
    BigInt num = mp::numerator(*alpha.exact), den = mp::denominator(*alpha.exact);
    while (cf.a.size() < depth) {
      if (num == 0) {
        cf.terminated = true;
        break;
      }
      cf.a.push_back(den / num);
      BigInt rem = den % num;
      den = num;
      num = rem;
    }
    if (num == 0) cf.terminated = true;
    return cf;
  }
  // alpha lies in [A, A+1) / 2^256; follow both ends while they share the next digit
  BigInt n_lo(alpha.value), d_lo = kOne256;
  BigInt n_hi = n_lo + 1, d_hi = kOne256;
  while (cf.a.size() < depth) {
    if (n_lo == 0 || n_hi == 0) {
      cf.exhausted = true;
      break;
    }
    BigInt a_lo = d_lo / n_lo, a_hi = d_hi / n_hi;
    BigInt r_lo = d_lo % n_lo, r_hi = d_hi % n_hi;
    if (a_lo != a_hi || r_lo == 0 || r_hi == 0) {
      cf.exhausted = true;
      break;
    }
    cf.a.push_back(a_lo);
    d_lo = n_lo;
    n_lo = r_lo;
    d_hi = n_hi;
    n_hi = r_hi;
  }
  return cf;
}

Real256 golden_alpha() {
  BigInt s = mp::sqrt(BigInt(5) << 512);
  Real256 r;
  r.value = Fixed256((s - kOne256) / 2);
  return r;
}

Real256 sqrt2_minus_one() {
  BigInt s = mp::sqrt(BigInt(2) << 512);
  Real256 r;
  r.value = Fixed256(s - kOne256);
  return r;
}

Real256 alpha_from_quotients(const std::vector<BigInt>& a) {
  require(!a.empty(), ErrorKind::Config, "empty partial quotient list");
  BigInt p_prev = 1, q_prev = 0, p = 0, q = 1;
  for (const auto& ai : a) {
    require(ai >= 1, ErrorKind::Config, "partial quotients must be >= 1");
    BigInt pn = ai * p + p_prev, qn = ai * q + q_prev;
    p_prev = p;
    q_prev = q;
    p = pn;
    q = qn;
  }
  Real256 r;
  r.value = Fixed256((p << 256) / q);
  return r;
}

Real256 powers_of_two_alpha() {
  std::vector<BigInt> a;
  BigInt q_prev = 0, q = 1;
  for (unsigned j = 0; q < (BigInt(1) << 300); ++j) {
    a.push_back(BigInt(1) << j);
    BigInt qn = a.back() * q + q_prev;
    q_prev = q;
    q = qn;
  }
  return alpha_from_quotients(a);
}

Real256 parse_alpha(const std::string& text) {
  if (text == "golden") return golden_alpha();
  if (text == "sqrt2-1" || text == "silver") return sqrt2_minus_one();
  if (text == "pow2") return powers_of_two_alpha();
  if (!text.empty() && text.front() == '[') {
    auto semi = text.find(';');
    auto close = text.find(']');
    require(semi != std::string::npos && close != std::string::npos && close > semi, ErrorKind::Config,
            "continued fraction literal must look like [0;a1,a2,...]");
    require(text.substr(1, semi - 1) == "0", ErrorKind::Config, "alpha must lie in (0,1)");
    std::string body = text.substr(semi + 1, close - semi - 1);
    bool open_ended = false;
    std::vector<BigInt> a;
    std::size_t pos = 0;
    while (pos <= body.size()) {
      auto comma = body.find(',', pos);
      std::string tok = body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      tok.erase(std::remove_if(tok.begin(), tok.end(), ::isspace), tok.end());
      if (tok == "..." || tok == "…") {
        open_ended = true;
      } else if (!tok.empty()) {
        try {
          a.emplace_back(tok);
        } catch (const std::exception&) {
          fail(ErrorKind::Config, "bad partial quotient '" + tok + "'");
        }
      }
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (open_ended) return alpha_from_quotients(a);
    // a finite literal is the rational it spells
    Rational x = 0;
    for (auto it = a.rbegin(); it != a.rend(); ++it) x = Rational(1) / (Rational(*it) + x);
    return Real256::from_rational(x);
  }
  Real256 r = parse_rational_real(text);
  require(r.value != 0, ErrorKind::Config, "alpha must lie in (0,1): '" + text + "'");
  return r;
}

Convergents convergents(const ContinuedFraction& cf) {
  require(cf.depth() >= 1, ErrorKind::Precondition, "convergents need depth >= 1");
  Convergents c;
  c.p = {BigInt(0), BigInt(1)};
  c.q = {BigInt(1), cf.a[0]};
  for (std::size_t n = 1; n < cf.depth(); ++n) {
    c.p.push_back(cf.a[n] * c.p[n] + c.p[n - 1]);
    c.q.push_back(cf.a[n] * c.q[n] + c.q[n - 1]);
  }
  return c;
}

BigInt theta_scaled(const ContinuedFraction& cf, const Convergents& cv, std::size_t k) {
  return cv.q.at(k) * BigInt(cf.alpha.value) - cv.p.at(k) * kOne256;
}

OstrowskiExpansion ostrowski(const Real256& b, const ContinuedFraction& cf) {
  require(b.value != 0, ErrorKind::Precondition, "ostrowski needs b in (0,1)");
  require(cf.depth() >= 2, ErrorKind::Precondition, "ostrowski needs depth >= 2");
  const Convergents cv = convergents(cf);
  const std::size_t D = cf.depth();  // digits b_0..b_{D-1}, bounded by a_1..a_D
  std::vector<BigInt> theta(D);
  for (std::size_t n = 0; n < D; ++n) theta[n] = theta_scaled(cf, cv, n);
  // Tails from n+1 lie in U = [-|theta_n|, |theta_{n+1}|] (sign-normalised); once b_n > 0 the
  // next digit is capped and the tail lies in V = [|theta_{n+1}| - |theta_n|, |theta_{n+1}|],
  // a fundamental domain for theta_n. Take the largest b >= 1 landing in V, else b = 0.
  OstrowskiExpansion out;
  BigInt rho(b.value);
  for (std::size_t n = 0; n < D; ++n) {
    const BigInt t = mp::abs(theta[n]);
    const BigInt u = mp::abs(theta_scaled(cf, cv, n + 1));
    const BigInt x = theta[n] > 0 ? rho : BigInt(-rho);
    const BigInt dmax = cf.a[n] - (n > 0 && out.digits.back() > 0 ? 1 : 0);
    BigInt d = x >= u ? floor_div(x - u, t) + 1 : BigInt(0);
    if (d > dmax) {
      out.partial = true;
      d = dmax;
    } else if (d == 0 && x < -t) {
      out.partial = true;
    }
    out.digits.push_back(d);
    rho -= d * theta[n];
  }
  out.residual = std::abs(bigint_to_double(rho)) / std::ldexp(1.0, 256);

  for (std::size_t k = 0; k < D; ++k) out.qk_b_distance.push_back(nearest_integer_distance(frac_product(cv.q[k], b)));
  const std::size_t start = (2 * D) / 3;
  double max_ratio = 0.0;
  for (std::size_t n = start; n < D; ++n)
    max_ratio = std::max(max_ratio, bigint_to_double(out.digits[n]) / bigint_to_double(cf.a[n]));
  out.vanishing_regime = max_ratio <= 0.25 && out.qk_b_distance.back() < 1e-6;
  return out;
}

double star_discrepancy(std::vector<double> x) {
  if (x.empty()) return 0.0;
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    d = std::max(d, (i + 1) / n - x[i]);
    d = std::max(d, x[i] - i / n);
  }
  return std::min(d, 1.0);
}

double circle_discrepancy(std::vector<double> x) {
  if (x.empty()) return 0.0;
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double plus = 0.0, minus = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    plus = std::max(plus, (i + 1) / n - x[i]);
    minus = std::max(minus, x[i] - i / n);
  }
  return std::min(plus + minus, 1.0);
}

std::vector<double> qk_b_points(const ContinuedFraction& cf, const Real256& b, std::size_t K) {
  const Convergents cv = convergents(cf);
  require(cv.q.size() > K, ErrorKind::Precision,
          "need q_k for k <= " + std::to_string(K) + " but only " + std::to_string(cv.q.size() - 1) + " are known");
  std::vector<double> pts;
  pts.reserve(K);
  for (std::size_t k = 1; k <= K; ++k) pts.push_back(frac_product(cv.q[k], b));
  return pts;
}

double discrepancy_qk_b(const ContinuedFraction& cf, const Real256& b, std::size_t K) {
  require(K >= 8, ErrorKind::Precondition, "discrepancy needs K >= 8");
  return star_discrepancy(qk_b_points(cf, b, K));
}

HypothesisReport hypothesis_checks(const ContinuedFraction& cf, const StepFunction& f, std::size_t N,
                                   const std::vector<double>& eta_grid, std::int64_t R) {
  require(cf.depth() >= N + 1, ErrorKind::Precision,
          "hypothesis checks need " + std::to_string(N + 1) + " partial quotients, have " +
              std::to_string(cf.depth()));
  require(R >= 1 && N >= 1, ErrorKind::Precondition, "hypothesis checks need N, R >= 1");
  const Convergents cv = convergents(cf);
  HypothesisReport rep;
  rep.N = N;
  rep.R = R;
  rep.p_values = {0.0, 1.0 / 16.0};
  for (double p : rep.p_values) {
    double A = 0.0;
    for (std::size_t n = 1; n <= cf.depth(); ++n)
      A = std::max(A, bigint_to_double(cf.quotient(n)) / std::pow(static_cast<double>(n), p));
    rep.minimal_A.push_back(A);
  }
  auto gamma_abs = [&](const BigInt& r) {
    return std::abs(f.fourier(r)) * std::abs(bigint_to_double(r));
  };
  for (std::size_t j = 0; j <= N; ++j) rep.gamma_qj.push_back(gamma_abs(cv.q[j]));
  rep.eta_grid = eta_grid;
  for (double eta : eta_grid) {
    std::size_t count = 0;
    for (std::size_t j = 0; j <= N; ++j)
      if (bigint_to_double(cf.quotient(j + 1)) * rep.gamma_qj[j] >= eta) ++count;
    rep.count_fraction.push_back(static_cast<double>(count) / static_cast<double>(N));
  }
  double running = 0.0;
  for (std::size_t k = 1; k <= N; ++k) {
    double inner = 0.0;
    for (std::int64_t r = 1; r <= R; ++r) {
      double g = gamma_abs(BigInt(r) * cv.q[k]);
      inner += 2.0 * g * g / (static_cast<double>(r) * static_cast<double>(r));
    }
    running += inner;
    rep.partial_averages.push_back(running / static_cast<double>(k));
  }
  return rep;
}

ScaleSelection select_scales(const ContinuedFraction& cf, const Convergents& cv, double beta, std::size_t count) {
  ScaleSelection sel;
  sel.beta = beta;
  sel.L.push_back(0);
  std::size_t t = 0;
  for (std::size_t k = 1; k <= count; ++k) {
    const double need = std::pow(static_cast<double>(k), beta);
    bool found = false;
    for (++t; t + 1 <= cf.depth() && t < cv.q.size(); ++t) {
      if (bigint_to_double(cf.quotient(t + 1)) >= need) {
        found = true;
        break;
      }
    }
    if (!found) break;
    sel.t.push_back(t);
    sel.L.push_back(sel.L.back() + cv.q[t]);
  }
  sel.hypothesis_met = sel.t.size() == count;
  return sel;
}

}  // namespace ergolin
