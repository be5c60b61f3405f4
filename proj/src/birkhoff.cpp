#include "ergolin/birkhoff.hpp"

#include "ergolin/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>

namespace ergolin {

namespace mp = boost::multiprecision;

BirkhoffSeries::BirkhoffSeries(const StepFunction& f, std::uint64_t N)
    : N_(N), pieces_(f.pieces()), values_(f.values()), exact_values_(f.exact_values()) {
  counts_.assign((N + 1) * pieces_, 0);
  accumulated_.assign(N + 1, 0.0);
  runmax_.assign(N + 1, 0.0);
  runmin_.assign(N + 1, 0.0);
}

double BirkhoffSeries::sum(std::uint64_t n) const {
  double s = 0.0;
  for (std::size_t k = 0; k < pieces_; ++k) s += values_[k] * static_cast<double>(count(n, k));
  return s;
}

std::optional<Rational> BirkhoffSeries::sum_exact(std::uint64_t n) const {
  if (!exact_values_) return std::nullopt;
  Rational s = 0;
  for (std::size_t k = 0; k < pieces_; ++k) s += (*exact_values_)[k] * static_cast<long long>(count(n, k));
  return s;
}

BirkhoffSeries birkhoff_sums(const Transformation& t, const StepFunction& f, const Omega& omega, std::uint64_t N) {
  require(N >= 1, ErrorKind::Precondition, "birkhoff_sums needs N >= 1");
  BirkhoffSeries s(f, N);
  OrbitCursor cur(t, omega);
  if (cur.capacity() < N) fail(ErrorKind::Horizon, "bit stream too short for " + std::to_string(N) + " steps");
  const std::size_t P = s.pieces_;
  double acc = 0.0;
  for (std::uint64_t i = 0; i < N; ++i) {
    if (i) cur.advance();
    std::size_t k = f.piece_of(cur.current());
    std::copy_n(&s.counts_[i * P], P, &s.counts_[(i + 1) * P]);
    ++s.counts_[(i + 1) * P + k];
    acc += f.values()[k];
    s.accumulated_[i + 1] = acc;
    double v = s.sum(i + 1);
    s.runmax_[i + 1] = i == 0 ? v : std::max(s.runmax_[i], v);
    s.runmin_[i + 1] = i == 0 ? v : std::min(s.runmin_[i], v);
  }
  return s;
}

double birkhoff_sum(const Transformation& t, const StepFunction& f, const Omega& omega, std::uint64_t n) {
  OrbitCursor cur(t, omega);
  if (cur.capacity() < n) fail(ErrorKind::Horizon, "bit stream too short for " + std::to_string(n) + " steps");
  std::vector<std::uint64_t> hits(f.pieces(), 0);
  for (std::uint64_t i = 0; i < n; ++i) {
    if (i) cur.advance();
    ++hits[f.piece_of(cur.current())];
  }
  double s = 0.0;
  for (std::size_t k = 0; k < hits.size(); ++k) s += f.values()[k] * static_cast<double>(hits[k]);
  return s;
}

DenjoyKoksmaReport denjoy_koksma(const BirkhoffSeries& s, const StepFunction& f, const Convergents& cv) {
  DenjoyKoksmaReport rep;
  rep.bound = f.total_variation();
  std::optional<Rational> exact_bound;
  if (f.exact_values()) {
    const auto& v = *f.exact_values();
    Rational V = 0;
    for (std::size_t i = 0; i < v.size(); ++i) V += mp::abs(v[i] - v[i == 0 ? v.size() - 1 : i - 1]);
    exact_bound = V;
  }
  for (std::size_t k = 0; k < cv.q.size(); ++k) {
    if (cv.q[k] > BigInt(s.length())) break;
    auto n = cv.q[k].convert_to<std::uint64_t>();
    rep.q.push_back(cv.q[k]);
    rep.sums.push_back(s.sum(n));
    if (exact_bound) {
      if (mp::abs(*s.sum_exact(n)) > *exact_bound) rep.holds = false;
    } else if (std::abs(rep.sums.back()) > rep.bound * (1.0 + 1e-12)) {
      rep.holds = false;
    }
  }
  return rep;
}

const char* oren_verdict_name(OrenVerdict v) {
  switch (v) {
    case OrenVerdict::BoundedPredicted: return "BoundedPredicted";
    case OrenVerdict::UnboundedPredicted: return "UnboundedPredicted";
    case OrenVerdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

OrenReport oren_analysis(const StepFunction& f, const Transformation& rotation, std::int64_t K, double tol) {
  require(rotation.is_rotation(), ErrorKind::Precondition, "oren_analysis needs a rotation");
  require(K >= 1 && tol > 0 && tol < 0.5, ErrorKind::Precondition, "oren_analysis needs K >= 1, 0 < tol < 1/2");
  OrenReport rep;
  rep.K = K;
  rep.tol = tol;
  std::vector<std::size_t> idx;
  const double zero_tol = 1e-9 * std::max(1.0, f.total_variation());
  for (std::size_t i = 0; i < f.pieces(); ++i) {
    if (std::abs(f.jump(i)) <= zero_tol) continue;
    idx.push_back(i);
    rep.jump_points.push_back(f.breakpoints()[i].to_double());
    rep.jump_sizes.push_back(f.jump(i));
  }
  const std::size_t m = idx.size();
  const Fixed256 alpha = rotation.alpha_hi().value;
  int e = 0;
  const double mant = std::frexp(tol, &e);  // tol = mant * 2^e
  require(e > -200, ErrorKind::Precondition, "tol too small");
  const Fixed256 tol_fixed = Fixed256(BigInt(static_cast<std::int64_t>(std::ldexp(mant, 53))) << (203 + e));
  const Fixed256 band_fixed = tol_fixed << 16;
  std::vector<std::size_t> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  std::map<std::pair<std::size_t, std::size_t>, std::int64_t> link;
  bool ambiguous = false;
  Fixed256 closest = ~Fixed256(0);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      const Fixed256 diff = f.breakpoints()[idx[b]].value - f.breakpoints()[idx[a]].value;
      Fixed256 d = diff + alpha * Fixed256(static_cast<std::uint64_t>(K));  // k = -K
      std::optional<std::int64_t> hit;
      for (std::int64_t k = -K; k <= K; ++k, d -= alpha) {
        Fixed256 dist = std::min(d, Fixed256(0) - d);
        if (dist < tol_fixed) {
          hit = k;
          break;
        }
        if (dist < band_fixed) ambiguous = true;
        closest = std::min(closest, dist);
      }
      if (hit) {
        link[{a, b}] = *hit;
        parent[find(b)] = find(a);
      }
    }
  }
  rep.closest_miss = fixed256_to_unit(closest);
  std::map<std::size_t, OrenReport::Coset> groups;
  for (std::size_t a = 0; a < m; ++a) groups[find(a)];
  for (auto& [root, coset] : groups) {
    for (std::size_t a = 0; a < m; ++a) {
      if (find(a) != root) continue;
      coset.jumps.push_back(idx[a]);
      std::int64_t shift = 0;
      if (a != root) {
        auto lo = std::min(a, root), hi = std::max(a, root);
        auto it = link.find({lo, hi});
        // members linked only through a chain keep shift 0 in this summary
        if (it != link.end()) shift = a > root ? it->second : -it->second;
      }
      coset.shift.push_back(shift);
      coset.delta_sum += f.jump(idx[a]);
    }
    rep.cosets.push_back(coset);
  }
  bool all_zero = true;
  for (const auto& c : rep.cosets)
    if (std::abs(c.delta_sum) > zero_tol) all_zero = false;
  if (ambiguous) {
    rep.verdict = OrenVerdict::Inconclusive;
    rep.note = "a jump difference lies within 2^16 tol of the shift lattice without matching it";
  } else if (all_zero) {
    rep.verdict = OrenVerdict::BoundedPredicted;
    rep.note = "every coset of jumps sums to zero";
  } else {
    rep.verdict = OrenVerdict::UnboundedPredicted;
    rep.note = "some coset of jumps has nonzero total";
  }
  return rep;
}

namespace {

struct PhaseTable {
  std::vector<double> weight;  // 2 |c_r|^2 (r and -r)
  std::vector<u128> step;      // frac(r alpha) as a 128-bit fraction
  std::vector<bool> exact_resonance;
  std::vector<std::int64_t> excluded;
};

PhaseTable phase_table(const Transformation& t, const StepFunction& f, std::int64_t R) {
  require(t.is_rotation(), ErrorKind::Precondition, "variance_exact needs a rotation");
  require(R >= 1, ErrorKind::Precondition, "variance_exact needs R >= 1");
  PhaseTable tab;
  tab.weight.resize(R);
  tab.step.resize(R);
  tab.exact_resonance.assign(R, false);
  const u128 guard = static_cast<u128>(1) << 28;  // 2^-100 of a turn
  for (std::int64_t r = 1; r <= R; ++r) {
    cdouble c = f.favourite_b() ? favourite_fourier(*f.favourite_b(), BigInt(r)) : f.fourier(BigInt(r));
    tab.weight[r - 1] = 2.0 * std::norm(c);
    if (t.rational()) {
      auto k = (static_cast<u128>(r) * t.rational()->p) % t.rational()->q;
      tab.step[r - 1] = rational_to_u128(Rational(static_cast<long long>(k), t.rational()->q));
      tab.exact_resonance[r - 1] = k == 0;
    } else {
      tab.step[r - 1] = t.alpha().frac * static_cast<u128>(r);
      if (torus_distance(TorusPoint(tab.step[r - 1]), TorusPoint(0)) < guard) {
        tab.excluded.push_back(r);
        tab.weight[r - 1] = 0.0;
      }
    }
  }
  return tab;
}

double sin_pi_frac(u128 x) {
  double th = u128_to_unit(x);
  th = std::min(th, 1.0 - th);
  return std::sin(std::numbers::pi * th);
}

}  // namespace

VarianceReport variance_exact(const Transformation& t, const StepFunction& f, std::uint64_t n, std::int64_t R) {
  VarianceReport rep;
  rep.R = R;
  PhaseTable tab = phase_table(t, f, R);
  rep.excluded = tab.excluded;
  if (n == 0) return rep;
  const double nn = static_cast<double>(n);
  double total = 0.0;
  for (std::int64_t r = R; r >= 1; --r) {
    const double w = tab.weight[r - 1];
    if (w == 0.0) continue;
    if (tab.exact_resonance[r - 1]) {
      total += w * nn * nn;
      continue;
    }
    const u128 step = tab.step[r - 1];
    const double num = sin_pi_frac(step * static_cast<u128>(n));
    const double den = sin_pi_frac(step);
    total += w * (num * num) / (den * den);
  }
  rep.value = total;
  if (!t.rational()) {
    // sampled estimate of sum_{|r|>R} (V/2pi)^2 min(n, 1/(2||r alpha||))^2 / r^2
    const double g = f.total_variation() / (2.0 * std::numbers::pi);
    const int samples = 2048;
    double mean = 0.0;
    for (int j = 0; j < samples; ++j) {
      auto r = static_cast<std::uint64_t>(R) + 1 + static_cast<std::uint64_t>(j) * 63 * static_cast<std::uint64_t>(R) / samples;
      double dist = u128_to_unit(torus_distance(TorusPoint(t.alpha().frac * static_cast<u128>(r)), TorusPoint(0)));
      double m = std::min(nn, 0.5 / std::max(dist, 1e-300));
      mean += m * m;
    }
    mean /= samples;
    const double Rd = static_cast<double>(R);
    rep.tail_estimate = 2.0 * g * g * (mean * (1.0 / Rd - 1.0 / (64.0 * Rd)) + nn * nn / (64.0 * Rd));
  }
  return rep;
}

std::vector<double> variance_curve(const Transformation& t, const StepFunction& f, std::uint64_t N, std::int64_t R) {
  PhaseTable tab = phase_table(t, f, R);
  std::vector<double> curve(N, 0.0);
  for (std::int64_t r = R; r >= 1; --r) {
    const double w = tab.weight[r - 1];
    if (w == 0.0) continue;
    if (tab.exact_resonance[r - 1]) {
      for (std::uint64_t n = 1; n <= N; ++n) curve[n - 1] += w * static_cast<double>(n) * static_cast<double>(n);
      continue;
    }
    const u128 step = tab.step[r - 1];
    const double den = sin_pi_frac(step);
    const double scale = w / (4.0 * den * den);  // |1 - z^n|^2 = 2 - 2 Re z^n
    const double ang = 2.0 * std::numbers::pi * u128_to_unit(step);
    const cdouble z = std::polar(1.0, ang);
    cdouble zn = z;
    u128 phase = step;
    for (std::uint64_t n = 1; n <= N; ++n) {
      curve[n - 1] += scale * (2.0 - 2.0 * zn.real());
      phase += step;
      if ((n & 1023) == 0) {
        zn = std::polar(1.0, 2.0 * std::numbers::pi * u128_to_unit(phase));
      } else {
        zn *= z;
      }
    }
  }
  return curve;
}

CoboundaryResult rational_coboundary(const RationalAngle& alpha, const StepFunction& f) {
  require(alpha.q >= 1 && std::gcd(alpha.p, alpha.q) == 1, ErrorKind::Precondition,
          "rational_coboundary needs alpha = p/q in lowest terms");
  require(f.is_exact(), ErrorKind::Precondition, "rational_coboundary needs exact breakpoints and values");
  const std::int64_t q = alpha.q;
  const Rational a(alpha.p, alpha.q);
  std::vector<Rational> cuts;
  for (const auto& b : f.breakpoints())
    for (std::int64_t k = 0; k < q; ++k) cuts.push_back(frac(*b.exact - Rational(k, q)));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  CoboundaryResult res;
  for (const auto& x : cuts) {
    Rational s = 0;
    for (std::int64_t j = 0; j < q; ++j) s += f.eval_exact(x + j * a);
    if (s != 0) {
      res.witness_x = x;
      res.witness_sum = s;
      return res;
    }
  }
  std::vector<Real256> br;
  std::vector<double> vals;
  std::vector<Rational> exact;
  for (const auto& x : cuts) {
    Rational h = 0;
    for (std::int64_t j = 0; j < q; ++j) h += (j + 1) * f.eval_exact(x + j * a);
    h = -h / q;
    if (!exact.empty() && exact.back() == h) continue;  // merge equal neighbours
    br.push_back(Real256::from_rational(x));
    exact.push_back(h);
    vals.push_back(static_cast<double>(h));
  }
  res.solved = true;
  res.h.emplace(std::move(br), std::move(vals), std::move(exact));
  return res;
}

ObstructionReport doubling_coboundary_obstruction(const Real256& b, std::int64_t q, int K) {
  require(q >= 1 && q % 2 == 1, ErrorKind::Precondition, "q must be odd");
  require(K >= 0 && K <= 200, ErrorKind::Precondition, "K must lie in [0,200]");
  require(frac_product(BigInt(q), b) != 0.0, ErrorKind::Precondition, "b must not lie in (1/q)Z");
  require(b.value != 0, ErrorKind::Precondition, "b must lie in (0,1)");
  ObstructionReport rep;
  rep.q = q;
  rep.K = K;
  const double s = std::sin(std::numbers::pi * frac_product(BigInt(q), b));
  const double one_minus_b = fixed256_to_unit(Fixed256(0) - b.value);
  rep.bound = -s * s / (static_cast<double>(q) * std::numbers::pi * one_minus_b);
  cdouble acc = 0.0;
  for (int j = 0; j <= K; ++j) {
    cdouble c = favourite_fourier(b, BigInt(q) << j);
    rep.c_f.push_back(c);
    acc += c;
    rep.c_g.push_back(acc);
    if (acc.imag() > rep.bound + 1e-12) rep.below_bound = false;
  }
  rep.no_l2_solution = rep.below_bound && rep.bound < 0.0;
  return rep;
}

}  // namespace ergolin
