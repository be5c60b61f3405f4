#include "ergolin/driver.hpp"

#include "ergolin/acceptance.hpp"
#include "ergolin/birkhoff.hpp"
#include "ergolin/clt.hpp"
#include "ergolin/contfrac.hpp"
#include "ergolin/entire.hpp"
#include "ergolin/hardy.hpp"
#include "ergolin/parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <regex>
#include <sstream>

namespace ergolin {

using json = nlohmann::ordered_json;

const char* key_type_name(KeyType t) {
  switch (t) {
    case KeyType::String: return "string";
    case KeyType::UInt: return "uint";
    case KeyType::Real: return "real";
    case KeyType::Complex: return "complex";
    case KeyType::UIntList: return "uint-list";
    case KeyType::RealList: return "real-list";
    case KeyType::ComplexList: return "complex-list";
  }
  return "?";
}

namespace {

KeySpec key(std::string name, KeyType type, std::string def, std::string help) {
  return {std::move(name), type, std::move(def), std::move(help)};
}

const KeySpec kSeed = key("seed", KeyType::UInt, "42", "master seed; per-sample seeds are derived from it");
const KeySpec kOut = key("out", KeyType::String, "", "CSV (or JSON for suite) output path");
const KeySpec kAlpha = key("alpha", KeyType::String, "golden",
                           "rotation angle: golden, sqrt2-1, pow2, [0;a1,a2,...], p/q or a decimal");
const KeySpec kOmega = key("omega", KeyType::String, "random", "starting point: random, p/q or a decimal");

std::vector<CommandSpec> build_specs() {
  std::vector<CommandSpec> s;
  s.push_back({"cf",
               "continued fractions of alpha",
               {"expansion", "convergents", "ostrowski", "discrepancy"},
               {kAlpha, key("depth", KeyType::UInt, "20", "number of partial quotients"),
                key("b", KeyType::String, "0.3", "point expanded in the Ostrowski base (k*alpha allowed)"),
                key("K", KeyType::UInt, "20", "number of points q_k b for the discrepancy"), kOut}});
  s.push_back({"birkhoff",
               "Birkhoff sums of f = 1_[0,b) - b/(1-b) 1_[b,1)",
               {"sums", "oren", "denjoy-koksma", "coboundary", "obstruction"},
               {key("map", KeyType::String, "rotation", "rotation or doubling"), kAlpha,
                key("b", KeyType::String, "1/2", "split point: p/q, decimal or k*alpha"), kOmega,
                key("n", KeyType::UInt, "1000", "number of steps"),
                key("stride", KeyType::UInt, "1", "CSV row spacing"),
                key("q", KeyType::UInt, "3", "odd frequency for the obstruction"),
                key("K", KeyType::UInt, "12", "dyadic depth for the obstruction"),
                key("search", KeyType::UInt, "10000", "largest coset shift searched by oren"), kSeed, kOut}});
  s.push_back({"clt",
               "distributional experiments for Birkhoff sums",
               {"distribution", "kac-sigma2", "range-growth", "w-set", "ln-scale"},
               {key("map", KeyType::String, "doubling", "rotation or doubling"), kAlpha,
                key("b", KeyType::String, "1/2", "split point"), kOmega,
                key("n", KeyType::UInt, "4096", "sum length (w-set: largest n)"),
                key("samples", KeyType::UInt, "2000", "number of omega samples"),
                key("normalization", KeyType::String, "sqrt-n", "sqrt-n, l2 or scale"),
                key("scale", KeyType::Real, "1", "divisor for normalization = scale"),
                key("R", KeyType::UInt, "100000", "Fourier truncation"),
                key("max_lag", KeyType::UInt, "24", "largest correlation lag for kac-sigma2"),
                key("checkpoints", KeyType::UIntList, "1000,10000,100000,1000000", "range-growth checkpoints"),
                key("c_grid", KeyType::RealList, "0.1,0.5,1", "thresholds for the w-set density"),
                key("depth", KeyType::UInt, "60", "partial quotients of alpha"),
                key("beta", KeyType::Real, "1.5", "growth exponent for the ln-scale selection"),
                key("scales", KeyType::UInt, "3", "index n of the scale L_n"), kSeed, kOut}});
  s.push_back({"hardy",
               "random products of adjoint multipliers on truncated H2",
               {"classify", "trajectory", "product", "right-inverse", "certificate", "probe"},
               {key("pair", KeyType::String, "mixing-demo",
                    "mixing-demo, remark-3.8, example-5.1, norm-decay or balanced-exp"),
                key("s", KeyType::Real, "1", "strength for balanced-exp"),
                key("b", KeyType::String, "", "split point (default 1/2)"),
                key("map", KeyType::String, "doubling", "rotation or doubling"), kAlpha, kOmega,
                key("n", KeyType::UInt, "1000", "product length"),
                key("N", KeyType::UInt, "512", "truncation dimension"),
                key("stride", KeyType::UInt, "1", "trajectory row spacing"),
                key("z", KeyType::ComplexList, "0.3,-0.2+0.1i,0.5i", "kernel points for right-inverse"),
                key("direction", KeyType::String, "auto", "auto, up or down (sign of a1 - a2 at record times)"),
                key("count", KeyType::UInt, "6", "number of record times"),
                key("samples", KeyType::UInt, "8", "omega samples for probe"), kSeed, kOut}});
  s.push_back({"entire",
               "products of T f = f(lambda z + b) and D on polynomials",
               {"product", "right-inverse", "classify"},
               {key("lambda", KeyType::Complex, "2", "dilation"), key("shift", KeyType::Complex, "1", "translation b"),
                key("cut", KeyType::String, "1/2", "A1 = [0,cut) applies T"),
                key("map", KeyType::String, "doubling", "rotation or doubling"), kAlpha, kOmega,
                key("n", KeyType::UInt, "100", "product length"),
                key("N", KeyType::UInt, "1024", "truncation dimension"),
                key("degree", KeyType::UInt, "48", "degree of the random input polynomial"),
                key("k", KeyType::UInt, "8", "largest monomial z^k for the right inverse"),
                key("R", KeyType::Real, "5", "seminorm radius"),
                key("tol", KeyType::Real, "1e-6", "relative tolerance of the decay check"),
                key("phi1", KeyType::String, "exp(1)", "symbol: exp(a), D, identity or poly(c0,c1,...)"),
                key("phi2", KeyType::String, "D", "second symbol"),
                key("radius", KeyType::Real, "4", "search radius for classify"), kSeed, kOut}});
  s.push_back({"suite",
               "acceptance run",
               {"run"},
               {kSeed, key("criteria", KeyType::UIntList, "", "subset of criterion ids (default all)"), kOut}});
  return s;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

double parse_real(const std::string& key, const std::string& s) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  require(pos == s.size() && !s.empty(), ErrorKind::Config, "key '" + key + "' expects a real, got '" + s + "'");
  return v;
}

std::uint64_t parse_uint(const std::string& key, const std::string& s) {
  bool ok = !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
  std::uint64_t v = 0;
  if (ok) {
    try {
      v = std::stoull(s);
    } catch (const std::exception&) {
      ok = false;
    }
  }
  require(ok, ErrorKind::Config, "key '" + key + "' expects a non-negative integer, got '" + s + "'");
  return v;
}

// a, bi, a+bi, a-bi (i may also be j)
cdouble parse_complex(const std::string& key, const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  const std::string bad = "key '" + key + "' expects a complex number like 1-0.5i, got '" + text + "'";
  require(!s.empty(), ErrorKind::Config, bad);
  if (s.back() != 'i' && s.back() != 'j') return {parse_real(key, s), 0.0};
  s.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  auto imag_of = [&](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return parse_real(key, t);
  };
  try {
    if (split == std::string::npos) return {0.0, imag_of(s)};
    return {parse_real(key, s.substr(0, split)), imag_of(s.substr(split))};
  } catch (const Error&) {
    fail(ErrorKind::Config, bad);
  }
}

class Config {
 public:
  Config(const CommandSpec& spec, const KeyValues& kv) : spec_(spec) {
    for (const auto& k : spec.keys) values_[k.name] = k.default_value;
    for (const auto& [name, value] : kv) {
      auto it = std::find_if(spec.keys.begin(), spec.keys.end(), [&](const KeySpec& k) { return k.name == name; });
      require(it != spec.keys.end(), ErrorKind::Config, "unknown key '" + name + "' for command " + spec.name);
      values_[name] = value;
      explicit_.push_back(name);
    }
    // type-check everything before any computation
    for (const auto& k : spec.keys) {
      const auto& v = values_[k.name];
      if (v.empty()) continue;
      switch (k.type) {
        case KeyType::String: break;
        case KeyType::UInt: parse_uint(k.name, v); break;
        case KeyType::Real: parse_real(k.name, v); break;
        case KeyType::Complex: parse_complex(k.name, v); break;
        case KeyType::UIntList: for (const auto& t : split_list(v)) parse_uint(k.name, t); break;
        case KeyType::RealList: for (const auto& t : split_list(v)) parse_real(k.name, t); break;
        case KeyType::ComplexList: for (const auto& t : split_list(v)) parse_complex(k.name, t); break;
      }
    }
  }

  const std::string& str(const std::string& k) const { return values_.at(k); }
  bool set(const std::string& k) const { return !values_.at(k).empty(); }
  bool given(const std::string& k) const {
    return std::find(explicit_.begin(), explicit_.end(), k) != explicit_.end();
  }
  std::uint64_t u64(const std::string& k) const { return parse_uint(k, str(k)); }
  double real(const std::string& k) const { return parse_real(k, str(k)); }
  cdouble cplx(const std::string& k) const { return parse_complex(k, str(k)); }
  std::vector<std::uint64_t> u64s(const std::string& k) const {
    std::vector<std::uint64_t> out;
    for (const auto& t : split_list(str(k))) out.push_back(parse_uint(k, t));
    return out;
  }
  std::vector<double> reals(const std::string& k) const {
    std::vector<double> out;
    for (const auto& t : split_list(str(k))) out.push_back(parse_real(k, t));
    return out;
  }
  std::vector<cdouble> cplxs(const std::string& k) const {
    std::vector<cdouble> out;
    for (const auto& t : split_list(str(k))) out.push_back(parse_complex(k, t));
    return out;
  }

 private:
  const CommandSpec& spec_;
  std::map<std::string, std::string> values_;
  std::vector<std::string> explicit_;
};

// ---- shared helpers ----

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json jnum(double x) {
  if (std::isfinite(x)) return x;
  return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

json jcplx(cdouble z) { return json::array({jnum(z.real()), jnum(z.imag())}); }

std::string big(const BigInt& x) { return x.str(); }

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& header) { buf_ << header << '\n'; }
  template <typename... T>
  void row(const T&... cells) {
    bool first = true;
    ((buf_ << (first ? "" : ",") << cell(cells), first = false), ...);
    buf_ << '\n';
  }
  void save(const std::string& path, RunResult& res) const {
    std::ofstream f(path, std::ios::binary);
    require(f.good(), ErrorKind::Config, "cannot open output file '" + path + "'");
    f << buf_.str();
    require(f.good(), ErrorKind::Config, "write failed for '" + path + "'");
    res.files.push_back(path);
  }

 private:
  static std::string cell(double x) { return num(x); }
  static std::string cell(long double x) { return num(static_cast<double>(x)); }
  static std::string cell(std::uint64_t x) { return std::to_string(x); }
  static std::string cell(std::int64_t x) { return std::to_string(x); }
  static std::string cell(int x) { return std::to_string(x); }
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }
  static std::string cell(const BigInt& x) { return x.str(); }
  std::ostringstream buf_;
};

Transformation make_transformation(const Config& c) {
  const auto& m = c.str("map");
  if (m == "doubling") return Transformation::doubling();
  require(m == "rotation", ErrorKind::Config, "map must be rotation or doubling, got '" + m + "'");
  return Transformation::rotation(parse_alpha(c.str("alpha")), c.str("alpha"));
}

// p/q, decimal, or k*alpha / k alpha / alpha
Real256 parse_point(const std::string& text, const std::optional<Real256>& alpha) {
  static const std::regex multiple(R"(^\s*(\d*)\s*\*?\s*alpha\s*$)");
  std::smatch m;
  if (std::regex_match(text, m, multiple)) {
    require(alpha.has_value(), ErrorKind::Config, "'" + text + "' needs a rotation angle");
    const unsigned k = m[1].str().empty() ? 1u : static_cast<unsigned>(std::stoul(m[1].str()));
    Real256 r;
    r.value = alpha->value * Fixed256(k);
    if (alpha->exact) r.exact = frac(*alpha->exact * k);
    return r;
  }
  return parse_rational_real(text);
}

std::optional<Real256> alpha_of(const Transformation& t) {
  if (t.is_rotation()) return t.alpha_hi();
  return std::nullopt;
}

Omega make_omega(const Config& c, const Transformation& t, std::size_t horizon, std::uint64_t stream) {
  const auto& s = c.str("omega");
  if (s == "random") return random_omega(t, derive_seed(c.u64("seed"), stream), horizon);
  const TorusPoint x(parse_rational_real(s).to_u128());
  if (t.is_rotation()) return omega_point(x);
  return omega_bits(BitStream::from_point(x, horizon + 128));
}

json transformation_json(const Transformation& t) {
  json j;
  j["map"] = t.is_rotation() ? "rotation" : "doubling";
  if (t.is_rotation()) {
    j["alpha"] = t.description();
    j["alpha_value"] = t.alpha_hi().to_double();
  }
  return j;
}

// ---- cf ----

json run_cf(const std::string& action, const Config& c, RunResult& res) {
  const Real256 alpha = parse_alpha(c.str("alpha"));
  auto cf = cf_expand(alpha, c.u64("depth"));
  json j;
  j["alpha"] = c.str("alpha");
  j["alpha_value"] = alpha.to_double();
  j["depth"] = cf.a.size();
  j["exhausted"] = cf.exhausted;
  std::vector<std::string> a;
  for (const auto& x : cf.a) a.push_back(big(x));
  j["partial_quotients"] = a;
  if (action == "expansion") {
    if (c.set("out")) {
      CsvWriter w("j,a_j");
      for (std::size_t i = 0; i < cf.a.size(); ++i) w.row(std::uint64_t(i + 1), cf.a[i]);
      w.save(c.str("out"), res);
    }
    return j;
  }
  auto cv = convergents(cf);
  if (action == "convergents") {
    json list = json::array();
    CsvWriter w("k,p_k,q_k");
    for (std::size_t k = 0; k < cv.q.size(); ++k) {
      list.push_back({{"k", k}, {"p", big(cv.p[k])}, {"q", big(cv.q[k])}});
      w.row(std::uint64_t(k), cv.p[k], cv.q[k]);
    }
    j["convergents"] = list;
    if (c.set("out")) w.save(c.str("out"), res);
    return j;
  }
  const Real256 b = parse_point(c.str("b"), alpha);
  j["b"] = c.str("b");
  j["b_value"] = b.to_double();
  if (action == "ostrowski") {
    auto o = ostrowski(b, cf);
    std::vector<std::string> d;
    for (const auto& x : o.digits) d.push_back(big(x));
    j["digits"] = d;
    j["residual"] = jnum(o.residual);
    j["partial"] = o.partial;
    j["vanishing_regime"] = o.vanishing_regime;
    if (c.set("out")) {
      CsvWriter w("n,b_n,qk_b_distance");
      for (std::size_t i = 0; i < o.digits.size(); ++i)
        w.row(std::uint64_t(i), o.digits[i], i < o.qk_b_distance.size() ? o.qk_b_distance[i] : std::nan(""));
      w.save(c.str("out"), res);
    }
    return j;
  }
  // discrepancy
  const std::size_t K = c.u64("K");
  j["K"] = K;
  j["discrepancy"] = jnum(discrepancy_qk_b(cf, b, K));
  if (c.set("out")) {
    CsvWriter w("k,qk_b");
    auto pts = qk_b_points(cf, b, K);
    for (std::size_t i = 0; i < pts.size(); ++i) w.row(std::uint64_t(i), pts[i]);
    w.save(c.str("out"), res);
  }
  return j;
}

// ---- birkhoff ----

json run_birkhoff(const std::string& action, const Config& c, RunResult& res) {
  json j;
  if (action == "obstruction") {
    const Real256 b = parse_rational_real(c.str("b"));
    auto r = doubling_coboundary_obstruction(b, static_cast<std::int64_t>(c.u64("q")), static_cast<int>(c.u64("K")));
    j["b"] = c.str("b");
    j["q"] = r.q;
    j["K"] = r.K;
    j["bound"] = jnum(r.bound);
    j["below_bound"] = r.below_bound;
    j["no_l2_solution"] = r.no_l2_solution;
    json rows = json::array();
    CsvWriter w("k,re_c_f,im_c_f,re_c_g,im_c_g");
    for (std::size_t k = 0; k < r.c_g.size(); ++k) {
      rows.push_back({{"k", k}, {"c_f", jcplx(r.c_f[k])}, {"c_g", jcplx(r.c_g[k])}});
      w.row(std::uint64_t(k), r.c_f[k].real(), r.c_f[k].imag(), r.c_g[k].real(), r.c_g[k].imag());
    }
    j["coefficients"] = rows;
    if (c.set("out")) w.save(c.str("out"), res);
    return j;
  }

  const Transformation t = make_transformation(c);
  const Real256 b = parse_point(c.str("b"), alpha_of(t));
  const StepFunction f = favourite_f(b);
  j["transformation"] = transformation_json(t);
  j["b"] = c.str("b");
  j["b_value"] = b.to_double();

  if (action == "oren") {
    require(t.is_rotation(), ErrorKind::Precondition, "oren needs map = rotation");
    auto r = oren_analysis(f, t, static_cast<std::int64_t>(c.u64("search")));
    j["verdict"] = oren_verdict_name(r.verdict);
    j["cosets"] = r.cosets.size();
    json cos = json::array();
    for (const auto& cs : r.cosets) cos.push_back({{"jumps", cs.jumps}, {"shift", cs.shift}, {"delta_sum", jnum(cs.delta_sum)}});
    j["coset_detail"] = cos;
    j["closest_miss"] = jnum(r.closest_miss);
    j["note"] = r.note;
    return j;
  }
  if (action == "coboundary") {
    require(t.is_rotation() && t.rational().has_value(), ErrorKind::Precondition,
            "coboundary needs a rational rotation angle p/q");
    require(f.is_exact(), ErrorKind::Precondition, "coboundary needs a rational b");
    auto r = rational_coboundary(*t.rational(), f);
    j["solved"] = r.solved;
    if (r.h) {
      std::vector<std::string> bp, hv;
      for (const auto& x : r.h->breakpoints()) bp.push_back(x.exact ? x.exact->str() : num(x.to_double()));
      for (const auto& v : *r.h->exact_values()) hv.push_back(v.str());
      j["h_breakpoints"] = bp;
      j["h_values"] = hv;
      if (c.set("out")) {
        CsvWriter w("breakpoint,h");
        for (std::size_t i = 0; i < bp.size(); ++i) w.row(bp[i], hv[i]);
        w.save(c.str("out"), res);
      }
    } else {
      j["witness_x"] = r.witness_x.str();
      j["witness_sum"] = r.witness_sum.str();
    }
    return j;
  }

  const std::uint64_t n = c.u64("n");
  require(n >= 1, ErrorKind::Config, "n must be at least 1");
  const Omega omega = make_omega(c, t, n, 0);
  j["omega"] = describe_omega(omega);
  j["n"] = n;
  auto s = birkhoff_sums(t, f, omega, n);

  if (action == "denjoy-koksma") {
    require(t.is_rotation(), ErrorKind::Precondition, "denjoy-koksma needs map = rotation");
    auto cv = convergents(cf_expand(t.alpha_hi(), 60));
    auto r = denjoy_koksma(s, f, cv);
    json rows = json::array();
    for (std::size_t i = 0; i < r.q.size(); ++i) rows.push_back({{"q", big(r.q[i])}, {"S", jnum(r.sums[i])}});
    j["bound"] = jnum(r.bound);
    j["holds"] = r.holds;
    j["checks"] = rows;
    return j;
  }

  // sums
  const std::uint64_t stride = std::max<std::uint64_t>(1, c.u64("stride"));
  j["a1"] = s.a1(n);
  j["a2"] = s.a2(n);
  j["S"] = jnum(s.sum(n));
  if (auto ex = s.sum_exact(n)) j["S_exact"] = ex->str();
  j["runmax"] = jnum(s.runmax(n));
  j["runmin"] = jnum(s.runmin(n));
  if (c.set("out")) {
    CsvWriter w("n,a1,a2,S,runmax,runmin");
    for (std::uint64_t i = stride; i <= n; i += stride) w.row(i, s.a1(i), s.a2(i), s.sum(i), s.runmax(i), s.runmin(i));
    if (n % stride != 0) w.row(n, s.a1(n), s.a2(n), s.sum(n), s.runmax(n), s.runmin(n));
    w.save(c.str("out"), res);
  }
  return j;
}

// ---- clt ----

Normalization parse_normalization(const std::string& s) {
  if (s == "sqrt-n") return Normalization::SqrtN;
  if (s == "l2") return Normalization::L2Norm;
  if (s == "scale") return Normalization::Scale;
  fail(ErrorKind::Config, "normalization must be sqrt-n, l2 or scale, got '" + s + "'");
}

json run_clt(const std::string& action, const Config& c, RunResult& res) {
  const Transformation t = make_transformation(c);
  const Real256 b = parse_point(c.str("b"), alpha_of(t));
  const StepFunction f = favourite_f(b);
  json j;
  j["transformation"] = transformation_json(t);
  j["b"] = c.str("b");

  if (action == "kac-sigma2") {
    require(!t.is_rotation(), ErrorKind::Precondition, "kac-sigma2 needs map = doubling");
    const unsigned lag = static_cast<unsigned>(c.u64("max_lag"));
    require(lag <= 24, ErrorKind::Config, "max_lag must be at most 24");
    j["max_lag"] = lag;
    j["sigma2"] = jnum(kac_sigma2(f, lag));
    json corr = json::array();
    for (unsigned k = 0; k <= lag; ++k) corr.push_back(jnum(doubling_correlation(f, k)));
    j["correlations"] = corr;
    return j;
  }
  if (action == "range-growth") {
    auto cps = c.u64s("checkpoints");
    require(!cps.empty() && std::is_sorted(cps.begin(), cps.end()) && cps.front() >= 1, ErrorKind::Config,
            "checkpoints must be increasing positive integers");
    const Omega omega = make_omega(c, t, cps.back(), 0);
    auto r = range_growth_probe(t, f, omega, cps);
    j["omega"] = describe_omega(omega);
    json rows = json::array();
    CsvWriter w("n,runmax,runmin,range");
    for (std::size_t i = 0; i < r.checkpoints.size(); ++i) {
      const double range = r.runmax[i] - r.runmin[i];
      rows.push_back({{"n", r.checkpoints[i]}, {"runmax", jnum(r.runmax[i])}, {"runmin", jnum(r.runmin[i])},
                      {"range", jnum(range)}});
      w.row(r.checkpoints[i], r.runmax[i], r.runmin[i], range);
    }
    j["checkpoints"] = rows;
    j["plateau"] = r.plateau;
    if (c.set("out")) w.save(c.str("out"), res);
    return j;
  }
  if (action == "w-set" || action == "ln-scale") {
    require(t.is_rotation(), ErrorKind::Precondition, action + " needs map = rotation");
    auto cf = cf_expand(t.alpha_hi(), c.u64("depth"));
    if (action == "w-set") {
      auto grid = c.reals("c_grid");
      auto r = w_set_report(t, f, cf, c.u64("n"), grid, static_cast<std::int64_t>(c.u64("R")));
      json rows = json::array();
      for (std::size_t i = 0; i < grid.size(); ++i)
        rows.push_back({{"c", grid[i]}, {"density", jnum(r.density[i])}, {"density_logn", jnum(r.density_logn[i])}});
      j["N"] = r.N;
      j["R"] = r.R;
      j["densities"] = rows;
      if (c.set("out")) {
        CsvWriter w("n,l2,m");
        for (std::size_t i = 0; i < r.l2.size(); ++i) w.row(std::uint64_t(i + 1), r.l2[i], std::uint64_t(r.m[i]));
        w.save(c.str("out"), res);
      }
      return j;
    }
    auto r = ln_scale_experiment(t, f, cf, c.real("beta"), c.u64("scales"), c.u64("samples"), c.u64("seed"),
                                 static_cast<std::int64_t>(std::min<std::uint64_t>(c.u64("R"), 1000)));
    j["hypothesis_met"] = r.selection.hypothesis_met;
    j["t"] = r.selection.t;
    j["L"] = big(r.L);
    j["l2"] = jnum(r.l2);
    j["variance_equivalent"] = jnum(r.variance_equivalent);
    if (r.gamma_lower_bound) j["gamma_lower_bound"] = jnum(*r.gamma_lower_bound);
    if (r.distribution) {
      j["variance"] = jnum(r.distribution->variance);
      if (r.distribution->ks) j["ks"] = jnum(*r.distribution->ks);
    }
    return j;
  }

  // distribution
  CltExperiment e;
  e.transformation = t;
  e.f = f;
  e.normalization = parse_normalization(c.str("normalization"));
  e.scale = c.real("scale");
  e.n = c.u64("n");
  e.samples = c.u64("samples");
  e.seed = c.u64("seed");
  e.R = static_cast<std::int64_t>(c.u64("R"));
  auto r = empirical_distribution(e);
  j["n"] = r.n;
  j["samples"] = r.samples;
  j["normalization"] = normalization_name(e.normalization);
  j["scale"] = jnum(r.scale);
  j["mean"] = jnum(r.mean);
  j["variance"] = jnum(r.variance);
  if (r.ks) j["ks"] = jnum(*r.ks);
  j["degenerate"] = r.degenerate;
  if (c.set("out")) {
    CsvWriter w("sample,value");
    for (std::size_t i = 0; i < r.values.size(); ++i) w.row(std::uint64_t(i), r.values[i]);
    w.save(c.str("out"), res);
  }
  return j;
}

// ---- hardy ----

HardyProductSpec make_hardy_spec(const Config& c) {
  const Transformation t = make_transformation(c);
  std::optional<Real256> b;
  if (c.set("b")) b = parse_point(c.str("b"), alpha_of(t));
  auto spec = builtin_spec(c.str("pair"), c.real("s"), b);
  if (b) spec.b = *b;
  spec.transformation = t;
  spec.N = c.u64("N");
  require(spec.N >= 2, ErrorKind::Config, "N must be at least 2");
  return spec;
}

json classify_json(const ClassifyReport& r) {
  json j;
  j["verdict"] = hardy_verdict_name(r.verdict);
  j["g_min"] = jnum(r.g_min);
  j["g_max"] = jnum(r.g_max);
  j["lambda_min"] = jcplx(r.lambda_min);
  j["mu_max"] = jcplx(r.mu_max);
  j["boundary_min"] = jnum(r.boundary_min);
  j["boundary_max"] = jnum(r.boundary_max);
  j["norm1"] = jnum(r.norm1);
  j["norm2"] = jnum(r.norm2);
  j["norm_product"] = jnum(r.norm_product);
  j["image1_meets_circle"] = r.image1_meets_circle;
  j["image2_meets_circle"] = r.image2_meets_circle;
  j["zero_free1"] = r.zero_free1;
  j["zero_free2"] = r.zero_free2;
  j["note"] = r.note;
  return j;
}

json run_hardy(const std::string& action, const Config& c, RunResult& res) {
  const auto spec = make_hardy_spec(c);
  const std::uint64_t n = c.u64("n");
  json j;
  j["pair"] = c.str("pair");
  j["transformation"] = transformation_json(spec.transformation);
  j["b"] = spec.b.to_double();

  if (action == "classify") {
    j["classification"] = classify_json(classify(spec));
    return j;
  }
  require(n >= 1, ErrorKind::Config, "n must be at least 1");
  if (action == "probe") {
    const auto cls = classify(spec);
    const std::size_t m = c.u64("samples");
    std::vector<ProbeResult> probes(m);
    parallel_for(m, [&](std::size_t i) { probes[i] = probe_verdict(spec, cls, make_omega(c, spec.transformation, n, i), n); });
    std::size_t agree = 0;
    json rows = json::array();
    for (const auto& p : probes) {
      agree += p.verdict == cls.verdict ? 1 : 0;
      rows.push_back({{"verdict", hardy_verdict_name(p.verdict)}, {"confirmed", p.confirmed}, {"evidence", p.evidence}});
    }
    j["verdict"] = hardy_verdict_name(cls.verdict);
    j["n"] = n;
    j["agree"] = agree;
    j["samples"] = m;
    j["probes"] = rows;
    return j;
  }

  const Omega omega = make_omega(c, spec.transformation, n, 0);
  j["omega"] = describe_omega(omega);
  j["n"] = n;

  if (action == "trajectory") {
    const std::uint64_t stride = std::max<std::uint64_t>(1, c.u64("stride"));
    std::vector<std::uint64_t> cps;
    for (std::uint64_t i = stride; i <= n; i += stride) cps.push_back(i);
    if (cps.empty() || cps.back() != n) cps.push_back(n);
    auto tr = norm_trajectory(spec, omega, cps);
    j["a1"] = tr.a1.back();
    j["a2"] = tr.a2.back();
    j["log_norm"] = jnum(tr.log_norm.back());
    j["log_inverse_norm"] = jnum(tr.log_inverse_norm.back());
    j["slope"] = jnum(tr.log_norm.back() / static_cast<double>(n));
    j["limit_slope"] = jnum(tr.limit_slope);
    j["inverse_limit_slope"] = jnum(tr.inverse_limit_slope);
    if (c.set("out")) {
      CsvWriter w("n,a1,a2,log_norm,log_inverse_norm");
      for (std::size_t i = 0; i < cps.size(); ++i)
        w.row(tr.checkpoints[i], tr.a1[i], tr.a2[i], tr.log_norm[i], tr.log_inverse_norm[i]);
      w.save(c.str("out"), res);
    }
    return j;
  }
  if (action == "product") {
    std::mt19937_64 gen(derive_seed(c.u64("seed"), 1));
    std::normal_distribution<double> nd;
    cvec x(spec.N);
    for (auto& v : x) v = {nd(gen), nd(gen)};
    auto r = product_apply(spec, omega, n, x);
    j["a1"] = r.a1;
    j["a2"] = r.a2;
    j["max_abs_diff"] = jnum(r.max_abs_diff);
    j["rel_diff"] = jnum(r.rel_diff);
    j["norm_in"] = jnum(norm2(x));
    j["norm_out"] = jnum(norm2(r.closed_form));
    if (c.set("out")) {
      CsvWriter w("j,re_step,im_step,re_closed,im_closed");
      for (std::size_t i = 0; i < r.closed_form.size(); ++i)
        w.row(std::uint64_t(i), r.step_by_step[i].real(), r.step_by_step[i].imag(), r.closed_form[i].real(),
              r.closed_form[i].imag());
      w.save(c.str("out"), res);
    }
    return j;
  }
  if (action == "right-inverse") {
    std::optional<int> dir;
    const auto& d = c.str("direction");
    if (d == "up") dir = 1;
    else if (d == "down") dir = -1;
    else require(d == "auto", ErrorKind::Config, "direction must be auto, up or down");
    auto r = right_inverse_probe(spec, omega, n, c.cplxs("z"), c.u64("count"), dir);
    j["inner_deviation"] = jnum(r.inner_deviation);
    j["direction"] = r.direction;
    j["times"] = r.times;
    double worst = 0;
    for (const auto& rec : r.records) worst = std::max(worst, rec.residual);
    j["max_residual"] = jnum(worst);
    json rows = json::array();
    CsvWriter w("n,a1,a2,d,re_z,im_z,residual,log_norm,log_bound");
    for (const auto& rec : r.records) {
      rows.push_back({{"n", rec.n}, {"d", rec.d}, {"z", jcplx(rec.z)}, {"residual", jnum(rec.residual)},
                      {"log_norm", jnum(rec.log_norm)}, {"log_bound", jnum(rec.log_bound)}});
      w.row(rec.n, rec.a1, rec.a2, rec.d, rec.z.real(), rec.z.imag(), rec.residual, rec.log_norm, rec.log_bound);
    }
    j["records"] = rows;
    if (c.set("out")) w.save(c.str("out"), res);
    return j;
  }
  // certificate
  auto r = nonuniversality_certificate(spec, omega, n);
  j["produced"] = r.produced;
  if (!r.failing_check.empty()) j["failing_check"] = r.failing_check;
  j["route"] = r.route;
  j["boundary_deviation"] = jnum(r.boundary_deviation);
  j["S_plus"] = jnum(r.S_plus);
  j["S_minus"] = jnum(r.S_minus);
  j["log_F1"] = jnum(r.log_F1);
  j["log_F2"] = jnum(r.log_F2);
  j["log_bound"] = jnum(r.log_bound);
  j["max_log_norm"] = jnum(r.max_log_norm);
  j["trajectory_below"] = r.trajectory_below;
  j["steps"] = r.steps;
  return j;
}

// ---- entire ----

ExpTypeSymbol parse_symbol(const std::string& key, const std::string& text, std::size_t N) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s == "D") return ExpTypeSymbol::derivative();
  if (s == "identity" || s == "1") return ExpTypeSymbol::identity();
  auto inside = [&](const std::string& head) -> std::optional<std::string> {
    if (s.rfind(head + "(", 0) == 0 && s.back() == ')') return s.substr(head.size() + 1, s.size() - head.size() - 2);
    return std::nullopt;
  };
  if (auto a = inside("exp")) {
    const cdouble z = parse_complex(key, *a);
    return ExpTypeSymbol::exponential(cld(z.real(), z.imag()), N);
  }
  if (auto a = inside("poly")) {
    std::vector<cld> coeffs;
    for (const auto& t : split_list(*a)) {
      const cdouble z = parse_complex(key, t);
      coeffs.emplace_back(z.real(), z.imag());
    }
    require(!coeffs.empty(), ErrorKind::Config, "poly() needs coefficients");
    return ExpTypeSymbol::polynomial(coeffs);
  }
  fail(ErrorKind::Config, "key '" + key + "': unknown symbol '" + text + "'");
}

json nf_json(const NormalForm& nf) {
  return {{"a1", nf.a1}, {"a2", nf.a2}, {"c", big(nf.c)},
          {"r", jcplx(cdouble(static_cast<double>(nf.r.real()), static_cast<double>(nf.r.imag())))}};
}

json run_entire(const std::string& action, const Config& c, RunResult& res) {
  EntireProductSpec spec;
  const cdouble lam = c.cplx("lambda"), shift = c.cplx("shift");
  spec.lambda = cld(lam.real(), lam.imag());
  spec.shift = cld(shift.real(), shift.imag());
  spec.transformation = make_transformation(c);
  spec.cut = parse_point(c.str("cut"), alpha_of(spec.transformation));
  spec.N = c.u64("N");
  json j;
  j["transformation"] = transformation_json(spec.transformation);
  j["lambda"] = jcplx(lam);
  j["shift"] = jcplx(shift);

  if (action == "classify") {
    const auto phi1 = parse_symbol("phi1", c.str("phi1"), spec.N);
    const auto phi2 = parse_symbol("phi2", c.str("phi2"), spec.N);
    auto r = phiD_classify(phi1, phi2, spec.cut.to_double(), c.real("radius"));
    j["phi1"] = c.str("phi1");
    j["phi2"] = c.str("phi2");
    j["verdict"] = entire_verdict_name(r.verdict);
    j["grid_points"] = r.grid_points;
    if (r.found_above) {
      j["lambda_above"] = jcplx(cdouble(double(r.lambda_above.real()), double(r.lambda_above.imag())));
      j["g_above"] = jnum(r.g_above);
    }
    if (r.found_below) {
      j["mu_below"] = jcplx(cdouble(double(r.mu_below.real()), double(r.mu_below.imag())));
      j["g_below"] = jnum(r.g_below);
    }
    j["note"] = r.note;
    return j;
  }

  const std::uint64_t n = c.u64("n");
  require(n >= 1, ErrorKind::Config, "n must be at least 1");
  const Omega omega = make_omega(c, spec.transformation, n, 0);
  const auto pattern = entire_pattern(spec, omega, n);
  j["omega"] = describe_omega(omega);
  j["n"] = n;

  if (action == "product") {
    const auto f = PolyVector::random(spec.N, c.u64("degree"), derive_seed(c.u64("seed"), 1));
    auto r = noncommuting_product(spec, pattern, f);
    j["normal_form"] = nf_json(r.nf);
    j["rel_diff"] = jnum(static_cast<double>(r.rel_diff));
    j["degree_in"] = f.degree();
    j["degree_out"] = r.closed.degree();
    if (c.set("out")) {
      CsvWriter w("j,re_direct,im_direct,re_closed,im_closed");
      for (std::size_t i = 0; i < spec.N; ++i)
        w.row(std::uint64_t(i), r.direct[i].real(), r.direct[i].imag(), r.closed[i].real(), r.closed[i].imag());
      w.save(c.str("out"), res);
    }
    return j;
  }

  // right-inverse
  const std::size_t kmax = c.u64("k");
  auto tr = seminorm_trajectory(spec, pattern, kmax, c.real("R"));
  long double worst = 0;
  for (std::size_t k = 0; k <= kmax; ++k) worst = std::max(worst, right_inverse_identity(spec, pattern, k).error);
  j["normal_form"] = nf_json(normal_form(pattern, spec.lambda, spec.shift));
  j["identity_error"] = jnum(static_cast<double>(worst));
  if (std::abs(spec.lambda) < 1)
    j["identity_note"] = "long double evaluation cancels (r / lambda^a1)^k terms; the identity holds in exact arithmetic";
  const auto onset = decay_onset(tr, c.real("tol"));
  j["decay_onset"] = onset == 0 ? json("never") : json(onset);
  j["log_seminorm_max"] = jnum(tr.log_max.back());
  if (c.set("out")) {
    std::string header = "n,a1,a2,c";
    for (std::size_t k = 0; k <= kmax; ++k) header += ",log_p_k" + std::to_string(k);
    std::ostringstream body;
    body << header << '\n';
    for (std::size_t i = 0; i < tr.n.size(); ++i) {
      body << tr.n[i] << ',' << tr.a1[i] << ',' << tr.a2[i] << ',' << tr.c[i].str();
      for (double v : tr.log_seminorm[i]) body << ',' << num(v);
      body << '\n';
    }
    std::ofstream fout(c.str("out"), std::ios::binary);
    require(fout.good(), ErrorKind::Config, "cannot open output file '" + c.str("out") + "'");
    fout << body.str();
    res.files.push_back(c.str("out"));
  }
  return j;
}

// ---- suite ----

std::string run_suite(const Config& c, RunResult& res) {
  std::vector<int> only;
  for (auto id : c.u64s("criteria")) only.push_back(static_cast<int>(id));
  auto results = run_acceptance(c.u64("seed"), only);
  int failed = 0;
  json rows = json::array();
  for (const auto& r : results) {
    failed += r.passed ? 0 : 1;
    rows.push_back({{"id", r.id}, {"name", r.name}, {"checks_passed", r.checks_passed}, {"detail", r.detail}});
  }
  if (c.set("out")) {
    std::ofstream f(c.str("out"), std::ios::binary);
    require(f.good(), ErrorKind::Config, "cannot open output file '" + c.str("out") + "'");
    f << json{{"seed", c.u64("seed")}, {"criteria", rows}}.dump(2) << '\n';
    res.files.push_back(c.str("out"));
  }
  res.exit_code = failed == 0 ? 0 : 1;
  std::ostringstream os;
  os << acceptance_table(results) << (results.size() - failed) << "/" << results.size() << " criteria passed\n";
  return os.str();
}

}  // namespace

const std::vector<CommandSpec>& command_specs() {
  static const std::vector<CommandSpec> specs = build_specs();
  return specs;
}

const CommandSpec& command_spec(const std::string& name) {
  for (const auto& s : command_specs())
    if (s.name == name) return s;
  fail(ErrorKind::Config, "unknown command '" + name + "'");
}

std::string schema_json() {
  json j = json::array();
  for (const auto& s : command_specs()) {
    json keys = json::array();
    for (const auto& k : s.keys)
      keys.push_back({{"name", k.name}, {"type", key_type_name(k.type)}, {"default", k.default_value}, {"help", k.help}});
    j.push_back({{"command", s.name}, {"help", s.help}, {"actions", s.actions}, {"keys", keys}});
  }
  return j.dump(2);
}

KeyValues parse_config_text(const std::string& text) {
  KeyValues kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    require(eq != std::string::npos, ErrorKind::Config,
            "config line " + std::to_string(lineno) + ": expected key = value");
    std::string k = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
    require(!k.empty(), ErrorKind::Config, "config line " + std::to_string(lineno) + ": empty key");
    kv[k] = v;
  }
  return kv;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config:
    case ErrorKind::Precondition:
    case ErrorKind::Size:
    case ErrorKind::Unsupported: return 2;
    case ErrorKind::Precision: return 3;
    case ErrorKind::Horizon:
    case ErrorKind::Internal: return 4;
  }
  return 4;
}

RunResult run_command(const std::string& command, const std::string& action_in, const KeyValues& kv) {
  RunResult res;
  try {
    const auto& spec = command_spec(command);
    const std::string action = action_in.empty() ? spec.actions.front() : action_in;
    require(std::find(spec.actions.begin(), spec.actions.end(), action) != spec.actions.end(), ErrorKind::Config,
            "unknown action '" + action + "' for command " + command);
    const Config cfg(spec, kv);
    if (command == "suite") {
      res.output = run_suite(cfg, res);
      return res;
    }
    json j;
    if (command == "cf") j = run_cf(action, cfg, res);
    else if (command == "birkhoff") j = run_birkhoff(action, cfg, res);
    else if (command == "clt") j = run_clt(action, cfg, res);
    else if (command == "hardy") j = run_hardy(action, cfg, res);
    else j = run_entire(action, cfg, res);
    json out;
    out["command"] = command;
    out["action"] = action;
    if (std::any_of(spec.keys.begin(), spec.keys.end(), [](const KeySpec& k) { return k.name == "seed"; }))
      out["seed"] = cfg.u64("seed");
    for (auto& [k, v] : j.items()) out[k] = v;
    if (!res.files.empty()) out["files"] = res.files;
    res.output = out.dump(2) + "\n";
  } catch (const Error& e) {
    res.exit_code = exit_code_for(e.kind());
    res.error = std::string(error_kind_name(e.kind())) + ": " + e.what();
    res.output.clear();
  } catch (const std::exception& e) {
    res.exit_code = 4;
    res.error = std::string("internal: ") + e.what();
    res.output.clear();
  }
  return res;
}

}  // namespace ergolin
