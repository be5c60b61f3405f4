#include "ergolin/step_function.hpp"

#include "ergolin/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ergolin {

namespace mp = boost::multiprecision;

double frac_product(const BigInt& r, const Real256& x) {
  if (x.exact) {
    const BigInt q = mp::denominator(*x.exact);
    BigInt m = (r * mp::numerator(*x.exact)) % q;
    if (m < 0) m += q;
    return static_cast<double>(Rational(m, q));
  }
  Fixed256 prod = bigint_mod_fixed(r) * x.value;  // wraps mod 2^256
  return fixed256_to_unit(prod);
}

StepFunction::StepFunction(std::vector<Real256> breakpoints, std::vector<double> values,
                           std::optional<std::vector<Rational>> exact_values)
    : breaks_(std::move(breakpoints)), values_(std::move(values)), exact_values_(std::move(exact_values)) {
  require(!breaks_.empty() && breaks_.size() == values_.size(), ErrorKind::Precondition,
          "step function needs one value per breakpoint");
  require(breaks_.front().value == 0, ErrorKind::Precondition, "first breakpoint must be 0");
  for (std::size_t i = 1; i < breaks_.size(); ++i)
    require(breaks_[i - 1].value < breaks_[i].value, ErrorKind::Precondition,
            "breakpoints must be strictly increasing");
  if (exact_values_)
    require(exact_values_->size() == values_.size(), ErrorKind::Precondition, "exact value count mismatch");
  breaks_fixed_.reserve(breaks_.size());
  for (const auto& b : breaks_) breaks_fixed_.emplace_back(b.to_u128());
  jumps_.resize(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) {
    double prev = values_[i == 0 ? values_.size() - 1 : i - 1];
    jumps_[i] = values_[i] - prev;
    variation_ += std::abs(jumps_[i]);
  }
}

StepFunction::StepFunction()
    : StepFunction({Real256::from_rational(0)}, {0.0}, std::vector<Rational>{Rational(0)}) {}

bool StepFunction::is_exact() const {
  if (!exact_values_) return false;
  return std::all_of(breaks_.begin(), breaks_.end(), [](const Real256& b) { return b.exact.has_value(); });
}

std::size_t StepFunction::piece_of(TorusPoint x) const {
  auto it = std::upper_bound(breaks_fixed_.begin(), breaks_fixed_.end(), x);
  return static_cast<std::size_t>(it - breaks_fixed_.begin()) - 1;
}

std::size_t StepFunction::piece_of_exact(const Rational& x) const {
  require(is_exact(), ErrorKind::Precondition, "exact evaluation needs exact breakpoints and values");
  Rational y = frac(x);
  std::size_t lo = 0;
  for (std::size_t i = 1; i < breaks_.size(); ++i)
    if (*breaks_[i].exact <= y) lo = i;
  return lo;
}

Rational StepFunction::eval_exact(const Rational& x) const { return (*exact_values_)[piece_of_exact(x)]; }

double StepFunction::integral() const {
  double s = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    double lo = breaks_[i].to_double();
    double hi = i + 1 < breaks_.size() ? breaks_[i + 1].to_double() : 1.0;
    s += values_[i] * (hi - lo);
  }
  return s;
}

double StepFunction::l2_norm_squared() const {
  double s = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    double lo = breaks_[i].to_double();
    double hi = i + 1 < breaks_.size() ? breaks_[i + 1].to_double() : 1.0;
    s += values_[i] * values_[i] * (hi - lo);
  }
  return s;
}

cdouble StepFunction::fourier(const BigInt& r) const {
  require(r != 0, ErrorKind::Precondition, "fourier(r) needs r != 0");
  using std::numbers::pi;
  cdouble acc = 0.0;
  std::vector<cdouble> phase(breaks_.size());
  for (std::size_t i = 0; i < breaks_.size(); ++i)
    phase[i] = std::polar(1.0, -2.0 * pi * frac_product(r, breaks_[i]));
  for (std::size_t i = 0; i < values_.size(); ++i) {
    cdouble next = i + 1 < breaks_.size() ? phase[i + 1] : cdouble(1.0, 0.0);
    acc += values_[i] * (phase[i] - next);
  }
  return acc / (cdouble(0.0, 2.0 * pi) * static_cast<double>(r));
}

StepFunction favourite_f(const Real256& b) {
  require(b.value != 0, ErrorKind::Precondition, "favourite_f needs b in (0,1)");
  Real256 zero;
  zero.exact = Rational(0);
  std::optional<std::vector<Rational>> exact;
  double ratio;
  if (b.exact) {
    Rational r = *b.exact / (1 - *b.exact);
    exact = std::vector<Rational>{Rational(1), -r};
    ratio = static_cast<double>(r);
  } else {
    Fixed256 rest = Fixed256(0) - b.value;  // 1 - b
    ratio = fixed256_to_unit(b.value) / fixed256_to_unit(rest);
  }
  StepFunction f({zero, b}, {1.0, -ratio}, std::move(exact));
  f.set_favourite_b(b);
  return f;
}

cdouble favourite_fourier(const Real256& b, const BigInt& r) {
  using std::numbers::pi;
  require(r != 0, ErrorKind::Precondition, "fourier(r) needs r != 0");
  double theta = frac_product(r, b);
  double one_minus_b = fixed256_to_unit(Fixed256(0) - b.value);
  return std::polar(std::sin(pi * theta) / (pi * one_minus_b * static_cast<double>(r)), -pi * theta);
}

FourierData fourier_coeffs(const StepFunction& f, std::int64_t R) {
  require(R >= 1, ErrorKind::Precondition, "R must be >= 1");
  FourierData d;
  d.R = R;
  d.gamma_bound = f.total_variation() / (2.0 * std::numbers::pi);
  d.c.resize(R);
  d.gamma.resize(R);
  for (std::int64_t r = 1; r <= R; ++r) {
    cdouble c = f.favourite_b() ? favourite_fourier(*f.favourite_b(), BigInt(r)) : f.fourier(BigInt(r));
    d.c[r - 1] = c;
    d.gamma[r - 1] = static_cast<double>(r) * c;
  }
  return d;
}

}  // namespace ergolin
