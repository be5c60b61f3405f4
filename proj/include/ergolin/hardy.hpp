#pragma once

#include "ergolin/birkhoff.hpp"
#include "ergolin/step_function.hpp"
#include "ergolin/torus.hpp"

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ergolin {

using cvec = std::vector<cdouble>;

// A bounded analytic function on the disk: truncated Taylor series plus a closed-form evaluator.
class AnalyticSymbol {
 public:
  enum class Kind { Polynomial, ExpAffine, Quotient, Product };

  static AnalyticSymbol polynomial(cvec coeffs, std::string name = {});
  // exp(c0 + c1 z)
  static AnalyticSymbol exp_affine(cdouble c0, cdouble c1, std::string name = {});
  // num / den; den must be zero-free on the closed disk
  static AnalyticSymbol quotient(const AnalyticSymbol& num, const AnalyticSymbol& den, std::string name = {});
  static AnalyticSymbol product(const AnalyticSymbol& a, const AnalyticSymbol& b, std::string name = {});

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const cvec& taylor() const { return taylor_; }
  std::size_t degree() const { return taylor_.size() - 1; }
  // sup over the closed disk of |phi - taylor polynomial|
  double tail_bound() const { return tail_; }

  cdouble operator()(cdouble z) const { return eval_(z); }
  double log_abs(cdouble z) const { return log_abs_(z); }  // -inf at zeros
  cdouble taylor_eval(cdouble z) const;

 private:
  Kind kind_ = Kind::Polynomial;
  std::string name_;
  cvec taylor_;
  double tail_ = 0.0;
  std::function<cdouble(cdouble)> eval_;
  std::function<double(cdouble)> log_abs_;
};

// Boundary points e^{2 pi i j / M}, j = 0..M-1.
std::vector<cdouble> boundary_points(std::size_t M);
// Sum of argument increments of phi around the circle / 2 pi (zeros inside the disk).
int winding_number(const AnalyticSymbol& phi, std::size_t M = 4096);
double sup_norm(const AnalyticSymbol& phi, std::size_t M = 4096);

// (M_phi^* x)_n = sum_k conj(a_k) x_{n+k}; same length as x.
cvec adjoint_apply(const AnalyticSymbol& phi, const cvec& x);
cvec adjoint_apply(const cvec& taylor, const cvec& x);
// phi x truncated to out_len coefficients.
cvec multiply_apply(const cvec& taylor, const cvec& x, std::size_t out_len);
// Taylor coefficients of a^p truncated to len.
cvec series_power(const cvec& a, std::uint64_t p, std::size_t len);
cvec series_multiply(const cvec& a, const cvec& b, std::size_t len);

cvec kernel(cdouble lambda, std::size_t N);  // (conj(lambda)^n)_{n<N}
double kernel_tail(cdouble lambda, std::size_t N);
cdouble inner(const cvec& x, const cvec& y);  // sum x_n conj(y_n)
double norm2(const cvec& x);

struct HardyProductSpec {
  AnalyticSymbol phi1 = AnalyticSymbol::polynomial({1.0});
  AnalyticSymbol phi2 = AnalyticSymbol::polynomial({1.0});
  Real256 b = Real256::from_rational(Rational(1, 2));  // A1 = [0,b), A2 = [b,1)
  Transformation transformation = Transformation::doubling();
  std::size_t N = 512;
  std::size_t M = 4096;
  double tau = 1e-9;

  double m1() const { return b.to_double(); }
  double m2() const { return 1.0 - b.to_double(); }
  Partition partition() const { return Partition::split_at(TorusPoint(b.to_u128())); }
  StepFunction birkhoff_function() const { return favourite_f(b); }
};

// Built-in pairs: mixing-demo, remark-3.8, example-5.1, norm-decay, balanced-exp.
std::vector<std::string> builtin_pair_names();
// balanced-exp is exp(s(1-z)), exp(-s (m1/m2)(1-z)) with m1 = b.
HardyProductSpec builtin_spec(const std::string& name, double s = 1.0, std::optional<Real256> b = std::nullopt);

struct ProductResult {
  cvec step_by_step;
  cvec closed_form;
  std::uint64_t a1 = 0, a2 = 0;
  double max_abs_diff = 0.0;
  double rel_diff = 0.0;  // max_abs_diff / max |closed_form coefficient|
};

// T_n(omega) x two ways; throws Internal when they disagree beyond 1e-8 (relative).
ProductResult product_apply(const HardyProductSpec& spec, const Omega& omega, std::uint64_t n, const cvec& x);

struct EigenTrajectory {
  std::vector<cdouble> z;
  std::vector<std::uint64_t> checkpoints;
  std::vector<std::vector<double>> log_modulus;  // [z][checkpoint]: a1 log|phi1(z)| + a2 log|phi2(z)|
  std::vector<double> slope;                     // at the last checkpoint
  std::vector<double> expected_slope;            // m1 log|phi1(z)| + m2 log|phi2(z)|
};

EigenTrajectory eigen_trajectory(const HardyProductSpec& spec, const Omega& omega, const std::vector<cdouble>& z,
                                 const std::vector<std::uint64_t>& checkpoints);

struct NormTrajectory {
  std::vector<std::uint64_t> checkpoints, a1, a2;
  std::vector<double> log_norm;          // log ||T_n(omega)||
  std::vector<double> log_inverse_norm;  // log ||T_n(omega)^{-1}||, +inf when a symbol vanishes on the circle
  double limit_slope = 0.0;              // sup over the circle of m1 log|phi1*| + m2 log|phi2*|
  double inverse_limit_slope = 0.0;      // sup of -(m1 log|phi1*| + m2 log|phi2*|)
};

NormTrajectory norm_trajectory(const HardyProductSpec& spec, const Omega& omega,
                               const std::vector<std::uint64_t>& checkpoints);
// Same quantities from the counts alone.
double log_product_norm(const HardyProductSpec& spec, std::uint64_t a1, std::uint64_t a2);
double log_product_inverse_norm(const HardyProductSpec& spec, std::uint64_t a1, std::uint64_t a2);

enum class HardyVerdict {
  MixingByEigenvalues,
  LimitCaseInnerProduct,
  LimitCaseOuterSide,
  NonUniversalNormDecay,
  NonUniversalBounded,
  TrivialContraction,
  TrivialExpansion,
  Inconclusive,
};
const char* hardy_verdict_name(HardyVerdict v);

struct ClassifyReport {
  HardyVerdict verdict = HardyVerdict::Inconclusive;
  double tau = 0.0;
  double g_min = 0.0, g_max = 0.0;  // g = |phi1|^m1 |phi2|^m2 on the disk grid
  cdouble lambda_min, mu_max;
  double boundary_min = 0.0, boundary_max = 0.0;  // same product on the circle
  double norm1 = 0.0, norm2 = 0.0, norm_product = 0.0;  // norm_product = norm1^m1 norm2^m2
  double inf1 = 0.0, inf2 = 0.0;                         // inf over disk grid and circle
  bool image1_meets_circle = false, image2_meets_circle = false;
  bool zero_free1 = false, zero_free2 = false;
  double inverse_slope = 0.0;  // sup over the circle of -(m1 log|phi1*| + m2 log|phi2*|)
  std::string note;
};

std::vector<cdouble> default_disk_grid();
ClassifyReport classify(const HardyProductSpec& spec, const std::vector<cdouble>& grid = default_disk_grid());

struct ProbeResult {
  HardyVerdict verdict = HardyVerdict::Inconclusive;  // classify verdict if confirmed, else Inconclusive
  bool confirmed = false;
  std::string evidence;
};

// Confirms a classify verdict with trajectory evidence along one omega.
ProbeResult probe_verdict(const HardyProductSpec& spec, const ClassifyReport& cls, const Omega& omega,
                          std::uint64_t n = 16384);

struct OuterFactor {
  cdouble outer;
  cdouble inner;  // phi(z) / outer
  bool regularized = false;
};

OuterFactor outer_factor(const AnalyticSymbol& phi, cdouble z, std::size_t M_quad = 1 << 14);

// (M_phi^*)^n x for phi = z^m u with u zero-free; vanishes when x is supported below m n.
cvec model_space_annihilation(const AnalyticSymbol& phi, const cvec& x, std::uint64_t n);
// m such that the inner part of phi is z^m; throws Unsupported otherwise.
std::size_t monomial_inner_order(const AnalyticSymbol& phi);

struct RightInverseRecord {
  std::uint64_t n = 0;
  std::uint64_t a1 = 0, a2 = 0;
  std::int64_t d = 0;  // a1 - a2
  cdouble z;
  double residual = 0.0;   // ||T_n S_n k_z - k_z|| / ||k_z|| on the first N coordinates
  double log_norm = 0.0;   // log ||S_n k_z|| measured
  double log_bound = 0.0;  // log of |phi_i(z)|^{-d} ||k_z||
};

struct RightInverseReport {
  double inner_deviation = 0.0;  // max | |phi*| - 1 | of phi = phi1 phi2 on the circle
  int direction = -1;            // sign of d along the selected times
  std::vector<std::uint64_t> times;
  std::vector<RightInverseRecord> records;
};

// Record times n where d_n = a1 - a2 reaches a new extreme in `direction` (or returns to 0 first).
std::vector<std::uint64_t> record_times(const std::vector<std::uint8_t>& pattern, int direction, std::size_t count);

RightInverseReport right_inverse_probe(const HardyProductSpec& spec, const Omega& omega, std::uint64_t n_max,
                                       const std::vector<cdouble>& z_set, std::size_t count = 6,
                                       std::optional<int> direction = std::nullopt);

struct Certificate {
  bool produced = false;
  std::string failing_check;
  std::string route;  // "oren" or "coboundary"
  double boundary_deviation = 0.0;
  double S_plus = 0.0, S_minus = 0.0;
  double log_F1 = 0.0, log_F2 = 0.0;  // log sup of the outer factors (= log sup |phi_i*|)
  double log_bound = 0.0;
  double max_log_norm = 0.0;
  bool trajectory_below = false;
  std::uint64_t steps = 0;
};

Certificate nonuniversality_certificate(const HardyProductSpec& spec, const Omega& omega, std::uint64_t steps);

}  // namespace ergolin
