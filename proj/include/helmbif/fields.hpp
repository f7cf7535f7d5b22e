#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace helmbif {

using Complex = std::complex<double>;

/// z^n for n >= 0 by repeated squaring.
Complex ipow(Complex z, int n);

/// Radial solution U(r) = J_0(mu r) / J_0(mu) of Delta U + mu^2 U = 0 with
/// U = 1 on the unit circle; c0 = U_r(1) = -mu J_1(mu) / J_0(mu).
struct TrivialSolution {
  double mu = 0.0;
  double j0_mu = 0.0;
  double c0 = 0.0;

  double value(double r) const;
  double dr(double r) const;
  double drr(double r) const;
};

/// Requires mu in (j_{1,1}, j_{0,2}), where J_0(mu) < 0.
TrivialSolution trivial_solution(double mu);

/// Truncated cosine series sum_j c_j cos(j m theta), j = 0..size-1.
/// Used for all m-fold symmetric even boundary traces.
class CosineSeries {
 public:
  CosineSeries(int m, std::vector<double> coefficients);

  int symmetry() const { return m_; }
  std::span<const double> coefficients() const { return coeffs_; }
  /// Coefficient of cos(k theta); zero unless k is a multiple of m in range.
  double coefficient(int k) const;

  double operator()(double theta) const;
  /// Max |f| over `samples` equispaced angles in [0, 2pi).
  double sup_norm(int samples = 256) const;

 private:
  int m_;
  std::vector<double> coeffs_;
};

/// w(z) = sum_{i=1}^{J} a_i z^{i m + 1}. The exponent-1 coefficient is not
/// stored, so w'(0) = 0; only exponents = 1 (mod m) with real coefficients
/// are representable, which encodes the m-fold rotation and reflection
/// symmetry.
class ConformalMap {
 public:
  /// shape[i-1] is the coefficient of z^{i m + 1}.
  ConformalMap(int m, std::vector<double> shape);

  static ConformalMap identity(int m) { return {m, {}}; }
  /// w(z) = eps z^{m+1}
  static ConformalMap single_mode(int m, double eps) { return {m, {eps}}; }

  int symmetry() const { return m_; }
  int truncation() const { return static_cast<int>(shape_.size()); }
  std::span<const double> shape() const { return shape_; }
  /// Coefficient of z^exponent (0 for exponent 1 and non-represented powers).
  double coefficient(int exponent) const;

  Complex w(Complex z) const;
  Complex w_prime(Complex z) const;
  Complex phi(Complex z) const { return z + w(z); }
  Complex phi_prime(Complex z) const { return 1.0 + w_prime(z); }
  /// z with phi(z) = x, by damped Newton from z = x. Throws
  /// NonConvergenceError if the residual stays above 1e-12.
  Complex inverse(Complex x) const;

  /// sum (i m + 1) |a_i|, an upper bound for max_{|z|<=1} |w'(z)|.
  double injectivity_bound() const;
  bool injective() const { return injectivity_bound() < 1.0; }

  /// x . w on the unit circle as a cosine series: sum a_i cos(i m theta).
  CosineSeries boundary_normal_component() const;

 private:
  int m_;
  std::vector<double> shape_;
};

/// v(r, theta) = sum_j b_j J_{jm}(mu r) cos(j m theta). Every term solves
/// Delta v + mu^2 v = 0.
class FourierBesselField {
 public:
  FourierBesselField(double mu, int m, std::vector<double> coefficients);

  double mu() const { return mu_; }
  int symmetry() const { return m_; }
  std::span<const double> coefficients() const { return coeffs_; }

  double value(double r, double theta) const;
  double value(Complex x) const { return value(std::abs(x), std::arg(x)); }
  double dr(double r, double theta) const;
  /// Cartesian gradient (as a complex number v_x + i v_y).
  Complex gradient(Complex x) const;
  /// Delta v + mu^2 v from closed-form radial and angular derivatives.
  double helmholtz_residual(double r, double theta) const;

 private:
  double mu_;
  int m_;
  std::vector<double> coeffs_;
};

/// Argument triple (v, w, gamma) of the linearized operator.
struct LinearizedInput {
  LinearizedInput(FourierBesselField v, ConformalMap w, double gamma);

  FourierBesselField v;
  ConformalMap w;
  double gamma;
};

struct LinearizedOutput {
  /// Delta v + mu^2 v; zero up to rounding for Fourier-Bessel inputs.
  std::function<double(double r, double theta)> interior;
  /// v + U_r x.w on the unit circle.
  CosineSeries kinematic;
  /// U_r v_r - U_rr v + U_r gamma on the unit circle.
  CosineSeries dynamic;
};

/// Linearization at the trivial solution with parameter mu. Throws
/// ConsistencyError if input.v was built at a different mu.
LinearizedOutput apply_linearized(const LinearizedInput& input, double mu);

/// Unique symmetric w with x.w = g on the unit circle, w = z G(z),
/// G = sum_{k>=1} g_k z^k. Throws SolvabilityError if |g_0| > 1e-13.
ConformalMap schwarz_lift(const CosineSeries& g);

/// Kernel direction (V_m, W_m, 0) at mu:
///   V_m = J_m(mu r) cos m theta,
///   W_m = amplitude z^{m+1},  amplitude = J_m(mu) J_0(mu) / (mu J_1(mu)).
struct KernelField {
  int m = 0;
  double mu = 0.0;
  double amplitude = 0.0;

  double v(double r, double theta) const;
  Complex w(Complex z) const;
  LinearizedInput as_input() const;
};

KernelField kernel_fields(int m, double mu);

/// Leading-order solution family at bifurcation mode m, with epsilon the
/// coefficient of z^{m+1} in w.
struct FirstOrderFamily {
  int m = 0;
  double eps = 0.0;
  double mu = 0.0;  // mu_m
  ConformalMap map;
  double c = 0.0;
  double lambda = 0.0;
  /// mu J_1(mu) / (J_0(mu) J_m(mu)), the V_m weight per unit eps.
  double field_weight = 0.0;

  /// (u o phi)(r e^{i theta}) truncated after the O(eps) term.
  double pulled_back(double r, double theta) const;
  /// u(x) = U(|x|) + eps * field_weight * J_m(mu |x|) cos(m arg x), the
  /// first-order Helmholtz field on Omega itself.
  double physical(Complex x) const;
  /// pulled_back evaluated at phi^{-1}(x); the truncation rendered on Omega.
  double value(Complex x) const;
  /// physical(phi(e^{i theta})); equals 1 + O(eps^2).
  double boundary_value(double theta) const;
};

/// Requires m >= 4 and |eps| <= 0.2 with (m+1)|eps| < 1.
FirstOrderFamily asymptotic_family(int m, double eps);

}  // namespace helmbif
