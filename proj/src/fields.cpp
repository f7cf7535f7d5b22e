#include "helmbif/fields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "helmbif/errors.hpp"
#include "helmbif/special.hpp"
#include "helmbif/wronskian.hpp"

namespace helmbif {
namespace {

constexpr double kMeanTolerance = 1.0e-13;

void check_symmetry(int m, const char* who) {
  if (m < 1) {
    std::ostringstream os;
    os << who << ": symmetry order must be positive, got " << m;
    throw DomainError(os.str());
  }
}

struct RadialTerms {
  double j = 0.0;
  double dj = 0.0;
  double d2j = 0.0;
};

// J_k, J_k', J_k'' at x from a table of J_0..J_{k+2}.
RadialTerms radial_terms(int k, const std::vector<double>& jn) {
  auto at = [&jn](int n) {
    if (n >= 0) return jn[static_cast<std::size_t>(n)];
    return (n % 2 == 0 ? 1.0 : -1.0) * jn[static_cast<std::size_t>(-n)];
  };
  return {at(k), 0.5 * (at(k - 1) - at(k + 1)),
          0.25 * (at(k - 2) - 2.0 * at(k) + at(k + 2))};
}

}  // namespace

Complex ipow(Complex z, int n) {
  Complex result = 1.0;
  Complex base = z;
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

// --- TrivialSolution -------------------------------------------------------

double TrivialSolution::value(double r) const { return bessel_j(0, mu * r) / j0_mu; }

double TrivialSolution::dr(double r) const { return -mu * bessel_j(1, mu * r) / j0_mu; }

double TrivialSolution::drr(double r) const {
  return -mu * mu * bessel_j_prime(1, mu * r) / j0_mu;
}

TrivialSolution trivial_solution(double mu) {
  const auto& iv = operating_interval();
  if (!(mu > iv.j11 && mu < iv.j02)) {
    std::ostringstream os;
    os << "trivial_solution: mu = " << mu << " outside (j11, j02) = (" << iv.j11
       << ", " << iv.j02 << ")";
    throw DomainError(os.str());
  }
  const double j0 = bessel_j(0, mu);
  const double j1 = bessel_j(1, mu);
  return {mu, j0, -mu * j1 / j0};
}

// --- CosineSeries ----------------------------------------------------------

CosineSeries::CosineSeries(int m, std::vector<double> coefficients)
    : m_(m), coeffs_(std::move(coefficients)) {
  check_symmetry(m, "CosineSeries");
}

double CosineSeries::coefficient(int k) const {
  if (k < 0 || k % m_ != 0) return 0.0;
  const auto j = static_cast<std::size_t>(k / m_);
  return j < coeffs_.size() ? coeffs_[j] : 0.0;
}

double CosineSeries::operator()(double theta) const {
  double sum = 0.0;
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    sum += coeffs_[j] * std::cos(static_cast<double>(j) * m_ * theta);
  }
  return sum;
}

double CosineSeries::sup_norm(int samples) const {
  double best = 0.0;
  for (int i = 0; i < samples; ++i) {
    best = std::max(best, std::abs((*this)(2.0 * std::numbers::pi * i / samples)));
  }
  return best;
}

// --- ConformalMap ----------------------------------------------------------

ConformalMap::ConformalMap(int m, std::vector<double> shape)
    : m_(m), shape_(std::move(shape)) {
  check_symmetry(m, "ConformalMap");
}

double ConformalMap::coefficient(int exponent) const {
  if (exponent <= 1 || (exponent - 1) % m_ != 0) return 0.0;
  const auto i = static_cast<std::size_t>((exponent - 1) / m_);
  return i <= shape_.size() ? shape_[i - 1] : 0.0;
}

Complex ConformalMap::w(Complex z) const {
  // z * sum_i a_i (z^m)^i, Horner in z^m
  const Complex zm = ipow(z, m_);
  Complex acc = 0.0;
  for (auto it = shape_.rbegin(); it != shape_.rend(); ++it) acc = (acc + *it) * zm;
  return z * acc;
}

Complex ConformalMap::w_prime(Complex z) const {
  const Complex zm = ipow(z, m_);
  Complex acc = 0.0;
  for (std::size_t i = shape_.size(); i >= 1; --i) {
    acc = (acc + shape_[i - 1] * static_cast<double>(static_cast<int>(i) * m_ + 1)) * zm;
  }
  return acc;
}

Complex ConformalMap::inverse(Complex x) const {
  Complex z = x;
  double err = std::abs(phi(z) - x);
  for (int it = 0; it < 60 && err > 1e-15; ++it) {
    const Complex step = (phi(z) - x) / phi_prime(z);
    double t = 1.0;
    for (int h = 0; h < 30; ++h, t *= 0.5) {
      const Complex trial = z - t * step;
      const double e = std::abs(phi(trial) - x);
      if (e < err) {
        z = trial;
        err = e;
        break;
      }
    }
    if (t < 1e-8) break;
  }
  if (err > 1e-12) {
    std::ostringstream os;
    os << "ConformalMap::inverse: Newton residual " << err << " at x = " << x;
    throw NonConvergenceError(os.str(), err);
  }
  return z;
}

double ConformalMap::injectivity_bound() const {
  double bound = 0.0;
  for (std::size_t i = 1; i <= shape_.size(); ++i) {
    bound += static_cast<double>(static_cast<int>(i) * m_ + 1) * std::abs(shape_[i - 1]);
  }
  return bound;
}

CosineSeries ConformalMap::boundary_normal_component() const {
  std::vector<double> c(shape_.size() + 1, 0.0);
  std::copy(shape_.begin(), shape_.end(), c.begin() + 1);
  return {m_, std::move(c)};
}

// --- FourierBesselField ----------------------------------------------------

FourierBesselField::FourierBesselField(double mu, int m, std::vector<double> coefficients)
    : mu_(mu), m_(m), coeffs_(std::move(coefficients)) {
  check_symmetry(m, "FourierBesselField");
  if (!(mu > 0.0)) throw DomainError("FourierBesselField: mu must be positive");
}

double FourierBesselField::value(double r, double theta) const {
  if (coeffs_.empty()) return 0.0;
  const int top = static_cast<int>(coeffs_.size() - 1) * m_;
  const auto jn = bessel_j_orders(top, mu_ * r);
  double sum = 0.0;
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    const int k = static_cast<int>(j) * m_;
    sum += coeffs_[j] * jn[static_cast<std::size_t>(k)] * std::cos(k * theta);
  }
  return sum;
}

double FourierBesselField::dr(double r, double theta) const {
  if (coeffs_.empty()) return 0.0;
  const int top = static_cast<int>(coeffs_.size() - 1) * m_ + 1;
  const auto jn = bessel_j_orders(top, mu_ * r);
  double sum = 0.0;
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    const int k = static_cast<int>(j) * m_;
    sum += coeffs_[j] * mu_ * radial_terms(k, jn).dj * std::cos(k * theta);
  }
  return sum;
}

Complex FourierBesselField::gradient(Complex x) const {
  const double r = std::abs(x);
  if (coeffs_.empty() || r == 0.0) return 0.0;
  const double theta = std::arg(x);
  const int top = static_cast<int>(coeffs_.size() - 1) * m_ + 1;
  const auto jn = bessel_j_orders(top, mu_ * r);
  double radial = 0.0;
  double angular = 0.0;  // (1/r) dv/dtheta
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    const int k = static_cast<int>(j) * m_;
    const auto t = radial_terms(k, jn);
    radial += coeffs_[j] * mu_ * t.dj * std::cos(k * theta);
    angular -= coeffs_[j] * k * t.j / r * std::sin(k * theta);
  }
  return std::polar(1.0, theta) * Complex(radial, angular);
}

double FourierBesselField::helmholtz_residual(double r, double theta) const {
  if (coeffs_.empty()) return 0.0;
  if (!(r > 0.0)) throw DomainError("helmholtz_residual: needs r > 0");
  const int top = static_cast<int>(coeffs_.size() - 1) * m_ + 2;
  const auto jn = bessel_j_orders(top, mu_ * r);
  double sum = 0.0;
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    const int k = static_cast<int>(j) * m_;
    const auto t = radial_terms(k, jn);
    // v_rr + v_r / r + v_thth / r^2 + mu^2 v
    const double radial = mu_ * mu_ * t.d2j + mu_ * t.dj / r;
    const double angular = -static_cast<double>(k) * k * t.j / (r * r);
    sum += coeffs_[j] * (radial + angular + mu_ * mu_ * t.j) * std::cos(k * theta);
  }
  return sum;
}

// --- Linearized operator ---------------------------------------------------

LinearizedInput::LinearizedInput(FourierBesselField v_, ConformalMap w_, double gamma_)
    : v(std::move(v_)), w(std::move(w_)), gamma(gamma_) {
  if (v.symmetry() != w.symmetry()) {
    std::ostringstream os;
    os << "LinearizedInput: symmetry mismatch between v (m=" << v.symmetry()
       << ") and w (m=" << w.symmetry() << ")";
    throw ConsistencyError(os.str());
  }
}

LinearizedOutput apply_linearized(const LinearizedInput& input, double mu) {
  if (std::abs(input.v.mu() - mu) > 1e-14 * std::max(1.0, mu)) {
    std::ostringstream os;
    os << "apply_linearized: v built at mu = " << input.v.mu() << ", applied at " << mu;
    throw ConsistencyError(os.str());
  }
  const auto trivial = trivial_solution(mu);
  const double ur = trivial.dr(1.0);
  const double urr = trivial.drr(1.0);
  const int m = input.v.symmetry();

  const auto b = input.v.coefficients();
  const auto a = input.w.shape();
  const std::size_t n = std::max(b.size(), a.size() + 1);
  const int top = static_cast<int>(n - 1) * m + 1;
  const auto jn = bessel_j_orders(top, mu);

  std::vector<double> kinematic(n, 0.0);
  std::vector<double> dynamic(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double bj = j < b.size() ? b[j] : 0.0;
    const double aj = (j >= 1 && j - 1 < a.size()) ? a[j - 1] : 0.0;
    const auto t = radial_terms(static_cast<int>(j) * m, jn);
    kinematic[j] = bj * t.j + ur * aj;
    dynamic[j] = ur * mu * t.dj * bj - urr * t.j * bj;
  }
  dynamic[0] += ur * input.gamma;

  FourierBesselField v = input.v;
  return {[v](double r, double theta) { return v.helmholtz_residual(r, theta); },
          CosineSeries(m, std::move(kinematic)), CosineSeries(m, std::move(dynamic))};
}

ConformalMap schwarz_lift(const CosineSeries& g) {
  const auto c = g.coefficients();
  const double mean = c.empty() ? 0.0 : c[0];
  if (std::abs(mean) > kMeanTolerance) {
    std::ostringstream os;
    os << "schwarz_lift: mean-zero violated (g_0 = " << mean << ")";
    throw SolvabilityError(os.str());
  }
  std::vector<double> shape;
  if (c.size() > 1) shape.assign(c.begin() + 1, c.end());
  return {g.symmetry(), std::move(shape)};
}

// --- Kernel ----------------------------------------------------------------

double KernelField::v(double r, double theta) const {
  return bessel_j(m, mu * r) * std::cos(m * theta);
}

Complex KernelField::w(Complex z) const { return amplitude * ipow(z, m + 1); }

LinearizedInput KernelField::as_input() const {
  return {FourierBesselField(mu, m, {0.0, 1.0}), ConformalMap(m, {amplitude}), 0.0};
}

KernelField kernel_fields(int m, double mu) {
  if (m < 4 || m > 64) {
    std::ostringstream os;
    os << "kernel_fields: m = " << m << " outside 4 <= m <= 64";
    throw DomainError(os.str());
  }
  const auto trivial = trivial_solution(mu);
  const double amplitude = bessel_j(m, mu) * trivial.j0_mu / (mu * bessel_j(1, mu));
  return {m, mu, amplitude};
}

// --- First-order family ----------------------------------------------------

double FirstOrderFamily::pulled_back(double r, double theta) const {
  const double j0 = bessel_j(0, mu);
  const double j1 = bessel_j(1, mu);
  const double jm = bessel_j(m, mu);
  const double base = bessel_j(0, mu * r) / j0;
  const double bracket = j1 * bessel_j(m, mu * r) / (j0 * jm) -
                         bessel_j(1, mu * r) / j0 * std::pow(r, m + 1);
  return base + eps * mu * bracket * std::cos(m * theta);
}

double FirstOrderFamily::physical(Complex x) const {
  const double r = std::abs(x);
  const double theta = std::arg(x);
  return bessel_j(0, mu * r) / bessel_j(0, mu) +
         eps * field_weight * bessel_j(m, mu * r) * std::cos(m * theta);
}

double FirstOrderFamily::value(Complex x) const {
  const Complex z = map.inverse(x);
  return pulled_back(std::abs(z), std::arg(z));
}

double FirstOrderFamily::boundary_value(double theta) const {
  return physical(map.phi(std::polar(1.0, theta)));
}

FirstOrderFamily asymptotic_family(int m, double eps) {
  if (m < 4 || m > 64) {
    std::ostringstream os;
    os << "asymptotic_family: m = " << m << " outside 4 <= m <= 64";
    throw DomainError(os.str());
  }
  if (!(std::abs(eps) <= 0.2) || (m + 1) * std::abs(eps) >= 1.0) {
    std::ostringstream os;
    os << "asymptotic_family: eps = " << eps
       << " fails |eps| <= 0.2 and the injectivity bound (m+1)|eps| < 1";
    throw DomainError(os.str());
  }
  const double mu = find_mu(m).mu;
  const auto trivial = trivial_solution(mu);
  FirstOrderFamily family{m,
                          eps,
                          mu,
                          ConformalMap::single_mode(m, eps),
                          trivial.c0,
                          mu * mu,
                          mu * bessel_j(1, mu) / (trivial.j0_mu * bessel_j(m, mu))};
  return family;
}

}  // namespace helmbif
