#include "helmbif/helmholtz.hpp"

#include <Eigen/Dense>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "helmbif/errors.hpp"
#include "helmbif/special.hpp"

namespace helmbif {

BoundarySample boundary_sample(const ConformalMap& map, double theta) {
  const Complex z = std::polar(1.0, theta);
  // tangent i z phi'(z), rotated by -pi/2
  const Complex outward = z * map.phi_prime(z);
  const double speed = std::abs(outward);
  return {theta, map.phi(z), outward / speed, speed};
}

SymmetricDomain build_domain(const ConformalMap& map, int samples) {
  if (samples < 8) {
    std::ostringstream os;
    os << "build_domain: need at least 8 samples per sector, got " << samples;
    throw DomainError(os.str());
  }
  if (!map.injective()) {
    std::ostringstream os;
    os << "build_domain: injectivity certificate failed (sum (im+1)|a_i| = "
       << map.injectivity_bound() << " >= 1)";
    throw DomainError(os.str());
  }
  const int m = map.symmetry();
  const double h = std::numbers::pi / (static_cast<double>(m) * samples);

  SymmetricDomain domain{map, {}, {}};
  domain.collocation.reserve(static_cast<std::size_t>(samples));
  domain.validation.reserve(static_cast<std::size_t>(samples) + 1);
  for (int i = 0; i < samples; ++i) {
    auto s = boundary_sample(map, (i + 0.5) * h);
    s.weight *= h;
    domain.collocation.push_back(s);
  }
  for (int i = 0; i <= samples; ++i) {
    auto s = boundary_sample(map, i * h);
    s.weight *= (i == 0 || i == samples) ? 0.5 * h : h;
    domain.validation.push_back(s);
  }
  return domain;
}

DirichletSolution solve_dirichlet(const SymmetricDomain& domain, double lambda, int modes,
                                  double tolerance) {
  if (!(lambda > 0.0)) throw DomainError("solve_dirichlet: lambda must be positive");
  if (modes < 0) throw DomainError("solve_dirichlet: mode count must be nonnegative");
  const auto rows = static_cast<Eigen::Index>(domain.collocation.size());
  const Eigen::Index cols = modes + 1;
  if (rows < 8 * cols) {
    std::ostringstream os;
    os << "solve_dirichlet: " << rows << " collocation nodes < 8(K+1) = " << 8 * cols;
    throw DomainError(os.str());
  }

  const int m = domain.map.symmetry();
  const double mu = std::sqrt(lambda);
  const int top = modes * m;

  Eigen::MatrixXd a(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Complex x = domain.collocation[static_cast<std::size_t>(i)].z;
    const double psi = std::arg(x);
    const auto jn = bessel_j_orders(top, mu * std::abs(x));
    for (Eigen::Index j = 0; j < cols; ++j) {
      const int k = static_cast<int>(j) * m;
      a(i, j) = jn[static_cast<std::size_t>(k)] * std::cos(k * psi);
    }
  }
  // unit max-norm columns; high orders are otherwise many decades smaller
  Eigen::VectorXd scale(cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    scale(j) = a.col(j).cwiseAbs().maxCoeff();
    if (scale(j) == 0.0) scale(j) = 1.0;
    a.col(j) /= scale(j);
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  const Eigen::VectorXd x = qr.solve(Eigen::VectorXd::Ones(rows));

  std::vector<double> coeffs(static_cast<std::size_t>(cols));
  for (Eigen::Index j = 0; j < cols; ++j) coeffs[static_cast<std::size_t>(j)] = x(j) / scale(j);

  const Eigen::VectorXd diag = qr.matrixR().diagonal().cwiseAbs();
  const double smallest = diag.minCoeff();
  const double conditioning =
      smallest > 0.0 ? diag.maxCoeff() / smallest : std::numeric_limits<double>::infinity();

  DirichletSolution sol{lambda, FourierBesselField(mu, m, std::move(coeffs)), 0.0,
                        conditioning, {}};
  if (conditioning > kIllConditioned) {
    std::ostringstream os;
    os << "ill-conditioned collocation system (diagnostic " << conditioning << ")";
    sol.warning = os.str();
  }

  double residual = 0.0;
  for (const auto& s : domain.validation) {
    residual = std::max(residual, std::abs(sol.value(s.z) - 1.0));
  }
  sol.boundary_residual = residual;
  if (!(residual <= tolerance)) {
    std::ostringstream os;
    os << "solve_dirichlet: boundary residual " << residual << " exceeds tolerance "
       << tolerance << " with K = " << modes;
    throw NonConvergenceError(os.str(), residual);
  }
  return sol;
}

double normal_derivative_at(const DirichletSolution& sol, const ConformalMap& map,
                            double theta) {
  const auto s = boundary_sample(map, theta);
  const Complex g = sol.gradient(s.z);
  return g.real() * s.normal.real() + g.imag() * s.normal.imag();
}

BoundaryTrace normal_derivative(const DirichletSolution& sol, const SymmetricDomain& domain) {
  BoundaryTrace trace;
  trace.theta.reserve(domain.validation.size());
  trace.values.reserve(domain.validation.size());
  trace.weights.reserve(domain.validation.size());
  for (const auto& s : domain.validation) {
    const Complex g = sol.gradient(s.z);
    trace.theta.push_back(s.theta);
    trace.values.push_back(g.real() * s.normal.real() + g.imag() * s.normal.imag());
    trace.weights.push_back(s.weight);
  }
  return trace;
}

Deviation deviation(std::span<const double> values, std::span<const double> weights) {
  if (values.size() != weights.size() || values.empty()) {
    throw DomainError("deviation: values and weights must be nonempty and equal length");
  }
  double total = 0.0;
  double mean = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    total += weights[i];
    mean += weights[i] * values[i];
  }
  mean /= total;
  double var = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - mean;
    var += weights[i] * d * d;
  }
  return {mean, std::sqrt(var / total)};
}

}  // namespace helmbif
