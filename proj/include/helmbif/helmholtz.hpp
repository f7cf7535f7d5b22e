#pragma once

#include <span>
#include <string>
#include <vector>

#include "helmbif/fields.hpp"

namespace helmbif {

struct BoundarySample {
  double theta = 0.0;   // parameter angle on the unit circle
  Complex z;            // phi(e^{i theta})
  Complex normal;       // outward unit normal at z
  double weight = 0.0;  // arc-length quadrature weight
};

/// Omega = phi(D) sampled on the fundamental sector theta in [0, pi/m].
/// Collocation nodes sit at midpoints (i + 1/2) h, validation nodes at i h,
/// h = pi / (m M); both carry arc-length weights that integrate exactly the
/// symmetric trigonometric polynomials of low degree.
struct SymmetricDomain {
  ConformalMap map;
  std::vector<BoundarySample> collocation;
  std::vector<BoundarySample> validation;
};

/// Throws DomainError if the map fails its injectivity certificate or M < 8.
SymmetricDomain build_domain(const ConformalMap& map, int samples);

/// Boundary point and outward unit normal at an arbitrary parameter angle.
BoundarySample boundary_sample(const ConformalMap& map, double theta);

/// u(x) = sum_j a_j J_{jm}(sqrt(lambda) |x|) cos(j m arg x) with u ~ 1 on the
/// boundary of the domain it was fitted on.
struct DirichletSolution {
  double lambda = 0.0;
  FourierBesselField field;
  double boundary_residual = 0.0;  // max |u - 1| on the validation grid
  double conditioning = 0.0;       // |R_11| / |R_nn| of the scaled system
  std::string warning;             // set when conditioning exceeds 1e12

  std::span<const double> coefficients() const { return field.coefficients(); }
  double value(Complex x) const { return field.value(x); }
  Complex gradient(Complex x) const { return field.gradient(x); }
};

inline constexpr double kDefaultDirichletTolerance = 1.0e-9;
inline constexpr double kIllConditioned = 1.0e12;

/// Least-squares fit of modes 0, m, ..., K m to u = 1 at the collocation
/// nodes by column-pivoted Householder QR. Requires at least 8(K+1)
/// collocation nodes. Throws NonConvergenceError if the validation residual
/// exceeds `tolerance`.
DirichletSolution solve_dirichlet(const SymmetricDomain& domain, double lambda, int modes,
                                  double tolerance = kDefaultDirichletTolerance);

struct BoundaryTrace {
  std::vector<double> theta;
  std::vector<double> values;
  std::vector<double> weights;
};

/// n . grad u on the validation nodes.
BoundaryTrace normal_derivative(const DirichletSolution& sol, const SymmetricDomain& domain);

/// n . grad u at phi(e^{i theta}).
double normal_derivative_at(const DirichletSolution& sol, const ConformalMap& map,
                            double theta);

struct Deviation {
  double mean = 0.0;
  double dev = 0.0;  // weighted RMS about the mean
};

Deviation deviation(std::span<const double> values, std::span<const double> weights);

}  // namespace helmbif
