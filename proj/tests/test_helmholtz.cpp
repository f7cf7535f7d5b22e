#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "helmbif/errors.hpp"
#include "helmbif/helmholtz.hpp"
#include "helmbif/special.hpp"
#include "helmbif/wronskian.hpp"
#include "oracles.hpp"

using namespace helmbif;

namespace {

constexpr double kPi = std::numbers::pi;

double total_weight(const std::vector<BoundarySample>& nodes) {
  return std::accumulate(nodes.begin(), nodes.end(), 0.0,
                         [](double acc, const BoundarySample& s) { return acc + s.weight; });
}

}  // namespace

TEST_CASE("disk domain geometry") {
  const auto domain = build_domain(ConformalMap::identity(4), 32);
  CHECK(domain.collocation.size() == 32);
  CHECK(domain.validation.size() == 33);
  for (const auto& s : domain.validation) {
    CHECK(std::abs(s.z - std::polar(1.0, s.theta)) < 1e-15);
    CHECK(std::abs(s.normal - s.z) < 1e-15);
  }
  // one half-sector of arc length pi / m
  CHECK(total_weight(domain.collocation) == doctest::Approx(kPi / 4).epsilon(1e-14));
  CHECK(total_weight(domain.validation) == doctest::Approx(kPi / 4).epsilon(1e-14));
  CHECK(domain.validation.front().theta == 0.0);
  CHECK(domain.validation.back().theta == doctest::Approx(kPi / 4));
}

TEST_CASE("boundary normal is outward and unit") {
  const ConformalMap map(5, {0.04, 0.002});
  for (double th : {0.05, 0.6, 2.0}) {
    const auto s = boundary_sample(map, th);
    CHECK(std::abs(s.normal) == doctest::Approx(1.0));
    const double h = 1e-6;
    const Complex tangent = (map.phi(std::polar(1.0, th + h)) - map.phi(std::polar(1.0, th - h))) / (2 * h);
    CHECK(std::abs(std::real(std::conj(tangent) * s.normal)) < 1e-8);
    CHECK(std::real(std::conj(s.z) * s.normal) > 0.0);
    CHECK(s.weight == doctest::Approx(std::abs(tangent)).epsilon(1e-8));
  }
}

TEST_CASE("perturbed domain arc length converges") {
  const ConformalMap map(4, {0.05});
  const double coarse = total_weight(build_domain(map, 40).validation);
  const double fine = total_weight(build_domain(map, 400).validation);
  CHECK(coarse == doctest::Approx(fine).epsilon(1e-12));
}

TEST_CASE("trivial reproduction on the disk") {
  const double mu = find_mu(4).mu;
  const auto domain = build_domain(ConformalMap::identity(4), 8 * 13);
  const auto sol = solve_dirichlet(domain, mu * mu, 12);
  const auto a = sol.coefficients();
  REQUIRE(a.size() == 13);
  CHECK(a[0] == doctest::Approx(1.0 / oracle::series_j(0, mu)).epsilon(1e-12));
  // J_{jm}(mu r) spans ~40 decades on the disk, so a raw coefficient is only
  // meaningful weighted by its mode's boundary size max_r |J_{jm}(mu r)|
  for (std::size_t j = 1; j < a.size(); ++j) {
    CHECK(std::abs(a[j] * oracle::series_j(static_cast<int>(j) * 4, mu)) <= 1e-12);
  }
  const double c0 = -mu * oracle::series_j(1, mu) / oracle::series_j(0, mu);
  const auto trace = normal_derivative(sol, domain);
  for (double g : trace.values) CHECK(g == doctest::Approx(c0).epsilon(1e-10 / std::abs(c0)));
  CHECK(sol.boundary_residual < 1e-12);
  CHECK(sol.warning.empty());
  CHECK(sol.lambda == mu * mu);
}

TEST_CASE("Dirichlet solve on a perturbed domain") {
  const ConformalMap map(5, {0.02, 0.001});
  const double lambda = 21.0;
  const auto domain = build_domain(map, 8 * 17);
  const auto sol = solve_dirichlet(domain, lambda, 16);
  CHECK(sol.boundary_residual < 1e-9);
  for (double th : {0.013, 0.77, 3.0, 5.1}) {
    const Complex x = map.phi(std::polar(1.0, th));
    CHECK(sol.value(x) == doctest::Approx(1.0).epsilon(1e-9));
  }
  // normal derivative from the gradient matches a finite difference along n
  const auto s = boundary_sample(map, 0.4);
  const double h = 1e-6;
  const double fd = (sol.value(s.z + h * s.normal) - sol.value(s.z - h * s.normal)) / (2 * h);
  CHECK(normal_derivative_at(sol, map, 0.4) == doctest::Approx(fd).epsilon(1e-7));
}

TEST_CASE("too few modes misses the tolerance") {
  const ConformalMap map(4, {0.05});
  const auto domain = build_domain(map, 8 * 3);
  CHECK_THROWS_AS(solve_dirichlet(domain, 28.0, 2), NonConvergenceError);
  try {
    solve_dirichlet(domain, 28.0, 2);
  } catch (const NonConvergenceError& e) {
    CHECK(e.residual() > 1e-9);
  }
}

TEST_CASE("solver preconditions") {
  CHECK_THROWS_AS(build_domain(ConformalMap::identity(4), 7), DomainError);
  CHECK_THROWS_AS(build_domain(ConformalMap::single_mode(4, 0.25), 64), DomainError);
  const auto domain = build_domain(ConformalMap::identity(4), 40);
  CHECK_THROWS_AS(solve_dirichlet(domain, 0.0, 4), DomainError);
  CHECK_THROWS_AS(solve_dirichlet(domain, 28.0, -1), DomainError);
  CHECK_THROWS_AS(solve_dirichlet(domain, 28.0, 5), DomainError);  // 40 < 8 * 6
}

TEST_CASE("deviation") {
  const std::vector<double> w{1.0, 2.0, 1.0};
  const auto flat = deviation(std::vector<double>{3.0, 3.0, 3.0}, w);
  CHECK(flat.mean == doctest::Approx(3.0));
  CHECK(flat.dev == doctest::Approx(0.0));
  const auto d = deviation(std::vector<double>{1.0, 2.0, 3.0}, w);
  CHECK(d.mean == doctest::Approx(2.0));
  CHECK(d.dev == doctest::Approx(std::sqrt(0.5)));
  CHECK_THROWS_AS(deviation(std::vector<double>{}, std::vector<double>{}), DomainError);
  CHECK_THROWS_AS(deviation(std::vector<double>{1.0}, w), DomainError);
}
