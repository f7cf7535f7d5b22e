#include <doctest.h>

#include <cmath>
#include <vector>

#include "helmbif/branch.hpp"
#include "helmbif/errors.hpp"
#include "helmbif/wronskian.hpp"

using namespace helmbif;

namespace {

const std::vector<double> kEps{1e-3, 2e-3, 4e-3, 8e-3, 1.6e-2};

}  // namespace

TEST_CASE("fit_loglog recovers a power law") {
  const std::vector<double> x{0.1, 0.2, 0.5, 1.0};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * std::pow(v, 2.5));
  const auto fit = fit_loglog(x, y);
  CHECK(fit.slope == doctest::Approx(2.5).epsilon(1e-13));
  CHECK(fit.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-13));
  CHECK_THROWS_AS(fit_loglog(std::vector<double>{1.0}, std::vector<double>{1.0}), DegenerateDataError);
  CHECK_THROWS_AS(fit_loglog(std::vector<double>{1.0, 2.0}, std::vector<double>{1.0, 0.0}),
                  DegenerateDataError);
}

TEST_CASE("defect vanishes on the disk and grows off it") {
  const double mu = find_mu(4).mu;
  CHECK(overdetermination_defect(ConformalMap::identity(4), mu * mu) < 1e-10);
  CHECK(overdetermination_defect(ConformalMap::single_mode(4, 0.01), mu * mu) > 1e-4);
}

TEST_CASE("select_modes grows K with the perturbation") {
  const double mu = find_mu(4).mu;
  SolverSettings s;
  CHECK(select_modes(ConformalMap::identity(4), mu * mu, s) == s.modes);
  CHECK(select_modes(ConformalMap::single_mode(4, 0.05), mu * mu, s) > s.modes);
}

TEST_CASE("scaling signature at mu_m and at a control value") {
  for (int m : {4, 5, 6}) {
    CAPTURE(m);
    const double mu = find_mu(m).mu;
    const auto at = scaling_study(m, kEps, mu);
    CHECK(at.m == m);
    CHECK(at.samples.size() == kEps.size());
    CHECK(at.slope == doctest::Approx(2.0).epsilon(0.125));
    const auto off = scaling_study(m, kEps, mu + 0.3);
    CHECK(off.slope == doctest::Approx(1.0).epsilon(0.2));
  }
}

TEST_CASE("scaling_study rejects degenerate input") {
  const double mu = find_mu(4).mu;
  CHECK_THROWS_AS(scaling_study(4, std::vector<double>{0.01}, mu), DegenerateDataError);
  CHECK_THROWS_AS(scaling_study(4, std::vector<double>{1e-3, 2e-3, 3e-3, 4e-3}, mu),
                  DegenerateDataError);
  CHECK_THROWS_AS(scaling_study(4, std::vector<double>{1e-3, 4e-3, 2e-3, 2e-2}, mu), DomainError);
  CHECK_THROWS_AS(scaling_study(4, std::vector<double>{1e-3, 2e-3, 4e-3, 0.1}, mu), DomainError);
}

TEST_CASE("zero-amplitude continuation returns the trivial point") {
  const double mu = find_mu(4).mu;
  const auto branch = newton_continue(4, 0.0, 1, 3);
  REQUIRE(branch.size() == 1);
  const auto& p = branch.front();
  CHECK(p.lambda == doctest::Approx(mu * mu).epsilon(1e-15));
  CHECK(p.c == doctest::Approx(trivial_solution(mu).c0).epsilon(1e-15));
  CHECK(p.gamma == 0.0);
  CHECK(p.defect < 1e-10);
  CHECK(p.converged);
}

TEST_CASE("small-amplitude continuation converges") {
  const double mu = find_mu(4).mu;
  const auto branch = newton_continue(4, 0.002, 2, 3);
  REQUIRE(branch.size() == 3);
  for (const auto& p : branch) {
    CHECK(p.converged);
    CHECK(p.defect <= 1e-9);
    CHECK(p.c < 0.0);
  }
  CHECK(branch.back().eps == doctest::Approx(0.002));
  CHECK(branch.back().map.coefficient(5) == doctest::Approx(0.002));
  CHECK(std::abs(branch.back().lambda - mu * mu) < 1e-3);
}

TEST_CASE("continuation to eps = 0.05 stalls at the shape-truncation floor") {
  try {
    newton_continue(4, 0.05, 10, 3);
    FAIL("expected ContinuationError");
  } catch (const ContinuationError& e) {
    CHECK(e.accepted().size() >= 1);
    CHECK(e.last_iterate().defect > 1e-9);
    CHECK(e.residual() == e.last_iterate().defect);
  }
}

TEST_CASE("accept_stationary keeps the whole branch") {
  SolverSettings s;
  s.accept_stationary = true;
  const double mu = find_mu(4).mu;
  const double c0 = trivial_solution(mu).c0;
  const auto branch = newton_continue(4, 0.05, 10, 3, s);
  REQUIRE(branch.size() == 11);
  const auto diag = branch_diagnostics(branch);
  for (std::size_t i = 0; i < branch.size(); ++i) {
    CHECK(diag[i].c_negative);
    CHECK(diag[i].symmetry_residual < 1e-14);
    CHECK(branch[i].gamma == doctest::Approx(c0 - branch[i].c));
  }
  // both corrections are quadratic in eps
  std::vector<double> eps, dl, dc;
  for (std::size_t i = 1; i < branch.size(); ++i) {
    eps.push_back(branch[i].eps);
    dl.push_back(std::abs(branch[i].lambda - mu * mu));
    dc.push_back(std::abs(branch[i].c - c0));
  }
  CHECK(fit_loglog(eps, dl).slope >= 1.8);
  CHECK(fit_loglog(eps, dc).slope >= 1.8);
  CHECK(diag.back().non_circularity == doctest::Approx(0.05 / std::sqrt(2.0)).epsilon(0.2));
}

TEST_CASE("newton_continue preconditions") {
  CHECK_THROWS_AS(newton_continue(3, 0.01, 1, 3), DomainError);
  CHECK_THROWS_AS(newton_continue(4, 0.06, 1, 3), DomainError);
  CHECK_THROWS_AS(newton_continue(4, 0.01, 0, 3), DomainError);
  CHECK_THROWS_AS(newton_continue(4, 0.01, 1, 5), DomainError);
  CHECK_THROWS_AS(newton_continue(4, 0.01, 1, -1), DomainError);
}

TEST_CASE("non_circularity") {
  CHECK(non_circularity(ConformalMap::identity(4)) < 1e-15);
  for (double eps : {0.001, 0.01, 0.05}) {
    CHECK(non_circularity(ConformalMap::single_mode(5, eps)) ==
          doctest::Approx(eps / std::sqrt(2.0)).epsilon(0.02));
  }
}
