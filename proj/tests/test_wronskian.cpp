#include <doctest.h>

#include <algorithm>
#include <random>
#include <thread>

#include "helmbif/errors.hpp"
#include "helmbif/wronskian.hpp"
#include "oracles.hpp"

using namespace helmbif;

TEST_CASE("wronskian frozen values") {
  // mpmath, 60 digits
  CHECK(wronskian(1, 4, 5.5200781102863106) ==
        doctest::Approx(-0.0121475825121492).epsilon(1e-12));
  CHECK(wronskian(1, 5, 4.0) == doctest::Approx(0.042614933633311946).epsilon(1e-12));
}

TEST_CASE("wronskian agrees with the series oracle") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> order(0, 12);
  std::uniform_real_distribution<double> arg(0.5, 10.0);
  for (int i = 0; i < 100; ++i) {
    const int k = order(rng);
    const int l = order(rng);
    const double mu = arg(rng);
    CHECK(wronskian(k, l, mu) ==
          doctest::Approx(oracle::series_wronskian(k, l, mu)).scale(1.0).epsilon(1e-12));
  }
}

TEST_CASE("wronskian is antisymmetric") {
  for (double mu : {1.0, 4.4, 7.3}) {
    CHECK(wronskian(3, 3, mu) == 0.0);
    CHECK(wronskian(2, 7, mu) == doctest::Approx(-wronskian(7, 2, mu)));
  }
}

TEST_CASE("derivative identity matches finite differences of mu W") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> order(0, 20);
  std::uniform_real_distribution<double> arg(1.0, 8.0);
  for (int i = 0; i < 200; ++i) {
    const int k = order(rng);
    const int l = order(rng);
    const double mu = arg(rng);
    const double fd =
        oracle::central_diff([k, l](double t) { return t * wronskian(k, l, t); }, mu, 1e-5);
    CHECK(mu_wronskian_derivative(k, l, mu) == doctest::Approx(fd).scale(1.0).epsilon(1e-8));
  }
  CHECK_THROWS_AS(mu_wronskian_derivative(1, 4, 0.0), DomainError);
}

TEST_CASE("operating interval") {
  const auto& iv = operating_interval();
  CHECK(iv.j11 == doctest::Approx(3.8317059702075123).epsilon(1e-14));
  CHECK(iv.j02 == doctest::Approx(5.5200781102863106).epsilon(1e-14));
  CHECK(iv.j12 == doctest::Approx(7.0155866698156188).epsilon(1e-14));
}

TEST_CASE("find_mu frozen values") {
  // mpmath sign bisection on W_{1,m} at 60 digits
  const std::pair<int, double> table[] = {{4, 5.342907124862648302}, {5, 4.8270645647856398252},
                                          {6, 4.5991828144058450752}, {7, 4.4619141821414016212},
                                          {8, 4.368336086987217823},  {64, 3.8920879083909485788}};
  for (auto [m, mu] : table) {
    CAPTURE(m);
    CHECK(find_mu(m).mu == doctest::Approx(mu).epsilon(1e-14));
  }
  const auto r4 = find_mu(4);
  CHECK(r4.m == 4);
  CHECK(r4.j0 == doctest::Approx(-0.060953648).epsilon(1e-7));
  CHECK(r4.j1 == doctest::Approx(-0.34610427).epsilon(1e-7));
  CHECK(r4.jm == doctest::Approx(0.39959607).epsilon(1e-7));
  CHECK(r4.slope == doctest::Approx(-0.3882771164).epsilon(1e-9));
  CHECK(find_mu(8).slope == doctest::Approx(-0.02075961019).epsilon(1e-9));
}

TEST_CASE("find_mu agrees with a sign-scan oracle") {
  const auto& iv = operating_interval();
  for (int m = 4; m <= 10; ++m) {
    const double ref = oracle::scan_root(
        [m](double mu) { return oracle::series_wronskian(1, m, mu); }, iv.j11 + 1e-9, iv.j12, 1);
    CHECK(find_mu(m).mu == doctest::Approx(ref).epsilon(1e-13));
  }
}

TEST_CASE("find_mu roots are ordered inside the operating interval") {
  const auto& iv = operating_interval();
  double previous = iv.j02;
  for (int m = 4; m <= 64; ++m) {
    const auto r = find_mu(m);
    CAPTURE(m);
    CHECK(r.mu > iv.j11);
    CHECK(r.mu < previous);
    CHECK(r.bracket.first <= r.mu);
    CHECK(r.mu <= r.bracket.second);
    CHECK(r.slope < 0.0);
    CHECK(r.j0 < 0.0);
    CHECK(r.j1 < 0.0);
    CHECK(r.jm > 0.0);
    CHECK(wronskian(1, m + 1, r.mu) < 0.0);
    previous = r.mu;
  }
}

TEST_CASE("find_mu rejects m outside 4..64") {
  for (int m : {0, 1, 2, 3, 65}) CHECK_THROWS_AS(find_mu(m), DomainError);
}

TEST_CASE("find_mu is safe to call concurrently") {
  std::vector<double> results(8);
  std::vector<std::thread> pool;
  for (int t = 0; t < 8; ++t) {
    pool.emplace_back([&results, t] { results[t] = find_mu(20 + t % 3).mu; });
  }
  for (auto& th : pool) th.join();
  for (int t = 0; t < 8; ++t) CHECK(results[t] == find_mu(20 + t % 3).mu);
}

TEST_CASE("verify_lemma1") {
  const auto report = verify_lemma1(8);
  CHECK(report.m_max == 8);
  CHECK(report.roots.size() == 5);
  CHECK(report.all_passed());
  CHECK(report.identity_max_residual < 1e-12);
  auto has = [&report](const std::string& name) {
    return std::any_of(report.items.begin(), report.items.end(),
                       [&name](const CheckItem& it) { return it.name == name; });
  };
  for (const char* name : {"bracket", "below_j02", "residual", "simple", "signs",
                           "W1_next_negative", "decreasing", "wronskian_identity"}) {
    CAPTURE(name);
    CHECK(has(name));
  }
  CHECK_THROWS_AS(verify_lemma1(3), DomainError);
  CHECK_THROWS_AS(verify_lemma1(65), DomainError);
}
