#include "doctest.h"

#include <cmath>

#include "sieve/geometry.hpp"

using namespace sieve;

TEST_CASE("periodic config: two holes at eps=1/2") {
  Domain2D dom{1.0, 1.0};
  auto cfg = make_periodic_config(dom, 0.5, [](double e) { return e / 16.0; });
  REQUIRE(cfg.holes.size() == 2);
  CHECK(cfg.holes[0].center == doctest::Approx(0.25));
  CHECK(cfg.holes[1].center == doctest::Approx(0.75));
  CHECK(cfg.holes[0].guard_radius == doctest::Approx(0.25));
  CHECK(cfg.holes[0].half_width == doctest::Approx(1.0 / 32.0));
  CHECK_FALSE(cfg.degenerate);
}

TEST_CASE("periodic config: hole count is floor(L/eps)") {
  Domain2D dom{1.0, 1.0};
  auto cfg = make_periodic_config(dom, 0.125, [](double e) { return e / 32.0; });
  CHECK(cfg.holes.size() == 8);
}

TEST_CASE("periodic config: d = eps/4 is rejected") {
  Domain2D dom{1.0, 1.0};
  CHECK_THROWS_AS(
      make_periodic_config(dom, 0.25, [](double e) { return e / 4.0; }),
      std::invalid_argument);
}

TEST_CASE("periodic config: rho >= min(1, H/2) is rejected") {
  Domain2D dom{4.0, 0.5};  // H/2 = 0.25, eps/2 = 0.5 violates the bound
  CHECK_THROWS_AS(
      make_periodic_config(dom, 1.0, [](double e) { return e / 32.0; }),
      std::invalid_argument);
}

TEST_CASE("regular config: uniform cells, gamma=1, alpha=8 gives d = eps^2/2") {
  // d_k = (4 gamma area / alpha)^{1/(n-2)} with n=3, area=eps^2:
  // (4 * 1 * eps^2 / 8)^1 = eps^2 / 2.
  double eps = 1.0 / 16.0;
  Domain2D dom{1.0, 1.0};
  std::vector<GammaCell> cells;
  for (int k = 0; k < 16; ++k)
    cells.push_back({(k + 0.5) * eps, eps * eps, eps, 0.0});
  auto cfg = make_regular_config(dom, cells, const_gamma(1.0), 3, 8.0);
  REQUIRE(cfg.holes.size() == 16);
  for (const auto& h : cfg.holes)
    CHECK(h.half_width == doctest::Approx(eps * eps / 2.0).epsilon(1e-14));
  CHECK_FALSE(cfg.degenerate);
}

TEST_CASE("regular config: gamma=0 gives degenerate zero-size holes") {
  double eps = 1.0 / 8.0;
  Domain2D dom{1.0, 1.0};
  std::vector<GammaCell> cells;
  for (int k = 0; k < 8; ++k)
    cells.push_back({(k + 0.5) * eps, eps * eps, eps, 0.0});
  auto cfg = make_regular_config(dom, cells, const_gamma(0.0), 3, 8.0);
  CHECK(cfg.degenerate);
  for (const auto& h : cfg.holes) CHECK(h.half_width == 0.0);
}

TEST_CASE("regular config: diam/rho = 100 is rejected") {
  Domain2D dom{1.0, 1.0};
  std::vector<GammaCell> cells;
  cells.push_back({0.5, 0.01, 0.5, 0.005});  // diam/rho = 100 > 8
  CHECK_THROWS_AS(make_regular_config(dom, cells, const_gamma(1.0), 3, 8.0),
                  std::invalid_argument);
}

TEST_CASE("regular config: overlapping cells are rejected") {
  Domain2D dom{1.0, 1.0};
  std::vector<GammaCell> cells;
  cells.push_back({0.30, 0.01, 0.25, 0.0});
  cells.push_back({0.40, 0.01, 0.25, 0.0});  // centers 0.1 apart, need 0.25
  CHECK_THROWS_AS(make_regular_config(dom, cells, const_gamma(1.0), 3, 8.0),
                  std::invalid_argument);
}

TEST_CASE("validate: strictly overlapping guard balls fail") {
  SieveConfig cfg;
  cfg.domain = {1.0, 1.0};
  cfg.eps = 0.25;
  cfg.holes.push_back({0.30, 0.001, 0.1});
  cfg.holes.push_back({0.45, 0.001, 0.1});  // gap 0.15 < 0.2
  auto report = validate_assumptions(cfg);
  CHECK_FALSE(report.ok());
  auto* issue = report.find("guard-balls-disjoint");
  REQUIRE(issue != nullptr);
  CHECK_FALSE(issue->pass);
}

TEST_CASE("validate: touching guard balls pass (disjointness is >=)") {
  SieveConfig cfg;
  cfg.domain = {1.0, 1.0};
  cfg.eps = 0.25;
  cfg.holes.push_back({0.30, 0.001, 0.1});
  cfg.holes.push_back({0.50, 0.001, 0.1});  // gap exactly 0.2
  auto report = validate_assumptions(cfg);
  CHECK(report.ok());
}

TEST_CASE("validate: d = rho/4 fails the size-ratio check") {
  SieveConfig cfg;
  cfg.domain = {1.0, 1.0};
  cfg.eps = 0.25;
  cfg.holes.push_back({0.5, 0.025, 0.1});  // d/rho = 1/4 > 1/8
  auto report = validate_assumptions(cfg);
  CHECK_FALSE(report.ok());
  auto* issue = report.find("hole-size-ratio");
  REQUIRE(issue != nullptr);
  CHECK_FALSE(issue->pass);
  CHECK(issue->worst_hole == 0);
}

TEST_CASE("validate: round-trip on generated configs") {
  Domain2D dom{1.0, 1.0};
  for (double eps : {0.5, 0.25, 0.125, 0.0625}) {
    auto cfg =
        make_periodic_config(dom, eps, [](double e) { return e * e / 100.0; });
    CHECK(validate_assumptions(cfg).ok());
  }
  std::vector<GammaCell> cells;
  double eps = 1.0 / 16.0;
  for (int k = 0; k < 16; ++k)
    cells.push_back({(k + 0.5) * eps, eps * eps, eps, 0.0});
  auto cfg = make_regular_config(dom, cells, const_gamma(1.0), 3, 8.0);
  CHECK(validate_assumptions(cfg).ok());
}

TEST_CASE("rates: n=2 with d=rho^2 gives eta = |ln rho|^{-1/2}") {
  SieveConfig cfg;
  cfg.domain = {1.0, 1.0};
  cfg.eps = 0.1;
  cfg.n = 2;
  double rho = 0.05;
  cfg.holes.push_back({0.5, rho * rho, rho});
  auto rp = rate_params(cfg);
  CHECK(rp.eta_k[0] ==
        doctest::Approx(1.0 / std::sqrt(std::abs(std::log(rho)))).epsilon(1e-14));
}

TEST_CASE("rates: n=3 with d/rho = 1/64 gives eta = 0.125") {
  SieveConfig cfg;
  cfg.domain = {1.0, 1.0};
  cfg.eps = 0.1;
  cfg.n = 3;
  double rho = 0.064;
  cfg.holes.push_back({0.5, rho / 64.0, rho});
  auto rp = rate_params(cfg);
  CHECK(rp.eta_k[0] == doctest::Approx(0.125).epsilon(1e-14));
}

TEST_CASE("rates: n=2 mu includes the rho^{1/2} gamma |ln rho| term") {
  // rho = 1/8, d = e^{-8} makes gamma_k = 1/(|ln d| rho) = 1 exactly, so the
  // extra n=2 term is sqrt(1/8) * ln 8 = 0.7351936076014104.
  SieveConfig cfg;
  cfg.domain = {1.0, 1.0};
  cfg.eps = 0.25;
  cfg.n = 2;
  double rho = 0.125;
  double d = std::exp(-8.0);
  cfg.holes.push_back({0.5, d, rho});
  auto rp = rate_params(cfg, {KappaRule::user, 0.0});
  CHECK(rp.gamma_k[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rp.mu_eps == doctest::Approx(0.7351936076014104).epsilon(1e-13));
}

TEST_CASE("rates: d = 0 maps to gamma = eta = 0 by convention") {
  SieveConfig cfg;
  cfg.domain = {1.0, 1.0};
  cfg.eps = 0.25;
  cfg.n = 2;
  cfg.holes.push_back({0.5, 0.0, 0.125});
  auto rp = rate_params(cfg);
  CHECK(rp.gamma_k[0] == 0.0);
  CHECK(rp.eta_k[0] == 0.0);
}

TEST_CASE("rates: kappa recipes") {
  SieveConfig cfg;
  cfg.domain = {1.0, 1.0};
  cfg.eps = 0.25;
  cfg.n = 2;
  double rho = 0.125;
  double d = std::exp(-8.0);  // gamma_k = 1
  cfg.holes.push_back({0.5, d, rho});

  auto small = rate_params(cfg, {KappaRule::small_holes, 0.0});
  CHECK(small.kappa_eps == doctest::Approx(1.0).epsilon(1e-14));

  auto regular = rate_params(cfg, {KappaRule::regular, 0.0});
  CHECK(regular.kappa_eps == doctest::Approx(std::sqrt(rho)).epsilon(1e-14));

  auto user = rate_params(cfg, {KappaRule::user, 0.42});
  CHECK(user.kappa_eps == doctest::Approx(0.42).epsilon(1e-14));
  CHECK(user.mu_eps >= user.kappa_eps);
  CHECK(user.mu_eps >= user.sup_eta());
}

TEST_CASE("rates: sup eta decreases monotonically along a halving sequence") {
  Domain2D dom{1.0, 1.0};
  double prev2 = 1e300;
  double prev3 = 1e300;
  for (double eps : {0.25, 0.125, 0.0625, 0.03125}) {
    // n=2: fixed d = rho^2 makes |ln(d/rho)| = |ln rho| grow.
    auto cfg2 = make_periodic_config(
        dom, eps, [](double e) { return 0.25 * e * e; });
    auto rp2 = rate_params(cfg2);
    CHECK(rp2.sup_eta() < prev2);
    prev2 = rp2.sup_eta();

    // n=3: d/rho = eps/16 -> 0.
    SieveConfig cfg3 = cfg2;
    cfg3.n = 3;
    for (auto& h : cfg3.holes) h.half_width = h.guard_radius * eps / 16.0;
    auto rp3 = rate_params(cfg3);
    CHECK(rp3.sup_eta() < prev3);
    prev3 = rp3.sup_eta();
  }
}

TEST_CASE("rates: n>=3 eta is scale-invariant at fixed d/rho") {
  Domain2D dom{1.0, 1.0};
  double ratio = 1.0 / 64.0;
  double first = -1.0;
  for (double eps : {0.25, 0.125, 0.0625}) {
    auto cfg = make_periodic_config(
        dom, eps, [ratio](double e) { return 0.5 * e * ratio; });
    cfg.n = 3;
    auto rp = rate_params(cfg);
    if (first < 0.0)
      first = rp.sup_eta();
    else
      CHECK(rp.sup_eta() == doctest::Approx(first).epsilon(1e-14));
  }
}

TEST_CASE("explicit config: default guard radius is half the min spacing") {
  Domain2D dom{2.0, 1.0};
  std::vector<Hole> holes = {{0.5, 0.001, 0.0}, {1.1, 0.001, 0.0}};
  auto cfg = make_explicit_config(dom, 0.5, holes);
  CHECK(cfg.holes[0].guard_radius == doctest::Approx(0.25));  // capped at 1/4
  CHECK(cfg.holes[1].guard_radius == doctest::Approx(0.25));
}
