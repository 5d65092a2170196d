// Capacity module tests: closed-form annulus capacities, cutoff profiles,
// Galerkin capacity solves (one-sided by construction: circumscribed inner
// and inscribed outer polygons plus nested refinement), potential audits,
// slit-width calibration against capacity targets, and the axisymmetric
// flat-disk constant cap(unit disk) = 8.

#include <cmath>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "sieve/capacity.hpp"

using namespace sieve;

namespace {

constexpr double kPi = 3.14159265358979323846;

double node_radius(const Mesh& m, int v) {
  const Vec2 p = m.point(v);
  return std::hypot(p.x, p.y);
}

}  // namespace

TEST_CASE("radial capacity closed forms") {
  CHECK(radial_capacity(2, 1.0 / std::exp(1.0), 1.0) ==
        doctest::Approx(2.0 * kPi).epsilon(1e-12));
  CHECK(radial_capacity(2, 0.25 / std::exp(1.0), 0.25) ==
        doctest::Approx(2.0 * kPi).epsilon(1e-12));
  CHECK(radial_capacity(2, std::exp(-2.0), 1.0) ==
        doctest::Approx(kPi).epsilon(1e-12));
  CHECK(radial_capacity(3, 1.0, 2.0) ==
        doctest::Approx(8.0 * kPi).epsilon(1e-12));
  // Large guard radius approaches the whole-space capacity 4 pi d.
  CHECK(radial_capacity(3, 0.1, 1e9) ==
        doctest::Approx(0.4 * kPi).epsilon(1e-8));

  CHECK_THROWS_AS(radial_capacity(4, 0.1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(radial_capacity(2, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(radial_capacity(2, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(radial_capacity(3, 2.0, 1.0), std::invalid_argument);
}

TEST_CASE("cutoff profiles: values, monotonicity, energies") {
  const CutoffProfile p2 = make_cutoff_profile(2, 0.01, 1.0);
  CHECK(p2.d_tilde == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(p2.phi(0.005) == 1.0);
  CHECK(p2.phi(0.01) == 1.0);
  CHECK(p2.phi(0.1) == 0.0);
  CHECK(p2.phi(0.5) == 0.0);
  // Geometric midpoint of (d, d_tilde) gives phi = 1/2 for the log profile.
  CHECK(p2.phi(std::sqrt(0.01 * 0.1)) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p2.psi(0.25) == 1.0);
  CHECK(p2.psi(0.375) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p2.psi(0.5) == 0.0);
  CHECK(p2.psi_tilde(0.01) == 1.0);
  CHECK(p2.psi_tilde(1.0) == 0.0);
  CHECK(p2.psi_tilde(0.1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p2.phi_energy() ==
        doctest::Approx(4.0 * kPi / std::log(100.0)).epsilon(1e-12));

  double prev = 2.0;
  for (double r = 0.005; r < 1.2; r *= 1.07) {
    const double v = p2.phi(r);
    CHECK(v <= prev + 1e-15);
    CHECK(p2.psi_tilde(r) >= p2.phi(r) - 1e-15);
    prev = v;
  }

  const CutoffProfile p3 = make_cutoff_profile(3, 0.01, 1.0);
  CHECK(p3.d_tilde == doctest::Approx(0.02).epsilon(1e-15));
  CHECK(p3.phi_energy() == doctest::Approx(8.0 * kPi * 0.01).epsilon(1e-12));
  CHECK(p3.psi_tilde(0.02) == doctest::Approx(49.0 / 99.0).epsilon(1e-12));

  CHECK_THROWS_AS(make_cutoff_profile(5, 0.01, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_cutoff_profile(2, 1.0, 0.5), std::invalid_argument);
  // n = 3 transition radius 2d must stay inside the guard ball.
  CHECK_THROWS_AS(make_cutoff_profile(3, 0.6, 1.0), std::invalid_argument);
}

TEST_CASE("annulus capacity matches the closed form from above") {
  const double rho = 1.0;
  const double d = rho / std::exp(1.0);
  const double exact = 2.0 * kPi;
  const CapacityProblem problem{2, d, rho, CapacityShape::annulus_oracle};

  double caps[3];
  for (int i = 0; i < 3; ++i) {
    const double h = rho / (32 << i);
    const CapacityResult r = capacity_fem(problem, h);
    caps[i] = r.capacity;
    CHECK(r.capacity > exact);  // circumscribed/inscribed polygons + Galerkin
    CHECK(std::abs(r.capacity - exact) / exact < 0.02);
    CHECK(r.capacity == r.field.energy);
    CHECK(!r.field.hole_nodes.empty());
    CHECK(!r.field.outer_nodes.empty());
  }
  // Nested refinement: capacity (hence the error) strictly decreases.
  CHECK(caps[1] < caps[0]);
  CHECK(caps[2] < caps[1]);

  // The potential is the discrete annulus profile: nodewise close to
  // psi_tilde and clean under the audit.
  const CapacityResult r = capacity_fem(problem, rho / 64);
  const CutoffProfile prof = make_cutoff_profile(2, d, rho);
  double worst = 0.0;
  for (int v = 0; v < r.field.mesh.num_vertices(); ++v)
    worst = std::max(worst, std::abs(r.field.values[v] -
                                     prof.psi_tilde(node_radius(r.field.mesh, v))));
  CHECK(worst < 0.01);
  const PotentialReport rep = potential_checks(r.field, prof);
  INFO(rep.summary());
  CHECK(rep.ok());
}

TEST_CASE("slit capacity: two-sided bounds and refinement monotonicity") {
  const double rho = 0.25;
  const double d = rho / 64;
  const CapacityProblem problem{2, d, rho, CapacityShape::slit2d};
  const CutoffProfile prof = make_cutoff_profile(2, d, rho);
  // The slit of half-width d acts like the disk of radius d/2 (conformal
  // image), so 2 pi / ln(2 rho / d) is the sharp reference value.
  const double reference = 2.0 * kPi / std::log(2.0 * rho / d);

  double caps[3];
  for (int i = 0; i < 3; ++i) {
    const double h = rho / (8 << i);
    caps[i] = capacity_fem(problem, h).capacity;
    CHECK(caps[i] <= prof.phi_energy() * (1.0 + 1e-12));
    CHECK(caps[i] >= reference * (1.0 - 1e-4));
  }
  CHECK(caps[1] < caps[0]);
  CHECK(caps[2] < caps[1]);
  CHECK(std::abs(caps[2] - reference) / reference < 5e-3);
}

TEST_CASE("slit capacity monotone in d and rho") {
  const double ds[3] = {1e-3, 4e-3, 1e-2};
  const double rhos[3] = {0.08, 0.18, 0.4};
  double grid[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const CapacityProblem p{2, ds[j], rhos[i], CapacityShape::slit2d};
      grid[i][j] = capacity_fem(p, rhos[i] / 8).capacity;
      CHECK(grid[i][j] <=
            make_cutoff_profile(2, ds[j], rhos[i]).phi_energy() * (1.0 + 1e-12));
    }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j + 1 < 3; ++j) CHECK(grid[i][j] < grid[i][j + 1]);
  for (int i = 0; i + 1 < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(grid[i][j] > grid[i + 1][j]);
}

TEST_CASE("potential audit passes on solves and flags corruption") {
  const double rho = 0.25;
  const double d = rho / 64;
  const CapacityProblem problem{2, d, rho, CapacityShape::slit2d};
  const CapacityResult r = capacity_fem(problem, rho / 16);
  const CutoffProfile prof = make_cutoff_profile(2, d, rho);

  const PotentialReport rep = potential_checks(r.field, prof);
  INFO(rep.summary());
  CHECK(rep.ok());
  REQUIRE(rep.find("mirror-symmetry") != nullptr);
  REQUIRE(rep.find("psi-tilde-dominates") != nullptr);
  CHECK(rep.find("nonexistent") == nullptr);

  // Dirichlet data is set exactly.
  for (int v : r.field.hole_nodes) CHECK(r.field.values[v] == 1.0);
  for (int v : r.field.outer_nodes) CHECK(r.field.values[v] == 0.0);

  // Strictly below the annulus profile off the slit (the slit is thinner
  // than the disk of radius d): U < psi_tilde on the band 2d <= r <= rho/2.
  double worst = -2.0;
  for (int v = 0; v < r.field.mesh.num_vertices(); ++v) {
    const double rr = node_radius(r.field.mesh, v);
    if (rr < 2 * d || rr > 0.5 * rho) continue;
    worst = std::max(worst, r.field.values[v] - prof.psi_tilde(rr));
  }
  CHECK(worst < -0.01);

  // Corruptions are caught and name the offending node.
  PotentialField broken = r.field;
  int off_line = -1;
  for (int v = 0; v < broken.mesh.num_vertices(); ++v)
    if (broken.mesh.v_off[v].y != 0.0) {
      off_line = v;
      break;
    }
  REQUIRE(off_line >= 0);
  broken.values[off_line] += 0.05;
  const PotentialReport bad = potential_checks(broken, prof);
  CHECK(!bad.ok());
  REQUIRE(bad.find("mirror-symmetry") != nullptr);
  CHECK(!bad.find("mirror-symmetry")->pass);
  CHECK(bad.find("mirror-symmetry")->detail.find(std::to_string(off_line)) !=
        std::string::npos);

  PotentialField pinned = r.field;
  pinned.values[pinned.hole_nodes[0]] = 0.9;
  CHECK(!potential_checks(pinned, prof).ok());

  PotentialField truncated = r.field;
  truncated.values.pop_back();
  const PotentialReport sized = potential_checks(truncated, prof);
  CHECK(!sized.ok());
  CHECK(sized.checks.size() == 1);
}

TEST_CASE("hole size calibration hits gamma targets") {
  const double eps = 0.125;
  const double rho = 0.03125;

  const CalibrationResult c1 = calibrate_hole_size(1.0, eps, rho);
  CHECK(std::abs(c1.gamma - 1.0) <= 1e-3);
  CHECK(c1.capacity == doctest::Approx(4.0 * eps * c1.gamma).epsilon(1e-14));
  CHECK(c1.d > 0.0);
  CHECK(c1.d <= rho / 8.0 * (1.0 + 1e-12));
  CHECK(c1.evaluations <= 10);
  // Effective-width law: ln(2 rho / d) = 2 pi / (4 eps gamma) up to the
  // FE overestimate of the capacity (a fraction of a percent).
  CHECK(std::log(2.0 * rho / c1.d) ==
        doctest::Approx(2.0 * kPi / (4.0 * eps)).epsilon(0.02));

  const CalibrationResult c_half = calibrate_hole_size(0.5, eps, rho);
  const CalibrationResult c_twice = calibrate_hole_size(2.0, eps, rho);
  CHECK(std::abs(c_half.gamma - 0.5) <= 0.5 * 1e-3);
  CHECK(std::abs(c_twice.gamma - 2.0) <= 2.0 * 1e-3);
  CHECK(c_half.d < c1.d);
  CHECK(c1.d < c_twice.d);

  // Halving eps at gamma = 1 doubles ln(2 rho / d).
  const CalibrationResult c2 = calibrate_hole_size(1.0, eps / 2, rho / 2);
  const double ratio =
      std::log(2.0 * (rho / 2) / c2.d) / std::log(2.0 * rho / c1.d);
  CHECK(ratio == doctest::Approx(2.0).epsilon(0.05));

  CHECK_THROWS_AS(calibrate_hole_size(0.0, eps, rho), std::invalid_argument);
  CHECK_THROWS_AS(calibrate_hole_size(1.0, -eps, rho), std::invalid_argument);
  try {
    calibrate_hole_size(100.0, eps, rho);
    CHECK(false);
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("unreachable") != std::string::npos);
  }
  try {
    calibrate_hole_size(1e-4, eps, rho);
    CHECK(false);
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("floor") != std::string::npos);
  }
}

TEST_CASE("flat disk capacity: the constant 8, scaling, guard window") {
  const AlphaResult alpha = flat_disk_alpha(2);
  CHECK(alpha.converged);
  CHECK(alpha.spread <= 0.01);
  CHECK(std::abs(alpha.alpha - 8.0) / 8.0 <= 0.02);

  // The meridian construction is scale-invariant, so doubling (a, rho)
  // doubles the capacity exactly.
  const double c1 = flat_disk_capacity(1.0, 8.0, 1);
  const double c2 = flat_disk_capacity(2.0, 16.0, 1);
  CHECK(c2 == doctest::Approx(2.0 * c1).epsilon(1e-14));

  // Refinement converges from above toward cap(rho) > 8 a.
  const double l0 = flat_disk_capacity(1.0, 8.0, 0);
  const double l2 = flat_disk_capacity(1.0, 8.0, 2);
  CHECK(l0 > c1);
  CHECK(c1 > l2);
  CHECK(l2 > 8.0);

  // Finite guard ball inflates the capacity by at most 5 rho relative on
  // the scaled family d = rho / 8.
  for (double rho : {0.1, 0.2, 0.4}) {
    const double d = rho / 8;
    const double ratio = flat_disk_capacity(d, rho, 1) / (alpha.alpha * d);
    CHECK(ratio >= 1.0);
    CHECK(ratio <= 1.0 + 5.0 * rho);
  }

  CHECK_THROWS_AS(flat_disk_capacity(1.0, 4.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(flat_disk_capacity(1.0, 8.0, 7), std::invalid_argument);
  CHECK_THROWS_AS(flat_disk_alpha(1), std::invalid_argument);
  CHECK_THROWS_AS(flat_disk_alpha(7), std::invalid_argument);
}

TEST_CASE("capacity_fem rejects invalid problems") {
  CHECK_THROWS_AS(capacity_fem({3, 0.1, 1.0, CapacityShape::flat_disk3d}, 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(capacity_fem({3, 0.01, 1.0, CapacityShape::slit2d}, 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(capacity_fem({2, 0.2, 1.0, CapacityShape::slit2d}, 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(capacity_fem({2, 1.0, 1.0, CapacityShape::annulus_oracle}, 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(capacity_fem({2, 0.0, 1.0, CapacityShape::slit2d}, 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(capacity_fem({2, 0.01, 1.0, CapacityShape::slit2d}, 0.0),
                  std::invalid_argument);
  try {
    capacity_fem({2, 0.01, 1.0, CapacityShape::slit2d}, 0.3);
    CHECK(false);
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("rho/4") != std::string::npos);
  }
}
