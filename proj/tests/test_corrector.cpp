// Corrector module tests: mean jumps over guard intervals (exact closed
// forms), corrector assembly from capacity potentials (sign convention,
// support, linearity, slit values), the per-side energy split and the
// quarter-capacity energy identity, the half-jump-norm comparison along an
// eps-halving family, and the enforced near-hole resolution budget.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "sieve/capacity.hpp"
#include "sieve/corrector.hpp"
#include "sieve/fem.hpp"
#include "sieve/geometry.hpp"
#include "sieve/mesh.hpp"

using namespace sieve;

namespace {

constexpr double kPi = 3.14159265358979323846;

double odd_f(Vec2 p) {
  const double s = p.y > 0 ? 1.0 : -1.0;
  const double t = 1.0 - std::abs(p.y);
  return s * std::cos(kPi * p.x) * t * t;
}

double even_f(Vec2 p) {
  const double t = 1.0 - std::abs(p.y);
  return std::cos(kPi * p.x) * t * t;
}

// Nodal field with prescribed one-sided values on the whole mesh: plus value
// on the upper side and the plus line copies, minus value elsewhere.
FeFunction two_sided(const CrackMesh& cm, double plus, double minus) {
  FeFunction g;
  g.values.assign(static_cast<std::size_t>(cm.mesh.num_vertices()), 0.0);
  for (int v = 0; v < cm.mesh.num_vertices(); ++v)
    g.values[static_cast<std::size_t>(v)] =
        cm.mesh.point(v).y >= 0.0 ? plus : minus;
  for (const auto& pr : cm.crack_pairs) {
    g.values[static_cast<std::size_t>(pr[0])] = plus;
    g.values[static_cast<std::size_t>(pr[1])] = minus;
  }
  return g;
}

PotentialField solve_potential(const Hole& hole, double h_div) {
  return capacity_fem(CapacityProblem{2, hole.half_width, hole.guard_radius,
                                      CapacityShape::slit2d},
                      hole.guard_radius / h_div)
      .field;
}

}  // namespace

TEST_CASE("mean jump over the guard interval: closed forms") {
  const Domain2D dom{1.0, 1.0};
  const Hole hole{0.35, 0.01, 0.25};
  const SieveConfig cfg = make_explicit_config(dom, 0.5, {hole});
  const CrackMesh cm =
      split_along_sieve(triangulate_plain(cfg, 0.125), SplitMode::full);

  // Constant one-sided values: jump 1 everywhere.
  CHECK(mean_jump_on_S(cm, two_sided(cm, 1.0, 0.0), hole) ==
        doctest::Approx(1.0).epsilon(1e-13));

  // Continuous field: both copies share values, the jump is exactly zero.
  const FeFunction cont = interpolate(cm, [](Vec2 p) { return p.x + p.y; });
  CHECK(mean_jump_on_S(cm, cont, hole) == 0.0);

  // Jump linear in x: the mean is the value at the hole center.
  FeFunction lin;
  lin.values.assign(static_cast<std::size_t>(cm.mesh.num_vertices()), 0.0);
  for (int v = 0; v < cm.mesh.num_vertices(); ++v)
    lin.values[static_cast<std::size_t>(v)] = cm.mesh.point(v).x;
  for (const auto& pr : cm.crack_pairs)
    lin.values[static_cast<std::size_t>(pr[1])] = 0.0;
  CHECK(mean_jump_on_S(cm, lin, hole) ==
        doctest::Approx(hole.center).epsilon(1e-13));

  // Guard interval must fit inside the meshed line.
  CHECK_THROWS_AS(mean_jump_on_S(cm, cont, Hole{0.2, 0.01, 0.25}),
                  std::invalid_argument);
  CHECK_THROWS_AS(mean_jump_on_S(cm, cont, Hole{0.35, 0.01, 0.0}),
                  std::invalid_argument);

  // A sieve-mode mesh (open hole keeps shared nodes) is not full-crack.
  const CrackMesh cs =
      split_along_sieve(triangulate_plain(cfg, 0.125), SplitMode::sieve);
  CHECK_THROWS_AS(mean_jump_on_S(cs, two_sided(cs, 1.0, 0.0), hole),
                  std::invalid_argument);
}

TEST_CASE("corrector of a synthetic jump reproduces the scaled potential") {
  const Domain2D dom{1.0, 1.0};
  const Hole hole{0.35, 0.01, 0.25};
  const SieveConfig cfg = make_explicit_config(dom, 0.5, {hole},
                                               [](double) { return 1.0; });
  const CrackMesh cm =
      split_along_sieve(triangulate_plain(cfg, 0.0625), SplitMode::full);
  const std::vector<PotentialField> pots{solve_potential(hole, 32.0)};

  // g+ = 1, g- = -1: c = <[g]> = 2 exactly, so w = -+ U on the two sides.
  const FeFunction g2 = two_sided(cm, 1.0, -1.0);
  const CorrectorField w = build_corrector(cm, cfg, g2, pots);
  REQUIRE(w.coeffs.size() == 1);
  CHECK(w.coeffs[0] == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(w.capacities[0] == pots[0].energy);

  // Slit-interior line nodes carry U = 1: w+ = -1 and w- = +1 there.
  int slit_plus = -1;
  for (std::size_t i = 0; i < cm.mesh.line_nodes.size(); ++i)
    if (cm.mesh.line_kind[i] == LineKind::hole_interior)
      slit_plus = cm.mesh.line_nodes[i];
  REQUIRE(slit_plus >= 0);
  int slit_minus = -1;
  for (const auto& pr : cm.crack_pairs)
    if (pr[0] == slit_plus) slit_minus = pr[1];
  REQUIRE(slit_minus >= 0);
  CHECK(w.values.values[static_cast<std::size_t>(slit_plus)] ==
        doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(w.values.values[static_cast<std::size_t>(slit_minus)] ==
        doctest::Approx(1.0).epsilon(1e-12));

  // Support: nonzero values only inside the guard disk; the trace on the
  // line outside the guard interval vanishes identically.
  int nonzero = 0;
  for (int v = 0; v < cm.mesh.num_vertices(); ++v) {
    const double wv = w.values.values[static_cast<std::size_t>(v)];
    if (wv == 0.0) continue;
    ++nonzero;
    const Vec2 q = cm.mesh.point(v);
    CHECK(std::hypot(q.x - hole.center, q.y) <= hole.guard_radius);
  }
  CHECK(nonzero > 100);
  for (int v : cm.mesh.line_nodes)
    if (std::abs(cm.mesh.point(v).x - hole.center) >= hole.guard_radius)
      CHECK(w.values.values[static_cast<std::size_t>(v)] == 0.0);

  // Energy identity: both sides together carry (c^2/4) cap = cap, split
  // evenly between the sides (the potential is mirror symmetric).
  const CorrectorReport rep = corrector_properties(cm, w, g2, cfg);
  CHECK(rep.quarter_capacity ==
        doctest::Approx(pots[0].energy).epsilon(1e-13));
  CHECK(rep.oracle_deviation < 0.01);
  CHECK(rep.split_asymmetry < 1e-12);
  CHECK(rep.l2_plus == doctest::Approx(rep.l2_minus).epsilon(1e-10));
}

TEST_CASE("corrector is linear in g and vanishes for even data") {
  const Domain2D dom{1.0, 1.0};
  const Hole hole{0.35, 0.01, 0.25};
  const SieveConfig cfg = make_explicit_config(dom, 0.5, {hole},
                                               [](double) { return 1.0; });
  const CrackMesh cm =
      split_along_sieve(triangulate_plain(cfg, 0.0625), SplitMode::full);
  const std::vector<PotentialField> pots{solve_potential(hole, 32.0)};

  // Interpolated (hence continuous) data: zero jump, exactly zero corrector.
  const FeFunction ge = interpolate(cm, even_f);
  const CorrectorField wz = build_corrector(cm, cfg, ge, pots);
  CHECK(wz.coeffs[0] == 0.0);
  for (double v : wz.values.values) CHECK(v == 0.0);
  const CorrectorReport rz = corrector_properties(cm, wz, ge, cfg);
  CHECK(rz.oracle_deviation == 0.0);
  CHECK(rz.energy_plus == 0.0);
  CHECK(rz.energy_minus == 0.0);
  CHECK(rz.half_jump_norm2 == 0.0);

  // Solved even data: the jump vanishes at solver tolerance.
  const FeFunction fe = interpolate(cm, even_f);
  const FeFunction geven =
      solve_homogenized(cm, [](double) { return 1.0; }, fe);
  const CorrectorField we = build_corrector(cm, cfg, geven, pots);
  CHECK(std::abs(we.coeffs[0]) < 1e-10);
  for (double v : we.values.values) CHECK(std::abs(v) < 1e-10);

  // Linearity on a solved/synthetic pair, exact to rounding.
  const FeFunction f = interpolate(cm, odd_f);
  const FeFunction g = solve_homogenized(cm, [](double) { return 1.0; }, f);
  const FeFunction g2 = two_sided(cm, 1.0, -1.0);
  const CorrectorField w1 = build_corrector(cm, cfg, g, pots);
  const CorrectorField w2 = build_corrector(cm, cfg, g2, pots);
  FeFunction gmix;
  gmix.values.resize(g.values.size());
  for (std::size_t i = 0; i < g.values.size(); ++i)
    gmix.values[i] = 0.75 * g.values[i] - 2.0 * g2.values[i];
  const CorrectorField wm = build_corrector(cm, cfg, gmix, pots);
  CHECK(wm.coeffs[0] == doctest::Approx(0.75 * w1.coeffs[0] -
                                        2.0 * w2.coeffs[0]).epsilon(1e-12));
  double worst = 0.0;
  for (std::size_t i = 0; i < wm.values.values.size(); ++i)
    worst = std::max(worst,
                     std::abs(wm.values.values[i] - (0.75 * w1.values.values[i] -
                                                     2.0 * w2.values.values[i])));
  CHECK(worst < 1e-12);
}

TEST_CASE("solved single hole: energy report") {
  const Domain2D dom{1.0, 1.0};
  const Hole hole{0.35, 0.01, 0.25};
  const auto gamma1 = [](double) { return 1.0; };
  const SieveConfig cfg = make_explicit_config(dom, 0.5, {hole}, gamma1);
  const CrackMesh cm =
      split_along_sieve(triangulate_plain(cfg, 0.0625), SplitMode::full);
  const std::vector<PotentialField> pots{solve_potential(hole, 32.0)};

  const FeFunction f = interpolate(cm, odd_f);
  const FeFunction g = solve_homogenized(cm, gamma1, f);
  const CorrectorField w = build_corrector(cm, cfg, g, pots);
  const CorrectorReport rep = corrector_properties(cm, w, g, cfg);

  // The hole sits off the midline, so the mean jump is genuinely nonzero.
  CHECK(std::abs(w.coeffs[0]) > 1e-3);
  CHECK(rep.quarter_capacity > 0.0);
  CHECK(rep.oracle_deviation < 0.01);
  CHECK(rep.split_asymmetry < 1e-12);
  CHECK(rep.half_jump_norm2 > 0.0);
  CHECK(rep.l2_plus == doctest::Approx(rep.l2_minus).epsilon(1e-10));
  // One isolated hole is far from the fine-family regime: the per-side
  // deviation is reported but only finiteness is meaningful here.
  CHECK(rep.per_side_deviation >= 0.0);
  CHECK(std::isfinite(rep.per_side_deviation));
}

TEST_CASE("calibrated family: oracle within 1% and shrinking deviation band") {
  const Domain2D dom{1.0, 1.0};
  const auto gamma1 = [](double) { return 1.0; };
  double dev_ratio[2] = {0.0, 0.0};
  double sqrt_rho[2] = {0.0, 0.0};
  int row = 0;
  for (const double eps : {0.25, 0.125}) {
    const double rho = eps / 2.0;
    const CalibrationResult cal = calibrate_hole_size(1.0, eps, rho);
    const SieveConfig cfg = make_periodic_config(
        dom, eps, [&](double) { return cal.d; }, gamma1);
    const CrackMesh cm =
        split_along_sieve(triangulate_plain(cfg, eps / 8.0), SplitMode::full);
    const FeFunction f = interpolate(cm, odd_f);
    const FeFunction g = solve_homogenized(cm, gamma1, f);
    const PotentialField pot = solve_potential(cfg.holes[0], 32.0);
    const std::vector<PotentialField> pots(cfg.holes.size(), pot);
    const CorrectorField w = build_corrector(cm, cfg, g, pots);
    const CorrectorReport rep = corrector_properties(cm, w, g, cfg);

    CHECK(rep.oracle_deviation < 0.01);
    CHECK(rep.split_asymmetry < 1e-9);
    CHECK(rep.half_jump_norm2 > 0.0);
    const double fnorm = norms(cm, f).l2_total;
    dev_ratio[row] = rep.per_side_deviation / (fnorm * fnorm);
    sqrt_rho[row] = std::sqrt(rho);
    ++row;
  }
  // Deviation from the half-jump-norm target decreases along eps-halving and
  // stays inside the sup rho^{1/2} band anchored at the coarsest family
  // member.
  CHECK(dev_ratio[1] < dev_ratio[0]);
  CHECK(dev_ratio[1] <= dev_ratio[0] / sqrt_rho[0] * sqrt_rho[1]);
}

TEST_CASE("corrector rejects mismatched inputs") {
  const Domain2D dom{1.0, 1.0};
  const Hole hole{0.35, 0.01, 0.25};
  const SieveConfig cfg = make_explicit_config(dom, 0.5, {hole},
                                               [](double) { return 1.0; });
  const CrackMesh cm =
      split_along_sieve(triangulate_plain(cfg, 0.125), SplitMode::full);
  const FeFunction g2 = two_sided(cm, 1.0, -1.0);
  const std::vector<PotentialField> pots{solve_potential(hole, 16.0)};

  // Potential count must match the hole count.
  CHECK_THROWS_WITH_AS(
      build_corrector(cm, cfg, g2, {}),
      doctest::Contains("one potential per hole"), std::invalid_argument);

  // Plane case only.
  SieveConfig c3 = cfg;
  c3.n = 3;
  CHECK_THROWS_WITH_AS(build_corrector(cm, c3, g2, pots),
                       doctest::Contains("plane case"), std::invalid_argument);

  // Tampered potential metadata: dimension, guard radius, half-width.
  {
    std::vector<PotentialField> bad = pots;
    bad[0].n = 3;
    CHECK_THROWS_WITH_AS(build_corrector(cm, cfg, g2, bad),
                         doctest::Contains("dimension"),
                         std::invalid_argument);
  }
  {
    std::vector<PotentialField> bad = pots;
    bad[0].rho *= 1.01;
    CHECK_THROWS_WITH_AS(build_corrector(cm, cfg, g2, bad),
                         doctest::Contains("guard radius"),
                         std::invalid_argument);
  }
  {
    std::vector<PotentialField> bad = pots;
    bad[0].d *= 1.01;
    CHECK_THROWS_WITH_AS(build_corrector(cm, cfg, g2, bad),
                         doctest::Contains("half-width"),
                         std::invalid_argument);
  }

  // Overlapping guard disks are rejected before any potential is touched.
  {
    const SieveConfig ok2 = make_explicit_config(
        dom, 0.2, {Hole{0.3, 0.004, 0.1}, Hole{0.5, 0.004, 0.1}});
    const CrackMesh cm2 =
        split_along_sieve(triangulate_plain(ok2, 0.05), SplitMode::full);
    SieveConfig bad2 = ok2;
    bad2.holes[0].guard_radius = 0.26;
    bad2.holes[1].guard_radius = 0.26;
    const std::vector<PotentialField> stubs(2);
    const FeFunction gb = two_sided(cm2, 1.0, -1.0);
    CHECK_THROWS_WITH_AS(build_corrector(cm2, bad2, gb, stubs),
                         doctest::Contains("overlapping guard disks"),
                         std::invalid_argument);
  }

  // Near-hole resolution budget: a potential at rho/8 is coarser than half
  // the main mesh's line resolution here and must be rejected.
  {
    const CrackMesh fine =
        split_along_sieve(triangulate_plain(cfg, 0.0625), SplitMode::full);
    const FeFunction gf = two_sided(fine, 1.0, -1.0);
    const std::vector<PotentialField> coarse{solve_potential(hole, 8.0)};
    CHECK_THROWS_WITH_AS(build_corrector(fine, cfg, gf, coarse),
                         doctest::Contains("too coarse near hole"),
                         std::invalid_argument);
  }

  // Report rejects inconsistent coefficient lists.
  CorrectorField w = build_corrector(cm, cfg, g2, pots);
  w.coeffs.push_back(0.0);
  CHECK_THROWS_AS(corrector_properties(cm, w, g2, cfg),
                  std::invalid_argument);
}
