// Sieve geometry: hole families on the interface y = 0 of a rectangle,
// their guard disks, and the closed-form rate quantities that the
// convergence studies compare against.
//
// Setting: Omega = (0, L) x (-H, H), interface Gamma = (0, L) x {0}.
// Each hole k is a slit (x_k - d_k, x_k + d_k) x {0} (2-D FEM path) or an
// (n-1)-dimensional flat hole of radius d_k (analytic path, n >= 3), with a
// guard disk B_k of radius rho_k around (x_k, 0).

#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sieve {

struct Domain2D {
  double L = 1.0;  // width; Gamma spans (0, L)
  double H = 1.0;  // half height; Omega = (0,L) x (-H, H)
};

struct Hole {
  double center = 0.0;        // x_k on Gamma
  double half_width = 0.0;    // d_k: radius of the smallest ball containing the hole
  double guard_radius = 0.0;  // rho_k
};

// Which recipe turns a configuration into the defect rate kappa_eps.
//   small_holes: kappa = sup_k gamma_k^{1/2}   (vanishing-interaction family)
//   regular:     kappa = sup_k rho_k^{1/2}     (regularly distributed holes)
//   user:        caller-supplied value
enum class KappaRule { small_holes, regular, user };

struct KappaSpec {
  KappaRule rule = KappaRule::regular;
  double user_value = 0.0;
};

struct SieveConfig {
  Domain2D domain;
  double eps = 0.0;  // small parameter of the family (hole spacing scale)
  std::vector<Hole> holes;
  std::function<double(double)> gamma_fn;  // target interaction strength on Gamma
  int n = 2;  // ambient dimension: 2 for FEM paths, >= 3 analytic only
  bool degenerate = false;  // true when all holes have d_k = 0 (not meshable)
  // Near-hole patch fidelity of the plain mesh: 0 keeps the default grading;
  // q >= 1 adds q slit-tip levels and densifies the radial rings, shrinking
  // the slit-scale discretization defect (used by fine rate studies, where
  // that defect would otherwise dominate the reported errors).
  int patch_quality = 0;

  double gamma(double x) const { return gamma_fn ? gamma_fn(x) : 0.0; }
};

// Per-hole and aggregate rate quantities.
//   gamma_k: capacity-density parameter, d^{n-2} rho^{1-n} (n>=3),
//            1/(|ln d| rho) (n=2)
//   eta_k:   per-hole geometric rate, (d/rho)^{...} with the dimensional
//            branches; see rate_params
//   mu_eps:  overall rate, max of kappa, sup eta, and (n=2 only)
//            sup rho^{1/2} gamma_k |ln rho|
// Constants are normalized to 1; comparisons downstream are ratio-based.
struct RateParams {
  std::vector<double> gamma_k;
  std::vector<double> eta_k;
  double mu_eps = 0.0;
  double kappa_eps = 0.0;

  double sup_gamma() const;
  double sup_eta() const;
};

struct ValidationIssue {
  std::string check;   // short id, e.g. "guard-balls-disjoint"
  bool pass = true;
  int worst_hole = -1; // index of the worst offending hole, -1 if none
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationIssue> checks;
  bool ok() const;
  std::string summary() const;
  const ValidationIssue* find(const std::string& check) const;
};

// One cell of a regular partition of Gamma (analytic path, n >= 3).
// Cells are abstract: only center (1-D parameterization along the lattice),
// area and diameter enter the hole-size formula and the validity conditions.
// guard_radius <= 0 selects the default diam/2 (largest disk in the cell).
struct GammaCell {
  double center = 0.0;
  double area = 0.0;
  double diam = 0.0;
  double guard_radius = 0.0;
};

// Periodic family: holes at x_k = (k + 1/2) eps covering (0, L), guard
// radius eps/2, equal half-widths d_of_eps(eps). gamma_fn is the target
// interaction strength carried along for the homogenized problem (the
// construction itself does not use it). Throws std::invalid_argument on
// d > rho/8 or rho >= min(1, H/2).
SieveConfig make_periodic_config(const Domain2D& domain, double eps,
                                 const std::function<double(double)>& d_of_eps,
                                 const std::function<double(double)>& gamma_fn = {});

// Explicit family from a hole list. Guard radii of value <= 0 are replaced
// by the default convention: half the minimal center spacing, capped by
// min(1, H/2)/2. Throws on invalid configurations.
SieveConfig make_explicit_config(const Domain2D& domain, double eps,
                                 std::vector<Hole> holes,
                                 const std::function<double(double)>& gamma_fn = {});

// Regular distribution (n >= 3): hole sizes from the capacity rule
//   d_k = (4 alpha^{-1} gamma(x_k) area(cell_k))^{1/(n-2)},
// alpha = capacity of the flat unit disk (see capacity::flat_disk_alpha).
// Guard radii follow the explicit-config convention. gamma identically zero
// produces a degenerate (flagged, unmeshable) configuration with d_k = 0.
// Throws on overlapping cells, diam > 8 rho, cells too small to contain the
// guard disk, or computed d_k > rho_k/8.
SieveConfig make_regular_config(const Domain2D& domain,
                                const std::vector<GammaCell>& cells,
                                const std::function<double(double)>& gamma_fn,
                                int n, double alpha);

// Checks the standing assumptions:
//   guard-balls-disjoint    |x_k - x_l| >= rho_k + rho_l (touching passes)
//   guard-radius-bound      rho_k < 1 and rho_k < H/2
//   hole-size-ratio         d_k <= rho_k / 8
//   gamma-bounded           sup_k gamma_k finite
//   guard-inside-interface  x_k - rho_k >= 0 and x_k + rho_k <= L
ValidationReport validate_assumptions(const SieveConfig& config);

// Closed-form rate quantities. d_k = 0 yields gamma_k = eta_k = 0 by the
// continuity convention. kappa follows the selected recipe.
RateParams rate_params(const SieveConfig& config, const KappaSpec& kappa = {});

// Convenience: constant-gamma callable.
std::function<double(double)> const_gamma(double value);

}  // namespace sieve
