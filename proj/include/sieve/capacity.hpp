// Capacity of flat holes and the capacity potential.
//
// The capacity of a hole D inside the guard ball B_rho is
//   C(D) = inf { ||grad U||^2_{L^2(B_rho \ D)} : U = 1 on D, U = 0 on
//                boundary of B_rho },
// attained by the harmonic capacity potential U. Closed forms for the
// radial (annulus) case:
//   n = 2:  C = 2 pi / ln(rho/d),          U = ln(rho/r) / ln(rho/d)
//   n = 3:  C = 4 pi / (1/d - 1/rho),      U = (1/r - 1/rho)/(1/d - 1/rho)
// The same radial profile G (G(t) = -ln t for n = 2, 1/t for n = 3) builds
// the cutoff functions: phi is the capacity profile of the annulus
// (d, d_tilde) with d_tilde = sqrt(rho d) (n = 2) resp. 2d (n = 3), with
//   ||grad phi||^2 = 4 pi / ln(rho/d)  (n = 2),   8 pi d  (n = 3),
// and psi_tilde is the full-annulus potential, which dominates every
// capacity potential pointwise: 0 <= U(x) <= psi_tilde(|x|).
//
// capacity_fem computes the conforming P1 Galerkin minimum on polygonal
// disks whose inner boundary circumscribes the hole circle and whose outer
// boundary is inscribed in the guard circle, so the result overestimates
// the true (circle) capacity twice over: by domain monotonicity and by
// subspace minimization. Mesh refinement is midpoint quadrisection of a
// fixed base mesh, so the FE spaces are nested and the computed capacity
// decreases monotonically under refinement.

#pragma once

#include <string>
#include <vector>

#include "sieve/mesh.hpp"

namespace sieve {

enum class CapacityShape { slit2d, annulus_oracle, flat_disk3d };

struct CapacityProblem {
  int n = 2;             // ambient dimension (2 or 3)
  double d = 0.0;        // hole half-width (slit) or inner radius (annulus)
  double rho = 0.0;      // guard radius (outer Dirichlet boundary)
  CapacityShape shape = CapacityShape::slit2d;
};

// Exact annulus capacity; throws unless 0 < d < rho and n is 2 or 3.
double radial_capacity(int n, double d, double rho);

struct CutoffProfile {
  int n = 2;
  double d = 0.0;
  double d_tilde = 0.0;  // transition radius: sqrt(rho d) (n=2), 2d (n=3)
  double rho = 0.0;

  double G(double t) const;          // -ln t (n=2), 1/t (n>=3)
  double phi(double r) const;        // 1 on [0,d], G-profile to d_tilde, 0 on
  double psi(double r) const;        // 1 on [0,rho/4], 0 past rho/2, linear
  double psi_tilde(double r) const;  // annulus potential, clamped to [0,1]
  double phi_energy() const;         // ||grad phi||^2 closed form
};

CutoffProfile make_cutoff_profile(int n, double d, double rho);

// Discrete capacity potential: nodal values on the disk/annulus mesh
// (centered at the origin), with the Dirichlet node sets.
struct PotentialField {
  Mesh mesh;
  std::vector<double> values;
  double energy = 0.0;
  std::vector<int> hole_nodes;   // U = 1 (slit nodes or inner polygon)
  std::vector<int> outer_nodes;  // U = 0 (outer polygon)
  int n = 2;
  double d = 0.0;
  double rho = 0.0;
};

struct CapacityResult {
  double capacity = 0.0;  // Galerkin energy, >= the true circle capacity
  PotentialField field;
};

// Solves the capacity problem for shape slit2d (slit [-d, d] x {0}, graded
// toward the tips with 6 levels at ratio 0.7, d <= rho/8 required) or
// annulus_oracle (0 < d < rho). h is the target spacing of the outer
// boundary; the slit core grades itself far below h automatically (>= 12
// elements across the slit before refinement). Throws on flat_disk3d (use
// flat_disk_alpha), on n != 2, and on h > rho/4 (too coarse to resolve the
// guard disk).
CapacityResult capacity_fem(const CapacityProblem& problem, double h);

struct PotentialCheck {
  std::string check;
  bool pass = true;
  std::string detail;  // includes the worst node on failure
};

struct PotentialReport {
  std::vector<PotentialCheck> checks;
  bool ok() const;
  std::string summary() const;
  const PotentialCheck* find(const std::string& check) const;
};

// Audits a capacity potential: Dirichlet data exact, 0 <= U <= 1, the
// pointwise bound U <= psi_tilde(|x|) + tol outside the hole disk, mirror
// symmetry across the line to solver tolerance, and energy <= ||grad phi||^2.
// tol absorbs the interpolation error of the discrete potential.
PotentialReport potential_checks(const PotentialField& field,
                                 const CutoffProfile& profile,
                                 double tol = 0.02);

struct CalibrationResult {
  double d = 0.0;         // calibrated slit half-width
  double capacity = 0.0;  // achieved capacity_fem value at d
  double gamma = 0.0;     // capacity / (4 eps)
  int evaluations = 0;    // capacity solves spent
};

// Finds d with capacity_fem(slit2d, d, rho) / (4 eps) = gamma_target within
// relative tolerance 1e-3 by bisection on ln d over [ln rho - 120,
// ln(rho/8)]. h = 0 picks the default rho/16. Throws when the target is
// outside the achievable range, reporting the achievable gamma.
CalibrationResult calibrate_hole_size(double gamma_target, double eps,
                                      double rho, double h = 0.0);

// Axisymmetric flat-disk capacity in R^3: the disk of radius a in the guard
// ball of radius rho, computed on a meridian quarter-disk mesh graded toward
// the rim with the cylindrical weight integrated exactly (the weight is
// linear per triangle). level >= 0 midpoint refinements of the base mesh.
double flat_disk_capacity(double a, double rho, int level);

struct AlphaResult {
  double alpha = 0.0;  // Newtonian capacity of the unit disk (exact: 8)
  bool converged = false;
  double spread = 0.0;  // relative disagreement of the two extrapolants
};

// Estimates alpha = cap(unit disk, R^3) by Richardson extrapolation in the
// mesh level and in 1/rho over rho in {8, 16, 32}. levels >= 2 mesh levels
// are used per rho; converged means the two 1/rho extrapolants agree to 1%.
AlphaResult flat_disk_alpha(int levels);

}  // namespace sieve
