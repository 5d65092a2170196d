// Capacity-based corrector for the delta'-interface approximation.
//
// The homogenized solution g misses the hole-scale boundary layers of the
// perforated solution; the corrector restores them from the capacity
// potentials U_k of the holes:
//   w(x) = -1/2 c_k U_k(x)   on the upper half of the guard disk B_k,
//          +1/2 c_k U_k(x)   on the lower half,
//           0                outside every guard disk,
// with c_k = <[g]>_{S_k}, the mean of the jump g+ - g- over the guard
// interval S_k = (x_k - rho_k, x_k + rho_k) x {0}.
//
// Because U_k's Dirichlet energy is the capacity and splits evenly between
// the half disks (U_k is mirror symmetric), the corrector obeys the exact
// energy identity
//   ||grad w+||^2 + ||grad w-||^2 = 1/4 sum_k cap(D_k) c_k^2,
// and for fine hole families each side approximates
//   1/2 ||gamma^{1/2} [g]||^2_{L^2(Gamma)},
// the defect being the Riemann-sum error of the capacity density (the kappa
// rate of the family). corrector_properties reports both comparisons.

#pragma once

#include <vector>

#include "sieve/capacity.hpp"
#include "sieve/fem.hpp"
#include "sieve/geometry.hpp"

namespace sieve {

struct CorrectorField {
  FeFunction values;               // on the main full-crack mesh; zero off the guard disks
  std::vector<double> coeffs;      // c_k = <[g]>_{S_k} per hole
  std::vector<double> capacities;  // discrete cap(D_k) of the potentials used
};

// Mean of the jump [g] = g+ - g- over the guard interval S_k, by exact
// edge-wise integration of the piecewise-linear jump, divided by 2 rho_k.
// Requires a full-crack mesh (every line node duplicated); throws when the
// guard interval sticks out of the meshed line.
double mean_jump_on_S(const CrackMesh& cm, const FeFunction& g,
                      const Hole& hole);

// Assembles the corrector on the main mesh: nodal interpolation of
// -+ 1/2 c_k U_k inside each guard disk (sign by side), zero elsewhere.
// potentials[k] is the capacity potential of hole k solved on its own disk
// mesh (capacity_fem), centered at the origin; values are looked up by
// point location in that mesh, exactly in hole-anchored offsets near the
// hole. Plane case (n = 2) only. Enforces the interpolation budget
// h_hole <= h_main/2 near every hole (largest line-edge length within half
// a guard radius); throws on that, on count/radius mismatches, and on
// overlapping guard disks.
CorrectorField build_corrector(const CrackMesh& cm, const SieveConfig& config,
                               const FeFunction& g,
                               const std::vector<PotentialField>& potentials);

struct CorrectorReport {
  double l2_plus = 0.0;            // ||w||_{L^2(upper half)}
  double l2_minus = 0.0;
  double energy_plus = 0.0;        // ||grad w||^2 per side
  double energy_minus = 0.0;
  double quarter_capacity = 0.0;   // 1/4 sum_k cap(D_k) c_k^2
  double half_jump_norm2 = 0.0;    // 1/2 ||gamma^{1/2} [g]||^2_{L^2(Gamma)}
  double oracle_deviation = 0.0;   // |e+ + e- - quarter_capacity| / quarter_capacity
  double split_asymmetry = 0.0;    // |e+ - e-| / (e+ + e-)
  double per_side_deviation = 0.0; // max_pm |e_pm - half_jump_norm2|
};

// Quadrature of the corrector's per-side norms plus the two comparisons:
// the exact quarter-capacity identity (internal oracle; deviation is
// interpolation error between the potential meshes and the main mesh) and
// the half-jump-norm target it approximates as holes shrink. Ratios are 0
// when the corrector vanishes identically.
CorrectorReport corrector_properties(const CrackMesh& cm,
                                     const CorrectorField& w,
                                     const FeFunction& g,
                                     const SieveConfig& config);

}  // namespace sieve
