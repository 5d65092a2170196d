// P1 finite elements on crack meshes: symmetric sparse matrices in
// compressed-row form, stiffness and consistent-mass assembly, the
// interface-jump form (gamma [u], [v])_{L^2(Gamma)} by 2-point Gauss
// quadrature on crack edges, Jacobi-preconditioned conjugate gradients,
// resolvent solves for the perforated and delta'-interface problems,
// blocked inverse iteration for the smallest eigenvalues, and broken norms.
//
// Every node is a free unknown (pure Neumann problems; the zero-order term
// makes the systems definite). Crack duplication turns plus/minus copies
// into independent unknowns, so broken energies and interface jumps need no
// special casing: triangles never straddle the line, and gradients are
// one-sided by construction.

#pragma once

#include <array>
#include <functional>
#include <vector>

#include "sieve/mesh.hpp"

namespace sieve {

struct SparseSym {
  int n = 0;
  std::vector<int> row_ptr;  // size n + 1
  std::vector<int> col;
  std::vector<double> val;

  // y = A x.
  void mul(const std::vector<double>& x, std::vector<double>& y) const;
  // u^T A v.
  double quad(const std::vector<double>& u, const std::vector<double>& v) const;
  std::vector<double> diagonal() const;
};

// Entrywise a + b (sparsity patterns may differ).
SparseSym sparse_add(const SparseSym& a, const SparseSym& b);

// Builds a SparseSym from coordinate triplets (duplicates summed). Both
// (i, j) and (j, i) must be present; assembly loops emit full local blocks.
SparseSym from_triplets(int n, std::vector<std::array<int, 2>> idx,
                        std::vector<double> val);

struct Assembled {
  SparseSym stiffness;
  SparseSym mass;
};

// P1 stiffness and consistent mass over all triangles. Edge vectors come
// from anchor-local offsets, so tip-scale triangles (areas ~ d^2 with d down
// to ~1e-24) assemble without cancellation. Throws on a degenerate triangle,
// naming its index.
Assembled assemble(const CrackMesh& cm);

// Interface-jump form J[u, v] = int_Gamma gamma (u+ - u-)(v+ - v-) dx by
// 2-point Gauss quadrature on the crack edges (exact here: the integrand is
// quadratic per edge for constant gamma, and the rule handles cubics).
// Requires the crack to run along the entire line (every line node
// duplicated, as built by SplitMode::full or a sieve split with no holes);
// throws std::invalid_argument otherwise, or when gamma is negative at a
// quadrature point.
SparseSym assemble_interface_jump(const CrackMesh& cm,
                                  const std::function<double(double)>& gamma_fn);

// Nodal values on a crack mesh; plus/minus copies hold separate values.
struct FeFunction {
  std::vector<double> values;
};

// Nodal interpolation of a smooth function (evaluated at global positions;
// plus/minus copies of a line node receive the same value).
FeFunction interpolate(const CrackMesh& cm,
                       const std::function<double(Vec2)>& f);

// Jacobi-preconditioned conjugate gradients for S x = rhs, S symmetric
// positive definite. x is the initial guess on entry and the solution on
// return. Converges to ||rhs - S x|| <= rel_tol * ||rhs||; throws
// std::runtime_error after 10 * n iterations (signals an indefinite or
// mis-assembled matrix).
int cg_solve(const SparseSym& s, const std::vector<double>& rhs,
             std::vector<double>& x, double rel_tol = 1e-9);

// Galerkin resolvent of the perforated problem: solves (K + M) u = M f.
FeFunction solve_perforated(const CrackMesh& cm, const FeFunction& f,
                            double rel_tol = 1e-9);

// Galerkin resolvent of the delta'-interface problem on a full-crack mesh:
// solves (K + J + M) u = M f with J the interface-jump matrix.
FeFunction solve_homogenized(const CrackMesh& cm,
                             const std::function<double(double)>& gamma_fn,
                             const FeFunction& f, double rel_tol = 1e-9);

struct Spectrum {
  std::vector<double> values;     // ascending
  std::vector<double> residuals;  // ||A v - lambda M v||_2, v M-normalized
  std::vector<bool> converged;    // residual <= tol per eigenpair

  bool all_converged() const;
};

// m smallest eigenvalues of A v = lambda M v, A = stiffness (+ jump if
// given), by blocked inverse iteration: the block (m + 6 vectors) is mapped
// through (A + M)^{-1} M with warm-started inner CG solves, M-orthonormalized,
// and Ritz values are extracted with a dense Jacobi eigensolver; the block
// Ritz projection deflates converged directions automatically. Requires
// 1 <= m <= 20. Non-convergence after the iteration cap is flagged per
// eigenpair, not thrown.
Spectrum eigen_smallest(const SparseSym& stiffness, const SparseSym& mass,
                        const SparseSym* jump, int m, double tol = 1e-7);

struct Norms {
  double l2_total = 0.0;      // ||u||_{L^2(Omega)}, both sides
  double h1_broken = 0.0;     // broken seminorm: ||grad u||_{L^2}, per side
  double l2_gamma_jump = 0.0; // ||gamma^{1/2} [u]||_{L^2(Gamma)}
};

// Exact quadrature for P1 fields; gradients never cross the crack. The jump
// term integrates over crack edges (nodes without a minus copy contribute a
// zero jump) and is 0 when gamma_fn is empty.
Norms norms(const CrackMesh& cm, const FeFunction& u,
            const std::function<double(double)>& gamma_fn = nullptr);

}  // namespace sieve
