// P1 finite elements on crack meshes.
//
// Local matrices on a triangle with CCW vertices p0 p1 p2 and area A:
//   stiffness K_ij = (b_i b_j + c_i c_j) / (4 A)  with the barycentric
//     gradient components b = (y1-y2, y2-y0, y0-y1), c = (x2-x1, x0-x2,
//     x1-x0), taken from anchor-local edge vectors so tip-scale cells
//     (areas ~ d^2, d down to ~1e-24) assemble without cancellation;
//   consistent mass M = A/12 * [[2,1,1],[1,2,1],[1,1,2]].
//
// The interface-jump form couples the plus and minus copies of the line
// nodes: on a crack edge [x_a, x_b] the jump [u] is linear with nodal values
// u(a+) - u(a-) and u(b+) - u(b-), and
//   J[u, v] = int gamma(x) [u][v] dx
// is integrated with 2-point Gauss quadrature (degree 3: exact for constant
// gamma, where the integrand is quadratic).
//
// eigen_smallest runs blocked inverse iteration for A v = lambda M v with
// A = K (+ J): the shifted operator S = A + M is SPD with the same
// eigenvectors (S v = (lambda + 1) M v), so repeatedly applying S^{-1} M to
// an M-orthonormal block of m + 6 vectors and extracting Ritz pairs of (A, M)
// converges to the smallest eigenvalues at rate (1 + lambda_m) /
// (1 + lambda_{m+7}) per pass. Inner solves are warm-started CG (initial
// guess v / (1 + lambda) from the previous Ritz pair) with a tolerance tied
// to the current worst residual; convergence is judged only on explicitly
// computed residuals ||A v - lambda M v||_2, so inexact inner solves cannot
// fake it.

#include "sieve/fem.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace sieve {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

}  // namespace

void SparseSym::mul(const std::vector<double>& x,
                    std::vector<double>& y) const {
  y.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += val[k] * x[col[k]];
    y[i] = s;
  }
}

double SparseSym::quad(const std::vector<double>& u,
                       const std::vector<double>& v) const {
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += val[k] * v[col[k]];
    total += u[i] * s;
  }
  return total;
}

std::vector<double> SparseSym::diagonal() const {
  std::vector<double> d(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i)
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
      if (col[k] == i) d[i] += val[k];
  return d;
}

SparseSym from_triplets(int n, std::vector<std::array<int, 2>> idx,
                        std::vector<double> val) {
  std::vector<std::size_t> order(idx.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (idx[a][0] != idx[b][0]) return idx[a][0] < idx[b][0];
    return idx[a][1] < idx[b][1];
  });

  SparseSym s;
  s.n = n;
  s.row_ptr.assign(static_cast<std::size_t>(n) + 1, 0);
  s.col.reserve(idx.size());
  s.val.reserve(idx.size());
  int row = -1;  // highest row whose start offset is recorded
  for (std::size_t t = 0; t < order.size(); ++t) {
    int i = idx[order[t]][0];
    int j = idx[order[t]][1];
    double v = val[order[t]];
    if (i == row && s.col.back() == j) {
      s.val.back() += v;
      continue;
    }
    while (row < i) s.row_ptr[++row] = static_cast<int>(s.col.size());
    s.col.push_back(j);
    s.val.push_back(v);
  }
  while (row < n) s.row_ptr[++row] = static_cast<int>(s.col.size());
  return s;
}

SparseSym sparse_add(const SparseSym& a, const SparseSym& b) {
  if (a.n != b.n) throw std::invalid_argument("sparse_add: size mismatch");
  SparseSym s;
  s.n = a.n;
  s.row_ptr.assign(static_cast<std::size_t>(a.n) + 1, 0);
  s.col.reserve(a.col.size() + b.col.size());
  s.val.reserve(a.col.size() + b.col.size());
  for (int i = 0; i < a.n; ++i) {
    int ka = a.row_ptr[i], kb = b.row_ptr[i];
    while (ka < a.row_ptr[i + 1] || kb < b.row_ptr[i + 1]) {
      int ja = ka < a.row_ptr[i + 1] ? a.col[ka] : a.n;
      int jb = kb < b.row_ptr[i + 1] ? b.col[kb] : b.n;
      if (ja == jb) {
        s.col.push_back(ja);
        s.val.push_back(a.val[ka] + b.val[kb]);
        ++ka, ++kb;
      } else if (ja < jb) {
        s.col.push_back(ja);
        s.val.push_back(a.val[ka]);
        ++ka;
      } else {
        s.col.push_back(jb);
        s.val.push_back(b.val[kb]);
        ++kb;
      }
    }
    s.row_ptr[i + 1] = static_cast<int>(s.col.size());
  }
  return s;
}

Assembled assemble(const CrackMesh& cm) {
  const Mesh& m = cm.mesh;
  int n = m.num_vertices();
  std::vector<std::array<int, 2>> idx;
  std::vector<double> kv, mv;
  idx.reserve(static_cast<std::size_t>(m.num_tris()) * 9);
  kv.reserve(idx.capacity());
  mv.reserve(idx.capacity());

  for (int t = 0; t < m.num_tris(); ++t) {
    const auto& v = m.tris[t];
    Vec2 e01 = m.edge_vec(v[0], v[1]);
    Vec2 e02 = m.edge_vec(v[0], v[2]);
    Vec2 e12 = m.edge_vec(v[1], v[2]);
    double area = 0.5 * (e01.x * e02.y - e01.y * e02.x);
    if (!(area > 0.0))
      throw std::runtime_error("assemble: degenerate triangle at index " +
                               std::to_string(t));
    double b[3] = {-e12.y, e02.y, -e01.y};
    double c[3] = {e12.x, -e02.x, e01.x};
    double inv4a = 1.0 / (4.0 * area);
    double m_off = area / 12.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        idx.push_back({v[i], v[j]});
        kv.push_back((b[i] * b[j] + c[i] * c[j]) * inv4a);
        mv.push_back(i == j ? 2.0 * m_off : m_off);
      }
  }

  Assembled out;
  out.stiffness = from_triplets(n, idx, kv);
  out.mass = from_triplets(n, std::move(idx), std::move(mv));
  return out;
}

namespace {

// Crack edge between consecutive line nodes: plus ids a, b; minus ids (or -1
// when the node is shared, i.e. its jump vanishes identically).
struct CrackEdge {
  int ap, am, bp, bm;
  double xa, xb, len;
};

std::vector<CrackEdge> crack_edges(const CrackMesh& cm) {
  std::unordered_map<int, int> minus_of;
  minus_of.reserve(cm.crack_pairs.size());
  for (const auto& pr : cm.crack_pairs) minus_of[pr[0]] = pr[1];
  const Mesh& m = cm.mesh;
  std::vector<CrackEdge> edges;
  edges.reserve(m.line_nodes.size());
  for (std::size_t i = 0; i + 1 < m.line_nodes.size(); ++i) {
    CrackEdge e;
    e.ap = m.line_nodes[i];
    e.bp = m.line_nodes[i + 1];
    auto ia = minus_of.find(e.ap);
    auto ib = minus_of.find(e.bp);
    e.am = ia == minus_of.end() ? -1 : ia->second;
    e.bm = ib == minus_of.end() ? -1 : ib->second;
    e.xa = m.point(e.ap).x;
    e.xb = m.point(e.bp).x;
    Vec2 ev = m.edge_vec(e.ap, e.bp);
    e.len = std::hypot(ev.x, ev.y);
    edges.push_back(e);
  }
  return edges;
}

// 2-point Gauss on [0, 1]: nodes 1/2 -+ 1/(2 sqrt 3), weights 1/2.
constexpr double kGaussOff = 0.28867513459481287;
constexpr double kGaussXi[2] = {0.5 - kGaussOff, 0.5 + kGaussOff};

}  // namespace

SparseSym assemble_interface_jump(
    const CrackMesh& cm, const std::function<double(double)>& gamma_fn) {
  if (!gamma_fn)
    throw std::invalid_argument("assemble_interface_jump: empty gamma");
  if (cm.crack_pairs.size() != cm.mesh.line_nodes.size())
    throw std::invalid_argument(
        "assemble_interface_jump: the crack must run along the entire line "
        "(split the mesh in full mode)");

  std::vector<std::array<int, 2>> idx;
  std::vector<double> val;
  for (const CrackEdge& e : crack_edges(cm)) {
    // Local 2x2 in jump unknowns (j_a, j_b), then expanded over the four
    // node values with signs +a, -a, +b, -b.
    double loc[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
    for (double xi : kGaussXi) {
      double x = e.xa + xi * (e.xb - e.xa);
      double g = gamma_fn(x);
      if (g < 0.0)
        throw std::invalid_argument(
            "assemble_interface_jump: gamma negative at x = " +
            std::to_string(x));
      double w = 0.5 * e.len * g;
      double pa = 1.0 - xi, pb = xi;
      loc[0][0] += w * pa * pa;
      loc[0][1] += w * pa * pb;
      loc[1][0] += w * pb * pa;
      loc[1][1] += w * pb * pb;
    }
    int ids[2][2] = {{e.ap, e.am}, {e.bp, e.bm}};
    double sgn[2] = {1.0, -1.0};
    for (int a = 0; a < 2; ++a)
      for (int sa = 0; sa < 2; ++sa)
        for (int bb = 0; bb < 2; ++bb)
          for (int sb = 0; sb < 2; ++sb) {
            idx.push_back({ids[a][sa], ids[bb][sb]});
            val.push_back(sgn[sa] * sgn[sb] * loc[a][bb]);
          }
  }
  return from_triplets(cm.mesh.num_vertices(), std::move(idx),
                       std::move(val));
}

FeFunction interpolate(const CrackMesh& cm,
                       const std::function<double(Vec2)>& f) {
  FeFunction u;
  u.values.resize(static_cast<std::size_t>(cm.mesh.num_vertices()));
  for (int v = 0; v < cm.mesh.num_vertices(); ++v)
    u.values[v] = f(cm.mesh.point(v));
  return u;
}

int cg_solve(const SparseSym& s, const std::vector<double>& rhs,
             std::vector<double>& x, double rel_tol) {
  int n = s.n;
  if (static_cast<int>(rhs.size()) != n || static_cast<int>(x.size()) != n)
    throw std::invalid_argument("cg_solve: size mismatch");
  double rhs_norm = norm2(rhs);
  if (rhs_norm == 0.0) {
    x.assign(static_cast<std::size_t>(n), 0.0);
    return 0;
  }
  std::vector<double> diag = s.diagonal();
  for (int i = 0; i < n; ++i)
    if (!(diag[i] > 0.0))
      throw std::runtime_error("cg_solve: nonpositive diagonal at row " +
                               std::to_string(i));

  std::vector<double> r(static_cast<std::size_t>(n)), z(r), p(r), sp(r);
  s.mul(x, sp);
  for (int i = 0; i < n; ++i) r[i] = rhs[i] - sp[i];
  if (norm2(r) <= rel_tol * rhs_norm) return 0;
  for (int i = 0; i < n; ++i) z[i] = r[i] / diag[i];
  p = z;
  double rz = dot(r, z);
  int max_it = 10 * n;
  for (int it = 1; it <= max_it; ++it) {
    s.mul(p, sp);
    double psp = dot(p, sp);
    if (!(psp > 0.0))
      throw std::runtime_error("cg_solve: matrix not positive definite");
    double alpha = rz / psp;
    for (int i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * sp[i];
    }
    if (norm2(r) <= rel_tol * rhs_norm) return it;
    double rz_new = 0.0;
    for (int i = 0; i < n; ++i) {
      z[i] = r[i] / diag[i];
      rz_new += r[i] * z[i];
    }
    double beta = rz_new / rz;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    rz = rz_new;
  }
  throw std::runtime_error("cg_solve: no convergence within 10 n iterations");
}

namespace {

FeFunction resolve(const SparseSym& system, const SparseSym& mass,
                   const FeFunction& f, double rel_tol) {
  if (static_cast<int>(f.values.size()) != system.n)
    throw std::invalid_argument("resolvent solve: f size mismatch");
  std::vector<double> rhs;
  mass.mul(f.values, rhs);
  FeFunction u;
  u.values.assign(f.values.size(), 0.0);
  cg_solve(system, rhs, u.values, rel_tol);
  return u;
}

}  // namespace

FeFunction solve_perforated(const CrackMesh& cm, const FeFunction& f,
                            double rel_tol) {
  Assembled a = assemble(cm);
  return resolve(sparse_add(a.stiffness, a.mass), a.mass, f, rel_tol);
}

FeFunction solve_homogenized(const CrackMesh& cm,
                             const std::function<double(double)>& gamma_fn,
                             const FeFunction& f, double rel_tol) {
  Assembled a = assemble(cm);
  SparseSym j = assemble_interface_jump(cm, gamma_fn);
  return resolve(sparse_add(sparse_add(a.stiffness, j), a.mass), a.mass, f,
                 rel_tol);
}

bool Spectrum::all_converged() const {
  for (bool c : converged)
    if (!c) return false;
  return !converged.empty();
}

namespace {

// Cyclic Jacobi eigensolver for a dense symmetric b x b matrix (b <= 26
// here). a is row-major and is destroyed; on return vals holds the
// eigenvalues ascending and vecs the matching eigenvectors as columns.
void dense_jacobi(std::vector<double>& a, int b, std::vector<double>& vals,
                  std::vector<double>& vecs) {
  vecs.assign(static_cast<std::size_t>(b) * b, 0.0);
  for (int i = 0; i < b; ++i) vecs[static_cast<std::size_t>(i) * b + i] = 1.0;
  auto at = [&](int i, int j) -> double& {
    return a[static_cast<std::size_t>(i) * b + j];
  };
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0, dia = 0.0;
    for (int i = 0; i < b; ++i) {
      dia += std::abs(at(i, i));
      for (int j = i + 1; j < b; ++j) off += 2.0 * at(i, j) * at(i, j);
    }
    if (std::sqrt(off) <= 1e-15 * std::max(dia, 1e-300)) break;
    for (int p = 0; p < b; ++p)
      for (int q = p + 1; q < b; ++q) {
        double apq = at(p, q);
        if (apq == 0.0) continue;
        double theta = 0.5 * (at(q, q) - at(p, p)) / apq;
        double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = t * c;
        for (int k = 0; k < b; ++k) {
          double akp = at(k, p), akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < b; ++k) {
          double apk = at(p, k), aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < b; ++k) {
          double vkp = vecs[static_cast<std::size_t>(k) * b + p];
          double vkq = vecs[static_cast<std::size_t>(k) * b + q];
          vecs[static_cast<std::size_t>(k) * b + p] = c * vkp - s * vkq;
          vecs[static_cast<std::size_t>(k) * b + q] = s * vkp + c * vkq;
        }
      }
  }
  vals.resize(static_cast<std::size_t>(b));
  for (int i = 0; i < b; ++i) vals[i] = at(i, i);
  std::vector<int> ord(static_cast<std::size_t>(b));
  std::iota(ord.begin(), ord.end(), 0);
  std::sort(ord.begin(), ord.end(),
            [&](int i, int j) { return vals[i] < vals[j]; });
  std::vector<double> sv(vals), svec(vecs);
  for (int i = 0; i < b; ++i) {
    vals[i] = sv[ord[i]];
    for (int k = 0; k < b; ++k)
      vecs[static_cast<std::size_t>(k) * b + i] =
          svec[static_cast<std::size_t>(k) * b + ord[i]];
  }
}

}  // namespace

Spectrum eigen_smallest(const SparseSym& stiffness, const SparseSym& mass,
                        const SparseSym* jump, int m, double tol) {
  if (m < 1 || m > 20)
    throw std::invalid_argument("eigen_smallest: m must be in [1, 20]");
  int n = stiffness.n;
  if (n < m)
    throw std::invalid_argument("eigen_smallest: m exceeds the dimension");

  SparseSym a_owned;
  const SparseSym* a = &stiffness;
  if (jump) {
    a_owned = sparse_add(stiffness, *jump);
    a = &a_owned;
  }
  SparseSym s = sparse_add(*a, mass);

  int b = std::min(n, m + 6);
  std::size_t un = static_cast<std::size_t>(n);
  std::vector<std::vector<double>> z(b, std::vector<double>(un));
  std::vector<std::vector<double>> mz(b, std::vector<double>(un));
  std::vector<std::vector<double>> az(b, std::vector<double>(un));
  std::mt19937 rng(20240615u);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (auto& col : z)
    for (double& x : col) x = unif(rng);

  // M-orthonormalize z in place by modified Gram-Schmidt with one
  // reorthogonalization pass, keeping mz = M z in sync.
  auto orthonormalize = [&]() {
    for (int i = 0; i < b; ++i) {
      mass.mul(z[i], mz[i]);
      for (int pass = 0; pass < 2; ++pass)
        for (int j = 0; j < i; ++j) {
          double c = dot(z[j], mz[i]);
          for (std::size_t k = 0; k < un; ++k) {
            z[i][k] -= c * z[j][k];
            mz[i][k] -= c * mz[j][k];
          }
        }
      double nrm = std::sqrt(std::max(dot(z[i], mz[i]), 0.0));
      if (!(nrm > 1e-150)) {
        // Rank collapse: replace with a fresh random direction and redo.
        for (double& x : z[i]) x = unif(rng);
        mass.mul(z[i], mz[i]);
        for (int j = 0; j < i; ++j) {
          double c = dot(z[j], mz[i]);
          for (std::size_t k = 0; k < un; ++k) {
            z[i][k] -= c * z[j][k];
            mz[i][k] -= c * mz[j][k];
          }
        }
        nrm = std::sqrt(std::max(dot(z[i], mz[i]), 0.0));
      }
      for (std::size_t k = 0; k < un; ++k) {
        z[i][k] /= nrm;
        mz[i][k] /= nrm;
      }
    }
  };

  orthonormalize();

  Spectrum out;
  out.values.assign(static_cast<std::size_t>(m), 0.0);
  out.residuals.assign(static_cast<std::size_t>(m), 0.0);
  out.converged.assign(static_cast<std::size_t>(m), false);

  std::vector<double> theta(static_cast<std::size_t>(b), 0.0);
  std::vector<double> rhs(un), ritz(un), mritz(un), aritz(un);
  double worst = 1.0;
  const int max_outer = 60;
  for (int outer = 0; outer < max_outer; ++outer) {
    // Inverse step: z_i <- S^{-1} M z_i, warm-started at z_i / (1 + theta_i).
    double tol_in =
        std::clamp(1e-2 * worst, 1e-12, outer == 0 ? 1e-5 : 1e-6);
    for (int i = 0; i < b; ++i) {
      rhs = mz[i];
      if (outer == 0) {
        z[i].assign(un, 0.0);
      } else {
        double scale = 1.0 / (1.0 + std::max(theta[i], 0.0));
        for (double& x : z[i]) x *= scale;
      }
      cg_solve(s, rhs, z[i], tol_in);
    }
    orthonormalize();

    // Ritz projection: since z is M-orthonormal the reduced pencil is
    // (z^T A z, I).
    std::vector<double> ar(static_cast<std::size_t>(b) * b, 0.0);
    for (int i = 0; i < b; ++i) a->mul(z[i], az[i]);
    for (int i = 0; i < b; ++i)
      for (int j = i; j < b; ++j) {
        double v = dot(z[i], az[j]);
        ar[static_cast<std::size_t>(i) * b + j] = v;
        ar[static_cast<std::size_t>(j) * b + i] = v;
      }
    std::vector<double> vals, vecs;
    dense_jacobi(ar, b, vals, vecs);
    theta = vals;

    // Rotate the block onto the Ritz vectors (z V), reusing az/mz caches to
    // get residuals r_i = ||A v_i - theta_i M v_i|| without extra matvecs.
    std::vector<std::vector<double>> zn(b, std::vector<double>(un, 0.0)),
        mzn(b, std::vector<double>(un, 0.0)),
        azn(b, std::vector<double>(un, 0.0));
    for (int j = 0; j < b; ++j)
      for (int i = 0; i < b; ++i) {
        double c = vecs[static_cast<std::size_t>(i) * b + j];
        if (c == 0.0) continue;
        for (std::size_t k = 0; k < un; ++k) {
          zn[j][k] += c * z[i][k];
          mzn[j][k] += c * mz[i][k];
          azn[j][k] += c * az[i][k];
        }
      }
    z.swap(zn);
    mz.swap(mzn);
    az.swap(azn);

    worst = 0.0;
    for (int i = 0; i < m; ++i) {
      double r2 = 0.0;
      for (std::size_t k = 0; k < un; ++k) {
        double r = az[i][k] - theta[i] * mz[i][k];
        r2 += r * r;
      }
      out.values[i] = theta[i];
      out.residuals[i] = std::sqrt(r2);
      out.converged[i] = out.residuals[i] <= tol;
      worst = std::max(worst, out.residuals[i]);
    }
    if (out.all_converged()) break;
  }
  return out;
}

Norms norms(const CrackMesh& cm, const FeFunction& u,
            const std::function<double(double)>& gamma_fn) {
  if (static_cast<int>(u.values.size()) != cm.mesh.num_vertices())
    throw std::invalid_argument("norms: u size mismatch");
  Assembled a = assemble(cm);
  Norms out;
  out.l2_total = std::sqrt(std::max(a.mass.quad(u.values, u.values), 0.0));
  out.h1_broken =
      std::sqrt(std::max(a.stiffness.quad(u.values, u.values), 0.0));
  if (gamma_fn) {
    double acc = 0.0;
    for (const CrackEdge& e : crack_edges(cm)) {
      double ja = e.am < 0 ? 0.0 : u.values[e.ap] - u.values[e.am];
      double jb = e.bm < 0 ? 0.0 : u.values[e.bp] - u.values[e.bm];
      for (double xi : kGaussXi) {
        double x = e.xa + xi * (e.xb - e.xa);
        double j = (1.0 - xi) * ja + xi * jb;
        acc += 0.5 * e.len * gamma_fn(x) * j * j;
      }
    }
    out.l2_gamma_jump = std::sqrt(std::max(acc, 0.0));
  }
  return out;
}

}  // namespace sieve
