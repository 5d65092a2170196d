// Corrector assembly. The three pieces:
//
//   mean_jump_on_S    exact integral of the piecewise-linear jump g+ - g-
//                     over the guard interval, edge by edge with clipping,
//                     divided by the interval length 2 rho_k.
//   build_corrector   nodal interpolation of -+ 1/2 c_k U_k onto the main
//                     mesh. U_k lives on its own disk mesh (from
//                     capacity_fem, centered at the origin); main-mesh nodes
//                     inside the guard disk are located in that mesh by
//                     uniform-grid binning plus barycentric tests. Nodes
//                     anchored at the hole use their anchor-local offsets
//                     directly, so the lookup stays exact at hole scales far
//                     below the spacing of doubles at the hole's global
//                     position. Points beyond the disk mesh's polygonal
//                     outer boundary evaluate to 0, consistent with U = 0 on
//                     that boundary.
//   corrector_properties  per-triangle exact P1 quadrature of the per-side
//                     L2 norms and Dirichlet energies, plus the two
//                     comparisons described in the header.
//
// The potential mesh near each hole is finer than the main mesh there
// (capacity solves grade to ~d/64 against the main mesh's ~d/4), so the
// interpolation error in the energy identity stays well below the capacity
// discretization error itself; build_corrector enforces nothing about mesh
// sizes, but the acceptance and unit tests pin the observed defect.

#include "sieve/corrector.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace sieve {

namespace {

double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

// Point location in a single-anchor disk mesh (coordinates = anchor-local
// offsets). The disk meshes are log-graded rings around the origin, so
// triangles are binned in (log radius, angle): every graded triangle covers
// O(1) bins at any radius, and a query near the slit sees only slit-scale
// candidates. Angles use signed zeros on the line so that lower-side
// triangles bin at theta = -pi, not +pi; along a straight segment theta is
// monotone (d/dt atan2 has the constant sign of cross(dir, p)), so the
// vertex ranges bound the triangle exactly. A query takes the candidate
// triangle whose minimum barycentric coordinate is largest; queries outside
// every triangle (beyond the polygonal outer boundary) return 0.
class DiskLocator {
 public:
  explicit DiskLocator(const Mesh& m) : mesh_(&m) {
    if (m.anchors.size() != 1)
      throw std::invalid_argument(
          "DiskLocator: potential mesh must have a single anchor");
    double rmax = 0.0;
    double rmin = std::numeric_limits<double>::infinity();
    for (const Vec2& off : m.v_off) {
      const double r = std::hypot(off.x, off.y);
      rmax = std::max(rmax, r);
      if (r > 0.0) rmin = std::min(rmin, r);
    }
    if (!(rmax > 0.0) || !(rmin < rmax))
      throw std::invalid_argument("DiskLocator: degenerate potential mesh");
    rmax_ = rmax;
    ln_lo_ = std::log(rmin);
    ln_scale_ = nr_ / (std::log(rmax) - ln_lo_);
    bins_.resize(static_cast<std::size_t>(nr_) * nth_);
    for (int t = 0; t < m.num_tris(); ++t) {
      const auto& tri = m.tris[static_cast<std::size_t>(t)];
      int side = 0;
      for (int j = 0; j < 3 && side == 0; ++j) {
        const double y = m.v_off[static_cast<std::size_t>(tri[j])].y;
        side = y > 0.0 ? 1 : (y < 0.0 ? -1 : 0);
      }
      int r0 = nr_ - 1, r1 = 0, t0 = nth_ - 1, t1 = 0;
      for (int j = 0; j < 3; ++j) {
        const Vec2 v = m.v_off[static_cast<std::size_t>(tri[j])];
        const int rb = rbin(std::hypot(v.x, v.y));
        const int tb = tbin(theta_on_side(v, side));
        r0 = std::min(r0, rb);
        r1 = std::max(r1, rb);
        t0 = std::min(t0, tb);
        t1 = std::max(t1, tb);
      }
      for (int rb = r0; rb <= r1; ++rb)
        for (int tb = t0; tb <= t1; ++tb)
          bins_[static_cast<std::size_t>(rb * nth_ + tb)].push_back(t);
    }
  }

  // side disambiguates theta for on-line query points (y == 0).
  double eval(const Vec2& p, int side, const std::vector<double>& vals) const {
    const double r = std::hypot(p.x, p.y);
    if (r > rmax_ * (1.0 + 1e-12)) return 0.0;
    const int prb = rbin(r);
    const int ptb = tbin(theta_on_side(p, side));
    double best_min = -std::numeric_limits<double>::infinity();
    double best_val = 0.0;
    for (int rb = std::max(prb - 1, 0); rb <= std::min(prb + 1, nr_ - 1);
         ++rb) {
      for (int tb = std::max(ptb - 1, 0); tb <= std::min(ptb + 1, nth_ - 1);
           ++tb) {
        for (int t : bins_[static_cast<std::size_t>(rb * nth_ + tb)]) {
          const auto& tri = mesh_->tris[static_cast<std::size_t>(t)];
          const Vec2 a = mesh_->v_off[static_cast<std::size_t>(tri[0])];
          const Vec2 e01 = mesh_->edge_vec(tri[0], tri[1]);
          const Vec2 e02 = mesh_->edge_vec(tri[0], tri[2]);
          const Vec2 pa{p.x - a.x, p.y - a.y};
          const double det = cross(e01, e02);  // 2 * area, > 0 (CCW)
          const double l1 = cross(pa, e02) / det;
          const double l2 = cross(e01, pa) / det;
          const double l0 = 1.0 - l1 - l2;
          const double mn = std::min({l0, l1, l2});
          if (mn > best_min) {
            best_min = mn;
            best_val = l0 * vals[static_cast<std::size_t>(tri[0])] +
                       l1 * vals[static_cast<std::size_t>(tri[1])] +
                       l2 * vals[static_cast<std::size_t>(tri[2])];
            if (mn >= -1e-12) return best_val;  // inside up to roundoff
          }
        }
      }
    }
    // Interior points always score ~ -1e-14 or better; clearly negative
    // minima mean the point lies outside the polygonal boundary, where the
    // potential is 0.
    return best_min >= -1e-7 ? best_val : 0.0;
  }

 private:
  static double theta_on_side(const Vec2& v, int side) {
    const double y = v.y == 0.0 ? (side < 0 ? -0.0 : 0.0) : v.y;
    return std::atan2(y, v.x);
  }
  int rbin(double r) const {
    if (!(r > 0.0)) return 0;
    return std::clamp(static_cast<int>((std::log(r) - ln_lo_) * ln_scale_), 0,
                      nr_ - 1);
  }
  int tbin(double th) const {
    return std::clamp(
        static_cast<int>((th + kPi) / (2.0 * kPi) * nth_), 0, nth_ - 1);
  }

  static constexpr double kPi = 3.14159265358979323846;
  const Mesh* mesh_;
  double rmax_ = 0.0;
  double ln_lo_ = 0.0;
  double ln_scale_ = 0.0;
  int nr_ = 192;
  int nth_ = 64;
  std::vector<std::vector<int>> bins_;
};

// Largest gap between consecutive line nodes with midpoint within
// [center - w, center + w]: the effective near-hole line resolution.
double line_gap_near(const Mesh& m, double center, double w) {
  double gap = 0.0;
  for (std::size_t i = 0; i + 1 < m.line_nodes.size(); ++i) {
    const double xa = m.point(m.line_nodes[i]).x;
    const double xb = m.point(m.line_nodes[i + 1]).x;
    const double mid = 0.5 * (xa + xb);
    if (mid < center - w || mid > center + w) continue;
    gap = std::max(gap, xb - xa);
  }
  return gap;
}

void require_full_crack(const CrackMesh& cm, const char* who) {
  if (cm.crack_pairs.size() != cm.mesh.line_nodes.size())
    throw std::invalid_argument(
        std::string(who) +
        ": needs a full-crack mesh (every line node duplicated)");
}

void require_value_count(const Mesh& m, const FeFunction& g, const char* who) {
  if (static_cast<int>(g.values.size()) != m.num_vertices())
    throw std::invalid_argument(std::string(who) +
                                ": nodal value count does not match the mesh");
}

}  // namespace

double mean_jump_on_S(const CrackMesh& cm, const FeFunction& g,
                      const Hole& hole) {
  const Mesh& m = cm.mesh;
  require_full_crack(cm, "mean_jump_on_S");
  require_value_count(m, g, "mean_jump_on_S");
  if (!(hole.guard_radius > 0.0))
    throw std::invalid_argument("mean_jump_on_S: guard radius must be > 0");

  std::unordered_map<int, int> minus_of;
  minus_of.reserve(cm.crack_pairs.size());
  for (const auto& pr : cm.crack_pairs) minus_of[pr[0]] = pr[1];

  const double lo = hole.center - hole.guard_radius;
  const double hi = hole.center + hole.guard_radius;
  const double x_first = m.point(m.line_nodes.front()).x;
  const double x_last = m.point(m.line_nodes.back()).x;
  const double slack = 1e-12 * (x_last - x_first);
  if (lo < x_first - slack || hi > x_last + slack)
    throw std::invalid_argument(
        "mean_jump_on_S: guard interval sticks out of the meshed line");

  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < m.line_nodes.size(); ++i) {
    const int a = m.line_nodes[i];
    const int b = m.line_nodes[i + 1];
    const double xa = m.point(a).x;
    const double xb = m.point(b).x;
    const double s = std::max(xa, lo);
    const double t = std::min(xb, hi);
    if (!(t > s)) continue;
    const double ja = g.values[static_cast<std::size_t>(a)] -
                      g.values[static_cast<std::size_t>(minus_of.at(a))];
    const double jb = g.values[static_cast<std::size_t>(b)] -
                      g.values[static_cast<std::size_t>(minus_of.at(b))];
    const double js = ja + (jb - ja) * ((s - xa) / (xb - xa));
    const double jt = ja + (jb - ja) * ((t - xa) / (xb - xa));
    integral += 0.5 * (js + jt) * (t - s);
  }
  return integral / (2.0 * hole.guard_radius);
}

CorrectorField build_corrector(const CrackMesh& cm, const SieveConfig& config,
                               const FeFunction& g,
                               const std::vector<PotentialField>& potentials) {
  const Mesh& m = cm.mesh;
  require_full_crack(cm, "build_corrector");
  require_value_count(m, g, "build_corrector");
  if (config.n != 2)
    throw std::invalid_argument(
        "build_corrector: implemented for the plane case (n = 2) only");
  const std::size_t nh = config.holes.size();
  if (potentials.size() != nh)
    throw std::invalid_argument(
        "build_corrector: one potential per hole required");
  if (m.holes.size() != nh)
    throw std::invalid_argument(
        "build_corrector: mesh hole list does not match the configuration");

  std::vector<std::size_t> order(nh);
  for (std::size_t k = 0; k < nh; ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return config.holes[a].center < config.holes[b].center;
  });
  for (std::size_t i = 0; i + 1 < nh; ++i) {
    const Hole& ha = config.holes[order[i]];
    const Hole& hb = config.holes[order[i + 1]];
    const double gap = hb.center - ha.center;
    const double need = ha.guard_radius + hb.guard_radius;
    if (gap < need * (1.0 - 1e-12))
      throw std::invalid_argument("build_corrector: overlapping guard disks");
  }

  for (std::size_t k = 0; k < nh; ++k) {
    const Hole& hk = config.holes[k];
    if (std::abs(m.holes[k].center - hk.center) >
        1e-12 * std::max(1.0, std::abs(hk.center)))
      throw std::invalid_argument(
          "build_corrector: mesh and configuration disagree on hole centers");
    const PotentialField& pf = potentials[k];
    if (pf.n != config.n)
      throw std::invalid_argument(
          "build_corrector: potential dimension mismatch");
    if (!(std::abs(pf.rho - hk.guard_radius) <= 1e-9 * hk.guard_radius))
      throw std::invalid_argument(
          "build_corrector: potential guard radius does not match hole " +
          std::to_string(k));
    if (!(std::abs(pf.d - hk.half_width) <=
          1e-9 * std::max(hk.half_width, 1e-300)))
      throw std::invalid_argument(
          "build_corrector: potential half-width does not match hole " +
          std::to_string(k));
    // Interpolation budget: the potential mesh must resolve the line near
    // the hole at least twice as finely as the main mesh (h_hole <=
    // h_main/2), measured by the largest line-edge length within half a
    // guard radius of the center.
    const double main_gap =
        line_gap_near(m, hk.center, 0.5 * hk.guard_radius);
    const double hole_gap =
        line_gap_near(pf.mesh, 0.0, 0.5 * hk.guard_radius);
    if (!(hole_gap <= 0.5 * main_gap * (1.0 + 1e-9)))
      throw std::invalid_argument(
          "build_corrector: potential mesh too coarse near hole " +
          std::to_string(k) + " (needs h_hole <= h_main/2: line gaps " +
          std::to_string(hole_gap) + " vs " + std::to_string(main_gap) + ")");
  }

  std::vector<double> coeffs(nh, 0.0);
  std::vector<double> caps(nh, 0.0);
  for (std::size_t k = 0; k < nh; ++k) {
    coeffs[k] = mean_jump_on_S(cm, g, config.holes[k]);
    caps[k] = potentials[k].energy;
  }

  // Side of each vertex: strict y sign off the line, crack-pair role on it.
  std::vector<int> side(static_cast<std::size_t>(m.num_vertices()), 0);
  for (int v = 0; v < m.num_vertices(); ++v) {
    const double y = m.point(v).y;
    side[static_cast<std::size_t>(v)] = y > 0.0 ? 1 : (y < 0.0 ? -1 : 0);
  }
  for (const auto& pr : cm.crack_pairs) {
    side[static_cast<std::size_t>(pr[0])] = 1;
    side[static_cast<std::size_t>(pr[1])] = -1;
  }

  // Guard disks are disjoint, so each vertex belongs to at most one; find it
  // by binary search over the centers sorted above.
  std::vector<double> centers(nh);
  for (std::size_t i = 0; i < nh; ++i)
    centers[i] = config.holes[order[i]].center;
  std::vector<std::unique_ptr<DiskLocator>> locators(nh);

  CorrectorField out;
  out.values.values.assign(static_cast<std::size_t>(m.num_vertices()), 0.0);
  for (int v = 0; v < m.num_vertices(); ++v) {
    const Vec2 q = m.point(v);
    const auto it = std::upper_bound(centers.begin(), centers.end(), q.x);
    for (std::ptrdiff_t c : {it - centers.begin() - 1, it - centers.begin()}) {
      if (c < 0 || c >= static_cast<std::ptrdiff_t>(nh)) continue;
      const std::size_t k = order[static_cast<std::size_t>(c)];
      const Hole& hk = config.holes[k];
      Vec2 p;  // relative to the hole center
      if (m.v_anchor[static_cast<std::size_t>(v)] == m.hole_anchor[k])
        p = m.v_off[static_cast<std::size_t>(v)];
      else
        p = {q.x - hk.center, q.y};
      if (p.x * p.x + p.y * p.y >= hk.guard_radius * hk.guard_radius)
        continue;
      // Inside guard disk k; disjointness rules out every other hole.
      if (coeffs[k] != 0.0) {
        if (!locators[k])
          locators[k] = std::make_unique<DiskLocator>(potentials[k].mesh);
        const double u =
            locators[k]->eval(p, side[static_cast<std::size_t>(v)],
                              potentials[k].values);
        if (u != 0.0)
          out.values.values[static_cast<std::size_t>(v)] =
              (side[static_cast<std::size_t>(v)] > 0 ? -0.5 : 0.5) *
              coeffs[k] * u;
      }
      break;
    }
  }
  out.coeffs = std::move(coeffs);
  out.capacities = std::move(caps);
  return out;
}

CorrectorReport corrector_properties(const CrackMesh& cm,
                                     const CorrectorField& w,
                                     const FeFunction& g,
                                     const SieveConfig& config) {
  const Mesh& m = cm.mesh;
  require_full_crack(cm, "corrector_properties");
  require_value_count(m, w.values, "corrector_properties");
  require_value_count(m, g, "corrector_properties");
  if (w.coeffs.size() != w.capacities.size() ||
      w.coeffs.size() != config.holes.size())
    throw std::invalid_argument(
        "corrector_properties: coefficient/capacity lists do not match the "
        "configuration");

  double l2p2 = 0.0, l2m2 = 0.0, ep = 0.0, em = 0.0;
  for (int t = 0; t < m.num_tris(); ++t) {
    const auto& tri = m.tris[static_cast<std::size_t>(t)];
    const Vec2 e01 = m.edge_vec(tri[0], tri[1]);
    const Vec2 e02 = m.edge_vec(tri[0], tri[2]);
    const double det = cross(e01, e02);  // 2 * area
    const double area = 0.5 * det;
    const double v0 = w.values.values[static_cast<std::size_t>(tri[0])];
    const double v1 = w.values.values[static_cast<std::size_t>(tri[1])];
    const double v2 = w.values.values[static_cast<std::size_t>(tri[2])];
    const double mass =
        area / 6.0 *
        (v0 * v0 + v1 * v1 + v2 * v2 + v0 * v1 + v1 * v2 + v0 * v2);
    const double gx = ((v1 - v0) * e02.y - (v2 - v0) * e01.y) / det;
    const double gy = ((v2 - v0) * e01.x - (v1 - v0) * e02.x) / det;
    const double energy = (gx * gx + gy * gy) * area;
    if (m.tri_side[static_cast<std::size_t>(t)] > 0) {
      l2p2 += mass;
      ep += energy;
    } else {
      l2m2 += mass;
      em += energy;
    }
  }

  CorrectorReport rep;
  rep.l2_plus = std::sqrt(std::max(l2p2, 0.0));
  rep.l2_minus = std::sqrt(std::max(l2m2, 0.0));
  rep.energy_plus = ep;
  rep.energy_minus = em;
  for (std::size_t k = 0; k < w.coeffs.size(); ++k)
    rep.quarter_capacity += 0.25 * w.capacities[k] * w.coeffs[k] * w.coeffs[k];
  const double jump = norms(cm, g, config.gamma_fn).l2_gamma_jump;
  rep.half_jump_norm2 = 0.5 * jump * jump;
  const double etot = ep + em;
  if (rep.quarter_capacity > 0.0)
    rep.oracle_deviation =
        std::abs(etot - rep.quarter_capacity) / rep.quarter_capacity;
  else
    rep.oracle_deviation =
        etot > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  rep.split_asymmetry = etot > 0.0 ? std::abs(ep - em) / etot : 0.0;
  rep.per_side_deviation = std::max(std::abs(ep - rep.half_jump_norm2),
                                    std::abs(em - rep.half_jump_norm2));
  return rep;
}

}  // namespace sieve
