#include "sieve/patches.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace sieve {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

int MeshBuilder::add_anchor(double x, double y) {
  anchors_.push_back({x, y});
  return static_cast<int>(anchors_.size()) - 1;
}

int MeshBuilder::add_vertex(int anchor, double dx, double dy) {
  v_anchor_.push_back(anchor);
  v_off_.push_back({dx, dy});
  return static_cast<int>(v_anchor_.size()) - 1;
}

Vec2 MeshBuilder::point(int v) const {
  const Vec2& a = anchors_[v_anchor_[v]];
  return {a.x + v_off_[v].x, a.y + v_off_[v].y};
}

Vec2 MeshBuilder::edge_vec(int a, int b) const {
  if (v_anchor_[a] == v_anchor_[b])
    return {v_off_[b].x - v_off_[a].x, v_off_[b].y - v_off_[a].y};
  const Vec2& aa = anchors_[v_anchor_[a]];
  const Vec2& ab = anchors_[v_anchor_[b]];
  return {(ab.x - aa.x) + (v_off_[b].x - v_off_[a].x),
          (ab.y - aa.y) + (v_off_[b].y - v_off_[a].y)};
}

double MeshBuilder::signed_area2(int a, int b, int c) const {
  Vec2 u = edge_vec(a, b);
  Vec2 v = edge_vec(a, c);
  return u.x * v.y - u.y * v.x;
}

void MeshBuilder::add_tri(int a, int b, int c) {
  double s = signed_area2(a, b, c);
  if (s == 0.0) {
    std::ostringstream os;
    os << "degenerate triangle (" << a << ", " << b << ", " << c << ")";
    throw std::runtime_error(os.str());
  }
  if (s < 0.0) std::swap(b, c);
  tris_.push_back({a, b, c});
}

void MeshBuilder::apply_remap(const std::vector<int>& map) {
  for (auto& tri : tris_)
    for (int& v : tri) v = map[v];
}

void MeshBuilder::mirror_lower() {
  if (mirrored_) throw std::logic_error("mirror_lower called twice");
  mirrored_ = true;
  for (const Vec2& a : anchors_)
    if (a.y != 0.0) throw std::logic_error("anchors must lie on the line");
  int n = num_vertices();
  std::vector<int> mirror(n, -1);
  for (int v = 0; v < n; ++v) {
    if (v_off_[v].y == 0.0) {
      mirror[v] = v;
    } else {
      mirror[v] = add_vertex(v_anchor_[v], v_off_[v].x, -v_off_[v].y);
    }
  }
  std::size_t ntri = tris_.size();
  for (std::size_t t = 0; t < ntri; ++t) {
    auto tri = tris_[t];
    add_tri(mirror[tri[0]], mirror[tri[1]], mirror[tri[2]]);
  }
}

Mesh MeshBuilder::finish(const std::vector<Hole>& holes,
                         const std::vector<int>& hole_anchor,
                         double h_background) {
  // Drop vertices no triangle references (welded-away patch columns and
  // their mirrors), renumbering in order.
  int n = num_vertices();
  std::vector<int> remap(n, -1);
  for (const auto& tri : tris_)
    for (int v : tri) remap[v] = 0;
  int next = 0;
  for (int v = 0; v < n; ++v)
    if (remap[v] == 0) remap[v] = next++;

  Mesh m;
  m.anchors = anchors_;
  m.v_anchor.resize(next);
  m.v_off.resize(next);
  for (int v = 0; v < n; ++v) {
    if (remap[v] < 0) continue;
    m.v_anchor[remap[v]] = v_anchor_[v];
    m.v_off[remap[v]] = v_off_[v];
  }
  m.tris = tris_;
  for (auto& tri : m.tris)
    for (int& v : tri) v = remap[v];
  m.holes = holes;
  m.hole_anchor = hole_anchor;
  m.h_background = h_background;

  m.tri_side.resize(m.tris.size());
  for (std::size_t t = 0; t < m.tris.size(); ++t) {
    bool up = false, down = false;
    for (int v : m.tris[t]) {
      if (m.v_off[v].y > 0.0) up = true;
      if (m.v_off[v].y < 0.0) down = true;
    }
    if (up == down) {
      std::ostringstream os;
      os << "triangle " << t << " not strictly on one side (y offsets "
         << m.v_off[m.tris[t][0]].y << ", " << m.v_off[m.tris[t][1]].y << ", "
         << m.v_off[m.tris[t][2]].y << ")";
      throw std::logic_error(os.str());
    }
    m.tri_side[t] = up ? +1 : -1;
  }

  rebuild_line_nodes(m);
  rebuild_boundary_edges(m);
  return m;
}

Vec2 square_chain_point(double a, double s) {
  if (s <= 0.25) return {a, a * (4.0 * s)};
  if (s <= 0.75) return {a * (1.0 - 4.0 * (s - 0.25)), a};
  return {-a, a * (1.0 - 4.0 * (s - 0.75))};
}

static std::vector<double> uniform_params(int segs) {
  std::vector<double> p(segs + 1);
  for (int i = 0; i <= segs; ++i) p[i] = static_cast<double>(i) / segs;
  return p;
}

static Chain make_chain(MeshBuilder& b, int anchor,
                        const std::vector<double>& params,
                        const std::function<Vec2(double)>& pos) {
  Chain c;
  c.params = params;
  for (double s : params) {
    Vec2 p = pos(s);
    c.nodes.push_back(b.add_vertex(anchor, p.x, p.y));
  }
  return c;
}

Chain square_half_ring(MeshBuilder& b, int anchor, double a, int segs) {
  if (segs < 4 || segs % 4 != 0)
    throw std::invalid_argument("square_half_ring needs segs divisible by 4");
  return make_chain(b, anchor, uniform_params(segs),
                    [a](double s) { return square_chain_point(a, s); });
}

Chain circle_half_ring(MeshBuilder& b, int anchor, double r, int segs) {
  return make_chain(b, anchor, uniform_params(segs), [r](double s) {
    // Exact endpoints and apex: the ends must be genuine line nodes
    // (sin(pi) in doubles is ~1e-16, not 0).
    if (s == 0.0) return Vec2{r, 0.0};
    if (s == 0.5) return Vec2{0.0, r};
    if (s == 1.0) return Vec2{-r, 0.0};
    double th = kPi * s;
    return Vec2{r * std::cos(th), r * std::sin(th)};
  });
}

Chain chain_of(const MeshBuilder& b, const std::vector<int>& nodes) {
  Chain c;
  c.nodes = nodes;
  c.params.resize(nodes.size());
  double total = 0.0;
  c.params[0] = 0.0;
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    Vec2 e = b.edge_vec(nodes[i - 1], nodes[i]);
    total += std::hypot(e.x, e.y);
    c.params[i] = total;
  }
  if (total <= 0.0) throw std::invalid_argument("zero-length chain");
  for (double& p : c.params) p /= total;
  c.params.back() = 1.0;
  return c;
}

void split_quad(MeshBuilder& b, int c0, int c1, int c2, int c3) {
  auto pair_quality = [&](int a1, int b1, int d1, int a2, int b2, int d2) {
    double q1 = tri_min_angle_from_edges(b.edge_vec(a1, b1), b.edge_vec(a1, d1));
    double q2 = tri_min_angle_from_edges(b.edge_vec(a2, b2), b.edge_vec(a2, d2));
    return std::min(q1, q2);
  };
  double qa = pair_quality(c0, c1, c2, c0, c2, c3);  // diagonal c0-c2
  double qb = pair_quality(c1, c2, c3, c1, c3, c0);  // diagonal c1-c3
  if (qa >= qb) {
    b.add_tri(c0, c1, c2);
    b.add_tri(c0, c2, c3);
  } else {
    b.add_tri(c1, c2, c3);
    b.add_tri(c1, c3, c0);
  }
}

void band(MeshBuilder& b, const Chain& inner, const Chain& outer) {
  std::size_t i = 0, j = 0;
  const double tol = 1e-9;
  while (i + 1 < inner.nodes.size() || j + 1 < outer.nodes.size()) {
    bool can_i = i + 1 < inner.nodes.size();
    bool can_j = j + 1 < outer.nodes.size();
    double pi = can_i ? inner.params[i + 1] : 2.0;
    double pj = can_j ? outer.params[j + 1] : 2.0;
    if (can_i && can_j && std::abs(pi - pj) < tol) {
      split_quad(b, inner.nodes[i], inner.nodes[i + 1], outer.nodes[j + 1],
                 outer.nodes[j]);
      ++i;
      ++j;
    } else if (pi < pj) {
      b.add_tri(inner.nodes[i], inner.nodes[i + 1], outer.nodes[j]);
      ++i;
    } else {
      b.add_tri(inner.nodes[i], outer.nodes[j + 1], outer.nodes[j]);
      ++j;
    }
  }
}

namespace {

struct TipBox {
  Chain boundary;  // outer half ring, radius half_width, 8 segments
};

// Graded tip box around (cx, 0): square half rings shrinking by `ratio`
// from half_width over `levels` bands, then a circular ring and a fan of
// eight 22.5-degree sectors to the center node. A fan straight off a square
// ring would have a 18.4-degree sector between the corner and the adjacent
// node; the circular ring makes the sectors angularly uniform.
TipBox build_tip_box(MeshBuilder& b, int anchor, double cx, double half_width,
                     int levels, double ratio) {
  auto ring_at = [&](double r) {
    return make_chain(b, anchor, uniform_params(8), [&, r](double s) {
      Vec2 p = square_chain_point(r, s);
      return Vec2{cx + p.x, p.y};
    });
  };
  TipBox box;
  box.boundary = ring_at(half_width);
  Chain prev = box.boundary;
  double r = half_width;
  for (int j = 0; j < levels; ++j) {
    r *= ratio;
    Chain inner = ring_at(r);
    band(b, inner, prev);
    prev = inner;
  }
  double rc = 0.8 * r;
  Chain circ = make_chain(b, anchor, uniform_params(8), [&, rc](double s) {
    if (s == 0.0) return Vec2{cx + rc, 0.0};
    if (s == 0.5) return Vec2{cx, rc};
    if (s == 1.0) return Vec2{cx - rc, 0.0};
    double th = kPi * s;
    return Vec2{cx + rc * std::cos(th), rc * std::sin(th)};
  });
  band(b, circ, prev);
  int center = b.add_vertex(anchor, cx, 0.0);
  for (std::size_t k = 0; k + 1 < circ.nodes.size(); ++k)
    b.add_tri(center, circ.nodes[k], circ.nodes[k + 1]);
  return box;
}

}  // namespace

SlitCoreResult build_slit_core(MeshBuilder& b, int anchor, double d,
                               int levels, double ratio) {
  if (d <= 0.0) throw std::invalid_argument("slit core needs d > 0");
  double w = 0.5 * d;  // tip box half-width
  TipBox right = build_tip_box(b, anchor, d, w, levels, ratio);
  TipBox left = build_tip_box(b, anchor, -d, w, levels, ratio);

  // Strip between the boxes: nodes x in {-d/2, 0, d/2}, y in {0, d/4, d/2}.
  // Side columns are the facing tip-box boundary nodes: the right box chain
  // runs (3d/2,0) .. (d/2,d/2),(d/2,d/4),(d/2,0), so its nodes 8,7,6 are the
  // strip's right column bottom-to-top; the left box chain starts
  // (-d/2,0),(-d/2,d/4),(-d/2,d/2) = nodes 0,1,2.
  std::array<int, 3> colr = {right.boundary.nodes[8], right.boundary.nodes[7],
                             right.boundary.nodes[6]};
  std::array<int, 3> coll = {left.boundary.nodes[0], left.boundary.nodes[1],
                             left.boundary.nodes[2]};
  std::array<int, 3> colm;
  const double ys[3] = {0.0, 0.25 * d, 0.5 * d};
  for (int r = 0; r < 3; ++r) colm[r] = b.add_vertex(anchor, 0.0, ys[r]);
  for (int r = 0; r < 2; ++r) {
    split_quad(b, coll[r], colm[r], colm[r + 1], coll[r + 1]);
    split_quad(b, colm[r], colr[r], colr[r + 1], colm[r + 1]);
  }

  // Outer boundary chain of the core block [-3d/2, 3d/2] x [-d/2, d/2]:
  // right box nodes 0..6, strip middle top, left box nodes 2..8.
  std::vector<int> outer_nodes;
  for (int k = 0; k <= 6; ++k) outer_nodes.push_back(right.boundary.nodes[k]);
  outer_nodes.push_back(colm[2]);
  for (int k = 2; k <= 8; ++k) outer_nodes.push_back(left.boundary.nodes[k]);

  SlitCoreResult res;
  res.outer = chain_of(b, outer_nodes);
  res.outer_half_width = 1.5 * d;
  res.outer_half_height = 0.5 * d;
  return res;
}

Chain build_hole_disk(MeshBuilder& b, int anchor, double d, double r_out,
                      int tip_levels, double tip_ratio, double ring_ratio,
                      int outer_segs, std::vector<double>* ring_radii) {
  if (!(r_out >= 4.8 * d))
    throw std::invalid_argument("disk radius must be at least 4.8 d");
  SlitCoreResult core = build_slit_core(b, anchor, d, tip_levels, tip_ratio);

  // Ladder radii: concentric half circles from a0 = 4d out to r_out. Circles
  // keep the ladder cells purely polar; nested squares stretch the radial
  // gap by sqrt(2) at their corners and pinch the cells there. The innermost
  // circle runs at 2*outer_segs segments to match the core boundary; one
  // thin band (ratio 1.2) coarsens to outer_segs, and a geometric ladder
  // continues at a ratio near ring_ratio, nudged into [0.55, 0.72]: thicker
  // bands turn the polar cells into slivers, thinner ones flatten them. When
  // r_out is within a factor 1.44 of a0 the coarsening band absorbs the
  // whole gap.
  double a0 = 4.0 * d;
  std::vector<double> radii = {a0};  // innermost first
  if (r_out >= 1.44 * a0) {
    double rc = 1.2 * a0;
    int R = std::max(1, static_cast<int>(std::lround(
                            std::log(r_out / rc) / std::log(1.0 / ring_ratio))));
    double q = std::pow(rc / r_out, 1.0 / R);
    if (q > 0.72 && R > 1) {
      --R;
      q = std::pow(rc / r_out, 1.0 / R);
    } else if (q < 0.55) {
      ++R;
      q = std::pow(rc / r_out, 1.0 / R);
    }
    radii.push_back(rc);
    for (int j = R - 1; j >= 1; --j) radii.push_back(r_out * std::pow(q, j));
  }
  radii.push_back(r_out);
  if (ring_radii) *ring_radii = radii;

  // Collar: the core block boundary flows into the innermost circle along
  // log-polar paths. Core arc params and circle angle params share the
  // 16-grid, and the node at param p moves from its block position
  // (theta0, r0) to (pi p, a0): chain k at t = k/8 places it at angle
  // (1-t) theta0 + t pi p and radius r0^(1-t) a0^t. Cartesian interpolation
  // would twist the cells at the block corners; fixed rays would carry the
  // block's uneven node directions (3.4 degrees apart across its corner)
  // all the way out to the circle and shred the fans that remove them. The
  // migration instead spreads the directions smoothly onto the circle's
  // uniform grid. The two params missing from the core chain (7/16 and
  // 9/16; the strip top is one d/2 segment per side) are injected from
  // chain 1 on, starting at their neighbors' polar midpoint.
  int fine_segs = 2 * outer_segs;
  double a_in = radii[0];
  std::array<double, 17> th0{}, lr0{};
  std::array<bool, 17> have{};
  for (std::size_t i = 0; i < core.outer.nodes.size(); ++i) {
    int j = static_cast<int>(std::lround(16.0 * core.outer.params[i]));
    Vec2 off = b.offset(core.outer.nodes[i]);
    th0[j] = std::atan2(off.y, off.x);
    lr0[j] = 0.5 * std::log(off.x * off.x + off.y * off.y);
    have[j] = true;
  }
  if (core.outer.nodes.size() != 15 || have[7] || have[9])
    throw std::logic_error("core boundary grid changed");
  th0[7] = 0.5 * (th0[6] + th0[8]);
  lr0[7] = 0.5 * (lr0[6] + lr0[8]);
  th0[9] = 0.5 * (th0[8] + th0[10]);
  lr0[9] = 0.5 * (lr0[8] + lr0[10]);

  const double la0 = std::log(a_in);
  const int collar_steps = 8;
  Chain prev_chain = core.outer;
  for (int k = 1; k < collar_steps; ++k) {
    double t = static_cast<double>(k) / collar_steps;
    Chain ck = make_chain(b, anchor, uniform_params(16), [&](double p) {
      int j = static_cast<int>(std::lround(16.0 * p));
      double r = std::exp((1.0 - t) * lr0[j] + t * la0);
      // Exact ends and apex: the ends must be genuine line nodes.
      if (j == 0) return Vec2{r, 0.0};
      if (j == 8) return Vec2{0.0, r};
      if (j == 16) return Vec2{-r, 0.0};
      double th = (1.0 - t) * th0[j] + t * kPi * p;
      return Vec2{r * std::cos(th), r * std::sin(th)};
    });
    band(b, prev_chain, ck);
    prev_chain = ck;
  }
  Chain ring_in = circle_half_ring(b, anchor, a_in, fine_segs);
  band(b, prev_chain, ring_in);

  Chain prev = ring_in;
  for (std::size_t j = 1; j < radii.size(); ++j) {
    Chain ring = circle_half_ring(b, anchor, radii[j], outer_segs);
    band(b, prev, ring);
    prev = ring;
  }
  return prev;
}

Chain build_hole_patch(MeshBuilder& b, int anchor, double d, double A,
                       int tip_levels, double tip_ratio, double ring_ratio,
                       int outer_segs, std::vector<double>* ring_radii) {
  if (!(A > 6.0 * d))
    throw std::invalid_argument("patch half-width must exceed 6 d");
  Chain prev = build_hole_disk(b, anchor, d, 0.8 * A, tip_levels, tip_ratio,
                               ring_ratio, outer_segs, ring_radii);
  // One band from the outermost circle into the bounding square: the gap
  // varies from 0.2 A at the side middles to about 0.61 A toward the
  // corners, under two tangential spacings everywhere, and the chains share
  // the same parameter grid so the band is all quads.
  Chain boundary = square_half_ring(b, anchor, A, outer_segs);
  band(b, prev, boundary);
  return boundary;
}

}  // namespace sieve
