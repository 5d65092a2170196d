// Global triangulations: a structured background grid over the rectangle, a
// graded onion patch around each hole (built by the block functions in
// patches.hpp), welding of touching patch columns, crack splitting along
// y = 0, midpoint refinement, invariant checks, and a text round-trip.
//
// The patch strip occupies |y| <= A with A = min guard radius; patches are
// squares of half-width A around each hole center, gaps between patches are
// filled with grid bands sharing the patch side columns, and the region
// above/below the strip is a tensor grid on the strip-top node columns.
// Periodic configurations tile exactly: consecutive patches touch and their
// facing side columns are welded node-by-node.

#include "sieve/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "sieve/patches.hpp"

namespace sieve {

double tri_min_angle_from_edges(const Vec2& e01, const Vec2& e02) {
  const double pi = 3.14159265358979323846;
  Vec2 e12{e02.x - e01.x, e02.y - e01.y};
  double a = std::hypot(e12.x, e12.y);
  double b = std::hypot(e02.x, e02.y);
  double c = std::hypot(e01.x, e01.y);
  auto angle = [](double opp, double s1, double s2) {
    double v = (s1 * s1 + s2 * s2 - opp * opp) / (2.0 * s1 * s2);
    v = std::min(1.0, std::max(-1.0, v));
    return std::acos(v);
  };
  double A = angle(a, b, c);
  double B = angle(b, c, a);
  double C = pi - A - B;
  return std::min({A, B, C}) * 180.0 / pi;
}

Vec2 Mesh::point(int v) const {
  const Vec2& a = anchors[v_anchor[v]];
  return {a.x + v_off[v].x, a.y + v_off[v].y};
}

Vec2 Mesh::edge_vec(int a, int b) const {
  if (v_anchor[a] == v_anchor[b])
    return {v_off[b].x - v_off[a].x, v_off[b].y - v_off[a].y};
  const Vec2& aa = anchors[v_anchor[a]];
  const Vec2& ab = anchors[v_anchor[b]];
  return {(ab.x - aa.x) + (v_off[b].x - v_off[a].x),
          (ab.y - aa.y) + (v_off[b].y - v_off[a].y)};
}

double Mesh::tri_area(int t) const {
  Vec2 u = edge_vec(tris[t][0], tris[t][1]);
  Vec2 v = edge_vec(tris[t][0], tris[t][2]);
  return 0.5 * std::abs(u.x * v.y - u.y * v.x);
}

double Mesh::tri_min_angle_deg(int t) const {
  return tri_min_angle_from_edges(edge_vec(tris[t][0], tris[t][1]),
                                  edge_vec(tris[t][0], tris[t][2]));
}

void rebuild_line_nodes(Mesh& m) {
  m.line_nodes.clear();
  for (int v = 0; v < m.num_vertices(); ++v)
    if (m.v_off[v].y == 0.0) m.line_nodes.push_back(v);
  std::sort(m.line_nodes.begin(), m.line_nodes.end(), [&m](int a, int b) {
    if (m.v_anchor[a] == m.v_anchor[b]) return m.v_off[a].x < m.v_off[b].x;
    double ga = m.anchors[m.v_anchor[a]].x + m.v_off[a].x;
    double gb = m.anchors[m.v_anchor[b]].x + m.v_off[b].x;
    if (ga != gb) return ga < gb;
    return m.anchors[m.v_anchor[a]].x < m.anchors[m.v_anchor[b]].x;
  });

  std::map<int, int> hole_of_anchor;
  for (std::size_t k = 0; k < m.hole_anchor.size(); ++k)
    hole_of_anchor[m.hole_anchor[k]] = static_cast<int>(k);
  m.line_kind.assign(m.line_nodes.size(), LineKind::barrier);
  for (std::size_t i = 0; i < m.line_nodes.size(); ++i) {
    int v = m.line_nodes[i];
    auto it = hole_of_anchor.find(m.v_anchor[v]);
    if (it == hole_of_anchor.end()) continue;
    double d = m.holes[it->second].half_width;
    double ox = m.v_off[v].x;
    if (ox == d || ox == -d)
      m.line_kind[i] = LineKind::tip;
    else if (std::abs(ox) < d)
      m.line_kind[i] = LineKind::hole_interior;
  }
}

void rebuild_boundary_edges(Mesh& m) {
  std::map<std::pair<int, int>, int> count;
  for (const auto& tri : m.tris) {
    for (int e = 0; e < 3; ++e) {
      int a = tri[e], b = tri[(e + 1) % 3];
      if (a > b) std::swap(a, b);
      ++count[{a, b}];
    }
  }
  m.boundary_edges.clear();
  for (const auto& [edge, c] : count)
    if (c == 1) m.boundary_edges.push_back({edge.first, edge.second});
}

bool MeshReport::ok() const {
  for (const MeshCheck& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string MeshReport::summary() const {
  std::ostringstream os;
  for (const MeshCheck& c : checks) {
    os << c.check << ": " << (c.pass ? "pass" : "FAIL");
    if (!c.detail.empty()) os << " (" << c.detail << ")";
    os << "\n";
  }
  return os.str();
}

const MeshCheck* MeshReport::find(const std::string& check) const {
  for (const MeshCheck& c : checks)
    if (c.check == check) return &c;
  return nullptr;
}

namespace {

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

Mesh triangulate_plain(const SieveConfig& config, double h) {
  const double L = config.domain.L, H = config.domain.H;
  if (!(h > 0.0)) throw std::invalid_argument("mesh size h must be positive");
  if (h > 0.5 * std::min(L, H))
    throw std::invalid_argument("mesh size h too coarse for the domain");
  const int K = static_cast<int>(config.holes.size());
  for (int k = 0; k < K; ++k) {
    if (!(config.holes[k].half_width > 0.0)) {
      std::ostringstream os;
      os << "degenerate configuration: hole " << k
         << " has zero half-width, the perforated mesh is undefined";
      throw std::invalid_argument(os.str());
    }
  }

  MeshBuilder b;
  const int bg = b.add_anchor(0.0, 0.0);
  std::vector<int> hole_anchor(K);
  for (int k = 0; k < K; ++k)
    hole_anchor[k] = b.add_anchor(config.holes[k].center, 0.0);

  if (K == 0) {
    int nx = std::max(1, static_cast<int>(std::lround(L / h)));
    int ny = std::max(1, static_cast<int>(std::lround(H / h)));
    double hx = L / nx, hy = H / ny;
    std::vector<std::vector<int>> grid(ny + 1, std::vector<int>(nx + 1));
    for (int r = 0; r <= ny; ++r) {
      double y = (r == ny) ? H : r * hy;
      for (int j = 0; j <= nx; ++j) {
        double x = (j == nx) ? L : j * hx;
        grid[r][j] = b.add_vertex(bg, x, y);
      }
    }
    for (int r = 0; r < ny; ++r)
      for (int j = 0; j < nx; ++j)
        split_quad(b, grid[r][j], grid[r][j + 1], grid[r + 1][j + 1],
                   grid[r + 1][j]);
    b.mirror_lower();
    Mesh m = b.finish({}, {}, std::max(hx, hy));
    while (m.h_background > h * (1.0 + 1e-12)) m = refine_plain(m);
    return m;
  }

  // Uniform patch half-width: the smallest guard radius. Every hole must fit
  // its graded rings inside that square.
  double A = config.holes[0].guard_radius;
  for (int k = 1; k < K; ++k) A = std::min(A, config.holes[k].guard_radius);
  for (int k = 0; k < K; ++k) {
    if (!(A > 6.0 * config.holes[k].half_width)) {
      std::ostringstream os;
      os << "hole " << k << ": half-width " << config.holes[k].half_width
         << " too large for the uniform patch size " << A
         << " (6*d must stay below the smallest guard radius;"
         << " equalize guard radii or shrink the hole)";
      throw std::invalid_argument(os.str());
    }
  }
  const double half = 0.5 * A;
  const double weld_tol = 1e-9 * A;

  std::vector<int> order(K);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&config](int a, int c) {
    return config.holes[a].center < config.holes[c].center;
  });

  struct PatchCols {
    std::array<int, 3> left, right;  // side columns, bottom (y=0) to top (y=A)
    std::array<int, 5> top;          // top row, left to right
  };
  std::vector<PatchCols> pc(K);
  for (int i = 0; i < K; ++i) {
    int k = order[i];
    const int q = std::max(0, config.patch_quality);
    Chain ring = build_hole_patch(b, hole_anchor[k],
                                  config.holes[k].half_width, A, 5 + q,
                                  q > 0 ? 0.7 : 0.6, q > 0 ? 0.5 : 0.64, 8,
                                  nullptr);
    const auto& nd = ring.nodes;  // 9 nodes, (A,0) CCW to (-A,0)
    pc[k].right = {nd[0], nd[1], nd[2]};
    pc[k].left = {nd[8], nd[7], nd[6]};
    pc[k].top = {nd[6], nd[5], nd[4], nd[3], nd[2]};
  }

  std::map<int, int> weld;  // node of a right patch -> coincident left node
  auto canon = [&weld](int v) {
    auto it = weld.find(v);
    return it == weld.end() ? v : it->second;
  };

  // Grid band between two side columns over the strip rows {0, A/2, A}.
  // Returns the top row including both corner nodes.
  auto build_gap = [&](const std::array<int, 3>& lc,
                       const std::array<int, 3>& rc, double g0, double g1) {
    double Wd = g1 - g0;
    int n = std::max(1, static_cast<int>(std::lround(Wd / half)));
    std::vector<std::array<int, 3>> cols(n + 1);
    cols[0] = lc;
    cols[n] = rc;
    for (int j = 1; j < n; ++j) {
      double x = g0 + Wd * j / n;
      cols[j] = {b.add_vertex(bg, x, 0.0), b.add_vertex(bg, x, half),
                 b.add_vertex(bg, x, A)};
    }
    for (int j = 0; j < n; ++j)
      for (int r = 0; r < 2; ++r)
        split_quad(b, cols[j][r], cols[j + 1][r], cols[j + 1][r + 1],
                   cols[j][r + 1]);
    std::vector<int> top(n + 1);
    for (int j = 0; j <= n; ++j) top[j] = cols[j][2];
    return top;
  };

  std::vector<int> strip_top;
  auto append_ids = [&](const std::vector<int>& ids) {
    for (int id : ids) {
      int c = canon(id);
      if (strip_top.empty() || strip_top.back() != c) strip_top.push_back(c);
    }
  };

  {
    int k0 = order[0];
    double xs = config.holes[k0].center - A;
    if (xs > weld_tol) {
      std::array<int, 3> bcol = {b.add_vertex(bg, 0.0, 0.0),
                                 b.add_vertex(bg, 0.0, half),
                                 b.add_vertex(bg, 0.0, A)};
      append_ids(build_gap(bcol, pc[k0].left, 0.0, xs));
    }
    append_ids({pc[k0].top.begin(), pc[k0].top.end()});
  }
  for (int i = 1; i < K; ++i) {
    int a = order[i - 1], c = order[i];
    double xe = config.holes[a].center + A;
    double xs = config.holes[c].center - A;
    double W = xs - xe;
    if (W < -weld_tol) {
      std::ostringstream os;
      os << "holes " << a << " and " << c << ": patch squares overlap";
      throw std::invalid_argument(os.str());
    }
    if (W <= weld_tol) {
      for (int r = 0; r < 3; ++r) weld[pc[c].left[r]] = pc[a].right[r];
    } else {
      append_ids(build_gap(pc[a].right, pc[c].left, xe, xs));
    }
    append_ids({pc[c].top.begin(), pc[c].top.end()});
  }
  {
    int kl = order[K - 1];
    double xe = config.holes[kl].center + A;
    if (L - xe > weld_tol) {
      std::array<int, 3> bcol = {b.add_vertex(bg, L, 0.0),
                                 b.add_vertex(bg, L, half),
                                 b.add_vertex(bg, L, A)};
      append_ids(build_gap(pc[kl].right, bcol, xe, L));
    }
  }

  // Tensor rows from the strip top to y = H on the strip-top columns.
  std::vector<double> px(strip_top.size());
  for (std::size_t i = 0; i < strip_top.size(); ++i)
    px[i] = b.point(strip_top[i]).x;
  int nrows = std::max(1, static_cast<int>(std::lround((H - A) / half)));
  std::vector<int> prev = strip_top;
  for (int r = 1; r <= nrows; ++r) {
    double y = (r == nrows) ? H : A + (H - A) * r / nrows;
    std::vector<int> cur(prev.size());
    for (std::size_t i = 0; i < prev.size(); ++i)
      cur[i] = b.add_vertex(bg, px[i], y);
    for (std::size_t i = 0; i + 1 < prev.size(); ++i)
      split_quad(b, prev[i], prev[i + 1], cur[i + 1], cur[i]);
    prev = cur;
  }

  if (!weld.empty()) {
    std::vector<int> remap(b.num_vertices());
    std::iota(remap.begin(), remap.end(), 0);
    for (const auto& [from, to] : weld) remap[from] = to;
    b.apply_remap(remap);
  }
  b.mirror_lower();
  Mesh m = b.finish(config.holes, hole_anchor, half);

  while (m.h_background > h * (1.0 + 1e-12)) m = refine_plain(m);

  double worst = 180.0;
  int worst_t = -1;
  for (int t = 0; t < m.num_tris(); ++t) {
    double a = m.tri_min_angle_deg(t);
    if (a < worst) {
      worst = a;
      worst_t = t;
    }
  }
  if (worst < 20.0 - 1e-9) {
    std::ostringstream os;
    os << "mesh quality failure: triangle " << worst_t << " has minimum angle "
       << worst << " degrees (target 20)";
    throw std::runtime_error(os.str());
  }
  return m;
}

CrackMesh split_along_sieve(const Mesh& plain, SplitMode mode,
                            const std::vector<int>* open_holes) {
  const int K = static_cast<int>(plain.holes.size());
  CrackMesh cm;
  cm.mesh = plain;
  cm.plain_vertex_count = plain.num_vertices();
  cm.parent.resize(plain.num_vertices());
  std::iota(cm.parent.begin(), cm.parent.end(), 0);
  cm.hole_nodes.assign(K, {});

  std::vector<char> open(K, 1);
  if (mode == SplitMode::sieve && open_holes) {
    open.assign(K, 0);
    for (int k : *open_holes) {
      if (k < 0 || k >= K)
        throw std::invalid_argument("open hole index out of range");
      open[k] = 1;
    }
  }

  std::map<int, int> hole_of_anchor;
  for (int k = 0; k < K; ++k) hole_of_anchor[plain.hole_anchor[k]] = k;
  auto hole_of = [&](int v) {
    auto it = hole_of_anchor.find(plain.v_anchor[v]);
    return it == hole_of_anchor.end() ? -1 : it->second;
  };

  std::vector<int> dup(plain.num_vertices(), -1);
  for (std::size_t i = 0; i < plain.line_nodes.size(); ++i) {
    int v = plain.line_nodes[i];
    bool duplicate = false;
    switch (mode) {
      case SplitMode::none:
        break;
      case SplitMode::full:
        duplicate = true;
        break;
      case SplitMode::sieve:
        if (plain.line_kind[i] == LineKind::barrier) {
          duplicate = true;
        } else {
          int k = hole_of(v);
          duplicate = (k >= 0 && !open[k]);
        }
        break;
    }
    if (!duplicate) continue;
    int minus = cm.mesh.num_vertices();
    cm.mesh.v_anchor.push_back(plain.v_anchor[v]);
    cm.mesh.v_off.push_back(plain.v_off[v]);
    cm.parent.push_back(v);
    cm.crack_pairs.push_back({v, minus});
    dup[v] = minus;
  }

  for (std::size_t t = 0; t < cm.mesh.tris.size(); ++t) {
    if (cm.mesh.tri_side[t] != -1) continue;
    for (int& v : cm.mesh.tris[t])
      if (dup[v] >= 0) v = dup[v];
  }

  for (std::size_t i = 0; i < plain.line_nodes.size(); ++i) {
    int v = plain.line_nodes[i];
    if (plain.line_kind[i] == LineKind::hole_interior && dup[v] < 0) {
      int k = hole_of(v);
      if (k >= 0) cm.hole_nodes[k].push_back(v);
    }
  }

  rebuild_boundary_edges(cm.mesh);
  return cm;
}

CrackMesh triangulate(const SieveConfig& config, double h) {
  return split_along_sieve(triangulate_plain(config, h), SplitMode::sieve);
}

Mesh refine_plain(const Mesh& plain) {
  Mesh m;
  m.anchors = plain.anchors;
  m.v_anchor = plain.v_anchor;
  m.v_off = plain.v_off;
  m.holes = plain.holes;
  m.hole_anchor = plain.hole_anchor;
  m.h_background = 0.5 * plain.h_background;

  std::map<std::pair<int, int>, int> mid;
  auto midpoint = [&](int a, int c) {
    std::pair<int, int> key{std::min(a, c), std::max(a, c)};
    auto it = mid.find(key);
    if (it != mid.end()) return it->second;
    int v;
    if (plain.v_anchor[a] == plain.v_anchor[c]) {
      v = m.num_vertices();
      m.v_anchor.push_back(plain.v_anchor[a]);
      m.v_off.push_back({0.5 * (plain.v_off[a].x + plain.v_off[c].x),
                         0.5 * (plain.v_off[a].y + plain.v_off[c].y)});
    } else {
      int base = std::min(a, c);
      Vec2 e = plain.edge_vec(base, a + c - base);
      v = m.num_vertices();
      m.v_anchor.push_back(plain.v_anchor[base]);
      m.v_off.push_back({plain.v_off[base].x + 0.5 * e.x,
                         plain.v_off[base].y + 0.5 * e.y});
    }
    mid.emplace(key, v);
    return v;
  };

  m.tris.reserve(plain.tris.size() * 4);
  m.tri_side.reserve(plain.tris.size() * 4);
  for (std::size_t t = 0; t < plain.tris.size(); ++t) {
    int a = plain.tris[t][0], c = plain.tris[t][1], d = plain.tris[t][2];
    int ab = midpoint(a, c), bc = midpoint(c, d), ca = midpoint(d, a);
    int side = plain.tri_side[t];
    m.tris.push_back({a, ab, ca});
    m.tris.push_back({c, bc, ab});
    m.tris.push_back({d, ca, bc});
    m.tris.push_back({ab, bc, ca});
    for (int i = 0; i < 4; ++i) m.tri_side.push_back(side);
  }

  rebuild_line_nodes(m);
  rebuild_boundary_edges(m);
  return m;
}

MeshReport mesh_checks(const CrackMesh& cm) {
  const Mesh& m = cm.mesh;
  const int n = m.num_vertices();
  MeshReport rep;

  {
    MeshCheck c{"one-side", true, ""};
    int bad = -1;
    for (int t = 0; t < m.num_tris() && bad < 0; ++t) {
      bool up = false, down = false;
      for (int v : m.tris[t]) {
        if (m.v_off[v].y > 0.0) up = true;
        if (m.v_off[v].y < 0.0) down = true;
      }
      if ((up && down) || (!up && !down) ||
          (m.tri_side[t] != (up ? +1 : -1)))
        bad = t;
    }
    if (bad >= 0) {
      c.pass = false;
      c.detail = "triangle " + std::to_string(bad) + " crosses the line";
    }
    rep.checks.push_back(c);
  }

  {
    MeshCheck c{"crack-pairs-coincide", true, ""};
    int bad = 0;
    for (const auto& pr : cm.crack_pairs) {
      if (m.v_anchor[pr[0]] != m.v_anchor[pr[1]] ||
          m.v_off[pr[0]].x != m.v_off[pr[1]].x ||
          m.v_off[pr[0]].y != m.v_off[pr[1]].y)
        ++bad;
    }
    if (bad > 0) {
      c.pass = false;
      c.detail = std::to_string(bad) + " pairs with distinct coordinates";
    }
    rep.checks.push_back(c);
  }

  std::vector<char> used(n, 0);
  for (const auto& tri : m.tris)
    for (int v : tri) used[v] = 1;

  {
    DisjointSets ds(n);
    for (const auto& tri : m.tris) {
      ds.unite(tri[0], tri[1]);
      ds.unite(tri[0], tri[2]);
    }
    std::set<int> roots;
    for (int v = 0; v < n; ++v)
      if (used[v]) roots.insert(ds.find(v));
    rep.components = static_cast<int>(roots.size());

    std::vector<char> in_pairs(n, 0);
    for (const auto& pr : cm.crack_pairs) in_pairs[pr[0]] = 1;
    bool shared = false;
    for (int v : m.line_nodes)
      if (!in_pairs[v]) shared = true;
    int expected = shared ? 1 : 2;

    MeshCheck c{"components", rep.components == expected,
                std::to_string(rep.components) + " (expected " +
                    std::to_string(expected) + ")"};
    rep.checks.push_back(c);
  }

  {
    // Split every line node by triangle side; the mesh must then fall apart
    // into exactly the upper and lower halves.
    DisjointSets ds(2 * n);
    auto vid = [&](int v, int side) {
      if (m.v_off[v].y != 0.0) return v;
      return side > 0 ? v : v + n;
    };
    std::vector<char> vused(2 * n, 0);
    for (std::size_t t = 0; t < m.tris.size(); ++t) {
      int side = m.tri_side[t];
      int a = vid(m.tris[t][0], side);
      int bb = vid(m.tris[t][1], side);
      int cc = vid(m.tris[t][2], side);
      vused[a] = vused[bb] = vused[cc] = 1;
      ds.unite(a, bb);
      ds.unite(a, cc);
    }
    std::set<int> roots;
    for (int v = 0; v < 2 * n; ++v)
      if (vused[v]) roots.insert(ds.find(v));
    MeshCheck c{"split-disconnects", roots.size() == 2,
                std::to_string(roots.size()) + " components (expected 2)"};
    rep.checks.push_back(c);
  }

  {
    double worst = 180.0;
    double hmax = 0.0;
    for (int t = 0; t < m.num_tris(); ++t) {
      worst = std::min(worst, m.tri_min_angle_deg(t));
      for (int e = 0; e < 3; ++e) {
        Vec2 ev = m.edge_vec(m.tris[t][e], m.tris[t][(e + 1) % 3]);
        hmax = std::max(hmax, std::hypot(ev.x, ev.y));
      }
    }
    rep.min_angle_deg = worst;
    rep.h_max = hmax;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g deg", worst);
    MeshCheck c{"min-angle", worst >= 20.0 - 1e-9, buf};
    rep.checks.push_back(c);
  }

  {
    std::set<std::pair<int, int>> upper, lower;
    for (std::size_t t = 0; t < m.tris.size(); ++t) {
      auto& dst = (m.tri_side[t] > 0) ? upper : lower;
      for (int e = 0; e < 3; ++e) {
        int a = m.tris[t][e], bb = m.tris[t][(e + 1) % 3];
        if (a > bb) std::swap(a, bb);
        dst.insert({a, bb});
      }
    }
    std::vector<int> dup(n, -1);
    for (const auto& pr : cm.crack_pairs) dup[pr[0]] = pr[1];
    auto minus_of = [&](int v) { return dup[v] >= 0 ? dup[v] : v; };
    MeshCheck c{"line-coverage", true, ""};
    for (std::size_t i = 0; i + 1 < m.line_nodes.size(); ++i) {
      int a = m.line_nodes[i], bb = m.line_nodes[i + 1];
      std::pair<int, int> eu{std::min(a, bb), std::max(a, bb)};
      int la = minus_of(a), lb = minus_of(bb);
      std::pair<int, int> el{std::min(la, lb), std::max(la, lb)};
      if (!upper.count(eu) || !lower.count(el)) {
        c.pass = false;
        c.detail = "gap after line node " + std::to_string(i);
        break;
      }
    }
    rep.checks.push_back(c);
  }

  return rep;
}

namespace {

void put_double(std::ostringstream& os, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << buf;
}

const char* kind_word(LineKind k) {
  switch (k) {
    case LineKind::barrier:
      return "barrier";
    case LineKind::hole_interior:
      return "hole";
    case LineKind::tip:
      return "tip";
  }
  return "barrier";
}

}  // namespace

std::string dump_mesh(const CrackMesh& cm) {
  const Mesh& m = cm.mesh;
  std::ostringstream os;
  os << "crack-mesh 1\n";
  os << "anchors " << m.anchors.size() << "\n";
  for (const Vec2& a : m.anchors) {
    put_double(os, a.x);
    os << " ";
    put_double(os, a.y);
    os << "\n";
  }
  os << "vertices " << m.num_vertices() << "\n";
  for (int v = 0; v < m.num_vertices(); ++v) {
    os << m.v_anchor[v] << " ";
    put_double(os, m.v_off[v].x);
    os << " ";
    put_double(os, m.v_off[v].y);
    os << "\n";
  }
  os << "triangles " << m.num_tris() << "\n";
  for (int t = 0; t < m.num_tris(); ++t)
    os << m.tris[t][0] << " " << m.tris[t][1] << " " << m.tris[t][2] << " "
       << m.tri_side[t] << "\n";
  os << "line " << m.line_nodes.size() << "\n";
  for (std::size_t i = 0; i < m.line_nodes.size(); ++i)
    os << m.line_nodes[i] << " " << kind_word(m.line_kind[i]) << "\n";
  os << "holes " << m.holes.size() << "\n";
  for (std::size_t k = 0; k < m.holes.size(); ++k) {
    put_double(os, m.holes[k].center);
    os << " ";
    put_double(os, m.holes[k].half_width);
    os << " ";
    put_double(os, m.holes[k].guard_radius);
    os << " " << m.hole_anchor[k] << "\n";
  }
  os << "h_background ";
  put_double(os, m.h_background);
  os << "\n";
  os << "plain_vertices " << cm.plain_vertex_count << "\n";
  os << "pairs " << cm.crack_pairs.size() << "\n";
  for (const auto& pr : cm.crack_pairs)
    os << pr[0] << " " << pr[1] << "\n";
  os << "hole_nodes " << cm.hole_nodes.size() << "\n";
  for (const auto& ids : cm.hole_nodes) {
    os << ids.size();
    for (int v : ids) os << " " << v;
    os << "\n";
  }
  return os.str();
}

CrackMesh parse_mesh(const std::string& text) {
  std::istringstream in(text);
  auto fail = [](const std::string& what) {
    throw std::runtime_error("mesh parse: " + what);
  };
  auto expect = [&](const char* kw) {
    std::string t;
    if (!(in >> t) || t != kw) fail(std::string("expected '") + kw + "'");
  };
  auto geti = [&]() {
    long long v;
    if (!(in >> v)) fail("expected an integer");
    return static_cast<int>(v);
  };
  auto getd = [&]() {
    double v;
    if (!(in >> v)) fail("expected a number");
    return v;
  };

  CrackMesh cm;
  Mesh& m = cm.mesh;
  expect("crack-mesh");
  if (geti() != 1) fail("unsupported version");
  expect("anchors");
  int na = geti();
  m.anchors.resize(na);
  for (int i = 0; i < na; ++i) {
    m.anchors[i].x = getd();
    m.anchors[i].y = getd();
  }
  expect("vertices");
  int nv = geti();
  m.v_anchor.resize(nv);
  m.v_off.resize(nv);
  for (int v = 0; v < nv; ++v) {
    m.v_anchor[v] = geti();
    if (m.v_anchor[v] < 0 || m.v_anchor[v] >= na) fail("anchor out of range");
    m.v_off[v].x = getd();
    m.v_off[v].y = getd();
  }
  expect("triangles");
  int nt = geti();
  m.tris.resize(nt);
  m.tri_side.resize(nt);
  for (int t = 0; t < nt; ++t) {
    for (int e = 0; e < 3; ++e) {
      m.tris[t][e] = geti();
      if (m.tris[t][e] < 0 || m.tris[t][e] >= nv) fail("vertex out of range");
    }
    m.tri_side[t] = geti();
    if (m.tri_side[t] != 1 && m.tri_side[t] != -1) fail("bad side tag");
  }
  expect("line");
  int nl = geti();
  m.line_nodes.resize(nl);
  m.line_kind.resize(nl);
  for (int i = 0; i < nl; ++i) {
    m.line_nodes[i] = geti();
    std::string w;
    if (!(in >> w)) fail("expected a line-node kind");
    if (w == "barrier")
      m.line_kind[i] = LineKind::barrier;
    else if (w == "hole")
      m.line_kind[i] = LineKind::hole_interior;
    else if (w == "tip")
      m.line_kind[i] = LineKind::tip;
    else
      fail("unknown line-node kind '" + w + "'");
  }
  expect("holes");
  int nh = geti();
  m.holes.resize(nh);
  m.hole_anchor.resize(nh);
  for (int k = 0; k < nh; ++k) {
    m.holes[k].center = getd();
    m.holes[k].half_width = getd();
    m.holes[k].guard_radius = getd();
    m.hole_anchor[k] = geti();
  }
  expect("h_background");
  m.h_background = getd();
  expect("plain_vertices");
  cm.plain_vertex_count = geti();
  if (cm.plain_vertex_count < 0 || cm.plain_vertex_count > nv)
    fail("bad plain vertex count");
  expect("pairs");
  int np = geti();
  cm.crack_pairs.resize(np);
  for (int i = 0; i < np; ++i) {
    cm.crack_pairs[i][0] = geti();
    cm.crack_pairs[i][1] = geti();
  }
  expect("hole_nodes");
  int ng = geti();
  if (ng != nh) fail("hole_nodes count mismatch");
  cm.hole_nodes.resize(ng);
  for (int k = 0; k < ng; ++k) {
    int cnt = geti();
    cm.hole_nodes[k].resize(cnt);
    for (int i = 0; i < cnt; ++i) cm.hole_nodes[k][i] = geti();
  }
  std::string tail;
  if (in >> tail) fail("trailing content '" + tail + "'");

  cm.parent.resize(nv);
  std::iota(cm.parent.begin(), cm.parent.end(), 0);
  for (const auto& pr : cm.crack_pairs) cm.parent[pr[1]] = pr[0];
  rebuild_boundary_edges(m);
  return cm;
}

}  // namespace sieve
