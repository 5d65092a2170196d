// Conforming triangulations of the rectangle with the sieve line y = 0 as a
// crack. A *plain* mesh covers the rectangle with y = 0 as a union of edges
// (hole endpoints are vertices, single copies everywhere). A *crack* mesh is
// derived from a plain mesh by duplicating line nodes into plus/minus copies:
// barrier nodes only (sieve mode), all line nodes (full mode, used by the
// interface-jump problem), or none.
//
// Vertices are stored as anchor id + local offset. Anchors sit at hole
// centers; offsets near a hole stay exactly representable even when the hole
// half-width d is far below the spacing of doubles at the hole's global
// position (calibrated 2-D slit widths reach ~1e-24 at eps = 1/32).
// Differences of offsets within one anchor are exact; cross-anchor edges only
// occur at patch boundaries where offsets are O(eps).

#pragma once

#include <array>
#include <string>
#include <vector>

#include "sieve/geometry.hpp"

namespace sieve {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

enum class LineKind { barrier, hole_interior, tip };

struct Mesh {
  std::vector<Vec2> anchors;
  std::vector<int> v_anchor;              // per vertex
  std::vector<Vec2> v_off;                // per vertex, relative to anchor
  std::vector<std::array<int, 3>> tris;   // CCW
  std::vector<int> tri_side;              // +1 upper half, -1 lower half
  std::vector<int> line_nodes;            // nodes on y = 0, sorted along x
  std::vector<LineKind> line_kind;        // parallel to line_nodes
  std::vector<std::array<int, 2>> boundary_edges;
  std::vector<Hole> holes;                // copy of the generating hole list
  std::vector<int> hole_anchor;           // anchor id per hole
  double h_background = 0.0;              // smooth-region target size

  int num_vertices() const { return static_cast<int>(v_anchor.size()); }
  int num_tris() const { return static_cast<int>(tris.size()); }
  Vec2 point(int v) const;                // anchor + offset (global, approx)
  Vec2 edge_vec(int a, int b) const;      // b - a, exact within one anchor
  double tri_area(int t) const;
  double tri_min_angle_deg(int t) const;
};

struct CrackMesh {
  Mesh mesh;
  std::vector<std::array<int, 2>> crack_pairs;  // (plus copy, minus copy)
  std::vector<std::vector<int>> hole_nodes;     // shared nodes strictly inside each hole
  std::vector<int> parent;                      // crack vertex -> plain vertex
  int plain_vertex_count = 0;
};

enum class SplitMode {
  sieve,  // duplicate barrier nodes; holes and tips stay shared
  full,   // duplicate every line node (crack along the whole line)
  none    // no duplication (plain mesh wrapped as CrackMesh)
};

struct MeshCheck {
  std::string check;
  bool pass = true;
  std::string detail;
};

struct MeshReport {
  std::vector<MeshCheck> checks;
  double min_angle_deg = 0.0;
  double h_max = 0.0;
  int components = 0;
  bool ok() const;
  std::string summary() const;
  const MeshCheck* find(const std::string& check) const;
};

// Plain mesh of the configured rectangle: a structured background grid plus a
// graded onion patch around each hole (concentric circles shrinking
// geometrically from the patch boundary to 4*d, then a slit core with tip
// boxes graded at ratio 0.6 over 5 levels and center fans at the tips).
// Mirror-symmetric about y = 0 by construction. h is the smooth-region
// target size; hole neighborhoods are graded to ~d/4 and below
// automatically. The structural cell size is half the smallest guard
// radius; smaller h is honored by uniform bisection. Throws on degenerate
// (d = 0) configurations, on h <= 0 or h larger than half the domain, when
// some hole is too wide for the uniform patch size (6*d >= min guard
// radius), and when the built mesh misses the 20-degree minimum-angle
// target.
Mesh triangulate_plain(const SieveConfig& config, double h);

// Duplicates line nodes per mode and re-wires lower triangles to the minus
// copies. open_holes (sieve mode) selects which holes are open passages;
// holes not listed are sealed (treated as barrier). Pass nullptr for all
// open. full/none modes ignore open_holes.
CrackMesh split_along_sieve(const Mesh& plain, SplitMode mode,
                            const std::vector<int>* open_holes = nullptr);

// triangulate_plain + split (sieve mode): the perforated-domain mesh.
CrackMesh triangulate(const SieveConfig& config, double h);

// Midpoint bisection of every triangle (no boundary reprojection), so the
// refined vertex set contains the original one with identical indices and
// coarse piecewise-linear fields are exactly representable on the fine mesh.
Mesh refine_plain(const Mesh& plain);

// Verifies the crack-mesh invariants: every triangle on one side of the
// line, crack-pair coordinates identical, connectivity (sieve meshes are
// connected, splitting all line nodes gives exactly two components), minimum
// angle >= 20 degrees, line coverage by edges.
MeshReport mesh_checks(const CrackMesh& cm);

// Text dump with 17 significant digits (bit-exact decimal round-trip):
// anchors, vertices (anchor dx dy), triangles with side tag, crack pairs,
// hole-node lists.
std::string dump_mesh(const CrackMesh& cm);
CrackMesh parse_mesh(const std::string& text);

// Minimum interior angle (degrees) of the triangle with edge vectors
// e01 = b - a and e02 = c - a.
double tri_min_angle_from_edges(const Vec2& e01, const Vec2& e02);

// Recompute line_nodes/line_kind from zero y offsets (sorted along x,
// classified against the hole list) resp. boundary edges from single
// triangle incidence. For plain meshes and fresh builds; a crack mesh keeps
// its line_nodes list (the plus/shared copies) but re-derives boundary edges
// after rewiring.
void rebuild_line_nodes(Mesh& m);
void rebuild_boundary_edges(Mesh& m);

}  // namespace sieve
