// Structured mesh building blocks shared by the global triangulator and the
// capacity-disk meshes: an anchored vertex builder, open chains with arc
// parameters, band triangulation between concentric chains, square and
// circle rings, tip boxes with center fans, and slit cores.
//
// Everything is built in the upper half plane (y >= 0) and mirrored at the
// end, which makes meshes exactly symmetric about the line y = 0. Chains run
// counterclockwise from a point on the positive-x side of the line to the
// negative-x side, with params 0..1 proportional to arc length.

#pragma once

#include <array>
#include <functional>
#include <vector>

#include "sieve/mesh.hpp"

namespace sieve {

struct Chain {
  std::vector<int> nodes;      // vertex ids, in param order
  std::vector<double> params;  // strictly increasing, front 0, back 1
};

class MeshBuilder {
 public:
  int add_anchor(double x, double y);
  int add_vertex(int anchor, double dx, double dy);
  // Adds with CCW orientation (swaps if needed); rejects zero-area input.
  void add_tri(int a, int b, int c);

  int num_vertices() const { return static_cast<int>(v_anchor_.size()); }
  Vec2 offset(int v) const { return v_off_[v]; }
  int anchor_of(int v) const { return v_anchor_[v]; }
  Vec2 point(int v) const;
  Vec2 edge_vec(int a, int b) const;
  double signed_area2(int a, int b, int c) const;  // twice the signed area

  // Rewrites triangle vertex ids through `map` (size num_vertices). Used to
  // weld coincident nodes where patches touch; orphaned vertices are dropped
  // by finish().
  void apply_remap(const std::vector<int>& map);

  // Reflects all strictly-upper content across y = 0. Vertices on the line
  // stay single. Call once, after all upper-half construction.
  void mirror_lower();

  // Classifies line nodes against the hole list, assigns triangle side tags,
  // derives boundary edges (edges with one incident triangle), and moves the
  // data into a Mesh.
  Mesh finish(const std::vector<Hole>& holes, const std::vector<int>& hole_anchor,
              double h_background);

 private:
  std::vector<Vec2> anchors_;
  std::vector<int> v_anchor_;
  std::vector<Vec2> v_off_;
  std::vector<std::array<int, 3>> tris_;
  bool mirrored_ = false;
};

// Point on the boundary of the square [-a, a]^2 at arc parameter s of the
// upper half chain: s = 0 -> (a, 0), s = 1/4 -> (a, a) corner, s = 1/2 ->
// (0, a), s = 1 -> (-a, 0).
Vec2 square_chain_point(double a, double s);

// Upper half of the boundary of [-a, a]^2 around `anchor`, `segs` segments
// (multiple of 4, so corners land on nodes), uniform arc params. New vertices.
Chain square_half_ring(MeshBuilder& b, int anchor, double a, int segs);

// Upper half circle of radius r, nodes at angles pi*s for uniform params.
Chain circle_half_ring(MeshBuilder& b, int anchor, double r, int segs);

// Chain through existing nodes; params computed from cumulative arc length
// of the offsets (nodes must share one anchor).
Chain chain_of(const MeshBuilder& b, const std::vector<int>& nodes);

// Triangulates the band between two chains (inner first). Where params of
// the next nodes coincide (1e-9), emits a quad split along the diagonal with
// the better minimum angle; otherwise advances the chain whose next param is
// smaller. Chains must not share vertices.
void band(MeshBuilder& b, const Chain& inner, const Chain& outer);

// Splits the quad with corners c0 c1 c2 c3 in cyclic order along the diagonal
// whose two triangles have the better minimum angle (ties take c0-c2).
void split_quad(MeshBuilder& b, int c0, int c1, int c2, int c3);

struct SlitCoreResult {
  Chain outer;  // upper boundary chain of the core block: 14 segments,
                // params on the 16th grid (the middle strip is coarser)
  double outer_half_width = 0.0;   // core block is [-ohw, ohw] x [-ohh, ohh]
  double outer_half_height = 0.0;
};

// Upper-half core around the slit [-d, d] x {0}: two tip boxes (half-width
// d/2, `levels` square rings at `ratio`, then a circular ring and an
// 8-sector fan to the tip node) and a 2x2 cell strip between them. The outer
// boundary is the upper chain of the rectangle [-3d/2, 3d/2] x [-d/2, d/2]:
// nodes every d/4 along the tip box tops and sides, every d/2 across the
// middle (14 segments, params on the 16th grid).
SlitCoreResult build_slit_core(MeshBuilder& b, int anchor, double d,
                               int levels, double ratio);

// Core + collar + concentric circles out to radius r_out (>= 4.8 d
// required). The collar grows the core block boundary into the innermost
// circle (radius 4d, 2*outer_segs segments) through log-polar chains that
// migrate each boundary node's direction onto the circle's uniform angle
// grid while grading its radius geometrically; a thin band coarsens to
// `outer_segs` segments and the remaining circles keep that count, so the
// returned boundary chain (the circle of radius r_out) has outer_segs
// segments. ring_ratio is a target; the realized ratio is nudged to an
// integer ring count. ring_radii (optional) receives the circle radii,
// innermost (4d) first, outermost (r_out) last.
Chain build_hole_disk(MeshBuilder& b, int anchor, double d, double r_out,
                      int tip_levels, double tip_ratio, double ring_ratio,
                      int outer_segs, std::vector<double>* ring_radii = nullptr);

// build_hole_disk out to 0.8 A plus one band into the bounding square of
// half-width A (> 6d required); the returned boundary chain is the square
// with outer_segs segments.
Chain build_hole_patch(MeshBuilder& b, int anchor, double d, double A,
                       int tip_levels, double tip_ratio, double ring_ratio,
                       int outer_segs, std::vector<double>* ring_radii = nullptr);

}  // namespace sieve
