#pragma once

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ofem {

// conforming triangular meshes refined by newest-vertex bisection; curved
// boundaries are handled polygonally with new boundary vertices snapped back
// onto the unit circle

struct ClosureOverflow : std::runtime_error {
  explicit ClosureOverflow(const std::string& what) : std::runtime_error(what) {}
};

enum class BoundaryTag { Inflow, Outflow, Other };

std::string boundary_tag_name(BoundaryTag tag);

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

// vertex order is counterclockwise; the refinement edge is (v[0], v[1]) and
// v[2] is the peak (the newest vertex after a bisection)
struct Triangle2 {
  int v[3] = {-1, -1, -1};
};

struct TriMesh2D {
  std::vector<Vec2> vertices;
  std::vector<Triangle2> triangles;
  // sorted vertex pair -> tag, one entry per boundary edge
  std::map<std::pair<int, int>, BoundaryTag> boundary_tags;
  bool snap_to_unit_circle = false;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_triangles() const { return static_cast<int>(triangles.size()); }

  double area(int t) const;
  Vec2 centroid(int t) const;
  double diameter(int t) const;   // longest edge length
  double min_angle(int t) const;  // radians

  void save(std::ostream& os) const;
  static TriMesh2D load(std::istream& is);
};

enum class DomainCase { StripPi3, HalfDisk, UnitSquare };

// coarse meshes for the benchmark domains, boundary edges pre-tagged for the
// flow each domain carries: strip (0,2)x(0,1) with bottom inflow and a vertex
// at (pi/3, 0); upper half disk with the circulating flow entering on
// (-1,-0.5)x{0}; unit square with inflow on the west and north sides
TriMesh2D initial_mesh(DomainCase c);

// bisect all marked triangles at their refinement edges, then keep bisecting
// until the mesh is conforming again; boundary tags are inherited by split
// edges and new half-disk boundary vertices are snapped onto the circle.
// Throws ClosureOverflow if the closure grows past 20x the input size.
TriMesh2D bisect2d(const TriMesh2D& mesh, const std::vector<int>& marked);

// directed edge a->b with the owning triangle on its left, so the normal
// (b-a) rotated clockwise points from tri_left into tri_right (or out of the
// domain for boundary edges, where tri_right = -1)
struct EdgeInfo {
  int a = -1;
  int b = -1;
  int tri_left = -1;
  int tri_right = -1;
  bool boundary = false;
  BoundaryTag tag = BoundaryTag::Other; // meaningful when boundary
};

std::vector<EdgeInfo> collect_edges(const TriMesh2D& mesh);

// conformity scan for tests: every edge must be shared by exactly two
// triangles or be a tagged boundary edge; returns a diagnostic (empty = ok)
std::string check_conforming(const TriMesh2D& mesh);

} // namespace ofem
