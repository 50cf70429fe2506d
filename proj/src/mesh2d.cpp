#include <ofem/mesh2d.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <istream>
#include <ostream>

namespace ofem {

namespace {

std::pair<int, int> sorted_pair(int a, int b) {
  return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

double dist(const Vec2& p, const Vec2& q) {
  return std::hypot(p.x - q.x, p.y - q.y);
}

double cross2(const Vec2& o, const Vec2& p, const Vec2& q) {
  return (p.x - o.x) * (q.y - o.y) - (p.y - o.y) * (q.x - o.x);
}

// rotate the vertex triple so the strictly longest edge (first in the cycle
// on ties) becomes the refinement edge (v0, v1)
Triangle2 with_longest_refinement_edge(const std::vector<Vec2>& verts, int a, int b, int c) {
  const double l01 = dist(verts[a], verts[b]);
  const double l12 = dist(verts[b], verts[c]);
  const double l20 = dist(verts[c], verts[a]);
  Triangle2 t;
  if (l01 >= l12 && l01 >= l20) {
    t.v[0] = a; t.v[1] = b; t.v[2] = c;
  } else if (l12 >= l20) {
    t.v[0] = b; t.v[1] = c; t.v[2] = a;
  } else {
    t.v[0] = c; t.v[1] = a; t.v[2] = b;
  }
  return t;
}

} // namespace

//------------------------------------------------------------------------------
// basic geometry
//------------------------------------------------------------------------------

std::string boundary_tag_name(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::Inflow: return "inflow";
    case BoundaryTag::Outflow: return "outflow";
    case BoundaryTag::Other: return "other";
  }
  throw std::logic_error("boundary_tag_name: bad tag");
}

double TriMesh2D::area(int t) const {
  const Triangle2& tr = triangles.at(t);
  return 0.5 * cross2(vertices[tr.v[0]], vertices[tr.v[1]], vertices[tr.v[2]]);
}

Vec2 TriMesh2D::centroid(int t) const {
  const Triangle2& tr = triangles.at(t);
  Vec2 c;
  c.x = (vertices[tr.v[0]].x + vertices[tr.v[1]].x + vertices[tr.v[2]].x) / 3.0;
  c.y = (vertices[tr.v[0]].y + vertices[tr.v[1]].y + vertices[tr.v[2]].y) / 3.0;
  return c;
}

double TriMesh2D::diameter(int t) const {
  const Triangle2& tr = triangles.at(t);
  return std::max({dist(vertices[tr.v[0]], vertices[tr.v[1]]),
                   dist(vertices[tr.v[1]], vertices[tr.v[2]]),
                   dist(vertices[tr.v[2]], vertices[tr.v[0]])});
}

double TriMesh2D::min_angle(int t) const {
  const Triangle2& tr = triangles.at(t);
  double best = 4.0;
  for (int i = 0; i < 3; ++i) {
    const Vec2& o = vertices[tr.v[i]];
    const Vec2& p = vertices[tr.v[(i + 1) % 3]];
    const Vec2& q = vertices[tr.v[(i + 2) % 3]];
    const double ux = p.x - o.x, uy = p.y - o.y;
    const double vx = q.x - o.x, vy = q.y - o.y;
    const double ang = std::acos((ux * vx + uy * vy) /
                                 (std::hypot(ux, uy) * std::hypot(vx, vy)));
    best = std::min(best, ang);
  }
  return best;
}

//------------------------------------------------------------------------------
// initial meshes
//------------------------------------------------------------------------------

TriMesh2D initial_mesh(DomainCase c) {
  TriMesh2D m;
  const double pi = 3.14159265358979323846;
  switch (c) {
    case DomainCase::StripPi3: {
      m.vertices = {{0.0, 0.0}, {pi / 3.0, 0.0}, {2.0, 0.0},
                    {0.0, 1.0}, {1.0, 1.0},      {2.0, 1.0}};
      const int raw[4][3] = {{0, 1, 3}, {1, 4, 3}, {1, 2, 4}, {2, 5, 4}};
      for (const auto& r : raw)
        m.triangles.push_back(with_longest_refinement_edge(m.vertices, r[0], r[1], r[2]));
      m.boundary_tags[sorted_pair(0, 1)] = BoundaryTag::Inflow;
      m.boundary_tags[sorted_pair(1, 2)] = BoundaryTag::Inflow;
      m.boundary_tags[sorted_pair(3, 4)] = BoundaryTag::Outflow;
      m.boundary_tags[sorted_pair(4, 5)] = BoundaryTag::Outflow;
      m.boundary_tags[sorted_pair(0, 3)] = BoundaryTag::Other;
      m.boundary_tags[sorted_pair(2, 5)] = BoundaryTag::Other;
      return m;
    }
    case DomainCase::HalfDisk: {
      // five bottom vertices, five arc vertices at 150..30 degrees
      m.vertices = {{-1.0, 0.0}, {-0.5, 0.0}, {0.0, 0.0}, {0.5, 0.0}, {1.0, 0.0}};
      const double angles[5] = {150.0, 120.0, 90.0, 60.0, 30.0};
      for (double deg : angles)
        m.vertices.push_back({std::cos(deg * pi / 180.0), std::sin(deg * pi / 180.0)});
      const int raw[8][3] = {{0, 1, 5}, {1, 6, 5}, {1, 2, 6}, {2, 7, 6},
                             {2, 8, 7}, {2, 3, 8}, {3, 9, 8}, {3, 4, 9}};
      for (const auto& r : raw)
        m.triangles.push_back(with_longest_refinement_edge(m.vertices, r[0], r[1], r[2]));
      m.boundary_tags[sorted_pair(0, 1)] = BoundaryTag::Inflow;
      m.boundary_tags[sorted_pair(1, 2)] = BoundaryTag::Inflow;
      m.boundary_tags[sorted_pair(2, 3)] = BoundaryTag::Outflow;
      m.boundary_tags[sorted_pair(3, 4)] = BoundaryTag::Outflow;
      m.boundary_tags[sorted_pair(0, 5)] = BoundaryTag::Other;
      m.boundary_tags[sorted_pair(5, 6)] = BoundaryTag::Other;
      m.boundary_tags[sorted_pair(6, 7)] = BoundaryTag::Other;
      m.boundary_tags[sorted_pair(7, 8)] = BoundaryTag::Other;
      m.boundary_tags[sorted_pair(8, 9)] = BoundaryTag::Other;
      m.boundary_tags[sorted_pair(4, 9)] = BoundaryTag::Other;
      m.snap_to_unit_circle = true;
      return m;
    }
    case DomainCase::UnitSquare: {
      m.vertices = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
      const int raw[2][3] = {{0, 1, 2}, {0, 2, 3}};
      for (const auto& r : raw)
        m.triangles.push_back(with_longest_refinement_edge(m.vertices, r[0], r[1], r[2]));
      m.boundary_tags[sorted_pair(0, 1)] = BoundaryTag::Outflow; // south
      m.boundary_tags[sorted_pair(1, 2)] = BoundaryTag::Outflow; // east
      m.boundary_tags[sorted_pair(2, 3)] = BoundaryTag::Inflow;  // north
      m.boundary_tags[sorted_pair(0, 3)] = BoundaryTag::Inflow;  // west
      return m;
    }
  }
  throw std::logic_error("initial_mesh: bad case");
}

//------------------------------------------------------------------------------
// newest-vertex bisection
//------------------------------------------------------------------------------

TriMesh2D bisect2d(const TriMesh2D& mesh, const std::vector<int>& marked) {
  TriMesh2D out = mesh;
  const size_t overflow_limit = 20 * std::max<size_t>(mesh.triangles.size(), 1);

  std::map<std::pair<int, int>, int> midpoint; // sorted edge -> vertex id
  std::vector<char> dead(out.triangles.size(), 0);
  std::deque<int> queue;
  std::vector<char> queued(out.triangles.size(), 0);

  for (int t : marked) {
    if (t < 0 || t >= mesh.n_triangles()) throw std::out_of_range("bisect2d: bad id");
    if (!queued[t]) {
      queue.push_back(t);
      queued[t] = 1;
    }
  }
  if (queue.empty()) return out;

  // creates (or finds) the midpoint of edge (a,b), maintaining boundary tags
  // and circle snapping
  auto edge_midpoint = [&](int a, int b) {
    const auto key = sorted_pair(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    const Vec2& pa = out.vertices[a];
    const Vec2& pb = out.vertices[b];
    Vec2 pm{0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y)};
    if (out.snap_to_unit_circle &&
        std::abs(std::hypot(pa.x, pa.y) - 1.0) < 1e-12 &&
        std::abs(std::hypot(pb.x, pb.y) - 1.0) < 1e-12 &&
        out.boundary_tags.count(key)) {
      const double r = std::hypot(pm.x, pm.y);
      pm.x /= r;
      pm.y /= r;
    }
    const int id = out.n_vertices();
    out.vertices.push_back(pm);
    midpoint.emplace(key, id);
    auto bit = out.boundary_tags.find(key);
    if (bit != out.boundary_tags.end()) {
      const BoundaryTag tag = bit->second;
      out.boundary_tags.erase(bit);
      out.boundary_tags[sorted_pair(a, id)] = tag;
      out.boundary_tags[sorted_pair(id, b)] = tag;
    }
    return id;
  };

  size_t alive = out.triangles.size();

  while (!queue.empty()) {
    const int t = queue.front();
    queue.pop_front();
    queued[t] = 0;
    if (dead[t]) continue;

    const Triangle2 tr = out.triangles[t];
    const int m = edge_midpoint(tr.v[0], tr.v[1]);

    // children keep the old non-refinement edges as their refinement edges
    Triangle2 left, right;
    left.v[0] = tr.v[2]; left.v[1] = tr.v[0]; left.v[2] = m;
    right.v[0] = tr.v[1]; right.v[1] = tr.v[2]; right.v[2] = m;

    dead[t] = 1;
    --alive;
    const int lid = static_cast<int>(out.triangles.size());
    out.triangles.push_back(left);
    out.triangles.push_back(right);
    dead.push_back(0);
    dead.push_back(0);
    queued.push_back(0);
    queued.push_back(0);
    alive += 2;
    if (alive > overflow_limit)
      throw ClosureOverflow("bisect2d: closure exceeded 20x the input mesh size");

    // children may still carry hanging midpoints on their remaining edges
    for (int id : {lid, lid + 1}) {
      const Triangle2& c = out.triangles[id];
      for (int e = 0; e < 3; ++e) {
        if (midpoint.count(sorted_pair(c.v[e], c.v[(e + 1) % 3])) && !queued[id]) {
          queue.push_back(id);
          queued[id] = 1;
        }
      }
    }

    // conformity sweep once the explicit queue drains: re-mark any surviving
    // triangle with a registered midpoint on one of its edges
    if (queue.empty()) {
      for (int s = 0; s < static_cast<int>(out.triangles.size()); ++s) {
        if (dead[s] || queued[s]) continue;
        const Triangle2& c = out.triangles[s];
        for (int e = 0; e < 3; ++e) {
          if (midpoint.count(sorted_pair(c.v[e], c.v[(e + 1) % 3]))) {
            queue.push_back(s);
            queued[s] = 1;
            break;
          }
        }
      }
    }
  }

  // compact away the dead parents
  TriMesh2D result;
  result.vertices = std::move(out.vertices);
  result.boundary_tags = std::move(out.boundary_tags);
  result.snap_to_unit_circle = out.snap_to_unit_circle;
  result.triangles.reserve(alive);
  for (size_t i = 0; i < out.triangles.size(); ++i)
    if (!dead[i]) result.triangles.push_back(out.triangles[i]);
  return result;
}

//------------------------------------------------------------------------------
// edge topology
//------------------------------------------------------------------------------

std::vector<EdgeInfo> collect_edges(const TriMesh2D& mesh) {
  // first directed appearance fixes the edge orientation; the second
  // appearance (reversed) supplies the right-hand triangle
  std::map<std::pair<int, int>, int> open; // sorted pair -> edge index
  std::vector<EdgeInfo> edges;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const Triangle2& tr = mesh.triangles[t];
    for (int e = 0; e < 3; ++e) {
      const int a = tr.v[e], b = tr.v[(e + 1) % 3];
      const auto key = sorted_pair(a, b);
      auto it = open.find(key);
      if (it == open.end()) {
        EdgeInfo info;
        info.a = a;
        info.b = b;
        info.tri_left = t;
        edges.push_back(info);
        open.emplace(key, static_cast<int>(edges.size()) - 1);
      } else {
        EdgeInfo& info = edges[it->second];
        if (info.tri_right != -1)
          throw std::logic_error("collect_edges: edge shared by three triangles");
        info.tri_right = t;
      }
    }
  }
  for (EdgeInfo& info : edges) {
    if (info.tri_right >= 0) continue;
    auto it = mesh.boundary_tags.find(sorted_pair(info.a, info.b));
    if (it == mesh.boundary_tags.end())
      throw std::logic_error("collect_edges: untagged boundary edge");
    info.boundary = true;
    info.tag = it->second;
  }
  return edges;
}

std::string check_conforming(const TriMesh2D& mesh) {
  try {
    const auto edges = collect_edges(mesh);
    for (const auto& e : edges) {
      if (!e.boundary && e.tri_right < 0) return "interior edge with one triangle";
    }
  } catch (const std::logic_error& err) {
    return err.what();
  }
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    if (!(mesh.area(t) > 0.0)) return "non-positive triangle area";
  }
  return "";
}

//------------------------------------------------------------------------------
// text I/O
//------------------------------------------------------------------------------

void TriMesh2D::save(std::ostream& os) const {
  os << "mesh2d\n";
  char buf[128];
  os << n_vertices() << "\n";
  for (const Vec2& p : vertices) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g", p.x, p.y);
    os << buf << "\n";
  }
  os << n_triangles() << "\n";
  // refinement edge is always local edge 0 in this representation
  for (const Triangle2& t : triangles)
    os << t.v[0] << " " << t.v[1] << " " << t.v[2] << " 0\n";
  os << boundary_tags.size() << "\n";
  for (const auto& [key, tag] : boundary_tags)
    os << key.first << " " << key.second << " " << boundary_tag_name(tag) << "\n";
  os << (snap_to_unit_circle ? 1 : 0) << "\n";
}

TriMesh2D TriMesh2D::load(std::istream& is) {
  std::string header;
  if (!(is >> header) || header != "mesh2d")
    throw std::runtime_error("TriMesh2D::load: bad header");
  TriMesh2D m;
  int nv = 0;
  if (!(is >> nv) || nv < 3) throw std::runtime_error("TriMesh2D::load: bad vertex count");
  m.vertices.resize(nv);
  for (Vec2& p : m.vertices)
    if (!(is >> p.x >> p.y)) throw std::runtime_error("TriMesh2D::load: bad vertex");
  int nt = 0;
  if (!(is >> nt) || nt < 1) throw std::runtime_error("TriMesh2D::load: bad triangle count");
  m.triangles.resize(nt);
  for (Triangle2& t : m.triangles) {
    int r = 0;
    if (!(is >> t.v[0] >> t.v[1] >> t.v[2] >> r) || r < 0 || r > 2)
      throw std::runtime_error("TriMesh2D::load: bad triangle");
    while (r-- > 0) { // rotate so the stored refinement edge becomes (v0,v1)
      const int tmp = t.v[0];
      t.v[0] = t.v[1];
      t.v[1] = t.v[2];
      t.v[2] = tmp;
    }
  }
  int nb = 0;
  if (!(is >> nb) || nb < 0) throw std::runtime_error("TriMesh2D::load: bad boundary count");
  for (int i = 0; i < nb; ++i) {
    int a = 0, b = 0;
    std::string tag;
    if (!(is >> a >> b >> tag)) throw std::runtime_error("TriMesh2D::load: bad boundary edge");
    BoundaryTag bt;
    if (tag == "inflow")
      bt = BoundaryTag::Inflow;
    else if (tag == "outflow")
      bt = BoundaryTag::Outflow;
    else if (tag == "other")
      bt = BoundaryTag::Other;
    else
      throw std::runtime_error("TriMesh2D::load: bad boundary tag");
    m.boundary_tags[sorted_pair(a, b)] = bt;
  }
  int snap = 0;
  if (is >> snap) m.snap_to_unit_circle = (snap != 0);
  return m;
}

} // namespace ofem
