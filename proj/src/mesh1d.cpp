#include <ofem/mesh1d.hpp>

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace ofem {

//------------------------------------------------------------------------------
// construction
//------------------------------------------------------------------------------

Mesh1D Mesh1D::from_nodes(const std::vector<double>& nodes) {
  if (nodes.size() < 2) throw std::invalid_argument("Mesh1D: need at least 2 nodes");
  for (size_t i = 1; i < nodes.size(); ++i) {
    if (!(nodes[i] > nodes[i - 1]))
      throw std::invalid_argument("Mesh1D: nodes must be strictly increasing");
  }
  Mesh1D m;
  m.forest_.reserve(nodes.size() - 1);
  for (size_t i = 0; i + 1 < nodes.size(); ++i) {
    m.forest_.push_back({nodes[i], nodes[i + 1], -1, -1, -1});
    m.leaves_.push_back(static_cast<int>(i));
  }
  return m;
}

Mesh1D Mesh1D::uniform(double a, double b, int n_elements) {
  if (!(b > a)) throw std::invalid_argument("Mesh1D::uniform: need b > a");
  if (n_elements < 1) throw std::invalid_argument("Mesh1D::uniform: need >= 1 element");
  std::vector<double> nodes(n_elements + 1);
  for (int i = 0; i <= n_elements; ++i)
    nodes[i] = a + (b - a) * static_cast<double>(i) / n_elements;
  nodes[n_elements] = b;
  return from_nodes(nodes);
}

std::pair<double, double> Mesh1D::element(int e) const {
  const HistNode& n = forest_[leaves_.at(e)];
  return {n.xl, n.xr};
}

double Mesh1D::length(int e) const {
  const HistNode& n = forest_[leaves_.at(e)];
  return n.xr - n.xl;
}

double Mesh1D::node(int i) const {
  if (i < 0 || i >= n_nodes()) throw std::out_of_range("Mesh1D::node");
  if (i < n_elements()) return forest_[leaves_[i]].xl;
  return forest_[leaves_.back()].xr;
}

std::vector<double> Mesh1D::nodes() const {
  std::vector<double> out(n_nodes());
  for (int i = 0; i < n_nodes(); ++i) out[i] = node(i);
  return out;
}

//------------------------------------------------------------------------------
// refinement / coarsening
//------------------------------------------------------------------------------

Mesh1D Mesh1D::bisect(const std::vector<int>& marked, std::vector<int>* old_to_new) const {
  std::vector<char> is_marked(leaves_.size(), 0);
  for (int e : marked) {
    if (e < 0 || e >= n_elements()) throw std::out_of_range("Mesh1D::bisect: bad element id");
    is_marked[e] = 1;
  }

  Mesh1D out;
  out.forest_ = forest_;
  out.leaves_.reserve(leaves_.size() + marked.size());
  if (old_to_new) old_to_new->assign(leaves_.size(), -1);

  for (size_t e = 0; e < leaves_.size(); ++e) {
    const int id = leaves_[e];
    if (!is_marked[e]) {
      if (old_to_new) (*old_to_new)[e] = static_cast<int>(out.leaves_.size());
      out.leaves_.push_back(id);
      continue;
    }
    const double xl = out.forest_[id].xl, xr = out.forest_[id].xr;
    const double xm = 0.5 * (xl + xr);
    const int c0 = static_cast<int>(out.forest_.size());
    out.forest_.push_back({xl, xm, id, -1, -1});
    const int c1 = static_cast<int>(out.forest_.size());
    out.forest_.push_back({xm, xr, id, -1, -1});
    out.forest_[id].child0 = c0;
    out.forest_[id].child1 = c1;
    if (old_to_new) (*old_to_new)[e] = static_cast<int>(out.leaves_.size());
    out.leaves_.push_back(c0);
    out.leaves_.push_back(c1);
  }
  return out;
}

Mesh1D Mesh1D::coarsen(const std::vector<int>& marked) const {
  std::vector<char> is_marked(leaves_.size(), 0);
  for (int e : marked) {
    if (e < 0 || e >= n_elements()) throw std::out_of_range("Mesh1D::coarsen: bad element id");
    is_marked[e] = 1;
  }

  Mesh1D out;
  out.forest_ = forest_;
  out.leaves_.reserve(leaves_.size());

  for (size_t e = 0; e < leaves_.size(); ++e) {
    const int id = leaves_[e];
    // merge only when this leaf and its right neighbor are the two children of
    // one parent and both are marked
    if (e + 1 < leaves_.size() && is_marked[e] && is_marked[e + 1]) {
      const int rid = leaves_[e + 1];
      const int p = out.forest_[id].parent;
      if (p >= 0 && p == out.forest_[rid].parent && out.forest_[p].child0 == id &&
          out.forest_[p].child1 == rid) {
        out.forest_[p].child0 = -1;
        out.forest_[p].child1 = -1;
        out.leaves_.push_back(p);
        ++e; // consume the sibling as well
        continue;
      }
    }
    out.leaves_.push_back(id);
  }
  return out;
}

Mesh1D Mesh1D::merge_adjacent(const std::vector<int>& marked) const {
  std::vector<char> is_marked(leaves_.size(), 0);
  for (int e : marked) {
    if (e < 0 || e >= n_elements())
      throw std::out_of_range("Mesh1D::merge_adjacent: bad element id");
    is_marked[e] = 1;
  }

  Mesh1D out;
  out.forest_ = forest_;
  out.leaves_.reserve(leaves_.size());

  size_t e = 0;
  while (e < leaves_.size()) {
    if (!is_marked[e]) {
      out.leaves_.push_back(leaves_[e]);
      ++e;
      continue;
    }
    size_t run_end = e;
    while (run_end + 1 < leaves_.size() && is_marked[run_end + 1]) ++run_end;
    if (run_end == e) { // a lone marked element has no merge partner
      out.leaves_.push_back(leaves_[e]);
      ++e;
      continue;
    }
    const double xl = forest_[leaves_[e]].xl;
    const double xr = forest_[leaves_[run_end]].xr;
    const int fresh = static_cast<int>(out.forest_.size());
    out.forest_.push_back({xl, xr, -1, -1, -1});
    out.leaves_.push_back(fresh);
    e = run_end + 1;
  }
  return out;
}

//------------------------------------------------------------------------------
// queries
//------------------------------------------------------------------------------

std::pair<int, double> Mesh1D::cut_position(double x0) const {
  if (!(x0 > domain_left()) || !(x0 < domain_right()))
    throw OutOfDomain("cut_position: x0 not strictly inside the domain");
  // first element whose right endpoint lies strictly beyond x0; x0 exactly at
  // an interior node then lands in the right element with t = 0
  int lo = 0, hi = n_elements() - 1;
  while (lo < hi) {
    const int mid = (lo + hi) / 2;
    if (forest_[leaves_[mid]].xr > x0)
      hi = mid;
    else
      lo = mid + 1;
  }
  const auto [xl, xr] = element(lo);
  return {lo, (x0 - xl) / (xr - xl)};
}

//------------------------------------------------------------------------------
// text I/O
//------------------------------------------------------------------------------

void Mesh1D::save(std::ostream& os) const {
  os << "mesh1d " << n_nodes() << "\n";
  char buf[64];
  for (int i = 0; i < n_nodes(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", node(i));
    os << buf << "\n";
  }
}

Mesh1D Mesh1D::load(std::istream& is) {
  std::string tag;
  int count = 0;
  if (!(is >> tag >> count) || tag != "mesh1d" || count < 2)
    throw std::runtime_error("Mesh1D::load: bad header");
  std::vector<double> nodes(count);
  for (int i = 0; i < count; ++i) {
    if (!(is >> nodes[i])) throw std::runtime_error("Mesh1D::load: truncated node list");
  }
  return from_nodes(nodes);
}

} // namespace ofem
