#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ofem {

struct OutOfDomain : std::runtime_error {
  explicit OutOfDomain(const std::string& what) : std::runtime_error(what) {}
};

//------------------------------------------------------------------------------
// Mesh1D: interval mesh with bisection refinement, sibling coarsening, and a
// parent-child history forest.  Meshes are immutable values; every operation
// returns a new mesh.  Elements are indexed left to right.
//------------------------------------------------------------------------------

class Mesh1D {
public:
  struct HistNode {
    double xl, xr;
    int parent = -1;
    int child0 = -1, child1 = -1; // left/right half after bisection
  };

  static Mesh1D from_nodes(const std::vector<double>& nodes);
  static Mesh1D uniform(double a, double b, int n_elements);

  int n_elements() const { return static_cast<int>(leaves_.size()); }
  int n_nodes() const { return n_elements() + 1; }
  std::pair<double, double> element(int e) const;
  double length(int e) const;
  double node(int i) const; // i in [0, n_nodes())
  std::vector<double> nodes() const;
  double domain_left() const { return forest_[leaves_.front()].xl; }
  double domain_right() const { return forest_[leaves_.back()].xr; }

  // Replace each marked element by its two halves.  If `old_to_new` is given
  // it receives, per old element, the new index of that element (unmarked) or
  // of its left child (marked).
  Mesh1D bisect(const std::vector<int>& marked,
                std::vector<int>* old_to_new = nullptr) const;

  // Merge a sibling pair back into its parent when BOTH siblings are marked.
  // Elements without a refinement history, or with an unmarked sibling, are
  // left untouched.  Restores parent coordinates bit-identically.
  Mesh1D coarsen(const std::vector<int>& marked) const;

  // Merge every maximal run of >= 2 adjacent marked elements into a single
  // element.  The merged elements become fresh history roots (their previous
  // refinement history is discarded); everything else is untouched.
  Mesh1D merge_adjacent(const std::vector<int>& marked) const;

  // Locate x0: returns (element, t) with t = (x0 - xl)/(xr - xl).  When x0
  // coincides with an interior node the element to the RIGHT is returned with
  // t = 0, so t is unique in [0,1).  x0 at or beyond a domain endpoint throws.
  std::pair<int, double> cut_position(double x0) const;

  // history introspection (tests)
  const std::vector<HistNode>& forest() const { return forest_; }
  int leaf_node(int e) const { return leaves_[e]; }

  // text format: header "mesh1d <node_count>", one coordinate per line
  void save(std::ostream& os) const;
  static Mesh1D load(std::istream& is);

private:
  std::vector<HistNode> forest_;
  std::vector<int> leaves_; // indices into forest_, left-to-right
};

} // namespace ofem
