#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hyperclust/dataset.hpp"
#include "hyperclust/kmeans.hpp"
#include "hyperclust/svm.hpp"

namespace hyperclust {

enum class PlaneSetMode { L, L_prime, H_experiment };

struct HyperplaneSet {
  std::vector<Hyperplane> planes;
  PlaneSetMode mode = PlaneSetMode::L;
  std::size_t delta = 0;
  // Set when the L' iteration stopped at max_rounds rather than at a fixed point.
  bool truncated = false;
  std::size_t rounds = 0;

  std::size_t size() const { return planes.size(); }
  bool empty() const { return planes.empty(); }
};

// Which planes the norm filter sees in later rounds of the L' iteration.
enum class PhiScope {
  // New planes are split together with the accepted L'; only new planes in
  // the small-norm group are added.
  joint,
  // Only the new planes are split; their small-norm group is always added.
  new_only,
};

struct ForestOptions {
  KMeansOptions kmeans;
  SvmOptions svm;
  std::size_t max_rounds = 10;
  PhiScope phi_scope = PhiScope::joint;
};

// Builds hyperplane sets over a fixed dataset. Plane ids are unique per builder.
class ForestBuilder {
 public:
  ForestBuilder(const Dataset& ds, ForestOptions options = {});

  // Recursive split: 2-means on `subset`, an SVM on the induced labels, then
  // recursion on the w.x+b >= 0 and < 0 sides until a side has fewer than
  // `delta` points. Degenerate branches stop without a plane.
  HyperplaneSet f_delta(const IndexList& subset, std::size_t delta, std::uint64_t seed);

  // Iterates L' <- L' u phi(union of f_delta over the cells of L') until no
  // plane is added or max_rounds is reached.
  HyperplaneSet fixed_point_l_prime(std::size_t delta, std::uint64_t seed);

  // H = L u (union of f_delta over the cells of L), with L = f_delta(all points).
  HyperplaneSet experiment_h(std::size_t delta, std::uint64_t seed);

  // Branches that ended without a plane (single cluster, SVM failure, empty side).
  std::size_t degenerate_branches() const { return degenerate_; }

 private:
  void split_recursive(const IndexList& subset, std::size_t delta, std::uint64_t seed, std::int64_t parent,
                       std::vector<Hyperplane>& out);

  const Dataset& ds_;
  ForestOptions options_;
  std::size_t next_id_ = 0;
  std::size_t degenerate_ = 0;
};

// Keeps the planes in the smaller-norm group of a two-group split of ||w||.
// Sets of size <= 1, or whose norms are all equal within 1e-12, pass through.
HyperplaneSet phi_filter(const HyperplaneSet& planes);

// Groups points by their side pattern (w.x+b >= 0) across every plane.
// Cells are ordered by their smallest member; members ascend.
std::vector<IndexList> partition_cells(const Dataset& ds, const HyperplaneSet& planes);
std::vector<IndexList> partition_cells(const Dataset& ds, const HyperplaneSet& planes, const IndexList& subset);

// Header plus one CSV line per plane: id, norm_w, affiliated count, parent plane id.
std::string dump_planes_csv(const HyperplaneSet& planes);

}  // namespace hyperclust
