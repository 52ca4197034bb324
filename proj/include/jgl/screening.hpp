#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jgl/matrix.hpp"

namespace jgl {

// Set partition of {0..p-1}. Each component is identified by its smallest
// member; components() is sorted by that id and each component is ascending.
class Partition {
 public:
  // Any labeling where equal labels mean "same component".
  static Partition from_labels(std::span<const Index> labels);
  // Throws InputError unless the lists are disjoint, non-empty and cover 0..p-1.
  static Partition from_components(Index p, std::vector<IndexList> components);
  static Partition singletons(Index p);
  static Partition whole(Index p);

  Index dim() const { return label_.size(); }
  Index size() const { return components_.size(); }
  Index component_of(Index v) const { return label_[v]; }
  bool same(Index i, Index j) const { return label_[i] == label_[j]; }
  const std::vector<IndexList>& components() const { return components_; }
  const IndexList& labels() const { return label_; }

  friend bool operator==(const Partition& a, const Partition& b) {
    return a.label_ == b.label_;
  }

 private:
  Partition() = default;
  IndexList label_;
  std::vector<IndexList> components_;
};

// One partition per class, all over the same variable set.
using PartitionFamily = std::vector<Partition>;

// Symmetric 0/1 matrix with unit diagonal.
class BinaryMatrix {
 public:
  explicit BinaryMatrix(Index p, bool off_diagonal = false);

  Index dim() const { return p_; }
  bool operator()(Index i, Index j) const { return bits_[i * p_ + j] != 0; }
  // Diagonal writes are ignored; the diagonal stays 1.
  void set(Index i, Index j, bool v);

  friend bool operator==(const BinaryMatrix&, const BinaryMatrix&) = default;

 private:
  Index p_;
  std::vector<std::uint8_t> bits_;
};

using IndicatorSet = std::vector<BinaryMatrix>;

class UnionFind {
 public:
  explicit UnionFind(Index n);
  Index find(Index v);
  // Returns true if a merge happened.
  bool unite(Index a, Index b);
  Partition to_partition();

 private:
  std::vector<Index> parent_;
  std::vector<Index> rank_;
};

enum class ScreenMode { none, global, local, hybrid };

std::string to_string(ScreenMode mode);
// Throws InputError on unknown names.
ScreenMode parse_screen_mode(const std::string& name);

// (|a| - λ1)₊² summed over classes at one off-diagonal position.
double excess_sum_sq(const CovarianceSet& s, Index i, Index j, double lambda1);

IndicatorSet initial_indicators(const CovarianceSet& s, double lambda1,
                                double lambda2);

Partition connected_components(const BinaryMatrix& indicator);

IndicatorSet close_within_components(const IndicatorSet& indicators);

// Merges class components until no triple (x,i,j) has I^x_ij = 0,
// |S^x_ij| > λ1 and I^s_ij = 1 for some s. Input must be block-complete.
// With shuffle_seed, candidate triples are scanned in a seeded random order
// instead of lexicographic (x,i,j); the fixpoint is the same.
IndicatorSet repair_loop(const CovarianceSet& s, const IndicatorSet& indicators,
                         double lambda1,
                         std::optional<std::uint64_t> shuffle_seed = {});

PartitionFamily hybrid_screen(const CovarianceSet& s, double lambda1,
                              double lambda2,
                              std::optional<std::uint64_t> shuffle_seed = {});
PartitionFamily global_screen(const CovarianceSet& s, double lambda1,
                              double lambda2);
PartitionFamily local_screen(const CovarianceSet& s, double lambda1);

// Dispatches on mode; ScreenMode::none yields one block per class.
PartitionFamily screen(const CovarianceSet& s, double lambda1, double lambda2,
                       ScreenMode mode);

// Every component of a lies inside a component of b.
bool refines(const Partition& a, const Partition& b);

Partition mix_partition(const PartitionFamily& family);

// Sum of cubed component sizes.
std::uint64_t complexity_estimate(const Partition& partition);

// "Same group in class k" indicators for an arbitrary family.
IndicatorSet indicators_from_family(const PartitionFamily& family);

// Throws InputError when the family is empty or dimensions differ from p.
void check_family(const PartitionFamily& family, Index p);

}  // namespace jgl
