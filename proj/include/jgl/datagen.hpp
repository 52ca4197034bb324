#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jgl/matrix.hpp"
#include "jgl/screening.hpp"

namespace jgl {

// A: ~97% of off-diagonal entries zero, independent per class.
// B: one shared block-diagonal structure.
// C: the shared structure with a few variables moved per class.
enum class DatasetType { A, B, C };

std::string to_string(DatasetType type);
DatasetType parse_dataset_type(const std::string& name);

struct DatagenConfig {
  DatasetType type = DatasetType::A;
  Index p = 100;
  Index classes = 2;
  // Off-diagonal nonzeros are ±5r; diagonals are 5.
  double r = 0.006;
  std::optional<Index> samples_per_class;  // default 5·p
  std::uint64_t seed = 0;
  Index block_min = 10;
  Index block_max = 50;
  Index perturbation = 2;
  double block_density = 0.5;
  double type_a_zero_fraction = 0.97;

  Index sample_count() const { return samples_per_class.value_or(5 * p); }
  // Throws ConfigError on violated bounds.
  void validate() const;
};

struct GroundTruth {
  std::vector<SymMatrix> precisions;
  // Block structure per class (Types B and C); empty for Type A.
  PartitionFamily block_structure;
  // Shared structure Type C classes were perturbed from (Types B and C).
  std::optional<Partition> base_structure;
  // Block index of every variable, shared numbering across classes.
  IndexList base_assignment;
  std::vector<IndexList> block_assignment;
  std::uint64_t seed = 0;
};

inline constexpr double kDiagonalValue = 5.0;

GroundTruth gen_precisions(const DatagenConfig& cfg);

// n draws from N(0, theta⁻¹). Throws NumericError when theta is not PD.
SampleMatrix sample_gaussian(const SymMatrix& theta, Index n, std::uint64_t seed);

// Seed of class k's random stream.
inline std::uint64_t class_seed(std::uint64_t seed, Index k) { return seed + k; }
// Seed of class k's sample stream; kept apart from the structure streams.
inline std::uint64_t sample_seed(std::uint64_t seed, Index k) {
  return seed + 0x9e3779b97f4a7c15ULL + k;
}

}  // namespace jgl
