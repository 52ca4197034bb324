#include "jgl/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "jgl/errors.hpp"
#include "jgl/rng.hpp"

namespace jgl {

std::string to_string(DatasetType type) {
  switch (type) {
    case DatasetType::A: return "A";
    case DatasetType::B: return "B";
    case DatasetType::C: return "C";
  }
  return "?";
}

DatasetType parse_dataset_type(const std::string& name) {
  if (name == "A" || name == "a") return DatasetType::A;
  if (name == "B" || name == "b") return DatasetType::B;
  if (name == "C" || name == "c") return DatasetType::C;
  throw ConfigError("unknown dataset type '" + name + "'");
}

namespace {

bool tileable(Index total, Index lo, Index hi) {
  if (total == 0) return true;
  const Index fewest = (total + hi - 1) / hi;
  const Index most = total / lo;
  return fewest <= most;
}

// splitmix64 finalizer; decorrelates the structure stream from class streams.
std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double signed_entry(Rng& rng, double magnitude) {
  return rng.coin(0.5) ? magnitude : -magnitude;
}

// Contiguous blocks along the diagonal, sizes drawn uniformly from
// [lo, hi] subject to the remainder staying tileable.
IndexList draw_block_labels(Rng& rng, Index p, Index lo, Index hi) {
  IndexList labels(p);
  Index start = 0;
  Index block = 0;
  while (start < p) {
    const Index remaining = p - start;
    Index size;
    do {
      size = rng.between(lo, std::min(hi, remaining));
    } while (!tileable(remaining - size, lo, hi));
    for (Index v = start; v < start + size; ++v) labels[v] = block;
    start += size;
    ++block;
  }
  return labels;
}

SymMatrix fill_blocks(Rng& rng, const Partition& blocks, double magnitude,
                      double density) {
  SymMatrix theta(blocks.dim());
  for (Index v = 0; v < blocks.dim(); ++v) theta.set(v, v, kDiagonalValue);
  for (const IndexList& comp : blocks.components()) {
    // A random recursive tree keeps every block connected, so the support
    // graph reproduces the block structure exactly.
    IndexList order = comp;
    rng.shuffle(order);
    for (Index t = 1; t < order.size(); ++t) {
      Index parent = order[rng.index(t)];
      theta.set(order[t], parent, signed_entry(rng, magnitude));
    }
    for (Index a = 0; a < comp.size(); ++a)
      for (Index b = a + 1; b < comp.size(); ++b) {
        if (theta(comp[a], comp[b]) != 0.0) continue;
        if (rng.coin(density))
          theta.set(comp[a], comp[b], signed_entry(rng, magnitude));
      }
  }
  return theta;
}

SymMatrix fill_sparse(Rng& rng, Index p, double magnitude, double zero_fraction) {
  const std::uint64_t pairs = static_cast<std::uint64_t>(p) * (p - 1) / 2;
  const auto nonzeros = static_cast<std::uint64_t>(
      std::llround((1.0 - zero_fraction) * static_cast<double>(pairs)));
  // Floyd's sampling of `nonzeros` distinct pair ids.
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(nonzeros * 2);
  for (std::uint64_t j = pairs - nonzeros; j < pairs; ++j) {
    std::uint64_t t = rng.index(j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<std::uint64_t> ids(chosen.begin(), chosen.end());
  std::sort(ids.begin(), ids.end());

  SymMatrix theta(p);
  for (Index v = 0; v < p; ++v) theta.set(v, v, kDiagonalValue);
  // Pair id enumerates (i, j), i < j, row by row.
  Index row = 0;
  std::uint64_t row_start = 0;
  for (std::uint64_t id : ids) {
    while (id >= row_start + (p - 1 - row)) {
      row_start += p - 1 - row;
      ++row;
    }
    Index col = row + 1 + static_cast<Index>(id - row_start);
    theta.set(row, col, signed_entry(rng, magnitude));
  }
  return theta;
}

IndexList perturb(Rng& rng, const Partition& base, const IndexList& base_labels,
                  Index moves) {
  const Index blocks = base.size();
  IndexList labels = base_labels;
  if (blocks < 2) return labels;
  IndexList vars(base.dim());
  for (Index v = 0; v < vars.size(); ++v) vars[v] = v;
  rng.shuffle(vars);
  std::vector<Index> block_size(blocks, 0);
  for (Index v : labels) ++block_size[v];
  Index done = 0;
  for (Index v : vars) {
    if (done == moves) break;
    const Index from = labels[v];
    if (block_size[from] < 2) continue;
    Index to;
    if (from == 0) to = 1;
    else if (from + 1 == blocks) to = from - 1;
    else to = rng.coin(0.5) ? from - 1 : from + 1;
    labels[v] = to;
    --block_size[from];
    ++block_size[to];
    ++done;
  }
  return labels;
}

void require_pd(const SymMatrix& theta, Index k) {
  Eigen::LLT<Eigen::MatrixXd> llt(theta.dense());
  if (llt.info() != Eigen::Success)
    throw NumericError("generated precision for class " + std::to_string(k) +
                       " is not positive definite");
}

}  // namespace

void DatagenConfig::validate() const {
  if (p < 2) throw ConfigError("p must be at least 2");
  if (classes < 2) throw ConfigError("K must be at least 2");
  if (!(r >= 0.0)) throw ConfigError("r must be non-negative");
  const double bound = type == DatasetType::A ? 0.0061 : 0.0067;
  if (!(r < bound))
    throw ConfigError("r=" + std::to_string(r) + " must be below " +
                      std::to_string(bound) + " for Type " + to_string(type));
  if (samples_per_class && *samples_per_class == 0)
    throw ConfigError("samples per class must be positive");
  if (!(block_density >= 0.0 && block_density <= 1.0))
    throw ConfigError("block density must lie in [0, 1]");
  if (!(type_a_zero_fraction >= 0.0 && type_a_zero_fraction <= 1.0))
    throw ConfigError("zero fraction must lie in [0, 1]");
  if (type != DatasetType::A) {
    if (block_min == 0 || block_min > block_max)
      throw ConfigError("block size range must satisfy 1 <= min <= max");
    if (!tileable(p, block_min, block_max))
      throw ConfigError("p=" + std::to_string(p) +
                        " cannot be split into blocks of size " +
                        std::to_string(block_min) + ".." +
                        std::to_string(block_max));
  }
}

GroundTruth gen_precisions(const DatagenConfig& cfg) {
  cfg.validate();
  GroundTruth truth;
  truth.seed = cfg.seed;
  const double magnitude = cfg.r * kDiagonalValue;

  if (cfg.type == DatasetType::A) {
    for (Index k = 0; k < cfg.classes; ++k) {
      Rng rng(class_seed(cfg.seed, k));
      truth.precisions.push_back(
          fill_sparse(rng, cfg.p, magnitude, cfg.type_a_zero_fraction));
    }
  } else {
    Rng structure_rng(mix(cfg.seed));
    IndexList base_labels =
        draw_block_labels(structure_rng, cfg.p, cfg.block_min, cfg.block_max);
    Partition base = Partition::from_labels(base_labels);
    truth.base_structure = base;
    truth.base_assignment = base_labels;
    for (Index k = 0; k < cfg.classes; ++k) {
      Rng rng(class_seed(cfg.seed, k));
      IndexList labels = cfg.type == DatasetType::C
                             ? perturb(rng, base, base_labels, cfg.perturbation)
                             : base_labels;
      Partition blocks = Partition::from_labels(labels);
      truth.precisions.push_back(
          fill_blocks(rng, blocks, magnitude, cfg.block_density));
      truth.block_structure.push_back(std::move(blocks));
      truth.block_assignment.push_back(std::move(labels));
    }
  }
  for (Index k = 0; k < truth.precisions.size(); ++k)
    require_pd(truth.precisions[k], k);
  return truth;
}

SampleMatrix sample_gaussian(const SymMatrix& theta, Index n, std::uint64_t seed) {
  if (n == 0) throw InputError("sample_gaussian: n must be positive");
  EigenDecomposition eig = sym_eigen(theta);
  if (!(eig.eigenvalues.minCoeff() > 0.0))
    throw NumericError("sample_gaussian: precision matrix is not positive definite");
  const Index p = theta.dim();
  // x = Q D^{-1/2} z has covariance Q D^{-1} Qᵀ = theta⁻¹.
  Eigen::MatrixXd factor =
      eig.eigenvectors * eig.eigenvalues.cwiseSqrt().cwiseInverse().asDiagonal();
  Eigen::MatrixXd z(n, p);
  Rng rng(seed);
  for (Index t = 0; t < n; ++t)
    for (Index i = 0; i < p; ++i) z(t, i) = rng.normal();
  return SampleMatrix(z * factor.transpose());
}

}  // namespace jgl
