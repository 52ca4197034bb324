#include <doctest.h>

#include <cmath>

#include "jgl/datagen.hpp"
#include "jgl/errors.hpp"
#include "oracles.hpp"

using namespace jgl;

namespace {

double off_diagonal_zero_fraction(const SymMatrix& t) {
  const Index p = t.dim();
  Index zeros = 0;
  for (Index i = 0; i < p; ++i)
    for (Index j = i + 1; j < p; ++j) zeros += t(i, j) == 0.0;
  return static_cast<double>(zeros) / static_cast<double>(p * (p - 1) / 2);
}

void check_truth_invariants(const GroundTruth& truth, double r) {
  for (const SymMatrix& t : truth.precisions) {
    CHECK(sym_eigen(t).eigenvalues.minCoeff() > 0.0);
    for (Index i = 0; i < t.dim(); ++i) {
      CHECK(t(i, i) == 5.0);
      for (Index j = i + 1; j < t.dim(); ++j) {
        const double v = t(i, j);
        CHECK((v == 0.0 || v == 5.0 * r || v == -5.0 * r));
      }
    }
  }
}

Partition support_partition(const SymMatrix& t) {
  UnionFind uf(t.dim());
  for (Index i = 0; i < t.dim(); ++i)
    for (Index j = i + 1; j < t.dim(); ++j)
      if (t(i, j) != 0.0) uf.unite(i, j);
  return uf.to_partition();
}

}  // namespace

TEST_SUITE("datagen") {

TEST_CASE("generation is deterministic by seed") {
  DatagenConfig cfg;
  cfg.type = DatasetType::A;
  cfg.p = 100;
  cfg.classes = 2;
  cfg.r = 0.006;
  cfg.seed = 7;
  GroundTruth a = gen_precisions(cfg);
  GroundTruth b = gen_precisions(cfg);
  REQUIRE(a.precisions.size() == 2);
  CHECK(a.precisions[0] == b.precisions[0]);
  CHECK(a.precisions[1] == b.precisions[1]);
  CHECK_FALSE(a.precisions[0] == a.precisions[1]);

  cfg.type = DatasetType::C;
  GroundTruth c1 = gen_precisions(cfg), c2 = gen_precisions(cfg);
  CHECK(c1.precisions[1] == c2.precisions[1]);
  CHECK(c1.block_structure == c2.block_structure);
}

TEST_CASE("Type A keeps 97 percent of off-diagonal entries at zero") {
  DatagenConfig cfg;
  cfg.type = DatasetType::A;
  cfg.p = 1000;
  cfg.classes = 2;
  cfg.r = 0.006;
  cfg.seed = 3;
  GroundTruth truth = gen_precisions(cfg);
  for (const SymMatrix& t : truth.precisions) {
    const double frac = off_diagonal_zero_fraction(t);
    CHECK(frac >= 0.965);
    CHECK(frac <= 0.975);
  }
  check_truth_invariants(truth, cfg.r);
  CHECK(truth.block_structure.empty());
}

TEST_CASE("ground truth invariants across a seed sweep") {
  for (DatasetType type : {DatasetType::A, DatasetType::B, DatasetType::C}) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      DatagenConfig cfg;
      cfg.type = type;
      cfg.p = 80;
      cfg.classes = 3;
      cfg.r = type == DatasetType::A ? 0.006 : 0.0066;
      cfg.seed = seed;
      GroundTruth truth = gen_precisions(cfg);
      check_truth_invariants(truth, cfg.r);
      if (type == DatasetType::A) continue;
      REQUIRE(truth.block_structure.size() == cfg.classes);
      REQUIRE(truth.base_structure.has_value());
      for (const IndexList& comp : truth.base_structure->components()) {
        CHECK(comp.size() >= cfg.block_min);
        CHECK(comp.size() <= cfg.block_max);
      }
      for (Index k = 0; k < cfg.classes; ++k)
        CHECK(support_partition(truth.precisions[k]) == truth.block_structure[k]);
      if (type == DatasetType::B) {
        for (Index k = 1; k < cfg.classes; ++k)
          CHECK(truth.block_structure[k] == truth.block_structure[0]);
      } else {
        for (const IndexList& labels : truth.block_assignment) {
          Index moved = 0;
          for (Index v = 0; v < cfg.p; ++v) moved += labels[v] != truth.base_assignment[v];
          CHECK(moved <= cfg.perturbation);
        }
      }
    }
  }
}

TEST_CASE("Type C classes differ from each other") {
  DatagenConfig cfg;
  cfg.type = DatasetType::C;
  cfg.p = 200;
  cfg.classes = 4;
  cfg.r = 0.006;
  cfg.seed = 9;
  GroundTruth truth = gen_precisions(cfg);
  int differing = 0;
  for (Index k = 1; k < cfg.classes; ++k)
    differing += !(truth.block_structure[k] == truth.block_structure[0]);
  CHECK(differing > 0);
}

TEST_CASE("configuration bounds are enforced") {
  DatagenConfig cfg;
  cfg.type = DatasetType::A;
  cfg.r = 0.0061;
  CHECK_THROWS_AS(gen_precisions(cfg), ConfigError);
  cfg.r = 0.00609;
  CHECK_NOTHROW(cfg.validate());
  cfg.type = DatasetType::B;
  cfg.r = 0.0067;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.r = 0.0066;
  CHECK_NOTHROW(cfg.validate());
  cfg.p = 15;
  cfg.block_min = 10;
  cfg.block_max = 12;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.p = 1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.p = 100;
  cfg.classes = 1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  CHECK_THROWS_AS(parse_dataset_type("D"), ConfigError);
}

TEST_CASE("sample_gaussian scalar variance") {
  SymMatrix theta = SymMatrix::identity(1);
  theta.set(0, 0, 4.0);
  SampleMatrix x = sample_gaussian(theta, 100000, 1);
  const double var = empirical_covariance(x)(0, 0);
  CHECK(var >= 0.24);
  CHECK(var <= 0.26);
}

TEST_CASE("sample_gaussian is reproducible and recovers the covariance") {
  Rng rng(77);
  SymMatrix theta = SymMatrix::from_dense(oracle::random_spd(rng, 3, 1.0));
  SampleMatrix a = sample_gaussian(theta, 50, 12);
  SampleMatrix b = sample_gaussian(theta, 50, 12);
  CHECK(a.rows() == b.rows());

  SampleMatrix big = sample_gaussian(theta, 200000, 4);
  Eigen::MatrixXd sigma = theta.dense().fullPivLu().inverse();
  Eigen::MatrixXd s = empirical_covariance(big).dense();
  CHECK((s - sigma).cwiseAbs().maxCoeff() <= 0.02);
}

TEST_CASE("sample_gaussian rejects non-PD precision") {
  std::vector<double> d{1.0, -0.5};
  CHECK_THROWS_AS(sample_gaussian(SymMatrix::diagonal(d), 10, 0), NumericError);
}

TEST_CASE("rng index is uniform enough and in range") {
  Rng rng(1);
  std::vector<int> counts(7, 0);
  for (int t = 0; t < 70000; ++t) {
    auto v = rng.index(7);
    REQUIRE(v < 7);
    ++counts[v];
  }
  for (int c : counts) CHECK(std::abs(c - 10000) < 500);
}

}  // TEST_SUITE
