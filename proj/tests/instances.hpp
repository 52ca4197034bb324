#pragma once
// Random joint-covariance instances for property and acceptance tests.

#include <algorithm>
#include <cmath>
#include <vector>

#include "jgl/datagen.hpp"
#include "jgl/matrix.hpp"
#include "jgl/rng.hpp"

namespace instances {

using jgl::Index;

struct Instance {
  jgl::CovarianceSet s;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
};

// K precisions sharing a random block structure, each class adding and
// dropping a few edges, sampled with n = samples_factor·p observations.
inline jgl::CovarianceSet related_covariances(jgl::Rng& rng, Index classes, Index p,
                                              Index samples_factor = 3) {
  std::vector<Index> block(p);
  Index current = 0, left = 0;
  for (Index v = 0; v < p; ++v) {
    if (left == 0) {
      left = rng.between(2, 6);
      ++current;
    }
    block[v] = current;
    --left;
  }
  jgl::CovarianceSet out;
  for (Index k = 0; k < classes; ++k) {
    Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(p, p);
    for (Index i = 0; i < p; ++i)
      for (Index j = i + 1; j < p; ++j) {
        const bool same = block[i] == block[j];
        const double prob = same ? 0.6 : 0.03;
        if (rng.coin(prob)) {
          const double v = (rng.coin(0.5) ? 1.0 : -1.0) * (0.1 + 0.3 * rng.uniform());
          theta(i, j) = theta(j, i) = v;
        }
      }
    for (Index i = 0; i < p; ++i) theta(i, i) = 1.0 + theta.row(i).cwiseAbs().sum();
    jgl::SymMatrix prec = jgl::SymMatrix::from_dense(theta);
    out.push_back(jgl::empirical_covariance(
        jgl::sample_gaussian(prec, samples_factor * p, rng.next_u64())));
  }
  return out;
}

inline std::vector<double> off_diagonal_magnitudes(const jgl::CovarianceSet& s) {
  std::vector<double> v;
  for (const auto& m : s)
    for (Index i = 0; i < m.dim(); ++i)
      for (Index j = i + 1; j < m.dim(); ++j) v.push_back(std::abs(m(i, j)));
  std::sort(v.begin(), v.end());
  return v;
}

inline double quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const auto at = static_cast<std::size_t>(q * static_cast<double>(sorted.size() - 1));
  return sorted[at];
}

// Penalties drawn across regimes: zeros, weak, moderate and strong screening.
inline void draw_penalties(jgl::Rng& rng, Instance& inst) {
  const auto mags = off_diagonal_magnitudes(inst.s);
  static constexpr double kL1Quantiles[] = {0.0, 0.3, 0.5, 0.7, 0.85, 0.95};
  static constexpr double kL2Scale[] = {0.0, 0.05, 0.2, 0.5, 1.0};
  const double q1 = kL1Quantiles[rng.index(std::size(kL1Quantiles))];
  inst.lambda1 = q1 == 0.0 ? 0.0 : quantile(mags, q1);
  const double scale = kL2Scale[rng.index(std::size(kL2Scale))];
  inst.lambda2 = scale * quantile(mags, 0.6);
}

inline Instance random_instance(jgl::Rng& rng, Index classes, Index p) {
  Instance inst;
  inst.s = related_covariances(rng, classes, p);
  draw_penalties(rng, inst);
  return inst;
}

}  // namespace instances
