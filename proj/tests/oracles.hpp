#pragma once
// Test-only reference computations. Each one is written against the
// defining formula and shares no code path with the library routine it checks.

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "jgl/matrix.hpp"
#include "jgl/rng.hpp"
#include "jgl/screening.hpp"

namespace oracle {

using jgl::Index;

// S_ij = (1/n) Σ_t (x_ti − mean_i)(x_tj − mean_j), plain loops.
inline Eigen::MatrixXd covariance(const Eigen::MatrixXd& x) {
  const auto n = x.rows(), p = x.cols();
  std::vector<double> mean(p, 0.0);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index t = 0; t < n; ++t) mean[i] += x(t, i);
    mean[i] /= static_cast<double>(n);
  }
  Eigen::MatrixXd s(p, p);
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < p; ++j) {
      double acc = 0.0;
      for (Eigen::Index t = 0; t < n; ++t) acc += (x(t, i) - mean[i]) * (x(t, j) - mean[j]);
      s(i, j) = acc / static_cast<double>(n);
    }
  return s;
}

// Minimizer of ½‖y − a‖² + l1 Σ|y_k| + l2 ‖y‖₂ by damped Newton on a smoothed
// objective (|t| ≈ sqrt(t² + ε²)) with ε driven down to 1e-16.
inline std::vector<double> prox_numeric(const std::vector<double>& a, double l1, double l2) {
  const int k = static_cast<int>(a.size());
  Eigen::VectorXd av = Eigen::Map<const Eigen::VectorXd>(a.data(), k);
  Eigen::VectorXd y = av;
  auto value = [&](const Eigen::VectorXd& v, double eps) {
    double f = 0.5 * (v - av).squaredNorm();
    for (int i = 0; i < k; ++i) f += l1 * std::sqrt(v(i) * v(i) + eps * eps);
    f += l2 * std::sqrt(v.squaredNorm() + eps * eps);
    return f;
  };
  for (double eps = 1.0; eps >= 1e-16; eps /= 10.0) {
    for (int step = 0; step < 200; ++step) {
      const double nrm = std::sqrt(y.squaredNorm() + eps * eps);
      Eigen::VectorXd g = y - av + (l2 / nrm) * y;
      Eigen::MatrixXd h = Eigen::MatrixXd::Identity(k, k) +
                          (l2 / nrm) * Eigen::MatrixXd::Identity(k, k) -
                          (l2 / (nrm * nrm * nrm)) * y * y.transpose();
      for (int i = 0; i < k; ++i) {
        const double r = std::sqrt(y(i) * y(i) + eps * eps);
        g(i) += l1 * y(i) / r;
        h(i, i) += l1 * eps * eps / (r * r * r);
      }
      Eigen::VectorXd dir = -h.ldlt().solve(g);
      double t = 1.0;
      const double f0 = value(y, eps);
      while (t > 1e-20 && value(y + t * dir, eps) > f0 + 1e-4 * t * g.dot(dir)) t *= 0.5;
      y += t * dir;
      if ((t * dir).norm() < 1e-18) break;
    }
  }
  return std::vector<double>(y.data(), y.data() + k);
}

// Direct evaluation of the joint objective with LU log-determinant.
inline double objective(const std::vector<Eigen::MatrixXd>& s,
                        const std::vector<Eigen::MatrixXd>& theta, double l1, double l2) {
  double f = 0.0;
  const auto p = theta.front().rows();
  for (std::size_t k = 0; k < s.size(); ++k) {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(theta[k]);
    double logdet = 0.0;
    for (Eigen::Index i = 0; i < p; ++i) logdet += std::log(std::abs(lu.matrixLU()(i, i)));
    double tr = 0.0;
    for (Eigen::Index i = 0; i < p; ++i)
      for (Eigen::Index j = 0; j < p; ++j) tr += s[k](i, j) * theta[k](j, i);
    f += -logdet + tr;
    for (Eigen::Index i = 0; i < p; ++i)
      for (Eigen::Index j = 0; j < p; ++j)
        if (i != j) f += l1 * std::abs(theta[k](i, j));
  }
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = i + 1; j < p; ++j) {
      double sq = 0.0;
      for (const auto& t : theta) sq += t(i, j) * t(i, j);
      f += 2.0 * l2 * std::sqrt(sq);
    }
  return f;
}

// Reachability by Warshall's transitive closure; returns reach[i][j].
inline std::vector<std::vector<bool>> reachability(const std::vector<std::vector<bool>>& adj) {
  const std::size_t p = adj.size();
  auto reach = adj;
  for (std::size_t i = 0; i < p; ++i) reach[i][i] = true;
  for (std::size_t m = 0; m < p; ++m)
    for (std::size_t i = 0; i < p; ++i)
      if (reach[i][m])
        for (std::size_t j = 0; j < p; ++j)
          if (reach[m][j]) reach[i][j] = true;
  return reach;
}

// Sufficient-condition check evaluated literally from "same group" labels.
inline bool sufficient_holds(const std::vector<Eigen::MatrixXd>& s,
                             const std::vector<std::vector<int>>& labels, double l1,
                             double l2) {
  const std::size_t classes = s.size();
  const std::size_t p = labels.front().size();
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j) {
      bool all_zero = true, any_one = false;
      for (std::size_t k = 0; k < classes; ++k) {
        bool same = labels[k][i] == labels[k][j];
        all_zero = all_zero && !same;
        any_one = any_one || same;
      }
      if (all_zero) {
        double sum = 0.0;
        for (std::size_t k = 0; k < classes; ++k) {
          double e = std::max(0.0, std::abs(s[k](i, j)) - l1);
          sum += e * e;
        }
        if (sum > l2 * l2) return false;
      }
      for (std::size_t k = 0; k < classes; ++k) {
        bool sep = labels[k][i] != labels[k][j];
        if (sep && any_one && std::abs(s[k](i, j)) > l1) return false;
      }
    }
  return true;
}

// All set partitions of {0..p-1} as restricted growth strings.
inline std::vector<std::vector<int>> all_partitions(int p) {
  std::vector<std::vector<int>> out;
  std::vector<int> rgs(p, 0);
  std::function<void(int, int)> rec = [&](int pos, int max_label) {
    if (pos == p) {
      out.push_back(rgs);
      return;
    }
    for (int l = 0; l <= max_label + 1; ++l) {
      rgs[pos] = l;
      rec(pos + 1, std::max(max_label, l));
    }
  };
  rgs[0] = 0;
  rec(1, 0);
  return out;
}

// Random symmetric positive definite matrix with spread eigenvalues.
inline Eigen::MatrixXd random_spd(jgl::Rng& rng, Index p, double min_eig = 0.5) {
  Eigen::MatrixXd a(p, p);
  for (Index i = 0; i < p; ++i)
    for (Index j = 0; j < p; ++j) a(i, j) = rng.normal();
  Eigen::MatrixXd m = a * a.transpose() / static_cast<double>(p);
  m.diagonal().array() += min_eig;
  return 0.5 * (m + m.transpose());
}

inline Eigen::MatrixXd random_symmetric(jgl::Rng& rng, Index p, double scale = 1.0) {
  Eigen::MatrixXd a(p, p);
  for (Index i = 0; i < p; ++i)
    for (Index j = 0; j <= i; ++j) a(i, j) = a(j, i) = scale * rng.normal();
  return a;
}

}  // namespace oracle
