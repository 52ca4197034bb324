#include "jgl/screening.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "jgl/errors.hpp"
#include "jgl/rng.hpp"

namespace jgl {

Partition Partition::from_labels(std::span<const Index> labels) {
  if (labels.empty()) throw InputError("Partition: empty variable set");
  const Index p = labels.size();
  // First occurrence of a label is the smallest member of its component.
  std::vector<std::pair<Index, Index>> first;  // (label, min index)
  Partition out;
  out.label_.resize(p);
  std::vector<Index> order(p);
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return labels[a] < labels[b]; });
  for (Index r = 0; r < p;) {
    Index e = r;
    Index lo = order[r];
    while (e < p && labels[order[e]] == labels[order[r]]) {
      lo = std::min(lo, order[e]);
      ++e;
    }
    for (Index t = r; t < e; ++t) out.label_[order[t]] = lo;
    r = e;
  }
  std::vector<Index> slot(p, p);
  for (Index v = 0; v < p; ++v) {
    Index id = out.label_[v];
    if (slot[id] == p) {
      slot[id] = out.components_.size();
      out.components_.emplace_back();
    }
    out.components_[slot[id]].push_back(v);
  }
  return out;
}

Partition Partition::from_components(Index p, std::vector<IndexList> components) {
  if (p == 0) throw InputError("Partition: empty variable set");
  IndexList labels(p, p);
  for (Index c = 0; c < components.size(); ++c) {
    if (components[c].empty()) throw InputError("Partition: empty component");
    for (Index v : components[c]) {
      if (v >= p)
        throw InputError("Partition: variable " + std::to_string(v) +
                         " out of range for p=" + std::to_string(p));
      if (labels[v] != p)
        throw InputError("Partition: variable " + std::to_string(v) +
                         " appears in two components");
      labels[v] = c;
    }
  }
  for (Index v = 0; v < p; ++v)
    if (labels[v] == p)
      throw InputError("Partition: variable " + std::to_string(v) +
                       " is not covered");
  return from_labels(labels);
}

Partition Partition::singletons(Index p) {
  IndexList labels(p);
  std::iota(labels.begin(), labels.end(), Index{0});
  return from_labels(labels);
}

Partition Partition::whole(Index p) { return from_labels(IndexList(p, 0)); }

BinaryMatrix::BinaryMatrix(Index p, bool off_diagonal)
    : p_(p), bits_(p * p, off_diagonal ? 1 : 0) {
  for (Index i = 0; i < p; ++i) bits_[i * p + i] = 1;
}

void BinaryMatrix::set(Index i, Index j, bool v) {
  if (i == j) return;
  bits_[i * p_ + j] = v;
  bits_[j * p_ + i] = v;
}

UnionFind::UnionFind(Index n) : parent_(n), rank_(n, 0) {
  std::iota(parent_.begin(), parent_.end(), Index{0});
}

Index UnionFind::find(Index v) {
  Index root = v;
  while (parent_[root] != root) root = parent_[root];
  while (parent_[v] != root) {
    Index next = parent_[v];
    parent_[v] = root;
    v = next;
  }
  return root;
}

bool UnionFind::unite(Index a, Index b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (rank_[a] < rank_[b]) std::swap(a, b);
  parent_[b] = a;
  if (rank_[a] == rank_[b]) ++rank_[a];
  return true;
}

Partition UnionFind::to_partition() {
  IndexList labels(parent_.size());
  for (Index v = 0; v < labels.size(); ++v) labels[v] = find(v);
  return Partition::from_labels(labels);
}

std::string to_string(ScreenMode mode) {
  switch (mode) {
    case ScreenMode::none: return "none";
    case ScreenMode::global: return "global";
    case ScreenMode::local: return "local";
    case ScreenMode::hybrid: return "hybrid";
  }
  return "unknown";
}

ScreenMode parse_screen_mode(const std::string& name) {
  if (name == "none") return ScreenMode::none;
  if (name == "global") return ScreenMode::global;
  if (name == "local") return ScreenMode::local;
  if (name == "hybrid") return ScreenMode::hybrid;
  throw InputError("unknown screening mode '" + name + "'");
}

double excess_sum_sq(const CovarianceSet& s, Index i, Index j, double lambda1) {
  double sum = 0.0;
  for (const SymMatrix& sk : s) {
    double e = std::abs(sk(i, j)) - lambda1;
    if (e > 0.0) sum += e * e;
  }
  return sum;
}

namespace {

void check_lambdas(double lambda1, double lambda2) {
  if (!(lambda1 >= 0.0) || !(lambda2 >= 0.0))
    throw InputError("penalty weights must be finite and non-negative");
}

Partition components_of_graph(Index p, auto&& has_edge) {
  UnionFind uf(p);
  for (Index j = 0; j < p; ++j)
    for (Index i = j + 1; i < p; ++i)
      if (has_edge(i, j)) uf.unite(i, j);
  return uf.to_partition();
}

BinaryMatrix block_complete(const Partition& part) {
  BinaryMatrix out(part.dim());
  for (const IndexList& comp : part.components())
    for (Index a = 0; a < comp.size(); ++a)
      for (Index b = a + 1; b < comp.size(); ++b) out.set(comp[a], comp[b], true);
  return out;
}

}  // namespace

IndicatorSet initial_indicators(const CovarianceSet& s, double lambda1,
                                double lambda2) {
  check_lambdas(lambda1, lambda2);
  const Index p = common_dimension(s);
  const Index classes = s.size();
  IndicatorSet out(classes, BinaryMatrix(p, true));
  const double bound = lambda2 * lambda2;
  for (Index j = 0; j < p; ++j) {
    for (Index i = j + 1; i < p; ++i) {
      if (excess_sum_sq(s, i, j, lambda1) <= bound) {
        for (Index k = 0; k < classes; ++k) out[k].set(i, j, false);
        continue;
      }
      for (Index k = 0; k < classes; ++k)
        if (std::abs(s[k](i, j)) <= lambda1) out[k].set(i, j, false);
    }
  }
  return out;
}

Partition connected_components(const BinaryMatrix& indicator) {
  return components_of_graph(indicator.dim(),
                             [&](Index i, Index j) { return indicator(i, j); });
}

IndicatorSet close_within_components(const IndicatorSet& indicators) {
  IndicatorSet out;
  out.reserve(indicators.size());
  for (const BinaryMatrix& ik : indicators)
    out.push_back(block_complete(connected_components(ik)));
  return out;
}

IndicatorSet repair_loop(const CovarianceSet& s, const IndicatorSet& indicators,
                         double lambda1, std::optional<std::uint64_t> shuffle_seed) {
  const Index p = common_dimension(s);
  const Index classes = s.size();
  if (indicators.size() != classes)
    throw InputError("repair_loop: indicator count does not match class count");

  std::vector<UnionFind> groups;
  groups.reserve(classes);
  for (const BinaryMatrix& ik : indicators) {
    if (ik.dim() != p) throw InputError("repair_loop: indicator dimension mismatch");
    UnionFind uf(p);
    const Partition part = connected_components(ik);
    for (const IndexList& comp : part.components())
      for (Index v : comp) uf.unite(comp.front(), v);
    groups.push_back(std::move(uf));
  }

  // Only positions with |S^x_ij| > λ1 can ever form a violating triple.
  struct Triple {
    Index x, i, j;
  };
  std::vector<Triple> candidates;
  for (Index x = 0; x < classes; ++x)
    for (Index i = 0; i < p; ++i)
      for (Index j = i + 1; j < p; ++j)
        if (std::abs(s[x](i, j)) > lambda1) candidates.push_back({x, i, j});
  if (shuffle_seed) {
    Rng rng(*shuffle_seed);
    rng.shuffle(candidates);
  }

  // Merges only ever turn indicators on, so a violating triple stays violating
  // until it is merged: repeated sweeps reach the same fixpoint as restarting
  // after every merge.
  bool merged = true;
  while (merged) {
    merged = false;
    for (const Triple& t : candidates) {
      UnionFind& own = groups[t.x];
      if (own.find(t.i) == own.find(t.j)) continue;
      for (Index other = 0; other < classes; ++other) {
        if (other == t.x) continue;
        if (groups[other].find(t.i) == groups[other].find(t.j)) {
          own.unite(t.i, t.j);
          merged = true;
          break;
        }
      }
    }
  }

  IndicatorSet out;
  out.reserve(classes);
  for (UnionFind& uf : groups) out.push_back(block_complete(uf.to_partition()));
  return out;
}

PartitionFamily hybrid_screen(const CovarianceSet& s, double lambda1,
                              double lambda2,
                              std::optional<std::uint64_t> shuffle_seed) {
  IndicatorSet closed =
      close_within_components(initial_indicators(s, lambda1, lambda2));
  IndicatorSet repaired = repair_loop(s, closed, lambda1, shuffle_seed);
  PartitionFamily out;
  out.reserve(repaired.size());
  for (const BinaryMatrix& ik : repaired) out.push_back(connected_components(ik));
  return out;
}

PartitionFamily global_screen(const CovarianceSet& s, double lambda1,
                              double lambda2) {
  check_lambdas(lambda1, lambda2);
  const Index p = common_dimension(s);
  const double bound = lambda2 * lambda2;
  Partition shared = components_of_graph(p, [&](Index i, Index j) {
    return excess_sum_sq(s, i, j, lambda1) > bound;
  });
  return PartitionFamily(s.size(), shared);
}

PartitionFamily local_screen(const CovarianceSet& s, double lambda1) {
  check_lambdas(lambda1, 0.0);
  const Index p = common_dimension(s);
  PartitionFamily out;
  out.reserve(s.size());
  for (const SymMatrix& sk : s)
    out.push_back(components_of_graph(
        p, [&](Index i, Index j) { return std::abs(sk(i, j)) > lambda1; }));
  return out;
}

PartitionFamily screen(const CovarianceSet& s, double lambda1, double lambda2,
                       ScreenMode mode) {
  switch (mode) {
    case ScreenMode::none:
      check_lambdas(lambda1, lambda2);
      return PartitionFamily(s.size(), Partition::whole(common_dimension(s)));
    case ScreenMode::global: return global_screen(s, lambda1, lambda2);
    case ScreenMode::local: return local_screen(s, lambda1);
    case ScreenMode::hybrid: return hybrid_screen(s, lambda1, lambda2);
  }
  throw InputError("unknown screening mode");
}

bool refines(const Partition& a, const Partition& b) {
  if (a.dim() != b.dim())
    throw InputError("refines: partitions over different variable counts (" +
                     std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) +
                     ")");
  for (const IndexList& comp : a.components())
    for (Index v : comp)
      if (!b.same(comp.front(), v)) return false;
  return true;
}

Partition mix_partition(const PartitionFamily& family) {
  if (family.empty()) throw InputError("mix_partition: empty family");
  const Index p = family.front().dim();
  check_family(family, p);
  UnionFind uf(p);
  for (const Partition& part : family)
    for (const IndexList& comp : part.components())
      for (Index v : comp) uf.unite(comp.front(), v);
  return uf.to_partition();
}

std::uint64_t complexity_estimate(const Partition& partition) {
  std::uint64_t total = 0;
  for (const IndexList& comp : partition.components()) {
    const std::uint64_t m = comp.size();
    total += m * m * m;
  }
  return total;
}

IndicatorSet indicators_from_family(const PartitionFamily& family) {
  IndicatorSet out;
  out.reserve(family.size());
  for (const Partition& part : family) out.push_back(block_complete(part));
  return out;
}

void check_family(const PartitionFamily& family, Index p) {
  if (family.empty()) throw InputError("partition family is empty");
  for (Index k = 0; k < family.size(); ++k)
    if (family[k].dim() != p)
      throw InputError("partition for class " + std::to_string(k) + " covers " +
                       std::to_string(family[k].dim()) + " variables, expected " +
                       std::to_string(p));
}

}  // namespace jgl
