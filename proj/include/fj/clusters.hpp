#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fj/dynamics.hpp"
#include "fj/graph.hpp"
#include "fj/ltp.hpp"
#include "fj/types.hpp"

namespace fj {

struct ClusterSet {
  // Each block sorted; blocks ordered by first member.
  std::vector<std::vector<Index>> blocks;
  std::string provenance;       // "predicted" or "empirical"
  std::vector<double> values;   // per-block opinion, empirical only
  std::vector<char> claimed;    // predicted only; singletons make no claim
};

inline void canonicalize(ClusterSet& cs) {
  for (auto& b : cs.blocks) std::sort(b.begin(), b.end());
  std::sort(cs.blocks.begin(), cs.blocks.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
}

// Group agents whose steady opinions agree within tol: sort by value and
// split at gaps.
template <typename Scalar>
ClusterSet empirical_clusters(const Vector<Scalar>& x,
                              Scalar tol = Scalar(1e-6)) {
  const Index n = x.size();
  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index(0));
  std::sort(order.begin(), order.end(),
            [&](Index a, Index b) { return x[a] < x[b]; });
  ClusterSet cs;
  cs.provenance = "empirical";
  for (Index k = 0; k < n; ++k) {
    if (k == 0 || x[order[k]] - x[order[k - 1]] > tol)
      cs.blocks.emplace_back();
    cs.blocks.back().push_back(order[k]);
  }
  canonicalize(cs);
  for (const auto& b : cs.blocks) {
    double sum = 0;
    for (Index v : b) sum += double(x[v]);
    cs.values.push_back(sum / double(b.size()));
  }
  return cs;
}

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(Index n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), Index(0));
  }
  Index find(Index x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(Index a, Index b) { parent_[find(a)] = find(b); }

 private:
  std::vector<Index> parent_;
};

}  // namespace detail

// Clusters implied by topology alone: each persuasive agent merges with the
// agents it persuades, and each aperiodic oblivious independent component
// reaches internal consensus. Everything else stays a singleton.
template <typename Scalar>
ClusterSet predicted_clusters(const Digraph<Scalar>& g,
                              const AgentClasses& classes) {
  const Index n = g.n();
  detail::UnionFind uf(n);
  const auto rep = ltp_report(g, classes);
  for (size_t k = 0; k < rep.ltp.size(); ++k)
    for (Index q : rep.persuaded[k]) uf.unite(rep.ltp[k], q);
  for (Index c : classes.oblivious_iscc_ids) {
    const auto& members = classes.scc.components[c];
    if (!is_aperiodic(g, members)) continue;
    for (size_t i = 1; i < members.size(); ++i)
      uf.unite(members[0], members[i]);
  }

  std::vector<std::vector<Index>> by_root(n);
  for (Index i = 0; i < n; ++i) by_root[uf.find(i)].push_back(i);
  ClusterSet cs;
  cs.provenance = "predicted";
  for (auto& b : by_root)
    if (!b.empty()) cs.blocks.push_back(std::move(b));
  canonicalize(cs);
  for (const auto& b : cs.blocks) cs.claimed.push_back(b.size() >= 2);
  return cs;
}

// Every predicted block must land inside a single empirical block.
inline bool verify_refinement(const ClusterSet& predicted,
                              const ClusterSet& empirical, Index n) {
  std::vector<Index> block_of(n, -1);
  for (Index b = 0; b < Index(empirical.blocks.size()); ++b)
    for (Index v : empirical.blocks[b]) block_of[v] = b;
  for (const auto& block : predicted.blocks) {
    for (Index v : block)
      if (v < 0 || v >= n || block_of[v] == -1) return false;
    for (size_t i = 1; i < block.size(); ++i)
      if (block_of[block[i]] != block_of[block[0]]) return false;
  }
  return true;
}

struct TrialReport {
  Index passed = 0;
  Index total = 0;
  Index first_failure = -1;
};

namespace detail {

inline std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{seed, trial};
  return std::mt19937_64(seq);
}

}  // namespace detail

// Redraws weights, stubbornness values and initial opinions over the fixed
// zero pattern and checks that the topological clustering still refines the
// observed one. Stubbornness is kept away from zero so the fixed point stays
// well conditioned.
template <typename Scalar>
TrialReport robustness_trials(const Digraph<Scalar>& g,
                              const Vector<Scalar>& beta, Index trials,
                              std::uint64_t seed,
                              Scalar group_tol = Scalar(1e-6)) {
  const Index n = g.n();
  const auto classes = classify_agents(g, beta);
  const ClusterSet predicted = predicted_clusters(g, classes);

  TrialReport rep;
  rep.total = trials;
  for (Index t = 0; t < trials; ++t) {
    auto rng = detail::trial_rng(seed, std::uint64_t(t));
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    Matrix<Scalar> W = Matrix<Scalar>::Zero(n, n);
    for (Index v = 0; v < n; ++v) {
      for (Index u : g.in_neighbours(v)) W(v, u) = Scalar(1.0 - unit(rng));
      W.row(v) /= W.row(v).sum();
    }
    Vector<Scalar> b = Vector<Scalar>::Zero(n);
    for (Index i = 0; i < n; ++i)
      if (beta[i] > Scalar(0))
        b[i] = std::max(Scalar(1e-3), Scalar(unit(rng)));
    Vector<Scalar> x0(n);
    for (Index i = 0; i < n; ++i) x0[i] = Scalar(10.0 * unit(rng));

    const Digraph<Scalar> gt(W);
    const auto st = steady_state(gt, AgentProfile<Scalar>{b, x0});
    const auto emp = empirical_clusters(st.x_star, group_tol);
    if (verify_refinement(predicted, emp, n)) {
      ++rep.passed;
    } else if (rep.first_failure == -1) {
      rep.first_failure = t;
    }
  }
  return rep;
}

}  // namespace fj
