#pragma once

// Random instance generators shared by property and acceptance tests. All
// graphs come out weakly connected with every agent listening to somebody.

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "fj/classify.hpp"
#include "fj/graph.hpp"
#include "fj/types.hpp"

namespace testgen {

using fj::Index;

struct Pattern {
  Index n = 0;
  std::vector<std::pair<Index, Index>> edges;  // (from, to)
};

inline Pattern random_connected_pattern(std::mt19937_64& rng, Index n,
                                        double extra_per_node = 1.5) {
  Pattern p;
  p.n = n;
  std::set<std::pair<Index, Index>> used;
  auto add = [&](Index u, Index v) {
    if (used.insert({u, v}).second) p.edges.push_back({u, v});
  };
  // Random tree on the undirected skeleton, each edge randomly oriented.
  for (Index v = 1; v < n; ++v) {
    const Index u =
        Index(std::uniform_int_distribution<std::uint64_t>(0, v - 1)(rng));
    if (rng() & 1)
      add(u, v);
    else
      add(v, u);
  }
  const Index extras = Index(extra_per_node * double(n));
  std::uniform_int_distribution<std::uint64_t> node(0, std::uint64_t(n - 1));
  for (Index k = 0; k < extras; ++k) add(Index(node(rng)), Index(node(rng)));
  // Nobody may end up with an empty row.
  std::vector<Index> indeg(n, 0);
  for (auto& [u, v] : p.edges) ++indeg[v];
  for (Index v = 0; v < n; ++v)
    if (indeg[v] == 0) {
      Index u = Index(node(rng));
      if (u == v) u = (u + 1) % n;
      if (n == 1) u = v;
      add(u, v);
    }
  return p;
}

inline fj::Digraph<double> assign_weights(std::mt19937_64& rng,
                                          const Pattern& p) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  fj::Matrix<double> W = fj::Matrix<double>::Zero(p.n, p.n);
  for (auto& [u, v] : p.edges) W(v, u) = 1.0 - unit(rng);
  for (Index v = 0; v < p.n; ++v) W.row(v) /= W.row(v).sum();
  return fj::Digraph<double>(std::move(W));
}

inline fj::Vector<double> random_x0(std::mt19937_64& rng, Index n) {
  std::uniform_real_distribution<double> span(0.0, 10.0);
  fj::Vector<double> x0(n);
  for (Index i = 0; i < n; ++i) x0[i] = span(rng);
  return x0;
}

// Stubborn set covering every independent component, so nobody is oblivious.
inline fj::Vector<double> beta_no_oblivious(std::mt19937_64& rng,
                                            const fj::Digraph<double>& g,
                                            double lo = 0.05,
                                            double hi = 0.95) {
  std::uniform_real_distribution<double> level(lo, hi);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  fj::Vector<double> beta = fj::Vector<double>::Zero(g.n());
  for (Index i = 0; i < g.n(); ++i)
    if (unit(rng) < 0.3) beta[i] = level(rng);
  const auto scc = fj::scc_decompose(g);
  for (Index c = 0; c < Index(scc.components.size()); ++c) {
    if (!scc.is_independent[c]) continue;
    bool anchored = false;
    for (Index v : scc.components[c]) anchored = anchored || beta[v] > 0;
    if (!anchored) {
      const auto& members = scc.components[c];
      beta[members[std::uniform_int_distribution<std::uint64_t>(
          0, members.size() - 1)(rng)]] = level(rng);
    }
  }
  return beta;
}

struct ObliviousInstance {
  fj::Digraph<double> graph;
  fj::Vector<double> beta;
};

// Graph with a nonempty oblivious region and aperiodic independent
// components: stubbornness (if any) goes only to agents outside independent
// components, and each stubborn-free independent component gets a self-loop.
inline ObliviousInstance random_with_oblivious(std::mt19937_64& rng, Index n,
                                               bool degroot) {
  Pattern p = random_connected_pattern(rng, n);
  std::uniform_real_distribution<double> level(0.05, 0.95);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  fj::Digraph<double> g0 = assign_weights(rng, p);
  const auto scc = fj::scc_decompose(g0);
  std::vector<char> in_iscc(n, 0);
  for (Index c = 0; c < Index(scc.components.size()); ++c)
    if (scc.is_independent[c])
      for (Index v : scc.components[c]) in_iscc[v] = 1;

  fj::Vector<double> beta = fj::Vector<double>::Zero(n);
  if (!degroot)
    for (Index i = 0; i < n; ++i)
      if (!in_iscc[i] && unit(rng) < 0.4) beta[i] = level(rng);

  // Self-loop inside every stubborn-free independent component.
  std::set<std::pair<Index, Index>> used(p.edges.begin(), p.edges.end());
  for (Index c = 0; c < Index(scc.components.size()); ++c) {
    if (!scc.is_independent[c]) continue;
    const auto& members = scc.components[c];
    const Index v = members[std::uniform_int_distribution<std::uint64_t>(
        0, members.size() - 1)(rng)];
    if (used.insert({v, v}).second) p.edges.push_back({v, v});
  }
  return {assign_weights(rng, p), std::move(beta)};
}

// A pure directed cycle as an untouched independent component feeding a
// random downstream part: the cycle's period is its length.
inline ObliviousInstance periodic_instance(std::mt19937_64& rng, Index n,
                                           Index cycle_len) {
  std::uniform_real_distribution<double> level(0.05, 0.95);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Pattern p;
  p.n = n;
  std::set<std::pair<Index, Index>> used;
  auto add = [&](Index u, Index v) {
    if (used.insert({u, v}).second) p.edges.push_back({u, v});
  };
  for (Index i = 0; i < cycle_len; ++i) add(i, (i + 1) % cycle_len);

  std::uniform_int_distribution<std::uint64_t> any(0, std::uint64_t(n - 1));
  for (Index v = cycle_len; v < n; ++v) {
    // Attach to anything already placed; edges never enter the cycle.
    const Index u =
        Index(std::uniform_int_distribution<std::uint64_t>(0, v - 1)(rng));
    add(u, v);
  }
  const Index extras = Index(1.5 * double(n));
  for (Index k = 0; k < extras; ++k) {
    const Index u = Index(any(rng));
    const Index v = Index(any(rng));
    if (v >= cycle_len) add(u, v);
  }
  fj::Vector<double> beta = fj::Vector<double>::Zero(n);
  for (Index i = cycle_len; i < n; ++i)
    if (unit(rng) < 0.4) beta[i] = level(rng);
  return {assign_weights(rng, p), std::move(beta)};
}

}  // namespace testgen
