#pragma once

#include <vector>

#include "fj/graph.hpp"
#include "fj/types.hpp"

namespace fj {

template <typename Scalar>
struct AgentProfile {
  Vector<Scalar> beta;
  Vector<Scalar> x0;
};

// Stubborn: beta > 0. Oblivious: never hears from a stubborn agent, even
// indirectly. Influential: the agents whose initial opinions survive into
// the steady state, i.e. the stubborn ones plus every member of an
// independent strongly connected component made up of oblivious agents.
struct AgentClasses {
  std::vector<char> stubborn_mask;
  std::vector<char> oblivious_mask;
  std::vector<char> influential_mask;
  std::vector<Index> stubborn;
  std::vector<Index> oblivious;
  std::vector<Index> influential;
  SccDecomposition scc;
  std::vector<Index> oblivious_iscc_ids;
};

template <typename Scalar>
AgentClasses classify_agents(const Digraph<Scalar>& g,
                             const Vector<Scalar>& beta) {
  const Index n = g.n();
  if (beta.size() != n)
    throw InvalidArgument("beta has " + std::to_string(beta.size()) +
                          " entries for " + std::to_string(n) + " agents");
  if (!is_weakly_connected(g))
    throw InvalidArgument("graph is not weakly connected");
  AgentClasses c;
  c.stubborn_mask.assign(n, 0);
  for (Index i = 0; i < n; ++i) {
    if (beta[i] < Scalar(0) || beta[i] > Scalar(1))
      throw InvalidArgument("beta[" + std::to_string(i) +
                            "] outside [0, 1]");
    if (beta[i] > Scalar(0)) {
      c.stubborn_mask[i] = 1;
      c.stubborn.push_back(i);
    }
  }

  const auto hears_stubborn = reachable_from(g, c.stubborn);
  c.oblivious_mask.assign(n, 0);
  for (Index i = 0; i < n; ++i)
    if (!hears_stubborn[i]) {
      c.oblivious_mask[i] = 1;
      c.oblivious.push_back(i);
    }

  c.scc = scc_decompose(g);
  c.influential_mask = c.stubborn_mask;
  for (Index k = 0; k < Index(c.scc.components.size()); ++k) {
    if (!c.scc.is_independent[k]) continue;
    const auto& members = c.scc.components[k];
    const bool all_oblivious = std::all_of(
        members.begin(), members.end(),
        [&](Index v) { return c.oblivious_mask[v]; });
    if (all_oblivious) {
      c.oblivious_iscc_ids.push_back(k);
      for (Index v : members) c.influential_mask[v] = 1;
    }
  }
  for (Index i = 0; i < n; ++i)
    if (c.influential_mask[i]) c.influential.push_back(i);
  return c;
}

// Influential agents with a path to q (q itself included when influential).
template <typename Scalar>
std::vector<Index> influencers_of(const Digraph<Scalar>& g,
                                  const AgentClasses& classes, Index q) {
  std::vector<char> seen(g.n(), 0);
  std::vector<Index> stack{q};
  seen[q] = 1;
  while (!stack.empty()) {
    const Index v = stack.back();
    stack.pop_back();
    for (Index u : g.in_neighbours(v))
      if (!seen[u]) {
        seen[u] = 1;
        stack.push_back(u);
      }
  }
  std::vector<Index> result;
  for (Index i : classes.influential)
    if (seen[i]) result.push_back(i);
  return result;
}

}  // namespace fj
