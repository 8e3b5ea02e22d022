#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "fj/classify.hpp"
#include "fj/graph.hpp"
#include "fj/types.hpp"

namespace fj {

// Immediate dominators of every node reachable from `root`, computed with
// the Cooper-Harvey-Kennedy iteration over reverse postorder. idom[root] ==
// root; unreachable nodes get -1.
inline std::vector<Index> dominator_tree(
    const std::vector<std::vector<Index>>& succ, Index root) {
  const Index n = Index(succ.size());
  std::vector<std::vector<Index>> pred(n);
  for (Index u = 0; u < n; ++u)
    for (Index v : succ[u]) pred[v].push_back(u);

  // Iterative DFS postorder from root.
  std::vector<Index> po_of(n, -1), order;
  {
    std::vector<char> seen(n, 0);
    std::vector<std::pair<Index, size_t>> stack{{root, 0}};
    seen[root] = 1;
    while (!stack.empty()) {
      auto& [v, child] = stack.back();
      if (child < succ[v].size()) {
        const Index w = succ[v][child++];
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back({w, 0});
        }
      } else {
        po_of[v] = Index(order.size());
        order.push_back(v);
        stack.pop_back();
      }
    }
  }

  std::vector<Index> idom(n, -1);
  idom[root] = root;

  auto intersect = [&](Index a, Index b) {
    while (a != b) {
      while (po_of[a] < po_of[b]) a = idom[a];
      while (po_of[b] < po_of[a]) b = idom[b];
    }
    return a;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const Index v = *it;
      if (v == root) continue;
      Index best = -1;
      for (Index p : pred[v]) {
        if (idom[p] == -1) continue;
        best = best == -1 ? p : intersect(best, p);
      }
      if (best != -1 && idom[v] != best) {
        idom[v] = best;
        changed = true;
      }
    }
  }
  return idom;
}

// Persuasion structure of an influence network. The flow graph adds a
// virtual root with an edge to every influential agent, so a node's
// dominators are exactly the agents every influence path into it must
// traverse. An agent is locally topologically persuasive when it sits
// directly under the root and strictly dominates somebody.
struct PersuasionReport {
  Index root = 0;                       // virtual root id (== n)
  std::vector<Index> idom;              // size n + 1
  std::vector<Index> ltp;               // sorted
  std::vector<std::vector<Index>> persuaded;  // aligned with ltp, sorted
  std::vector<Index> residual;          // sorted
};

template <typename Scalar>
PersuasionReport ltp_report(const Digraph<Scalar>& g,
                            const AgentClasses& classes) {
  const Index n = g.n();
  const Index root = n;
  std::vector<std::vector<Index>> succ(n + 1);
  for (Index u = 0; u < n; ++u) succ[u] = g.out_neighbours(u);
  succ[root] = classes.influential;

  PersuasionReport rep;
  rep.root = root;
  rep.idom = dominator_tree(succ, root);

  std::vector<std::vector<Index>> children(n + 1);
  for (Index v = 0; v < n; ++v)
    if (rep.idom[v] != -1 && rep.idom[v] != v)
      children[rep.idom[v]].push_back(v);

  std::vector<char> claimed(n, 0);
  for (Index p : children[root]) {
    // Collect the proper dominator subtree of p; those agents cannot be
    // reached from any influential source without passing through p.
    std::vector<Index> subtree;
    std::vector<Index> stack(children[p]);
    while (!stack.empty()) {
      const Index v = stack.back();
      stack.pop_back();
      subtree.push_back(v);
      for (Index w : children[v]) stack.push_back(w);
    }
    if (subtree.empty()) continue;
    std::sort(subtree.begin(), subtree.end());
    rep.ltp.push_back(p);
    for (Index v : subtree) claimed[v] = 1;
    rep.persuaded.push_back(std::move(subtree));
  }

  // ltp found in root-children order; sort the pairs by agent id.
  std::vector<size_t> perm(rep.ltp.size());
  std::iota(perm.begin(), perm.end(), size_t(0));
  std::sort(perm.begin(), perm.end(),
            [&](size_t a, size_t b) { return rep.ltp[a] < rep.ltp[b]; });
  PersuasionReport sorted = rep;
  for (size_t k = 0; k < perm.size(); ++k) {
    sorted.ltp[k] = rep.ltp[perm[k]];
    sorted.persuaded[k] = rep.persuaded[perm[k]];
  }
  rep.ltp = std::move(sorted.ltp);
  rep.persuaded = std::move(sorted.persuaded);

  for (Index v = 0; v < n; ++v)
    if (!claimed[v] &&
        !std::binary_search(rep.ltp.begin(), rep.ltp.end(), v))
      rep.residual.push_back(v);
  return rep;
}

// p persuades q iff p is a strict dominator of q in the flow graph, i.e. an
// ancestor on q's idom chain below the root.
inline bool persuades(const PersuasionReport& rep, Index p, Index q) {
  if (p == q || p >= rep.root || q >= rep.root) return false;
  for (Index v = rep.idom[q]; v != rep.root && v != -1; v = rep.idom[v])
    if (v == p) return true;
  return false;
}

// Literal check that every simple path from every influential agent to q
// traverses p (endpoints count). Exponential; only for cross-checking small
// graphs.
template <typename Scalar>
bool persuades_oracle(const Digraph<Scalar>& g, const AgentClasses& classes,
                      Index p, Index q) {
  if (g.n() > 14)
    throw InvalidArgument("persuades_oracle is limited to 14 agents");
  if (p == q) return false;

  std::vector<char> on_path(g.n(), 0);
  // Depth-first over simple paths; returns true if some path from v to q
  // avoids p entirely.
  auto avoids = [&](auto&& self, Index v) -> bool {
    if (v == p) return false;
    if (v == q) return true;
    on_path[v] = 1;
    for (Index w : g.out_neighbours(v)) {
      if (on_path[w]) continue;
      if (self(self, w)) {
        on_path[v] = 0;
        return true;
      }
    }
    on_path[v] = 0;
    return false;
  };

  bool found_any = false;
  for (Index s : classes.influential) {
    if (avoids(avoids, s)) return false;
    // Does any s -> q path exist at all (through p or not)?
    if (!found_any) {
      const auto seen = reachable_from(g, {s});
      found_any = seen[q];
    }
  }
  return found_any;
}

}  // namespace fj
