#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fj/classify.hpp"
#include "fj/clusters.hpp"
#include "fj/graph.hpp"
#include "fj/ltp.hpp"
#include "fj/types.hpp"

namespace fj {

// A prescribed clustering. Block k either carries a designated persuasive
// agent (designated[k] is a member) or is a consensus block
// (designated[k] == -1) to be realized as an aperiodic independent component
// of non-stubborn agents.
struct DesignSpec {
  std::vector<std::vector<Index>> blocks;
  std::vector<Index> designated;
  std::vector<Index> stubborn;
  std::uint64_t seed = 0;
  double density = 0.3;
};

template <typename Scalar>
struct SynthesisResult {
  Digraph<Scalar> graph;
  Vector<Scalar> beta;
  Vector<Scalar> x0;
};

namespace detail {

struct DesignShape {
  Index n = 0;
  std::vector<Index> consensus;  // block ids, spec order
  std::vector<Index> anchored;   // designated agent is stubborn
  std::vector<Index> free;       // designated agent is not stubborn
  std::vector<char> stubborn_mask;
};

inline DesignShape check_design(const DesignSpec& spec) {
  DesignShape s;
  const Index B = Index(spec.blocks.size());
  if (B == 0) throw InfeasibleDesignError("design has no blocks");
  if (Index(spec.designated.size()) != B)
    throw InfeasibleDesignError("one designated entry required per block");

  for (const auto& block : spec.blocks) {
    if (block.empty()) throw InfeasibleDesignError("empty block");
    s.n += Index(block.size());
  }
  std::vector<char> seen(s.n, 0);
  for (const auto& block : spec.blocks)
    for (Index v : block) {
      if (v < 0 || v >= s.n)
        throw InfeasibleDesignError("blocks must partition 0..n-1");
      if (seen[v]) throw InfeasibleDesignError("agent listed twice");
      seen[v] = 1;
    }

  s.stubborn_mask.assign(s.n, 0);
  for (Index v : spec.stubborn) {
    if (v < 0 || v >= s.n)
      throw InfeasibleDesignError("stubborn agent out of range");
    s.stubborn_mask[v] = 1;
  }

  for (Index b = 0; b < B; ++b) {
    const Index d = spec.designated[b];
    if (d == -1) {
      for (Index v : spec.blocks[b])
        if (s.stubborn_mask[v])
          throw InfeasibleDesignError(
              "consensus block cannot contain a stubborn agent");
      s.consensus.push_back(b);
      continue;
    }
    if (std::find(spec.blocks[b].begin(), spec.blocks[b].end(), d) ==
        spec.blocks[b].end())
      throw InfeasibleDesignError("designated agent not in its block");
    for (Index v : spec.blocks[b])
      if (s.stubborn_mask[v] && v != d)
        throw InfeasibleDesignError(
            "stubborn agent must be its block's designated agent");
    (s.stubborn_mask[d] ? s.anchored : s.free).push_back(b);
  }

  const Index K = Index(s.consensus.size());
  const Index S = Index(s.anchored.size());
  const Index F = Index(s.free.size());
  if (K + S < 1)
    throw InfeasibleDesignError(
        "no influence source: need a stubborn or consensus block");
  if (K >= 2 && S + F < 1)
    throw InfeasibleDesignError(
        "two consensus blocks cannot be connected without another block");
  if (F >= 1) {
    bool wide_consensus = false;
    for (Index b : s.consensus)
      if (spec.blocks[b].size() >= 2) wide_consensus = true;
    if (K + S < 2 && !wide_consensus)
      throw InfeasibleDesignError(
          "a free block needs two independent influence channels");
  }
  return s;
}

}  // namespace detail

// Builds a weakly connected network whose topological clustering is exactly
// spec.blocks. Consensus blocks become independent cycles (plus a self-loop
// for aperiodicity) that nothing points into. Other blocks grow an
// arborescence out of their designated agent, and every edge crossing into
// a block lands on that agent, so it alone relays outside influence. A free
// block's agent takes its two mandatory in-edges from distinct earlier
// blocks (or two members of one consensus block), which pins its sole
// strict dominator at the virtual root.
template <typename Scalar = double>
SynthesisResult<Scalar> synthesize(const DesignSpec& spec) {
  const auto shape = detail::check_design(spec);
  const Index n = shape.n;
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto pick = [&](Index bound) {
    return Index(std::uniform_int_distribution<std::uint64_t>(
        0, std::uint64_t(bound - 1))(rng));
  };
  auto pick_member = [&](const std::vector<Index>& v) {
    return v[pick(Index(v.size()))];
  };

  std::vector<Index> order = shape.consensus;
  order.insert(order.end(), shape.anchored.begin(), shape.anchored.end());
  order.insert(order.end(), shape.free.begin(), shape.free.end());
  const Index B = Index(order.size());

  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  std::vector<Edge<Scalar>> edges;
  auto add_edge = [&](Index u, Index v) {
    if (!adj[u][v]) {
      adj[u][v] = 1;
      edges.push_back({u, v, Scalar(1)});
    }
  };

  for (Index pos = 0; pos < B; ++pos) {
    const Index b = order[pos];
    std::vector<Index> members = spec.blocks[b];
    const Index d = spec.designated[b];

    if (d == -1) {
      std::shuffle(members.begin(), members.end(), rng);
      const Index m = Index(members.size());
      if (m == 1) {
        add_edge(members[0], members[0]);
      } else {
        for (Index i = 0; i < m; ++i)
          add_edge(members[i], members[(i + 1) % m]);
        const Index s = members[pick(m)];  // self-loop kills periodicity
        add_edge(s, s);
      }
    } else {
      // Arborescence away from the designated agent.
      std::vector<Index> placed{d};
      std::vector<Index> rest;
      for (Index v : members)
        if (v != d) rest.push_back(v);
      std::shuffle(rest.begin(), rest.end(), rng);
      for (Index v : rest) {
        add_edge(pick_member(placed), v);
        placed.push_back(v);
      }
      // Mandatory cross in-edges.
      if (shape.stubborn_mask[d]) {
        if (pos > 0) {
          const Index a = order[pick(pos)];
          add_edge(pick_member(spec.blocks[a]), d);
        }
      } else {
        // Two independent channels.
        if (pos >= 2) {
          Index a1 = pick(pos), a2 = pick(pos);
          while (a2 == a1) a2 = pick(pos);
          add_edge(pick_member(spec.blocks[order[a1]]), d);
          add_edge(pick_member(spec.blocks[order[a2]]), d);
        } else {
          const auto& src = spec.blocks[order[0]];
          Index u1 = pick_member(src), u2 = pick_member(src);
          while (u2 == u1) u2 = pick_member(src);
          add_edge(u1, d);
          add_edge(u2, d);
        }
      }
    }
    // Density extras inside the block.
    for (Index u : members)
      for (Index v : members)
        if (u != v && unit(rng) < spec.density) add_edge(u, v);
  }

  // Keep consensus blocks attached: each one points at some later block's
  // designated agent.
  for (Index pos = 0; pos < B; ++pos) {
    const Index b = order[pos];
    if (spec.designated[b] != -1) continue;
    std::vector<Index> targets;
    for (Index q = pos + 1; q < B; ++q)
      if (spec.designated[order[q]] != -1) targets.push_back(order[q]);
    if (!targets.empty()) {
      const Index tb = targets[pick(Index(targets.size()))];
      add_edge(pick_member(spec.blocks[b]), spec.designated[tb]);
    }
  }

  // Density extras across blocks, always landing on designated agents.
  for (Index pa = 0; pa < B; ++pa)
    for (Index pb = pa + 1; pb < B; ++pb) {
      const Index tb = order[pb];
      if (spec.designated[tb] == -1) continue;
      if (unit(rng) < spec.density)
        add_edge(pick_member(spec.blocks[order[pa]]), spec.designated[tb]);
    }

  // Self-loop for anyone left without input (the very first anchored agent).
  std::vector<Index> indeg(n, 0);
  for (const auto& e : edges) ++indeg[e.to];
  for (Index v = 0; v < n; ++v)
    if (indeg[v] == 0) add_edge(v, v);

  for (auto& e : edges) e.w = Scalar(1.0 - unit(rng));
  Matrix<Scalar> W = Matrix<Scalar>::Zero(n, n);
  for (const auto& e : edges) W(e.to, e.from) = e.w;
  for (Index v = 0; v < n; ++v) W.row(v) /= W.row(v).sum();

  SynthesisResult<Scalar> out;
  out.graph = Digraph<Scalar>(std::move(W));
  out.beta = Vector<Scalar>::Zero(n);
  for (Index v : spec.stubborn)
    out.beta[v] = Scalar(0.05 + 0.9 * unit(rng));
  out.x0.resize(n);
  for (Index v = 0; v < n; ++v) out.x0[v] = Scalar(10.0 * unit(rng));
  return out;
}

// Strict audit of a synthesized network against its design. Returns the list
// of violations; empty means the network realizes the design exactly.
template <typename Scalar>
std::vector<std::string> validate_design(const Digraph<Scalar>& g,
                                         const Vector<Scalar>& beta,
                                         const DesignSpec& spec) {
  std::vector<std::string> bad;
  if (!is_weakly_connected(g)) {
    bad.push_back("graph is not weakly connected");
    return bad;
  }

  const auto classes = classify_agents(g, beta);
  const auto rep = ltp_report(g, classes);

  std::vector<std::vector<Index>> want;
  std::vector<Index> expected_ltp;
  for (size_t b = 0; b < spec.blocks.size(); ++b) {
    auto block = spec.blocks[b];
    std::sort(block.begin(), block.end());
    const Index d = spec.designated[b];
    if (d == -1) {
      bool matched = false;
      for (Index c : classes.oblivious_iscc_ids)
        if (classes.scc.components[c] == block &&
            is_aperiodic(g, classes.scc.components[c]))
          matched = true;
      if (!matched)
        bad.push_back("block " + std::to_string(b) +
                      " is not an aperiodic oblivious independent component");
    } else if (block.size() >= 2) {
      expected_ltp.push_back(d);
      const auto it = std::find(rep.ltp.begin(), rep.ltp.end(), d);
      if (it == rep.ltp.end()) {
        bad.push_back("agent " + std::to_string(d) + " is not persuasive");
      } else {
        auto persuaded = rep.persuaded[it - rep.ltp.begin()];
        persuaded.push_back(d);
        std::sort(persuaded.begin(), persuaded.end());
        if (persuaded != block)
          bad.push_back("agent " + std::to_string(d) +
                        " persuades the wrong set");
      }
    }
    want.push_back(std::move(block));
  }

  std::sort(expected_ltp.begin(), expected_ltp.end());
  if (rep.ltp != expected_ltp)
    bad.push_back("persuasive agents differ from the designated ones");

  ClusterSet predicted = predicted_clusters(g, classes);
  std::sort(want.begin(), want.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  if (predicted.blocks != want)
    bad.push_back("topological clustering differs from the design blocks");
  return bad;
}

}  // namespace fj
