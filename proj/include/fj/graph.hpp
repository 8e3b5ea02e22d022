#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "fj/types.hpp"

namespace fj {

template <typename Scalar>
struct Edge {
  Index from = 0;
  Index to = 0;
  Scalar w = Scalar(0);
};

// Weighted digraph of an influence network. The edge (u, v, w) states that
// agent u influences agent v with weight w, stored as W(v, u) = w, so row v
// of W holds the weights agent v places on the opinions it listens to.
template <typename Scalar>
class Digraph {
 public:
  Digraph() = default;

  explicit Digraph(Matrix<Scalar> W) : W_(std::move(W)) {
    rebuild_adjacency();
  }

  Index n() const { return W_.rows(); }
  const Matrix<Scalar>& W() const { return W_; }

  // Agents u influences: {v : W(v, u) > 0}.
  const std::vector<Index>& out_neighbours(Index u) const { return out_[u]; }
  // Agents v listens to: {u : W(v, u) > 0}.
  const std::vector<Index>& in_neighbours(Index v) const { return in_[v]; }

  bool has_edge(Index u, Index v) const { return W_(v, u) > Scalar(0); }

 private:
  void rebuild_adjacency() {
    const Index n = W_.rows();
    out_.assign(n, {});
    in_.assign(n, {});
    for (Index v = 0; v < n; ++v)
      for (Index u = 0; u < n; ++u)
        if (W_(v, u) > Scalar(0)) {
          out_[u].push_back(v);
          in_[v].push_back(u);
        }
  }

  Matrix<Scalar> W_;
  std::vector<std::vector<Index>> out_;
  std::vector<std::vector<Index>> in_;
};

template <typename Scalar>
Digraph<Scalar> build_digraph(Index n, const std::vector<Edge<Scalar>>& edges) {
  if (n <= 0) throw InvalidArgument("graph must have at least one agent");
  Matrix<Scalar> W = Matrix<Scalar>::Zero(n, n);
  for (const auto& e : edges) {
    if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n)
      throw InvalidArgument("edge endpoint out of range: " +
                            std::to_string(e.from) + " -> " +
                            std::to_string(e.to));
    if (!(e.w > Scalar(0)))
      throw InvalidArgument("edge weight must be positive: " +
                            std::to_string(e.from) + " -> " +
                            std::to_string(e.to));
    if (W(e.to, e.from) != Scalar(0))
      throw InvalidArgument("duplicate edge: " + std::to_string(e.from) +
                            " -> " + std::to_string(e.to));
    W(e.to, e.from) = e.w;
  }
  for (Index v = 0; v < n; ++v)
    if (W.row(v).sum() == Scalar(0))
      throw InvalidArgument("agent " + std::to_string(v) +
                            " listens to nobody (zero row)");
  return Digraph<Scalar>(std::move(W));
}

// Rows whose weights do not sum to 1 within tol, with their deviations.
template <typename Scalar>
std::vector<std::pair<Index, Scalar>> validate_row_stochastic(
    const Digraph<Scalar>& g, Scalar tol = Scalar(1e-9)) {
  std::vector<std::pair<Index, Scalar>> bad;
  for (Index v = 0; v < g.n(); ++v) {
    const Scalar dev = g.W().row(v).sum() - Scalar(1);
    if (std::abs(dev) > tol) bad.emplace_back(v, dev);
  }
  return bad;
}

template <typename Scalar>
void require_row_stochastic(const Digraph<Scalar>& g,
                            Scalar tol = Scalar(1e-9)) {
  const auto bad = validate_row_stochastic(g, tol);
  if (!bad.empty())
    throw InvalidArgument("row " + std::to_string(bad.front().first) +
                          " is not stochastic (deviation " +
                          std::to_string(double(bad.front().second)) + ")");
}

// Mask of nodes reachable from `sources` along influence edges; sources
// themselves are marked reachable.
template <typename Scalar>
std::vector<char> reachable_from(const Digraph<Scalar>& g,
                                 const std::vector<Index>& sources) {
  std::vector<char> seen(g.n(), 0);
  std::vector<Index> stack;
  for (Index s : sources)
    if (!seen[s]) {
      seen[s] = 1;
      stack.push_back(s);
    }
  while (!stack.empty()) {
    const Index u = stack.back();
    stack.pop_back();
    for (Index v : g.out_neighbours(u))
      if (!seen[v]) {
        seen[v] = 1;
        stack.push_back(v);
      }
  }
  return seen;
}

template <typename Scalar>
bool is_weakly_connected(const Digraph<Scalar>& g) {
  const Index n = g.n();
  if (n == 0) return false;
  std::vector<char> seen(n, 0);
  std::vector<Index> stack{0};
  seen[0] = 1;
  Index count = 1;
  while (!stack.empty()) {
    const Index u = stack.back();
    stack.pop_back();
    auto visit = [&](Index v) {
      if (!seen[v]) {
        seen[v] = 1;
        ++count;
        stack.push_back(v);
      }
    };
    for (Index v : g.out_neighbours(u)) visit(v);
    for (Index v : g.in_neighbours(u)) visit(v);
  }
  return count == n;
}

struct SccDecomposition {
  // components[c] lists the members of component c; components are in
  // topological order of the condensation (sources first).
  std::vector<std::vector<Index>> components;
  std::vector<Index> comp_of;
  // is_independent[c]: every in-neighbour of every member lies inside c.
  std::vector<char> is_independent;
};

// Iterative Tarjan. Components are emitted in reverse topological order and
// flipped at the end.
template <typename Scalar>
SccDecomposition scc_decompose(const Digraph<Scalar>& g) {
  const Index n = g.n();
  SccDecomposition d;
  d.comp_of.assign(n, -1);

  std::vector<Index> index(n, -1), lowlink(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<Index> stack;
  Index next_index = 0;

  struct Frame {
    Index v;
    size_t child;
  };
  std::vector<Frame> call;

  for (Index root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    call.push_back({root, 0});
    while (!call.empty()) {
      auto& [v, child] = call.back();
      if (child == 0) {
        index[v] = lowlink[v] = next_index++;
        stack.push_back(v);
        on_stack[v] = 1;
      }
      const auto& succ = g.out_neighbours(v);
      if (child < succ.size()) {
        const Index w = succ[child++];
        if (index[w] == -1) {
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          lowlink[v] = std::min(lowlink[v], index[w]);
        }
      } else {
        if (lowlink[v] == index[v]) {
          std::vector<Index> comp;
          Index w;
          do {
            w = stack.back();
            stack.pop_back();
            on_stack[w] = 0;
            d.comp_of[w] = Index(d.components.size());
            comp.push_back(w);
          } while (w != v);
          std::sort(comp.begin(), comp.end());
          d.components.push_back(std::move(comp));
        }
        call.pop_back();
        if (!call.empty()) {
          const Index parent = call.back().v;
          lowlink[parent] = std::min(lowlink[parent], lowlink[v]);
        }
      }
    }
  }

  // Flip emission order to topological and remap ids.
  std::reverse(d.components.begin(), d.components.end());
  const Index m = Index(d.components.size());
  for (Index c = 0; c < m; ++c)
    for (Index v : d.components[c]) d.comp_of[v] = c;

  d.is_independent.assign(m, 1);
  for (Index v = 0; v < n; ++v)
    for (Index u : g.in_neighbours(v))
      if (d.comp_of[u] != d.comp_of[v]) d.is_independent[d.comp_of[v]] = 0;
  return d;
}

// Period of a strongly connected component: gcd over intra-component edges
// u -> v of level(u) + 1 - level(v), with levels from a BFS inside the
// component. The component is aperiodic iff the gcd is 1.
template <typename Scalar>
bool is_aperiodic(const Digraph<Scalar>& g, const std::vector<Index>& members) {
  if (members.empty()) return false;
  std::vector<char> inside(g.n(), 0);
  for (Index v : members) inside[v] = 1;

  std::vector<Index> level(g.n(), -1);
  std::vector<Index> queue{members.front()};
  level[members.front()] = 0;
  Index gcd = 0;
  for (size_t head = 0; head < queue.size(); ++head) {
    const Index u = queue[head];
    for (Index v : g.out_neighbours(u)) {
      if (!inside[v]) continue;
      if (level[v] == -1) {
        level[v] = level[u] + 1;
        queue.push_back(v);
      } else {
        gcd = std::gcd(gcd, std::abs(level[u] + 1 - level[v]));
      }
    }
  }
  return gcd == 1;
}

}  // namespace fj
