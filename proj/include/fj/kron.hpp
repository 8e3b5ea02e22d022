#pragma once

#include <algorithm>
#include <vector>

#include "fj/classify.hpp"
#include "fj/graph.hpp"
#include "fj/linalg.hpp"
#include "fj/types.hpp"

namespace fj {

// Augmented steady-state matrix. Agent rows encode (I - (I-B)W) x = B u with
// one boundary column per stubborn agent holding its anchor; boundary rows
// are zero, so R [x; u] = 0 at the fixed point with u free.
template <typename Scalar>
struct RMatrix {
  Matrix<Scalar> R;
  Index n = 0;                       // agents
  Index m = 0;                       // boundary (source) nodes
  std::vector<Index> source_agent;   // source k anchors this agent
};

template <typename Scalar>
RMatrix<Scalar> build_r(const Digraph<Scalar>& g, const Vector<Scalar>& beta) {
  require_row_stochastic(g);
  const Index n = g.n();
  if (beta.size() != n) throw InvalidArgument("beta size mismatch");
  RMatrix<Scalar> rm;
  rm.n = n;
  for (Index i = 0; i < n; ++i)
    if (beta[i] > Scalar(0)) rm.source_agent.push_back(i);
  rm.m = Index(rm.source_agent.size());
  if (rm.m == 0)
    throw InvalidArgument(
        "no stubborn agents: the augmented matrix needs a boundary source");

  rm.R = Matrix<Scalar>::Zero(n + rm.m, n + rm.m);
  rm.R.topLeftCorner(n, n) =
      Matrix<Scalar>::Identity(n, n) -
      (Vector<Scalar>::Ones(n) - beta).asDiagonal() * g.W();
  for (Index k = 0; k < rm.m; ++k)
    rm.R(rm.source_agent[k], n + k) = -beta[rm.source_agent[k]];
  return rm;
}

// Dependence graph of a Laplacian-like matrix: edge i -> j iff M(j, i) < 0,
// i.e. node j's balance equation pulls on node i.
template <typename Scalar>
std::vector<std::vector<Index>> dependence_graph(const Matrix<Scalar>& M) {
  const Index n = M.rows();
  std::vector<std::vector<Index>> succ(n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i)
      if (i != j && M(j, i) < Scalar(0)) succ[i].push_back(j);
  return succ;
}

// A retained set is valid when every eliminated node is reachable from it in
// the dependence graph; that keeps the eliminated block nonsingular.
template <typename Scalar>
bool valid_keep(const Matrix<Scalar>& M, const std::vector<Index>& keep) {
  const Index N = M.rows();
  const auto succ = dependence_graph(M);
  std::vector<char> seen(N, 0);
  std::vector<Index> stack;
  for (Index a : keep) {
    if (a < 0 || a >= N) throw InvalidArgument("keep index out of range");
    if (!seen[a]) {
      seen[a] = 1;
      stack.push_back(a);
    }
  }
  while (!stack.empty()) {
    const Index u = stack.back();
    stack.pop_back();
    for (Index v : succ[u])
      if (!seen[v]) {
        seen[v] = 1;
        stack.push_back(v);
      }
  }
  return std::all_of(seen.begin(), seen.end(), [](char c) { return c; });
}

template <typename Scalar>
bool valid_alpha(const RMatrix<Scalar>& rm, const std::vector<Index>& alpha) {
  return valid_keep(rm.R, alpha);
}

template <typename Scalar>
struct KronResult {
  Matrix<Scalar> reduced;
  std::vector<Index> kept;        // sorted original indices of the rows kept
  std::vector<Index> eliminated;  // sorted
};

// Schur complement onto `keep`: M/el = M[k,k] - M[k,e] M[e,e]^{-1} M[e,k].
template <typename Scalar>
KronResult<Scalar> schur_complement(const Matrix<Scalar>& M,
                                    std::vector<Index> keep) {
  const Index N = M.rows();
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  for (Index k : keep)
    if (k < 0 || k >= N) throw InvalidArgument("keep index out of range");

  KronResult<Scalar> out;
  out.kept = keep;
  std::vector<char> keep_mask(N, 0);
  for (Index k : keep) keep_mask[k] = 1;
  for (Index i = 0; i < N; ++i)
    if (!keep_mask[i]) out.eliminated.push_back(i);

  const Index a = Index(out.kept.size());
  const Index e = Index(out.eliminated.size());
  if (e == 0) {
    out.reduced = M;
    return out;
  }
  Matrix<Scalar> Mkk(a, a), Mke(a, e), Mek(e, a), Mee(e, e);
  for (Index i = 0; i < a; ++i) {
    for (Index j = 0; j < a; ++j) Mkk(i, j) = M(out.kept[i], out.kept[j]);
    for (Index j = 0; j < e; ++j) Mke(i, j) = M(out.kept[i], out.eliminated[j]);
  }
  for (Index i = 0; i < e; ++i) {
    for (Index j = 0; j < a; ++j) Mek(i, j) = M(out.eliminated[i], out.kept[j]);
    for (Index j = 0; j < e; ++j)
      Mee(i, j) = M(out.eliminated[i], out.eliminated[j]);
  }
  out.reduced = Mkk - Mke * solve(Mee, Mek);
  return out;
}

template <typename Scalar>
KronResult<Scalar> kron_reduce(const RMatrix<Scalar>& rm,
                               const std::vector<Index>& alpha) {
  if (!valid_alpha(rm, alpha))
    throw InvalidArgument(
        "alpha is not valid: an eliminated node is unreachable from the "
        "retained set");
  return schur_complement(rm.R, alpha);
}

// Laplacian-like: nonnegative diagonal, nonpositive off-diagonal, zero row
// sums.
template <typename Derived>
bool is_laplacian(const Eigen::MatrixBase<Derived>& M,
                  typename Derived::Scalar tol =
                      typename Derived::Scalar(1e-9)) {
  using Scalar = typename Derived::Scalar;
  const Index n = M.rows();
  if (n != M.cols()) return false;
  for (Index i = 0; i < n; ++i) {
    if (M(i, i) < -tol) return false;
    Scalar sum = Scalar(0);
    for (Index j = 0; j < n; ++j) {
      if (i != j && M(i, j) > tol) return false;
      sum += M(i, j);
    }
    if (std::abs(sum) > tol * Scalar(n)) return false;
  }
  return true;
}

template <typename Scalar>
struct CertResult {
  bool certified = false;
  Scalar coeff_p = Scalar(0);  // entry on p in q's reduced row
  Scalar coeff_q = Scalar(0);  // entry on q in q's reduced row
  Matrix<Scalar> reduced;
  std::vector<Index> kept;
};

namespace detail {

// q's reduced balance must read c x_q - c x_p = 0 and touch nothing else.
template <typename Scalar>
void check_two_point_row(CertResult<Scalar>& cert, Index p, Index q,
                         Scalar threshold) {
  const auto& kept = cert.kept;
  const Index qi = Index(std::lower_bound(kept.begin(), kept.end(), q) -
                         kept.begin());
  const Index pi = Index(std::lower_bound(kept.begin(), kept.end(), p) -
                         kept.begin());
  const auto row = cert.reduced.row(qi);
  const Scalar scale = row.cwiseAbs().maxCoeff();
  if (scale <= Scalar(0)) return;
  cert.coeff_p = row[pi];
  cert.coeff_q = row[qi];
  for (Index j = 0; j < row.size(); ++j)
    if (j != pi && j != qi && std::abs(row[j]) / scale > threshold) return;
  if (std::abs(row[pi] + row[qi]) / scale > threshold) return;
  if (!(row[qi] > Scalar(0)) || !(row[pi] < Scalar(0))) return;
  cert.certified = true;
}

}  // namespace detail

// Weight-independent certificate that p and q settle on the same opinion.
// For a persuaded pair, reduce the augmented matrix onto p, q, the boundary
// nodes and the oblivious independent components; for two members of one
// oblivious independent component, reduce that component's own balance
// matrix onto the pair.
template <typename Scalar>
CertResult<Scalar> certify_equal_final_opinions(
    const Digraph<Scalar>& g, const Vector<Scalar>& beta, Index p, Index q,
    Scalar threshold = Scalar(1e-9)) {
  if (p == q) throw InvalidArgument("p and q must differ");
  const auto classes = classify_agents(g, beta);

  CertResult<Scalar> cert;
  const Index cp = classes.scc.comp_of[p];
  const bool same_oblivious_iscc =
      cp == classes.scc.comp_of[q] &&
      std::find(classes.oblivious_iscc_ids.begin(),
                classes.oblivious_iscc_ids.end(),
                cp) != classes.oblivious_iscc_ids.end();

  if (same_oblivious_iscc) {
    const auto& members = classes.scc.components[cp];
    const Index c = Index(members.size());
    Matrix<Scalar> M = -g.W()(members, members).eval();
    M += Matrix<Scalar>::Identity(c, c);
    std::vector<Index> keep;
    for (Index i = 0; i < c; ++i)
      if (members[i] == p || members[i] == q) keep.push_back(i);
    auto kr = schur_complement(M, keep);
    cert.reduced = std::move(kr.reduced);
    cert.kept = {std::min(p, q), std::max(p, q)};
    detail::check_two_point_row(cert, p, q, threshold);
    return cert;
  }

  if (classes.oblivious_mask[p]) {
    // p relays influence out of the oblivious region, so the whole pair
    // lives there; the balance matrix of that region plays the role of the
    // augmented one, with the independent components as boundary.
    if (!classes.oblivious_mask[q])
      throw InvalidArgument(
          "an oblivious agent cannot share a reduced relation with a "
          "stubborn-fed one");
    const auto& obl = classes.oblivious;
    const Index c = Index(obl.size());
    Matrix<Scalar> M = -g.W()(obl, obl).eval();
    M += Matrix<Scalar>::Identity(c, c);
    std::vector<char> keep_agent(g.n(), 0);
    keep_agent[p] = keep_agent[q] = 1;
    for (Index cc : classes.oblivious_iscc_ids)
      for (Index v : classes.scc.components[cc]) keep_agent[v] = 1;
    std::vector<Index> keep, kept_agents;
    for (Index i = 0; i < c; ++i)
      if (keep_agent[obl[i]]) {
        keep.push_back(i);
        kept_agents.push_back(obl[i]);
      }
    if (!valid_keep(M, keep))
      throw InvalidArgument(
          "alpha is not valid: an eliminated node is unreachable from the "
          "retained set");
    auto kr = schur_complement(M, keep);
    cert.reduced = std::move(kr.reduced);
    cert.kept = std::move(kept_agents);
    detail::check_two_point_row(cert, p, q, threshold);
    return cert;
  }

  const RMatrix<Scalar> rm = build_r(g, beta);
  std::vector<Index> alpha{p, q};
  for (Index k = 0; k < rm.m; ++k) alpha.push_back(rm.n + k);
  for (Index c : classes.oblivious_iscc_ids)
    for (Index v : classes.scc.components[c]) alpha.push_back(v);
  auto kr = kron_reduce(rm, alpha);
  cert.reduced = std::move(kr.reduced);
  cert.kept = std::move(kr.kept);
  detail::check_two_point_row(cert, p, q, threshold);
  return cert;
}

}  // namespace fj
