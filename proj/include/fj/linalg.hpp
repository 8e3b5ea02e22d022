#pragma once

#include <Eigen/LU>
#include <cmath>
#include <vector>

#include "fj/graph.hpp"
#include "fj/types.hpp"

namespace fj {

// Operator infinity norm (max absolute row sum).
template <typename Derived>
typename Derived::Scalar infinity_norm(const Eigen::MatrixBase<Derived>& M) {
  if (M.rows() == 0) return typename Derived::Scalar(0);
  return M.cwiseAbs().rowwise().sum().maxCoeff();
}

// LU solve with an explicit residual check; refuses to return garbage from
// a numerically singular system.
template <typename DerivedA, typename DerivedB>
Matrix<typename DerivedA::Scalar> solve(
    const Eigen::MatrixBase<DerivedA>& A, const Eigen::MatrixBase<DerivedB>& B,
    typename DerivedA::Scalar tol = typename DerivedA::Scalar(1e-8)) {
  using Scalar = typename DerivedA::Scalar;
  Matrix<Scalar> X = A.eval().partialPivLu().solve(B.eval());
  if (!X.allFinite())
    throw SingularMatrixError("linear system produced non-finite entries");
  const Scalar resid = (A * X - B).cwiseAbs().maxCoeff();
  const Scalar scale = Scalar(1) + B.cwiseAbs().maxCoeff();
  if (!(resid <= tol * scale))
    throw SingularMatrixError("linear solve residual " +
                              std::to_string(double(resid)) +
                              " exceeds tolerance");
  return X;
}

// Power iteration estimate of the spectral radius of a nonnegative matrix.
// Oscillation with period two (bipartite-like structure) is damped by
// reporting the geometric mean of consecutive Rayleigh-style ratios.
template <typename Scalar>
Scalar spectral_radius_bound(const Matrix<Scalar>& M,
                             Scalar tol = Scalar(1e-10),
                             Index max_iter = 100000) {
  const Index n = M.rows();
  if (n == 0) return Scalar(0);
  Vector<Scalar> v = Vector<Scalar>::Ones(n);
  Scalar lam_prev = Scalar(0), mean_prev = Scalar(0);
  for (Index k = 0; k < max_iter; ++k) {
    v = M * v;
    const Scalar lam = v.template lpNorm<Eigen::Infinity>();
    if (lam == Scalar(0)) return Scalar(0);  // nilpotent direction
    v /= lam;
    if (k > 0) {
      if (std::abs(lam - lam_prev) <= tol * std::max(Scalar(1), lam))
        return lam;
      const Scalar mean = std::sqrt(lam * lam_prev);
      if (k > 1 &&
          std::abs(mean - mean_prev) <= tol * std::max(Scalar(1), mean))
        return mean;
      mean_prev = mean;
    }
    lam_prev = lam;
  }
  throw ConvergenceError("power iteration did not settle");
}

// A nonnegative substochastic matrix has a convergent power series iff,
// walking along rows (i steps to j when M(i,j) > 0), every node can reach a
// row with deficit. In the influence orientation that reads: every node is
// reachable from the deficient set.
template <typename Scalar>
bool is_substochastic_convergent(const Matrix<Scalar>& M,
                                 Scalar tol = Scalar(1e-9)) {
  const Index n = M.rows();
  if (M.minCoeff() < -tol) return false;
  std::vector<Index> deficient;
  for (Index i = 0; i < n; ++i) {
    const Scalar s = M.row(i).sum();
    if (s > Scalar(1) + tol) return false;
    if (s < Scalar(1) - tol) deficient.push_back(i);
  }
  // BFS from the deficient rows against the row walk direction.
  std::vector<char> seen(n, 0);
  std::vector<Index> stack;
  for (Index d : deficient) {
    seen[d] = 1;
    stack.push_back(d);
  }
  while (!stack.empty()) {
    const Index j = stack.back();
    stack.pop_back();
    for (Index i = 0; i < n; ++i)
      if (!seen[i] && M(i, j) > Scalar(0)) {
        seen[i] = 1;
        stack.push_back(i);
      }
  }
  for (Index i = 0; i < n; ++i)
    if (!seen[i]) return false;
  return true;
}

// Sum of the power series I + M + M^2 + ... for nonnegative substochastic
// convergent M, with a rigorous tail bound: once |M^{k+1}| < 1 in the
// infinity norm, the remainder is at most |M^{k+1}| |S_k| / (1 - |M^{k+1}|).
template <typename Scalar>
Matrix<Scalar> neumann_sum(const Matrix<Scalar>& M, Scalar tol = Scalar(1e-10),
                           Index max_terms = 1000000) {
  if (!is_substochastic_convergent(M))
    throw InvalidArgument("matrix is not substochastic convergent");
  const Index n = M.rows();
  Matrix<Scalar> S = Matrix<Scalar>::Identity(n, n);
  Matrix<Scalar> term = Matrix<Scalar>::Identity(n, n);
  for (Index k = 0; k < max_terms; ++k) {
    term = term * M;
    S += term;
    const Scalar tn = infinity_norm(term);
    if (tn < Scalar(1)) {
      const Scalar tail = tn * infinity_norm(S) / (Scalar(1) - tn);
      if (tail <= tol) return S;
    }
  }
  throw ConvergenceError("power series did not converge within term budget");
}

// Limit of P^k for a row-stochastic P whose independent strongly connected
// components are all aperiodic. Built structurally: per-component stationary
// distributions and absorption probabilities for the transient part, so
// (P^inf)(i, j) = Pr[absorbed into j's component from i] * pi(j).
template <typename Scalar>
Matrix<Scalar> stochastic_power_limit(const Matrix<Scalar>& P,
                                      Scalar tol = Scalar(1e-8)) {
  const Index n = P.rows();
  Digraph<Scalar> g(P);
  const SccDecomposition scc = scc_decompose(g);

  std::vector<Index> recurrent_classes;
  for (Index c = 0; c < Index(scc.components.size()); ++c)
    if (scc.is_independent[c]) {
      if (!is_aperiodic(g, scc.components[c]))
        throw NoSteadyStateError(
            "periodic recurrent class; powers of the matrix oscillate");
      recurrent_classes.push_back(c);
    }

  const Index K = Index(recurrent_classes.size());
  std::vector<Index> class_of(n, -1);
  std::vector<Vector<Scalar>> pi(K);
  for (Index k = 0; k < K; ++k) {
    const auto& members = scc.components[recurrent_classes[k]];
    for (Index v : members) class_of[v] = k;
    const Index m = Index(members.size());
    Matrix<Scalar> Pc(m, m);
    for (Index a = 0; a < m; ++a)
      for (Index b = 0; b < m; ++b) Pc(a, b) = P(members[a], members[b]);
    Matrix<Scalar> A = Pc.transpose() - Matrix<Scalar>::Identity(m, m);
    A.row(m - 1).setOnes();
    Vector<Scalar> rhs = Vector<Scalar>::Zero(m);
    rhs[m - 1] = Scalar(1);
    pi[k] = solve(A, rhs);
  }

  std::vector<Index> transient;
  for (Index v = 0; v < n; ++v)
    if (class_of[v] == -1) transient.push_back(v);
  const Index t = Index(transient.size());

  Matrix<Scalar> H;  // absorption probabilities, t x K
  if (t > 0) {
    Matrix<Scalar> Ptt(t, t);
    for (Index a = 0; a < t; ++a)
      for (Index b = 0; b < t; ++b) Ptt(a, b) = P(transient[a], transient[b]);
    Matrix<Scalar> B = Matrix<Scalar>::Zero(t, K);
    for (Index a = 0; a < t; ++a)
      for (Index j = 0; j < n; ++j)
        if (class_of[j] != -1) B(a, class_of[j]) += P(transient[a], j);
    H = solve((Matrix<Scalar>::Identity(t, t) - Ptt).eval(), B);
  }

  Matrix<Scalar> L = Matrix<Scalar>::Zero(n, n);
  std::vector<Index> trans_pos(n, -1);
  for (Index a = 0; a < t; ++a) trans_pos[transient[a]] = a;
  for (Index j = 0; j < n; ++j) {
    const Index k = class_of[j];
    if (k == -1) continue;  // transient columns vanish in the limit
    const auto& members = scc.components[recurrent_classes[k]];
    const Index pos =
        Index(std::lower_bound(members.begin(), members.end(), j) -
              members.begin());
    const Scalar pij = pi[k][pos];
    for (Index i = 0; i < n; ++i) {
      if (class_of[i] == k)
        L(i, j) = pij;
      else if (class_of[i] == -1)
        L(i, j) = H(trans_pos[i], k) * pij;
    }
  }

  const Scalar resid = infinity_norm(P * L - L);
  if (!(resid <= tol))
    throw ConvergenceError("power limit failed its fixed-point check");
  return L;
}

}  // namespace fj
