#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fj/classify.hpp"
#include "fj/graph.hpp"
#include "fj/linalg.hpp"
#include "fj/types.hpp"

namespace fj {

// One update of x(k+1) = (I - diag(beta)) W x(k) + diag(beta) x(0).
template <typename Scalar>
Vector<Scalar> fj_step(const Matrix<Scalar>& W, const Vector<Scalar>& beta,
                       const Vector<Scalar>& x0, const Vector<Scalar>& x) {
  return (Vector<Scalar>::Ones(x.size()) - beta).asDiagonal() * (W * x) +
         beta.asDiagonal() * x0;
}

enum class SimVerdict { Converged, MaxIterReached, PeriodicIscc };

inline const char* to_string(SimVerdict v) {
  switch (v) {
    case SimVerdict::Converged: return "converged";
    case SimVerdict::MaxIterReached: return "max-iter-reached";
    case SimVerdict::PeriodicIscc: return "periodic-iscc";
  }
  return "?";
}

// Oblivious agents on a periodic independent component circulate forever
// (except for lucky initial conditions); everything else settles.
struct ConvergenceVerdict {
  bool converges = true;
  std::vector<std::vector<Index>> periodic_components;
};

template <typename Scalar>
ConvergenceVerdict convergence_check(const Digraph<Scalar>& g,
                                     const AgentClasses& classes) {
  ConvergenceVerdict v;
  for (Index c : classes.oblivious_iscc_ids)
    if (!is_aperiodic(g, classes.scc.components[c])) {
      v.converges = false;
      v.periodic_components.push_back(classes.scc.components[c]);
    }
  return v;
}

struct SimOptions {
  Index max_iter = 1000000;
  double tol = 1e-10;
  Index max_records = 100000;
  bool record_trajectory = true;
};

template <typename Scalar>
struct Trajectory {
  std::vector<std::pair<Index, Vector<Scalar>>> records;
  Vector<Scalar> final_state;
  Index final_step = 0;
  Scalar max_delta = Scalar(0);  // last step size observed
  SimVerdict verdict = SimVerdict::Converged;
};

template <typename Scalar>
Trajectory<Scalar> simulate(const Digraph<Scalar>& g,
                            const AgentProfile<Scalar>& profile,
                            const SimOptions& opts = {}) {
  require_row_stochastic(g);
  const auto classes = classify_agents(g, profile.beta);
  const auto convergence = convergence_check(g, classes);

  Trajectory<Scalar> traj;
  Vector<Scalar> x = profile.x0;
  Index stride = 1;
  auto record = [&](Index step, const Vector<Scalar>& state) {
    if (!traj.records.empty() && traj.records.back().first == step) return;
    traj.records.emplace_back(step, state);
    if (Index(traj.records.size()) > opts.max_records) {
      // Thin to every other record and double the stride; kept steps stay
      // multiples of the new stride because appends happen on the grid.
      std::vector<std::pair<Index, Vector<Scalar>>> kept;
      for (size_t i = 0; i < traj.records.size(); i += 2)
        kept.push_back(std::move(traj.records[i]));
      traj.records = std::move(kept);
      stride *= 2;
    }
  };
  if (opts.record_trajectory) record(0, x);

  bool settled = false;
  Index step = 0;
  while (step < opts.max_iter) {
    const Vector<Scalar> next = fj_step(g.W(), profile.beta, profile.x0, x);
    traj.max_delta = (next - x).cwiseAbs().maxCoeff();
    x = next;
    ++step;
    if (opts.record_trajectory && step % stride == 0) record(step, x);
    if (traj.max_delta <= Scalar(opts.tol)) {
      settled = true;
      break;
    }
  }
  if (opts.record_trajectory) record(step, x);
  traj.final_state = std::move(x);
  traj.final_step = step;
  traj.verdict = settled               ? SimVerdict::Converged
                 : !convergence.converges ? SimVerdict::PeriodicIscc
                                          : SimVerdict::MaxIterReached;
  return traj;
}

template <typename Scalar>
struct SteadyState {
  Vector<Scalar> x_star;
  std::string method;
  Scalar residual = Scalar(0);  // infinity norm of x* - step(x*)
  std::vector<Index> oblivious;
  Matrix<Scalar> w11_star;  // limit matrix of the oblivious block, if any
};

// Closed-form steady state. Without oblivious agents the fixed point solves
// (I - (I-B)W) x = B x(0). With them, the oblivious block converges on its
// own to W11^inf x1(0) and the remaining agents equilibrate against that
// boundary plus their own anchors.
template <typename Scalar>
SteadyState<Scalar> steady_state(const Digraph<Scalar>& g,
                                 const AgentProfile<Scalar>& profile,
                                 Scalar solve_tol = Scalar(1e-8)) {
  require_row_stochastic(g);
  const Index n = g.n();
  const auto classes = classify_agents(g, profile.beta);
  const auto convergence = convergence_check(g, classes);
  if (!convergence.converges)
    throw NoSteadyStateError(
        "opinions oscillate: a fully oblivious independent component is "
        "periodic");

  SteadyState<Scalar> st;
  st.oblivious = classes.oblivious;
  const Matrix<Scalar>& W = g.W();
  const Vector<Scalar>& beta = profile.beta;

  if (classes.oblivious.empty()) {
    const Matrix<Scalar> A =
        Matrix<Scalar>::Identity(n, n) -
        (Vector<Scalar>::Ones(n) - beta).asDiagonal() * W;
    st.x_star = solve(A, (beta.asDiagonal() * profile.x0).eval(), solve_tol);
    st.method = "closed-form";
  } else {
    const auto& obl = classes.oblivious;
    std::vector<Index> rest;
    for (Index i = 0; i < n; ++i)
      if (!classes.oblivious_mask[i]) rest.push_back(i);
    const Index m1 = Index(obl.size()), m2 = Index(rest.size());

    Matrix<Scalar> W11(m1, m1), W21(m2, m1), W22(m2, m2);
    for (Index a = 0; a < m1; ++a)
      for (Index b = 0; b < m1; ++b) W11(a, b) = W(obl[a], obl[b]);
    for (Index a = 0; a < m2; ++a) {
      for (Index b = 0; b < m1; ++b) W21(a, b) = W(rest[a], obl[b]);
      for (Index b = 0; b < m2; ++b) W22(a, b) = W(rest[a], rest[b]);
    }
    Vector<Scalar> beta2(m2), x01(m1), x02(m2);
    for (Index a = 0; a < m1; ++a) x01[a] = profile.x0[obl[a]];
    for (Index a = 0; a < m2; ++a) {
      beta2[a] = beta[rest[a]];
      x02[a] = profile.x0[rest[a]];
    }

    st.w11_star = stochastic_power_limit(W11);
    const Vector<Scalar> x1 = st.w11_star * x01;
    Vector<Scalar> x2;
    if (m2 > 0) {
      const Matrix<Scalar> M2 =
          (Vector<Scalar>::Ones(m2) - beta2).asDiagonal() * W22;
      const Vector<Scalar> rhs =
          (Vector<Scalar>::Ones(m2) - beta2).asDiagonal() * (W21 * x1) +
          beta2.asDiagonal() * x02;
      x2 = solve((Matrix<Scalar>::Identity(m2, m2) - M2).eval(), rhs,
                 solve_tol);
    }
    st.x_star.resize(n);
    for (Index a = 0; a < m1; ++a) st.x_star[obl[a]] = x1[a];
    for (Index a = 0; a < m2; ++a) st.x_star[rest[a]] = x2[a];
    st.method = "closed-form";
  }

  st.residual = (fj_step(W, beta, profile.x0, st.x_star) - st.x_star)
                    .cwiseAbs()
                    .maxCoeff();
  return st;
}

}  // namespace fj
