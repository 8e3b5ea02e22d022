#pragma once

// The three reference networks used across the test suite, 0-based.
//
// Fixture A: two stubborn agents (2, 6 in file ids) and a 4-cycle 3-4-5-6.
// Fixture A': A plus an edge 1->5 that opens a second route into 5.
// Fixture B: pure averaging (all beta = 0) with independent component {1,2}.

#include "fj/classify.hpp"
#include "fj/graph.hpp"

namespace fixtures {

using fj::Index;

inline fj::Digraph<double> graph_a() {
  return fj::build_digraph<double>(6, {{1, 1, 1.0},
                                       {1, 2, 0.5},
                                       {5, 2, 0.5},
                                       {2, 3, 1.0},
                                       {3, 4, 1.0},
                                       {4, 5, 1.0},
                                       {5, 0, 1.0}});
}

inline fj::Vector<double> beta_a() {
  fj::Vector<double> b = fj::Vector<double>::Zero(6);
  b[1] = 0.3;
  b[5] = 0.6;
  return b;
}

inline fj::Digraph<double> graph_a_prime() {
  return fj::build_digraph<double>(6, {{1, 1, 1.0},
                                       {1, 2, 0.5},
                                       {5, 2, 0.5},
                                       {2, 3, 1.0},
                                       {3, 4, 0.5},
                                       {0, 4, 0.5},
                                       {4, 5, 1.0},
                                       {5, 0, 1.0}});
}

inline fj::Digraph<double> graph_b() {
  return fj::build_digraph<double>(5, {{0, 0, 0.5},
                                       {1, 0, 0.5},
                                       {0, 1, 1.0},
                                       {0, 2, 0.5},
                                       {1, 2, 0.5},
                                       {2, 3, 1.0},
                                       {3, 4, 1.0}});
}

inline fj::Vector<double> beta_b() { return fj::Vector<double>::Zero(5); }

// B with the self-loop removed and the 1-2 exchange rebalanced: the
// component {1,2} becomes a pure 2-cycle.
inline fj::Digraph<double> graph_b_periodic() {
  return fj::build_digraph<double>(5, {{1, 0, 1.0},
                                       {0, 1, 1.0},
                                       {0, 2, 0.5},
                                       {1, 2, 0.5},
                                       {2, 3, 1.0},
                                       {3, 4, 1.0}});
}

}  // namespace fixtures
