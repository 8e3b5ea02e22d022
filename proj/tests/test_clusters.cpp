#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "fj/clusters.hpp"
#include "fj/dynamics.hpp"
#include "random_graphs.hpp"

using fj::Index;

namespace {

fj::ClusterSet predicted_for(const fj::Digraph<double>& g,
                             const Eigen::VectorXd& beta) {
  return fj::predicted_clusters(g, fj::classify_agents(g, beta));
}

}  // namespace

TEST_CASE("grouping by value gaps") {
  fj::Vector<double> x(5);
  x << 1.0, 1.0000005, 2.0, 5.0, 5.0;
  const auto cs = fj::empirical_clusters(x);
  CHECK(cs.provenance == "empirical");
  REQUIRE(cs.blocks.size() == 3);
  CHECK(cs.blocks[0] == std::vector<Index>{0, 1});
  CHECK(cs.blocks[1] == std::vector<Index>{2});
  CHECK(cs.blocks[2] == std::vector<Index>{3, 4});
  REQUIRE(cs.values.size() == 3);
  CHECK(cs.values[0] == doctest::Approx(1.00000025));
  CHECK(cs.values[1] == doctest::Approx(2.0));
  CHECK(cs.values[2] == doctest::Approx(5.0));
}

TEST_CASE("gap grouping chains near-ties") {
  fj::Vector<double> x(3);
  x << 0.0, 0.9e-6, 1.8e-6;  // pairwise gaps under tol, ends 1.8e-6 apart
  const auto cs = fj::empirical_clusters(x);
  REQUIRE(cs.blocks.size() == 1);
  CHECK(cs.blocks[0] == std::vector<Index>{0, 1, 2});
}

TEST_CASE("topological clusters of the reference networks") {
  const auto a = predicted_for(fixtures::graph_a(), fixtures::beta_a());
  CHECK(a.provenance == "predicted");
  REQUIRE(a.blocks.size() == 3);
  CHECK(a.blocks[0] == std::vector<Index>{0, 5});
  CHECK(a.blocks[1] == std::vector<Index>{1});
  CHECK(a.blocks[2] == std::vector<Index>{2, 3, 4});
  CHECK(a.claimed == std::vector<char>{1, 0, 1});

  const auto ap = predicted_for(fixtures::graph_a_prime(), fixtures::beta_a());
  REQUIRE(ap.blocks.size() == 4);
  CHECK(ap.blocks[0] == std::vector<Index>{0, 5});
  CHECK(ap.blocks[1] == std::vector<Index>{1});
  CHECK(ap.blocks[2] == std::vector<Index>{2, 3});
  CHECK(ap.blocks[3] == std::vector<Index>{4});

  const auto b = predicted_for(fixtures::graph_b(), fixtures::beta_b());
  REQUIRE(b.blocks.size() == 2);
  CHECK(b.blocks[0] == std::vector<Index>{0, 1});
  CHECK(b.blocks[1] == std::vector<Index>{2, 3, 4});

  // a periodic closed component makes no consensus claim
  const auto bp =
      predicted_for(fixtures::graph_b_periodic(), fixtures::beta_b());
  REQUIRE(bp.blocks.size() == 3);
  CHECK(bp.blocks[0] == std::vector<Index>{0});
  CHECK(bp.blocks[1] == std::vector<Index>{1});
  CHECK(bp.blocks[2] == std::vector<Index>{2, 3, 4});
}

TEST_CASE("refinement check") {
  fj::ClusterSet pred, emp;
  pred.blocks = {{0, 1}, {2}};
  emp.blocks = {{0, 1, 2}};
  CHECK(fj::verify_refinement(pred, emp, 3));
  emp.blocks = {{0}, {1, 2}};
  CHECK_FALSE(fj::verify_refinement(pred, emp, 3));
  emp.blocks = {{0, 1}};  // 2 unassigned
  CHECK_FALSE(fj::verify_refinement(pred, emp, 3));
  pred.blocks = {{0, 7}};
  emp.blocks = {{0}, {1}, {2}};
  CHECK_FALSE(fj::verify_refinement(pred, emp, 3));
}

TEST_CASE("predictions refine the observed clusters on the references") {
  struct Case {
    fj::Digraph<double> g;
    fj::Vector<double> beta;
    fj::Vector<double> x0;
  };
  fj::Vector<double> xa(6), xb(5);
  xa << 6, 1, 8, 4, 9, 2;
  xb << 9, 3, 5, 7, 1;
  std::vector<Case> cases;
  cases.push_back({fixtures::graph_a(), fixtures::beta_a(), xa});
  cases.push_back({fixtures::graph_a_prime(), fixtures::beta_a(), xa});
  cases.push_back({fixtures::graph_b(), fixtures::beta_b(), xb});
  for (const auto& c : cases) {
    const auto pred = predicted_for(c.g, c.beta);
    const auto st = fj::steady_state(c.g, fj::AgentProfile<double>{c.beta, c.x0});
    const auto emp = fj::empirical_clusters(st.x_star);
    CHECK(fj::verify_refinement(pred, emp, c.g.n()));
  }
}

TEST_CASE("randomized robustness trials all pass on the references") {
  const auto rep_a =
      fj::robustness_trials(fixtures::graph_a(), fixtures::beta_a(), Index(50),
                            123);
  CHECK(rep_a.total == 50);
  CHECK(rep_a.passed == 50);
  CHECK(rep_a.first_failure == -1);

  const auto rep_b =
      fj::robustness_trials(fixtures::graph_b(), fixtures::beta_b(), Index(50),
                            123);
  CHECK(rep_b.passed == 50);
}

TEST_CASE("trials are deterministic in the seed") {
  const auto r1 =
      fj::robustness_trials(fixtures::graph_a(), fixtures::beta_a(), Index(10),
                            7);
  const auto r2 =
      fj::robustness_trials(fixtures::graph_a(), fixtures::beta_a(), Index(10),
                            7);
  CHECK(r1.passed == r2.passed);
  CHECK(r1.first_failure == r2.first_failure);
}

TEST_CASE("predictions survive random redraws on random topologies") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 15; ++trial) {
    const Index n = 3 + Index(rng() % 10);
    const auto g =
        testgen::assign_weights(rng, testgen::random_connected_pattern(rng, n));
    const auto beta = testgen::beta_no_oblivious(rng, g);
    const auto rep = fj::robustness_trials(g, beta, Index(20), 1000 + trial);
    CHECK(rep.passed == rep.total);
  }
}
