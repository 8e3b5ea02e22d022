// Command line front end for the opinion-dynamics library: steady states,
// persuasion structure, Kron reduction, cluster prediction and network
// synthesis. Exit codes: 0 ok, 1 analysis verdict failure, 2 input error.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fj/clusters.hpp"
#include "fj/design.hpp"
#include "fj/dynamics.hpp"
#include "fj/json_io.hpp"
#include "fj/kron.hpp"
#include "fj/ltp.hpp"

namespace {

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw fj::InvalidArgument("cannot write " + path);
  out << text;
}

void emit_json(const nlohmann::json& j, const std::string& path) {
  emit(j.dump(2) + "\n", path);
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag,
                           std::uint64_t fallback) {
  if (flag) return *flag;
  if (const char* env = std::getenv("FJNET_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
      throw fj::InvalidArgument("FJNET_SEED is not an integer");
    }
  }
  return fallback;
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw fj::InvalidArgument("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw fj::InvalidArgument(path + ": " + e.what());
  }
  return j;
}

nlohmann::json ids_1based(const std::vector<fj::Index>& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (fj::Index i : v) arr.push_back(i + 1);
  return arr;
}

int cmd_analyze(const std::string& input, const std::string& output) {
  const auto net = fj::load_network(input);
  const auto classes = fj::classify_agents(net.graph, net.profile.beta);
  const auto verdict = fj::convergence_check(net.graph, classes);

  nlohmann::json j;
  j["n"] = net.graph.n();
  j["stubborn"] = ids_1based(classes.stubborn);
  j["oblivious"] = ids_1based(classes.oblivious);
  j["influential"] = ids_1based(classes.influential);
  auto& sccs = j["sccs"] = nlohmann::json::array();
  for (fj::Index c = 0; c < fj::Index(classes.scc.components.size()); ++c) {
    nlohmann::json s;
    s["members"] = ids_1based(classes.scc.components[c]);
    s["independent"] = bool(classes.scc.is_independent[c]);
    s["aperiodic"] = fj::is_aperiodic(net.graph, classes.scc.components[c]);
    sccs.push_back(std::move(s));
  }
  j["converges"] = verdict.converges;
  auto& pc = j["periodic_components"] = nlohmann::json::array();
  for (const auto& comp : verdict.periodic_components)
    pc.push_back(ids_1based(comp));
  emit_json(j, output);
  return 0;
}

int cmd_simulate(const std::string& input, const std::string& output,
                 double tol, fj::Index max_iter) {
  const auto net = fj::load_network(input);
  fj::SimOptions opts;
  opts.tol = tol;
  opts.max_iter = max_iter;
  const auto traj = fj::simulate(net.graph, net.profile, opts);
  emit(fj::to_csv(traj, net.graph.n()), output);
  std::cerr << "verdict: " << fj::to_string(traj.verdict)
            << " (step " << traj.final_step << ", last delta "
            << traj.max_delta << ")\n";
  return traj.verdict == fj::SimVerdict::Converged ? 0 : 1;
}

int cmd_steady_state(const std::string& input, const std::string& output) {
  const auto net = fj::load_network(input);
  const auto st = fj::steady_state(net.graph, net.profile);
  emit_json(fj::to_json(st), output);
  return 0;
}

std::string dominator_dot(const fj::PersuasionReport& rep) {
  std::string dot = "digraph dominators {\n  r [shape=box];\n";
  for (fj::Index v = 0; v < rep.root; ++v) {
    if (rep.idom[v] == -1) continue;
    const fj::Index d = rep.idom[v];
    dot += "  " + (d == rep.root ? std::string("r")
                                 : std::to_string(d + 1)) +
           " -> " + std::to_string(v + 1) + ";\n";
  }
  dot += "}\n";
  return dot;
}

int cmd_ltp(const std::string& input, const std::string& output,
            const std::string& dot_path) {
  const auto net = fj::load_network(input);
  const auto classes = fj::classify_agents(net.graph, net.profile.beta);
  const auto rep = fj::ltp_report(net.graph, classes);
  emit_json(fj::to_json(rep), output);
  if (!dot_path.empty()) emit(dominator_dot(rep), dot_path);
  return 0;
}

int cmd_kron(const std::string& input, const std::string& output,
             std::vector<fj::Index> alpha) {
  const auto net = fj::load_network(input);
  const auto rm = fj::build_r(net.graph, net.profile.beta);

  std::vector<fj::Index> keep;
  for (fj::Index a : alpha) {
    if (a < 1 || a > rm.n)
      throw fj::InvalidArgument("alpha id " + std::to_string(a) +
                                " outside 1.." + std::to_string(rm.n));
    keep.push_back(a - 1);
  }
  for (fj::Index k = 0; k < rm.m; ++k) keep.push_back(rm.n + k);
  if (!fj::valid_alpha(rm, keep))
    throw fj::InvalidArgument(
        "alpha is not valid: an eliminated node is unreachable from the "
        "retained set");
  const auto kr = fj::schur_complement(rm.R, keep);

  nlohmann::json j;
  auto& kept = j["alpha"] = nlohmann::json::array();
  for (fj::Index v : kr.kept)
    if (v < rm.n) kept.push_back(v + 1);
  j["sources"] = ids_1based(rm.source_agent);
  auto& red = j["reduced"] = nlohmann::json::array();
  for (fj::Index r = 0; r < kr.reduced.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (fj::Index c = 0; c < kr.reduced.cols(); ++c)
      row.push_back(kr.reduced(r, c));
    red.push_back(std::move(row));
  }
  j["is_laplacian"] = fj::is_laplacian(kr.reduced);

  const auto classes = fj::classify_agents(net.graph, net.profile.beta);
  const auto rep = fj::ltp_report(net.graph, classes);
  auto& certs = j["certifications"] = nlohmann::json::array();
  for (size_t k = 0; k < rep.ltp.size(); ++k)
    for (fj::Index q : rep.persuaded[k]) {
      const auto cert = fj::certify_equal_final_opinions(
          net.graph, net.profile.beta, rep.ltp[k], q);
      certs.push_back({{"p", rep.ltp[k] + 1},
                       {"q", q + 1},
                       {"certified", cert.certified}});
    }
  emit_json(j, output);
  return 0;
}

int cmd_predict(const std::string& input, const std::string& output) {
  const auto net = fj::load_network(input);
  const auto classes = fj::classify_agents(net.graph, net.profile.beta);
  const auto predicted = fj::predicted_clusters(net.graph, classes);
  const auto st = fj::steady_state(net.graph, net.profile);
  const auto empirical = fj::empirical_clusters(st.x_star);
  const bool refines =
      fj::verify_refinement(predicted, empirical, net.graph.n());
  emit_json(fj::clusters_to_json(predicted, empirical, refines), output);
  return refines ? 0 : 1;
}

int cmd_verify(const std::string& input, const std::string& output,
               fj::Index trials, const std::optional<std::uint64_t>& seed) {
  const auto net = fj::load_network(input);
  const auto classes = fj::classify_agents(net.graph, net.profile.beta);
  const auto predicted = fj::predicted_clusters(net.graph, classes);
  const auto st = fj::steady_state(net.graph, net.profile);
  const auto empirical = fj::empirical_clusters(st.x_star);
  const bool refines =
      fj::verify_refinement(predicted, empirical, net.graph.n());
  const auto rep = fj::robustness_trials(net.graph, net.profile.beta, trials,
                                         resolve_seed(seed, 0));
  emit_json(fj::clusters_to_json(predicted, empirical, refines, &rep),
            output);
  return refines && rep.passed == rep.total ? 0 : 1;
}

int cmd_design(const std::string& input, const std::string& output,
               const std::optional<std::uint64_t>& seed,
               const std::optional<double>& density) {
  auto spec = fj::parse_design_spec(load_json(input));
  spec.seed = resolve_seed(seed, spec.seed);
  if (density) spec.density = *density;
  const auto result = fj::synthesize<double>(spec);
  const auto bad = fj::validate_design(result.graph, result.beta, spec);
  if (!bad.empty()) {
    for (const auto& msg : bad) std::cerr << "error: " << msg << "\n";
    return 1;
  }
  emit_json(fj::serialize_network(result.graph, result.beta, result.x0),
            output);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Friedkin-Johnsen opinion network analyzer"};
  app.require_subcommand(1);

  std::string input, output, dot_path;
  double tol = 1e-10;
  fj::Index max_iter = 1000000;
  fj::Index trials = 100;
  std::optional<std::uint64_t> seed;
  std::optional<double> density;
  std::vector<fj::Index> alpha;

  auto add_io = [&](CLI::App* sub) {
    sub->add_option("input", input, "input JSON file")->required();
    sub->add_option("-o,--output", output, "output file (default stdout)");
  };

  add_io(app.add_subcommand("analyze", "agent classes and component report"));
  auto* sim = app.add_subcommand("simulate", "iterate the dynamics, emit CSV");
  add_io(sim);
  sim->add_option("--tol", tol, "convergence threshold");
  sim->add_option("--max-iter", max_iter, "iteration budget");
  add_io(app.add_subcommand("steady-state", "closed-form fixed point"));
  auto* ltp = app.add_subcommand("ltp", "persuasive agents via dominators");
  add_io(ltp);
  ltp->add_option("--dot", dot_path, "write the dominator tree as DOT");
  auto* kron = app.add_subcommand("kron", "Schur-reduce the augmented matrix");
  add_io(kron);
  kron->add_option("--alpha", alpha, "agents to keep (1-based)")
      ->required()
      ->delimiter(',');
  add_io(app.add_subcommand("predict", "topological clusters vs steady state"));
  auto* verify = app.add_subcommand("verify", "randomized refinement trials");
  add_io(verify);
  verify->add_option("--trials", trials, "number of redraws");
  verify->add_option("--seed", seed, "RNG seed (overrides FJNET_SEED)");
  auto* design = app.add_subcommand("design", "synthesize a network from spec");
  add_io(design);
  design->add_option("--seed", seed, "RNG seed (overrides the input file's)");
  design->add_option("--density", density, "extra-edge probability");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand("analyze")) return cmd_analyze(input, output);
    if (app.got_subcommand("simulate"))
      return cmd_simulate(input, output, tol, max_iter);
    if (app.got_subcommand("steady-state"))
      return cmd_steady_state(input, output);
    if (app.got_subcommand("ltp")) return cmd_ltp(input, output, dot_path);
    if (app.got_subcommand("kron")) return cmd_kron(input, output, alpha);
    if (app.got_subcommand("predict")) return cmd_predict(input, output);
    if (app.got_subcommand("verify"))
      return cmd_verify(input, output, trials, seed);
    if (app.got_subcommand("design"))
      return cmd_design(input, output, seed, density);
  } catch (const fj::NoSteadyStateError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const fj::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const fj::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
