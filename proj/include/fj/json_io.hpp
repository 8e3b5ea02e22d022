#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fj/classify.hpp"
#include "fj/clusters.hpp"
#include "fj/design.hpp"
#include "fj/dynamics.hpp"
#include "fj/graph.hpp"
#include "fj/ltp.hpp"
#include "fj/types.hpp"

// File formats use 1-based agent ids; everything in memory is 0-based.

namespace fj {

template <typename Scalar = double>
struct Network {
  Digraph<Scalar> graph;
  AgentProfile<Scalar> profile;
};

namespace detail {

inline Index agent_id(const nlohmann::json& j, const char* field, Index n,
                      const std::string& where) {
  if (!j.contains(field) || !j[field].is_number_integer())
    throw InvalidArgument(where + ": integer field \"" + field +
                          "\" required");
  const Index v = j[field].get<Index>();
  if (v < 1 || v > n)
    throw InvalidArgument(where + ": \"" + field + "\" = " +
                          std::to_string(v) + " outside 1.." +
                          std::to_string(n));
  return v - 1;
}

}  // namespace detail

inline Network<double> parse_network(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidArgument("top level must be an object");
  if (!j.contains("n") || !j["n"].is_number_integer())
    throw InvalidArgument("integer field \"n\" required");
  const Index n = j["n"].get<Index>();
  if (n < 1) throw InvalidArgument("\"n\" must be at least 1");

  std::vector<Edge<double>> edges;
  if (!j.contains("edges") || !j["edges"].is_array())
    throw InvalidArgument("array field \"edges\" required");
  Index k = 0;
  for (const auto& ej : j["edges"]) {
    const std::string where = "edges[" + std::to_string(k++) + "]";
    Edge<double> e;
    e.from = detail::agent_id(ej, "from", n, where);
    e.to = detail::agent_id(ej, "to", n, where);
    if (!ej.contains("w") || !ej["w"].is_number())
      throw InvalidArgument(where + ": numeric field \"w\" required");
    e.w = ej["w"].get<double>();
    edges.push_back(e);
  }

  Network<double> net;
  net.graph = build_digraph<double>(n, edges);
  net.profile.beta = Vector<double>::Zero(n);
  net.profile.x0 = Vector<double>::Zero(n);
  if (j.contains("agents")) {
    if (!j["agents"].is_array())
      throw InvalidArgument("\"agents\" must be an array");
    std::vector<char> seen(n, 0);
    k = 0;
    for (const auto& aj : j["agents"]) {
      const std::string where = "agents[" + std::to_string(k++) + "]";
      const Index id = detail::agent_id(aj, "id", n, where);
      if (seen[id])
        throw InvalidArgument(where + ": duplicate agent id " +
                              std::to_string(id + 1));
      seen[id] = 1;
      if (aj.contains("beta")) {
        if (!aj["beta"].is_number())
          throw InvalidArgument(where + ": \"beta\" must be numeric");
        net.profile.beta[id] = aj["beta"].get<double>();
      }
      if (aj.contains("x0")) {
        if (!aj["x0"].is_number())
          throw InvalidArgument(where + ": \"x0\" must be numeric");
        net.profile.x0[id] = aj["x0"].get<double>();
      }
    }
  }
  return net;
}

inline Network<double> load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
  return parse_network(j);
}

template <typename Scalar>
nlohmann::json serialize_network(const Digraph<Scalar>& g,
                                 const Vector<Scalar>& beta,
                                 const Vector<Scalar>& x0) {
  nlohmann::json j;
  const Index n = g.n();
  j["n"] = n;
  auto& edges = j["edges"] = nlohmann::json::array();
  for (Index u = 0; u < n; ++u)
    for (Index v : g.out_neighbours(u))
      edges.push_back({{"from", u + 1}, {"to", v + 1}, {"w", g.W()(v, u)}});
  auto& agents = j["agents"] = nlohmann::json::array();
  for (Index i = 0; i < n; ++i)
    agents.push_back({{"id", i + 1}, {"beta", beta[i]}, {"x0", x0[i]}});
  return j;
}

inline DesignSpec parse_design_spec(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidArgument("top level must be an object");
  DesignSpec spec;
  if (!j.contains("blocks") || !j["blocks"].is_array())
    throw InvalidArgument("array field \"blocks\" required");
  Index n = 0;
  for (const auto& bj : j["blocks"]) n += Index(bj.size());
  Index k = 0;
  for (const auto& bj : j["blocks"]) {
    const std::string where = "blocks[" + std::to_string(k++) + "]";
    if (!bj.is_array() || bj.empty())
      throw InvalidArgument(where + ": nonempty array required");
    std::vector<Index> block;
    for (const auto& v : bj) {
      if (!v.is_number_integer() || v.get<Index>() < 1 || v.get<Index>() > n)
        throw InvalidArgument(where + ": agent ids must lie in 1.." +
                              std::to_string(n));
      block.push_back(v.get<Index>() - 1);
    }
    spec.blocks.push_back(std::move(block));
  }

  if (!j.contains("ltp") || !j["ltp"].is_array() ||
      j["ltp"].size() != spec.blocks.size())
    throw InvalidArgument("\"ltp\" must list one entry (id or null) per block");
  k = 0;
  for (const auto& v : j["ltp"]) {
    const std::string where = "ltp[" + std::to_string(k++) + "]";
    if (v.is_null()) {
      spec.designated.push_back(-1);
    } else if (v.is_number_integer() && v.get<Index>() >= 1 &&
               v.get<Index>() <= n) {
      spec.designated.push_back(v.get<Index>() - 1);
    } else {
      throw InvalidArgument(where + ": agent id or null required");
    }
  }

  if (j.contains("stubborn")) {
    if (!j["stubborn"].is_array())
      throw InvalidArgument("\"stubborn\" must be an array");
    for (const auto& v : j["stubborn"]) {
      if (!v.is_number_integer() || v.get<Index>() < 1 || v.get<Index>() > n)
        throw InvalidArgument("\"stubborn\": agent ids must lie in 1.." +
                              std::to_string(n));
      spec.stubborn.push_back(v.get<Index>() - 1);
    }
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer())
      throw InvalidArgument("\"seed\" must be an integer");
    spec.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("density")) {
    if (!j["density"].is_number())
      throw InvalidArgument("\"density\" must be numeric");
    spec.density = j["density"].get<double>();
    if (spec.density < 0.0 || spec.density > 1.0)
      throw InvalidArgument("\"density\" must lie in [0, 1]");
  }
  return spec;
}

inline nlohmann::json to_json(const PersuasionReport& rep) {
  nlohmann::json j;
  auto& ltp = j["ltp"] = nlohmann::json::array();
  for (size_t k = 0; k < rep.ltp.size(); ++k) {
    nlohmann::json entry;
    entry["agent"] = rep.ltp[k] + 1;
    auto& per = entry["persuaded"] = nlohmann::json::array();
    for (Index q : rep.persuaded[k]) per.push_back(q + 1);
    ltp.push_back(std::move(entry));
  }
  auto& res = j["residual"] = nlohmann::json::array();
  for (Index v : rep.residual) res.push_back(v + 1);
  return j;
}

template <typename Scalar>
nlohmann::json to_json(const SteadyState<Scalar>& st) {
  nlohmann::json j;
  j["x_star"] = std::vector<double>(st.x_star.begin(), st.x_star.end());
  j["method"] = st.method;
  j["residual"] = double(st.residual);
  return j;
}

inline nlohmann::json blocks_to_json(const ClusterSet& cs) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& block : cs.blocks) {
    nlohmann::json b = nlohmann::json::array();
    for (Index v : block) b.push_back(v + 1);
    arr.push_back(std::move(b));
  }
  return arr;
}

inline nlohmann::json clusters_to_json(const ClusterSet& predicted,
                                       const ClusterSet& empirical,
                                       bool refines,
                                       const TrialReport* trials = nullptr) {
  nlohmann::json j;
  j["predicted"] = blocks_to_json(predicted);
  j["empirical"] = blocks_to_json(empirical);
  j["refines"] = refines;
  if (trials) {
    j["trials"]["passed"] = trials->passed;
    j["trials"]["total"] = trials->total;
  }
  return j;
}

// Trajectory CSV: header step,x_1,...,x_n then one row per recorded step,
// 17 significant digits.
template <typename Scalar>
std::string to_csv(const Trajectory<Scalar>& traj, Index n) {
  std::ostringstream out;
  out << "step";
  for (Index i = 1; i <= n; ++i) out << ",x_" << i;
  out << "\n";
  char buf[64];
  for (const auto& [step, state] : traj.records) {
    out << step;
    for (Index i = 0; i < n; ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", double(state[i]));
      out << ',' << buf;
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace fj
