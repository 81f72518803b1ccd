// SPDX-License-Identifier: Apache-2.0
#include "logigraph/graph.hpp"

#include <json.hpp>

#include <sstream>

namespace logigraph {

using nlohmann::json;

std::string graph_to_json(const LogicGraph& g, int indent) {
  const int N = g.num_nodes();
  std::vector<std::vector<std::string>> node_terms(static_cast<std::size_t>(N));
  json terms = json::array();
  for (const auto& t : g.terms) {
    json occ = json::array();
    for (const auto& o : t.occurrences) {
      occ.push_back({{"node", o.node}, {"start", o.start}, {"end", o.end}});
      auto& tags = node_terms[static_cast<std::size_t>(o.node)];
      if (std::find(tags.begin(), tags.end(), t.key()) == tags.end()) tags.push_back(t.key());
    }
    terms.push_back({{"term", t.key()}, {"frequency", t.frequency}, {"occurrences", occ}});
  }

  json nodes = json::array();
  for (const auto& e : g.nodes) {
    json n = {{"id", e.id},
              {"origin", to_string(e.origin)},
              {"start", e.start},
              {"end", e.end},
              {"text", node_text(g, e.id)},
              {"terms", node_terms[static_cast<std::size_t>(e.id)]}};
    if (e.leading_connective)
      n["connective"] = {{"surface", e.leading_connective->surface},
                         {"kind", to_string(e.leading_connective->kind)}};
    else
      n["connective"] = nullptr;
    nodes.push_back(std::move(n));
  }

  json exp = json::array(), imp = json::array(), var = json::array();
  for (int i = 0; i < N; ++i) {
    for (int j = i + 1; j < N; ++j) {
      if (g.adj_explicit(i, j) != 0.0) exp.push_back({i, j});
      if (g.adj_implicit(i, j) != 0.0) imp.push_back({i, j});
      if (g.adj_variable(i, j) != 0.0 || g.adj_variable(j, i) != 0.0)
        var.push_back({i, j, g.adj_variable(i, j), g.adj_variable(j, i)});
    }
  }

  json out = {{"format", "logigraph.graph"},
              {"version", 1},
              {"tokens", g.tokens},
              {"boundary", g.boundary},
              {"num_context", g.num_context},
              {"nodes", nodes},
              {"terms", terms},
              {"edges", {{"explicit", exp}, {"implicit", imp}, {"variable", var}}},
              {"pos_map", g.pos_map.node_of}};
  return out.dump(indent);
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

} // namespace

std::string graph_to_dot(const LogicGraph& g) {
  std::ostringstream ss;
  ss << "graph logic {\n";
  ss << "  node [shape=box, style=filled];\n";
  for (const auto& e : g.nodes) {
    ss << "  n" << e.id << " [label=\"" << e.id << ": " << dot_escape(node_text(g, e.id))
       << "\", fillcolor=\"" << (e.origin == Origin::Context ? "lightblue" : "lightyellow")
       << "\"];\n";
  }
  const int N = g.num_nodes();
  for (int i = 0; i < N; ++i) {
    for (int j = i + 1; j < N; ++j) {
      if (g.adj_explicit(i, j) != 0.0)
        ss << "  n" << i << " -- n" << j << " [type=explicit, style=solid, color=black];\n";
      if (g.adj_implicit(i, j) != 0.0)
        ss << "  n" << i << " -- n" << j << " [type=implicit, style=dashed, color=gray40];\n";
      if (g.adj_variable(i, j) != 0.0)
        ss << "  n" << i << " -- n" << j << " [type=variable, style=dotted, color=blue];\n";
    }
  }
  ss << "}\n";
  return ss.str();
}

} // namespace logigraph
