#pragma once

#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ric/graph.hpp"

namespace ric {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

struct GraphRecord {
  std::optional<std::string> id;
  Graph graph;
};

/// Canonical line form: nodes compacted to 0..n-1, edges [u,v] with u<v in
/// lexicographic order. Keys are emitted in the order id, n, edges.
inline ordered_json graph_to_json(const Graph& g, const std::optional<std::string>& id = std::nullopt) {
  const Graph c = compacted(g);
  ordered_json j;
  if (id) j["id"] = *id;
  j["n"] = c.node_count();
  ordered_json edges = ordered_json::array();
  for (const Edge& e : c.edges()) edges.push_back({e.u, e.v});
  j["edges"] = std::move(edges);
  return j;
}

inline GraphRecord graph_from_json(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("edges"))
    throw Error(Errc::ParseError, "graph object needs \"n\" and \"edges\"");
  GraphRecord rec;
  if (j.contains("id")) {
    if (!j["id"].is_string()) throw Error(Errc::ParseError, "\"id\" must be a string");
    rec.id = j["id"].get<std::string>();
  }
  if (!j["n"].is_number_unsigned()) throw Error(Errc::ParseError, "\"n\" must be a non-negative integer");
  const auto n = j["n"].get<std::size_t>();
  if (!j["edges"].is_array()) throw Error(Errc::ParseError, "\"edges\" must be an array");
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (const auto& e : j["edges"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() || !e[1].is_number_unsigned())
      throw Error(Errc::ParseError, "edge must be [u, v] with non-negative integers");
    const auto u = e[0].get<std::uint64_t>();
    const auto v = e[1].get<std::uint64_t>();
    if (u >= v) throw Error(Errc::ParseError, "edge must satisfy u < v");
    if (v >= n) throw Error(Errc::EndpointOutOfRange, "edge endpoint " + std::to_string(v) + " >= n");
    edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
  }
  rec.graph = Graph::from_edge_list(n, edges);
  return rec;
}

inline std::vector<GraphRecord> read_graphs(std::istream& in) {
  std::vector<GraphRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(graph_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(e.code() == Errc::IoError ? Errc::IoError : Errc::ParseError,
                  "line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

inline std::vector<GraphRecord> read_graphs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open " + path);
  return read_graphs(in);
}

inline void write_graph_line(std::ostream& out, const Graph& g, const std::optional<std::string>& id = std::nullopt) {
  out << graph_to_json(g, id).dump() << '\n';
}

inline void write_graphs(const std::string& path, const std::vector<GraphRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot write " + path);
  for (const auto& r : records) write_graph_line(out, r.graph, r.id);
  if (!out) throw Error(Errc::IoError, "write failed for " + path);
}

}  // namespace ric
