#include "lcl/graph_io.hpp"

#include <fstream>
#include <sstream>

namespace lcl {

namespace {

void reject_floats(const nlohmann::json& j) {
  if (j.is_number_float()) throw Error("graph files must not contain floating-point values");
  if (j.is_structured())
    for (const auto& child : j) reject_floats(child);
}

}  // namespace

std::string canonical_dump(const nlohmann::json& j) {
  reject_floats(j);
  return j.dump();
}

nlohmann::json graph_to_json(const GraphDocument& doc) {
  using nlohmann::json;
  const Tree& t = doc.tree;
  json edges = json::array();
  for (auto [u, v] : t.edges()) edges.push_back(json::array({u, v}));
  json j = {{"n", t.size()}, {"edges", std::move(edges)}, {"meta", doc.meta}};
  if (doc.explicit_ids) j["ids"] = t.ids();
  if (doc.explicit_inputs) {
    json inputs = json::array();
    for (NodeId v = 0; v < t.size(); ++v) inputs.push_back(t.input(v) == InputLabel::Active ? "Active" : "Weight");
    j["inputs"] = std::move(inputs);
  }
  return j;
}

GraphDocument graph_from_json(const nlohmann::json& j) {
  reject_floats(j);
  const std::size_t n = j.at("n").get<std::size_t>();
  std::vector<Edge> edges;
  edges.reserve(n > 0 ? n - 1 : 0);
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) throw Error("edge entries must be [u, v] pairs");
    edges.emplace_back(e[0].get<NodeId>(), e[1].get<NodeId>());
  }
  GraphDocument doc;
  std::optional<std::vector<std::uint64_t>> ids;
  std::optional<std::vector<InputLabel>> inputs;
  if (j.contains("ids")) {
    ids = j.at("ids").get<std::vector<std::uint64_t>>();
    doc.explicit_ids = true;
  }
  if (j.contains("inputs")) {
    std::vector<InputLabel> in;
    for (const auto& s : j.at("inputs")) {
      const auto str = s.get<std::string>();
      if (str == "Active") in.push_back(InputLabel::Active);
      else if (str == "Weight") in.push_back(InputLabel::Weight);
      else throw Error("unknown input label '" + str + "'");
    }
    inputs = std::move(in);
    doc.explicit_inputs = true;
  }
  doc.tree = build_tree(n, edges, std::move(inputs), std::move(ids));
  if (j.contains("meta")) doc.meta = j.at("meta");
  return doc;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return nlohmann::json::parse(in);
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out) throw Error("write failed for " + path);
}

GraphDocument load_graph(const std::string& path) { return graph_from_json(read_json_file(path)); }

void save_graph(const std::string& path, const GraphDocument& doc) {
  write_text_file(path, canonical_dump(graph_to_json(doc)) + "\n");
}

}  // namespace lcl
