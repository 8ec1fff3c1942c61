#pragma once

#include <string>

#include <json.hpp>

#include "lcl/tree.hpp"

namespace lcl {

// A graph file: the tree plus free-form integer/string metadata.
// explicit_ids / explicit_inputs remember whether those arrays were present,
// so canonical files round-trip byte for byte.
struct GraphDocument {
  Tree tree;
  nlohmann::json meta = nlohmann::json::object();
  bool explicit_ids = false;
  bool explicit_inputs = false;
};

nlohmann::json graph_to_json(const GraphDocument& doc);
GraphDocument graph_from_json(const nlohmann::json& j);

// Canonical text: sorted keys, no whitespace, no floating-point values.
std::string canonical_dump(const nlohmann::json& j);

GraphDocument load_graph(const std::string& path);
void save_graph(const std::string& path, const GraphDocument& doc);

nlohmann::json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace lcl
