#include "lcl/labels.hpp"

#include <array>
#include <charconv>

namespace lcl {

namespace {

constexpr std::array<std::string_view, 7> kColorNames{"W", "B", "E", "D", "R", "G", "Y"};
constexpr std::array<std::string_view, 3> kChoiceNames{"Decline", "Connect", "Copy"};

bool orient_used(Problem p) { return p == Problem::Hier || p == Problem::WeightAugmented; }

bool is_weight_node(const Tree& tree, NodeId v, Problem p) {
  if (p == Problem::Dfree) return true;
  if (p == Problem::Weighted || p == Problem::WeightAugmented) return tree.input(v) == InputLabel::Weight;
  return false;
}

}  // namespace

std::string_view to_string(Color c) { return kColorNames.at(static_cast<std::size_t>(c)); }

std::string_view to_string(WeightChoice c) { return kChoiceNames.at(static_cast<std::size_t>(c)); }

std::string_view to_string(Secondary s) {
  if (s == Secondary::None) return "None";
  if (s == Secondary::Decline) return "Decline";
  return to_string(color_of(s));
}

std::string_view to_string(Variant v) { return v == Variant::TwoHalf ? "2.5" : "3.5"; }

std::string to_string(HierTag t) { return (t.compress ? "C" : "R") + std::to_string(t.index); }

std::string_view to_string(Orient o) {
  switch (o) {
    case Orient::Out: return "out";
    case Orient::In: return "in";
    default: return "none";
  }
}

std::string_view problem_name(const ProblemParams& p) {
  switch (p.problem) {
    case Problem::Khier: return p.variant == Variant::TwoHalf ? "khier-2.5" : "khier-3.5";
    case Problem::Weighted: return p.variant == Variant::TwoHalf ? "weighted-2.5" : "weighted-3.5";
    case Problem::Dfree: return "dfree";
    case Problem::Hier: return "hier";
    case Problem::WeightAugmented: return "waug";
  }
  return "unknown";
}

Color parse_color(std::string_view s) {
  for (std::size_t i = 0; i < kColorNames.size(); ++i)
    if (kColorNames[i] == s) return static_cast<Color>(i);
  throw Error("unknown colour label '" + std::string(s) + "'");
}

WeightChoice parse_weight_choice(std::string_view s) {
  for (std::size_t i = 0; i < kChoiceNames.size(); ++i)
    if (kChoiceNames[i] == s) return static_cast<WeightChoice>(i);
  throw Error("unknown weight label '" + std::string(s) + "'");
}

Secondary parse_secondary(std::string_view s) {
  if (s == "Decline") return Secondary::Decline;
  return secondary_of(parse_color(s));
}

Variant parse_variant(std::string_view s) {
  if (s == "2.5") return Variant::TwoHalf;
  if (s == "3.5") return Variant::ThreeHalf;
  throw Error("unknown variant '" + std::string(s) + "'");
}

HierTag parse_hier_tag(std::string_view s) {
  if (s.size() < 2 || (s[0] != 'R' && s[0] != 'C')) throw Error("bad hierarchical label '" + std::string(s) + "'");
  unsigned idx = 0;
  auto [ptr, ec] = std::from_chars(s.data() + 1, s.data() + s.size(), idx);
  if (ec != std::errc{} || ptr != s.data() + s.size() || idx == 0 || idx > 255)
    throw Error("bad hierarchical label '" + std::string(s) + "'");
  return HierTag{s[0] == 'C', static_cast<std::uint8_t>(idx)};
}

Orient parse_orient(std::string_view s) {
  if (s == "out") return Orient::Out;
  if (s == "in") return Orient::In;
  if (s == "none") return Orient::None;
  throw Error("bad orientation '" + std::string(s) + "'");
}

ProblemParams parse_problem(std::string_view name) {
  ProblemParams p;
  if (name == "khier-2.5") p.problem = Problem::Khier;
  else if (name == "khier-3.5") p = {Problem::Khier, Variant::ThreeHalf};
  else if (name == "weighted-2.5") p.problem = Problem::Weighted;
  else if (name == "weighted-3.5") p = {Problem::Weighted, Variant::ThreeHalf};
  else if (name == "dfree") p.problem = Problem::Dfree;
  else if (name == "hier") p.problem = Problem::Hier;
  else if (name == "waug") p.problem = Problem::WeightAugmented;
  else throw Error("unknown problem '" + std::string(name) + "'");
  return p;
}

std::vector<Color> colors_of(const Labeling& l) {
  std::vector<Color> out(l.nodes.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = l.nodes[i].color;
  return out;
}

Labeling labeling_from_colors(const std::vector<Color>& colors) {
  Labeling l;
  l.nodes.resize(colors.size());
  for (std::size_t i = 0; i < colors.size(); ++i) l.nodes[i].color = colors[i];
  return l;
}

nlohmann::json labeling_to_json(const Tree& tree, const Labeling& l, const ProblemParams& p) {
  using nlohmann::json;
  if (l.nodes.size() != tree.size()) throw Error("labeling size does not match tree");
  json labels = json::array();
  for (NodeId v = 0; v < tree.size(); ++v) {
    const NodeOutput& o = l.nodes[v];
    json entry = json::object();
    const bool weight = is_weight_node(tree, v, p.problem);
    if (p.problem == Problem::Hier || (p.problem == Problem::WeightAugmented && weight)) {
      entry["primary"] = to_string(o.tag);
    } else if (weight) {
      entry["primary"] = std::string(to_string(o.choice));
    } else {
      entry["primary"] = std::string(to_string(o.color));
    }
    if (o.secondary != Secondary::None) entry["secondary"] = std::string(to_string(o.secondary));
    if (orient_used(p.problem) && !l.orient.empty()) {
      json orient = json::object();
      auto nb = tree.neighbors(v);
      for (std::size_t port = 0; port < nb.size(); ++port)
        orient[std::to_string(nb[port])] = std::string(to_string(l.orient[tree.slot(v, port)]));
      entry["orient"] = std::move(orient);
    }
    labels.push_back(std::move(entry));
  }
  json params = {{"k", p.k}, {"delta", p.delta}, {"d", p.d}, {"variant", std::string(to_string(p.variant))}};
  return json{{"problem", std::string(problem_name(p))}, {"params", params}, {"labels", std::move(labels)}};
}

Labeling labeling_from_json(const Tree& tree, const nlohmann::json& j, ProblemParams* params_out) {
  ProblemParams p = parse_problem(j.at("problem").get<std::string>());
  const auto& params = j.at("params");
  if (params.contains("k")) p.k = params.at("k").get<int>();
  if (params.contains("delta")) p.delta = params.at("delta").get<int>();
  if (params.contains("d")) p.d = params.at("d").get<int>();
  if (params.contains("variant")) p.variant = parse_variant(params.at("variant").get<std::string>());
  const auto& labels = j.at("labels");
  if (labels.size() != tree.size()) throw Error("labeling has " + std::to_string(labels.size()) + " entries, tree has " + std::to_string(tree.size()));
  Labeling l;
  l.nodes.resize(tree.size());
  if (orient_used(p.problem)) l.orient.assign(tree.slot_count(), Orient::None);
  for (NodeId v = 0; v < tree.size(); ++v) {
    const auto& e = labels[v];
    NodeOutput& o = l.nodes[v];
    const std::string primary = e.at("primary").get<std::string>();
    const bool weight = is_weight_node(tree, v, p.problem);
    if (p.problem == Problem::Hier || (p.problem == Problem::WeightAugmented && weight))
      o.tag = parse_hier_tag(primary);
    else if (weight)
      o.choice = parse_weight_choice(primary);
    else
      o.color = parse_color(primary);
    if (e.contains("secondary")) o.secondary = parse_secondary(e.at("secondary").get<std::string>());
    if (e.contains("orient")) {
      if (!orient_used(p.problem)) throw Error("orientation given for a problem without orientations");
      for (auto it = e.at("orient").begin(); it != e.at("orient").end(); ++it) {
        NodeId u = static_cast<NodeId>(std::stoul(it.key()));
        l.orient[tree.slot(v, tree.port_of(v, u))] = parse_orient(it.value().get<std::string>());
      }
    }
  }
  if (params_out) *params_out = p;
  return l;
}

}  // namespace lcl
