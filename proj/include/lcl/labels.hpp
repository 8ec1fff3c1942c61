#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lcl/tree.hpp"

namespace lcl {

enum class Variant : std::uint8_t { TwoHalf, ThreeHalf };

enum class Color : std::uint8_t { W, B, E, D, R, G, Y };

enum class WeightChoice : std::uint8_t { Decline, Connect, Copy };

enum class DfreeInput : std::uint8_t { A, W };

// Secondary outputs: a colour, the Decline marker, or nothing.
enum class Secondary : std::uint8_t { None, W, B, E, D, R, G, Y, Decline };

inline Secondary secondary_of(Color c) { return static_cast<Secondary>(static_cast<int>(c) + 1); }
inline bool is_color(Secondary s) { return s != Secondary::None && s != Secondary::Decline; }
inline Color color_of(Secondary s) { return static_cast<Color>(static_cast<int>(s) - 1); }

// R_i (compress = false) or C_i (compress = true), i >= 1.
struct HierTag {
  bool compress = false;
  std::uint8_t index = 1;

  // R_1 < C_1 < R_2 < ... < C_{k-1} < R_k
  int rank() const { return compress ? 2 * index - 1 : 2 * (index - 1); }
  bool operator==(const HierTag&) const = default;
};

// Orientation of an incident edge seen from the owning node.
enum class Orient : std::uint8_t { None, Out, In };

struct NodeOutput {
  Color color = Color::W;
  WeightChoice choice = WeightChoice::Decline;
  HierTag tag{};
  Secondary secondary = Secondary::None;
  bool operator==(const NodeOutput&) const = default;
};

enum class Problem : std::uint8_t { Khier, Weighted, Dfree, Hier, WeightAugmented };

struct ProblemParams {
  Problem problem = Problem::Khier;
  Variant variant = Variant::TwoHalf;
  int k = 1;
  int delta = 0;
  int d = 0;
};

// Which NodeOutput fields carry meaning is fixed by the problem and the node's input.
struct Labeling {
  std::vector<NodeOutput> nodes;
  std::vector<Orient> orient;  // per tree slot; empty when the problem has no orientation
  bool operator==(const Labeling&) const = default;
};

std::string_view to_string(Color c);
std::string_view to_string(WeightChoice c);
std::string_view to_string(Secondary s);
std::string_view to_string(Variant v);
std::string to_string(HierTag t);
std::string_view to_string(Orient o);
std::string_view problem_name(const ProblemParams& p);

Color parse_color(std::string_view s);
WeightChoice parse_weight_choice(std::string_view s);
Secondary parse_secondary(std::string_view s);
Variant parse_variant(std::string_view s);
HierTag parse_hier_tag(std::string_view s);
Orient parse_orient(std::string_view s);
ProblemParams parse_problem(std::string_view name);

std::vector<Color> colors_of(const Labeling& l);
Labeling labeling_from_colors(const std::vector<Color>& colors);

// Labeling file format: {"problem", "params", "labels": [{"primary", "secondary"?, "orient"?}]}.
nlohmann::json labeling_to_json(const Tree& tree, const Labeling& l, const ProblemParams& p);
Labeling labeling_from_json(const Tree& tree, const nlohmann::json& j, ProblemParams* params_out = nullptr);

}  // namespace lcl
