#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "portrait/corpus.hpp"
#include "portrait/preferences.hpp"

namespace portrait {

// Angular step of the floret pattern, in degrees.
inline constexpr double kGoldenAngleDeg = 137.508;
inline constexpr const char* kMiscTopic = "misc";

struct Point {
  double x = 0;
  double y = 0;
};

// Axis-aligned rectangle. Boxes that only share an edge do not intersect.
struct Box {
  double x0 = 0;
  double y0 = 0;
  double x1 = 0;
  double y1 = 0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  bool intersects(const Box& o) const { return x0 < o.x1 && o.x0 < x1 && y0 < o.y1 && o.y0 < y1; }
  bool contains(const Box& o) const { return x0 <= o.x0 && y0 <= o.y0 && o.x1 <= x1 && o.y1 <= y1; }

  static Box centered(Point c, double w, double h) { return {c.x - w / 2, c.y - h / 2, c.x + w / 2, c.y + h / 2}; }
};

struct VogelPoint {
  double radius = 0;     // c * sqrt(n)
  double theta_deg = 0;  // n * 137.508, not reduced mod 360
  double x = 0;
  double y = 0;
};

// Throws std::invalid_argument for n < 1 or c <= 0.
VogelPoint vogel_position(std::int64_t n, double c, Point center);

// Oldest post gets 1; equal timestamps ordered by post id.
std::map<std::string, std::int64_t> assign_indices(std::span<const Post> posts);

struct CircleGlyph {
  std::string post_id;
  std::int64_t n = 0;
  Point center;
  double radius = 0;
  std::string color_topic;
  std::string color;
  // Carried for the balloon view.
  std::string text;
  std::int64_t timestamp = 0;

  Box box() const { return {center.x - radius, center.y - radius, center.x + radius, center.y + radius}; }
};

struct LabelGlyph {
  std::string gram;
  std::string display;
  TokenKind kind = TokenKind::word;
  double score = 0;
  double font_size = 0;
  Point position;  // center of both boxes
  Box box;
  Box click_box;
  std::string color;
};

struct LayoutParams {
  double canvas_width = 1200;
  double canvas_height = 900;
  double vogel_c = 10;
  double circle_radius_factor = 0.42;
  double font_min = 12;
  double font_max = 48;
  double char_width = 0.6;   // em fraction per character
  double line_height = 1.2;  // em fraction
  double click_expand = 0.2; // per axis
  double spiral_spacing = 6; // radial growth per turn, canvas units
  double spiral_step = 4;    // arc length between probes, canvas units
  std::uint64_t seed = 7;
  std::vector<std::string> palette{"#1f78b4", "#33a02c", "#e31a1c", "#ff7f00", "#6a3d9a", "#b15928",
                                   "#a6cee3", "#b2df8a", "#fb9a99", "#fdbf6f", "#cab2d6", "#8c8c00"};
  std::string misc_color = "#9e9e9e";
};

void validate(const LayoutParams& params);

// Linear between font_min and font_max over the profile's score range.
double font_size_for(double score, double min_score, double max_score, const LayoutParams& params);

struct LabelPlacement {
  std::vector<LabelGlyph> labels;
  std::vector<std::string> dropped;  // grams with no collision-free spot
};

// Places labels greedily in rank order along an outward spiral from the canvas
// center, each starting at a seeded random angle. A spot is taken only if the
// label box stays on the canvas and meets no placed label and no circle box.
// Throws std::invalid_argument when the largest label cannot fit the canvas.
LabelPlacement place_labels(const PreferenceProfile& profile, std::span<const CircleGlyph> circles,
                            const LayoutParams& params);

struct PortraitLayout {
  std::string user_id;
  double width = 0;
  double height = 0;
  std::vector<CircleGlyph> circles;  // by index n
  std::vector<LabelGlyph> labels;
  std::map<std::string, std::vector<std::string>> links;  // gram -> post ids by index
  std::map<std::string, std::string> palette;             // gram -> color
  std::vector<std::string> dropped_labels;
};

PortraitLayout build_layout(const std::string& user_id, const PreferenceProfile& profile, std::span<const Post> posts,
                            const LayoutParams& params);

}  // namespace portrait
