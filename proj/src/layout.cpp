#include "portrait/layout.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "portrait/text.hpp"

namespace portrait {

VogelPoint vogel_position(std::int64_t n, double c, Point center) {
  if (n < 1) throw std::invalid_argument("floret index must be >= 1");
  if (!(c > 0)) throw std::invalid_argument("floret spacing must be positive");
  VogelPoint p;
  p.radius = c * std::sqrt(static_cast<double>(n));
  p.theta_deg = static_cast<double>(n) * kGoldenAngleDeg;
  const double rad = std::fmod(p.theta_deg, 360.0) * std::numbers::pi / 180.0;
  p.x = p.radius * std::cos(rad) + center.x;
  p.y = p.radius * std::sin(rad) + center.y;
  return p;
}

std::map<std::string, std::int64_t> assign_indices(std::span<const Post> posts) {
  std::vector<const Post*> order;
  order.reserve(posts.size());
  for (const auto& p : posts) order.push_back(&p);
  std::sort(order.begin(), order.end(), [](const Post* a, const Post* b) {
    return a->timestamp != b->timestamp ? a->timestamp < b->timestamp : a->id < b->id;
  });
  std::map<std::string, std::int64_t> out;
  std::int64_t n = 0;
  for (const auto* p : order) out.emplace(p->id, ++n);
  return out;
}

void validate(const LayoutParams& p) {
  if (!(p.canvas_width > 0 && p.canvas_height > 0)) throw std::invalid_argument("canvas must have positive size");
  if (!(p.vogel_c > 0)) throw std::invalid_argument("vogel_c must be positive");
  if (!(p.font_min > 0 && p.font_max >= p.font_min)) throw std::invalid_argument("invalid font size range");
  if (!(p.char_width > 0 && p.line_height > 0)) throw std::invalid_argument("invalid font metrics");
  if (!(p.spiral_spacing > 0 && p.spiral_step > 0)) throw std::invalid_argument("invalid spiral parameters");
  if (p.click_expand < 0) throw std::invalid_argument("click expansion must be nonnegative");
  if (p.palette.empty()) throw std::invalid_argument("palette is empty");
}

double font_size_for(double score, double min_score, double max_score, const LayoutParams& params) {
  if (!(max_score > min_score)) return params.font_max;
  return params.font_min + (params.font_max - params.font_min) * (score - min_score) / (max_score - min_score);
}

namespace {

// Uniform bucket grid over circle boxes.
class CircleIndex {
 public:
  CircleIndex(std::span<const CircleGlyph> circles, double cell) : cell_(cell) {
    for (std::size_t i = 0; i < circles.size(); ++i) {
      boxes_.push_back(circles[i].box());
      visit_cells(boxes_.back(), [&](std::int64_t key) { cells_[key].push_back(i); });
    }
  }

  bool hits(const Box& b) const {
    bool hit = false;
    visit_cells(b, [&](std::int64_t key) {
      if (hit) return;
      auto it = cells_.find(key);
      if (it == cells_.end()) return;
      for (auto i : it->second)
        if (boxes_[i].intersects(b)) {
          hit = true;
          return;
        }
    });
    return hit;
  }

 private:
  template <typename F>
  void visit_cells(const Box& b, F&& f) const {
    const auto cx0 = static_cast<std::int64_t>(std::floor(b.x0 / cell_));
    const auto cx1 = static_cast<std::int64_t>(std::floor(b.x1 / cell_));
    const auto cy0 = static_cast<std::int64_t>(std::floor(b.y0 / cell_));
    const auto cy1 = static_cast<std::int64_t>(std::floor(b.y1 / cell_));
    for (auto cx = cx0; cx <= cx1; ++cx)
      for (auto cy = cy0; cy <= cy1; ++cy) f((cx << 32) ^ (cy & 0xffffffff));
  }

  double cell_;
  std::vector<Box> boxes_;
  std::unordered_map<std::int64_t, std::vector<std::size_t>> cells_;
};

std::size_t display_length(const std::string& s) { return text::decode_utf8(s).size(); }

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

LabelPlacement place_labels(const PreferenceProfile& profile, std::span<const CircleGlyph> circles,
                            const LayoutParams& params) {
  validate(params);
  LabelPlacement out;
  if (profile.topics.empty()) return out;

  double min_score = profile.topics.front().score;
  double max_score = min_score;
  for (const auto& t : profile.topics) {
    min_score = std::min(min_score, t.score);
    max_score = std::max(max_score, t.score);
  }

  std::vector<LabelGlyph> glyphs;
  for (std::size_t i = 0; i < profile.topics.size(); ++i) {
    const auto& t = profile.topics[i];
    LabelGlyph g;
    g.gram = t.gram;
    g.display = t.display.empty() ? t.gram : t.display;
    g.kind = t.kind;
    g.score = t.score;
    g.font_size = font_size_for(t.score, min_score, max_score, params);
    g.color = params.palette[i % params.palette.size()];
    const double w = static_cast<double>(std::max<std::size_t>(1, display_length(g.display))) * params.char_width *
                     g.font_size;
    const double h = params.line_height * g.font_size;
    if (w > params.canvas_width || h > params.canvas_height)
      throw std::invalid_argument("canvas too small for label '" + g.gram + "'");
    g.box = Box::centered({}, w, h);
    glyphs.push_back(std::move(g));
  }

  double max_r = 0;
  for (const auto& c : circles) max_r = std::max(max_r, c.radius);
  const CircleIndex index(circles, std::max(4 * max_r, 16.0));

  const Box canvas{0, 0, params.canvas_width, params.canvas_height};
  const Point center{params.canvas_width / 2, params.canvas_height / 2};
  const double max_rho = std::hypot(params.canvas_width, params.canvas_height) / 2;
  const double two_pi = 2 * std::numbers::pi;
  std::mt19937_64 rng(params.seed);

  for (auto& g : glyphs) {
    const double start = uniform01(rng) * two_pi;
    const double w = g.box.width();
    const double h = g.box.height();
    bool placed = false;
    double phi = 0;
    for (double rho = 0; rho <= max_rho; rho = params.spiral_spacing * phi / two_pi) {
      const Point p{center.x + rho * std::cos(start + phi), center.y + rho * std::sin(start + phi)};
      const Box b = Box::centered(p, w, h);
      phi += params.spiral_step / std::max(rho, params.spiral_step);
      if (!canvas.contains(b)) continue;
      if (std::any_of(out.labels.begin(), out.labels.end(), [&](const LabelGlyph& o) { return o.box.intersects(b); }))
        continue;
      if (index.hits(b)) continue;
      g.position = p;
      g.box = b;
      g.click_box = Box::centered(p, w * (1 + params.click_expand), h * (1 + params.click_expand));
      placed = true;
      break;
    }
    if (placed)
      out.labels.push_back(std::move(g));
    else
      out.dropped.push_back(g.gram);
  }
  return out;
}

PortraitLayout build_layout(const std::string& user_id, const PreferenceProfile& profile, std::span<const Post> posts,
                            const LayoutParams& params) {
  validate(params);
  PortraitLayout layout;
  layout.user_id = user_id;
  layout.width = params.canvas_width;
  layout.height = params.canvas_height;

  for (std::size_t i = 0; i < profile.topics.size(); ++i)
    layout.palette[profile.topics[i].gram] = params.palette[i % params.palette.size()];

  const auto indices = assign_indices(posts);
  if (indices.size() != posts.size()) throw std::invalid_argument("build_layout: duplicate post ids");
  std::vector<const Post*> by_index(posts.size());
  for (const auto& p : posts) by_index[static_cast<std::size_t>(indices.at(p.id) - 1)] = &p;

  const Point center{params.canvas_width / 2, params.canvas_height / 2};
  for (const Post* p : by_index) {
    const auto grams = gram_set(tokenize(p->text));
    CircleGlyph c;
    c.post_id = p->id;
    c.n = indices.at(p->id);
    const auto v = vogel_position(c.n, params.vogel_c, center);
    c.center = {v.x, v.y};
    c.radius = params.circle_radius_factor * params.vogel_c;
    c.text = p->text;
    c.timestamp = p->timestamp;
    c.color_topic = kMiscTopic;
    // Topics are rank ordered, so the first contained one is the primary topic.
    for (const auto& t : profile.topics) {
      if (!grams.contains(t.gram)) continue;
      if (c.color_topic == kMiscTopic) c.color_topic = t.gram;
      layout.links[t.gram].push_back(p->id);
    }
    c.color = c.color_topic == kMiscTopic ? params.misc_color : layout.palette.at(c.color_topic);
    layout.circles.push_back(std::move(c));
  }

  auto placement = place_labels(profile, layout.circles, params);
  layout.labels = std::move(placement.labels);
  layout.dropped_labels = std::move(placement.dropped);
  return layout;
}

}  // namespace portrait
