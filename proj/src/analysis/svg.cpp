#include "prd/analysis/svg.hpp"

#include <cstdio>

#include "prd/envs/environment.hpp"

namespace prd::analysis {

namespace {
std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string points(const std::vector<std::pair<double, double>>& pts) {
  std::string s;
  for (const auto& [x, y] : pts) {
    if (!s.empty()) s += ' ';
    s += num(x) + "," + num(y);
  }
  return s;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}
}  // namespace

Svg::Svg(double width, double height) : width_(width), height_(height) {}

void Svg::rect(double x, double y, double w, double h, const std::string& fill, const std::string& stroke) {
  body_ += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) + "\" height=\"" + num(h) +
           "\" fill=\"" + fill + "\" stroke=\"" + stroke + "\"/>\n";
}

void Svg::line(double x1, double y1, double x2, double y2, const std::string& stroke, double width) {
  body_ += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" + num(y2) +
           "\" stroke=\"" + stroke + "\" stroke-width=\"" + num(width) + "\"/>\n";
}

void Svg::polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke, double width) {
  body_ += "<polyline points=\"" + points(pts) + "\" fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" +
           num(width) + "\"/>\n";
}

void Svg::polygon(const std::vector<std::pair<double, double>>& pts, const std::string& fill, double opacity) {
  body_ += "<polygon points=\"" + points(pts) + "\" fill=\"" + fill + "\" fill-opacity=\"" + num(opacity) +
           "\" stroke=\"none\"/>\n";
}

void Svg::circle(double cx, double cy, double r, const std::string& fill, const std::string& stroke) {
  body_ += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(r) + "\" fill=\"" + fill +
           "\" stroke=\"" + stroke + "\"/>\n";
}

void Svg::text(double x, double y, const std::string& s, double size, const std::string& anchor) {
  body_ += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-size=\"" + num(size) +
           "\" font-family=\"sans-serif\" text-anchor=\"" + anchor + "\">" + escape(s) + "</text>\n";
}

std::string Svg::str() const {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width_) + "\" height=\"" + num(height_) +
         "\" viewBox=\"0 0 " + num(width_) + " " + num(height_) + "\">\n" + body_ + "</svg>\n";
}

std::string palette(int k) {
  static const char* kColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  return kColors[((k % 10) + 10) % 10];
}

std::string render_episode_svg(const Episode& ep, const envs::EnvSpec& spec) {
  const double size = 480.0;
  const double margin = 20.0;
  const double L = spec.arena_half_width;
  const double scale = (size - 2 * margin) / (2 * L);
  auto px = [&](Vec2 p) { return std::pair{margin + (p.x + L) * scale, margin + (L - p.y) * scale}; };

  Svg svg(size, size);
  svg.rect(0, 0, size, size, "white");
  svg.rect(margin, margin, size - 2 * margin, size - 2 * margin, "none", "black");
  for (std::size_t r = 0; r < spec.layout.regions.size(); ++r) {
    const auto [cx, cy] = px(spec.layout.regions[r].center);
    svg.circle(cx, cy, spec.layout.regions[r].radius * scale, "#eeeeee", palette(static_cast<int>(r)));
  }
  for (int i = 0; i < ep.num_agents; ++i) {
    std::vector<std::pair<double, double>> trail;
    for (const auto& s : ep.states) trail.push_back(px(s.agents[i].position));
    const std::string color = palette(i);
    svg.polyline(trail, color, 1.5);
    const auto [sx, sy] = trail.front();
    svg.circle(sx, sy, 3, color);
    const auto [gx, gy] = px(ep.states.front().agents[i].goal);
    svg.line(gx - 5, gy - 5, gx + 5, gy + 5, color, 2);
    svg.line(gx - 5, gy + 5, gx + 5, gy - 5, color, 2);
    svg.text(sx + 4, sy - 4, std::to_string(i), 10);
  }
  for (std::size_t t = 1; t < ep.states.size(); ++t) {
    for (const auto& [a, b] : envs::collision_events(ep.states[t], spec)) {
      const Vec2 mid = 0.5 * (ep.states[t].agents[a].position + ep.states[t].agents[b].position);
      const auto [cx, cy] = px(mid);
      svg.circle(cx, cy, 4, "none", "red");
    }
  }
  return svg.str();
}

}  // namespace prd::analysis
