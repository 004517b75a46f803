#pragma once

#include <string>
#include <utility>
#include <vector>

#include "prd/core/types.hpp"
#include "prd/envs/env_spec.hpp"

namespace prd::analysis {

// Minimal SVG document builder. Coordinates are in output pixels.
class Svg {
 public:
  Svg(double width, double height);

  void rect(double x, double y, double w, double h, const std::string& fill, const std::string& stroke = "none");
  void line(double x1, double y1, double x2, double y2, const std::string& stroke, double width = 1.0);
  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke, double width = 1.0);
  void polygon(const std::vector<std::pair<double, double>>& pts, const std::string& fill, double opacity = 1.0);
  void circle(double cx, double cy, double r, const std::string& fill, const std::string& stroke = "none");
  void text(double x, double y, const std::string& s, double size = 12.0, const std::string& anchor = "start");

  std::string str() const;

 private:
  double width_, height_;
  std::string body_;
};

// Categorical color for series or agent k.
std::string palette(int k);

// Arena with each agent's trail, start, goal, any goal regions and a red
// marker at every timestep where two agents are within the collision radius.
std::string render_episode_svg(const Episode& ep, const envs::EnvSpec& spec);

}  // namespace prd::analysis
