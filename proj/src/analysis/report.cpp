#include "prd/analysis/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include "json.hpp"

#include "prd/analysis/svg.hpp"
#include "prd/core/error.hpp"
#include "prd/trainer/metrics.hpp"

namespace prd::analysis {

namespace {

std::vector<double> moving_average(const std::vector<double>& x, int window) {
  std::vector<double> out(x.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sum += x[k];
    if (k >= static_cast<std::size_t>(window)) sum -= x[k - window];
    const std::size_t n = std::min<std::size_t>(k + 1, window);
    out[k] = sum / static_cast<double>(n);
  }
  return out;
}

std::string file_list(const std::vector<std::filesystem::path>& files) {
  std::string s;
  for (const auto& f : files) s += "\n  " + f.string();
  return s;
}

}  // namespace

std::string variant_label(const std::filesystem::path& metrics_file) {
  const auto dir = metrics_file.parent_path();
  const auto cfg = dir / "config.json";
  if (std::filesystem::exists(cfg)) {
    std::ifstream in(cfg);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_object() && j.contains("algorithm") && j["algorithm"].is_string()) return j["algorithm"];
  }
  const std::string name = dir.filename().string();
  return name.empty() ? metrics_file.stem().string() : name;
}

std::vector<Curve> learning_curves(const std::vector<std::filesystem::path>& files, int window) {
  require(!files.empty(), "report: need at least one metrics file");
  require(window >= 1, "report: moving-average window must be >= 1");
  std::vector<train::MetricsTable> tables;
  for (const auto& f : files) tables.push_back(train::read_metrics_csv(f));
  for (std::size_t k = 1; k < tables.size(); ++k) {
    if (tables[k].episode != tables[0].episode) {
      throw FormatError("report: metrics files cover different episode ranges:" + file_list(files));
    }
  }

  std::map<std::string, std::vector<std::size_t>> groups;
  std::vector<std::string> order;
  for (std::size_t k = 0; k < files.size(); ++k) {
    const std::string label = variant_label(files[k]);
    if (!groups.count(label)) order.push_back(label);
    groups[label].push_back(k);
  }

  std::vector<Curve> curves;
  const std::size_t n = tables[0].episode.size();
  for (const auto& label : order) {
    Curve c;
    c.variant = label;
    c.episode = tables[0].episode;
    c.mean.assign(n, 0.0);
    c.std.assign(n, 0.0);
    std::vector<std::vector<double>> smoothed;
    for (std::size_t k : groups[label]) {
      c.files.push_back(files[k]);
      smoothed.push_back(moving_average(tables[k].group_reward, window));
    }
    const double trials = static_cast<double>(smoothed.size());
    for (std::size_t e = 0; e < n; ++e) {
      double s = 0.0;
      for (const auto& tr : smoothed) s += tr[e];
      const double mean = s / trials;
      double ss = 0.0;
      for (const auto& tr : smoothed) ss += (tr[e] - mean) * (tr[e] - mean);
      c.mean[e] = mean;
      c.std[e] = std::sqrt(ss / trials);
    }
    curves.push_back(std::move(c));
  }
  return curves;
}

std::string render_curves_svg(const std::vector<Curve>& curves, const std::string& title) {
  const double w = 720, h = 440, left = 70, right = 160, top = 30, bottom = 50;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 0;
  bool first = true;
  for (const auto& c : curves) {
    for (std::size_t e = 0; e < c.episode.size(); ++e) {
      const double lo = c.mean[e] - c.std[e], hi = c.mean[e] + c.std[e];
      if (first) {
        x0 = x1 = static_cast<double>(c.episode[e]);
        y0 = lo;
        y1 = hi;
        first = false;
      }
      x0 = std::min(x0, static_cast<double>(c.episode[e]));
      x1 = std::max(x1, static_cast<double>(c.episode[e]));
      y0 = std::min(y0, lo);
      y1 = std::max(y1, hi);
    }
  }
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) {
    y0 -= 1;
    y1 += 1;
  }
  const double pw = w - left - right, ph = h - top - bottom;
  auto X = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto Y = [&](double y) { return top + (y1 - y) / (y1 - y0) * ph; };

  Svg svg(w, h);
  svg.rect(0, 0, w, h, "white");
  svg.rect(left, top, pw, ph, "none", "black");
  char buf[64];
  for (int k = 0; k <= 4; ++k) {
    const double yv = y0 + (y1 - y0) * k / 4.0;
    std::snprintf(buf, sizeof buf, "%.3g", yv);
    svg.text(left - 6, Y(yv) + 4, buf, 11, "end");
    const double xv = x0 + (x1 - x0) * k / 4.0;
    std::snprintf(buf, sizeof buf, "%.0f", xv);
    svg.text(X(xv), top + ph + 16, buf, 11, "middle");
  }
  svg.text(left + pw / 2, h - 12, "episode", 12, "middle");
  svg.text(14, top + ph / 2, "group reward", 12, "start");
  if (!title.empty()) svg.text(left + pw / 2, 18, title, 14, "middle");

  for (std::size_t ci = 0; ci < curves.size(); ++ci) {
    const auto& c = curves[ci];
    const std::string color = palette(static_cast<int>(ci));
    // At most ~1000 plotted points per curve; the last point is always kept.
    const std::size_t n = c.episode.size();
    const std::size_t stride = std::max<std::size_t>(1, n / 1000);
    std::vector<std::size_t> idx;
    for (std::size_t e = 0; e < n; e += stride) idx.push_back(e);
    if (n > 0 && idx.back() != n - 1) idx.push_back(n - 1);
    std::vector<std::pair<double, double>> band, line;
    for (std::size_t e : idx) {
      band.emplace_back(X(static_cast<double>(c.episode[e])), Y(c.mean[e] + c.std[e]));
      line.emplace_back(X(static_cast<double>(c.episode[e])), Y(c.mean[e]));
    }
    for (auto it = idx.rbegin(); it != idx.rend(); ++it) {
      band.emplace_back(X(static_cast<double>(c.episode[*it])), Y(c.mean[*it] - c.std[*it]));
    }
    svg.polygon(band, color, 0.2);
    svg.polyline(line, color, 1.5);
    const double ly = top + 16 + 18.0 * static_cast<double>(ci);
    svg.line(left + pw + 12, ly - 4, left + pw + 32, ly - 4, color, 3);
    svg.text(left + pw + 38, ly, c.variant + " (n=" + std::to_string(c.files.size()) + ")", 11);
  }
  return svg.str();
}

void report(const std::vector<std::filesystem::path>& files, const std::filesystem::path& out, int window) {
  const auto curves = learning_curves(files, window);
  std::ofstream f(out, std::ios::trunc);
  if (!f) throw FormatError("cannot open report for writing: " + out.string());
  f << render_curves_svg(curves, "mean episode group reward");
}

}  // namespace prd::analysis
