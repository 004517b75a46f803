#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace prd::analysis {

struct Curve {
  std::string variant;
  std::vector<std::filesystem::path> files;
  std::vector<std::int64_t> episode;
  std::vector<double> mean;
  std::vector<double> std;  // population std across trials
};

// The variant label of a metrics file is the "algorithm" in a config.json
// beside it, falling back to the name of its directory.
std::string variant_label(const std::filesystem::path& metrics_file);

// Each trial's group reward is smoothed with a trailing moving average of
// the given window, then averaged across the trials of each variant. Every
// file must cover the same episodes.
std::vector<Curve> learning_curves(const std::vector<std::filesystem::path>& files, int window = 100);

std::string render_curves_svg(const std::vector<Curve>& curves, const std::string& title = "");

void report(const std::vector<std::filesystem::path>& files, const std::filesystem::path& out, int window = 100);

}  // namespace prd::analysis
