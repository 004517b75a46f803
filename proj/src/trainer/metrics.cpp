#include "prd/trainer/metrics.hpp"

#include <cstdio>
#include <sstream>

#include "json.hpp"

#include "prd/core/error.hpp"

namespace prd::train {

const char* const kMetricsCsvHeader =
    "episode,group_reward,mean_agent_reward,critic_loss,epsilon,mean_relevant_set_size,grad_norm";

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Keeps the header plus the first n data lines of a text file.
void truncate_lines(const std::filesystem::path& path, std::int64_t n, bool has_header) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot resume metrics: missing " + path.string());
  std::vector<std::string> kept;
  std::string line;
  const std::int64_t limit = n + (has_header ? 1 : 0);
  while (static_cast<std::int64_t>(kept.size()) < limit && std::getline(in, line)) kept.push_back(line);
  if (static_cast<std::int64_t>(kept.size()) < limit) {
    throw FormatError("cannot resume metrics: " + path.string() + " has fewer records than the checkpoint");
  }
  in.close();
  std::ofstream out(path, std::ios::trunc);
  for (const auto& l : kept) out << l << '\n';
}

}  // namespace

double MetricsRecord::mean_agent_reward() const {
  if (agent_rewards.empty()) return 0.0;
  return group_reward / static_cast<double>(agent_rewards.size());
}

std::string csv_row(const MetricsRecord& r) {
  std::string s = std::to_string(r.episode);
  for (double v : {r.group_reward, r.mean_agent_reward(), r.critic_loss, r.epsilon, r.mean_relevant_set_size,
                   r.grad_norm}) {
    s += ',';
    s += fmt(v);
  }
  return s;
}

std::string jsonl_row(const MetricsRecord& r) {
  nlohmann::json j;
  j["episode"] = r.episode;
  j["group_reward"] = r.group_reward;
  j["mean_agent_reward"] = r.mean_agent_reward();
  j["agent_rewards"] = r.agent_rewards;
  j["critic_loss"] = r.critic_loss;
  j["epsilon"] = r.epsilon;
  j["mean_relevant_set_size"] = r.mean_relevant_set_size;
  j["grad_norm"] = r.grad_norm;
  j["wall_ms"] = r.wall_ms;
  return j.dump();
}

MetricsWriter::MetricsWriter(const std::filesystem::path& dir, std::int64_t flush_interval,
                             std::int64_t resume_from)
    : csv_path_(dir / "metrics.csv"), jsonl_path_(dir / "metrics.jsonl"), flush_interval_(flush_interval) {
  require(flush_interval >= 1, "MetricsWriter: flush interval must be >= 1");
  std::filesystem::create_directories(dir);
  if (resume_from >= 0 && std::filesystem::exists(csv_path_) && std::filesystem::exists(jsonl_path_)) {
    truncate_lines(csv_path_, resume_from, true);
    truncate_lines(jsonl_path_, resume_from, false);
  } else {
    std::ofstream(csv_path_, std::ios::trunc) << kMetricsCsvHeader << '\n';
    std::ofstream(jsonl_path_, std::ios::trunc);
  }
}

MetricsWriter::~MetricsWriter() {
  try {
    flush();
  } catch (...) {
  }
}

void MetricsWriter::append(const MetricsRecord& r) {
  csv_pending_.push_back(csv_row(r));
  jsonl_pending_.push_back(jsonl_row(r));
  if (static_cast<std::int64_t>(csv_pending_.size()) >= flush_interval_) flush();
}

void MetricsWriter::flush() {
  if (csv_pending_.empty()) return;
  std::ofstream csv(csv_path_, std::ios::app);
  std::ofstream jsonl(jsonl_path_, std::ios::app);
  for (const auto& l : csv_pending_) csv << l << '\n';
  for (const auto& l : jsonl_pending_) jsonl << l << '\n';
  if (!csv || !jsonl) throw FormatError("failed writing metrics to " + csv_path_.parent_path().string());
  csv_pending_.clear();
  jsonl_pending_.clear();
}

MetricsTable read_metrics_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open metrics file: " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kMetricsCsvHeader) {
    throw FormatError("unexpected metrics header in " + path.string());
  }
  MetricsTable table;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string ep, reward;
    if (!std::getline(ss, ep, ',') || !std::getline(ss, reward, ',')) {
      throw FormatError("malformed metrics row in " + path.string() + ": " + line);
    }
    table.episode.push_back(std::stoll(ep));
    table.group_reward.push_back(std::stod(reward));
  }
  return table;
}

}  // namespace prd::train
