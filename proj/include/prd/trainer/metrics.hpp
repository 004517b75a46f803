#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace prd::train {

struct MetricsRecord {
  std::int64_t episode = 0;
  double group_reward = 0.0;
  std::vector<double> agent_rewards;  // undiscounted episode total per agent
  double critic_loss = 0.0;
  double epsilon = 0.0;
  double mean_relevant_set_size = 0.0;
  double grad_norm = 0.0;
  double wall_ms = 0.0;

  double mean_agent_reward() const;
};

// Fixed CSV header. Wall-clock time is only in the JSONL mirror so that the
// CSV of a run is a pure function of its config.
extern const char* const kMetricsCsvHeader;

std::string csv_row(const MetricsRecord& r);
std::string jsonl_row(const MetricsRecord& r);

// Buffers records and appends them to metrics.csv and metrics.jsonl in a run
// directory every flush_interval records (and on flush / destruction).
class MetricsWriter {
 public:
  // With resume_from >= 0, existing files are cut back to that many records
  // before appending; otherwise (or when absent) they are recreated.
  MetricsWriter(const std::filesystem::path& dir, std::int64_t flush_interval, std::int64_t resume_from = -1);
  ~MetricsWriter();
  MetricsWriter(const MetricsWriter&) = delete;
  MetricsWriter& operator=(const MetricsWriter&) = delete;

  void append(const MetricsRecord& r);
  void flush();

 private:
  std::filesystem::path csv_path_, jsonl_path_;
  std::int64_t flush_interval_;
  std::vector<std::string> csv_pending_, jsonl_pending_;
};

struct MetricsTable {
  std::vector<std::int64_t> episode;
  std::vector<double> group_reward;
};

// Reads the episode and group_reward columns of a metrics CSV.
MetricsTable read_metrics_csv(const std::filesystem::path& path);

}  // namespace prd::train
