#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "prd/nets/adam.hpp"
#include "prd/nets/parameter_set.hpp"

namespace prd::nets {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct NetworkBlob {
  std::string name;
  std::vector<Segment> segments;
  Eigen::VectorXd params;
  AdamState optimizer;
};

// Binary layout (all integers u64 and reals f64, little endian):
//   "PRDCKPT1" | u32 version | M | K | episodes_completed | config_json
//   | network count | per network: name, segment count,
//     (segment name, rows, cols)..., parameter count, parameters,
//     adam steps, first moments, second moments.
// Strings are a u64 length followed by raw bytes.
struct Checkpoint {
  std::uint32_t version = kCheckpointVersion;
  int num_agents = 0;
  int num_actions = 0;
  std::uint64_t episodes_completed = 0;
  std::string config_json;
  std::vector<NetworkBlob> networks;

  const NetworkBlob& network(const std::string& name) const;
};

NetworkBlob make_blob(const std::string& name, const ParameterSet& params, const AdamState& optimizer);
// Copies blob values into params after checking the layout matches.
void load_blob(const NetworkBlob& blob, ParameterSet& params, AdamState& optimizer);

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
// Throws FormatError on a bad magic, a version mismatch or truncation.
Checkpoint read_checkpoint(const std::filesystem::path& path);

}  // namespace prd::nets
