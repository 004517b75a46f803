#include "prd/nets/checkpoint.hpp"

#include <fstream>

#include "prd/core/binary_io.hpp"
#include "prd/core/error.hpp"

namespace prd::nets {

namespace {
constexpr char kMagic[] = "PRDCKPT1";

void write_vector(std::ostream& out, const Eigen::VectorXd& v) {
  for (Eigen::Index k = 0; k < v.size(); ++k) io::write_f64(out, v[k]);
}

Eigen::VectorXd read_vector(std::istream& in, std::uint64_t n) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (std::uint64_t k = 0; k < n; ++k) v[static_cast<Eigen::Index>(k)] = io::read_f64(in);
  return v;
}
}  // namespace

const NetworkBlob& Checkpoint::network(const std::string& name) const {
  for (const auto& n : networks) {
    if (n.name == name) return n;
  }
  throw FormatError("checkpoint has no network named " + name);
}

NetworkBlob make_blob(const std::string& name, const ParameterSet& params, const AdamState& optimizer) {
  NetworkBlob blob{name, params.segments(), params.values(), optimizer};
  if (blob.optimizer.first_moment.size() == 0) blob.optimizer = AdamState::zeros(params.size());
  return blob;
}

void load_blob(const NetworkBlob& blob, ParameterSet& params, AdamState& optimizer) {
  if (blob.segments != params.segments()) {
    throw FormatError("checkpoint layout for network " + blob.name + " does not match the configured network");
  }
  params.values() = blob.params;
  optimizer = blob.optimizer;
}

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open checkpoint for writing: " + path.string());
  out.write(kMagic, 8);
  io::write_u32(out, ckpt.version);
  io::write_u64(out, static_cast<std::uint64_t>(ckpt.num_agents));
  io::write_u64(out, static_cast<std::uint64_t>(ckpt.num_actions));
  io::write_u64(out, ckpt.episodes_completed);
  io::write_string(out, ckpt.config_json);
  io::write_u64(out, ckpt.networks.size());
  for (const auto& net : ckpt.networks) {
    io::write_string(out, net.name);
    io::write_u64(out, net.segments.size());
    for (const auto& s : net.segments) {
      io::write_string(out, s.name);
      io::write_u64(out, static_cast<std::uint64_t>(s.rows));
      io::write_u64(out, static_cast<std::uint64_t>(s.cols));
    }
    io::write_u64(out, static_cast<std::uint64_t>(net.params.size()));
    write_vector(out, net.params);
    io::write_u64(out, net.optimizer.steps);
    write_vector(out, net.optimizer.first_moment);
    write_vector(out, net.optimizer.second_moment);
  }
  if (!out) throw FormatError("failed writing checkpoint: " + path.string());
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open checkpoint: " + path.string());
  io::expect_magic(in, std::string(kMagic, 8));
  Checkpoint ckpt;
  ckpt.version = io::read_u32(in);
  if (ckpt.version != kCheckpointVersion) {
    throw FormatError("checkpoint format version " + std::to_string(ckpt.version) + " is not supported (expected " +
                      std::to_string(kCheckpointVersion) + ")");
  }
  ckpt.num_agents = static_cast<int>(io::read_u64(in));
  ckpt.num_actions = static_cast<int>(io::read_u64(in));
  ckpt.episodes_completed = io::read_u64(in);
  ckpt.config_json = io::read_string(in);
  const std::uint64_t n_nets = io::read_u64(in);
  if (n_nets > 16) throw FormatError("implausible network count in checkpoint");
  for (std::uint64_t k = 0; k < n_nets; ++k) {
    NetworkBlob net;
    net.name = io::read_string(in);
    const std::uint64_t n_seg = io::read_u64(in);
    if (n_seg > 4096) throw FormatError("implausible segment count in checkpoint");
    Eigen::Index offset = 0;
    for (std::uint64_t s = 0; s < n_seg; ++s) {
      Segment seg;
      seg.name = io::read_string(in);
      seg.rows = static_cast<int>(io::read_u64(in));
      seg.cols = static_cast<int>(io::read_u64(in));
      seg.offset = offset;
      offset += seg.size();
      net.segments.push_back(seg);
    }
    const std::uint64_t n = io::read_u64(in);
    if (static_cast<Eigen::Index>(n) != offset) throw FormatError("checkpoint parameter count disagrees with layout");
    net.params = read_vector(in, n);
    net.optimizer.steps = io::read_u64(in);
    net.optimizer.first_moment = read_vector(in, n);
    net.optimizer.second_moment = read_vector(in, n);
    ckpt.networks.push_back(std::move(net));
  }
  return ckpt;
}

}  // namespace prd::nets
