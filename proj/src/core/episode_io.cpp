#include "prd/core/episode_io.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include "json.hpp"
#include "prd/core/binary_io.hpp"
#include "prd/core/error.hpp"

namespace prd {

namespace {
constexpr char kMagic[] = "PRDEPIS1";

void write_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) io::write_f64(out, m(r, c));
  }
}

Eigen::MatrixXd read_matrix(std::istream& in, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = io::read_f64(in);
  }
  return m;
}

nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}
}  // namespace

void write_episode(std::ostream& out, const Episode& ep) {
  ep.validate();
  out.write(kMagic, 8);
  io::write_u32(out, kEpisodeFormatVersion);
  io::write_u64(out, static_cast<std::uint64_t>(ep.num_agents));
  io::write_u64(out, static_cast<std::uint64_t>(ep.horizon));
  io::write_u64(out, static_cast<std::uint64_t>(ep.num_actions));
  io::write_u64(out, ep.has_critic_outputs() ? 1 : 0);
  for (const auto& s : ep.states) {
    for (const auto& a : s.agents) {
      for (double v : {a.position.x, a.position.y, a.velocity.x, a.velocity.y, a.goal.x, a.goal.y}) {
        io::write_f64(out, v);
      }
    }
  }
  for (const auto& a : ep.actions) {
    for (int v : a.actions) io::write_f64(out, static_cast<double>(v));
  }
  for (const auto& r : ep.rewards) {
    for (double v : r.rewards) io::write_f64(out, v);
  }
  write_matrix(out, ep.log_probs);
  if (ep.has_critic_outputs()) {
    for (const auto& v : ep.value_matrices) write_matrix(out, v);
    for (const auto& w : ep.attention_matrices) write_matrix(out, w);
  }
}

Episode read_episode(std::istream& in) {
  io::expect_magic(in, std::string(kMagic, 8));
  const std::uint32_t version = io::read_u32(in);
  if (version != kEpisodeFormatVersion) {
    throw FormatError("episode format version " + std::to_string(version) + " is not supported");
  }
  Episode ep;
  const std::uint64_t m = io::read_u64(in);
  const std::uint64_t t_len = io::read_u64(in);
  const std::uint64_t k = io::read_u64(in);
  const std::uint64_t has_critic = io::read_u64(in);
  if (m == 0 || m > 4096 || t_len == 0 || t_len > (1u << 24) || k == 0 || k > 1024 || has_critic > 1) {
    throw FormatError("implausible episode header");
  }
  ep.num_agents = static_cast<int>(m);
  ep.horizon = static_cast<int>(t_len);
  ep.num_actions = static_cast<int>(k);
  for (std::uint64_t t = 0; t <= t_len; ++t) {
    JointState s;
    s.agents.resize(m);
    for (auto& a : s.agents) {
      a.position.x = io::read_f64(in);
      a.position.y = io::read_f64(in);
      a.velocity.x = io::read_f64(in);
      a.velocity.y = io::read_f64(in);
      a.goal.x = io::read_f64(in);
      a.goal.y = io::read_f64(in);
    }
    ep.states.push_back(std::move(s));
  }
  for (std::uint64_t t = 0; t < t_len; ++t) {
    JointAction a;
    for (std::uint64_t i = 0; i < m; ++i) {
      const double v = io::read_f64(in);
      if (!(v >= 0.0 && v < static_cast<double>(k) && v == std::floor(v))) throw FormatError("bad action value");
      a.actions.push_back(static_cast<int>(v));
    }
    ep.actions.push_back(std::move(a));
  }
  for (std::uint64_t t = 0; t < t_len; ++t) {
    RewardVector r;
    for (std::uint64_t i = 0; i < m; ++i) r.rewards.push_back(io::read_f64(in));
    ep.rewards.push_back(std::move(r));
  }
  ep.log_probs = read_matrix(in, ep.horizon, ep.num_agents);
  if (has_critic) {
    for (std::uint64_t t = 0; t <= t_len; ++t) ep.value_matrices.push_back(read_matrix(in, ep.num_agents, ep.num_agents));
    for (std::uint64_t t = 0; t < t_len; ++t) {
      ep.attention_matrices.push_back(read_matrix(in, ep.num_agents, ep.num_agents));
    }
  }
  try {
    ep.validate();
  } catch (const ContractViolation& e) {
    throw FormatError(std::string("invalid episode record: ") + e.what());
  }
  return ep;
}

void write_episode_file(const std::filesystem::path& path, const Episode& ep) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open episode file for writing: " + path.string());
  write_episode(out, ep);
}

Episode read_episode_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open episode file: " + path.string());
  return read_episode(in);
}

void write_episode_jsonl(std::ostream& out, const Episode& ep) {
  for (int t = 0; t <= ep.horizon; ++t) {
    nlohmann::json line;
    line["t"] = t;
    nlohmann::json agents = nlohmann::json::array();
    for (const auto& a : ep.states[t].agents) {
      agents.push_back({{"position", {a.position.x, a.position.y}},
                        {"velocity", {a.velocity.x, a.velocity.y}},
                        {"goal", {a.goal.x, a.goal.y}}});
    }
    line["agents"] = agents;
    if (t < ep.horizon) {
      line["actions"] = ep.actions[t].actions;
      line["rewards"] = ep.rewards[t].rewards;
      std::vector<double> lp(ep.num_agents);
      for (int i = 0; i < ep.num_agents; ++i) lp[i] = ep.log_probs(t, i);
      line["log_probs"] = lp;
    }
    if (ep.has_critic_outputs()) {
      line["values"] = matrix_json(ep.value_matrices[t]);
      if (t < ep.horizon) line["attention"] = matrix_json(ep.attention_matrices[t]);
    }
    out << line.dump() << '\n';
  }
}

}  // namespace prd
