#pragma once

#include <filesystem>
#include <iosfwd>

#include "prd/core/types.hpp"

namespace prd {

inline constexpr std::uint32_t kEpisodeFormatVersion = 1;

// Flat binary record, little endian:
//   "PRDEPIS1" | u32 version | u64 M | u64 T | u64 K | u64 has_critic
//   | f64 states[(T+1) * M * 6] (pos.x, pos.y, vel.x, vel.y, goal.x, goal.y)
//   | f64 actions[T * M] | f64 rewards[T * M] | f64 log_probs[T * M]
//   | when has_critic: f64 values[(T+1) * M * M], f64 attention[T * M * M]
// Matrices are row-major.
void write_episode(std::ostream& out, const Episode& ep);
Episode read_episode(std::istream& in);
void write_episode_file(const std::filesystem::path& path, const Episode& ep);
Episode read_episode_file(const std::filesystem::path& path);

// One JSON object per timestep: state, action, reward, log-probs and, when
// present, the critic's value and attention matrices.
void write_episode_jsonl(std::ostream& out, const Episode& ep);

}  // namespace prd
