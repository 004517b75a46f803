#pragma once

#include <cstdint>
#include <span>

namespace prd {

std::uint64_t mix64(std::uint64_t x);

// Key for the random stream of one episode. Streams depend only on
// (run_seed, episode), so episodes can be generated in any order or in
// parallel and still reproduce a serial run.
std::uint64_t episode_stream_key(std::uint64_t run_seed, std::uint64_t episode);

// Counter-based generator: the k-th draw is mix64(key + k * golden). Copying
// the object forks the stream; all draws are platform independent.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  std::uint64_t next_u64();
  // Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);
  // Index drawn from an (unnormalized, nonnegative) weight vector.
  int categorical(std::span<const double> probs);
  // Substream with an independent key (e.g. one per sub-task).
  CounterRng fork(std::uint64_t salt) const;

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace prd
