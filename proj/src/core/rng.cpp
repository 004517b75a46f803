#include "prd/core/rng.hpp"

#include "prd/core/error.hpp"

namespace prd {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

std::uint64_t episode_stream_key(std::uint64_t run_seed, std::uint64_t episode) {
  return mix64(mix64(run_seed + kGolden) ^ mix64(episode * 0xd1b54a32d192ed03ULL + 1));
}

std::uint64_t CounterRng::next_u64() {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double CounterRng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t CounterRng::below(std::uint64_t n) {
  require(n > 0, "CounterRng::below: n must be positive");
  // Multiply-shift; bias is below 2^-64 * n and irrelevant here.
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
}

int CounterRng::categorical(std::span<const double> probs) {
  require(!probs.empty(), "CounterRng::categorical: empty distribution");
  double total = 0.0;
  for (double p : probs) total += p;
  const double u = uniform() * total;
  double acc = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    acc += probs[k];
    if (u < acc) return static_cast<int>(k);
  }
  // u landed on the rounding gap at the top; return the last positive entry.
  for (std::size_t k = probs.size(); k-- > 0;) {
    if (probs[k] > 0.0) return static_cast<int>(k);
  }
  return static_cast<int>(probs.size()) - 1;
}

CounterRng CounterRng::fork(std::uint64_t salt) const {
  return CounterRng(mix64(key_ ^ mix64(salt + kGolden)));
}

}  // namespace prd
