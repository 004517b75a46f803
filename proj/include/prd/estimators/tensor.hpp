#pragma once

#include <cstdint>
#include <vector>

#include "prd/core/error.hpp"

namespace prd::est {

// Dense (steps x agents x agents) array, index (t, i, j), j fastest.
template <typename T>
class Array3 {
 public:
  Array3() = default;
  Array3(int steps, int agents, T fill = T{})
      : steps_(steps), agents_(agents), data_(static_cast<std::size_t>(steps) * agents * agents, fill) {
    require(steps >= 0 && agents >= 0, "Array3: negative extent");
  }

  int steps() const { return steps_; }
  int agents() const { return agents_; }
  bool same_shape(int steps, int agents) const { return steps_ == steps && agents_ == agents; }

  T& operator()(int t, int i, int j) { return data_[index(t, i, j)]; }
  const T& operator()(int t, int i, int j) const { return data_[index(t, i, j)]; }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }
  friend bool operator==(const Array3&, const Array3&) = default;

 private:
  std::size_t index(int t, int i, int j) const {
    return (static_cast<std::size_t>(t) * agents_ + i) * agents_ + j;
  }

  int steps_ = 0;
  int agents_ = 0;
  std::vector<T> data_;
};

// A(t, i, j): advantage of agent i's action at t measured on agent j's rewards.
using AdvantageTensor = Array3<double>;
// Regression targets for V(i, j) at each step.
using TargetTensor = Array3<double>;

}  // namespace prd::est
