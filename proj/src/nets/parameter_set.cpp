#include "prd/nets/parameter_set.hpp"

#include <cmath>

#include "prd/core/error.hpp"
#include "prd/core/rng.hpp"

namespace prd::nets {

int ParameterSet::add(const std::string& name, int rows, int cols) {
  require(rows > 0 && cols > 0, "ParameterSet::add: empty segment " + name);
  require(find(name) < 0, "ParameterSet::add: duplicate segment " + name);
  Segment seg{name, rows, cols, values_.size()};
  Eigen::VectorXd grown = Eigen::VectorXd::Zero(values_.size() + seg.size());
  grown.head(values_.size()) = values_;
  values_ = std::move(grown);
  segments_.push_back(seg);
  return static_cast<int>(segments_.size()) - 1;
}

ParameterSet::Map ParameterSet::view(int segment, Eigen::VectorXd& aligned) const {
  const Segment& s = segments_.at(segment);
  return Map(aligned.data() + s.offset, s.rows, s.cols);
}

ParameterSet::ConstMap ParameterSet::view(int segment, const Eigen::VectorXd& aligned) const {
  const Segment& s = segments_.at(segment);
  return ConstMap(aligned.data() + s.offset, s.rows, s.cols);
}

int ParameterSet::find(const std::string& name) const {
  for (std::size_t k = 0; k < segments_.size(); ++k) {
    if (segments_[k].name == name) return static_cast<int>(k);
  }
  return -1;
}

void ParameterSet::validate() const {
  Eigen::Index expected = 0;
  for (const auto& s : segments_) {
    require(s.offset == expected, "ParameterSet: segment " + s.name + " is not contiguous");
    expected += s.size();
  }
  require(expected == values_.size(), "ParameterSet: segments do not cover the vector");
  require(values_.allFinite(), "ParameterSet: non-finite parameter");
}

void ParameterSet::init_fan_in(std::uint64_t seed) {
  CounterRng rng(mix64(seed ^ 0x696e697400000000ULL));
  for (const auto& s : segments_) {
    auto block = values_.segment(s.offset, s.size());
    if (s.cols == 1) {
      block.setZero();
      continue;
    }
    const double bound = 1.0 / std::sqrt(static_cast<double>(s.cols));
    for (Eigen::Index k = 0; k < block.size(); ++k) block[k] = rng.uniform(-bound, bound);
  }
}

}  // namespace prd::nets
