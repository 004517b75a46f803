#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

namespace prd::nets {

// One named block of a flat parameter vector, viewed as a column-major
// rows x cols matrix.
struct Segment {
  std::string name;
  int rows = 0;
  int cols = 0;
  Eigen::Index offset = 0;

  Eigen::Index size() const { return static_cast<Eigen::Index>(rows) * cols; }
  friend bool operator==(const Segment&, const Segment&) = default;
};

// Flat vector of every weight and bias of one network plus the segment index
// that lays it out. Segments are contiguous, non-overlapping and cover the
// vector exactly.
class ParameterSet {
 public:
  using Map = Eigen::Map<Eigen::MatrixXd>;
  using ConstMap = Eigen::Map<const Eigen::MatrixXd>;

  // Appends a zero-initialized segment and returns its index.
  int add(const std::string& name, int rows, int cols);

  Map view(int segment) { return view(segment, values_); }
  ConstMap view(int segment) const { return view(segment, values_); }
  // Same layout applied to an aligned vector (e.g. a gradient).
  Map view(int segment, Eigen::VectorXd& aligned) const;
  ConstMap view(int segment, const Eigen::VectorXd& aligned) const;

  Eigen::VectorXd& values() { return values_; }
  const Eigen::VectorXd& values() const { return values_; }
  const std::vector<Segment>& segments() const { return segments_; }
  Eigen::Index size() const { return values_.size(); }
  int find(const std::string& name) const;

  Eigen::VectorXd zeros_like() const { return Eigen::VectorXd::Zero(size()); }
  bool same_layout(const ParameterSet& other) const { return segments_ == other.segments_; }
  // Throws ContractViolation if the index does not tile the vector.
  void validate() const;

  // Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) for every weight segment, where
  // fan_in is the column count; biases (cols == 1) start at zero.
  void init_fan_in(std::uint64_t seed);

 private:
  Eigen::VectorXd values_;
  std::vector<Segment> segments_;
};

using GradientVector = Eigen::VectorXd;

}  // namespace prd::nets
