#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>

namespace circadia {

using real_t = double;

// Dense types, templated on scalar. Column-major throughout.
template <typename S>
using MatrixX = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <typename S>
using VectorX = Eigen::Matrix<S, Eigen::Dynamic, 1>;
template <typename S>
using ArrayX = Eigen::Array<S, Eigen::Dynamic, 1>;

using Matrix = MatrixX<real_t>;
using Vector = VectorX<real_t>;
using Array = ArrayX<real_t>;

// Missing samples are carried as quiet NaN inside dense minute grids.
template <typename S = real_t>
constexpr S missing_value() {
  return std::numeric_limits<S>::quiet_NaN();
}

template <typename S>
inline bool is_missing(S v) {
  return std::isnan(v);
}

}  // namespace circadia
