#pragma once

#include <Eigen/Core>

namespace stance {

template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Token-vector tables keep one row per token; row-major storage makes the
// per-token rows contiguous.
template <class Scalar>
using RowTable =
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using MatF = Mat<float>;
using VecF = Vec<float>;
using MatD = Mat<double>;
using VecD = Vec<double>;
using TableF = RowTable<float>;
using TableD = RowTable<double>;

}  // namespace stance
