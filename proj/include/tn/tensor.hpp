#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/CXX11/Tensor>

#include <algorithm>
#include <cmath>

namespace tn {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Dense multi-index arrays over a chart point. Index order is documented at
// each producer; all are column-major Eigen tensors.
using Tensor3 = Eigen::Tensor<double, 3>;
using Tensor4 = Eigen::Tensor<double, 4>;
using Tensor5 = Eigen::Tensor<double, 5>;

template <int R>
Eigen::Tensor<double, R> zeros(const std::array<Eigen::Index, R>& dims) {
  Eigen::Tensor<double, R> t(dims);
  t.setZero();
  return t;
}

inline Tensor3 zeros3(Eigen::Index a, Eigen::Index b, Eigen::Index c) { return zeros<3>({a, b, c}); }
inline Tensor4 zeros4(Eigen::Index a, Eigen::Index b, Eigen::Index c, Eigen::Index d) {
  return zeros<4>({a, b, c, d});
}
inline Tensor5 zeros5(Eigen::Index a, Eigen::Index b, Eigen::Index c, Eigen::Index d, Eigen::Index e) {
  return zeros<5>({a, b, c, d, e});
}

template <int R>
double max_abs(const Eigen::Tensor<double, R>& t) {
  double m = 0.0;
  for (Eigen::Index i = 0; i < t.size(); ++i) m = std::max(m, std::abs(t.data()[i]));
  return m;
}

template <int R>
double max_abs_diff(const Eigen::Tensor<double, R>& a, const Eigen::Tensor<double, R>& b) {
  double m = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

inline double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace tn
