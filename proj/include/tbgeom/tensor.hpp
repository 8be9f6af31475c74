#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace tbgeom {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Dense rank-N array with equal extent `dim` in every slot, row-major.
/// Index order follows the usual component notation, e.g. Christoffel
/// symbols are stored as (k, i, j) for Γ^k_ij and curvature as (h, k, i, j)
/// for R^h_{kij}.
template <int Rank>
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(int dim) : dim_(dim), data_(size_for(dim), 0.0) {}

  int dim() const { return dim_; }
  std::size_t size() const { return data_.size(); }

  template <class... I>
  double& operator()(I... idx) {
    static_assert(sizeof...(I) == Rank);
    return data_[offset({static_cast<int>(idx)...})];
  }
  template <class... I>
  double operator()(I... idx) const {
    static_assert(sizeof...(I) == Rank);
    return data_[offset({static_cast<int>(idx)...})];
  }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  friend Tensor operator-(const Tensor& a, const Tensor& b) {
    Tensor r(a.dim_);
    for (std::size_t i = 0; i < a.data_.size(); ++i) r.data_[i] = a.data_[i] - b.data_[i];
    return r;
  }

 private:
  static std::size_t size_for(int dim) {
    std::size_t n = 1;
    for (int r = 0; r < Rank; ++r) n *= static_cast<std::size_t>(dim);
    return n;
  }
  std::size_t offset(std::array<int, Rank> idx) const {
    std::size_t o = 0;
    for (int r = 0; r < Rank; ++r) o = o * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(idx[r]);
    return o;
  }

  int dim_ = 0;
  std::vector<double> data_;
};

using Tensor3 = Tensor<3>;
using Tensor4 = Tensor<4>;
using Tensor5 = Tensor<5>;

}  // namespace tbgeom
