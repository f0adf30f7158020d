#pragma once

#include <Eigen/Dense>

#include <cstddef>

namespace rnls {

namespace detail {

template <typename Real>
Real pairwise_sum_span(const Real* p, std::ptrdiff_t n) {
  if (n <= 32) {
    Real s(0);
    for (std::ptrdiff_t i = 0; i < n; ++i) s += p[i];
    return s;
  }
  const std::ptrdiff_t half = n / 2;
  return pairwise_sum_span(p, half) + pairwise_sum_span(p + half, n - half);
}

}  // namespace detail

/// Pairwise summation with a fixed reduction tree: bit-reproducible for a
/// given length and O(sqrt(eps)) better conditioned than a running sum on
/// the large grids used here.
template <typename Derived>
typename Derived::Scalar pairwise_sum(const Eigen::ArrayBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  Eigen::Array<Scalar, Eigen::Dynamic, 1> tmp =
      a.derived().reshaped();  // materialize in storage order
  return detail::pairwise_sum_span<Scalar>(tmp.data(), tmp.size());
}

}  // namespace rnls
