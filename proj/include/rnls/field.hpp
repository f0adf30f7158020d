#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rnls/fft.hpp"
#include "rnls/grid.hpp"
#include "rnls/sum.hpp"

namespace rnls {

/// N complex components sampled on one shared grid. Component i carries the
/// integer label labels[i]; labels enter the <j>-weighted norms, so truncated
/// infinite systems ({-J,..,J}) keep their weights correct.
template <typename Real>
struct VecField {
  using Complex = std::complex<Real>;
  using Component = ComplexArray2<Real>;

  Grid2D<Real> grid;
  std::vector<Component> comps;
  std::vector<int> labels;

  int n_components() const { return static_cast<int>(comps.size()); }

  const Component& operator[](int i) const { return comps[i]; }
  Component& operator[](int i) { return comps[i]; }

  int index_of_label(int j) const {
    for (int i = 0; i < n_components(); ++i)
      if (labels[i] == j) return i;
    return -1;
  }
};

template <typename Real>
VecField<Real> make_zero_field(const Grid2D<Real>& g, std::vector<int> labels) {
  if (labels.empty())
    throw std::invalid_argument("make_zero_field: need at least one component");
  VecField<Real> u;
  u.grid = g;
  u.labels = std::move(labels);
  u.comps.assign(u.labels.size(),
                 ComplexArray2<Real>::Zero(g.points, g.points));
  return u;
}

/// Shared per-thread transform context for a given (M, L). Grid sizes in a
/// run are few, so the cache stays tiny; kissfft twiddle tables are reused
/// across calls.
template <typename Real>
const Fft2<Real>& fft_for(const Grid2D<Real>& g) {
  static thread_local std::map<std::pair<Eigen::Index, Real>, Fft2<Real>> cache;
  const auto key = std::make_pair(g.points, g.box_length);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, Fft2<Real>(g.points, g.box_length)).first;
  return it->second;
}

/// c(k) = dx^2 sum_x u(x) e^{-ik.x}; layout matches Grid2D::k per axis.
template <typename Real>
ComplexArray2<Real> forward_transform(const ComplexArray2<Real>& u,
                                      const Grid2D<Real>& g) {
  return fft_for(g).forward(u);
}

/// u(x) = L^-2 sum_k c(k) e^{+ik.x}; inverse of forward_transform.
template <typename Real>
ComplexArray2<Real> inverse_transform(const ComplexArray2<Real>& c,
                                      const Grid2D<Real>& g) {
  return fft_for(g).inverse(c);
}

template <typename Real>
bool has_nonfinite(const VecField<Real>& u) {
  for (const auto& c : u.comps)
    if (!c.allFinite()) return true;
  return false;
}

template <typename Real>
Real sup_norm(const VecField<Real>& u) {
  Real s(0);
  for (const auto& c : u.comps) s = std::max(s, c.abs().maxCoeff());
  return s;
}

/// sum_j |u_j(x)|^2 pointwise.
template <typename Real>
RealArray2<Real> total_density(const VecField<Real>& u) {
  RealArray2<Real> rho = u.comps[0].abs2();
  for (int i = 1; i < u.n_components(); ++i) rho += u.comps[i].abs2();
  return rho;
}

/// Japanese bracket weight <j>^{2s} with <j> = (1+j^2)^{1/2}.
template <typename Real>
Real bracket_weight(int label, int s) {
  const Real b2 = Real(1) + Real(label) * Real(label);
  Real w(1);
  for (int i = 0; i < s; ++i) w *= b2;
  return w;
}

/// || u ||_{L^2_x h^s} = ( sum_j <j>^{2s} \int |u_j|^2 dx )^{1/2}, s in {0,1,2}.
template <typename Real>
Real norm_l2h(const VecField<Real>& u, int s) {
  if (s < 0 || s > 2)
    throw std::invalid_argument("norm_l2h: weight exponent s must be 0, 1 or 2");
  Real acc(0);
  for (int i = 0; i < u.n_components(); ++i)
    acc += bracket_weight<Real>(u.labels[i], s) *
           quadrature(u.grid, u.comps[i].abs2());
  return std::sqrt(acc);
}

/// || u ||_{L^4_x l^2} = ( \int (sum_j |u_j|^2)^2 dx )^{1/4}.
template <typename Real>
Real norm_l4l2(const VecField<Real>& u) {
  const RealArray2<Real> rho = total_density(u);
  return std::pow(quadrature(u.grid, rho.square()), Real(0.25));
}

/// Spectral gradient of one component: returns (du/dx, du/dy).
template <typename Real>
std::pair<ComplexArray2<Real>, ComplexArray2<Real>> gradient(
    const ComplexArray2<Real>& u, const Grid2D<Real>& g) {
  using Complex = std::complex<Real>;
  const auto& fft = fft_for(g);
  const ComplexArray2<Real> c = fft.forward(u);
  ComplexArray2<Real> cx = c, cy = c;
  for (Eigen::Index j = 0; j < g.points; ++j)
    for (Eigen::Index i = 0; i < g.points; ++i) {
      cx(i, j) *= Complex(0, g.k[i]);
      cy(i, j) *= Complex(0, g.k[j]);
    }
  return {fft.inverse(cx), fft.inverse(cy)};
}

/// || grad u ||_{L^2 l^2} via the spectral Parseval sum, exact to round-off
/// for band-limited fields.
template <typename Real>
Real norm_grad_l2(const VecField<Real>& u) {
  const Real inv_area = Real(1) / u.grid.area();
  Real acc(0);
  for (const auto& comp : u.comps) {
    const ComplexArray2<Real> c = forward_transform(comp, u.grid);
    RealArray2<Real> w(c.rows(), c.cols());
    for (Eigen::Index j = 0; j < u.grid.points; ++j)
      for (Eigen::Index i = 0; i < u.grid.points; ++i)
        w(i, j) = u.grid.ksq(i, j) * std::norm(c(i, j));
    acc += inv_area * pairwise_sum(w);
  }
  return std::sqrt(acc);
}

/// The spatial norms monitored everywhere: L^2 h^0, L^2 h^1, the gradient
/// norm and the L^4 l^2 norm of one field.
template <typename Real>
struct NormReport {
  Real l2h_0;
  Real l2h_1;
  Real grad_l2;
  Real l4l2;
};

template <typename Real>
NormReport<Real> compute_norms(const VecField<Real>& u) {
  return NormReport<Real>{norm_l2h(u, 0), norm_l2h(u, 1), norm_grad_l2(u),
                          norm_l4l2(u)};
}

}  // namespace rnls
