#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

#include "rnls/fft.hpp"
#include "rnls/sum.hpp"

namespace rnls {

template <typename Real>
using RealVec = Eigen::Array<Real, Eigen::Dynamic, 1>;

/// Periodic square box [-L/2, L/2)^2 sampled on an M x M collocation grid.
/// Wavenumbers follow the standard DFT ordering of integer frequencies
/// {0,..,M/2-1, -M/2,..,-1} scaled by 2*pi/L. A field component is stored
/// as an M x M array with data(i,j) = u(x_i, y_j), x_i = -L/2 + i*dx.
template <typename Real>
struct Grid2D {
  Real box_length = 0;         // L
  Eigen::Index points = 0;     // M, even
  Real dx = 0;                 // L/M
  RealVec<Real> x;             // coordinates along one axis, size M
  RealVec<Real> k;             // wavenumbers in DFT order, size M

  Real cell_area() const { return dx * dx; }
  Real area() const { return box_length * box_length; }

  /// Squared wavenumber |k|^2 at mode (i,j).
  Real ksq(Eigen::Index i, Eigen::Index j) const {
    return k[i] * k[i] + k[j] * k[j];
  }
};

template <typename Real = double>
Grid2D<Real> make_grid(Real box_length, Eigen::Index points) {
  if (!(box_length > Real(0)))
    throw std::invalid_argument("make_grid: box length must be positive");
  if (points < 4 || points % 2 != 0)
    throw std::invalid_argument("make_grid: points per side must be even and >= 4");

  Grid2D<Real> g;
  g.box_length = box_length;
  g.points = points;
  g.dx = box_length / Real(points);
  g.x.resize(points);
  g.k.resize(points);
  const Real dk = Real(2) * Real(EIGEN_PI) / box_length;
  for (Eigen::Index i = 0; i < points; ++i) {
    g.x[i] = -box_length / Real(2) + Real(i) * g.dx;
    const Eigen::Index f = (i < points / 2) ? i : i - points;
    g.k[i] = dk * Real(f);
  }
  return g;
}

/// Riemann-sum quadrature dx^2 * sum(f); exact for band-limited integrands
/// on the periodic grid.
template <typename Real, typename Derived>
Real quadrature(const Grid2D<Real>& g, const Eigen::ArrayBase<Derived>& f) {
  return g.cell_area() * pairwise_sum(f);
}

/// |k|^2 as an M x M array, ksq(i,j) = k_i^2 + k_j^2 (same layout as fields).
template <typename Real>
RealArray2<Real> ksq_array(const Grid2D<Real>& g) {
  const Eigen::Index m = g.points;
  RealArray2<Real> out(m, m);
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index i = 0; i < m; ++i) out(i, j) = g.ksq(i, j);
  return out;
}

}  // namespace rnls
