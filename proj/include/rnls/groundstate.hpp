#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rnls/field.hpp"
#include "rnls/nonlinearity.hpp"

namespace rnls {

enum class GroundStateMethod { petviashvili, radial_shooting };

/// Scalar Townes profile: the positive radial solution of
///   Lap Q - Q + Q^3 = 0 on R^2,
/// computed on a periodic box, plus the certificate scalars.
template <typename Real>
struct GroundState {
  Grid2D<Real> grid;
  RealArray2<Real> profile;   // real, positive, radial
  Real mass2 = 0;             // ||Q||_{L^2}^2
  Real grad2 = 0;             // ||grad Q||_{L^2}^2
  Real l4pow4 = 0;            // ||Q||_{L^4}^4
  Real residual = 0;          // sup | Lap Q - Q + Q^3 |
  GroundStateMethod method = GroundStateMethod::petviashvili;
  int iterations = 0;
};

/// Radial shooting output: the 1-D profile Q(r) on a uniform r-grid with the
/// same certificate scalars, used as the method-independent cross check.
template <typename Real>
struct RadialGroundState {
  Real q0 = 0;                // Q(0)
  RealVec<Real> r;
  RealVec<Real> q;
  RealVec<Real> dq;
  Real mass2 = 0;             // 2 pi \int Q^2 r dr
  Real grad2 = 0;
  Real l4pow4 = 0;
  int nodes = 0;
  int bisections = 0;
};

namespace detail {

template <typename Real>
void townes_rhs(Real r, Real q, Real p, Real& dq, Real& dp) {
  dq = p;
  // r -> 0 limit of -p/r is -q''(0); symmetry gives q'' = (q - q^3)/2 there.
  dp = (r < Real(1e-12)) ? (q - q * q * q) / Real(2) : -p / r + q - q * q * q;
}

// One RK4 trajectory. Returns +1 if the profile turns back up (amplitude too
// small), -1 if it crosses zero (too large), 0 if neither happened by r_max.
template <typename Real>
int townes_trajectory(Real q0, Real r_max, Real dr, RealVec<Real>* r_out,
                      RealVec<Real>* q_out, RealVec<Real>* dq_out) {
  const Eigen::Index n = static_cast<Eigen::Index>(std::llround(r_max / dr));
  std::vector<Real> rs, qs, ps;
  if (r_out) {
    rs.reserve(n + 1);
    qs.reserve(n + 1);
    ps.reserve(n + 1);
    rs.push_back(0);
    qs.push_back(q0);
    ps.push_back(0);
  }
  Real r = 0, q = q0, p = 0;
  int status = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    Real k1q, k1p, k2q, k2p, k3q, k3p, k4q, k4p;
    townes_rhs(r, q, p, k1q, k1p);
    townes_rhs(r + dr / 2, q + dr / 2 * k1q, p + dr / 2 * k1p, k2q, k2p);
    townes_rhs(r + dr / 2, q + dr / 2 * k2q, p + dr / 2 * k2p, k3q, k3p);
    townes_rhs(r + dr, q + dr * k3q, p + dr * k3p, k4q, k4p);
    q += dr / 6 * (k1q + 2 * k2q + 2 * k3q + k4q);
    p += dr / 6 * (k1p + 2 * k2p + 2 * k3p + k4p);
    r += dr;
    if (r_out) {
      rs.push_back(r);
      qs.push_back(q);
      ps.push_back(p);
    }
    if (q <= Real(0)) {
      status = -1;
      break;
    }
    if (p > Real(0)) {
      status = +1;
      break;
    }
  }
  if (r_out) {
    *r_out = Eigen::Map<RealVec<Real>>(rs.data(), rs.size());
    *q_out = Eigen::Map<RealVec<Real>>(qs.data(), qs.size());
    *dq_out = Eigen::Map<RealVec<Real>>(ps.data(), ps.size());
  }
  return status;
}

// Composite Simpson on a uniform grid (trapezoid fallback on the last
// interval when the point count is even).
template <typename Real>
Real simpson(const RealVec<Real>& f, Real h) {
  const Eigen::Index n = f.size();
  if (n < 2) return Real(0);
  Real s(0);
  Eigen::Index i = 0;
  for (; i + 2 < n; i += 2) s += h / 3 * (f[i] + 4 * f[i + 1] + f[i + 2]);
  if (i + 1 < n) s += h / 2 * (f[i] + f[i + 1]);
  return s;
}

}  // namespace detail

/// Shooting method for the radial ODE Q'' + Q'/r - Q + Q^3 = 0, Q'(0) = 0:
/// bisection on Q(0) between an amplitude whose trajectory turns back up
/// (diverges to +inf) and one that crosses zero. Independent of the spectral
/// machinery by construction.
template <typename Real = double>
RadialGroundState<Real> solve_townes_shooting(Real r_max = Real(30),
                                              Real dr = Real(2.5e-4)) {
  if (r_max < Real(15))
    throw std::invalid_argument("solve_townes_shooting: r_max must be >= 15");

  Real lo(2), hi(2.5);
  if (detail::townes_trajectory<Real>(lo, r_max, dr, nullptr, nullptr,
                                      nullptr) != +1 ||
      detail::townes_trajectory<Real>(hi, r_max, dr, nullptr, nullptr,
                                      nullptr) != -1)
    throw std::runtime_error("solve_townes_shooting: bracket not found");

  RadialGroundState<Real> out;
  for (int it = 0; it < 200; ++it) {
    const Real mid = (lo + hi) / 2;
    if (mid == lo || mid == hi) break;  // bisected to machine resolution
    const int s =
        detail::townes_trajectory<Real>(mid, r_max, dr, nullptr, nullptr, nullptr);
    (s >= 0 ? lo : hi) = mid;
    out.bisections = it + 1;
  }
  out.q0 = (lo + hi) / 2;

  detail::townes_trajectory<Real>(out.q0, r_max, dr, &out.r, &out.q, &out.dq);
  // Trim the breakdown point where bisection noise takes over.
  const Eigen::Index n = out.r.size() - 1;
  out.r.conservativeResize(n);
  out.q.conservativeResize(n);
  out.dq.conservativeResize(n);

  out.nodes = 0;
  for (Eigen::Index i = 1; i < n; ++i)
    if ((out.q[i] < 0) != (out.q[i - 1] < 0)) ++out.nodes;

  const Real two_pi = Real(2) * Real(EIGEN_PI);
  out.mass2 = two_pi * detail::simpson<Real>((out.q.square() * out.r).eval(), dr);
  out.grad2 = two_pi * detail::simpson<Real>((out.dq.square() * out.r).eval(), dr);
  out.l4pow4 =
      two_pi * detail::simpson<Real>((out.q.square().square() * out.r).eval(), dr);
  // Exponential tail beyond the trimmed trajectory, Q ~ c e^{-r}/sqrt(r).
  out.mass2 += Real(EIGEN_PI) * out.q[n - 1] * out.q[n - 1] * out.r[n - 1];
  return out;
}

namespace detail {

template <typename Real>
void fill_certificates(GroundState<Real>& gs) {
  using Complex = std::complex<Real>;
  const auto& g = gs.grid;
  const auto& fft = fft_for(g);
  ComplexArray2<Real> qc = gs.profile.template cast<Complex>();
  const ComplexArray2<Real> qhat = fft.forward(qc);

  gs.mass2 = quadrature(g, gs.profile.square());
  gs.l4pow4 = quadrature(g, gs.profile.square().square());

  RealArray2<Real> w(g.points, g.points);
  ComplexArray2<Real> lap_hat(g.points, g.points);
  for (Eigen::Index j = 0; j < g.points; ++j)
    for (Eigen::Index i = 0; i < g.points; ++i) {
      const Real k2 = g.ksq(i, j);
      w(i, j) = k2 * std::norm(qhat(i, j));
      lap_hat(i, j) = -k2 * qhat(i, j);
    }
  gs.grad2 = pairwise_sum(w) / g.area();

  const RealArray2<Real> lap = fft.inverse(lap_hat).real();
  gs.residual =
      (lap - gs.profile + gs.profile.cube()).abs().maxCoeff();
}

}  // namespace detail

/// Petviashvili iteration Q <- S^{3/2} (1-Lap)^{-1}[Q^3] with the mass-style
/// stabilizer S = <(1-Lap)Q, Q> / <Q^3, Q>, started from a unit Gaussian.
/// Converges when the sup-norm change between iterates drops below tol.
template <typename Real = double>
GroundState<Real> solve_townes_petviashvili(
    const Grid2D<Real>& grid, Real tol = Real(1e-10), int max_iter = 500,
    const RealArray2<Real>* seed = nullptr) {
  using Complex = std::complex<Real>;
  const auto& fft = fft_for(grid);
  const Eigen::Index m = grid.points;

  RealArray2<Real> q(m, m);
  if (seed) {
    if (seed->rows() != m || seed->cols() != m)
      throw std::invalid_argument("solve_townes_petviashvili: seed shape");
    q = *seed;
  } else {
    for (Eigen::Index j = 0; j < m; ++j)
      for (Eigen::Index i = 0; i < m; ++i)
        q(i, j) = std::exp(-(grid.x[i] * grid.x[i] + grid.x[j] * grid.x[j]) / 2);
  }

  std::vector<Real> s_history;
  for (int it = 1; it <= max_iter; ++it) {
    const ComplexArray2<Real> qhat = fft.forward(q.template cast<Complex>());
    const ComplexArray2<Real> cube_hat =
        fft.forward(q.cube().template cast<Complex>());

    RealArray2<Real> w(m, m);
    for (Eigen::Index j = 0; j < m; ++j)
      for (Eigen::Index i = 0; i < m; ++i)
        w(i, j) = (Real(1) + grid.ksq(i, j)) * std::norm(qhat(i, j));
    const Real num = pairwise_sum(w) / grid.area();
    const Real den = quadrature(grid, q.square().square());
    const Real s = num / den;
    s_history.push_back(s);

    if (!std::isfinite(s) || s > Real(1e6)) {
      std::ostringstream msg;
      msg << "solve_townes_petviashvili: stabilizer diverging (collapse to "
             "zero); S history:";
      for (Real v : s_history) msg << ' ' << v;
      throw std::runtime_error(msg.str());
    }

    ComplexArray2<Real> next_hat(m, m);
    const Real gain = std::pow(s, Real(1.5));
    for (Eigen::Index j = 0; j < m; ++j)
      for (Eigen::Index i = 0; i < m; ++i)
        next_hat(i, j) = gain * cube_hat(i, j) / (Real(1) + grid.ksq(i, j));
    const RealArray2<Real> next = fft.inverse(next_hat).real();

    const Real diff = (next - q).abs().maxCoeff();
    q = next;
    if (diff < tol) {
      GroundState<Real> gs;
      gs.grid = grid;
      gs.profile = q;
      gs.method = GroundStateMethod::petviashvili;
      gs.iterations = it;
      detail::fill_certificates(gs);
      return gs;
    }
  }
  std::ostringstream msg;
  msg << "solve_townes_petviashvili: no convergence in " << max_iter
      << " iterations; last S values:";
  for (size_t i = s_history.size() > 5 ? s_history.size() - 5 : 0;
       i < s_history.size(); ++i)
    msg << ' ' << s_history[i];
  throw std::runtime_error(msg.str());
}

/// The symmetric vector ground state: N identical copies of
/// sqrt(1/(2N-1)) Q, which solves the coupled Euler-Lagrange system exactly.
template <typename Real>
struct VectorGroundState {
  int n = 1;
  VecField<Real> components;
  Real el_residual = 0;  // sup_j | Lap Q_j - Q_j + F_j(Q) |
};

template <typename Real>
VectorGroundState<Real> build_vector_ground_state(const GroundState<Real>& gs,
                                                  int n) {
  using Complex = std::complex<Real>;
  if (n < 1)
    throw std::invalid_argument("build_vector_ground_state: N must be >= 1");

  VectorGroundState<Real> vgs;
  vgs.n = n;
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) labels[i] = i;
  vgs.components = make_zero_field(gs.grid, labels);

  const Real scale = Real(1) / std::sqrt(Real(2 * n - 1));
  const ComplexArray2<Real> comp =
      (scale * gs.profile).template cast<Complex>();
  for (int i = 0; i < n; ++i) vgs.components.comps[i] = comp;

  const VecField<Real> f = apply_nonlinearity(vgs.components);
  const auto& fft = fft_for(gs.grid);
  Real res(0);
  for (int i = 0; i < n; ++i) {
    ComplexArray2<Real> chat = fft.forward(vgs.components.comps[i]);
    for (Eigen::Index jj = 0; jj < gs.grid.points; ++jj)
      for (Eigen::Index ii = 0; ii < gs.grid.points; ++ii)
        chat(ii, jj) *= -gs.grid.ksq(ii, jj);
    const ComplexArray2<Real> lap = fft.inverse(chat);
    res = std::max(res, (lap - vgs.components.comps[i] + f.comps[i])
                            .abs()
                            .maxCoeff());
  }
  vgs.el_residual = res;
  return vgs;
}

}  // namespace rnls
