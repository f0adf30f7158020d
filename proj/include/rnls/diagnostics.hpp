#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "rnls/field.hpp"
#include "rnls/nonlinearity.hpp"
#include "rnls/variational.hpp"

namespace rnls {

namespace detail {

// C-infinity transition: 1 for s <= lo, 0 for s >= hi, all derivatives flat
// at both ends. Keeps spectral differentiation of windowed weights clean.
template <typename Real>
Real smooth_transition(Real s, Real lo, Real hi) {
  if (s <= lo) return Real(1);
  if (s >= hi) return Real(0);
  const Real x = (s - lo) / (hi - lo);
  const auto f = [](Real v) { return v > Real(0) ? std::exp(-Real(1) / v) : Real(0); };
  return f(Real(1) - x) / (f(Real(1) - x) + f(x));
}

}  // namespace detail

/// Momentum density of one component, Im(conj(u) grad u), via spectral
/// derivatives.
template <typename Real>
std::pair<RealArray2<Real>, RealArray2<Real>> momentum_density(
    const ComplexArray2<Real>& u, const Grid2D<Real>& g) {
  auto [ux, uy] = gradient(u, g);
  return {(u.conjugate() * ux).imag(), (u.conjugate() * uy).imag()};
}

/// Fraction of total mass inside the central half of the box, [-L/4, L/4]^2.
/// Virial and Morawetz runs require >= 1 - 1e-6 of it there.
template <typename Real>
Real central_mass_fraction(const VecField<Real>& u) {
  const RealArray2<Real> rho = total_density(u);
  const auto& g = u.grid;
  Real inside(0), total(0);
  for (Eigen::Index j = 0; j < g.points; ++j)
    for (Eigen::Index i = 0; i < g.points; ++i) {
      total += rho(i, j);
      if (std::abs(g.x[i]) <= g.box_length / 4 &&
          std::abs(g.x[j]) <= g.box_length / 4)
        inside += rho(i, j);
    }
  return total > Real(0) ? inside / total : Real(1);
}

template <typename Real>
struct VirialChain {
  Real variance = 0;    // V = \int w(x) |x-c|^2 sum_j |u_j|^2
  Real virial_v1 = 0;   // 4 sum_j \int w(x) (x-c).Im(conj(u_j) grad u_j)
  Real sixteen_e = 0;   // 16 E(u)
  bool localized = false;
};

/// Variance, its first time derivative by the momentum formula, and 16 E.
/// The |x|^2 weight is windowed to zero across the outer 10% of the box so
/// the periodic wrap never touches it; the localization flag reports whether
/// the data actually stays central.
template <typename Real>
VirialChain<Real> virial_chain(const VecField<Real>& u,
                               std::pair<Real, Real> center = {0, 0}) {
  const auto& g = u.grid;
  const Real hi = Real(0.5) * g.box_length;

  RealVec<Real> taper(g.points);
  for (Eigen::Index i = 0; i < g.points; ++i)
    taper[i] = detail::smooth_transition(std::abs(g.x[i]), Real(0.9) * hi, hi);

  const RealArray2<Real> rho = total_density(u);
  RealArray2<Real> px = RealArray2<Real>::Zero(g.points, g.points);
  RealArray2<Real> py = px;
  for (const auto& comp : u.comps) {
    auto [cx, cy] = momentum_density(comp, g);
    px += cx;
    py += cy;
  }

  RealArray2<Real> wvar(g.points, g.points), wx(g.points, g.points),
      wy(g.points, g.points);
  for (Eigen::Index j = 0; j < g.points; ++j)
    for (Eigen::Index i = 0; i < g.points; ++i) {
      const Real dxc = g.x[i] - center.first;
      const Real dyc = g.x[j] - center.second;
      const Real w = taper[i] * taper[j];
      wvar(i, j) = w * (dxc * dxc + dyc * dyc);
      wx(i, j) = w * dxc;
      wy(i, j) = w * dyc;
    }

  VirialChain<Real> out;
  out.variance = quadrature(g, (wvar * rho).eval());
  out.virial_v1 =
      Real(4) * quadrature(g, (wx * px + wy * py).eval());
  out.sixteen_e = Real(16) * energy(u);
  out.localized = central_mass_fraction(u) >= Real(1) - Real(1e-6);
  return out;
}

/// Interaction Morawetz weight a(d) = sqrt(|d|^2 + eps^2), mollified at the
/// origin and windowed to zero near the periodic wrap. All derivative
/// kernels are spectral multiples of one transform of a, so the action, the
/// derivative formula and the direct oracle share exactly the same weight.
template <typename Real>
struct MorawetzWeight {
  Grid2D<Real> grid;
  Real epsilon = 0;
  ComplexArray2<Real> a_hat;  // transform of the displacement-ordered samples

  // Displacement coordinate of wrap-ordered index m: m*dx for m < M/2,
  // (m-M)*dx otherwise.
  static Real displacement(const Grid2D<Real>& g, Eigen::Index m) {
    const Eigen::Index f = (m < g.points / 2) ? m : m - g.points;
    return Real(f) * g.dx;
  }
};

template <typename Real>
MorawetzWeight<Real> make_morawetz_weight(const Grid2D<Real>& g,
                                          Real epsilon = Real(-1)) {
  MorawetzWeight<Real> w;
  w.grid = g;
  w.epsilon = epsilon > Real(0) ? epsilon : Real(2) * g.dx;

  const Real lo = Real(0.36) * g.box_length;
  const Real hi = Real(0.48) * g.box_length;
  RealArray2<Real> a(g.points, g.points);
  for (Eigen::Index j = 0; j < g.points; ++j)
    for (Eigen::Index i = 0; i < g.points; ++i) {
      const Real dx1 = MorawetzWeight<Real>::displacement(g, i);
      const Real dx2 = MorawetzWeight<Real>::displacement(g, j);
      const Real r = std::sqrt(dx1 * dx1 + dx2 * dx2);
      a(i, j) = std::sqrt(r * r + w.epsilon * w.epsilon) *
                detail::smooth_transition(r, lo, hi);
    }
  w.a_hat = fft_for(g).forward(a.template cast<std::complex<Real>>());
  return w;
}

namespace detail {

// inv( kernel .* fwd(f) ).real(): circular convolution of a real field with
// a weight-derivative kernel given in spectral form.
template <typename Real>
RealArray2<Real> conv_kernel(const Grid2D<Real>& g,
                             const ComplexArray2<Real>& kernel_hat,
                             const ComplexArray2<Real>& f_hat) {
  return fft_for(g).inverse((kernel_hat * f_hat).eval()).real();
}

template <typename Real>
struct MorawetzFields {
  RealArray2<Real> rho, px, py, divp, t11, t12, t22, quartic;
  ComplexArray2<Real> rho_hat, divp_hat;
};

template <typename Real>
MorawetzFields<Real> morawetz_fields(const VecField<Real>& u) {
  using Complex = std::complex<Real>;
  const auto& g = u.grid;
  const auto& fft = fft_for(g);
  const Eigen::Index m = g.points;

  MorawetzFields<Real> f;
  f.rho = total_density(u);
  f.px = RealArray2<Real>::Zero(m, m);
  f.py = f.px;
  f.divp = f.px;
  f.t11 = f.px;
  f.t12 = f.px;
  f.t22 = f.px;
  f.quartic = quartic_density(u);

  for (const auto& comp : u.comps) {
    const ComplexArray2<Real> chat = fft.forward(comp);
    ComplexArray2<Real> cx(m, m), cy(m, m), clap(m, m);
    for (Eigen::Index j = 0; j < m; ++j)
      for (Eigen::Index i = 0; i < m; ++i) {
        cx(i, j) = Complex(0, g.k[i]) * chat(i, j);
        cy(i, j) = Complex(0, g.k[j]) * chat(i, j);
        clap(i, j) = -g.ksq(i, j) * chat(i, j);
      }
    const ComplexArray2<Real> ux = fft.inverse(cx);
    const ComplexArray2<Real> uy = fft.inverse(cy);
    const ComplexArray2<Real> lap = fft.inverse(clap);
    f.px += (comp.conjugate() * ux).imag();
    f.py += (comp.conjugate() * uy).imag();
    f.divp += (comp.conjugate() * lap).imag();  // div Im(conj(u) grad u)
    f.t11 += (ux * ux.conjugate()).real();
    f.t12 += (ux * uy.conjugate()).real();
    f.t22 += (uy * uy.conjugate()).real();
  }
  f.rho_hat = fft.forward(f.rho.template cast<Complex>());
  f.divp_hat = fft.forward(f.divp.template cast<Complex>());
  return f;
}

template <typename Real>
ComplexArray2<Real> kernel_times(const MorawetzWeight<Real>& w, int dx_order1,
                                 int dx_order2, int lap_order) {
  using Complex = std::complex<Real>;
  const auto& g = w.grid;
  ComplexArray2<Real> out(g.points, g.points);
  for (Eigen::Index j = 0; j < g.points; ++j)
    for (Eigen::Index i = 0; i < g.points; ++i) {
      Complex v = w.a_hat(i, j);
      for (int d = 0; d < dx_order1; ++d) v *= Complex(0, g.k[i]);
      for (int d = 0; d < dx_order2; ++d) v *= Complex(0, g.k[j]);
      for (int d = 0; d < lap_order; ++d) v *= -g.ksq(i, j);
      out(i, j) = v;
    }
  return out;
}

}  // namespace detail

/// M(t) = 2 sum_{j,j'} \iint |u_{j'}(y)|^2 grad a(x-y) . Im(conj(u_j) grad u_j)(x)
/// evaluated as two FFT correlations against the total density.
template <typename Real>
Real morawetz_action(const VecField<Real>& u, const MorawetzWeight<Real>& w) {
  const auto& g = u.grid;
  const auto f = detail::morawetz_fields(u);
  const RealArray2<Real> ax =
      detail::conv_kernel(g, detail::kernel_times(w, 1, 0, 0), f.rho_hat);
  const RealArray2<Real> ay =
      detail::conv_kernel(g, detail::kernel_times(w, 0, 1, 0), f.rho_hat);
  return Real(2) * quadrature(g, (f.px * ax + f.py * ay).eval());
}

template <typename Real>
struct MorawetzDerivative {
  Real hessian_term = 0;     //  4 iint d_k d_l a  Re(d_k u d_l conj(u)) rho(y)
  Real biharmonic_term = 0;  // -  iint Lap^2 a    rho(x) rho(y)
  Real quartic_term = 0;     // -  iint Lap a      N(u)(x) rho(y)
  Real momentum_term = 0;    // -4 iint grad a . p(x)  div p(y)
  Real total() const {
    return hessian_term + biharmonic_term + quartic_term + momentum_term;
  }
};

/// The four-term exact expression for dM/dt.
template <typename Real>
MorawetzDerivative<Real> morawetz_derivative(const VecField<Real>& u,
                                             const MorawetzWeight<Real>& w) {
  const auto& g = u.grid;
  const auto f = detail::morawetz_fields(u);

  MorawetzDerivative<Real> out;
  const RealArray2<Real> h11 =
      detail::conv_kernel(g, detail::kernel_times(w, 2, 0, 0), f.rho_hat);
  const RealArray2<Real> h12 =
      detail::conv_kernel(g, detail::kernel_times(w, 1, 1, 0), f.rho_hat);
  const RealArray2<Real> h22 =
      detail::conv_kernel(g, detail::kernel_times(w, 0, 2, 0), f.rho_hat);
  out.hessian_term =
      Real(4) * quadrature(g, (f.t11 * h11 + Real(2) * f.t12 * h12 +
                               f.t22 * h22)
                                  .eval());

  const RealArray2<Real> bilap =
      detail::conv_kernel(g, detail::kernel_times(w, 0, 0, 2), f.rho_hat);
  out.biharmonic_term = -quadrature(g, (f.rho * bilap).eval());

  const RealArray2<Real> lap =
      detail::conv_kernel(g, detail::kernel_times(w, 0, 0, 1), f.rho_hat);
  out.quartic_term = -quadrature(g, (f.quartic * lap).eval());

  const RealArray2<Real> gx =
      detail::conv_kernel(g, detail::kernel_times(w, 1, 0, 0), f.divp_hat);
  const RealArray2<Real> gy =
      detail::conv_kernel(g, detail::kernel_times(w, 0, 1, 0), f.divp_hat);
  out.momentum_term = Real(-4) * quadrature(g, (f.px * gx + f.py * gy).eval());
  return out;
}

/// O(M^4) direct-quadrature evaluation of the action and the derivative,
/// used as the tiny-grid oracle for the correlation path. Same weight, same
/// discrete fields; only the double integral is formed literally.
template <typename Real>
std::pair<Real, MorawetzDerivative<Real>> morawetz_direct(
    const VecField<Real>& u, const MorawetzWeight<Real>& w) {
  const auto& g = u.grid;
  const Eigen::Index m = g.points;
  if (m > 24)
    throw std::invalid_argument("morawetz_direct: oracle restricted to M <= 24");

  const auto f = detail::morawetz_fields(u);
  const auto& fft = fft_for(g);
  const auto phys = [&](int o1, int o2, int ol) {
    return fft.inverse(detail::kernel_times(w, o1, o2, ol)).real().eval();
  };
  const RealArray2<Real> a1 = phys(1, 0, 0), a2 = phys(0, 1, 0);
  const RealArray2<Real> a11 = phys(2, 0, 0), a12 = phys(1, 1, 0),
                         a22 = phys(0, 2, 0);
  const RealArray2<Real> alap = phys(0, 0, 1), abilap = phys(0, 0, 2);

  // Physical kernels above carry the L^-2 of the inverse transform, so each
  // pair sum needs one cell area per integral sign.
  const Real cell2 = g.cell_area() * g.cell_area();
  Real action = 0;
  MorawetzDerivative<Real> d;
  for (Eigen::Index jy = 0; jy < m; ++jy)
    for (Eigen::Index iy = 0; iy < m; ++iy) {
      const Real rho_y = f.rho(iy, jy);
      const Real divp_y = f.divp(iy, jy);
      for (Eigen::Index jx = 0; jx < m; ++jx)
        for (Eigen::Index ix = 0; ix < m; ++ix) {
          const Eigen::Index di = (ix - iy + m) % m;
          const Eigen::Index dj = (jx - jy + m) % m;
          action += Real(2) * rho_y *
                    (a1(di, dj) * f.px(ix, jx) + a2(di, dj) * f.py(ix, jx));
          d.hessian_term +=
              Real(4) * rho_y *
              (a11(di, dj) * f.t11(ix, jx) +
               Real(2) * a12(di, dj) * f.t12(ix, jx) +
               a22(di, dj) * f.t22(ix, jx));
          d.biharmonic_term -= abilap(di, dj) * f.rho(ix, jx) * rho_y;
          d.quartic_term -= alap(di, dj) * f.quartic(ix, jx) * rho_y;
          d.momentum_term -=
              Real(4) * divp_y *
              (a1(di, dj) * f.px(ix, jx) + a2(di, dj) * f.py(ix, jx));
        }
    }
  action *= cell2;
  d.hessian_term *= cell2;
  d.biharmonic_term *= cell2;
  d.quartic_term *= cell2;
  d.momentum_term *= cell2;
  return {action, d};
}

/// Running trapezoidal integral of ||u(t)||^4_{L^4 l^2}; the desk-scale
/// scattering-norm proxy. Samples must arrive with non-decreasing t.
template <typename Real>
class ScatteringNormAccumulator {
 public:
  void add(Real t, Real l4l2_norm) {
    const Real v = l4l2_norm * l4l2_norm * l4l2_norm * l4l2_norm;
    if (!times_.empty()) {
      if (t < times_.back())
        throw std::invalid_argument("ScatteringNormAccumulator: t must not decrease");
      total_ += (t - times_.back()) * (v + values_.back()) / 2;
    }
    times_.push_back(t);
    values_.push_back(v);
    integrals_.push_back(total_);
  }

  Real total() const { return total_; }
  bool empty() const { return times_.empty(); }

  /// Integral accumulated over [t0, t1], interpolated linearly inside steps.
  Real increment(Real t0, Real t1) const {
    return interp(t1) - interp(t0);
  }

  const std::vector<Real>& times() const { return times_; }

 private:
  Real interp(Real t) const {
    if (times_.empty()) return Real(0);
    if (t <= times_.front()) return Real(0);
    if (t >= times_.back()) return total_;
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const size_t i = static_cast<size_t>(it - times_.begin());
    const Real t0 = times_[i - 1], t1 = times_[i];
    const Real w = (t - t0) / (t1 - t0);
    // trapezoid piece up to t
    const Real vmid = values_[i - 1] + w * (values_[i] - values_[i - 1]);
    return integrals_[i - 1] + (t - t0) * (values_[i - 1] + vmid) / 2;
  }

  std::vector<Real> times_, values_, integrals_;
  Real total_ = 0;
};

/// Least-squares slope of log ||u(t)||_{L^4 l^2} against log t over a time
/// window; free-evolution reference slope is -1/2.
template <typename Real>
Real dispersion_fit(const std::vector<Real>& times,
                    const std::vector<Real>& l4l2_norms, Real t0, Real t1) {
  if (times.size() != l4l2_norms.size() || times.empty())
    throw std::invalid_argument("dispersion_fit: size mismatch");
  Real sx = 0, sy = 0, sxx = 0, sxy = 0;
  long n = 0;
  for (size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t0 || times[i] > t1 || times[i] <= Real(0)) continue;
    if (l4l2_norms[i] <= Real(0)) continue;
    const Real x = std::log(times[i]);
    const Real y = std::log(l4l2_norms[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2)
    throw std::invalid_argument("dispersion_fit: window outside data range");
  const Real den = Real(n) * sxx - sx * sx;
  return (Real(n) * sxy - sx * sy) / den;
}

/// One sampled row of every monitored functional.
template <typename Real>
struct DiagnosticsRecord {
  Real t = 0;
  std::map<std::string, Real> mass_abc;  // keys "a,b,c"
  Real l2h_0 = 0, l2h_1 = 0, l2h_2 = 0;
  Real energy = 0;
  Real variance = 0;
  Real virial_v1 = 0;
  Real morawetz_m = 0;
  Real l4_accum = 0;
  Real sup_norm = 0;
  bool localized = true;
};

/// Mass family M_{a,b,c} = sum_j (a + b j + c j^2) \int |u_j|^2 dx.
template <typename Real>
Real mass_abc(const VecField<Real>& u, Real a, Real b, Real c) {
  Real acc(0);
  for (int i = 0; i < u.n_components(); ++i) {
    const Real j = Real(u.labels[i]);
    acc += (a + b * j + c * j * j) * quadrature(u.grid, u.comps[i].abs2());
  }
  return acc;
}

template <typename Real>
DiagnosticsRecord<Real> compute_diagnostics(const VecField<Real>& u, Real t,
                                            const MorawetzWeight<Real>& w) {
  DiagnosticsRecord<Real> rec;
  rec.t = t;
  rec.mass_abc["1,0,0"] = mass_abc(u, Real(1), Real(0), Real(0));
  rec.mass_abc["0,1,0"] = mass_abc(u, Real(0), Real(1), Real(0));
  rec.mass_abc["0,0,1"] = mass_abc(u, Real(0), Real(0), Real(1));
  rec.l2h_0 = norm_l2h(u, 0);
  rec.l2h_1 = norm_l2h(u, 1);
  rec.l2h_2 = norm_l2h(u, 2);
  rec.energy = energy(u);
  const VirialChain<Real> vc = virial_chain(u);
  rec.variance = vc.variance;
  rec.virial_v1 = vc.virial_v1;
  rec.localized = vc.localized;
  rec.morawetz_m = morawetz_action(u, w);
  rec.sup_norm = sup_norm(u);
  return rec;
}

}  // namespace rnls
