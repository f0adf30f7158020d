#pragma once

#include <cmath>
#include <functional>
#include <type_traits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rnls/field.hpp"

namespace rnls {

template <typename Real>
struct SolverConfig {
  Real dt_max = Real(1e-2);
  Real cfl_constant = Real(0.1);   // dt <= cfl / max_x 2 sum_k |u_k|^2
  Real t_end = Real(1);
  Real blowup_sup_factor = Real(1e3);  // threshold = factor * initial sup
  Real dt_min = Real(1e-9);
  bool dealias = false;            // 2/3-rule spectral filter per step
  Real sample_interval = Real(0.1);

  void validate() const {
    if (!(dt_max > 0) || !(dt_min > 0) || !(dt_min < dt_max) ||
        !(cfl_constant > 0) || !(t_end > 0) || !(sample_interval > 0) ||
        !(blowup_sup_factor > 0))
      throw std::invalid_argument("SolverConfig: invalid parameters");
  }
};

enum class EvolutionStatus { completed, blowup_detected, aborted };

template <typename Real>
struct BlowupInfo {
  Real t_star = 0;
  std::vector<std::pair<Real, Real>> sup_history;  // trailing (t, sup) samples
};

template <typename Real>
struct EvolutionOutcome {
  EvolutionStatus status = EvolutionStatus::completed;
  Real t_final = 0;
  long steps = 0;
  VecField<Real> final_state;
  std::optional<BlowupInfo<Real>> blowup_info;
};

/// Half of the linear flow over dt: each component is multiplied in spectral
/// space by exp(-i |k|^2 dt / 2). Exactly unitary in every L^2 h^s.
template <typename Real>
VecField<Real> linear_half_step(const VecField<Real>& u, Real dt) {
  using Complex = std::complex<Real>;
  const auto& fft = fft_for(u.grid);
  VecField<Real> out = u;
  for (auto& comp : out.comps) {
    ComplexArray2<Real> c = fft.forward(comp);
    for (Eigen::Index j = 0; j < u.grid.points; ++j)
      for (Eigen::Index i = 0; i < u.grid.points; ++i) {
        const Real th = -u.grid.ksq(i, j) * dt / 2;
        c(i, j) *= Complex(std::cos(th), std::sin(th));
      }
    comp = fft.inverse(c);
  }
  return out;
}

/// Exact nonlinear substep: along i du_j/dt = -F_j(u) every |u_j| is
/// pointwise constant, so the flow is the phase rotation
///   u_j <- exp(+i dt (2 sum_k |u_k|^2 - |u_j|^2)) u_j.
template <typename Real>
VecField<Real> nonlinear_step(const VecField<Real>& u, Real dt) {
  using Complex = std::complex<Real>;
  const RealArray2<Real> two_rho = Real(2) * total_density(u);
  VecField<Real> out = u;
  for (auto& comp : out.comps) {
    const RealArray2<Real> theta = dt * (two_rho - comp.abs2());
    comp *= theta.cos().template cast<Complex>() +
            Complex(0, 1) * theta.sin().template cast<Complex>();
  }
  return out;
}

namespace detail {

/// Keep integer frequencies |f| <= M/3 (the 2/3 rule); returns a 0/1 mask in
/// the field layout.
template <typename Real>
RealArray2<Real> dealias_mask(const Grid2D<Real>& g) {
  const Eigen::Index m = g.points;
  const Eigen::Index cut = m / 3;
  RealVec<Real> keep(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index f = (i < m / 2) ? i : i - m;
    keep[i] = (std::abs(f) <= cut) ? Real(1) : Real(0);
  }
  RealArray2<Real> mask(m, m);
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index i = 0; i < m; ++i) mask(i, j) = keep[i] * keep[j];
  return mask;
}

/// Strang stepper with cached spectral phase tables; reuses the phase array
/// as long as dt does not change (the common case away from blowup).
template <typename Real>
class StrangStepper {
 public:
  using Complex = std::complex<Real>;

  explicit StrangStepper(const Grid2D<Real>& g)
      : grid_(g), ksq_(ksq_array(g)), mask_(dealias_mask(g)) {}

  void step(VecField<Real>& u, Real dt, bool dealias) {
    refresh_phase(dt);
    const auto& fft = fft_for(grid_);
    // first linear half step
    for (auto& comp : u.comps)
      comp = fft.inverse((fft.forward(comp) * phase_).eval());
    // full nonlinear step
    {
      const RealArray2<Real> two_rho = Real(2) * total_density(u);
      for (auto& comp : u.comps) {
        const RealArray2<Real> theta = dt * (two_rho - comp.abs2());
        comp *= theta.cos().template cast<Complex>() +
                Complex(0, 1) * theta.sin().template cast<Complex>();
      }
    }
    // second linear half step (+ optional 2/3-rule filter)
    for (auto& comp : u.comps) {
      ComplexArray2<Real> c = fft.forward(comp) * phase_;
      if (dealias) c *= mask_.template cast<Complex>();
      comp = fft.inverse(c);
    }
  }

 private:
  void refresh_phase(Real dt) {
    if (have_phase_ && dt == phase_dt_) return;
    const RealArray2<Real> theta = -ksq_ * (dt / 2);
    phase_ = theta.cos().template cast<Complex>() +
             Complex(0, 1) * theta.sin().template cast<Complex>();
    phase_dt_ = dt;
    have_phase_ = true;
  }

  Grid2D<Real> grid_;
  RealArray2<Real> ksq_;
  RealArray2<Real> mask_;
  ComplexArray2<Real> phase_;
  Real phase_dt_ = 0;
  bool have_phase_ = false;
};

}  // namespace detail

/// One second-order Strang step: linear half, exact nonlinear, linear half.
template <typename Real>
VecField<Real> strang_step(const VecField<Real>& u, Real dt,
                           bool dealias = false) {
  VecField<Real> out = u;
  detail::StrangStepper<Real> stepper(u.grid);
  stepper.step(out, dt, dealias);
  return out;
}

template <typename Real>
using Monitor = std::function<void(Real, const VecField<Real>&)>;

/// Adaptive split-step evolution. dt tracks the instantaneous nonlinear
/// phase rate, steps land exactly on sample times, and the run halts on
/// t_end, on the sup-norm blowup threshold, or when dt collapses below
/// dt_min (the two blowup signals of the adaptive scheme).
template <typename Real>
EvolutionOutcome<Real> evolve(
    const VecField<Real>& u0, const SolverConfig<Real>& cfg,
    const std::type_identity_t<Monitor<Real>>& monitor = {}) {
  cfg.validate();

  EvolutionOutcome<Real> out;
  out.final_state = u0;
  if (has_nonfinite(u0)) {
    out.status = EvolutionStatus::aborted;
    return out;
  }
  VecField<Real>& state = out.final_state;
  detail::StrangStepper<Real> stepper(u0.grid);

  const Real sup0 = sup_norm(u0);
  const Real sup_threshold = cfg.blowup_sup_factor * sup0;
  std::vector<std::pair<Real, Real>> history;
  auto push_history = [&history](Real t, Real s) {
    history.emplace_back(t, s);
    if (history.size() > 64) history.erase(history.begin());
  };
  push_history(Real(0), sup0);

  if (monitor) monitor(Real(0), state);

  Real t(0);
  long sample_index = 1;
  VecField<Real> prev = state;

  while (t < cfg.t_end * (Real(1) - Real(1e-14))) {
    const Real rate = Real(2) * total_density(state).maxCoeff();
    Real dt = cfg.dt_max;
    if (rate > Real(0)) dt = std::min(dt, cfg.cfl_constant / rate);
    if (dt < cfg.dt_min) {
      out.status = EvolutionStatus::blowup_detected;
      out.blowup_info = BlowupInfo<Real>{t, history};
      break;
    }

    const Real next_sample = Real(sample_index) * cfg.sample_interval;
    const Real next_event = std::min(next_sample, cfg.t_end);
    bool at_event = false;
    if (t + dt >= next_event - Real(1e-14) * next_event) {
      dt = next_event - t;
      at_event = true;
    }

    prev = state;
    stepper.step(state, dt, cfg.dealias);
    ++out.steps;
    t = at_event ? next_event : t + dt;

    if (has_nonfinite(state)) {
      state = prev;  // keep the last good state
      out.status = EvolutionStatus::aborted;
      break;
    }

    const Real sup = sup_norm(state);
    push_history(t, sup);
    if (sup0 > Real(0) && sup > sup_threshold) {
      out.status = EvolutionStatus::blowup_detected;
      out.blowup_info = BlowupInfo<Real>{t, history};
      break;
    }

    if (at_event) {
      if (monitor && next_event == next_sample) monitor(t, state);
      if (next_event == next_sample) ++sample_index;
      if (monitor && next_event == cfg.t_end && next_event != next_sample)
        monitor(t, state);
    }
  }

  out.t_final = t;
  return out;
}

/// Galilean boost: u_j(x) <- e^{i x.xi - i t |xi|^2} u_j(x - 2 t xi).
/// xi must be a grid-commensurate velocity (integer multiple of 2 pi / L per
/// axis) so the phase ramp is periodic; the shift is done spectrally and is
/// exact for band-limited fields.
template <typename Real>
VecField<Real> galilean_boost(const VecField<Real>& u,
                              std::pair<Real, Real> xi, Real t) {
  using Complex = std::complex<Real>;
  const Real dk = Real(2) * Real(EIGEN_PI) / u.grid.box_length;
  for (Real c : {xi.first, xi.second}) {
    const Real ratio = c / dk;
    if (std::abs(ratio - std::round(ratio)) > Real(1e-9))
      throw std::invalid_argument(
          "galilean_boost: xi must be an integer multiple of 2*pi/L per axis");
  }

  const auto& fft = fft_for(u.grid);
  const Real sx = 2 * t * xi.first, sy = 2 * t * xi.second;
  const Real xi2 = xi.first * xi.first + xi.second * xi.second;
  VecField<Real> out = u;
  for (auto& comp : out.comps) {
    ComplexArray2<Real> c = fft.forward(comp);
    for (Eigen::Index j = 0; j < u.grid.points; ++j)
      for (Eigen::Index i = 0; i < u.grid.points; ++i) {
        const Real th = -(u.grid.k[i] * sx + u.grid.k[j] * sy);
        c(i, j) *= Complex(std::cos(th), std::sin(th));
      }
    comp = fft.inverse(c);
    for (Eigen::Index j = 0; j < u.grid.points; ++j)
      for (Eigen::Index i = 0; i < u.grid.points; ++i) {
        const Real th =
            u.grid.x[i] * xi.first + u.grid.x[j] * xi.second - t * xi2;
        comp(i, j) *= Complex(std::cos(th), std::sin(th));
      }
  }
  return out;
}

/// Exact scaling symmetry u_j <- lambda u_j(lambda x), realized as a grid
/// relabeling L -> L/lambda with unchanged sample values (times lambda).
template <typename Real>
VecField<Real> rescale(const VecField<Real>& u, Real lambda) {
  if (!(lambda > 0))
    throw std::invalid_argument("rescale: lambda must be positive");
  VecField<Real> out = u;
  out.grid = make_grid(u.grid.box_length / lambda, u.grid.points);
  for (auto& comp : out.comps) comp *= lambda;
  return out;
}

}  // namespace rnls
