#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "rnls/field.hpp"
#include "rnls/nonlinearity.hpp"

namespace rnls {

/// Weinstein functional W(u) = N(u) / ( ||u||_{L^2 l^2}^2 ||grad u||_{L^2 l^2}^2 ).
/// Invariant under u -> mu * u(lambda x); maximized on the vector ground state.
template <typename Real>
Real weinstein(const VecField<Real>& u) {
  const Real m2 = norm_l2h(u, 0);
  const Real g = norm_grad_l2(u);
  if (m2 == Real(0) || g == Real(0))
    throw std::invalid_argument("weinstein: field must be nontrivial");
  return quartic_functional(u) / (m2 * m2 * g * g);
}

/// Sharp Gagliardo-Nirenberg constant and scattering threshold for the
/// N-component system; n_components < 0 encodes the infinite system.
template <typename Real>
struct SharpConstants {
  int n_components = 1;       // -1 marks N = infinity
  Real c_n = 0;               // best constant C_N
  Real threshold_mass = 0;    // L^2_x l^2 threshold norm
  Real q_mass2 = 0;           // certified ||Q||_{L^2}^2

  bool infinite() const { return n_components < 0; }
};

template <typename Real>
SharpConstants<Real> sharp_constants(int n, Real q_mass2) {
  if (n == 0 || n < -1)
    throw std::invalid_argument("sharp_constants: N must be >= 1 or -1 (infinity)");
  SharpConstants<Real> sc;
  sc.n_components = n;
  sc.q_mass2 = q_mass2;
  if (n < 0) {
    sc.c_n = Real(4) / q_mass2;
    sc.threshold_mass = std::sqrt(q_mass2 / Real(2));
  } else {
    sc.c_n = Real(2) * Real(2 * n - 1) / (Real(n) * q_mass2);
    sc.threshold_mass = std::sqrt(Real(n) / Real(2 * n - 1) * q_mass2);
  }
  return sc;
}

/// E(u) = 1/2 ||grad u||_{L^2 l^2}^2 - 1/4 N(u); conserved by the flow.
template <typename Real>
Real energy(const VecField<Real>& u) {
  const Real g = norm_grad_l2(u);
  return g * g / Real(2) - quartic_functional(u) / Real(4);
}

/// Energy coercivity below the threshold:
///   E(u) >= 1/2 (1 - ||u||^2 / threshold^2) ||grad u||^2.
template <typename Real>
struct CoercivityReport {
  bool below_threshold = false;
  Real mass2 = 0;            // ||u||_{L^2 l^2}^2
  Real threshold2 = 0;
  Real energy_value = 0;     // left-hand side
  Real lower_bound = 0;      // right-hand side
  bool holds = false;
};

template <typename Real>
CoercivityReport<Real> coercivity_check(const VecField<Real>& u,
                                        const SharpConstants<Real>& sc) {
  CoercivityReport<Real> rep;
  const Real m = norm_l2h(u, 0);
  rep.mass2 = m * m;
  rep.threshold2 = sc.threshold_mass * sc.threshold_mass;
  rep.below_threshold = rep.mass2 < rep.threshold2;
  rep.energy_value = energy(u);
  if (!rep.below_threshold) {
    rep.lower_bound = -std::numeric_limits<Real>::infinity();
    rep.holds = false;  // above threshold: reported, not an error
    return rep;
  }
  const Real g = norm_grad_l2(u);
  rep.lower_bound = (Real(1) - rep.mass2 / rep.threshold2) * g * g / Real(2);
  // The bound is saturated exactly on the maximizer orbit, so the check
  // tolerates discretization noise on the gradient-norm scale.
  rep.holds = rep.energy_value >= rep.lower_bound - Real(1e-9) * g * g;
  return rep;
}

}  // namespace rnls
