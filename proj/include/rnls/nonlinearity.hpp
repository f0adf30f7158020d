#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "rnls/field.hpp"

namespace rnls {

/// Integer triples (j1,j2,j3) inside an index set with j1 - j2 + j3 = j and
/// j1^2 - j2^2 + j3^2 = j^2. For a set of size N containing j the set always
/// has 2N-1 elements: {(j,k,k)} u {(k,k,j)} with (j,j,j) shared.
struct ResonanceSet {
  int j = 0;
  std::vector<std::array<int, 3>> triples;
};

inline ResonanceSet resonance_set(int j, const std::vector<int>& index_set) {
  bool found = false;
  for (int v : index_set) found |= (v == j);
  if (!found)
    throw std::invalid_argument("resonance_set: j is not in the index set");

  ResonanceSet out;
  out.j = j;
  const long jsq = static_cast<long>(j) * j;
  for (int j1 : index_set)
    for (int j2 : index_set)
      for (int j3 : index_set) {
        if (j1 - j2 + j3 != j) continue;
        if (static_cast<long>(j1) * j1 - static_cast<long>(j2) * j2 +
                static_cast<long>(j3) * j3 !=
            jsq)
          continue;
        out.triples.push_back({j1, j2, j3});
      }
  return out;
}

/// Reference evaluation of F_j = sum_{R(j)} u_{j1} conj(u_{j2}) u_{j3} by
/// exhaustive enumeration. Oracle only; O(N^2) work per grid point.
template <typename Real>
VecField<Real> apply_nonlinearity_bruteforce(const VecField<Real>& u) {
  const int n = u.n_components();
  if (n > 64)
    throw std::invalid_argument(
        "apply_nonlinearity_bruteforce: refusing N > 64, use the closed form");

  VecField<Real> out = make_zero_field(u.grid, u.labels);
  for (int i = 0; i < n; ++i) {
    const ResonanceSet rs = resonance_set(u.labels[i], u.labels);
    for (const auto& t : rs.triples) {
      const int i1 = u.index_of_label(t[0]);
      const int i2 = u.index_of_label(t[1]);
      const int i3 = u.index_of_label(t[2]);
      out.comps[i] += u.comps[i1] * u.comps[i2].conjugate() * u.comps[i3];
    }
  }
  return out;
}

/// Closed form of the resonant sum: F_j = 2 (sum_k |u_k|^2) u_j - |u_j|^2 u_j.
template <typename Real>
VecField<Real> apply_nonlinearity(const VecField<Real>& u) {
  const RealArray2<Real> rho = total_density(u);
  VecField<Real> out = u;
  for (int i = 0; i < u.n_components(); ++i)
    out.comps[i] = (Real(2) * rho - u.comps[i].abs2()) * u.comps[i];
  return out;
}

/// Pointwise quartic density N(u) = sum_j conj(u_j) F_j(u)
///                                = 2 (sum_j |u_j|^2)^2 - sum_j |u_j|^4,
/// real and non-negative.
template <typename Real>
RealArray2<Real> quartic_density(const VecField<Real>& u) {
  const RealArray2<Real> rho = total_density(u);
  RealArray2<Real> out = Real(2) * rho.square();
  for (const auto& c : u.comps) out -= c.abs2().square();
  return out;
}

/// The quartic functional N(u) = \int N(u) dx.
template <typename Real>
Real quartic_functional(const VecField<Real>& u) {
  return quadrature(u.grid, quartic_density(u));
}

}  // namespace rnls
