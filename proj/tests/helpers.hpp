#pragma once

#include <complex>
#include <random>
#include <vector>

#include "rnls/field.hpp"

namespace rnls::test {

/// Smooth random field: iid complex Gaussian spectral coefficients under a
/// Gaussian envelope, zero beyond |f| > band (integer frequencies).
inline ComplexArray2<double> random_band_limited(const Grid2D<double>& g,
                                                 std::mt19937_64& rng,
                                                 int band) {
  std::normal_distribution<double> unit;
  ComplexArray2<double> chat =
      ComplexArray2<double>::Zero(g.points, g.points);
  for (Eigen::Index j = 0; j < g.points; ++j)
    for (Eigen::Index i = 0; i < g.points; ++i) {
      const Eigen::Index fi = (i < g.points / 2) ? i : i - g.points;
      const Eigen::Index fj = (j < g.points / 2) ? j : j - g.points;
      if (std::abs(fi) > band || std::abs(fj) > band) continue;
      const double env =
          std::exp(-(double(fi * fi + fj * fj)) / (2.0 * band * band / 4.0));
      chat(i, j) = std::complex<double>(unit(rng), unit(rng)) * env;
    }
  return inverse_transform(chat, g);
}

inline VecField<double> random_field(const Grid2D<double>& g,
                                     std::vector<int> labels, unsigned seed,
                                     int band = 4) {
  std::mt19937_64 rng(seed);
  VecField<double> u = make_zero_field(g, std::move(labels));
  for (auto& c : u.comps) c = random_band_limited(g, rng, band);
  return u;
}

/// A exp(-|x - x0|^2 / (2 w^2)) as one component.
inline ComplexArray2<double> gaussian_component(const Grid2D<double>& g,
                                                double amplitude,
                                                double width = 1.0,
                                                double x0 = 0.0,
                                                double y0 = 0.0) {
  ComplexArray2<double> out(g.points, g.points);
  for (Eigen::Index j = 0; j < g.points; ++j)
    for (Eigen::Index i = 0; i < g.points; ++i) {
      const double dx = g.x[i] - x0, dy = g.x[j] - y0;
      out(i, j) = amplitude * std::exp(-(dx * dx + dy * dy) / (2 * width * width));
    }
  return out;
}

inline VecField<double> gaussian_field(const Grid2D<double>& g, int n,
                                       double amplitude, double width = 1.0) {
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) labels[i] = i;
  VecField<double> u = make_zero_field(g, labels);
  for (auto& c : u.comps) c = gaussian_component(g, amplitude, width);
  return u;
}

}  // namespace rnls::test
