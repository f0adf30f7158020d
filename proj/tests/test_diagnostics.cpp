#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "helpers.hpp"
#include "rnls/diagnostics.hpp"
#include "rnls/solver.hpp"

using namespace rnls;
using Complex = std::complex<double>;

namespace {

// Gaussian with a quadratic phase chirp: nonzero momentum density, smooth,
// and it stays localized over short runs.
VecField<double> chirped_gaussian(const Grid2D<double>& g, int n, double a,
                                  double chirp) {
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) labels[i] = i;
  VecField<double> u = make_zero_field(g, labels);
  for (int c = 0; c < n; ++c)
    for (Eigen::Index j = 0; j < g.points; ++j)
      for (Eigen::Index i = 0; i < g.points; ++i) {
        const double r2 = g.x[i] * g.x[i] + g.x[j] * g.x[j];
        const double amp = a * std::exp(-r2 / 2) / (1.0 + 0.3 * c);
        u[c](i, j) = amp * std::polar(1.0, chirp * r2);
      }
  return u;
}

}  // namespace

TEST_CASE("virial chain on static profiles") {
  const auto g = make_grid<double>(32.0, 128);

  SUBCASE("real gaussian: zero current, gaussian variance") {
    VecField<double> u = make_zero_field(g, {0});
    u[0] = test::gaussian_component(g, 1.0);
    const auto vc = virial_chain(u);
    // V = \int |x|^2 e^{-|x|^2} = pi for A = 1
    CHECK(vc.variance == doctest::Approx(EIGEN_PI).epsilon(1e-10));
    CHECK(std::abs(vc.virial_v1) < 1e-13);
    CHECK(vc.localized);
    CHECK(vc.sixteen_e == doctest::Approx(16 * energy(u)).epsilon(1e-13));
  }

  SUBCASE("localization flag drops for edge-heavy data") {
    VecField<double> u = make_zero_field(g, {0});
    u[0] = test::gaussian_component(g, 1.0, 1.0, g.box_length / 3.0, 0.0);
    const auto vc = virial_chain(u);
    CHECK_FALSE(vc.localized);
  }
}

TEST_CASE("virial identities against the evolved flow") {
  const auto g = make_grid<double>(32.0, 128);
  const auto u0 = chirped_gaussian(g, 1, 0.8, 0.15);

  const double dt = 1e-3, h = 4e-3;
  SolverConfig<double> cfg;
  cfg.t_end = 6 * h;
  cfg.dt_max = dt;
  cfg.sample_interval = h;

  std::vector<double> vs, v1s, e16s;
  evolve(u0, cfg, [&](double, const VecField<double>& u) {
    const auto vc = virial_chain(u);
    REQUIRE(vc.localized);
    vs.push_back(vc.variance);
    v1s.push_back(vc.virial_v1);
    e16s.push_back(vc.sixteen_e);
  });
  REQUIRE(vs.size() == 7);

  // dV/dt = v1 and d(v1)/dt = 16E at the interior samples
  for (size_t i = 1; i + 1 < vs.size(); ++i) {
    const double fd_v = (vs[i + 1] - vs[i - 1]) / (2 * h);
    CHECK(fd_v == doctest::Approx(v1s[i]).epsilon(2e-4));
    const double fd_v1 = (v1s[i + 1] - v1s[i - 1]) / (2 * h);
    CHECK(fd_v1 == doctest::Approx(e16s[i]).epsilon(2e-4));
  }
  // energy is conserved up to the bounded O(dt^2) splitting oscillation
  CHECK(e16s.front() == doctest::Approx(e16s.back()).epsilon(1e-7));
}

TEST_CASE("morawetz action and derivative: zero field and real data") {
  const auto g = make_grid<double>(16.0, 32);
  const auto w = make_morawetz_weight(g);

  const auto zero = make_zero_field<double>(g, {0, 1});
  CHECK(morawetz_action(zero, w) == 0.0);
  CHECK(morawetz_derivative(zero, w).total() == 0.0);

  VecField<double> u = make_zero_field(g, {0});
  u[0] = test::gaussian_component(g, 1.2);
  CHECK(std::abs(morawetz_action(u, w)) < 1e-13);
}

TEST_CASE("tiny-grid direct quadrature matches the correlation path") {
  const auto g = make_grid<double>(8.0, 16);
  const auto w = make_morawetz_weight(g);
  const auto u = test::random_field(g, {0, 1, 2}, 314, 5);

  const auto [action_direct, deriv_direct] = morawetz_direct(u, w);
  const double action_fft = morawetz_action(u, w);
  const auto deriv_fft = morawetz_derivative(u, w);

  const double scale = std::abs(action_direct) + 1.0;
  CHECK(std::abs(action_fft - action_direct) < 1e-10 * scale);
  CHECK(std::abs(deriv_fft.hessian_term - deriv_direct.hessian_term) <
        1e-10 * (std::abs(deriv_direct.hessian_term) + 1));
  CHECK(std::abs(deriv_fft.biharmonic_term - deriv_direct.biharmonic_term) <
        1e-10 * (std::abs(deriv_direct.biharmonic_term) + 1));
  CHECK(std::abs(deriv_fft.quartic_term - deriv_direct.quartic_term) <
        1e-10 * (std::abs(deriv_direct.quartic_term) + 1));
  CHECK(std::abs(deriv_fft.momentum_term - deriv_direct.momentum_term) <
        1e-10 * (std::abs(deriv_direct.momentum_term) + 1));

  const auto big = make_grid<double>(16.0, 32);
  CHECK_THROWS_AS(morawetz_direct(test::random_field(big, {0}, 1, 4),
                                  make_morawetz_weight(big)),
                  std::invalid_argument);
}

TEST_CASE("morawetz derivative identity along the flow") {
  const auto g = make_grid<double>(16.0, 64);
  const auto w = make_morawetz_weight(g);
  const auto u0 = chirped_gaussian(g, 2, 0.6, 0.1);

  const double dt = 5e-4, h = 2e-3;
  SolverConfig<double> cfg;
  cfg.t_end = 4 * h;
  cfg.dt_max = dt;
  cfg.sample_interval = h;

  std::vector<double> ms, rhs;
  evolve(u0, cfg, [&](double, const VecField<double>& u) {
    ms.push_back(morawetz_action(u, w));
    rhs.push_back(morawetz_derivative(u, w).total());
  });
  REQUIRE(ms.size() == 5);

  double scale = 0;
  for (double v : rhs) scale = std::max(scale, std::abs(v));
  for (size_t i = 1; i + 1 < ms.size(); ++i) {
    const double fd = (ms[i + 1] - ms[i - 1]) / (2 * h);
    CHECK(std::abs(fd - rhs[i]) < 2e-4 * scale);
  }
}

TEST_CASE("scattering norm accumulator") {
  ScatteringNormAccumulator<double> acc;
  CHECK(acc.total() == 0.0);

  SUBCASE("zero field gives a zero accumulator") {
    for (int i = 0; i <= 10; ++i) acc.add(0.1 * i, 0.0);
    CHECK(acc.total() == 0.0);
  }

  SUBCASE("trapezoid integrates norm^4 exactly for linear integrands") {
    // norm = t^{1/4}  =>  norm^4 = t  =>  integral = T^2 / 2
    for (int i = 0; i <= 100; ++i) {
      const double t = 0.05 * i;
      acc.add(t, std::pow(t, 0.25));
    }
    CHECK(acc.total() == doctest::Approx(12.5).epsilon(1e-12));
    CHECK(acc.increment(0.0, 5.0) == doctest::Approx(12.5).epsilon(1e-12));
    CHECK(acc.increment(4.5, 5.0) ==
          doctest::Approx((25.0 - 20.25) / 2).epsilon(1e-12));
  }

  SUBCASE("time must not decrease") {
    acc.add(0.0, 1.0);
    acc.add(1.0, 1.0);
    CHECK_THROWS_AS(acc.add(0.5, 1.0), std::invalid_argument);
  }
}

TEST_CASE("dispersion fit recovers power laws") {
  SUBCASE("synthetic exact power law") {
    std::vector<double> ts, vs;
    for (int i = 1; i <= 50; ++i) {
      const double t = 0.1 * i;
      ts.push_back(t);
      vs.push_back(2.0 * std::pow(t, -0.5));
    }
    CHECK(dispersion_fit(ts, vs, 1.0, 5.0) ==
          doctest::Approx(-0.5).epsilon(1e-12));
    CHECK_THROWS_AS(dispersion_fit(ts, vs, 80.0, 90.0),
                    std::invalid_argument);
  }

  SUBCASE("free evolution of a gaussian decays like t^{-1/2}") {
    const auto g = make_grid<double>(64.0, 192);
    VecField<double> u = make_zero_field(g, {0});
    u[0] = test::gaussian_component(g, 1.0);

    std::vector<double> ts, vs;
    double t = 0;
    const double step = 0.25;
    VecField<double> cur = u;
    while (t < 4.5) {
      t += step;
      cur = linear_half_step(cur, 2 * step);  // exact free flow over `step`
      ts.push_back(t);
      vs.push_back(norm_l4l2(cur));
    }
    const double slope = dispersion_fit(ts, vs, 1.5, 4.5);
    CHECK(slope == doctest::Approx(-0.5).epsilon(0.1));
  }
}

TEST_CASE("mass family and the diagnostics record") {
  const auto g = make_grid<double>(16.0, 32);
  auto u = make_zero_field<double>(g, {1, 2});
  u[0] = test::gaussian_component(g, 0.5);
  u[1] = test::gaussian_component(g, 0.25, 1.3);
  const double m1 = quadrature(g, u[0].abs2().eval());
  const double m2 = quadrature(g, u[1].abs2().eval());

  CHECK(mass_abc(u, 1.0, 0.0, 0.0) == doctest::Approx(m1 + m2).epsilon(1e-14));
  CHECK(mass_abc(u, 0.0, 1.0, 0.0) ==
        doctest::Approx(m1 + 2 * m2).epsilon(1e-14));
  CHECK(mass_abc(u, 0.0, 0.0, 1.0) ==
        doctest::Approx(m1 + 4 * m2).epsilon(1e-14));

  const auto w = make_morawetz_weight(g);
  const auto rec = compute_diagnostics(u, 1.5, w);
  CHECK(rec.t == 1.5);
  CHECK(rec.mass_abc.at("1,0,0") == doctest::Approx(m1 + m2));
  CHECK(rec.l2h_0 == doctest::Approx(std::sqrt(m1 + m2)));
  CHECK(rec.sup_norm == doctest::Approx(0.5));
  CHECK(rec.energy == doctest::Approx(energy(u)));
}

TEST_CASE("mass_abc probes are conserved along the flow") {
  const auto g = make_grid<double>(16.0, 64);
  auto u0 = make_zero_field<double>(g, {-1, 0, 1});
  u0[0] = test::gaussian_component(g, 0.4);
  u0[1] = test::gaussian_component(g, 0.5, 1.2);
  u0[2] = test::gaussian_component(g, 0.3, 0.9);

  SolverConfig<double> cfg;
  cfg.t_end = 1.0;
  cfg.dt_max = 2e-3;
  cfg.sample_interval = 1.0;

  const double a0 = mass_abc(u0, 1.0, 0.0, 0.0);
  const double b0 = mass_abc(u0, 0.0, 1.0, 0.0);
  const double c0 = mass_abc(u0, 0.0, 0.0, 1.0);
  const auto out = evolve(u0, cfg);
  REQUIRE(out.status == EvolutionStatus::completed);
  CHECK(mass_abc(out.final_state, 1.0, 0.0, 0.0) ==
        doctest::Approx(a0).epsilon(1e-10));
  CHECK(std::abs(mass_abc(out.final_state, 0.0, 1.0, 0.0) - b0) <
        1e-10 * a0);
  CHECK(mass_abc(out.final_state, 0.0, 0.0, 1.0) ==
        doctest::Approx(c0).epsilon(1e-10));
}
