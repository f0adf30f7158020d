#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "helpers.hpp"
#include "rnls/solver.hpp"
#include "rnls/variational.hpp"

using namespace rnls;
using Complex = std::complex<double>;

namespace {

double field_distance(const VecField<double>& a, const VecField<double>& b) {
  double d = 0;
  for (int i = 0; i < a.n_components(); ++i)
    d = std::max(d, (a.comps[i] - b.comps[i]).abs().maxCoeff());
  return d;
}

}  // namespace

TEST_CASE("linear half step: pure mode and unitarity") {
  const auto g = make_grid<double>(8.0, 32);
  VecField<double> u = make_zero_field(g, {0});
  const Eigen::Index mi = 3, mj = 30;
  for (Eigen::Index j = 0; j < g.points; ++j)
    for (Eigen::Index i = 0; i < g.points; ++i) {
      const double th = g.k[mi] * g.x[i] + g.k[mj] * g.x[j];
      u[0](i, j) = Complex(std::cos(th), std::sin(th));
    }

  const double dt = 0.37;
  const auto v = linear_half_step(u, dt);
  const double phase = -g.ksq(mi, mj) * dt / 2;
  const Complex factor(std::cos(phase), std::sin(phase));
  CHECK((v.comps[0] - factor * u.comps[0]).abs().maxCoeff() < 1e-12);
  CHECK((v.comps[0].abs() - u.comps[0].abs()).abs().maxCoeff() < 1e-12);

  SUBCASE("dt = 0 is the identity") {
    const auto w = linear_half_step(u, 0.0);
    CHECK(field_distance(w, u) < 1e-14);
  }

  SUBCASE("norm preservation in every L^2 h^s") {
    const auto r = test::random_field(g, {-1, 0, 1}, 17, 10);
    const auto s = linear_half_step(r, 0.83);
    for (int k : {0, 1, 2})
      CHECK(norm_l2h(s, k) ==
            doctest::Approx(norm_l2h(r, k)).epsilon(1e-12));
  }
}

TEST_CASE("linear flow reproduces the free Gaussian solution") {
  // e^{i t Lap} A e^{-|x|^2/2} = A/(1+2it) e^{-|x|^2/(2(1+2it))}
  const auto g = make_grid<double>(32.0, 256);
  VecField<double> u = make_zero_field(g, {0});
  u[0] = test::gaussian_component(g, 1.0);

  const double t = 0.5;
  const auto v = linear_half_step(u, 2 * t);  // half of 2t = time t
  const Complex denom(1.0, 2 * t);
  double err = 0;
  for (Eigen::Index j = 0; j < g.points; ++j)
    for (Eigen::Index i = 0; i < g.points; ++i) {
      const double r2 = g.x[i] * g.x[i] + g.x[j] * g.x[j];
      const Complex exact = std::exp(-r2 / (2.0 * denom)) / denom;
      err = std::max(err, std::abs(v.comps[0](i, j) - exact));
    }
  CHECK(err < 1e-8);
}

TEST_CASE("nonlinear step: exact phase rotation") {
  const auto g = make_grid<double>(4.0, 16);

  SUBCASE("single constant component") {
    VecField<double> u = make_zero_field(g, {0});
    const double a = 1.3, dt = 0.21;
    u[0] = ComplexArray2<double>::Constant(16, 16, a);
    const auto v = nonlinear_step(u, dt);
    const Complex expect = a * std::polar(1.0, dt * a * a);
    CHECK(std::abs(v.comps[0](5, 7) - expect) < 1e-14);
  }

  SUBCASE("two unit constants rotate by 3 dt") {
    VecField<double> u = make_zero_field(g, {0, 1});
    u[0] = ComplexArray2<double>::Constant(16, 16, 1.0);
    u[1] = ComplexArray2<double>::Constant(16, 16, 1.0);
    const double dt = 0.17;
    const auto v = nonlinear_step(u, dt);
    const Complex expect = std::polar(1.0, 3 * dt);
    for (int c : {0, 1})
      CHECK(std::abs(v.comps[c](2, 2) - expect) < 1e-14);
  }

  SUBCASE("pointwise modulus preserved on random fields") {
    const auto u = test::random_field(g, {0, 1, 2}, 23, 4);
    const auto v = nonlinear_step(u, 0.4);
    for (int i = 0; i < 3; ++i)
      CHECK((v.comps[i].abs() - u.comps[i].abs()).abs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("strang step is second-order accurate") {
  const auto g = make_grid<double>(32.0, 128);
  VecField<double> u0 = make_zero_field(g, {0});
  u0[0] = test::gaussian_component(g, 1.0);

  const double t_end = 0.5;
  auto run = [&](double dt) {
    VecField<double> u = u0;
    const long n = std::lround(t_end / dt);
    for (long s = 0; s < n; ++s) u = strang_step(u, dt);
    return u;
  };
  const auto ref = run(1.0 / 1024);
  const double e1 = field_distance(run(1.0 / 64), ref);
  const double e2 = field_distance(run(1.0 / 128), ref);
  const double ratio = e1 / e2;
  CHECK(ratio > 3.2);
  CHECK(ratio < 4.8);
}

TEST_CASE("evolve conserves the component masses and the energy") {
  const auto g = make_grid<double>(32.0, 128);
  VecField<double> u0 = make_zero_field(g, {0, 1});
  u0[0] = test::gaussian_component(g, 0.55);
  u0[1] = test::gaussian_component(g, 0.45, 1.2);

  SolverConfig<double> cfg;
  cfg.t_end = 1.0;
  cfg.dt_max = 5e-4;
  cfg.sample_interval = 0.5;

  std::vector<double> mass0(2), h_start(3), h_end(3);
  for (int i = 0; i < 2; ++i)
    mass0[i] = quadrature(g, u0.comps[i].abs2().eval());
  for (int s : {0, 1, 2}) h_start[s] = norm_l2h(u0, s);
  const double e0 = energy(u0);

  const auto out = evolve(u0, cfg);
  CHECK(out.status == EvolutionStatus::completed);
  CHECK(out.t_final == doctest::Approx(1.0).epsilon(1e-12));

  for (int i = 0; i < 2; ++i) {
    const double m = quadrature(g, out.final_state.comps[i].abs2().eval());
    CHECK(std::abs(m - mass0[i]) / mass0[i] < 1e-10);
  }
  for (int s : {0, 1, 2}) {
    h_end[s] = norm_l2h(out.final_state, s);
    CHECK(std::abs(h_end[s] - h_start[s]) / h_start[s] < 1e-10);
  }
  const double e1 = energy(out.final_state);
  CHECK(std::abs(e1 - e0) / std::abs(e0) < 1e-8);
}

TEST_CASE("evolve invokes monitors on the sample cadence") {
  const auto g = make_grid<double>(16.0, 32);
  VecField<double> u0 = make_zero_field(g, {0});
  u0[0] = test::gaussian_component(g, 0.2);

  SolverConfig<double> cfg;
  cfg.t_end = 1.0;
  cfg.dt_max = 0.03;
  cfg.sample_interval = 0.25;

  std::vector<double> seen;
  const auto out = evolve(u0, cfg, [&](double t, const VecField<double>&) {
    seen.push_back(t);
  });
  CHECK(out.status == EvolutionStatus::completed);
  REQUIRE(seen.size() == 5);
  for (size_t i = 0; i < seen.size(); ++i)
    CHECK(seen[i] == doctest::Approx(0.25 * i).epsilon(1e-12));
}

TEST_CASE("negative-energy gaussian blows up in finite time") {
  // A^2 = 8: mass 8 pi > ||Q||^2, E = -4 pi < 0; Glassey collapse by t ~ 0.5.
  // dx = 0.125 keeps the spike resolved well past the detection threshold.
  const auto g = make_grid<double>(16.0, 128);
  VecField<double> u0 = make_zero_field(g, {0});
  u0[0] = test::gaussian_component(g, std::sqrt(8.0));
  CHECK(energy(u0) == doctest::Approx(-4 * EIGEN_PI).epsilon(1e-8));

  SolverConfig<double> cfg;
  cfg.t_end = 2.0;
  cfg.dt_max = 2e-3;
  cfg.blowup_sup_factor = 10.0;

  const auto out = evolve(u0, cfg);
  CHECK(out.status == EvolutionStatus::blowup_detected);
  CHECK(out.t_final < 1.0);
  REQUIRE(out.blowup_info.has_value());
  CHECK(out.blowup_info->t_star == out.t_final);
  CHECK(out.blowup_info->sup_history.size() > 4);
}

TEST_CASE("dt collapse is reported as blowup detection") {
  const auto g = make_grid<double>(16.0, 32);
  VecField<double> u0 = make_zero_field(g, {0});
  u0[0] = test::gaussian_component(g, 1.0);

  SolverConfig<double> cfg;
  cfg.t_end = 1.0;
  cfg.dt_max = 0.1;
  cfg.dt_min = 0.09;
  cfg.cfl_constant = 1e-4;  // forces dt below dt_min immediately

  const auto out = evolve(u0, cfg);
  CHECK(out.status == EvolutionStatus::blowup_detected);
  CHECK(out.steps == 0);
}

TEST_CASE("non-finite data aborts before stepping") {
  const auto g = make_grid<double>(16.0, 32);
  VecField<double> u0 = make_zero_field(g, {0});
  u0[0] = test::gaussian_component(g, 1.0);
  u0[0](3, 3) = Complex(std::numeric_limits<double>::infinity(), 0.0);

  SolverConfig<double> cfg;
  cfg.t_end = 1.0;
  cfg.dt_max = 0.01;

  const auto out = evolve(u0, cfg);
  CHECK(out.status == EvolutionStatus::aborted);
  CHECK(out.steps == 0);
  CHECK(out.t_final == 0.0);
}

TEST_CASE("zero components stay numerically zero through evolution") {
  const auto g = make_grid<double>(16.0, 64);
  VecField<double> u0 = make_zero_field(g, {0, 1});
  u0[0] = test::gaussian_component(g, 0.8);

  SolverConfig<double> cfg;
  cfg.t_end = 0.5;
  cfg.dt_max = 1e-3;

  const auto out = evolve(u0, cfg);
  CHECK(out.status == EvolutionStatus::completed);
  CHECK(out.final_state.comps[1].abs().maxCoeff() < 1e-13 * sup_norm(u0));
}

TEST_CASE("galilean boost covariance of the solution map") {
  const auto g = make_grid<double>(32.0, 128);
  VecField<double> u0 = make_zero_field(g, {0, 1});
  u0[0] = test::gaussian_component(g, 0.6);
  u0[1] = test::gaussian_component(g, 0.5, 1.1);

  const double dk = 2 * EIGEN_PI / g.box_length;
  const std::pair<double, double> xi{2 * dk, -dk};
  const double t_end = 0.25;

  SolverConfig<double> cfg;
  cfg.t_end = t_end;
  cfg.dt_max = 2.5e-3;
  cfg.sample_interval = t_end;

  // evolve then boost
  const auto plain = evolve(u0, cfg);
  REQUIRE(plain.status == EvolutionStatus::completed);
  const auto boosted_after = galilean_boost(plain.final_state, xi, t_end);
  // boost then evolve
  const auto boosted_first = galilean_boost(u0, xi, 0.0);
  const auto evolved = evolve(boosted_first, cfg);
  REQUIRE(evolved.status == EvolutionStatus::completed);

  CHECK(field_distance(evolved.final_state, boosted_after) < 1e-8);

  CHECK_THROWS_AS(galilean_boost(u0, {0.3 * dk, 0.0}, 0.0),
                  std::invalid_argument);
}

TEST_CASE("rescale: identity at lambda = 1 and exact scaling covariance") {
  const auto g = make_grid<double>(32.0, 128);
  VecField<double> u0 = make_zero_field(g, {0});
  u0[0] = test::gaussian_component(g, 0.7);

  SUBCASE("lambda = 1 is the identity") {
    const auto v = rescale(u0, 1.0);
    CHECK(field_distance(v, u0) == 0.0);
    CHECK(v.grid.box_length == g.box_length);
  }

  SUBCASE("lambda u(lambda^2 t, lambda x) solves the system") {
    const double lambda = 2.0, t_end = 0.2;

    SolverConfig<double> cfg_a;
    cfg_a.t_end = t_end;
    cfg_a.dt_max = 2e-3;
    cfg_a.sample_interval = t_end;

    SolverConfig<double> cfg_b = cfg_a;
    cfg_b.t_end = t_end / (lambda * lambda);
    cfg_b.dt_max = cfg_a.dt_max / (lambda * lambda);
    cfg_b.sample_interval = cfg_b.t_end;

    const auto run_a = evolve(u0, cfg_a);
    const auto run_b = evolve(rescale(u0, lambda), cfg_b);
    REQUIRE(run_a.status == EvolutionStatus::completed);
    REQUIRE(run_b.status == EvolutionStatus::completed);

    const auto expected = rescale(run_a.final_state, lambda);
    CHECK(field_distance(run_b.final_state, expected) < 1e-8);
  }

  CHECK_THROWS_AS(rescale(u0, -2.0), std::invalid_argument);
}

TEST_CASE("dealias filter is inert on well-resolved fields") {
  const auto g = make_grid<double>(16.0, 64);
  const auto u = test::random_field(g, {0, 1}, 47, 4);  // band << M/3
  const auto a = strang_step(u, 1e-3, false);
  const auto b = strang_step(u, 1e-3, true);
  CHECK(field_distance(a, b) < 1e-12 * sup_norm(u));
}
