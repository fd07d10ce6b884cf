#include <cmath>
#include <cstring>

#include "cbl/analytic.hpp"
#include "cbl/errors.hpp"
#include "cbl/langevin.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cbl;
using namespace cbl::langevin;
using doctest::Approx;

namespace {
constexpr double kM04 = 0.748331477354788277;

double max_transient_error(const SystemParams& p, double t_end, double dt) {
  const auto traj = integrate_moments(p, t_end, dt);
  return std::fabs(traj.back().plus - quad_moments_transient(p, traj.back().t).plus) +
         std::fabs(traj.back().minus - quad_moments_transient(p, traj.back().t).minus);
}
}  // namespace

TEST_CASE("single RK4 steps") {
  const auto quiet = drift_diffusion({0.0, 0.3, 0.2, 0.5, 0.0});
  auto s = moment_ode_step({0.0, 0.0, 0.0}, quiet, 0.1);
  CHECK(s.plus == 0.0);
  CHECK(s.minus == 0.0);
  CHECK(s.t == Approx(0.1));

  const SystemParams p{2.0, 0.5, 0.3, 0.7, 0.25};
  const auto dd = drift_diffusion(p);
  const auto ss = quad_moments_steady(p);
  s = moment_ode_step({ss.plus, ss.minus, 5.0}, dd, 0.01);
  CHECK(s.plus == Approx(ss.plus).epsilon(1e-12));
  CHECK(s.minus == Approx(ss.minus).epsilon(1e-12));
}

TEST_CASE("trajectory edge cases") {
  const SystemParams p{2.0, 0.5, 0.3, 0.7, 0.25};
  const auto one = integrate_moments(p, 0.0, 0.01);
  REQUIRE(one.size() == 1);
  CHECK(one[0].plus == 0.0);
  CHECK(one[0].minus == 0.0);
  CHECK(one[0].t == 0.0);

  const auto traj = integrate_moments(p, 1.0, 0.03);
  CHECK(traj.back().t == Approx(1.0).epsilon(1e-15));
  for (std::size_t i = 1; i < traj.size(); ++i) CHECK(traj[i].t > traj[i - 1].t);

  CHECK_THROWS_AS(integrate_moments(p, 1.0, 1.0), StepSizeError);
  CHECK_THROWS_AS(integrate_moments({10.0, 0.2, -0.1, 0.0, 0.0}, 1.0, 0.01), ThresholdError);
  CHECK_THROWS_AS(integrate_moments(p, -1.0, 0.01), DomainError);
}

TEST_CASE("empty cavity relaxes to the reservoir moments") {
  const double kappa = 0.2;
  const auto traj = integrate_moments({0.0, kappa, 0.0, 0.0, 0.4}, 50.0 / kappa, 0.01);
  CHECK(std::fabs(traj.back().plus - 2 * (kM04 + 0.4)) <= 1e-8);
  CHECK(std::fabs(traj.back().minus - 2 * (kM04 - 0.4)) <= 1e-8);
}

TEST_CASE("headline point integrated to 20 slow relaxation times") {
  const SystemParams p{10.0, 0.2, 0.25, 0.0, 0.4};
  const auto dd = drift_diffusion(p);
  const double t_end = 20.0 / dd.rate_minus;
  const auto traj = integrate_moments(p, t_end, 0.005 / dd.rate_plus);
  const auto ss = quad_moments_steady(p);
  // Residual of the exact solution at this time is steady * exp(-20).
  CHECK(std::fabs(traj.back().minus - ss.minus) <= 1e-8);
  CHECK(std::fabs(traj.back().plus - ss.plus) <= ss.plus * std::exp(-20.0) + 1e-8);
  for (const auto& s : traj) {
    const auto exact = quad_moments_transient(p, s.t);
    CHECK(std::fabs(s.plus - exact.plus) <= 1e-8);
    CHECK(std::fabs(s.minus - exact.minus) <= 1e-8);
  }
}

TEST_CASE("RK4 convergence order") {
  const SystemParams p{2.0, 0.5, 0.3, 0.7, 0.25};
  const double e1 = max_transient_error(p, 3.0, 0.032);
  const double e2 = max_transient_error(p, 3.0, 0.016);
  const double e3 = max_transient_error(p, 3.0, 0.008);
  MESSAGE("errors " << e1 << " " << e2 << " " << e3);
  CHECK(std::log2(e1 / e2) >= 3.5);
  CHECK(std::log2(e2 / e3) >= 3.5);
}

TEST_CASE("linear fixed point") {
  auto m = steady_moments_linear({0.0, 0.4, 0.0, 0.0, 0.0});
  CHECK(m.plus == 0.0);
  CHECK(m.minus == 0.0);
  m = steady_moments_linear({0.0, 0.2, 0.0, 0.0, 0.4});
  CHECK(m.plus == Approx(2.296662954709576554).epsilon(1e-14));
  CHECK(m.minus == Approx(0.696662954709576554).epsilon(1e-14));

  test::ParamSampler s(606);
  for (int i = 0; i < 5000; ++i) {
    const auto p = s.draw_below_threshold();
    const auto a = steady_moments_linear(p);
    const auto b = quad_moments_steady(p);
    CHECK(test::close_rel(a.plus, b.plus, 1e-12));
    CHECK(test::close_rel(a.minus, b.minus, 1e-12));
  }
}

TEST_CASE("ensemble without noise stays at zero") {
  EnsembleConfig cfg{64, 0.01, 2.0, 1, 0};
  const auto e = stochastic_ensemble({0.0, 0.5, 0.0, 0.0, 0.0}, cfg);
  CHECK(e.moments.plus == 0.0);
  CHECK(e.moments.minus == 0.0);
  CHECK(e.n_trajectories == 64);
}

TEST_CASE("ensemble refuses negative diffusion and bad configs") {
  // Undriven with eta < 0 gives a negative minus-quadrature diffusion.
  const SystemParams p{0.2, 0.5, -0.5, 0.0, 0.0};
  REQUIRE(drift_diffusion(p).diff_minus < 0.0);
  CHECK_THROWS_AS(stochastic_ensemble(p, {100, 0.01, 1.0, 1, 1}), RepresentabilityError);
  CHECK_THROWS_AS(stochastic_ensemble({0.0, 0.5, 0.0, 0.0, 0.4}, {1, 0.01, 1.0, 1, 1}),
                  DomainError);
  CHECK_THROWS_AS(stochastic_ensemble({0.0, 0.5, 0.0, 0.0, 0.4}, {100, 1.0, 1.0, 1, 1}),
                  StepSizeError);
}

TEST_CASE("ensemble determinism") {
  const SystemParams p{0.0, 0.5, 0.0, 0.0, 0.4};
  const auto a = stochastic_ensemble(p, {3000, 0.02, 4.0, 99, 1});
  const auto b = stochastic_ensemble(p, {3000, 0.02, 4.0, 99, 1});
  const auto c = stochastic_ensemble(p, {3000, 0.02, 4.0, 99, 3});
  CHECK(std::memcmp(&a.moments.plus, &b.moments.plus, sizeof(double)) == 0);
  CHECK(std::memcmp(&a.moments.minus, &b.moments.minus, sizeof(double)) == 0);
  CHECK(std::memcmp(&a.se_plus, &b.se_plus, sizeof(double)) == 0);
  CHECK(std::memcmp(&a.moments.plus, &c.moments.plus, sizeof(double)) == 0);
  CHECK(std::memcmp(&a.moments.minus, &c.moments.minus, sizeof(double)) == 0);
  const auto d = stochastic_ensemble(p, {3000, 0.02, 4.0, 100, 1});
  CHECK(d.moments.plus != a.moments.plus);
}

TEST_CASE("ensemble estimate within four standard errors") {
  // kappa * dt = 0.01 keeps the discretisation bias near a quarter of a percent.
  const SystemParams p{0.0, 0.5, 0.0, 0.0, 0.4};
  const auto e = stochastic_ensemble(p, {100000, 0.02, 32.0, 2024, 0});
  CHECK(std::fabs(e.moments.plus - 2.296662954709576554) <= 4.0 * e.se_plus);
  CHECK(std::fabs(e.moments.minus - 0.696662954709576554) <= 4.0 * e.se_minus);
}

TEST_CASE("ensemble is unbiased over independent seeds") {
  const SystemParams p{0.0, 1.0, 0.0, 0.0, 0.4};
  constexpr int kSeeds = 50;
  double sum_plus = 0.0, sum_minus = 0.0, var_plus = 0.0, var_minus = 0.0;
  for (int s = 0; s < kSeeds; ++s) {
    const auto e = stochastic_ensemble(p, {2000, 0.01, 16.0, 7000u + s, 0});
    sum_plus += e.moments.plus;
    sum_minus += e.moments.minus;
    var_plus += e.se_plus * e.se_plus;
    var_minus += e.se_minus * e.se_minus;
  }
  const double pooled_plus = std::sqrt(var_plus) / kSeeds;
  const double pooled_minus = std::sqrt(var_minus) / kSeeds;
  CHECK(std::fabs(sum_plus / kSeeds - 2.296662954709576554) < 2.0 * pooled_plus);
  CHECK(std::fabs(sum_minus / kSeeds - 0.696662954709576554) < 2.0 * pooled_minus);
}
