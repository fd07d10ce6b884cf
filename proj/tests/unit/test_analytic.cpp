#include <cmath>

#include "cbl/analytic.hpp"
#include "cbl/errors.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cbl;
using doctest::Approx;

namespace {
constexpr double kM04 = 0.748331477354788277;
const SystemParams kHeadline{10.0, 0.2, 0.25, 0.0, 0.4};
}  // namespace

TEST_CASE("transient moments") {
  const SystemParams p{2.0, 0.5, 0.3, 0.7, 0.25};
  auto m = quad_moments_transient(p, 0.0);
  CHECK(m.plus == 0.0);
  CHECK(m.minus == 0.0);
  REQUIRE(m.time);
  CHECK(*m.time == 0.0);

  const auto dd = drift_diffusion(p);
  const auto ss = quad_moments_steady(p);
  const double f = 1.0 - std::exp(-3.0);
  CHECK(quad_moments_transient(p, 3.0 / dd.rate_minus).plus == Approx(ss.plus * f).epsilon(1e-13));
  CHECK(quad_moments_transient(p, 3.0 / dd.rate_plus).minus == Approx(ss.minus * f).epsilon(1e-13));

  m = quad_moments_transient({0.0, 0.2, 0.0, 0.0, 0.4}, 1e4);
  CHECK(m.plus == Approx(2 * (kM04 + 0.4)).epsilon(1e-14));
  CHECK(m.minus == Approx(2 * (kM04 - 0.4)).epsilon(1e-14));

  CHECK_THROWS_AS(quad_moments_transient(p, -1.0), DomainError);
  CHECK_THROWS_AS(quad_moments_transient({10.0, 0.2, -0.1, 0.0, 0.0}, 1.0), ThresholdError);
}

TEST_CASE("steady moments, frozen values") {
  auto m = quad_moments_steady({0.0, 0.3, 0.1, 0.5, 0.0});
  CHECK(m.plus == 0.0);
  CHECK(m.minus == 0.0);
  CHECK_FALSE(m.time);

  m = quad_moments_steady({0.0, 0.2, 0.0, 0.0, 0.4});
  CHECK(m.plus == Approx(2.296662954709576554).epsilon(1e-14));
  CHECK(m.minus == Approx(0.696662954709576554).epsilon(1e-14));

  m = quad_moments_steady({2.0, 0.5, 0.3, 0.7, 0.25});
  CHECK(m.plus == Approx(1.658243731807056181).epsilon(1e-13));
  CHECK(m.minus == Approx(0.425912659228693046).epsilon(1e-13));

  m = quad_moments_steady({10.0, 0.2, 0.0, 0.14, 0.4});
  CHECK(m.plus == Approx(12.05527897278970132).epsilon(1e-13));
  CHECK(m.minus == Approx(0.882013197823019298).epsilon(1e-13));

  // Headline point: the minus moment reproduces the undriven closed form.
  m = quad_moments_steady(kHeadline);
  const auto out = output_variances(kHeadline, cavity_variances(m));
  CHECK(out.minus == Approx(output_variances_omega0(kHeadline).minus).epsilon(1e-13));

  CHECK_THROWS_AS(quad_moments_steady({10.0, 0.2, -0.1, 0.0, 0.0}), ThresholdError);
}

TEST_CASE("cavity variances") {
  auto v = cavity_variances({0.0, 0.0, {}});
  CHECK(v.plus == 1.0);
  CHECK(v.minus == 1.0);
  v = cavity_variances({2.296663, 0.696663, {}});
  CHECK(v.plus == Approx(3.296663));
  CHECK(v.minus == Approx(0.303337));
  v = cavity_variances({3.0, 0.5, {}});
  CHECK(v.minus == 0.5);
  CHECK(squeezing_percent(v.minus) == Approx(50.0));
}

TEST_CASE("output variances, frozen values") {
  auto v = output_variances_direct(kHeadline);
  CHECK(v.plus == Approx(4.144129693875843282).epsilon(1e-13));
  CHECK(v.minus == Approx(0.270685120938971533).epsilon(1e-13));
  CHECK(std::fabs(v.minus - 0.29) <= 0.03);

  v = output_variances_direct({10.0, 0.2, 0.22, 0.0, 0.1});
  CHECK(v.minus == Approx(0.458701391024804775).epsilon(1e-13));
  CHECK(std::fabs(v.minus - 0.47) <= 0.03);

  v = output_variances_omega0(kHeadline);
  CHECK(v.plus == Approx(4.144129693875843282).epsilon(1e-13));
  CHECK(v.minus == Approx(0.270685120938971533).epsilon(1e-13));
  const double bath_minus = 1.0 + 0.8 - 2 * kM04;
  CHECK(v.minus ==
        Approx((0.04 * bath_minus + 2.0 * (1.0 - std::sqrt(0.9375))) / 2.7 + 0.8 * bath_minus)
            .epsilon(1e-13));
}

TEST_CASE("empty cavity: inside equals outside equals reservoir") {
  for (double n : {0.0, 0.1, 0.4, 2.0}) {
    const double m = std::sqrt(n * (n + 1));
    for (double eta : {-0.6, 0.0, 0.9}) {
      for (double w : {0.0, 0.3, 2.0}) {
        const SystemParams p{0.0, 0.35, eta, w, n};
        const auto cav = cavity_variances(quad_moments_steady(p));
        const auto out = output_variances_direct(p);
        CHECK(cav.plus == Approx(1 + 2 * n + 2 * m).epsilon(1e-12));
        CHECK(cav.minus == Approx(1 + 2 * n - 2 * m).epsilon(1e-12));
        CHECK(out.plus == Approx(cav.plus).epsilon(1e-12));
        CHECK(out.minus == Approx(cav.minus).epsilon(1e-12));
        CHECK(output_variances_eta0({0.0, 0.35, 0.0, w, n}).minus ==
              Approx(1 + 2 * n - 2 * m).epsilon(1e-12));
        CHECK(mean_photon_output(p, quad_moments_steady(p)) == Approx(n).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("no squeezing without coherence, drive or biased noise") {
  for (double a : {0.05, 0.1, 0.15}) {  // eta = -1 needs A < kappa
    const SystemParams p{a, 0.2, -1.0, 0.0, 0.0};
    const auto cav = cavity_variances(quad_moments_steady(p));
    CHECK(cav.minus >= 1.0);
    CHECK(output_variances_direct(p).minus >= 1.0);
  }
  for (double a : {0.5, 10.0, 1000.0}) {
    const SystemParams p{a, 0.2, 1.0, 0.0, 0.0};
    const auto cav = cavity_variances(quad_moments_steady(p));
    CHECK(cav.minus == Approx(1.0).epsilon(1e-14));
    CHECK(output_variances_direct(p).minus == Approx(1.0).epsilon(1e-14));
    CHECK(output_variances_omega0(p).minus == Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("maximal-coherence closed form") {
  // Agrees with the general path where it can: zero drive and zero gain.
  for (double n : {0.0, 0.1, 0.4}) {
    const SystemParams p{10.0, 0.2, 0.0, 0.0, n};
    const auto a = output_variances_eta0(p);
    const auto b = output_variances_direct(p);
    CHECK(a.plus == Approx(b.plus).epsilon(1e-12));
    CHECK(a.minus == Approx(b.minus).epsilon(1e-12));
  }
  CHECK_THROWS_AS(output_variances_eta0({10.0, 0.2, 0.1, 0.0, 0.0}), DomainError);

  // The general path has its optimum near omega = 0.14 with about 71% squeezing.
  double best = 10.0, arg = -1.0;
  for (int i = 0; i <= 400; ++i) {
    const double w = 0.005 * i;
    const SystemParams p{10.0, 0.2, 0.0, w, 0.4};
    if (!check_threshold(p)) continue;
    const double v = output_variances_direct(p).minus;
    if (v < best) best = v, arg = w;
  }
  CHECK(std::fabs(best - 0.29) <= 0.04);
  CHECK(arg >= 0.05);
  CHECK(arg <= 0.30);
}

TEST_CASE("undriven closed form domain") {
  CHECK_THROWS_AS(output_variances_omega0({10.0, 0.2, 0.25, 0.1, 0.4}), DomainError);
  CHECK_THROWS_AS(output_variances_omega0({10.0, 0.2, -0.1, 0.0, 0.4}), ThresholdError);
}

TEST_CASE("mean photon numbers") {
  CHECK(mean_photon_cavity({0.0, 0.0, {}}) == 0.0);
  CHECK(mean_photon_cavity({0.7, 0.7, {}}) == 0.0);
  const auto m = quad_moments_steady({0.0, 0.2, 0.0, 0.0, 0.4});
  CHECK(mean_photon_cavity(m) == Approx(0.4).epsilon(1e-14));

  const SystemParams zero{10.0, 0.2, 1.0, 0.0, 0.0};
  CHECK(std::fabs(mean_photon_output(zero, quad_moments_steady(zero))) <= 1e-14);
  CHECK(std::fabs(mean_photon_output_omega0(zero)) <= 1e-14);

  const SystemParams p{10.0, 0.2, 1.0, 0.0, 0.4};
  CHECK(mean_photon_output_omega0(p) == Approx(0.321568627450980392).epsilon(1e-14));
  CHECK(mean_photon_output(p, quad_moments_steady(p)) ==
        Approx(0.321568627450980392).epsilon(1e-14));
}

TEST_CASE("squeezing percent") {
  CHECK(squeezing_percent(1.0) == 0.0);
  CHECK(squeezing_percent(0.29) == Approx(71.0));
  CHECK(squeezing_percent(0.5) == Approx(50.0));
  CHECK(squeezing_percent(1.2) == Approx(-20.0));
}

TEST_CASE("path agreement on random below-threshold points") {
  test::ParamSampler s(404);
  for (int i = 0; i < 20000; ++i) {
    auto p = s.draw_below_threshold();
    const auto dd = drift_diffusion(p);
    const auto m = quad_moments_steady(p);
    CHECK(test::close_rel(m.plus, dd.diff_plus / dd.rate_minus, 1e-12));
    CHECK(test::close_rel(m.minus, dd.diff_minus / dd.rate_plus, 1e-12));

    const auto composed = output_variances(p, cavity_variances(m));
    const auto direct = output_variances_direct(p);
    CHECK(test::close_rel(composed.plus, direct.plus, 1e-12));
    CHECK(test::close_rel(composed.minus, direct.minus, 1e-12));

    p.drive = 0.0;
    if (!check_threshold(p)) continue;
    const auto general = output_variances_direct(p);
    const auto undriven = output_variances_omega0(p);
    CHECK(test::close_rel(general.plus, undriven.plus, 1e-12));
    CHECK(test::close_rel(general.minus, undriven.minus, 1e-12));
    const double n = mean_photon_output(p, quad_moments_steady(p));
    CHECK(test::close_rel(n, mean_photon_output_omega0(p), 1e-12));
  }
}

TEST_CASE("uncertainty bound and positivity on random points") {
  test::ParamSampler s(505);
  int violations = 0;
  for (int i = 0; i < 20000; ++i) {
    const auto p = s.draw_below_threshold();
    const auto ev = evaluate_point(p);
    REQUIRE(ev.observables);
    const auto& o = *ev.observables;
    const double tol = 1e-9;
    if (o.var_plus_cav * o.var_minus_cav < 1.0 - tol) ++violations;
    if (o.var_plus_out * o.var_minus_out < 1.0 - tol) ++violations;
    if (o.n_cav < -tol || o.n_out < -tol) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("point evaluation") {
  auto ev = evaluate_point({10.0, 0.2, -0.1, 0.0, 0.0});
  CHECK_FALSE(ev.rates.below_threshold);
  CHECK_FALSE(ev.observables);

  ev = evaluate_point({0.0, 0.2, 0.0, 0.0, 0.0});
  REQUIRE(ev.observables);
  CHECK(ev.observables->var_minus_out == 1.0);
  CHECK(ev.observables->var_plus_cav == 1.0);
  CHECK(ev.observables->n_cav == 0.0);
  CHECK(ev.observables->n_out == 0.0);

  ev = evaluate_point(kHeadline);
  REQUIRE(ev.observables);
  CHECK(std::fabs(ev.observables->squeeze_pct_out - 71.0) <= 3.0);
  CHECK_FALSE(ev.near_threshold);

  CHECK_THROWS_AS(evaluate_point({10.0, 0.0, 0.0, 0.0, 0.0}), DomainError);
}
