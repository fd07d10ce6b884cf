#include "cbl/analytic.hpp"

#include <cmath>

#include "cbl/errors.hpp"

namespace cbl {

namespace {

// Reservoir variance 1 + 2N pm 2M of the biased noise itself.
QuadPair reservoir_variances(const SystemParams& p) {
  const auto res = reservoir_moments(p.noise);
  return {1.0 + 2.0 * res.intensity + 2.0 * res.correlation,
          1.0 + 2.0 * res.intensity - 2.0 * res.correlation};
}

// Pieces of the closed-form steady state shared by several expressions.
struct ClosedForm {
  double norm;        // (1 + w^2)(1 + w^2/4)
  double phase;       // (w/2)(1 - 3 eta + w^2) + s (1 - w^2/2)
  double population;  // 1 - eta + (w^2/2)(2 + eta) - s (3w/2)
  double h_plus;
  double h_minus;
};

ClosedForm closed_form(const SystemParams& p) {
  validate(p);
  const double w = p.drive;
  const double w2 = w * w;
  const double s = std::sqrt((1.0 - p.eta) * (1.0 + p.eta));
  ClosedForm cf{};
  cf.norm = (1.0 + w2) * (1.0 + w2 / 4.0);
  cf.phase = (w / 2.0) * (1.0 - 3.0 * p.eta + w2) + s * (1.0 - w2 / 2.0);
  cf.population = 1.0 - p.eta + (w2 / 2.0) * (2.0 + p.eta) - s * 1.5 * w;
  // H_pm cancels to many digits near threshold; extended precision.
  using ld = long double;
  const ld lw = w;
  const ld ls = std::sqrt((1 - ld(p.eta)) * (1 + ld(p.eta)));
  const ld norm = (1 + lw * lw) * (1 + lw * lw / 4);
  const ld common = (1 - lw * lw / 2) * ld(p.eta) + ls * ld(1.5) * lw;
  const ld split = (lw / 2) * (1 + lw * lw);
  const ld r = ld(p.linear_gain) / ld(p.kappa);
  cf.h_plus = static_cast<double>(norm + r * (common - split));
  cf.h_minus = static_cast<double>(norm + r * (common + split));
  if (!(cf.h_plus > 0.0 && cf.h_minus > 0.0)) {
    throw ThresholdError("operating point is at or above threshold");
  }
  return cf;
}

}  // namespace

QuadMoments quad_moments_transient(const SystemParams& p, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("time must be finite and >= 0");
  const auto dd = require_below_threshold(drift_diffusion(p));
  // -expm1(-x) = 1 - exp(-x) without cancellation at small x.
  QuadMoments m;
  m.plus = dd.diff_plus / dd.rate_minus * -std::expm1(-dd.rate_minus * t);
  m.minus = dd.diff_minus / dd.rate_plus * -std::expm1(-dd.rate_plus * t);
  m.time = t;
  return m;
}

QuadMoments quad_moments_steady(const SystemParams& p) {
  const auto cf = closed_form(p);
  const auto res = reservoir_moments(p.noise);
  const double a = p.linear_gain;
  const double k = p.kappa;
  QuadMoments m;
  m.plus = a * cf.phase / (k * cf.h_plus) + a * cf.population / (k * cf.h_plus) +
           2.0 * cf.norm * (res.correlation + res.intensity) / cf.h_plus;
  m.minus = a * cf.phase / (k * cf.h_minus) - a * cf.population / (k * cf.h_minus) +
            2.0 * cf.norm * (res.correlation - res.intensity) / cf.h_minus;
  return m;
}

QuadPair cavity_variances(const QuadMoments& m) { return {1.0 + m.plus, 1.0 - m.minus}; }

QuadPair output_variances(const SystemParams& p, const QuadPair& cav) {
  validate(p);
  const auto bath = reservoir_variances(p);
  const double k = p.kappa;
  return {(1.0 - k) * bath.plus + k * cav.plus, (1.0 - k) * bath.minus + k * cav.minus};
}

QuadPair output_variances_direct(const SystemParams& p) {
  const auto cf = closed_form(p);
  const auto res = reservoir_moments(p.noise);
  const auto bath = reservoir_variances(p);
  const double a = p.linear_gain;
  const double k = p.kappa;
  const double n = res.intensity;
  const double mc = res.correlation;
  QuadPair out;
  out.plus = (k * cf.h_plus + a * cf.population) / cf.h_plus + a * cf.phase / cf.h_plus +
             2.0 * k * cf.norm * (n + mc) / cf.h_plus + (1.0 - k) * bath.plus;
  out.minus = (k * cf.h_minus + a * cf.population) / cf.h_minus - a * cf.phase / cf.h_minus +
              2.0 * k * cf.norm * (n - mc) / cf.h_minus + (1.0 - k) * bath.minus;
  return out;
}

QuadPair output_variances_omega0(const SystemParams& p) {
  validate(p);
  if (p.drive != 0.0) throw DomainError("undriven closed form requires omega = 0");
  const double denom = p.linear_gain * p.eta + p.kappa;
  if (!(denom > 0.0)) throw ThresholdError("A*eta + kappa <= 0: at or above threshold");
  const auto bath = reservoir_variances(p);
  const double k = p.kappa;
  const double s = std::sqrt((1.0 - p.eta) * (1.0 + p.eta));
  return {(k * k * bath.plus + k * p.linear_gain * (1.0 + s)) / denom + (1.0 - k) * bath.plus,
          (k * k * bath.minus + k * p.linear_gain * (1.0 - s)) / denom + (1.0 - k) * bath.minus};
}

QuadPair output_variances_eta0(const SystemParams& p) {
  validate(p);
  if (p.eta != 0.0) throw DomainError("maximal-coherence closed form requires eta = 0");
  const auto cf = closed_form(p);  // at eta = 0 the h_pm coincide with the printed ones
  const auto res = reservoir_moments(p.noise);
  const auto bath = reservoir_variances(p);
  const double a = p.linear_gain;
  const double k = p.kappa;
  const double w = p.drive;
  const double w2 = w * w;
  const double bracket = (w / 2.0) * (w2 / 2.0 - 2.0 - w) + 1.0;
  const double population = 1.0 + w2 - 1.5 * w;
  QuadPair out;
  out.plus = (k * cf.h_plus + a * bracket) / cf.h_plus + a * population / cf.h_plus +
             2.0 * k * cf.norm * (res.intensity + res.correlation) / cf.h_plus +
             (1.0 - k) * bath.plus;
  out.minus = (k * cf.h_minus - a * bracket) / cf.h_minus + a * population / cf.h_minus +
              2.0 * k * cf.norm * (res.intensity - res.correlation) / cf.h_minus +
              (1.0 - k) * bath.minus;
  return out;
}

double mean_photon_cavity(const QuadMoments& m) { return (m.plus - m.minus) / 4.0; }

double mean_photon_output(const SystemParams& p, const QuadMoments& m) {
  require_below_threshold(drift_diffusion(p));
  return p.kappa * mean_photon_cavity(m) + p.noise * (1.0 - p.kappa);
}

double mean_photon_output_omega0(const SystemParams& p) {
  validate(p);
  if (p.drive != 0.0) throw DomainError("undriven closed form requires omega = 0");
  const double denom = p.linear_gain * p.eta + p.kappa;
  if (!(denom > 0.0)) throw ThresholdError("A*eta + kappa <= 0: at or above threshold");
  const double k = p.kappa;
  return (k * p.linear_gain * (1.0 - p.eta) + 2.0 * k * k * p.noise) / (2.0 * denom) +
         p.noise * (1.0 - k);
}

double squeezing_percent(double variance) { return (1.0 - variance) * 100.0; }

PointEvaluation evaluate_point(const SystemParams& p) {
  PointEvaluation ev;
  ev.params = p;
  ev.rates = drift_diffusion(p);
  ev.near_threshold = ev.rates.near_threshold();
  if (!ev.rates.below_threshold) return ev;

  QuadMoments m;
  try {
    m = quad_moments_steady(p);
  } catch (const ThresholdError&) {
    // Rounding can put the closed form on the other side of a threshold the
    // rates only just clear.
    ev.rates.below_threshold = false;
    ev.near_threshold = false;
    return ev;
  }
  const auto cav = cavity_variances(m);
  const auto out = output_variances(p, cav);
  SteadyObservables o;
  o.var_plus_cav = cav.plus;
  o.var_minus_cav = cav.minus;
  o.var_plus_out = out.plus;
  o.var_minus_out = out.minus;
  o.n_cav = mean_photon_cavity(m);
  o.n_out = mean_photon_output(p, m);
  o.squeeze_pct_cav = squeezing_percent(cav.minus);
  o.squeeze_pct_out = squeezing_percent(out.minus);
  ev.observables = o;
  return ev;
}

}  // namespace cbl
