#include "cbl/model.hpp"

#include <cmath>
#include <string>

#include "cbl/errors.hpp"

namespace cbl {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

}  // namespace

SystemParams SystemParams::make(double linear_gain, double kappa, double eta, double drive,
                                double noise) {
  SystemParams p{linear_gain, kappa, eta, drive, noise};
  validate(p);
  return p;
}

void validate(const SystemParams& p) {
  require(std::isfinite(p.linear_gain) && p.linear_gain >= 0.0, "linear gain A must be >= 0");
  require(std::isfinite(p.kappa) && p.kappa > 0.0 && p.kappa <= 1.0, "kappa must lie in (0, 1]");
  require(std::isfinite(p.eta) && p.eta >= -1.0 && p.eta <= 1.0, "eta must lie in [-1, 1]");
  require(std::isfinite(p.drive) && p.drive >= 0.0, "drive amplitude omega must be >= 0");
  require(std::isfinite(p.noise) && p.noise >= 0.0, "reservoir intensity N must be >= 0");
}

bool DriftDiffusion::near_threshold() const {
  return below_threshold && std::fmin(rate_plus, rate_minus) < kNearThresholdRate;
}

AtomicPreparation atomic_preparation(double eta) {
  require(std::isfinite(eta) && eta >= -1.0 && eta <= 1.0, "eta must lie in [-1, 1]");
  AtomicPreparation prep;
  prep.upper = (1.0 - eta) / 2.0;
  prep.lower = (1.0 + eta) / 2.0;
  // (1 - eta)(1 + eta) is exactly zero at |eta| = 1, unlike 1 - eta^2 near it.
  prep.coherence = std::sqrt((1.0 - eta) * (1.0 + eta)) / 2.0;
  return prep;
}

ReservoirMoments reservoir_moments(double noise) {
  require(std::isfinite(noise) && noise >= 0.0, "reservoir intensity N must be >= 0");
  return {noise, std::sqrt(noise * (noise + 1.0))};
}

namespace {

// The rates cancel to many digits near threshold, so the drift is assembled
// in extended precision and rounded once.
template <class T>
struct Coefficients {
  T norm, gain, loss, corr_e, corr_f;
};

template <class T>
Coefficients<T> coefficients(T upper, T lower, T coherence, T w) {
  const T w2 = w * w;
  const T quarter = 1 + w2 / 4;  // 1 + w^2/4
  const T half = 1 - w2 / 2;     // 1 - w^2/2
  Coefficients<T> c;
  c.norm = (1 + w2) * quarter;
  c.gain = upper * quarter - coherence * T(1.5) * w + lower * T(0.75) * w2;
  c.loss = upper * T(0.75) * w2 + coherence * T(1.5) * w + lower * quarter;
  c.corr_e = -upper * (w / 2) * half - coherence * half + lower * w * quarter;
  c.corr_f = -upper * w * quarter - coherence * half + lower * (w / 2) * half;
  return c;
}

}  // namespace

GainCoefficients gain_coefficients(const AtomicPreparation& prep, double drive) {
  require(std::isfinite(drive) && drive >= 0.0, "drive amplitude omega must be >= 0");
  const auto c = coefficients<double>(prep.upper, prep.lower, prep.coherence, drive);
  return {c.norm, c.gain, c.loss, c.corr_e, c.corr_f};
}

DriftDiffusion drift_diffusion(const SystemParams& p) {
  using ld = long double;
  validate(p);
  const ld eta = p.eta;
  const ld coherence = std::sqrt((1 - eta) * (1 + eta)) / 2;
  const auto g = coefficients<ld>((1 - eta) / 2, (1 + eta) / 2, coherence, ld(p.drive));
  const ld a = ld(p.linear_gain) / g.norm;
  const ld k = p.kappa;
  const ld n = p.noise;
  const ld m = std::sqrt(n * (n + 1));

  const ld decay = a * (g.loss - g.gain) + k;
  const ld coupling = a * (g.corr_e - g.corr_f) / 2;
  const ld normal = a * g.gain + k * n;
  const ld anomalous = k * m - a * g.corr_f;

  DriftDiffusion dd;
  dd.decay = static_cast<double>(decay);
  dd.coupling = static_cast<double>(coupling);
  dd.rate_plus = static_cast<double>(decay + 2 * coupling);
  dd.rate_minus = static_cast<double>(decay - 2 * coupling);
  dd.noise_normal = static_cast<double>(normal);
  dd.noise_anomalous = static_cast<double>(anomalous);
  // diff_pm = 2 <f f> pm 2 <f f*>
  dd.diff_plus = static_cast<double>(2 * (anomalous + normal));
  dd.diff_minus = static_cast<double>(2 * (anomalous - normal));
  dd.below_threshold = dd.rate_plus > 0.0 && dd.rate_minus > 0.0;
  return dd;
}

bool check_threshold(const SystemParams& p) { return drift_diffusion(p).below_threshold; }

DriftDiffusion require_below_threshold(const DriftDiffusion& dd) {
  if (!dd.below_threshold) {
    throw ThresholdError("operating point is at or above threshold (rate_plus = " +
                         std::to_string(dd.rate_plus) +
                         ", rate_minus = " + std::to_string(dd.rate_minus) + ")");
  }
  return dd;
}

}  // namespace cbl
