#pragma once

#include <optional>

#include "cbl/model.hpp"

namespace cbl {

/// Normally ordered quadrature moments <alpha_+^2>, <alpha_-^2>.
/// `time` is empty for the steady state.
struct QuadMoments {
  double plus = 0.0;
  double minus = 0.0;
  std::optional<double> time;
};

/// A (plus, minus) pair of quadrature variances, vacuum = 1.
struct QuadPair {
  double plus = 1.0;
  double minus = 1.0;
};

struct SteadyObservables {
  double var_plus_cav = 1.0;
  double var_minus_cav = 1.0;
  double var_plus_out = 1.0;
  double var_minus_out = 1.0;
  double n_cav = 0.0;
  double n_out = 0.0;
  double squeeze_pct_cav = 0.0;
  double squeeze_pct_out = 0.0;
};

/// Everything known about one operating point. `observables` is empty above
/// threshold.
struct PointEvaluation {
  SystemParams params;
  DriftDiffusion rates;
  std::optional<SteadyObservables> observables;
  bool near_threshold = false;
};

/// Moments grown from the vacuum: (diff/rate)(1 - exp(-rate t)).
QuadMoments quad_moments_transient(const SystemParams& p, double t);

/// Closed-form steady-state moments written in terms of eta and the drive.
QuadMoments quad_moments_steady(const SystemParams& p);

/// Cavity variances 1 pm <alpha_pm^2>.
QuadPair cavity_variances(const QuadMoments& m);

/// Output variances by input-output composition of the cavity variances with
/// the reflected reservoir noise.
QuadPair output_variances(const SystemParams& p, const QuadPair& cav);

/// Output variances from the single closed-form expression, without going
/// through the cavity variances.
QuadPair output_variances_direct(const SystemParams& p);

/// Closed form for an undriven laser (drive == 0).
QuadPair output_variances_omega0(const SystemParams& p);

/// Closed form for maximal injected coherence (eta == 0), as printed. It
/// agrees with the general path only at zero drive or zero gain; see the
/// consistency report.
QuadPair output_variances_eta0(const SystemParams& p);

double mean_photon_cavity(const QuadMoments& m);
double mean_photon_output(const SystemParams& p, const QuadMoments& m);

/// Output photon number for an undriven laser, from its own closed form.
double mean_photon_output_omega0(const SystemParams& p);

/// (1 - variance) * 100; negative means excess noise.
double squeezing_percent(double variance);

/// Full evaluation; never throws for a valid point above threshold.
PointEvaluation evaluate_point(const SystemParams& p);

}  // namespace cbl
