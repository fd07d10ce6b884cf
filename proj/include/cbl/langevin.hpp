#pragma once

#include <cstdint>
#include <vector>

#include "cbl/model.hpp"

namespace cbl::langevin {

struct MomentState {
  double plus = 0.0;   // <alpha_+^2>
  double minus = 0.0;  // <alpha_-^2>
  double t = 0.0;
};

struct EnsembleConfig {
  std::int64_t n_trajectories = 10000;
  double dt = 1e-3;
  double t_end = 1.0;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct EnsembleEstimate {
  MomentState moments;
  double se_plus = 0.0;
  double se_minus = 0.0;
  std::int64_t n_trajectories = 0;
};

/// Largest allowed rate * dt for the deterministic and stochastic integrators.
inline constexpr double kStabilityMargin = 0.1;

/// One classical RK4 step of d<alpha_pm^2>/dt = -rate_mp <alpha_pm^2> + diff_pm.
MomentState moment_ode_step(const MomentState& s, const DriftDiffusion& rates, double dt);

/// Trajectory from the vacuum to t_end. The last step is shortened to land on
/// t_end exactly. Throws ThresholdError, StepSizeError.
std::vector<MomentState> integrate_moments(const SystemParams& p, double t_end, double dt);

/// Fixed point diff_pm / rate_mp, no integration.
MomentState steady_moments_linear(const SystemParams& p);

/// Euler-Maruyama ensemble of the two decoupled real quadrature processes
///   dx_+ = -(rate_minus/2) x_+ dt + sqrt(diff_plus) dW,
///   dx_- = -(rate_plus/2)  x_- dt + sqrt(diff_minus) dW',
/// started at zero. Throws RepresentabilityError if a diffusion is negative.
/// Output depends only on (p, cfg) and not on the thread count.
EnsembleEstimate stochastic_ensemble(const SystemParams& p, const EnsembleConfig& cfg);

}  // namespace cbl::langevin
