#pragma once

// Operating point of the degenerate coherent beat laser and the rates derived
// from it. All rates are in units of the atomic decay rate (gamma = 1).

namespace cbl {

struct SystemParams {
  double linear_gain = 0.0;  // A >= 0
  double kappa = 1.0;        // cavity damping, (0, 1]
  double eta = 0.0;          // atomic superposition parameter, [-1, 1]
  double drive = 0.0;        // pump amplitude over gamma, >= 0
  double noise = 0.0;        // reservoir photon number, >= 0

  /// Validating constructor; throws DomainError.
  static SystemParams make(double linear_gain, double kappa, double eta, double drive,
                           double noise);
};

void validate(const SystemParams& p);

/// Initial atomic density matrix elements for a pure superposition of the
/// upper and lower levels.
struct AtomicPreparation {
  double upper = 0.0;      // rho_aa
  double lower = 0.0;      // rho_cc
  double coherence = 0.0;  // rho_ac
};

/// Broadband biased reservoir: intensity and phase-sensitive correlation.
struct ReservoirMoments {
  double intensity = 0.0;
  double correlation = 0.0;  // sqrt(N (N + 1))
};

/// Gain-medium coefficients after adiabatic elimination of the atoms.
struct GainCoefficients {
  double norm = 1.0;    // (1 + w^2)(1 + w^2/4)
  double gain = 0.0;    // emission into the mode
  double loss = 0.0;    // absorption from the mode
  double corr_e = 0.0;  // phase-sensitive correlation terms
  double corr_f = 0.0;
};

/// Linear c-number dynamics of the cavity mode:
///   d alpha/dt = -(decay/2) alpha + coupling alpha* + f,
/// with quadratures alpha_pm = alpha* pm alpha relaxing as
///   d<alpha_+^2>/dt = -rate_minus <alpha_+^2> + diff_plus
///   d<alpha_-^2>/dt = -rate_plus  <alpha_-^2> + diff_minus.
struct DriftDiffusion {
  double decay = 0.0;       // mu
  double coupling = 0.0;    // beta
  double rate_plus = 0.0;   // mu + 2 beta
  double rate_minus = 0.0;  // mu - 2 beta
  double diff_plus = 0.0;
  double diff_minus = 0.0;
  double noise_normal = 0.0;  // <f f*> strength
  double noise_anomalous = 0.0;  // <f f> strength
  bool below_threshold = false;

  /// Below threshold but with the slow rate under 1e-9: variances ~ 1/rate.
  [[nodiscard]] bool near_threshold() const;
};

inline constexpr double kNearThresholdRate = 1e-9;

AtomicPreparation atomic_preparation(double eta);
ReservoirMoments reservoir_moments(double noise);
GainCoefficients gain_coefficients(const AtomicPreparation& prep, double drive);
DriftDiffusion drift_diffusion(const SystemParams& p);
bool check_threshold(const SystemParams& p);

/// Throws ThresholdError unless the point is below threshold.
DriftDiffusion require_below_threshold(const DriftDiffusion& dd);

}  // namespace cbl
