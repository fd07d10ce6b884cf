#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "cbl/model.hpp"

namespace cbl::master {

using cplx = std::complex<double>;

/// Density matrix in the photon-number basis |0>..|dim-1>, row-major.
class FockState {
 public:
  explicit FockState(std::size_t dim);

  static FockState vacuum(std::size_t dim);
  static FockState number(std::size_t dim, std::size_t n);

  [[nodiscard]] std::size_t dim() const { return dim_; }
  [[nodiscard]] cplx& operator()(std::size_t m, std::size_t n) { return rho_[m * dim_ + n]; }
  [[nodiscard]] const cplx& operator()(std::size_t m, std::size_t n) const {
    return rho_[m * dim_ + n];
  }
  [[nodiscard]] std::span<cplx> data() { return rho_; }
  [[nodiscard]] std::span<const cplx> data() const { return rho_; }

  [[nodiscard]] cplx trace() const;
  /// max |rho_mn - conj(rho_nm)|
  [[nodiscard]] double hermiticity_error() const;
  [[nodiscard]] double min_diagonal() const;
  /// Population of the two highest retained levels.
  [[nodiscard]] double top_population() const;

 private:
  std::size_t dim_;
  std::vector<cplx> rho_;
};

struct GeneratorCoefficients {
  double g_up = 0.0;      // rate of the a^dagger dissipator
  double g_down = 0.0;    // rate of the a dissipator
  double g_corr = 0.0;    // two-photon (squeezed-bath) dissipator strength
  double coupling = 0.0;  // two-photon Hamiltonian strength
};

/// Moment-matched coefficients: with these the generator's equations for
/// <a>, <a^2> and <a^dagger a> coincide with the c-number Langevin dynamics.
GeneratorCoefficients generator_coefficients(const SystemParams& p);

/// Linear map rho -> d rho/dt on a truncated photon basis:
///   g_up D[a+] + g_down D[a] + (coupling/2)[a+^2 - a^2, .]
///   + (g_corr/2)(2 a+ . a+ - a+^2 . - . a+^2 + h.c.).
class Generator {
 public:
  Generator(const GeneratorCoefficients& c, std::size_t dim);

  [[nodiscard]] std::size_t dim() const { return dim_; }
  [[nodiscard]] const GeneratorCoefficients& coefficients() const { return c_; }

  void apply(const FockState& rho, FockState& out) const;
  void apply(std::span<const cplx> rho, std::span<cplx> out) const;
  /// Real-valued path on row-major dim x dim matrices. With even_only, only
  /// elements with m + n even are computed; the rest of `out` is untouched.
  void apply(std::span<const double> rho, std::span<double> out, bool even_only = false) const;
  [[nodiscard]] FockState apply(const FockState& rho) const;

  /// Gershgorin bound on the spectral radius of the map.
  [[nodiscard]] double fastest_rate() const;

 private:
  GeneratorCoefficients c_;
  std::size_t dim_;
  std::vector<double> sqrt_;  // sqrt(k), k = 0..dim+1
};

/// Throws DimensionError for dim < 2.
Generator build_generator(const SystemParams& p, std::size_t dim);

inline constexpr double kStepMargin = 0.1;
inline constexpr double kLeakTolerance = 1e-6;

/// RK4 propagation; the final step is shortened to land on t_end. Throws
/// StepSizeError if dt * fastest_rate >= kStepMargin and TruncationError if the
/// top two levels end up holding more than kLeakTolerance.
FockState evolve(const FockState& state, const Generator& gen, double t_end, double dt);

struct Moments {
  cplx mean;     // <a>
  cplx a_sq;     // <a^2>
  double n = 0;  // <a^dagger a>

  /// Normally ordered <alpha_pm^2> = <a+^2> + <a^2> pm 2<a+ a>.
  [[nodiscard]] double quad_plus() const { return 2.0 * a_sq.real() + 2.0 * n; }
  [[nodiscard]] double quad_minus() const { return 2.0 * a_sq.real() - 2.0 * n; }
};

Moments moments_from_state(const FockState& state);

struct SteadyOptions {
  double tolerance = 1e-10;     // max moment change over one slow relaxation time
  double max_relaxations = 400;  // give up after this many slow relaxation times
  double step_fraction = 0.9;    // dt = step_fraction * kStepMargin / fastest_rate
};

struct SteadyResult {
  FockState state;
  Moments moments;
  double time = 0.0;
  double leak = 0.0;  // top_population() of the final state
  double max_trace_drift = 0.0;
  double max_hermiticity_error = 0.0;
};

/// Long-time propagation from the vacuum with a fixed-point detector. Does not
/// throw on truncation leak; callers inspect `leak`.
SteadyResult steady_state(const SystemParams& p, std::size_t dim, const SteadyOptions& opt = {});

struct ScanRow {
  std::size_t dim = 0;
  double quad_plus = 0.0;
  double quad_minus = 0.0;
  double n = 0.0;
  double leak = 0.0;
  double trace_drift = 0.0;
  double hermiticity = 0.0;
};

struct ScanResult {
  std::vector<ScanRow> rows;
  std::optional<std::size_t> converged_dim;
};

inline constexpr double kScanTolerance = 1e-8;

/// Steady moments per truncation. `converged_dim` is the smallest dim whose
/// results differ from the next dim's by less than kScanTolerance. Throws
/// ConvergenceError if the largest dim still leaks more than kLeakTolerance.
ScanResult truncation_scan(const SystemParams& p, std::span<const std::size_t> dims,
                           const SteadyOptions& opt = {});

/// Grows the truncation first_dim, first_dim + dim_step, ... until two
/// successive steady states agree within kScanTolerance; the last row is the
/// most accurate. Throws ConvergenceError past max_dim.
ScanResult converge_truncation(const SystemParams& p, std::size_t first_dim, std::size_t dim_step,
                               std::size_t max_dim, const SteadyOptions& opt = {});

}  // namespace cbl::master
