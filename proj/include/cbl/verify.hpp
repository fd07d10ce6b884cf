#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cbl/model.hpp"

namespace cbl::verify {

enum class Scope { langevin, master, all };
enum class Profile { standard, strict };

Scope parse_scope(std::string_view s);        // throws SpecError
Profile parse_profile(std::string_view s);    // "default" | "strict"

struct Settings {
  double langevin_tolerance;   // absolute, on <alpha_pm^2>
  double master_tolerance;     // absolute, on <alpha_pm^2>
  double linear_tolerance;     // relative, closed form vs diff/rate
  std::size_t langevin_points;
  std::size_t master_points;
  double ode_step_fraction;    // dt = fraction / fastest rate
};

Settings settings(Profile profile);

struct Check {
  std::string name;
  double computed = 0.0;  // worst deviation seen
  double tolerance = 0.0;
  std::size_t points = 0;
  bool passed = false;
  std::string detail;
};

struct Report {
  std::vector<Check> checks;
  std::size_t excluded_above_threshold = 0;
  [[nodiscard]] bool passed() const;
  [[nodiscard]] std::string text() const;
};

/// Random operating points; above-threshold draws are discarded and counted.
/// Accepted points also satisfy fastest/slowest rate <= max_stiffness.
struct PointSample {
  std::vector<SystemParams> points;
  std::size_t excluded_above_threshold = 0;
};
PointSample random_points(std::size_t n, std::uint64_t seed, double max_stiffness);

/// Deterministic below-threshold points with few cavity photons and modest
/// squeezing, for the Fock-space oracle.
PointSample small_photon_points(std::size_t n, std::uint64_t seed);

struct LangevinDeviation {
  double steady = 0.0;     // |ODE final - closed form|
  double transient = 0.0;  // max over states |ODE - exponential saturation|
  double linear = 0.0;     // relative |diff/rate - closed form|
};
LangevinDeviation langevin_point(const SystemParams& p, double step_fraction);

struct MasterDeviation {
  double steady = 0.0;
  double trace_drift = 0.0;
  double hermiticity = 0.0;
  std::size_t dim = 0;
};
MasterDeviation master_point(const SystemParams& p);

Report run(Scope scope, Profile profile);

/// Plain-text comparison of the as-printed formulas against the reconciled
/// ones used by the library.
std::string consistency_report();

}  // namespace cbl::verify
