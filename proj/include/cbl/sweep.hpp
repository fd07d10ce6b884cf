#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cbl/analytic.hpp"

namespace cbl::sweep {

enum class Observable {
  var_minus_cav,
  var_minus_out,
  var_plus_cav,
  var_plus_out,
  n_cav,
  n_out,
  squeeze_pct_cav,
  squeeze_pct_out,
  lambda_minus,
  below_threshold,
};

std::string_view to_string(Observable o);
Observable parse_observable(std::string_view name);  // throws SpecError
const std::vector<Observable>& all_observables();

/// Parameter names as used by the CLI and spec files: A, kappa, eta, omega, N.
inline constexpr std::string_view kParamNames[] = {"A", "kappa", "eta", "omega", "N"};
bool is_param_name(std::string_view name);

/// Reads/writes the named field of SystemParams (no validation).
double get_param(const SystemParams& p, std::string_view name);
void set_param(SystemParams& p, std::string_view name, double value);

struct Grid {
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;

  /// Points start + i*step for i = 0..count()-1; stop is included when it lies
  /// on the grid up to 1e-9 relative slack.
  [[nodiscard]] std::size_t count() const;
  [[nodiscard]] double at(std::size_t i) const { return start + static_cast<double>(i) * step; }
};

struct SweepSpec {
  std::map<std::string, double, std::less<>> fixed;
  std::string axis;
  Grid grid;
  std::vector<Observable> outputs = all_observables();

  /// Throws SpecError: axis in fixed, step <= 0, start > stop, uncovered or
  /// unknown parameter names.
  void validate() const;

  /// {"fixed": {...}, "axis": "eta", "grid": {"start":..,"stop":..,"step":..},
  ///  "outputs": [...]}; every key optional so flags can fill the rest.
  static SweepSpec from_json(std::string_view text);
};

/// Renders a number with 12 significant digits, '.' separator, no locale.
std::string format_number(double v);

/// Header row plus one row per grid point. Columns: A,kappa,eta,omega,N then
/// the requested outputs. Above-threshold rows have empty observable cells.
std::string run_sweep(const SweepSpec& spec);

struct FigurePreset {
  std::string name;
  std::string description;
  std::vector<SweepSpec> curves;  // one per curve, emitted in order
};

const std::vector<std::string>& figure_names();
FigurePreset figure_preset(std::string_view name);  // throws SpecError
std::string run_figure(const FigurePreset& preset);

/// JSON object with the parameters, rates, threshold flags and observables
/// (null above threshold).
std::string eval_json(const SystemParams& p);

}  // namespace cbl::sweep
