#include "cbl/sweep.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <json.hpp>
#include <system_error>

#include "cbl/errors.hpp"

namespace cbl::sweep {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<Observable, std::string_view>, 10> kObservableNames{{
    {Observable::var_minus_cav, "var_minus_cav"},
    {Observable::var_minus_out, "var_minus_out"},
    {Observable::var_plus_cav, "var_plus_cav"},
    {Observable::var_plus_out, "var_plus_out"},
    {Observable::n_cav, "n_cav"},
    {Observable::n_out, "n_out"},
    {Observable::squeeze_pct_cav, "squeeze_pct_cav"},
    {Observable::squeeze_pct_out, "squeeze_pct_out"},
    {Observable::lambda_minus, "lambda_minus"},
    {Observable::below_threshold, "below_threshold"},
}};

std::string cell(const PointEvaluation& ev, Observable o) {
  if (o == Observable::below_threshold) return ev.rates.below_threshold ? "true" : "false";
  if (o == Observable::lambda_minus) return format_number(ev.rates.rate_minus);
  if (!ev.observables) return {};
  const auto& x = *ev.observables;
  switch (o) {
    case Observable::var_minus_cav: return format_number(x.var_minus_cav);
    case Observable::var_minus_out: return format_number(x.var_minus_out);
    case Observable::var_plus_cav: return format_number(x.var_plus_cav);
    case Observable::var_plus_out: return format_number(x.var_plus_out);
    case Observable::n_cav: return format_number(x.n_cav);
    case Observable::n_out: return format_number(x.n_out);
    case Observable::squeeze_pct_cav: return format_number(x.squeeze_pct_cav);
    case Observable::squeeze_pct_out: return format_number(x.squeeze_pct_out);
    default: return {};
  }
}

std::string header(const std::vector<Observable>& outputs) {
  std::string h;
  for (auto name : kParamNames) {
    h += name;
    h += ',';
  }
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    if (i) h += ',';
    h += to_string(outputs[i]);
  }
  h += '\n';
  return h;
}

void append_rows(const SweepSpec& spec, std::string& csv) {
  spec.validate();
  SystemParams base;
  for (const auto& [name, value] : spec.fixed) set_param(base, name, value);
  const std::size_t n = spec.grid.count();
  for (std::size_t i = 0; i < n; ++i) {
    SystemParams p = base;
    set_param(p, spec.axis, spec.grid.at(i));
    try {
      validate(p);
    } catch (const DomainError& e) {
      throw SpecError("grid point " + std::to_string(i) + ": " + e.what());
    }
    const auto ev = evaluate_point(p);
    for (auto name : kParamNames) {
      csv += format_number(get_param(p, name));
      csv += ',';
    }
    for (std::size_t k = 0; k < spec.outputs.size(); ++k) {
      if (k) csv += ',';
      csv += cell(ev, spec.outputs[k]);
    }
    csv += '\n';
  }
}

double require_number(const json& j, std::string_view what) {
  if (!j.is_number()) throw SpecError(std::string(what) + " must be a number");
  return j.get<double>();
}

}  // namespace

std::string_view to_string(Observable o) {
  for (const auto& [obs, name] : kObservableNames) {
    if (obs == o) return name;
  }
  return "unknown";
}

Observable parse_observable(std::string_view name) {
  for (const auto& [obs, n] : kObservableNames) {
    if (n == name) return obs;
  }
  throw SpecError("unknown observable '" + std::string(name) + "'");
}

const std::vector<Observable>& all_observables() {
  static const std::vector<Observable> all = [] {
    std::vector<Observable> v;
    for (const auto& [obs, name] : kObservableNames) v.push_back(obs);
    return v;
  }();
  return all;
}

bool is_param_name(std::string_view name) {
  return std::find(std::begin(kParamNames), std::end(kParamNames), name) != std::end(kParamNames);
}

double get_param(const SystemParams& p, std::string_view name) {
  if (name == "A") return p.linear_gain;
  if (name == "kappa") return p.kappa;
  if (name == "eta") return p.eta;
  if (name == "omega") return p.drive;
  if (name == "N") return p.noise;
  throw SpecError("unknown parameter '" + std::string(name) + "'");
}

void set_param(SystemParams& p, std::string_view name, double value) {
  if (name == "A") p.linear_gain = value;
  else if (name == "kappa") p.kappa = value;
  else if (name == "eta") p.eta = value;
  else if (name == "omega") p.drive = value;
  else if (name == "N") p.noise = value;
  else throw SpecError("unknown parameter '" + std::string(name) + "'");
}

std::size_t Grid::count() const {
  const double span = (stop - start) / step;
  return static_cast<std::size_t>(std::floor(span + 1e-9 * std::max(1.0, span))) + 1;
}

void SweepSpec::validate() const {
  if (!is_param_name(axis)) throw SpecError("axis '" + axis + "' is not a parameter name");
  for (const auto& [name, value] : fixed) {
    if (!is_param_name(name)) throw SpecError("unknown fixed parameter '" + name + "'");
    if (!std::isfinite(value)) throw SpecError("fixed parameter '" + name + "' is not finite");
  }
  if (fixed.contains(axis)) throw SpecError("axis '" + axis + "' is also fixed");
  for (auto name : kParamNames) {
    if (name != axis && !fixed.contains(name)) {
      throw SpecError("parameter '" + std::string(name) + "' is neither fixed nor the axis");
    }
  }
  if (!(grid.step > 0.0) || !std::isfinite(grid.step)) throw SpecError("grid step must be > 0");
  if (!std::isfinite(grid.start) || !std::isfinite(grid.stop) || grid.start > grid.stop) {
    throw SpecError("grid needs finite start <= stop");
  }
  if (outputs.empty()) throw SpecError("no outputs requested");
}

SweepSpec SweepSpec::from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw SpecError("sweep spec must be a JSON object");

  SweepSpec spec;
  spec.grid = Grid{0.0, 0.0, 0.0};
  if (j.contains("fixed")) {
    if (!j["fixed"].is_object()) throw SpecError("'fixed' must be an object");
    for (const auto& [name, value] : j["fixed"].items()) {
      spec.fixed[name] = require_number(value, "fixed." + name);
    }
  }
  if (j.contains("axis")) {
    if (!j["axis"].is_string()) throw SpecError("'axis' must be a string");
    spec.axis = j["axis"].get<std::string>();
  }
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    if (g.is_array() && g.size() == 3) {
      spec.grid = {require_number(g[0], "grid[0]"), require_number(g[1], "grid[1]"),
                   require_number(g[2], "grid[2]")};
    } else if (g.is_object()) {
      for (const auto* key : {"start", "stop", "step"}) {
        if (!g.contains(key)) throw SpecError(std::string("grid is missing '") + key + "'");
      }
      spec.grid = {require_number(g["start"], "grid.start"), require_number(g["stop"], "grid.stop"),
                   require_number(g["step"], "grid.step")};
    } else {
      throw SpecError("'grid' must be {start, stop, step} or a 3-element array");
    }
  }
  if (j.contains("outputs")) {
    if (!j["outputs"].is_array()) throw SpecError("'outputs' must be an array of names");
    spec.outputs.clear();
    for (const auto& o : j["outputs"]) {
      if (!o.is_string()) throw SpecError("output names must be strings");
      spec.outputs.push_back(parse_observable(o.get<std::string>()));
    }
  }
  return spec;
}

std::string format_number(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                 std::chars_format::general, 12);
  if (res.ec != std::errc{}) throw Error("number formatting failed");
  return std::string(buf.data(), res.ptr);
}

std::string run_sweep(const SweepSpec& spec) {
  spec.validate();
  std::string csv = header(spec.outputs);
  append_rows(spec, csv);
  return csv;
}

const std::vector<std::string>& figure_names() {
  static const std::vector<std::string> names{"fig2", "fig3", "fig4", "fig5", "fig6", "fig7"};
  return names;
}

FigurePreset figure_preset(std::string_view name) {
  using O = Observable;
  const Grid eta_axis{0.0, 1.0, 0.01};
  const Grid omega_axis{0.0, 2.0, 0.01};
  const std::vector<double> noise_curves{0.0, 0.1, 0.4};

  auto make = [](std::map<std::string, double, std::less<>> fixed, std::string axis, Grid g,
                 std::vector<O> outputs) {
    SweepSpec s;
    s.fixed = std::move(fixed);
    s.axis = std::move(axis);
    s.grid = g;
    s.outputs = std::move(outputs);
    return s;
  };

  FigurePreset f;
  f.name = std::string(name);
  if (name == "fig2") {
    f.description = "output minus-quadrature variance vs eta; kappa=0.2, omega=0, A=10";
    for (double n : noise_curves) {
      f.curves.push_back(make({{"kappa", 0.2}, {"omega", 0.0}, {"A", 10.0}, {"N", n}}, "eta",
                              eta_axis, {O::var_minus_out, O::squeeze_pct_out, O::below_threshold}));
    }
  } else if (name == "fig3") {
    f.description = "output minus-quadrature variance vs omega; kappa=0.2, eta=0, A=10";
    for (double n : noise_curves) {
      f.curves.push_back(make({{"kappa", 0.2}, {"eta", 0.0}, {"A", 10.0}, {"N", n}}, "omega",
                              omega_axis,
                              {O::var_minus_out, O::squeeze_pct_out, O::below_threshold}));
    }
  } else if (name == "fig4") {
    f.description = "cavity and output minus variances vs eta; kappa=0.2, omega=0, A=1000, N=0.4";
    f.curves.push_back(make({{"kappa", 0.2}, {"omega", 0.0}, {"A", 1000.0}, {"N", 0.4}}, "eta",
                            eta_axis, {O::var_minus_cav, O::var_minus_out, O::below_threshold}));
  } else if (name == "fig5") {
    f.description = "cavity and output minus variances vs omega; kappa=0.2, eta=0, A=1000, N=0.4";
    f.curves.push_back(make({{"kappa", 0.2}, {"eta", 0.0}, {"A", 1000.0}, {"N", 0.4}}, "omega",
                            omega_axis, {O::var_minus_cav, O::var_minus_out, O::below_threshold}));
  } else if (name == "fig6") {
    f.description = "output mean photon number vs omega; kappa=0.2, A=1, eta=0";
    for (double n : noise_curves) {
      f.curves.push_back(make({{"kappa", 0.2}, {"A", 1.0}, {"eta", 0.0}, {"N", n}}, "omega",
                              omega_axis, {O::n_out, O::below_threshold}));
    }
  } else if (name == "fig7") {
    // The axis is not fixed by the figure; omega with eta=0 mirrors fig6.
    f.description = "cavity and output mean photon numbers vs omega; kappa=0.2, N=0.4, A=1, eta=0";
    f.curves.push_back(make({{"kappa", 0.2}, {"N", 0.4}, {"A", 1.0}, {"eta", 0.0}}, "omega",
                            omega_axis, {O::n_cav, O::n_out, O::below_threshold}));
  } else {
    throw SpecError("unknown figure '" + std::string(name) + "' (expected fig2..fig7)");
  }
  return f;
}

std::string run_figure(const FigurePreset& preset) {
  if (preset.curves.empty()) throw SpecError("figure preset has no curves");
  std::string csv = header(preset.curves.front().outputs);
  for (const auto& curve : preset.curves) {
    if (curve.outputs != preset.curves.front().outputs) {
      throw SpecError("figure curves must share their outputs");
    }
    append_rows(curve, csv);
  }
  return csv;
}

std::string eval_json(const SystemParams& p) {
  const auto ev = evaluate_point(p);
  json j;
  j["params"] = {{"A", p.linear_gain}, {"kappa", p.kappa}, {"eta", p.eta},
                 {"omega", p.drive},   {"N", p.noise}};
  j["below_threshold"] = ev.rates.below_threshold;
  j["near_threshold"] = ev.near_threshold;
  j["lambda_plus"] = ev.rates.rate_plus;
  j["lambda_minus"] = ev.rates.rate_minus;
  j["mu"] = ev.rates.decay;
  j["beta"] = ev.rates.coupling;
  auto put = [&](const char* key, auto getter) {
    if (ev.observables) {
      j[key] = getter(*ev.observables);
    } else {
      j[key] = nullptr;
    }
  };
  put("var_plus_cav", [](const SteadyObservables& o) { return o.var_plus_cav; });
  put("var_minus_cav", [](const SteadyObservables& o) { return o.var_minus_cav; });
  put("var_plus_out", [](const SteadyObservables& o) { return o.var_plus_out; });
  put("var_minus_out", [](const SteadyObservables& o) { return o.var_minus_out; });
  put("n_cav", [](const SteadyObservables& o) { return o.n_cav; });
  put("n_out", [](const SteadyObservables& o) { return o.n_out; });
  put("squeeze_pct_cav", [](const SteadyObservables& o) { return o.squeeze_pct_cav; });
  put("squeeze_pct_out", [](const SteadyObservables& o) { return o.squeeze_pct_out; });
  return j.dump(2) + "\n";
}

}  // namespace cbl::sweep
