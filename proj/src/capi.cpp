#include "cbl/cbl.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <sstream>
#include <string>

#include "cbl/analytic.hpp"
#include "cbl/errors.hpp"
#include "cbl/sweep.hpp"
#include "cbl/verify.hpp"

struct cbl_params {
  cbl::SystemParams value;
};

struct cbl_sweep {
  cbl::sweep::SweepSpec spec;
};

namespace {

thread_local std::string last_error;

cbl_status fail(cbl_status s, const char* msg) {
  last_error = msg;
  return s;
}

template <class F>
cbl_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return CBL_OK;
  } catch (const cbl::DomainError& e) {
    return fail(CBL_ERR_DOMAIN, e.what());
  } catch (const cbl::ThresholdError& e) {
    return fail(CBL_ERR_THRESHOLD, e.what());
  } catch (const cbl::RepresentabilityError& e) {
    return fail(CBL_ERR_REPRESENTABILITY, e.what());
  } catch (const cbl::StepSizeError& e) {
    return fail(CBL_ERR_STEP_SIZE, e.what());
  } catch (const cbl::DimensionError& e) {
    return fail(CBL_ERR_DIMENSION, e.what());
  } catch (const cbl::TruncationError& e) {
    return fail(CBL_ERR_TRUNCATION, e.what());
  } catch (const cbl::ConvergenceError& e) {
    return fail(CBL_ERR_CONVERGENCE, e.what());
  } catch (const cbl::SpecError& e) {
    return fail(CBL_ERR_SPEC, e.what());
  } catch (const std::bad_alloc&) {
    return fail(CBL_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(CBL_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(CBL_ERR_INTERNAL, "unknown error");
  }
}

char* dup(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* cbl_status_message(cbl_status status) {
  switch (status) {
    case CBL_OK: return "ok";
    case CBL_ERR_DOMAIN: return "parameter out of domain";
    case CBL_ERR_THRESHOLD: return "operating point at or above threshold";
    case CBL_ERR_REPRESENTABILITY: return "negative diffusion has no real-noise representation";
    case CBL_ERR_STEP_SIZE: return "time step too large for stability";
    case CBL_ERR_DIMENSION: return "invalid Fock-space dimension";
    case CBL_ERR_TRUNCATION: return "population leaked past the truncation";
    case CBL_ERR_CONVERGENCE: return "no convergence";
    case CBL_ERR_SPEC: return "invalid specification";
    case CBL_ERR_IO: return "i/o error";
    case CBL_ERR_NULL_ARG: return "null argument";
    case CBL_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* cbl_last_error(void) { return last_error.c_str(); }

void cbl_string_free(char* s) { std::free(s); }

cbl_status cbl_params_create(double linear_gain, double kappa, double eta, double drive,
                             double noise, cbl_params** out) {
  if (out == nullptr) return fail(CBL_ERR_NULL_ARG, "out is null");
  *out = nullptr;
  return guarded([&] {
    auto v = cbl::SystemParams::make(linear_gain, kappa, eta, drive, noise);
    *out = new cbl_params{v};
  });
}

void cbl_params_destroy(cbl_params* p) { delete p; }

cbl_status cbl_evaluate(const cbl_params* p, cbl_observables* out) {
  if (p == nullptr || out == nullptr) return fail(CBL_ERR_NULL_ARG, "null argument");
  return guarded([&] {
    const auto ev = cbl::evaluate_point(p->value);
    cbl_observables o{};
    o.below_threshold = ev.rates.below_threshold ? 1 : 0;
    o.near_threshold = ev.near_threshold ? 1 : 0;
    o.lambda_plus = ev.rates.rate_plus;
    o.lambda_minus = ev.rates.rate_minus;
    if (ev.observables) {
      const auto& s = *ev.observables;
      o.var_plus_cav = s.var_plus_cav;
      o.var_minus_cav = s.var_minus_cav;
      o.var_plus_out = s.var_plus_out;
      o.var_minus_out = s.var_minus_out;
      o.n_cav = s.n_cav;
      o.n_out = s.n_out;
      o.squeeze_pct_cav = s.squeeze_pct_cav;
      o.squeeze_pct_out = s.squeeze_pct_out;
    }
    *out = o;
  });
}

cbl_status cbl_eval_json(const cbl_params* p, char** out) {
  if (p == nullptr || out == nullptr) return fail(CBL_ERR_NULL_ARG, "null argument");
  return guarded([&] { *out = dup(cbl::sweep::eval_json(p->value)); });
}

cbl_status cbl_sweep_create(cbl_sweep** out) {
  if (out == nullptr) return fail(CBL_ERR_NULL_ARG, "out is null");
  return guarded([&] { *out = new cbl_sweep{}; });
}

cbl_status cbl_sweep_from_json(const char* json, cbl_sweep** out) {
  if (json == nullptr || out == nullptr) return fail(CBL_ERR_NULL_ARG, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new cbl_sweep{cbl::sweep::SweepSpec::from_json(json)}; });
}

void cbl_sweep_destroy(cbl_sweep* s) { delete s; }

cbl_status cbl_sweep_set_fixed(cbl_sweep* s, const char* name, double value) {
  if (s == nullptr || name == nullptr) return fail(CBL_ERR_NULL_ARG, "null argument");
  return guarded([&] {
    if (!cbl::sweep::is_param_name(name)) {
      throw cbl::SpecError(std::string("unknown parameter '") + name + "'");
    }
    s->spec.fixed.insert_or_assign(name, value);
    if (s->spec.axis == name) s->spec.axis.clear();
  });
}

cbl_status cbl_sweep_get_fixed(const cbl_sweep* s, const char* name, double* value) {
  if (s == nullptr || name == nullptr || value == nullptr) {
    return fail(CBL_ERR_NULL_ARG, "null argument");
  }
  return guarded([&] {
    const auto it = s->spec.fixed.find(std::string_view(name));
    if (it == s->spec.fixed.end()) {
      throw cbl::SpecError(std::string("missing value for parameter '") + name + "'");
    }
    *value = it->second;
  });
}

cbl_status cbl_sweep_set_axis(cbl_sweep* s, const char* name, double start, double stop,
                              double step) {
  if (s == nullptr || name == nullptr) return fail(CBL_ERR_NULL_ARG, "null argument");
  return guarded([&] {
    if (!cbl::sweep::is_param_name(name)) {
      throw cbl::SpecError(std::string("unknown parameter '") + name + "'");
    }
    s->spec.axis = name;
    s->spec.grid = {start, stop, step};
    if (auto it = s->spec.fixed.find(std::string_view(name)); it != s->spec.fixed.end()) {
      s->spec.fixed.erase(it);
    }
  });
}

cbl_status cbl_sweep_set_outputs(cbl_sweep* s, const char* outputs) {
  if (s == nullptr || outputs == nullptr) return fail(CBL_ERR_NULL_ARG, "null argument");
  return guarded([&] {
    std::vector<cbl::sweep::Observable> list;
    std::istringstream in(outputs);
    std::string item;
    while (std::getline(in, item, ',')) {
      if (!item.empty()) list.push_back(cbl::sweep::parse_observable(item));
    }
    if (list.empty()) throw cbl::SpecError("outputs must not be empty");
    s->spec.outputs = std::move(list);
  });
}

cbl_status cbl_sweep_run_csv(const cbl_sweep* s, char** out) {
  if (s == nullptr || out == nullptr) return fail(CBL_ERR_NULL_ARG, "null argument");
  return guarded([&] { *out = dup(cbl::sweep::run_sweep(s->spec)); });
}

cbl_status cbl_figure_csv(const char* name, char** out) {
  if (name == nullptr || out == nullptr) return fail(CBL_ERR_NULL_ARG, "null argument");
  return guarded(
      [&] { *out = dup(cbl::sweep::run_figure(cbl::sweep::figure_preset(name))); });
}

cbl_status cbl_figure_names(char** out) {
  if (out == nullptr) return fail(CBL_ERR_NULL_ARG, "null argument");
  return guarded([&] {
    std::string all;
    for (const auto& n : cbl::sweep::figure_names()) {
      if (!all.empty()) all += ',';
      all += n;
    }
    *out = dup(all);
  });
}

cbl_status cbl_verify(cbl_scope scope, cbl_profile profile, char** report, int* passed) {
  if (report == nullptr || passed == nullptr) return fail(CBL_ERR_NULL_ARG, "null argument");
  return guarded([&] {
    cbl::verify::Scope sc{};
    switch (scope) {
      case CBL_SCOPE_LANGEVIN: sc = cbl::verify::Scope::langevin; break;
      case CBL_SCOPE_MASTER: sc = cbl::verify::Scope::master; break;
      case CBL_SCOPE_ALL: sc = cbl::verify::Scope::all; break;
      default: throw cbl::SpecError("unknown verification scope");
    }
    cbl::verify::Profile pr{};
    switch (profile) {
      case CBL_PROFILE_DEFAULT: pr = cbl::verify::Profile::standard; break;
      case CBL_PROFILE_STRICT: pr = cbl::verify::Profile::strict; break;
      default: throw cbl::SpecError("unknown tolerance profile");
    }
    const auto r = cbl::verify::run(sc, pr);
    *report = dup(r.text());
    *passed = r.passed() ? 1 : 0;
  });
}

cbl_status cbl_consistency_report(char** out) {
  if (out == nullptr) return fail(CBL_ERR_NULL_ARG, "null argument");
  return guarded([&] { *out = dup(cbl::verify::consistency_report()); });
}

}  // extern "C"
