// Command-line front end. Talks to the library only through the C API.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "cbl/cbl.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitVerify = 2;

struct Failure {
  int code;
  std::string message;
};

void check(cbl_status s) {
  if (s != CBL_OK) {
    std::string msg = cbl_last_error();
    if (msg.empty()) msg = cbl_status_message(s);
    throw Failure{kExitUsage, msg};
  }
}

struct CString {
  char* p = nullptr;
  ~CString() { cbl_string_free(p); }
};

struct ParamFlags {
  std::optional<double> a, kappa, eta, omega, n;

  void add(CLI::App* cmd) {
    cmd->add_option("--A", a, "linear gain coefficient");
    cmd->add_option("--kappa", kappa, "cavity damping rate");
    cmd->add_option("--eta", eta, "atomic superposition parameter");
    cmd->add_option("--omega", omega, "drive amplitude over gamma");
    cmd->add_option("--N", n, "reservoir photon number");
  }

  template <class F>
  void each(F&& f) const {
    if (a) f("A", *a);
    if (kappa) f("kappa", *kappa);
    if (eta) f("eta", *eta);
    if (omega) f("omega", *omega);
    if (n) f("N", *n);
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kExitUsage, "cannot open '" + path + "'"};
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    std::fflush(stdout);
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  out << text;
  if (!out) throw Failure{kExitUsage, "cannot write '" + out_path + "'"};
}

using SweepPtr = std::unique_ptr<cbl_sweep, decltype(&cbl_sweep_destroy)>;

SweepPtr load_spec(const std::string& path) {
  cbl_sweep* raw = nullptr;
  if (path.empty()) {
    check(cbl_sweep_create(&raw));
  } else {
    check(cbl_sweep_from_json(read_file(path).c_str(), &raw));
  }
  return {raw, &cbl_sweep_destroy};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coherent beat laser squeezing: evaluation, sweeps, figures and oracle checks"};
  app.require_subcommand(1);

  std::string out_path;
  std::string spec_path;
  std::string profile = "default";
  ParamFlags flags;

  auto* eval = app.add_subcommand("eval", "evaluate one operating point as JSON");
  flags.add(eval);
  eval->add_option("--spec", spec_path, "JSON file supplying parameter values");
  eval->add_option("--out", out_path, "output path (default stdout)");

  std::optional<std::string> axis;
  std::optional<double> start, stop, step;
  std::optional<std::string> outputs;
  auto* sweep = app.add_subcommand("sweep", "sweep one parameter, CSV output");
  flags.add(sweep);
  sweep->add_option("--spec", spec_path, "JSON sweep specification");
  sweep->add_option("--axis", axis, "swept parameter (A, kappa, eta, omega, N)");
  sweep->add_option("--start", start, "first grid value");
  sweep->add_option("--stop", stop, "last grid value");
  sweep->add_option("--step", step, "grid step");
  sweep->add_option("--outputs", outputs, "comma-separated observable names");
  sweep->add_option("--out", out_path, "output path (default stdout)");

  std::string figure_name;
  auto* figure = app.add_subcommand("figure", "reproduce a figure preset as CSV");
  figure->add_option("name", figure_name, "fig2 .. fig7")->required();
  figure->add_option("--out", out_path, "output path (default stdout)");

  std::string scope = "all";
  auto* verify = app.add_subcommand("verify", "check the analytic results against the oracles");
  auto* scope_pos = verify->add_option("scope", scope, "langevin | master | all");
  verify->add_option("--oracle", scope, "same as the positional scope")->excludes(scope_pos);
  verify->add_option("--tolerance-profile", profile, "default | strict");
  verify->add_option("--out", out_path, "output path (default stdout)");

  auto* report = app.add_subcommand("report", "analytic consistency report");
  report->add_option("--out", out_path, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*eval) {
      // A spec file may supply parameters; flags win.
      auto spec = load_spec(spec_path);
      flags.each([&](const char* name, double v) { check(cbl_sweep_set_fixed(spec.get(), name, v)); });
      double v[5];
      const char* names[] = {"A", "kappa", "eta", "omega", "N"};
      for (int i = 0; i < 5; ++i) check(cbl_sweep_get_fixed(spec.get(), names[i], &v[i]));
      cbl_params* raw = nullptr;
      check(cbl_params_create(v[0], v[1], v[2], v[3], v[4], &raw));
      std::unique_ptr<cbl_params, decltype(&cbl_params_destroy)> params(raw, &cbl_params_destroy);
      CString json;
      check(cbl_eval_json(params.get(), &json.p));
      emit(std::string(json.p) + "\n", out_path);
    } else if (*sweep) {
      auto spec = load_spec(spec_path);
      flags.each([&](const char* name, double v) { check(cbl_sweep_set_fixed(spec.get(), name, v)); });
      if (axis || start || stop || step) {
        if (!axis || !start || !stop || !step) {
          throw Failure{kExitUsage, "--axis, --start, --stop and --step go together"};
        }
        check(cbl_sweep_set_axis(spec.get(), axis->c_str(), *start, *stop, *step));
      }
      if (outputs) check(cbl_sweep_set_outputs(spec.get(), outputs->c_str()));
      CString csv;
      check(cbl_sweep_run_csv(spec.get(), &csv.p));
      emit(csv.p, out_path);
    } else if (*figure) {
      CString csv;
      check(cbl_figure_csv(figure_name.c_str(), &csv.p));
      emit(csv.p, out_path);
    } else if (*verify) {
      cbl_scope sc;
      if (scope == "langevin") sc = CBL_SCOPE_LANGEVIN;
      else if (scope == "master") sc = CBL_SCOPE_MASTER;
      else if (scope == "all") sc = CBL_SCOPE_ALL;
      else throw Failure{kExitUsage, "unknown scope '" + scope + "'"};
      cbl_profile pr;
      if (profile == "default") pr = CBL_PROFILE_DEFAULT;
      else if (profile == "strict") pr = CBL_PROFILE_STRICT;
      else throw Failure{kExitUsage, "unknown tolerance profile '" + profile + "'"};
      CString text;
      int passed = 0;
      check(cbl_verify(sc, pr, &text.p, &passed));
      emit(text.p, out_path);
      if (!passed) {
        std::cerr << "verification failed\n";
        return kExitVerify;
      }
    } else if (*report) {
      CString text;
      check(cbl_consistency_report(&text.p));
      emit(text.p, out_path);
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << '\n';
    return f.code;
  }
  return 0;
}
