#include "cbl/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "cbl/analytic.hpp"
#include "cbl/errors.hpp"
#include "cbl/langevin.hpp"
#include "cbl/master.hpp"

namespace cbl::verify {

namespace {

constexpr std::size_t kMasterFirstDim = 12;
constexpr std::size_t kMasterDimStep = 8;
constexpr std::size_t kMasterMaxDim = 80;

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

Check make_check(std::string name, double worst, double tol, std::size_t points) {
  Check c;
  c.name = std::move(name);
  c.computed = worst;
  c.tolerance = tol;
  c.points = points;
  c.passed = std::isfinite(worst) && worst <= tol;
  return c;
}

}  // namespace

Scope parse_scope(std::string_view s) {
  if (s == "langevin") return Scope::langevin;
  if (s == "master") return Scope::master;
  if (s == "all") return Scope::all;
  throw SpecError("unknown verify scope '" + std::string(s) + "' (langevin|master|all)");
}

Profile parse_profile(std::string_view s) {
  if (s == "default") return Profile::standard;
  if (s == "strict") return Profile::strict;
  throw SpecError("unknown tolerance profile '" + std::string(s) + "' (default|strict)");
}

Settings settings(Profile profile) {
  if (profile == Profile::strict) return {1e-9, 1e-7, 1e-12, 1000, 20, 0.0025};
  return {1e-8, 1e-6, 1e-12, 200, 6, 0.005};
}

bool Report::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

std::string Report::text() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.passed ? "PASS" : "FAIL") << "  " << c.name << ": max deviation " << sci(c.computed)
       << " (tolerance " << sci(c.tolerance) << ", " << c.points << " points)";
    if (!c.detail.empty()) os << "  " << c.detail;
    os << '\n';
  }
  os << "excluded above-threshold draws: " << excluded_above_threshold << '\n';
  os << (passed() ? "verification passed" : "verification FAILED") << '\n';
  return os.str();
}

PointSample random_points(std::size_t n, std::uint64_t seed, double max_stiffness) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  PointSample out;
  while (out.points.size() < n) {
    SystemParams p;
    p.linear_gain = unit(rng) < 0.1 ? 0.0 : std::pow(10.0, -2.0 + 4.0 * unit(rng));
    p.kappa = 0.05 + 0.95 * unit(rng);
    p.eta = -1.0 + 2.0 * unit(rng);
    p.drive = unit(rng) < 0.2 ? 0.0 : 3.0 * unit(rng);
    p.noise = unit(rng) < 0.2 ? 0.0 : 2.0 * unit(rng);
    const auto dd = drift_diffusion(p);
    if (!dd.below_threshold) {
      ++out.excluded_above_threshold;
      continue;
    }
    const double hi = std::max(dd.rate_plus, dd.rate_minus);
    const double lo = std::min(dd.rate_plus, dd.rate_minus);
    if (hi / lo > max_stiffness) continue;
    out.points.push_back(p);
  }
  return out;
}

PointSample small_photon_points(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  PointSample out;
  while (out.points.size() < n) {
    SystemParams p;
    p.linear_gain = 2.0 * unit(rng);
    p.kappa = 0.3 + 0.7 * unit(rng);
    p.eta = -0.3 + 1.3 * unit(rng);
    p.drive = unit(rng) < 0.25 ? 0.0 : unit(rng);
    p.noise = unit(rng) < 0.25 ? 0.0 : 0.5 * unit(rng);
    const auto dd = drift_diffusion(p);
    if (!dd.below_threshold) {
      ++out.excluded_above_threshold;
      continue;
    }
    if (std::min(dd.rate_plus, dd.rate_minus) < 0.1) continue;
    const auto m = quad_moments_steady(p);
    const auto cav = cavity_variances(m);
    // Few photons and a short number-basis tail.
    if (mean_photon_cavity(m) >= 3.0 || cav.plus > 3.0 || cav.minus < 0.4) continue;
    out.points.push_back(p);
  }
  return out;
}

LangevinDeviation langevin_point(const SystemParams& p, double step_fraction) {
  const auto dd = require_below_threshold(drift_diffusion(p));
  const double hi = std::max(dd.rate_plus, dd.rate_minus);
  const double lo = std::min(dd.rate_plus, dd.rate_minus);
  const auto traj = langevin::integrate_moments(p, 40.0 / lo, step_fraction / hi);
  const auto closed = quad_moments_steady(p);

  LangevinDeviation dev;
  dev.steady = std::max(std::fabs(traj.back().plus - closed.plus),
                        std::fabs(traj.back().minus - closed.minus));
  for (const auto& s : traj) {
    const auto expect = quad_moments_transient(p, s.t);
    dev.transient = std::max({dev.transient, std::fabs(s.plus - expect.plus),
                              std::fabs(s.minus - expect.minus)});
  }
  const auto lin = langevin::steady_moments_linear(p);
  auto rel = [](double a, double b) { return std::fabs(a - b) / std::max(1.0, std::fabs(b)); };
  dev.linear = std::max(rel(lin.plus, closed.plus), rel(lin.minus, closed.minus));
  return dev;
}

MasterDeviation master_point(const SystemParams& p) {
  const auto scan =
      master::converge_truncation(p, kMasterFirstDim, kMasterDimStep, kMasterMaxDim);
  const auto& best = scan.rows.back();
  const auto closed = quad_moments_steady(p);
  MasterDeviation dev;
  dev.steady = std::max(std::fabs(best.quad_plus - closed.plus),
                        std::fabs(best.quad_minus - closed.minus));
  for (const auto& row : scan.rows) {
    dev.trace_drift = std::max(dev.trace_drift, row.trace_drift);
    dev.hermiticity = std::max(dev.hermiticity, row.hermiticity);
  }
  dev.dim = best.dim;
  return dev;
}

Report run(Scope scope, Profile profile) {
  const auto cfg = settings(profile);
  Report report;

  if (scope == Scope::langevin || scope == Scope::all) {
    const auto sample = random_points(cfg.langevin_points, 20240601, 50.0);
    report.excluded_above_threshold += sample.excluded_above_threshold;
    double steady = 0.0, transient = 0.0, linear = 0.0;
    for (const auto& p : sample.points) {
      const auto d = langevin_point(p, cfg.ode_step_fraction);
      steady = std::max(steady, d.steady);
      transient = std::max(transient, d.transient);
      linear = std::max(linear, d.linear);
    }
    const auto n = sample.points.size();
    report.checks.push_back(
        make_check("langevin: moment-ODE steady state vs closed form", steady,
                   cfg.langevin_tolerance, n));
    report.checks.push_back(make_check("langevin: transient vs exponential saturation", transient,
                                       cfg.langevin_tolerance, n));
    report.checks.push_back(make_check("langevin: linear fixed point vs closed form (relative)",
                                       linear, cfg.linear_tolerance, n));
  }

  if (scope == Scope::master || scope == Scope::all) {
    const auto sample = small_photon_points(cfg.master_points, 7);
    report.excluded_above_threshold += sample.excluded_above_threshold;
    double steady = 0.0, trace = 0.0, herm = 0.0;
    std::size_t max_dim = 0;
    std::string failure;
    for (const auto& p : sample.points) {
      try {
        const auto d = master_point(p);
        steady = std::max(steady, d.steady);
        trace = std::max(trace, d.trace_drift);
        herm = std::max(herm, d.hermiticity);
        max_dim = std::max(max_dim, d.dim);
      } catch (const Error& e) {
        steady = INFINITY;
        failure = e.what();
      }
    }
    const auto n = sample.points.size();
    auto c = make_check("master: Fock-space steady state vs closed form", steady,
                        cfg.master_tolerance, n);
    c.detail = failure.empty() ? "largest truncation " + std::to_string(max_dim) : failure;
    report.checks.push_back(c);
    report.checks.push_back(make_check("master: trace drift", trace, 1e-10, n));
    report.checks.push_back(make_check("master: Hermiticity error", herm, 1e-10, n));
  }
  return report;
}

}  // namespace cbl::verify
