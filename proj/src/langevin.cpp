#include "cbl/langevin.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <thread>

#include "cbl/errors.hpp"

namespace cbl::langevin {

namespace {

void check_step(const DriftDiffusion& dd, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw StepSizeError("dt must be positive");
  const double fastest = std::max(std::fabs(dd.rate_plus), std::fabs(dd.rate_minus));
  if (fastest * dt >= kStabilityMargin) {
    throw StepSizeError("dt * max rate = " + std::to_string(fastest * dt) + " violates margin " +
                        std::to_string(kStabilityMargin));
  }
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct SquaredPair {
  double plus = 0.0;
  double minus = 0.0;
};

}  // namespace

MomentState moment_ode_step(const MomentState& s, const DriftDiffusion& rates, double dt) {
  auto rhs = [&](double plus, double minus) {
    return SquaredPair{-rates.rate_minus * plus + rates.diff_plus,
                       -rates.rate_plus * minus + rates.diff_minus};
  };
  const auto k1 = rhs(s.plus, s.minus);
  const auto k2 = rhs(s.plus + 0.5 * dt * k1.plus, s.minus + 0.5 * dt * k1.minus);
  const auto k3 = rhs(s.plus + 0.5 * dt * k2.plus, s.minus + 0.5 * dt * k2.minus);
  const auto k4 = rhs(s.plus + dt * k3.plus, s.minus + dt * k3.minus);
  MomentState next;
  next.plus = s.plus + dt / 6.0 * (k1.plus + 2.0 * k2.plus + 2.0 * k3.plus + k4.plus);
  next.minus = s.minus + dt / 6.0 * (k1.minus + 2.0 * k2.minus + 2.0 * k3.minus + k4.minus);
  next.t = s.t + dt;
  return next;
}

std::vector<MomentState> integrate_moments(const SystemParams& p, double t_end, double dt) {
  const auto dd = require_below_threshold(drift_diffusion(p));
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw DomainError("t_end must be >= 0");
  check_step(dd, dt);

  const auto full_steps = static_cast<std::size_t>(std::floor(t_end / dt));
  std::vector<MomentState> traj;
  traj.reserve(full_steps + 2);
  traj.push_back({});
  for (std::size_t i = 0; i < full_steps; ++i) {
    auto next = moment_ode_step(traj.back(), dd, dt);
    next.t = static_cast<double>(i + 1) * dt;
    traj.push_back(next);
  }
  const double rest = t_end - traj.back().t;
  if (rest > 1e-12 * std::max(1.0, t_end)) {
    auto last = moment_ode_step(traj.back(), dd, rest);
    last.t = t_end;
    traj.push_back(last);
  }
  return traj;
}

MomentState steady_moments_linear(const SystemParams& p) {
  const auto dd = require_below_threshold(drift_diffusion(p));
  return {dd.diff_plus / dd.rate_minus, dd.diff_minus / dd.rate_plus, 0.0};
}

EnsembleEstimate stochastic_ensemble(const SystemParams& p, const EnsembleConfig& cfg) {
  const auto dd = require_below_threshold(drift_diffusion(p));
  if (dd.diff_plus < 0.0 || dd.diff_minus < 0.0) {
    throw RepresentabilityError(
        "negative quadrature diffusion; use the deterministic moment equations");
  }
  if (cfg.n_trajectories < 2) throw DomainError("need at least two trajectories");
  if (!(cfg.t_end > 0.0)) throw DomainError("t_end must be positive");
  check_step(dd, cfg.dt);

  const auto n = static_cast<std::size_t>(cfg.n_trajectories);
  const auto steps = static_cast<std::int64_t>(std::ceil(cfg.t_end / cfg.dt - 1e-9));
  const double drift_plus = 0.5 * dd.rate_minus * cfg.dt;
  const double drift_minus = 0.5 * dd.rate_plus * cfg.dt;
  const double kick_plus = std::sqrt(dd.diff_plus * cfg.dt);
  const double kick_minus = std::sqrt(dd.diff_minus * cfg.dt);

  std::vector<SquaredPair> finals(n);
  auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      std::mt19937_64 rng(splitmix64(cfg.seed ^ splitmix64(i)));
      std::normal_distribution<double> gauss(0.0, 1.0);
      double xp = 0.0;
      double xm = 0.0;
      for (std::int64_t s = 0; s < steps; ++s) {
        const double wp = gauss(rng);
        const double wm = gauss(rng);
        xp += -drift_plus * xp + kick_plus * wp;
        xm += -drift_minus * xm + kick_minus * wm;
      }
      finals[i] = {xp * xp, xm * xm};
    }
  };

  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (std::size_t begin = 0; begin < n; begin += chunk) {
      pool.emplace_back(run_range, begin, std::min(n, begin + chunk));
    }
  }

  // Fixed-order reduction so the estimate is independent of scheduling.
  double sum_p = 0.0, sum_m = 0.0;
  for (const auto& f : finals) {
    sum_p += f.plus;
    sum_m += f.minus;
  }
  const double nn = static_cast<double>(n);
  const double mean_p = sum_p / nn;
  const double mean_m = sum_m / nn;
  double ss_p = 0.0, ss_m = 0.0;
  for (const auto& f : finals) {
    ss_p += (f.plus - mean_p) * (f.plus - mean_p);
    ss_m += (f.minus - mean_m) * (f.minus - mean_m);
  }

  EnsembleEstimate est;
  est.moments = {mean_p, mean_m, static_cast<double>(steps) * cfg.dt};
  est.se_plus = std::sqrt(ss_p / (nn - 1.0) / nn);
  est.se_minus = std::sqrt(ss_m / (nn - 1.0) / nn);
  est.n_trajectories = cfg.n_trajectories;
  return est;
}

}  // namespace cbl::langevin
