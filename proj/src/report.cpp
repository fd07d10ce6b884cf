#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "cbl/analytic.hpp"
#include "cbl/verify.hpp"

namespace cbl::verify {

namespace {

// Printed expressions, kept verbatim so their discrepancies can be shown.
namespace printed {

struct Pieces {
  double norm, gain, corr_f, a_over_b, s, h_plus, h_minus, n, m;
};

Pieces pieces(const SystemParams& p) {
  const auto g = gain_coefficients(atomic_preparation(p.eta), p.drive);
  const auto res = reservoir_moments(p.noise);
  const double w = p.drive;
  const double s = std::sqrt((1.0 - p.eta) * (1.0 + p.eta));
  const double common = (1.0 - w * w / 2.0) * p.eta + s * 1.5 * w;
  const double split = (w / 2.0) * (1.0 + w * w);
  const double r = p.linear_gain / p.kappa;
  return {g.norm, g.gain, g.corr_f, p.linear_gain / g.norm, s,
          g.norm + r * (common - split), g.norm + r * (common + split),
          res.intensity, res.correlation};
}

// Coupling with the extra kappa and without the factor 1/2.
double coupling(const SystemParams& p) {
  const auto g = gain_coefficients(atomic_preparation(p.eta), p.drive);
  return p.linear_gain / g.norm * (g.corr_e - g.corr_f) + p.kappa;
}

// Diffusion bracket -2[(A/B)(F -+ C) + kappa(M -+ N)].
double diffusion(const SystemParams& p, int sign) {
  const auto x = pieces(p);
  return -2.0 * (x.a_over_b * (x.corr_f - sign * x.gain) + p.kappa * (x.m - sign * x.n));
}

// General mean output photon number closed form.
double mean_photon_output(const SystemParams& p) {
  const auto x = pieces(p);
  const double w = p.drive;
  const double a = p.linear_gain;
  const double k = p.kappa;
  const double e = p.eta;
  const double bracket =
      (w / 2.0) * (1.0 - 3.0 * e) + w * w * w / 2.0 + (1.0 - e + (w * w / 2.0) * (2.0 + e));
  return (a * x.s * (w * w / 2.0 - 1.0 - 1.5 * w) + 2.0 * k * x.norm * (x.n - x.m)) /
             (4.0 * x.h_minus) +
         a * bracket / (4.0 * x.h_plus) - a * bracket / (4.0 * x.h_minus) -
         (a * x.s * (w * w / 2.0 - 1.0 + 1.5 * w) - 2.0 * k * x.norm * (x.n + x.m)) /
             (4.0 * x.h_plus) +
         x.n * (1.0 - k);
}

}  // namespace printed

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string label(const SystemParams& p) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "A=%-6g kappa=%-4g eta=%-5g omega=%-5g N=%-4g", p.linear_gain,
                p.kappa, p.eta, p.drive, p.noise);
  return buf;
}

const std::vector<SystemParams>& standard_grid() {
  static const std::vector<SystemParams> grid{
      {10.0, 0.2, 0.25, 0.0, 0.4}, {10.0, 0.2, 0.0, 0.14, 0.4}, {1.0, 0.2, 0.0, 0.5, 0.1},
      {1.0, 0.5, 0.5, 1.0, 0.0},   {0.0, 0.2, 0.3, 0.5, 0.4},   {2.0, 0.8, -0.2, 0.3, 1.0},
  };
  return grid;
}

}  // namespace

std::string consistency_report() {
  std::ostringstream os;
  const auto& grid = standard_grid();

  os << "(a) quadrature relaxation rates\n"
        "    The printed rate definition gives both quadratures the rate mu - 2 beta,\n"
        "    with beta carrying an extra +kappa and no factor 1/2. Here\n"
        "      beta = (A/2B)(E - F),  lambda_pm = mu pm 2 beta,\n"
        "    and alpha_+ relaxes at lambda_- while alpha_- relaxes at lambda_+\n"
        "    (the lambda_mp labelling), so that kappa H_pm / B = lambda_mp.\n";
  for (const auto& p : grid) {
    const auto dd = drift_diffusion(p);
    const double pub = dd.decay - 2.0 * printed::coupling(p);
    const auto x = printed::pieces(p);
    const double id = std::max(std::fabs(p.kappa * x.h_plus / x.norm - dd.rate_minus),
                               std::fabs(p.kappa * x.h_minus / x.norm - dd.rate_plus));
    os << "    " << label(p) << "  printed " << fmt("%+.6f", pub) << "  lambda+ "
       << fmt("%+.6f", dd.rate_plus) << "  lambda- " << fmt("%+.6f", dd.rate_minus)
       << "  |kappa H/B - lambda| " << fmt("%.1e", id) << '\n';
  }

  os << "\n(b) quadrature diffusion strengths\n"
        "    printed bracket:    -2[(A/B)(F -+ C) + kappa(M -+ N)]\n"
        "    reconciled:         2[(A/B)(+-C - F) + kappa(M +- N)]\n"
        "    delta = |diffusion / rate - closed-form steady moment|, worst quadrature\n";
  for (const auto& p : grid) {
    const auto dd = drift_diffusion(p);
    if (!dd.below_threshold) continue;
    const auto closed = quad_moments_steady(p);
    const double rec = std::max(std::fabs(dd.diff_plus / dd.rate_minus - closed.plus),
                                std::fabs(dd.diff_minus / dd.rate_plus - closed.minus));
    const double pub =
        std::max(std::fabs(printed::diffusion(p, +1) / dd.rate_minus - closed.plus),
                 std::fabs(printed::diffusion(p, -1) / dd.rate_plus - closed.minus));
    os << "    " << label(p) << "  reconciled delta " << fmt("%.2e", rec)
       << "  printed delta " << fmt("%.4e", pub) << '\n';
  }

  os << "\n(c) eta = 0 closed form vs general output variances (A=10, kappa=0.2, N=0.4)\n"
        "    omega    general minus   printed minus     |delta| (worst quadrature)\n";
  double worst = 0.0;
  for (int i = 0; i <= 20; ++i) {
    const SystemParams p{10.0, 0.2, 0.0, 0.05 * i, 0.4};
    if (!drift_diffusion(p).below_threshold) {
      os << "    " << fmt("%-7.2f", p.drive) << "  above threshold\n";
      continue;
    }
    const auto gen = output_variances_direct(p);
    const auto pub = output_variances_eta0(p);
    const double d = std::max(std::fabs(gen.plus - pub.plus), std::fabs(gen.minus - pub.minus));
    worst = std::max(worst, d);
    os << "    " << fmt("%-7.2f", p.drive) << "  " << fmt("%-14.9f", gen.minus) << "  "
       << fmt("%-16.9f", pub.minus) << "  " << fmt("%.3e", d) << '\n';
  }
  os << "    max |delta| = " << fmt("%.3e", worst)
     << (worst > 1e-9 ? "  (printed form disagrees; general path is used)" : "") << '\n';

  os << "\n(d) output mean photon number: printed general closed form vs\n"
        "    kappa n_cav + N(1 - kappa) (and the undriven closed form at omega = 0)\n";
  for (const auto& p : grid) {
    if (!drift_diffusion(p).below_threshold) continue;
    const auto m = quad_moments_steady(p);
    const double ref = cbl::mean_photon_output(p, m);
    os << "    " << label(p) << "  n_out " << fmt("%.9f", ref) << "  printed delta "
       << fmt("%.3e", std::fabs(printed::mean_photon_output(p) - ref));
    if (p.drive == 0.0) {
      os << "  undriven delta " << fmt("%.1e", std::fabs(mean_photon_output_omega0(p) - ref));
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace cbl::verify
