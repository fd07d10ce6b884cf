#include "cbl/master.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <type_traits>

#include "cbl/errors.hpp"

namespace cbl::master {

FockState::FockState(std::size_t dim) : dim_(dim), rho_(dim * dim) {
  if (dim < 1) throw DimensionError("Fock state needs dim >= 1");
}

FockState FockState::vacuum(std::size_t dim) { return number(dim, 0); }

FockState FockState::number(std::size_t dim, std::size_t n) {
  if (n >= dim) throw DimensionError("number state outside truncation");
  FockState s(dim);
  s(n, n) = 1.0;
  return s;
}

cplx FockState::trace() const {
  cplx t = 0.0;
  for (std::size_t k = 0; k < dim_; ++k) t += (*this)(k, k);
  return t;
}

double FockState::hermiticity_error() const {
  double err = 0.0;
  for (std::size_t m = 0; m < dim_; ++m) {
    for (std::size_t n = m; n < dim_; ++n) {
      err = std::max(err, std::abs((*this)(m, n) - std::conj((*this)(n, m))));
    }
  }
  return err;
}

double FockState::min_diagonal() const {
  double lo = (*this)(0, 0).real();
  for (std::size_t k = 1; k < dim_; ++k) lo = std::min(lo, (*this)(k, k).real());
  return lo;
}

double FockState::top_population() const {
  double top = (*this)(dim_ - 1, dim_ - 1).real();
  if (dim_ >= 2) top += (*this)(dim_ - 2, dim_ - 2).real();
  return top;
}

GeneratorCoefficients generator_coefficients(const SystemParams& p) {
  validate(p);
  const auto dd = drift_diffusion(p);
  const auto res = reservoir_moments(p.noise);
  const auto g = gain_coefficients(atomic_preparation(p.eta), p.drive);
  const double a = p.linear_gain / g.norm;

  GeneratorCoefficients c;
  c.g_up = a * g.gain + p.kappa * res.intensity;
  c.g_down = a * g.loss + p.kappa * (res.intensity + 1.0);
  c.coupling = dd.coupling;
  // The Hamiltonian adds coupling to d<a^2>/dt; the dissipator removes g_corr.
  // Their difference must equal the anomalous noise strength <f f>.
  c.g_corr = dd.coupling - dd.noise_anomalous;
  return c;
}

Generator::Generator(const GeneratorCoefficients& c, std::size_t dim) : c_(c), dim_(dim) {
  if (dim < 2) throw DimensionError("generator needs dim >= 2, got " + std::to_string(dim));
  sqrt_.resize(dim + 2);
  for (std::size_t k = 0; k < sqrt_.size(); ++k) sqrt_[k] = std::sqrt(static_cast<double>(k));
}

Generator build_generator(const SystemParams& p, std::size_t dim) {
  return Generator(generator_coefficients(p), dim);
}

namespace {

// Square matrix view used by the generator kernel for both complex states and
// the real-valued fast path (all generator coefficients are real).
template <typename T>
struct Grid {
  std::size_t d;
  T* v;
  T& operator()(std::size_t m, std::size_t n) const { return v[m * d + n]; }
};

template <typename T>
void apply_kernel(const GeneratorCoefficients& c, std::span<const double> sq, Grid<const T> rho,
                  Grid<T> out, bool even_only) {
  const std::size_t d = rho.d;
  const double up = c.g_up;
  const double down = c.g_down;
  const double h = 0.5 * c.coupling;
  const double corr = 0.5 * c.g_corr;
  // (a a^dagger)_kk on the truncated basis.
  auto aad = [d](std::size_t k) { return k + 1 < d ? static_cast<double>(k + 1) : 0.0; };

  // Every term shifts m + n by an even amount, so with even_only the odd
  // elements are left untouched (they must be zero).
  const std::size_t stride = even_only ? 2 : 1;
  for (std::size_t m = 0; m < d; ++m) {
    for (std::size_t n = even_only ? m % 2 : 0; n < d; n += stride) {
      const double fm = static_cast<double>(m);
      const double fn = static_cast<double>(n);
      T acc = -(0.5 * up * (aad(m) + aad(n)) + 0.5 * down * (fm + fn)) * rho(m, n);

      if (m >= 1 && n >= 1) acc += up * sq[m] * sq[n] * rho(m - 1, n - 1);
      if (m + 1 < d && n + 1 < d) acc += down * sq[m + 1] * sq[n + 1] * rho(m + 1, n + 1);

      // Raising/lowering by two on either side.
      const T left_up = m >= 2 ? sq[m] * sq[m - 1] * rho(m - 2, n) : T{};         // a+^2 rho
      const T right_up = n + 2 < d ? sq[n + 1] * sq[n + 2] * rho(m, n + 2) : T{};  // rho a+^2
      const T left_dn = m + 2 < d ? sq[m + 1] * sq[m + 2] * rho(m + 2, n) : T{};   // a^2 rho
      const T right_dn = n >= 2 ? sq[n] * sq[n - 1] * rho(m, n - 2) : T{};         // rho a^2

      acc += h * (left_up - right_up - left_dn + right_dn);
      acc -= corr * (left_up + right_up + left_dn + right_dn);
      if (m >= 1 && n + 1 < d) acc += 2.0 * corr * sq[m] * sq[n + 1] * rho(m - 1, n + 1);
      if (m + 1 < d && n >= 1) acc += 2.0 * corr * sq[m + 1] * sq[n] * rho(m + 1, n - 1);

      out(m, n) = acc;
    }
  }
}

}  // namespace

void Generator::apply(const FockState& rho, FockState& out) const {
  if (rho.dim() != dim_ || out.dim() != dim_) throw DimensionError("dimension mismatch");
  apply(rho.data(), out.data());
}

void Generator::apply(std::span<const cplx> rho, std::span<cplx> out) const {
  if (rho.size() != dim_ * dim_ || out.size() != dim_ * dim_) {
    throw DimensionError("dimension mismatch");
  }
  apply_kernel<cplx>(c_, sqrt_, Grid<const cplx>{dim_, rho.data()}, Grid<cplx>{dim_, out.data()},
                    false);
}

void Generator::apply(std::span<const double> rho, std::span<double> out, bool even_only) const {
  if (rho.size() != dim_ * dim_ || out.size() != dim_ * dim_) {
    throw DimensionError("dimension mismatch");
  }
  apply_kernel<double>(c_, sqrt_, Grid<const double>{dim_, rho.data()},
                       Grid<double>{dim_, out.data()}, even_only);
}

FockState Generator::apply(const FockState& rho) const {
  FockState out(dim_);
  apply(rho, out);
  return out;
}

double Generator::fastest_rate() const {
  const std::size_t d = dim_;
  const auto& sq = sqrt_;
  const double up = std::fabs(c_.g_up);
  const double down = std::fabs(c_.g_down);
  const double h = 0.5 * std::fabs(c_.coupling);
  const double corr = 0.5 * std::fabs(c_.g_corr);
  auto aad = [d](std::size_t k) { return k + 1 < d ? static_cast<double>(k + 1) : 0.0; };

  double bound = 0.0;
  for (std::size_t m = 0; m < d; ++m) {
    for (std::size_t n = 0; n < d; ++n) {
      const double fm = static_cast<double>(m);
      const double fn = static_cast<double>(n);
      double row = 0.5 * up * (aad(m) + aad(n)) + 0.5 * down * (fm + fn);
      if (m >= 1 && n >= 1) row += up * sq[m] * sq[n];
      if (m + 1 < d && n + 1 < d) row += down * sq[m + 1] * sq[n + 1];
      const double lu = m >= 2 ? sq[m] * sq[m - 1] : 0.0;
      const double ru = n + 2 < d ? sq[n + 1] * sq[n + 2] : 0.0;
      const double ld = m + 2 < d ? sq[m + 1] * sq[m + 2] : 0.0;
      const double rd = n >= 2 ? sq[n] * sq[n - 1] : 0.0;
      row += (h + corr) * (lu + ru + ld + rd);
      if (m >= 1 && n + 1 < d) row += 2.0 * corr * sq[m] * sq[n + 1];
      if (m + 1 < d && n >= 1) row += 2.0 * corr * sq[m + 1] * sq[n];
      bound = std::max(bound, row);
    }
  }
  return bound;
}

namespace {

// Reusable RK4 workspace over cplx or, for real states, double.
template <typename Scalar>
class Stepper {
 public:
  explicit Stepper(const Generator& gen, bool even_only = false)
      : gen_(gen), even_only_(even_only), len_(gen.dim() * gen.dim()), k1_(len_), k2_(len_), k3_(len_), k4_(len_), tmp_(len_) {}

  void step(std::span<Scalar> x, double dt) {
    eval(x, k1_);
    for (std::size_t i = 0; i < len_; ++i) tmp_[i] = x[i] + 0.5 * dt * k1_[i];
    eval(tmp_, k2_);
    for (std::size_t i = 0; i < len_; ++i) tmp_[i] = x[i] + 0.5 * dt * k2_[i];
    eval(tmp_, k3_);
    for (std::size_t i = 0; i < len_; ++i) tmp_[i] = x[i] + dt * k3_[i];
    eval(tmp_, k4_);
    for (std::size_t i = 0; i < len_; ++i) {
      x[i] += dt / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
    }
  }

  void run(std::span<Scalar> x, double t_span, double dt) {
    if (t_span <= 0.0) return;
    const auto full = static_cast<std::size_t>(std::floor(t_span / dt));
    for (std::size_t i = 0; i < full; ++i) step(x, dt);
    const double rest = t_span - static_cast<double>(full) * dt;
    if (rest > 1e-12 * std::max(1.0, t_span)) step(x, rest);
  }

 private:
  void eval(std::span<const Scalar> in, std::vector<Scalar>& out) {
    if constexpr (std::is_same_v<Scalar, double>) {
      gen_.apply(in, std::span<double>(out), even_only_);
    } else {
      gen_.apply(in, std::span<cplx>(out));
    }
  }

  const Generator& gen_;
  bool even_only_;
  std::size_t len_;
  std::vector<Scalar> k1_, k2_, k3_, k4_, tmp_;
};

void check_dt(const Generator& gen, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw StepSizeError("dt must be positive");
  const double r = gen.fastest_rate() * dt;
  if (r >= kStepMargin) {
    throw StepSizeError("dt * fastest rate = " + std::to_string(r) + " exceeds " +
                        std::to_string(kStepMargin));
  }
}

}  // namespace

FockState evolve(const FockState& state, const Generator& gen, double t_end, double dt) {
  if (state.dim() != gen.dim()) throw DimensionError("state and generator dimensions differ");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw DomainError("t_end must be >= 0");
  FockState rho = state;
  if (t_end == 0.0) return rho;
  check_dt(gen, dt);
  Stepper<cplx>(gen).run(rho.data(), t_end, dt);
  if (rho.top_population() > kLeakTolerance) {
    throw TruncationError("population " + std::to_string(rho.top_population()) +
                          " in the top two Fock levels of dim " + std::to_string(rho.dim()));
  }
  return rho;
}

Moments moments_from_state(const FockState& s) {
  Moments mo;
  const std::size_t d = s.dim();
  for (std::size_t m = 0; m < d; ++m) {
    mo.n += static_cast<double>(m) * s(m, m).real();
    if (m + 1 < d) mo.mean += std::sqrt(static_cast<double>(m + 1)) * s(m + 1, m);
    if (m + 2 < d) {
      mo.a_sq += std::sqrt(static_cast<double>((m + 1) * (m + 2))) * s(m + 2, m);
    }
  }
  return mo;
}

SteadyResult steady_state(const SystemParams& p, std::size_t dim, const SteadyOptions& opt) {
  const auto dd = require_below_threshold(drift_diffusion(p));
  const auto gen = build_generator(p, dim);
  if (!(opt.step_fraction > 0.0 && opt.step_fraction < 1.0)) {
    throw StepSizeError("step_fraction must lie in (0, 1)");
  }
  const double dt = opt.step_fraction * kStepMargin / gen.fastest_rate();
  const double relax = 1.0 / std::min(dd.rate_plus, dd.rate_minus);

  // Starting from the vacuum with real coefficients the matrix stays real and
  // only elements with m + n even are populated.
  std::vector<double> rho(dim * dim, 0.0);
  rho[0] = 1.0;
  auto trace = [&] {
    double t = 0.0;
    for (std::size_t k = 0; k < dim; ++k) t += rho[k * dim + k];
    return t;
  };
  auto asymmetry = [&] {
    double err = 0.0;
    for (std::size_t m = 0; m < dim; ++m) {
      for (std::size_t n = m + 1; n < dim; ++n) {
        err = std::max(err, std::fabs(rho[m * dim + n] - rho[n * dim + m]));
      }
    }
    return err;
  };
  auto snapshot = [&] {
    FockState s(dim);
    std::copy(rho.begin(), rho.end(), s.data().begin());
    return s;
  };

  SteadyResult res{FockState::vacuum(dim), {}, 0.0, 0.0, 0.0, 0.0};
  Stepper<double> stepper(gen, true);
  Moments prev = moments_from_state(res.state);
  while (res.time < opt.max_relaxations * relax) {
    stepper.run(rho, relax, dt);
    res.time += relax;
    res.max_trace_drift = std::max(res.max_trace_drift, std::fabs(trace() - 1.0));
    res.max_hermiticity_error = std::max(res.max_hermiticity_error, asymmetry());
    res.state = snapshot();
    const auto cur = moments_from_state(res.state);
    const double change = std::max({std::abs(cur.a_sq - prev.a_sq), std::abs(cur.n - prev.n),
                                    std::abs(cur.mean - prev.mean)});
    prev = cur;
    if (change < opt.tolerance) {
      res.moments = cur;
      res.leak = res.state.top_population();
      return res;
    }
  }
  throw ConvergenceError("no fixed point after " + std::to_string(res.time) + " time units");
}

namespace {

ScanRow scan_row(std::size_t d, const SteadyResult& st) {
  return {d,       st.moments.quad_plus(), st.moments.quad_minus(), st.moments.n,
          st.leak, st.max_trace_drift,     st.max_hermiticity_error};
}

}  // namespace

ScanResult truncation_scan(const SystemParams& p, std::span<const std::size_t> dims,
                           const SteadyOptions& opt) {
  if (dims.empty()) throw DimensionError("empty dimension list");
  for (std::size_t i = 1; i < dims.size(); ++i) {
    if (dims[i] <= dims[i - 1]) throw DimensionError("dimensions must increase");
  }
  ScanResult out;
  for (const auto d : dims) {
    const auto st = steady_state(p, d, opt);
    out.rows.push_back(scan_row(d, st));
  }
  for (std::size_t i = 0; i + 1 < out.rows.size(); ++i) {
    const auto& a = out.rows[i];
    const auto& b = out.rows[i + 1];
    if (std::fabs(a.quad_plus - b.quad_plus) < kScanTolerance &&
        std::fabs(a.quad_minus - b.quad_minus) < kScanTolerance) {
      out.converged_dim = a.dim;
      break;
    }
  }
  if (out.rows.back().leak > kLeakTolerance) {
    throw ConvergenceError("largest truncation " + std::to_string(out.rows.back().dim) +
                           " still leaks " + std::to_string(out.rows.back().leak));
  }
  return out;
}

ScanResult converge_truncation(const SystemParams& p, std::size_t first_dim, std::size_t dim_step,
                               std::size_t max_dim, const SteadyOptions& opt) {
  if (first_dim < 2 || dim_step == 0) throw DimensionError("need first_dim >= 2 and dim_step > 0");
  ScanResult out;
  for (std::size_t d = first_dim; d <= max_dim; d += dim_step) {
    const auto st = steady_state(p, d, opt);
    out.rows.push_back(scan_row(d, st));
    if (out.rows.size() >= 2) {
      const auto& a = out.rows[out.rows.size() - 2];
      const auto& b = out.rows.back();
      if (std::fabs(a.quad_plus - b.quad_plus) < kScanTolerance &&
          std::fabs(a.quad_minus - b.quad_minus) < kScanTolerance && b.leak <= kLeakTolerance) {
        out.converged_dim = a.dim;
        return out;
      }
    }
  }
  throw ConvergenceError("truncation not converged up to dim " + std::to_string(max_dim));
}

}  // namespace cbl::master
