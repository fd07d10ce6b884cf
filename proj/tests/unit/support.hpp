#pragma once
#include <cmath>
#include <cstdint>
#include <random>

#include "cbl/model.hpp"

namespace test {

inline bool close_rel(double a, double b, double rel) {
  return std::fabs(a - b) <= rel * std::max({1.0, std::fabs(a), std::fabs(b)});
}

// Uniform draw over the whole valid parameter box; may land above threshold.
struct ParamSampler {
  std::mt19937_64 rng;
  explicit ParamSampler(std::uint64_t seed) : rng(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<>(lo, hi)(rng); }

  cbl::SystemParams draw() {
    cbl::SystemParams p;
    p.linear_gain = std::pow(10.0, uniform(-2.0, 2.0));
    p.kappa = uniform(0.01, 1.0);
    p.eta = uniform(-1.0, 1.0);
    p.drive = uniform(0.0, 5.0);
    p.noise = uniform(0.0, 3.0);
    return p;
  }

  cbl::SystemParams draw_below_threshold() {
    for (;;) {
      auto p = draw();
      if (cbl::check_threshold(p)) return p;
    }
  }
};

}  // namespace test
