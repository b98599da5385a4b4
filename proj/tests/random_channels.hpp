#pragma once

#include <cmath>
#include <random>

#include "sbc/channel.hpp"

namespace testing_support {

// P = 0.05 W over -100 dBm noise.
inline sbc::SystemParams default_system() { return {0.05, 1e-13, 128}; }

// Amplitudes log-uniform on [lo, hi], phases uniform.
struct ChannelDraw {
  std::mt19937_64 rng;
  double lo = 1e-7;
  double hi = 1e-3;

  explicit ChannelDraw(std::uint64_t seed, double lo_ = 1e-7, double hi_ = 1e-3)
      : rng(seed), lo(lo_), hi(hi_) {}

  double amplitude() {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng));
  }
  double phase() { return std::uniform_real_distribution<double>(0.0, sbc::kTwoPi)(rng); }
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

  // |h1| and |h2||h3| each log-uniform; |h3| fixed at 1 so h2 carries the product.
  sbc::ChannelTriple triple() {
    const double a1 = amplitude();
    const double b = amplitude();
    return sbc::ChannelTriple(std::polar(a1, phase()), std::polar(b, phase()),
                              std::polar(1.0, phase()));
  }
};

}  // namespace testing_support
