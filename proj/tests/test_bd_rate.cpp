#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "random_channels.hpp"
#include "sbc/bd_rate.hpp"
#include "sbc/error.hpp"
#include "sbc/gauss_hermite.hpp"

using namespace sbc;

TEST_CASE("Gauss-Hermite rule integrates polynomials exactly") {
  for (int n : {1, 5, 64, 300}) {
    const auto rule = gauss_hermite(n);
    double m0 = 0, m2 = 0, m4 = 0;
    for (int k = 0; k < n; ++k) {
      const double x = rule.nodes[static_cast<std::size_t>(k)];
      const double w = rule.weights[static_cast<std::size_t>(k)];
      m0 += w;
      m2 += w * x * x;
      m4 += w * x * x * x * x;
    }
    const double sqrt_pi = std::sqrt(oracle::pi);
    CHECK(m0 == doctest::Approx(sqrt_pi).epsilon(1e-13));
    if (n >= 2) CHECK(m2 == doctest::Approx(sqrt_pi / 2).epsilon(1e-12));
    if (n >= 3) CHECK(m4 == doctest::Approx(3 * sqrt_pi / 4).epsilon(1e-12));
  }
}

TEST_CASE("MRC statistics") {
  const ChannelTriple unit({1, 0}, {1, 0}, {1, 0});
  auto s = mrc_statistics({1.0, 1.0, 1}, unit);
  CHECK(s.gain == doctest::Approx(1.0));
  CHECK(s.noise_var == doctest::Approx(1.0));
  const auto d = mrc_statistics({1.0, 1.0, 2}, unit);
  CHECK(d.gain == doctest::Approx(2 * s.gain));
  CHECK(d.noise_var == doctest::Approx(2 * s.noise_var));

  const Complex h2 = std::sqrt(1e-10) * Complex(-0.0139, -0.4378);
  const Complex h3 = std::sqrt(0.3905) * Complex(-0.5246, -1.0546);
  const double expect = 128 * 0.05 * std::norm(h2) * std::norm(h3) / 1e-13;
  s = mrc_statistics(testing_support::default_system(), ChannelTriple({1e-5, 0}, h2, h3));
  CHECK(s.gain == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("mutual information limits") {
  const auto c = Constellation::mask(4, 0.3);
  CHECK(mi_quadrature(c, {0.0, 1.0}).value_bits == 0.0);
  CHECK(mi_quadrature(Constellation::from_points(std::vector<Complex>(4)), {5.0, 5.0}).value_bits ==
        0.0);
  // Effective SNR g^2 dmin^2 / var = 1e4 per pairwise distance.
  for (int m : {2, 4, 8}) {
    const auto k = Constellation::mpsk(m, 1.0, 0.0);
    const double dmin = 2.0 * std::sin(kPi / m);
    const double g = 100.0 / dmin;
    const auto est = mi_quadrature(k, MrcStatistics::with_noise_override(g, 1.0));
    CHECK(std::abs(est.value_bits - std::log2(m)) <= 1e-3);
  }
}

TEST_CASE("binary antipodal MI matches a one-dimensional integral") {
  for (double snr : {0.1, 1.0, 4.0, 20.0}) {
    const double alpha = 0.9;
    const auto c = Constellation::mpsk(2, alpha, 0.0);
    const double g = std::sqrt(snr);
    const auto est = mi_quadrature(c, MrcStatistics::with_noise_override(g, 1.0));
    CHECK(est.value_bits == doctest::Approx(oracle::bpsk_mi(g * alpha, 1.0)).epsilon(1e-8));
  }
}

TEST_CASE("binary antipodal MI matches an independent Monte Carlo") {
  const auto c = Constellation::mpsk(2, 0.9, 0.0);
  const double g = 1.3;
  const auto q = mi_quadrature(c, MrcStatistics::with_noise_override(g, 1.0));
  const auto mc = oracle::mi_monte_carlo({0.9, -0.9}, g, 1.0, 2000000, 7);
  CHECK(std::abs(q.value_bits - mc.mean) <= 3.0 * mc.std_error);
}

TEST_CASE("MI is invariant to a global rotation") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  for (const auto& c : {Constellation::mask(4, 0.0), Constellation::mpsk(8, 0.7, 0.1)}) {
    const MrcStatistics s{3.0, 3.0};
    const double base = mi_quadrature(c, s).value_bits;
    for (int i = 0; i < 5; ++i) {
      CHECK(std::abs(mi_quadrature(c.rotated(u(rng)), s).value_bits - base) <= 1e-6);
    }
  }
}

TEST_CASE("MI stays within [0, log2 M] and grows with L") {
  const ChannelTriple ch({1e-5, 0}, {3e-6, 1e-6}, {0.5, 0.2});
  for (const auto& c : {Constellation::mask(4, 1.0), Constellation::mpsk(4, 0.9, 0.2)}) {
    double prev = -1.0;
    for (int L = 1; L <= 1024; L *= 2) {
      const double v = bd_rate({0.05, 1e-13, L}, ch, c).value_bits;
      CHECK(v >= -1e-9);
      CHECK(v <= 2.0 + 1e-9);
      CHECK(v >= prev - 1e-6);
      prev = v;
    }
  }
}

TEST_CASE("quadrature reports non-convergence") {
  const auto c = Constellation::mask(8, 0.0);
  try {
    mi_quadrature(c, {2.0e3, 2.0e3}, 1e-15, {4, 6});
    FAIL("expected PrecisionError");
  } catch (const PrecisionError& e) {
    CHECK(e.code() == ErrorCode::precision);
    CHECK(std::isfinite(e.estimate()));
  }
}

TEST_CASE("Monte Carlo MI") {
  const auto c = Constellation::mask(4, 0.5);
  const MrcStatistics s{2.0, 2.0};
  const auto a = mi_monte_carlo(c, s, 200000, 99);
  const auto b = mi_monte_carlo(c, s, 200000, 99);
  CHECK(a.value_bits == b.value_bits);
  CHECK(a.std_error_bits == b.std_error_bits);
  CHECK(a.samples == 200000);

  const auto q = mi_quadrature(c, s);
  CHECK(std::abs(a.value_bits - q.value_bits) <= 3.0 * a.std_error_bits);

  const auto zero = mi_monte_carlo(c, {0.0, 1.0}, 10000, 1);
  CHECK(zero.value_bits == 0.0);
  CHECK_THROWS_AS(mi_monte_carlo(c, s, 9999, 1), Error);
}
