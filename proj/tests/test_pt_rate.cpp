#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "random_channels.hpp"
#include "sbc/error.hpp"
#include "sbc/phase_opt.hpp"
#include "sbc/pt_rate.hpp"

using namespace sbc;
using testing_support::ChannelDraw;
using testing_support::default_system;

TEST_CASE("rate without the BD") {
  const SystemParams unit{1.0, 1.0, 1};
  CHECK(pt_rate_no_bd(unit, ChannelTriple({1, 0}, {0, 0}, {0, 0})) == doctest::Approx(1.0));
  CHECK(pt_rate_no_bd(unit, ChannelTriple({0, 0}, {1, 0}, {1, 0})) == 0.0);

  const SystemParams sys = default_system();
  const Complex h1 = std::sqrt(1e-10) * Complex(0.3421, -0.4988);
  const double expect = std::log2(1.0 + 0.05 * std::norm(h1) / 1e-13);
  CHECK(pt_rate_no_bd(sys, ChannelTriple(h1, {1, 0}, {1, 0})) ==
        doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("finite-order PT rate") {
  const SystemParams sys = default_system();
  const ChannelTriple ch({3e-6, 1e-6}, {-1e-6, 2e-6}, {0.4, -0.1});

  SUBCASE("all-zero alphabet equals the no-BD rate") {
    const auto z = Constellation::from_points(std::vector<Complex>(4));
    CHECK(pt_rate_finite(sys, ch, z) == doctest::Approx(pt_rate_no_bd(sys, ch)).epsilon(1e-15));
    CHECK(rate_gain(sys, ch, z).gain == 0.0);
  }
  SUBCASE("binary MASK aligned with the direct link") {
    const double phi = wrap_phase(-composite_phase(ch));
    const double snr = sys.snr_scale();
    const double a1 = ch.amp1(), b = ch.backscatter_amp();
    const double expect =
        0.5 * (std::log2(1 + snr * a1 * a1) + std::log2(1 + snr * (a1 + b) * (a1 + b)));
    CHECK(pt_rate_finite(sys, ch, Constellation::mask(2, phi)) ==
          doctest::Approx(expect).epsilon(1e-13));
  }
  SUBCASE("cosine expansion agrees") {
    ChannelDraw draw(11);
    for (int i = 0; i < 50; ++i) {
      const ChannelTriple c = draw.triple();
      for (int m : {2, 3, 8}) {
        const double phi = draw.uniform(0.0, kTwoPi / m);
        for (const Constellation& k :
             {Constellation::mask(m, draw.phase()), Constellation::mpsk(m, 0.9, phi)}) {
          CHECK(pt_rate_cosine_form(sys, c, k) ==
                doctest::Approx(pt_rate_finite(sys, c, k)).epsilon(1e-11));
        }
      }
    }
  }
}

TEST_CASE("rate gain signs for MASK") {
  const SystemParams sys = default_system();
  ChannelDraw draw(5);
  for (int i = 0; i < 20; ++i) {
    const double b = draw.amplitude();
    const double theta0 = draw.phase();
    const auto ch = ChannelTriple::from_amplitudes(2.0 * b, b, 1.0, theta0);
    for (int m : {2, 4, 8}) {
      CHECK(rate_gain(sys, ch, Constellation::mask(m, wrap_phase(kPi - theta0))).gain < 0.0);
      CHECK(rate_gain(sys, ch, Constellation::mask(m, wrap_phase(-theta0))).gain > 0.0);
    }
  }
}

TEST_CASE("infinite-order MASK closed form against quadrature") {
  const SystemParams sys = default_system();
  ChannelDraw draw(21);
  for (int i = 0; i < 100; ++i) {
    const double a1 = draw.amplitude();
    const double b = draw.amplitude();
    const double psi = draw.phase();
    const auto ch = ChannelTriple::from_amplitudes(a1, b, 1.0, 0.3);
    const double phi0 = wrap_phase(psi - 0.3);
    const double got = pt_rate_ask_infinite(sys, ch, phi0);
    const double ref = oracle::ask_integral(sys.snr_scale(), a1, b, psi);
    CHECK(std::abs(got - ref) <= 1e-8 * std::abs(ref));
  }
}

TEST_CASE("infinite-order MASK edge cases") {
  const SystemParams sys = default_system();
  SUBCASE("no direct link") {
    const ChannelTriple ch({0, 0}, {2e-5, 0}, {1, 0});
    const double got = pt_rate_ask_infinite(sys, ch, 0.7);
    const double ref = oracle::ask_integral(sys.snr_scale(), 0.0, 2e-5, 0.0);
    CHECK(got == doctest::Approx(ref).epsilon(1e-9));
  }
  SUBCASE("aligned beats opposed") {
    const auto ch = ChannelTriple::from_amplitudes(3e-5, 2e-5, 1.0, 1.0);
    CHECK(pt_rate_ask_infinite(sys, ch, wrap_phase(-1.0)) >
          pt_rate_ask_infinite(sys, ch, wrap_phase(kPi - 1.0)));
  }
  SUBCASE("exact cancellation inside the interval") {
    const auto ch = ChannelTriple::from_amplitudes(1e-5, 2e-5, 1.0, kPi);
    const double ref = oracle::ask_integral(sys.snr_scale(), 1e-5, 2e-5, kPi);
    CHECK(pt_rate_ask_infinite(sys, ch, 0.0) == doctest::Approx(ref).epsilon(1e-8));
  }
  SUBCASE("no backscatter is an error") {
    try {
      pt_rate_ask_infinite(sys, ChannelTriple({1e-5, 0}, {0, 0}, {1, 0}), 0.0);
      FAIL("expected degenerate_backscatter");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::degenerate_backscatter);
    }
  }
}

TEST_CASE("infinite-order MPSK closed form") {
  const SystemParams sys = default_system();
  const double snr = sys.snr_scale();
  SUBCASE("alpha0 = 0") {
    const auto ch = ChannelTriple::from_amplitudes(4e-6, 1e-5, 1.0, 0.2);
    CHECK(pt_rate_psk_infinite(sys, ch, 0.0) == doctest::Approx(pt_rate_no_bd(sys, ch)));
  }
  SUBCASE("no direct link") {
    const ChannelTriple ch({0, 0}, {1e-5, 0}, {1, 0});
    CHECK(pt_rate_psk_infinite(sys, ch, 0.8) ==
          doctest::Approx(std::log2(1 + snr * std::pow(0.8e-5, 2))));
  }
  SUBCASE("dense phase average") {
    ChannelDraw draw(31);
    for (int i = 0; i < 20; ++i) {
      const double a1 = draw.amplitude(), b = draw.amplitude(), alpha = draw.uniform(0.05, 1.0);
      const auto ch = ChannelTriple::from_amplitudes(a1, b, 1.0, draw.phase());
      CHECK(std::abs(pt_rate_psk_infinite(sys, ch, alpha) -
                     oracle::psk_phase_average(snr, a1, b, alpha, 100000)) <= 1e-4);
    }
  }
}

TEST_CASE("maximum rates match the finite rate at the closed-form phase") {
  const SystemParams sys = default_system();
  ChannelDraw draw(41);
  for (int i = 0; i < 30; ++i) {
    const ChannelTriple ch = draw.triple();
    const double theta0 = composite_phase(ch);
    for (int m : {2, 3, 4, 8, 16}) {
      const double ask = pt_rate_finite(
          sys, ch, Constellation::mask(m, optimal_phase_ask(theta0).phase_rad));
      CHECK(max_pt_rate_ask(sys, ch, m) == doctest::Approx(ask).epsilon(1e-12));
      const double psk = pt_rate_finite(
          sys, ch, Constellation::mpsk(m, 0.9, optimal_phase_psk(theta0, m).phase_rad));
      CHECK(max_pt_rate_psk(sys, ch, m, 0.9) == doctest::Approx(psk).epsilon(1e-12));
    }
  }
  const ChannelTriple none({1e-5, 0}, {0, 0}, {1, 0});
  CHECK(max_pt_rate_ask(sys, none, 2) == doctest::Approx(pt_rate_no_bd(sys, none)));
  const ChannelTriple ch({1e-5, 0}, {2e-5, 1e-5}, {1, 0});
  CHECK(max_pt_rate_psk(sys, ch, 4, 0.0) == doctest::Approx(pt_rate_no_bd(sys, ch)));
}

TEST_CASE("maximum MASK rate grows with the backscatter amplitude") {
  const SystemParams sys = default_system();
  double prev = -1.0;
  for (double b = 1e-7; b < 1e-3; b *= 1.7) {
    const double r = max_pt_rate_ask(sys, ChannelTriple::from_amplitudes(1e-5, b, 1.0, 2.0), 4);
    CHECK(r >= prev);
    prev = r;
  }
}

TEST_CASE("high-order MPSK approaches the infinite-order rate") {
  const SystemParams sys = default_system();
  ChannelDraw draw(51);
  for (int i = 0; i < 20; ++i) {
    const ChannelTriple ch = draw.triple();
    CHECK(std::abs(max_pt_rate_psk(sys, ch, 256, 0.9) - pt_rate_psk_infinite(sys, ch, 0.9)) <=
          1e-3);
  }
}

TEST_CASE("stable infinite-order MPSK gain") {
  const SystemParams sys = default_system();
  ChannelDraw draw(71);
  for (int i = 0; i < 200; ++i) {
    const ChannelTriple ch = draw.triple();
    const double alpha = draw.uniform(0.01, 1.0);
    const double gain = psk_infinite_rate_gain(sys, ch, alpha);
    // extended-precision reference of the plain difference
    const long double snr = sys.snr_scale();
    const long double x = snr * ch.amp1() * ch.amp1();
    const long double y = snr * std::pow(static_cast<long double>(ch.backscatter_amp()) * alpha, 2);
    const long double d1 = 1.0L + x + y;
    const long double d2 = 2.0L * std::sqrt(x * y);
    const long double ref =
        std::log2((d1 + std::sqrt((d1 - d2) * (d1 + d2))) / 2.0L) - std::log2(1.0L + x);
    CHECK(gain > 0.0);
    CHECK(std::abs(gain - static_cast<double>(ref)) <= 1e-13 + 1e-8 * gain);
  }
  const ChannelTriple ch({1e-5, 0}, {0, 0}, {1, 0});
  CHECK(psk_infinite_rate_gain(sys, ch, 0.5) == 0.0);
}
