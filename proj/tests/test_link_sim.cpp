#include <cmath>

#include "doctest.h"
#include "sbc/error.hpp"
#include "sbc/link_sim.hpp"

using namespace sbc;

namespace {

// Per-sample backscatter SNR P|h2 h3|^2 / s2 = 0.01, so the sum of |s(n)|^2
// over a span barely perturbs the post-MRC variance.
const SystemParams kSys{1.0, 1.0, 128};
const ChannelTriple kCh({0.8, 0.3}, {0.1, 0.0}, {0.0, 1.0});

}  // namespace

TEST_CASE("noiseless received signal without backscatter") {
  const SystemParams quiet{0.5, 1e-300, 4};
  const auto c = Constellation::from_points(std::vector<Complex>(2));
  const auto b = simulate_block(quiet, kCh, c, 10, {1, 0});
  REQUIRE(b.received.size() == 40);
  REQUIRE(b.pt_symbols.size() == 40);
  for (std::size_t n = 0; n < b.received.size(); ++n) {
    const Complex expect = std::sqrt(0.5) * kCh.h1() * b.pt_symbols[n];
    CHECK(std::abs(b.received[n] - expect) <= 1e-12 * std::abs(expect));
  }
}

TEST_CASE("received power matches the channel model") {
  const auto c = Constellation::mask(4, 0.4);
  const auto b = simulate_block(kSys, kCh, c, 10000, {2, 0});
  double expect = kSys.noise_w;
  for (const Complex& g : c.points()) {
    expect += kSys.power_w * std::norm(kCh.h1() + kCh.h2() * kCh.h3() * g) / c.order();
  }
  double power = 0;
  for (const Complex& y : b.received) power += std::norm(y);
  power /= static_cast<double>(b.received.size());
  CHECK(std::abs(power / expect - 1.0) <= 0.01);
}

TEST_CASE("fixed RngSpec reproduces the block") {
  const auto c = Constellation::mpsk(4, 0.9, 0.1);
  const auto a = simulate_block(kSys, kCh, c, 50, {7, 3});
  const auto b = simulate_block(kSys, kCh, c, 50, {7, 3});
  CHECK(a.received == b.received);
  CHECK(a.bd_symbol_indices == b.bd_symbol_indices);
  const auto other = simulate_block(kSys, kCh, c, 50, {7, 4});
  CHECK(other.received != a.received);
}

TEST_CASE("noiseless MRC output") {
  const SystemParams quiet{0.5, 1e-3, 16};
  const auto c = Constellation::mask(4, 1.0);
  auto b = simulate_block(quiet, kCh, c, 20, {3, 0});
  // Rebuild y(n) without the noise term.
  for (std::size_t n = 0; n < b.received.size(); ++n) {
    const Complex g = c[static_cast<std::size_t>(b.bd_symbol_indices[n / 16])];
    b.received[n] = std::sqrt(quiet.power_w) * (kCh.h1() + kCh.h2() * kCh.h3() * g) * b.pt_symbols[n];
  }
  const auto& y = sic_mrc_receiver(b, quiet, kCh);
  REQUIRE(y.size() == 20);
  const double per_sample =
      quiet.power_w * std::norm(kCh.h2()) * std::norm(kCh.h3()) / quiet.noise_w;
  for (std::size_t m = 0; m < y.size(); ++m) {
    // With s(n) drawn from CN(0, 1), sum |s|^2 replaces L in g = L P|h2 h3|^2 / s2.
    double energy = 0;
    for (std::size_t n = m * 16; n < (m + 1) * 16; ++n) energy += std::norm(b.pt_symbols[n]);
    const Complex expect = per_sample * energy * c[static_cast<std::size_t>(b.bd_symbol_indices[m])];
    CHECK(std::abs(y[m] - expect) <= 1e-10 * std::max(1.0, std::abs(expect)));
  }
  // The residual carries no direct-link component.
  for (std::size_t n = 0; n < b.residual.size(); ++n) {
    const Complex back = std::sqrt(quiet.power_w) * kCh.h2() * kCh.h3() *
                         c[static_cast<std::size_t>(b.bd_symbol_indices[n / 16])] *
                         b.pt_symbols[n];
    CHECK(std::abs(b.residual[n] - back) <= 1e-12);
  }
}

TEST_CASE("conditional MRC moments") {
  const auto c = Constellation::mask(2, 0.0);
  const auto stats = mrc_statistics(kSys, kCh);
  const auto mom = simulate_mrc_moments(kSys, kCh, c, 100000, {11, 0});
  for (std::size_t m = 0; m < 2; ++m) {
    REQUIRE(mom.count[m] > 1000);
    const double se = std::sqrt(mom.variance[m] / static_cast<double>(mom.count[m]));
    CHECK(std::abs(mom.mean[m] - stats.gain * c[m]) <= 4.0 * se);
    CHECK(std::abs(mom.variance[m] / stats.noise_var - 1.0) <= 0.03);
  }
}

TEST_CASE("empirical BD mutual information") {
  const auto mask = Constellation::mask(2, 0.3);
  const auto psk = Constellation::mpsk(4, 0.9, 0.2);
  for (const auto* c : {&mask, &psk}) {
    const double q = bd_rate(kSys, kCh, *c).value_bits;
    const auto e = empirical_bd_mi(kSys, kCh, *c, 100000, {5, 0});
    CHECK(std::abs(e.value_bits - q) <= 3.0 * e.std_error_bits);
  }
  const ChannelTriple dark({0.8, 0.3}, {0.0, 0.0}, {0.0, 1.0});
  const auto z = empirical_bd_mi(kSys, dark, mask, 10000, {5, 0});
  CHECK(std::abs(z.value_bits) <= 3.0 * z.std_error_bits + 1e-15);
  CHECK_THROWS_AS(empirical_bd_mi(kSys, kCh, mask, 100, {5, 0}), Error);
}

TEST_CASE("spread warning") {
  CHECK_FALSE(spread_warning({1, 1, 16}).has_value());
  CHECK(spread_warning({1, 1, 8}).has_value());
}
