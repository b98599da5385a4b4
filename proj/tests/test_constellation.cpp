#include <cmath>
#include <vector>

#include "doctest.h"
#include "sbc/constellation.hpp"
#include "sbc/error.hpp"

using namespace sbc;

namespace {

bool near(Complex a, Complex b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

}  // namespace

TEST_CASE("impedance to reflection coefficient") {
  CHECK(std::abs(reflection_from_impedance({50, 0}, {50, 0}).gamma) < 1e-15);
  CHECK(near(reflection_from_impedance({50, 0}, {25, 0}).gamma, {1.0 / 3.0, 0.0}));

  const Complex za{50, 10}, zm{30, -20};
  const Complex expect = (std::conj(za) - zm) / (za + zm);
  const Reflection r = reflection_from_impedance({50, 10}, {30, -20});
  CHECK(near(r.gamma, expect));
  CHECK(r.amplitude <= 1.0);
  CHECK(r.amplitude == doctest::Approx(std::abs(expect)));

  CHECK_THROWS_AS(reflection_from_impedance({0, 0}, {10, 0}), Error);
  CHECK_THROWS_AS(reflection_from_impedance({50, 0}, {-5, 0}), Error);
}

TEST_CASE("MASK points") {
  auto c = Constellation::mask(2, 0.0);
  CHECK(near(c[0], 0.0));
  CHECK(near(c[1], 1.0));
  c = Constellation::mask(4, kPi);
  CHECK(near(c[1], -1.0 / 3.0));
  CHECK(near(c[2], -2.0 / 3.0));
  CHECK(near(c[3], -1.0));
  c = Constellation::mask(3, kPi / 2);
  CHECK(near(c[1], {0.0, 0.5}));
  CHECK(near(c[2], {0.0, 1.0}));
  CHECK(c.kind() == ModulationKind::mask);
  CHECK_THROWS_AS(Constellation::mask(1, 0.0), Error);
}

TEST_CASE("MPSK points") {
  auto c = Constellation::mpsk(2, 0.9, 0.0);
  CHECK(near(c[0], 0.9));
  CHECK(near(c[1], -0.9));
  c = Constellation::mpsk(4, 1.0, 0.0);
  CHECK(near(c[1], {0, 1}));
  CHECK(near(c[2], -1.0));
  CHECK(near(c[3], {0, -1}));
  c = Constellation::mpsk(8, 0.5, kPi / 8);
  for (int k = 0; k < 8; ++k) {
    CHECK(near(c[static_cast<std::size_t>(k)],
               0.5 * Complex(std::cos(kPi / 8 + k * kPi / 4), std::sin(kPi / 8 + k * kPi / 4))));
  }
  try {
    Constellation::mpsk(4, 1.0, kPi / 2);
    FAIL("expected a range error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::base_phase_range);
  }
  try {
    Constellation::mpsk(4, 1.2, 0.0);
    FAIL("expected an amplitude error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::amplitude);
  }
  CHECK_THROWS_AS(Constellation::mpsk(4, 0.0, 0.0), Error);
}

TEST_CASE("average power and the equal-power amplitude") {
  CHECK(avg_power(Constellation::mask(2, 0.3)) == doctest::Approx(0.5));
  CHECK(avg_power(Constellation::mask(3, 0.0)) == doctest::Approx(5.0 / 12.0));
  for (int m : {2, 5, 16}) {
    CHECK(avg_power(Constellation::mpsk(m, 0.7, 0.0)) == doctest::Approx(0.49));
  }
  auto oracle = [](int m) {
    double s = 0;
    for (int i = 0; i < m; ++i) s += std::pow(double(i) / (m - 1), 2);
    return std::sqrt(s / m);
  };
  CHECK(equal_power_psk_amplitude(2) == doctest::Approx(std::sqrt(0.5)));
  CHECK(equal_power_psk_amplitude(3) == doctest::Approx(oracle(3)));
  CHECK(equal_power_psk_amplitude(1 << 16) == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-4));
}

TEST_CASE("explicit constellations") {
  CHECK_THROWS_AS(Constellation::from_points({Complex(1.1, 0), 0.0}), Error);
  CHECK_THROWS_AS(Constellation::from_points({Complex(0.5, 0)}), Error);
  const auto z = Constellation::from_points(std::vector<Complex>(4));
  CHECK(z.order() == 4);
  CHECK(avg_power(z) == 0.0);

  const Impedance za{50, 0};
  const std::vector<Impedance> loads{{50, 0}, {25, 0}, {0, 50}};
  const auto c = Constellation::from_impedances(za, loads);
  CHECK(c.order() == 3);
  CHECK(near(c[1], {1.0 / 3.0, 0.0}));

  const auto r = Constellation::mpsk(4, 0.5, 0.1).rotated(1.0);
  CHECK(r.kind() == ModulationKind::explicit_points);
  CHECK(std::arg(r[0]) == doctest::Approx(1.1));
}

TEST_CASE("every point lies in the unit disk") {
  for (int m = 2; m <= 64; m *= 2) {
    const auto a = Constellation::mask(m, 2.0);
    const auto p = Constellation::mpsk(m, 1.0, 0.0);
    for (const Complex& z : a.points()) CHECK(std::abs(z) <= 1.0 + 1e-15);
    for (const Complex& z : p.points()) CHECK(std::abs(z) <= 1.0 + 1e-15);
  }
}
