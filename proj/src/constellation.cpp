#include "sbc/constellation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sbc/error.hpp"

namespace sbc {

namespace {

// Passivity check with a little room for rounding in explicit point lists.
constexpr double kUnitDiskSlack = 1e-12;

void require_order(int order) {
  if (order < 2) {
    throw Error(ErrorCode::order,
                "modulation order must be >= 2, got " + std::to_string(order));
  }
}

}  // namespace

Reflection reflection_from_impedance(const Impedance& antenna,
                                     const Impedance& load) {
  if (!(antenna.resistance_ohm > 0.0)) {
    throw Error(ErrorCode::invalid_argument,
                "antenna resistance must be > 0");
  }
  if (load.resistance_ohm < 0.0) {
    throw Error(ErrorCode::passivity_violation,
                "load resistance must be >= 0 for a passive load");
  }
  const Complex za = antenna.value();
  const Complex zm = load.value();
  const Complex den = za + zm;
  if (std::abs(den) == 0.0) {
    throw Error(ErrorCode::singular_impedance, "Za + Zm is zero");
  }
  const Complex gamma = (std::conj(za) - zm) / den;
  const double amp = std::abs(gamma);
  if (amp > 1.0 + kUnitDiskSlack) {
    throw Error(ErrorCode::passivity_violation, "|Gamma| exceeds one");
  }
  return {gamma, amp, wrap_phase(std::arg(gamma))};
}

const char* to_string(ModulationKind kind) {
  switch (kind) {
    case ModulationKind::mask:
      return "mask";
    case ModulationKind::mpsk:
      return "mpsk";
    case ModulationKind::explicit_points:
      return "explicit";
  }
  return "?";
}

Constellation::Constellation(std::vector<Complex> points, ModulationKind kind,
                             double base_phase, double amplitude)
    : points_(std::move(points)),
      kind_(kind),
      base_phase_(base_phase),
      amplitude_(amplitude) {}

Constellation Constellation::mask(int order, double base_phase) {
  require_order(order);
  if (!std::isfinite(base_phase)) {
    throw Error(ErrorCode::invalid_argument, "base phase must be finite");
  }
  const double phi = wrap_phase(base_phase);
  const Complex unit = std::polar(1.0, phi);
  std::vector<Complex> pts;
  pts.reserve(static_cast<std::size_t>(order));
  for (int m = 0; m < order; ++m) {
    pts.push_back(unit * (static_cast<double>(m) / (order - 1)));
  }
  return Constellation(std::move(pts), ModulationKind::mask, phi, 1.0);
}

Constellation Constellation::mpsk(int order, double amplitude,
                                  double base_phase) {
  require_order(order);
  if (!(amplitude > 0.0 && amplitude <= 1.0)) {
    throw Error(ErrorCode::amplitude, "MPSK amplitude must lie in (0, 1]");
  }
  const double sector = kTwoPi / order;
  if (!(base_phase >= 0.0 && base_phase < sector)) {
    throw Error(ErrorCode::base_phase_range,
                "MPSK base phase must lie in [0, 2pi/M)");
  }
  std::vector<Complex> pts;
  pts.reserve(static_cast<std::size_t>(order));
  for (int m = 0; m < order; ++m) {
    pts.push_back(std::polar(amplitude, base_phase + sector * m));
  }
  return Constellation(std::move(pts), ModulationKind::mpsk, base_phase,
                       amplitude);
}

Constellation Constellation::from_points(std::vector<Complex> points) {
  require_order(static_cast<int>(points.size()));
  double max_amp = 0.0;
  for (const Complex& p : points) {
    if (!std::isfinite(p.real()) || !std::isfinite(p.imag())) {
      throw Error(ErrorCode::invalid_argument,
                  "constellation points must be finite");
    }
    max_amp = std::max(max_amp, std::abs(p));
  }
  if (max_amp > 1.0 + kUnitDiskSlack) {
    throw Error(ErrorCode::passivity_violation,
                "constellation point outside the unit disk");
  }
  return Constellation(std::move(points), ModulationKind::explicit_points, 0.0,
                       max_amp);
}

Constellation Constellation::from_impedances(
    const Impedance& antenna, std::span<const Impedance> loads) {
  std::vector<Complex> pts;
  pts.reserve(loads.size());
  for (const Impedance& z : loads) {
    pts.push_back(reflection_from_impedance(antenna, z).gamma);
  }
  return from_points(std::move(pts));
}

Constellation Constellation::rotated(double psi) const {
  const Complex r = std::polar(1.0, psi);
  std::vector<Complex> pts(points_.begin(), points_.end());
  for (Complex& p : pts) p *= r;
  return Constellation(std::move(pts), ModulationKind::explicit_points, 0.0,
                       amplitude_);
}

double avg_power(const Constellation& c) {
  double sum = 0.0;
  for (const Complex& p : c.points()) sum += std::norm(p);
  return sum / c.order();
}

double equal_power_psk_amplitude(int order) {
  require_order(order);
  double sum = 0.0;
  for (int m = 0; m < order; ++m) {
    const double a = static_cast<double>(m) / (order - 1);
    sum += a * a;
  }
  return std::min(1.0, std::sqrt(sum / order));
}

}  // namespace sbc
