#pragma once

#include <span>
#include <vector>

#include "sbc/channel.hpp"

namespace sbc {

// Z = R + jX in ohms.
struct Impedance {
  double resistance_ohm = 0.0;
  double reactance_ohm = 0.0;

  Complex value() const { return {resistance_ohm, reactance_ohm}; }
};

struct Reflection {
  Complex gamma;
  double amplitude;  // |gamma|
  double phase;      // arg gamma in [0, 2 pi)
};

// Gamma = (Za* - Zm) / (Za + Zm). Requires Ra > 0 and Rm >= 0.
Reflection reflection_from_impedance(const Impedance& antenna,
                                     const Impedance& load);

enum class ModulationKind { mask, mpsk, explicit_points };

const char* to_string(ModulationKind kind);

// Reflection-coefficient alphabet of the backscatter device. Symbols are
// equiprobable; every point lies in the closed unit disk.
class Constellation {
 public:
  static Constellation mask(int order, double base_phase);
  static Constellation mpsk(int order, double amplitude, double base_phase);
  static Constellation from_points(std::vector<Complex> points);
  static Constellation from_impedances(const Impedance& antenna,
                                       std::span<const Impedance> loads);

  std::span<const Complex> points() const { return points_; }
  const Complex& operator[](std::size_t i) const { return points_[i]; }
  int order() const { return static_cast<int>(points_.size()); }
  ModulationKind kind() const { return kind_; }
  double base_phase() const { return base_phase_; }
  // Common amplitude for MPSK, max |Gamma| otherwise.
  double amplitude() const { return amplitude_; }

  // Same alphabet multiplied by exp(j psi); the result is explicit.
  Constellation rotated(double psi) const;

 private:
  Constellation(std::vector<Complex> points, ModulationKind kind,
                double base_phase, double amplitude);

  std::vector<Complex> points_;
  ModulationKind kind_ = ModulationKind::explicit_points;
  double base_phase_ = 0.0;
  double amplitude_ = 0.0;
};

inline Constellation mask_constellation(int order, double phi0) {
  return Constellation::mask(order, phi0);
}
inline Constellation mpsk_constellation(int order, double alpha0, double phi0) {
  return Constellation::mpsk(order, alpha0, phi0);
}

// Mean |Gamma_m|^2.
double avg_power(const Constellation& c);

// MPSK amplitude whose average power equals that of MASK of the same order.
double equal_power_psk_amplitude(int order);

}  // namespace sbc
