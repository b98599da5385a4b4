#pragma once

#include <complex>

namespace sbc {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Reduce an angle into [0, period).
double wrap_phase(double phase, double period = kTwoPi);

double db_to_linear(double db);
double dbm_to_watts(double dbm);

// Large-scale path loss of the three links. Gains are linear.
struct PathLossModel {
  double wavelength_m = 0.33;
  double gain_pt = 1.0;
  double gain_rx = 1.0;
  double gain_bd = 1.0;
  double exponent = 2.0;
  double d1_m = 1.0;  // PT -> R
  double d2_m = 1.0;  // PT -> BD
  double d3_m = 1.0;  // BD -> R

  void validate() const;
  bool operator==(const PathLossModel&) const = default;
};

enum class Link { direct = 1, pt_to_bd = 2, bd_to_rx = 3 };

// Linear power gain mu = lambda^2 Ga Gb / ((4 pi)^2 d^v) for one link.
double path_loss(const PathLossModel& model, Link link);

// h = sqrt(mu) * fading
Complex make_channel(double mu, Complex fading);

// Direct (h1), PT->BD (h2) and BD->R (h3) channel coefficients.
class ChannelTriple {
 public:
  ChannelTriple() = default;
  ChannelTriple(Complex h1, Complex h2, Complex h3);

  // Builds a triple from amplitudes |h1|, |h2|, |h3| and a composite phase
  // theta0; h1 and h3 are real-positive and h2 carries the phase.
  static ChannelTriple from_amplitudes(double a1, double a2, double a3,
                                       double theta0);

  Complex h1() const { return h1_; }
  Complex h2() const { return h2_; }
  Complex h3() const { return h3_; }

  double amp1() const { return std::abs(h1_); }
  double amp2() const { return std::abs(h2_); }
  double amp3() const { return std::abs(h3_); }
  // |h2| |h3|
  double backscatter_amp() const { return amp2() * amp3(); }

  bool has_backscatter() const { return amp2() > 0.0 && amp3() > 0.0; }

  ChannelTriple scaled(double factor) const;

 private:
  Complex h1_{0.0, 0.0};
  Complex h2_{0.0, 0.0};
  Complex h3_{0.0, 0.0};
};

// theta0 = arg h2 + arg h3 - arg h1, reduced to [0, 2 pi). Throws
// degenerate_channel when any coefficient has zero amplitude.
double composite_phase(const ChannelTriple& ch);

// Transmit power P, noise power sigma^2 (both watts) and the spreading
// factor L (PT symbols per BD symbol). The MRC model assumes L >> 1; only
// L >= 1 is enforced.
struct SystemParams {
  double power_w = 1.0;
  double noise_w = 1.0;
  int spread = 128;

  void validate() const;
  double snr_scale() const { return power_w / noise_w; }
  bool operator==(const SystemParams&) const = default;
};

}  // namespace sbc
