#include "sbc/channel.hpp"

#include <cmath>
#include <string>

#include "sbc/error.hpp"

namespace sbc {

namespace {

void require_finite(Complex z, const char* name) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw Error(ErrorCode::invalid_argument,
                std::string(name) + " must have finite components");
  }
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(ErrorCode::invalid_argument,
                std::string(name) + " must be finite and > 0");
  }
}

}  // namespace

double wrap_phase(double phase, double period) {
  double r = std::fmod(phase, period);
  if (r < 0.0) r += period;
  // fmod of a tiny negative value can round up to exactly `period`.
  if (r >= period) r = 0.0;
  return r;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

void PathLossModel::validate() const {
  require_positive(wavelength_m, "wavelength_m");
  require_positive(gain_pt, "gain_pt");
  require_positive(gain_rx, "gain_rx");
  require_positive(gain_bd, "gain_bd");
  require_positive(exponent, "exponent");
  require_positive(d1_m, "d1_m");
  require_positive(d2_m, "d2_m");
  require_positive(d3_m, "d3_m");
}

double path_loss(const PathLossModel& model, Link link) {
  model.validate();
  double gains = 0.0;
  double distance = 0.0;
  switch (link) {
    case Link::direct:
      gains = model.gain_pt * model.gain_rx;
      distance = model.d1_m;
      break;
    case Link::pt_to_bd:
      gains = model.gain_pt * model.gain_bd;
      distance = model.d2_m;
      break;
    case Link::bd_to_rx:
      gains = model.gain_bd * model.gain_rx;
      distance = model.d3_m;
      break;
  }
  const double four_pi = 4.0 * kPi;
  return model.wavelength_m * model.wavelength_m * gains /
         (four_pi * four_pi * std::pow(distance, model.exponent));
}

Complex make_channel(double mu, Complex fading) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    throw Error(ErrorCode::invalid_argument, "path loss must be finite and >= 0");
  }
  require_finite(fading, "fading sample");
  return std::sqrt(mu) * fading;
}

ChannelTriple::ChannelTriple(Complex h1, Complex h2, Complex h3)
    : h1_(h1), h2_(h2), h3_(h3) {
  require_finite(h1, "h1");
  require_finite(h2, "h2");
  require_finite(h3, "h3");
}

ChannelTriple ChannelTriple::from_amplitudes(double a1, double a2, double a3,
                                             double theta0) {
  if (a1 < 0.0 || a2 < 0.0 || a3 < 0.0) {
    throw Error(ErrorCode::invalid_argument, "channel amplitudes must be >= 0");
  }
  return ChannelTriple(Complex(a1, 0.0), std::polar(a2, theta0),
                       Complex(a3, 0.0));
}

ChannelTriple ChannelTriple::scaled(double factor) const {
  return ChannelTriple(h1_ * factor, h2_ * factor, h3_ * factor);
}

double composite_phase(const ChannelTriple& ch) {
  if (ch.amp1() == 0.0 || ch.amp2() == 0.0 || ch.amp3() == 0.0) {
    throw Error(ErrorCode::degenerate_channel,
                "composite phase undefined for a zero-amplitude channel");
  }
  return wrap_phase(std::arg(ch.h2()) + std::arg(ch.h3()) - std::arg(ch.h1()));
}

void SystemParams::validate() const {
  require_positive(power_w, "power_w");
  require_positive(noise_w, "noise_w");
  if (spread < 1) {
    throw Error(ErrorCode::invalid_argument, "spread must be >= 1");
  }
}

}  // namespace sbc
