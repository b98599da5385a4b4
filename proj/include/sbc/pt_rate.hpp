#pragma once

#include <optional>

#include "sbc/channel.hpp"
#include "sbc/constellation.hpp"

namespace sbc {

// Rates are in bits per channel use throughout.

struct AskAsymptoticCoefficients {
  double c1;  // 1 + (P/s2)|h1|^2
  double c2;  // 2 (P/s2)|h1||h2||h3| cos(theta0 + phi0)
  double c3;  // (P/s2)|h2|^2|h3|^2
  // sqrt(c1 c3 - (c2/2)^2), evaluated without cancellation.
  double discriminant_root;
};

AskAsymptoticCoefficients ask_asymptotic_coefficients(const SystemParams& sys,
                                                      const ChannelTriple& ch,
                                                      double phi0);

struct PskAsymptoticCoefficients {
  double d1;  // 1 + (P/s2)(|h1|^2 + |h2 h3 alpha0|^2)
  double d2;  // 2 (P/s2)|h1||h2||h3| alpha0
  // d1 - d2 = 1 + (P/s2)(|h1| - |h2 h3 alpha0|)^2, kept separately for precision.
  double gap;
};

PskAsymptoticCoefficients psk_asymptotic_coefficients(const SystemParams& sys,
                                                      const ChannelTriple& ch,
                                                      double alpha0);

struct RateReport {
  double pt_rate = 0.0;
  double no_bd_rate = 0.0;
  double gain = 0.0;  // pt_rate - no_bd_rate
  std::optional<double> bd_rate;
};

// log2(1 + P|h1|^2/s2)
double pt_rate_no_bd(const SystemParams& sys, const ChannelTriple& ch);

// (1/M) sum_m log2(1 + P|h1 + h2 h3 Gamma_m|^2 / s2)
double pt_rate_finite(const SystemParams& sys, const ChannelTriple& ch,
                      const Constellation& c);

// The same average written with |h_eq,m|^2 expanded into amplitude and cosine
// terms of theta0. Independent of pt_rate_finite; used to cross-check it.
double pt_rate_cosine_form(const SystemParams& sys, const ChannelTriple& ch,
                           const Constellation& c);

RateReport rate_gain(const SystemParams& sys, const ChannelTriple& ch,
                     const Constellation& c);

// PT rate for MASK with M -> infinity (amplitude uniform on [0, 1]) at base
// phase phi0. Throws degenerate_backscatter if |h2||h3| = 0.
double pt_rate_ask_infinite(const SystemParams& sys, const ChannelTriple& ch,
                            double phi0);

// PT rate for MPSK with M -> infinity (phase uniform on [0, 2 pi)).
double pt_rate_psk_infinite(const SystemParams& sys, const ChannelTriple& ch,
                            double alpha0);

// pt_rate_psk_infinite - pt_rate_no_bd without the cancellation of the
// plain difference; positive whenever alpha0 |h2||h3| > 0.
double psk_infinite_rate_gain(const SystemParams& sys, const ChannelTriple& ch,
                              double alpha0);

// PT rate of MASK at its optimal base phase.
double max_pt_rate_ask(const SystemParams& sys, const ChannelTriple& ch,
                       int order);

// PT rate of MPSK at the closed-form optimal base phase.
double max_pt_rate_psk(const SystemParams& sys, const ChannelTriple& ch,
                       int order, double alpha0);

}  // namespace sbc
