#include "sbc/pt_rate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "sbc/error.hpp"

namespace sbc {

namespace {

constexpr double kLn2 = std::numbers::ln2;

double log2_1p(double x) { return std::log1p(x) / kLn2; }

// theta0 when all three links are present, 0 otherwise (the cosine term then
// has a zero coefficient).
double theta0_or_zero(const ChannelTriple& ch) {
  if (ch.amp1() > 0.0 && ch.has_backscatter()) return composite_phase(ch);
  return 0.0;
}

// ln of the integrand argument 1 + snr |a1 + b alpha e^{j psi}|^2.
double ask_log_integrand(double snr, double a1, double b, double psi,
                         double alpha) {
  const double re = a1 + b * alpha * std::cos(psi);
  const double im = b * alpha * std::sin(psi);
  return std::log1p(snr * (re * re + im * im));
}

double ask_infinite_by_quadrature(double snr, double a1, double b, double psi) {
  auto f = [&](double alpha) {
    return ask_log_integrand(snr, a1, b, psi, alpha);
  };
  // Split at the interior minimum of the integrand, where it can dip sharply.
  const double cpsi = std::cos(psi);
  double split = b > 0.0 ? -a1 * cpsi / b : -1.0;
  double total = 0.0;
  using Gk = boost::math::quadrature::gauss_kronrod<double, 61>;
  if (split > 0.0 && split < 1.0) {
    total = Gk::integrate(f, 0.0, split, 20, 1e-14) +
            Gk::integrate(f, split, 1.0, 20, 1e-14);
  } else {
    total = Gk::integrate(f, 0.0, 1.0, 20, 1e-14);
  }
  return total / kLn2;
}

}  // namespace

AskAsymptoticCoefficients ask_asymptotic_coefficients(const SystemParams& sys,
                                                      const ChannelTriple& ch,
                                                      double phi0) {
  sys.validate();
  const double snr = sys.snr_scale();
  const double a1 = ch.amp1();
  const double b = ch.backscatter_amp();
  const double psi = theta0_or_zero(ch) + phi0;
  const double sin_psi = std::sin(psi);
  AskAsymptoticCoefficients k{};
  k.c1 = snr * a1 * a1 + 1.0;
  k.c2 = 2.0 * snr * a1 * b * std::cos(psi);
  k.c3 = snr * b * b;
  k.discriminant_root =
      std::sqrt(snr * b * b * (1.0 + snr * a1 * a1 * sin_psi * sin_psi));
  return k;
}

PskAsymptoticCoefficients psk_asymptotic_coefficients(const SystemParams& sys,
                                                      const ChannelTriple& ch,
                                                      double alpha0) {
  sys.validate();
  if (!(alpha0 >= 0.0 && alpha0 <= 1.0)) {
    throw Error(ErrorCode::amplitude, "alpha0 must lie in [0, 1]");
  }
  const double snr = sys.snr_scale();
  const double a1 = ch.amp1();
  const double ba = ch.backscatter_amp() * alpha0;
  PskAsymptoticCoefficients k{};
  k.d1 = 1.0 + snr * (a1 * a1 + ba * ba);
  k.d2 = 2.0 * snr * a1 * ba;
  k.gap = 1.0 + snr * (a1 - ba) * (a1 - ba);
  return k;
}

double pt_rate_no_bd(const SystemParams& sys, const ChannelTriple& ch) {
  sys.validate();
  return log2_1p(sys.snr_scale() * std::norm(ch.h1()));
}

double pt_rate_finite(const SystemParams& sys, const ChannelTriple& ch,
                      const Constellation& c) {
  sys.validate();
  const double snr = sys.snr_scale();
  const Complex h23 = ch.h2() * ch.h3();
  double sum = 0.0;
  for (const Complex& gamma : c.points()) {
    sum += log2_1p(snr * std::norm(ch.h1() + h23 * gamma));
  }
  return sum / c.order();
}

double pt_rate_cosine_form(const SystemParams& sys, const ChannelTriple& ch,
                           const Constellation& c) {
  sys.validate();
  const double snr = sys.snr_scale();
  const double a1 = ch.amp1();
  const double b = ch.backscatter_amp();
  const double theta0 = theta0_or_zero(ch);
  double sum = 0.0;
  for (const Complex& gamma : c.points()) {
    const double alpha = std::abs(gamma);
    const double phi = std::arg(gamma);
    const double power = a1 * a1 + b * b * alpha * alpha +
                         2.0 * a1 * b * alpha * std::cos(theta0 + phi);
    sum += log2_1p(snr * std::max(power, 0.0));
  }
  return sum / c.order();
}

RateReport rate_gain(const SystemParams& sys, const ChannelTriple& ch,
                     const Constellation& c) {
  RateReport r;
  r.pt_rate = pt_rate_finite(sys, ch, c);
  r.no_bd_rate = pt_rate_no_bd(sys, ch);
  r.gain = r.pt_rate - r.no_bd_rate;
  return r;
}

double pt_rate_ask_infinite(const SystemParams& sys, const ChannelTriple& ch,
                            double phi0) {
  const AskAsymptoticCoefficients k = ask_asymptotic_coefficients(sys, ch, phi0);
  if (!(k.c3 > 0.0)) {
    throw Error(ErrorCode::degenerate_backscatter,
                "|h2||h3| = 0: use pt_rate_no_bd instead");
  }
  const double snr = sys.snr_scale();
  const double a1 = ch.amp1();
  const double b = ch.backscatter_amp();
  const double psi = theta0_or_zero(ch) + phi0;

  // Integration by parts turns int_0^1 ln Q(alpha) d alpha with
  // Q = c1 + c2 alpha + c3 alpha^2 into
  //   ln Q(1) - 2 + (c2 / 2c3) ln(Q(1)/c1) + (2s/c3) atan2(s, c1 + c2/2),
  // where s^2 = c1 c3 - c2^2/4 > 0. The atan2 form is the difference of the
  // two arctan terms at alpha = 1 and alpha = 0, valid on every branch.
  const double s = k.discriminant_root;
  const double ln_q1 = ask_log_integrand(snr, a1, b, psi, 1.0);
  const double ln_ratio = std::log1p((k.c2 + k.c3) / k.c1);
  const double nats = ln_q1 - 2.0 + k.c2 / (2.0 * k.c3) * ln_ratio +
                      2.0 * s / k.c3 * std::atan2(s, k.c1 + 0.5 * k.c2);
  const double bits = nats / kLn2;

  // The average of log2 Q over [0, 1] must sit between its extremes.
  double vertex = std::clamp(-k.c2 / (2.0 * k.c3), 0.0, 1.0);
  const double lo = ask_log_integrand(snr, a1, b, psi, vertex) / kLn2;
  const double hi = std::max(ask_log_integrand(snr, a1, b, psi, 0.0),
                             ln_q1) / kLn2;
  const double slack = 1e-12 * std::max(1.0, hi);
  if (!std::isfinite(bits) || bits < lo - slack || bits > hi + slack) {
    return ask_infinite_by_quadrature(snr, a1, b, psi);
  }
  return bits;
}

double pt_rate_psk_infinite(const SystemParams& sys, const ChannelTriple& ch,
                            double alpha0) {
  const PskAsymptoticCoefficients k = psk_asymptotic_coefficients(sys, ch, alpha0);
  // log2((d1 + sqrt(d1^2 - d2^2)) / 2) evaluated as log1p of the excess over
  // one, with d1^2 - d2^2 = (d1 - d2)(d1 + d2).
  const double u = k.gap - 1.0;
  const double v = (k.d1 + k.d2) - 1.0;
  const double root_minus_one =
      (u + v + u * v) / (std::sqrt(k.gap * (k.d1 + k.d2)) + 1.0);
  return log2_1p(0.5 * ((k.d1 - 1.0) + root_minus_one));
}

double psk_infinite_rate_gain(const SystemParams& sys, const ChannelTriple& ch,
                              double alpha0) {
  const PskAsymptoticCoefficients k = psk_asymptotic_coefficients(sys, ch, alpha0);
  // With x = snr|h1|^2, y = snr|h2 h3 alpha0|^2 and D = sqrt(d1^2 - d2^2),
  // D^2 - (1 + x - y)^2 = 4y(1 + x), hence
  //   (d1 + D) / (2(1 + x)) = 1 + 2y / ((1 + x)(D + 1 + x - y)).
  const double snr = sys.snr_scale();
  const double x = snr * ch.amp1() * ch.amp1();
  const double ba = ch.backscatter_amp() * alpha0;
  const double y = snr * ba * ba;
  if (y == 0.0) return 0.0;
  const double d = std::sqrt(k.gap) * std::sqrt(k.d1 + k.d2);
  return log2_1p(2.0 * y / ((1.0 + x) * (d + 1.0 + x - y)));
}

double max_pt_rate_ask(const SystemParams& sys, const ChannelTriple& ch,
                       int order) {
  sys.validate();
  if (order < 2) throw Error(ErrorCode::order, "modulation order must be >= 2");
  const double snr = sys.snr_scale();
  const double a1 = ch.amp1();
  const double b = ch.backscatter_amp();
  double sum = 0.0;
  for (int m = 0; m < order; ++m) {
    const double amp = a1 + b * static_cast<double>(m) / (order - 1);
    sum += log2_1p(snr * amp * amp);
  }
  return sum / order;
}

double max_pt_rate_psk(const SystemParams& sys, const ChannelTriple& ch,
                       int order, double alpha0) {
  sys.validate();
  if (order < 2) throw Error(ErrorCode::order, "modulation order must be >= 2");
  if (!(alpha0 >= 0.0 && alpha0 <= 1.0)) {
    throw Error(ErrorCode::amplitude, "alpha0 must lie in [0, 1]");
  }
  const double snr = sys.snr_scale();
  const double a1 = ch.amp1();
  const double b = ch.backscatter_amp();
  const double theta0 = theta0_or_zero(ch);
  const double sector = kTwoPi / order;
  const double phi_opt = wrap_phase(kPi / order - theta0, sector);
  double sum = 0.0;
  for (int m = 0; m < order; ++m) {
    const double power =
        a1 * a1 + b * b * alpha0 * alpha0 +
        2.0 * a1 * b * alpha0 * std::cos(theta0 + phi_opt + sector * m);
    sum += log2_1p(snr * std::max(power, 0.0));
  }
  return sum / order;
}

}  // namespace sbc
