#include "sbc/gauss_hermite.hpp"

#include <cmath>
#include <numbers>

#include "sbc/error.hpp"

namespace sbc {

namespace {

constexpr double kRescale = 1e-100;
constexpr double kRescaleLog = -100.0 * std::numbers::ln10;

// Orthonormal Hermite polynomial p_n(z) and p_{n-1}(z), sharing a common
// scale exp(-log_scale) so that large n cannot overflow.
struct HermiteEval {
  double pn;
  double pn1;
  double log_scale;
};

HermiteEval hermite(int n, double z) {
  double p1 = 1.0 / std::pow(std::numbers::pi, 0.25);
  double p2 = 0.0;
  double log_scale = 0.0;
  for (int j = 0; j < n; ++j) {
    const double p3 = p2;
    p2 = p1;
    p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
    if (std::abs(p1) > 1.0 / kRescale) {
      p1 *= kRescale;
      p2 *= kRescale;
      log_scale += kRescaleLog;
    }
  }
  return {p1, p2, log_scale};
}

// Root of p_n in [a, b] where p_n changes sign; Newton steps that leave the
// bracket fall back to bisection.
double refine_root(int n, double a, double b) {
  double fa = hermite(n, a).pn;
  double z = 0.5 * (a + b);
  for (int iter = 0; iter < 200; ++iter) {
    const HermiteEval e = hermite(n, z);
    if (e.pn == 0.0) return z;
    if ((e.pn < 0.0) == (fa < 0.0)) {
      a = z;
      fa = e.pn;
    } else {
      b = z;
    }
    const double derivative = std::sqrt(2.0 * n) * e.pn1;
    double next = z - e.pn / derivative;
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    if (std::abs(next - z) <= 4e-16 * std::max(1.0, std::abs(z))) return next;
    z = next;
  }
  return z;
}

}  // namespace

GaussHermiteRule gauss_hermite(int n) {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "need at least one node");
  GaussHermiteRule rule;
  rule.nodes.assign(static_cast<std::size_t>(n), 0.0);
  rule.weights.assign(static_cast<std::size_t>(n), 0.0);

  // Positive roots lie below sqrt(2n + 1); adjacent roots are at least about
  // pi / sqrt(2n + 1) apart, so this step brackets each one separately.
  const double top = std::sqrt(2.0 * n + 1.0) + 1.0;
  const double step = 0.1 * std::numbers::pi / std::sqrt(2.0 * n + 1.0);
  const int half = n / 2;
  int found = 0;
  double a = top;
  double fa = hermite(n, a).pn;
  while (found < half && a > 0.0) {
    const double b = std::max(0.0, a - step);
    const double fb = hermite(n, b).pn;
    if (b > 0.0 || n % 2 == 0) {
      if (fb == 0.0 || (fb < 0.0) != (fa < 0.0)) {
        const double z = fb == 0.0 ? b : refine_root(n, b, a);
        rule.nodes[static_cast<std::size_t>(found)] = z;
        rule.nodes[static_cast<std::size_t>(n - 1 - found)] = -z;
        ++found;
      }
    }
    a = b;
    fa = fb;
    if (b == 0.0) break;
  }
  if (found != half) {
    throw Error(ErrorCode::precision, "Gauss-Hermite root search failed");
  }

  // w = 2 / (2n p_{n-1}(z)^2) = 1 / (n p_{n-1}^2), evaluated through logs.
  for (int i = 0; i < n; ++i) {
    const double z = rule.nodes[static_cast<std::size_t>(i)];
    if (i > n - 1 - i) {
      rule.weights[static_cast<std::size_t>(i)] = rule.weights[static_cast<std::size_t>(n - 1 - i)];
      continue;
    }
    const HermiteEval e = hermite(n, z);
    const double log_w = -std::log(static_cast<double>(n)) -
                         2.0 * (std::log(std::abs(e.pn1)) - e.log_scale);
    rule.weights[static_cast<std::size_t>(i)] = std::exp(log_w);
  }
  return rule;
}

}  // namespace sbc
