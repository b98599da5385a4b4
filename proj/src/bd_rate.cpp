#include "sbc/bd_rate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "parallel.hpp"
#include "sbc/error.hpp"
#include "sbc/gauss_hermite.hpp"

namespace sbc {

namespace {

constexpr double kLn2 = std::numbers::ln2;
// exp(-60) is far below double resolution relative to the leading term.
constexpr double kNegligibleExponent = -60.0;
constexpr double kNegligibleWeight = 1e-25;
constexpr std::int64_t kMonteCarloChunk = 1 << 16;
constexpr std::int64_t kMinMonteCarloSamples = 10000;

// Rules are rebuilt often by the node-doubling loop; keep them around.
const GaussHermiteRule& cached_rule(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<const GaussHermiteRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<const GaussHermiteRule>(gauss_hermite(n));
  return *slot;
}

bool all_points_equal(const Constellation& c) {
  const auto pts = c.points();
  return std::all_of(pts.begin(), pts.end(),
                     [&](const Complex& p) { return p == pts[0]; });
}

void require_valid(const Constellation& c, const MrcStatistics& stats) {
  if (c.order() < 1) {
    throw Error(ErrorCode::invalid_argument, "empty constellation");
  }
  if (!(stats.gain >= 0.0) || !std::isfinite(stats.gain)) {
    throw Error(ErrorCode::invalid_argument, "MRC gain must be finite and >= 0");
  }
  if (stats.gain > 0.0 && !(stats.noise_var > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "MRC noise variance must be > 0");
  }
}

// Expected log-sum-exp for one transmitted symbol, in nats. The noise is
// w = sigma (x + j y) with (x, y) weighted by exp(-x^2 - y^2) / pi.
double symbol_term(const std::vector<Complex>& deltas,
                   const GaussHermiteRule& rule) {
  const double x_max = std::abs(rule.nodes.front());
  const double radius = std::sqrt(2.0) * x_max;

  // Drop symbols whose exponent stays negligible on the whole node grid.
  std::vector<Complex> active;
  active.reserve(deltas.size());
  for (const Complex& d : deltas) {
    const double r = std::abs(d);
    if (-r * r + 2.0 * radius * r > kNegligibleExponent) active.push_back(d);
  }

  const std::size_t n = rule.nodes.size();
  std::vector<double> exps(active.size());
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double wk = rule.weights[k];
    if (wk < kNegligibleWeight) continue;
    const double x = rule.nodes[k];
    double row = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
      const double w = wk * rule.weights[l];
      if (w < kNegligibleWeight) continue;
      const double y = rule.nodes[l];
      double peak = -INFINITY;
      for (std::size_t i = 0; i < active.size(); ++i) {
        const Complex d = active[i];
        exps[i] = -(std::norm(d) + 2.0 * (x * d.real() + y * d.imag()));
        peak = std::max(peak, exps[i]);
      }
      double acc = 0.0;
      for (double e : exps) acc += std::exp(e - peak);
      row += w * (peak + std::log(acc));
    }
    total += row;
  }
  return total / std::numbers::pi;
}

double mi_with_rule(const Constellation& c, const MrcStatistics& stats,
                    const GaussHermiteRule& rule) {
  const int order = c.order();
  const double scale = stats.gain / std::sqrt(stats.noise_var);
  const auto pts = c.points();
  auto terms = detail::parallel_map<double>(
      static_cast<std::size_t>(order), [&](std::size_t m) {
        std::vector<Complex> deltas;
        deltas.reserve(pts.size());
        for (const Complex& p : pts) deltas.push_back(scale * (pts[m] - p));
        return symbol_term(deltas, rule);
      });
  double sum = 0.0;
  for (double t : terms) sum += t;
  return std::log2(static_cast<double>(order)) - sum / (order * kLn2);
}

}  // namespace

MrcStatistics mrc_statistics(const SystemParams& sys, const ChannelTriple& ch) {
  sys.validate();
  const double g = sys.spread * sys.power_w * std::norm(ch.h2()) *
                   std::norm(ch.h3()) / sys.noise_w;
  return {g, g};
}

const char* to_string(MiMethod method) {
  return method == MiMethod::quadrature ? "quadrature" : "monte_carlo";
}

MiEstimate mi_quadrature(const Constellation& c, const MrcStatistics& stats,
                         double tol, const QuadratureConfig& config) {
  require_valid(c, stats);
  if (!(tol > 0.0)) throw Error(ErrorCode::invalid_argument, "tol must be > 0");
  if (config.initial_nodes < 2 || config.max_nodes < config.initial_nodes) {
    throw Error(ErrorCode::invalid_argument, "invalid quadrature node budget");
  }
  MiEstimate est;
  est.method = MiMethod::quadrature;
  if (stats.gain == 0.0 || all_points_equal(c)) {
    est.value_bits = 0.0;
    return est;
  }

  int nodes = config.initial_nodes;
  double previous = mi_with_rule(c, stats, cached_rule(nodes));
  while (true) {
    if (nodes >= config.max_nodes) {
      throw PrecisionError("mutual information did not converge within " +
                               std::to_string(config.max_nodes) +
                               " nodes per dimension",
                           previous, INFINITY);
    }
    const int next = std::min(config.max_nodes, nodes + nodes / 2);
    const double current = mi_with_rule(c, stats, cached_rule(next));
    const double change = std::abs(current - previous);
    nodes = next;
    if (change <= tol) {
      est.value_bits = current;
      est.nodes = nodes;
      return est;
    }
    if (nodes >= config.max_nodes) {
      throw PrecisionError("mutual information did not converge within " +
                               std::to_string(config.max_nodes) +
                               " nodes per dimension",
                           current, change);
    }
    previous = current;
  }
}

MiEstimate mi_monte_carlo(const Constellation& c, const MrcStatistics& stats,
                          std::int64_t samples, std::uint64_t seed) {
  require_valid(c, stats);
  if (samples < kMinMonteCarloSamples) {
    throw Error(ErrorCode::invalid_argument,
                "Monte Carlo needs at least 1e4 samples");
  }
  MiEstimate est;
  est.method = MiMethod::monte_carlo;
  est.samples = samples;
  if (stats.gain == 0.0) return est;

  struct Moments {
    std::int64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;
  };

  const auto pts = c.points();
  const int order = c.order();
  const double g = stats.gain;
  const double var = stats.noise_var;
  const double component_sd = std::sqrt(var / 2.0);
  const double log_order = std::log(static_cast<double>(order));
  const std::int64_t chunks = (samples + kMonteCarloChunk - 1) / kMonteCarloChunk;

  auto parts = detail::parallel_map<Moments>(
      static_cast<std::size_t>(chunks), [&](std::size_t chunk) {
        const auto ck = static_cast<std::uint64_t>(chunk);
        std::seed_seq seq{static_cast<std::uint32_t>(seed),
                          static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(ck),
                          static_cast<std::uint32_t>(ck >> 32), 0x4d43u};
        std::mt19937_64 rng(seq);
        std::uniform_int_distribution<int> pick(0, order - 1);
        std::normal_distribution<double> normal(0.0, component_sd);
        const std::int64_t begin = static_cast<std::int64_t>(chunk) * kMonteCarloChunk;
        const std::int64_t count = std::min(kMonteCarloChunk, samples - begin);
        std::vector<double> logp(pts.size());
        Moments mom;
        for (std::int64_t s = 0; s < count; ++s) {
          const int m = pick(rng);
          const double wr = normal(rng);
          const double wi = normal(rng);
          const Complex y = g * pts[static_cast<std::size_t>(m)] + Complex(wr, wi);
          double peak = -INFINITY;
          for (std::size_t i = 0; i < pts.size(); ++i) {
            logp[i] = -std::norm(y - g * pts[i]) / var;
            peak = std::max(peak, logp[i]);
          }
          double acc = 0.0;
          for (double lp : logp) acc += std::exp(lp - peak);
          const double mixture = peak + std::log(acc) - log_order;
          const double value =
              (logp[static_cast<std::size_t>(m)] - mixture) / kLn2;
          ++mom.n;
          const double delta = value - mom.mean;
          mom.mean += delta / static_cast<double>(mom.n);
          mom.m2 += delta * (value - mom.mean);
        }
        return mom;
      });

  Moments total;
  for (const Moments& p : parts) {
    if (p.n == 0) continue;
    const auto n = total.n + p.n;
    const double delta = p.mean - total.mean;
    total.mean += delta * static_cast<double>(p.n) / static_cast<double>(n);
    total.m2 += p.m2 + delta * delta * static_cast<double>(total.n) *
                           static_cast<double>(p.n) / static_cast<double>(n);
    total.n = n;
  }
  est.value_bits = total.mean;
  est.std_error_bits =
      std::sqrt(total.m2 / static_cast<double>(total.n - 1)) /
      std::sqrt(static_cast<double>(total.n));
  return est;
}

MiEstimate bd_rate(const SystemParams& sys, const ChannelTriple& ch,
                   const Constellation& c, double tol,
                   const QuadratureConfig& config) {
  return mi_quadrature(c, mrc_statistics(sys, ch), tol, config);
}

}  // namespace sbc
