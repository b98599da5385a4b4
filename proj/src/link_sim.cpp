#include "sbc/link_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "parallel.hpp"
#include "sbc/error.hpp"

namespace sbc {

namespace {

constexpr std::int64_t kSimChunk = 2048;
constexpr std::int64_t kMinEmpiricalSymbols = 10000;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::mt19937_64 make_engine(RngSpec rng) {
  std::seed_seq seq{static_cast<std::uint32_t>(rng.seed),
                    static_cast<std::uint32_t>(rng.seed >> 32),
                    static_cast<std::uint32_t>(rng.stream),
                    static_cast<std::uint32_t>(rng.stream >> 32), 0x4c53u};
  return std::mt19937_64(seq);
}

RngSpec substream(RngSpec rng, std::uint64_t chunk) {
  return {rng.seed, splitmix64(rng.stream ^ splitmix64(chunk + 1))};
}

std::int64_t chunk_count(std::int64_t n) {
  return (n + kSimChunk - 1) / kSimChunk;
}

int chunk_size(std::int64_t total, std::size_t chunk) {
  const std::int64_t begin = static_cast<std::int64_t>(chunk) * kSimChunk;
  return static_cast<int>(std::min(kSimChunk, total - begin));
}

}  // namespace

SimulatedBlock simulate_block(const SystemParams& sys, const ChannelTriple& ch,
                              const Constellation& c, int n_bd_symbols,
                              RngSpec rng) {
  sys.validate();
  if (n_bd_symbols < 1) {
    throw Error(ErrorCode::invalid_argument, "need at least one BD symbol");
  }
  auto engine = make_engine(rng);
  std::uniform_int_distribution<int> pick(0, c.order() - 1);
  std::normal_distribution<double> unit(0.0, std::sqrt(0.5));
  std::normal_distribution<double> noise(0.0, std::sqrt(sys.noise_w / 2.0));

  const auto L = static_cast<std::size_t>(sys.spread);
  const auto n_pt = static_cast<std::size_t>(n_bd_symbols) * L;
  const double amp = std::sqrt(sys.power_w);
  const Complex h23 = ch.h2() * ch.h3();

  SimulatedBlock block;
  block.spread = sys.spread;
  block.bd_symbol_indices.resize(static_cast<std::size_t>(n_bd_symbols));
  for (int& idx : block.bd_symbol_indices) idx = pick(engine);
  block.pt_symbols.resize(n_pt);
  block.received.resize(n_pt);
  for (std::size_t n = 0; n < n_pt; ++n) {
    const int m = block.bd_symbol_indices[n / L];
    const Complex h_eq = ch.h1() + h23 * c[static_cast<std::size_t>(m)];
    const double sr = unit(engine);
    const double si = unit(engine);
    const double wr = noise(engine);
    const double wi = noise(engine);
    block.pt_symbols[n] = {sr, si};
    block.received[n] = amp * h_eq * block.pt_symbols[n] + Complex(wr, wi);
  }
  return block;
}

const std::vector<Complex>& sic_mrc_receiver(SimulatedBlock& block,
                                             const SystemParams& sys,
                                             const ChannelTriple& ch) {
  sys.validate();
  const auto L = static_cast<std::size_t>(block.spread);
  if (L == 0 || block.received.size() != block.pt_symbols.size() ||
      block.received.size() != block.bd_symbol_indices.size() * L) {
    throw Error(ErrorCode::invalid_argument, "inconsistent simulated block");
  }
  const double amp = std::sqrt(sys.power_w);
  const Complex h23 = ch.h2() * ch.h3();
  block.residual.resize(block.received.size());
  for (std::size_t n = 0; n < block.received.size(); ++n) {
    block.residual[n] = block.received[n] - amp * ch.h1() * block.pt_symbols[n];
  }
  block.mrc_outputs.assign(block.bd_symbol_indices.size(), Complex{});
  for (std::size_t m = 0; m < block.mrc_outputs.size(); ++m) {
    Complex acc{};
    for (std::size_t n = m * L; n < (m + 1) * L; ++n) {
      acc += std::conj(amp * h23 * block.pt_symbols[n]) * block.residual[n];
    }
    block.mrc_outputs[m] = acc / sys.noise_w;
  }
  return block.mrc_outputs;
}

MiEstimate empirical_bd_mi(const SystemParams& sys, const ChannelTriple& ch,
                           const Constellation& c, std::int64_t n_bd_symbols,
                           RngSpec rng) {
  if (n_bd_symbols < kMinEmpiricalSymbols) {
    throw Error(ErrorCode::invalid_argument,
                "empirical MI needs at least 1e4 BD symbols");
  }
  const MrcStatistics stats = mrc_statistics(sys, ch);
  MiEstimate est;
  est.method = MiMethod::monte_carlo;
  est.samples = n_bd_symbols;
  if (stats.gain == 0.0) return est;

  const auto pts = c.points();
  const double g = stats.gain;
  const double var = stats.noise_var;
  const double log_order = std::log(static_cast<double>(c.order()));

  struct Sums {
    double sum = 0.0;
    double sum_sq = 0.0;
  };
  const auto chunks = static_cast<std::size_t>(chunk_count(n_bd_symbols));
  auto parts = detail::parallel_map<Sums>(chunks, [&](std::size_t k) {
    SimulatedBlock block = simulate_block(
        sys, ch, c, chunk_size(n_bd_symbols, k), substream(rng, k));
    sic_mrc_receiver(block, sys, ch);
    std::vector<double> logp(pts.size());
    Sums s;
    for (std::size_t b = 0; b < block.mrc_outputs.size(); ++b) {
      const Complex y = block.mrc_outputs[b];
      double peak = -INFINITY;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        logp[i] = -std::norm(y - g * pts[i]) / var;
        peak = std::max(peak, logp[i]);
      }
      double acc = 0.0;
      for (double lp : logp) acc += std::exp(lp - peak);
      const auto m = static_cast<std::size_t>(block.bd_symbol_indices[b]);
      const double value =
          (logp[m] - (peak + std::log(acc) - log_order)) / std::numbers::ln2;
      s.sum += value;
      s.sum_sq += value * value;
    }
    return s;
  });
  Sums total;
  for (const Sums& p : parts) {
    total.sum += p.sum;
    total.sum_sq += p.sum_sq;
  }
  const auto n = static_cast<double>(n_bd_symbols);
  const double mean = total.sum / n;
  const double var_hat = std::max(0.0, (total.sum_sq - n * mean * mean) / (n - 1.0));
  est.value_bits = mean;
  est.std_error_bits = std::sqrt(var_hat / n);
  return est;
}

MrcMoments simulate_mrc_moments(const SystemParams& sys, const ChannelTriple& ch,
                                const Constellation& c, std::int64_t n_bd_symbols,
                                RngSpec rng) {
  if (n_bd_symbols < 1) {
    throw Error(ErrorCode::invalid_argument, "need at least one BD symbol");
  }
  const auto order = static_cast<std::size_t>(c.order());
  const double g = mrc_statistics(sys, ch).gain;
  struct Acc {
    std::vector<std::int64_t> count;
    std::vector<Complex> sum;
    std::vector<double> sum_sq;
  };
  const auto chunks = static_cast<std::size_t>(chunk_count(n_bd_symbols));
  auto parts = detail::parallel_map<Acc>(chunks, [&](std::size_t k) {
    SimulatedBlock block = simulate_block(
        sys, ch, c, chunk_size(n_bd_symbols, k), substream(rng, k));
    sic_mrc_receiver(block, sys, ch);
    Acc a{std::vector<std::int64_t>(order, 0), std::vector<Complex>(order),
          std::vector<double>(order, 0.0)};
    for (std::size_t b = 0; b < block.mrc_outputs.size(); ++b) {
      const auto m = static_cast<std::size_t>(block.bd_symbol_indices[b]);
      // Accumulate around the model mean to limit cancellation.
      const Complex dev = block.mrc_outputs[b] - g * c[m];
      ++a.count[m];
      a.sum[m] += dev;
      a.sum_sq[m] += std::norm(dev);
    }
    return a;
  });
  MrcMoments out{std::vector<std::int64_t>(order, 0), std::vector<Complex>(order),
                 std::vector<double>(order, 0.0)};
  std::vector<double> sum_sq(order, 0.0);
  for (const Acc& a : parts) {
    for (std::size_t m = 0; m < order; ++m) {
      out.count[m] += a.count[m];
      out.mean[m] += a.sum[m];
      sum_sq[m] += a.sum_sq[m];
    }
  }
  for (std::size_t m = 0; m < order; ++m) {
    const auto n = static_cast<double>(out.count[m]);
    if (n < 2) continue;
    const Complex mean_dev = out.mean[m] / n;
    out.variance[m] = (sum_sq[m] - n * std::norm(mean_dev)) / (n - 1.0);
    out.mean[m] = g * c[m] + mean_dev;
  }
  return out;
}

std::optional<std::string> spread_warning(const SystemParams& sys) {
  if (sys.spread < kMinRecommendedSpread) {
    return "spreading factor L = " + std::to_string(sys.spread) +
           " is below " + std::to_string(kMinRecommendedSpread) +
           "; the MRC statistics assume L >> 1";
  }
  return std::nullopt;
}

}  // namespace sbc
