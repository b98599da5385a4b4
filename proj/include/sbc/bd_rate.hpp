#pragma once

#include <cstdint>

#include "sbc/channel.hpp"
#include "sbc/constellation.hpp"

namespace sbc {

// Post-MRC model y = g Gamma_m + w_s, w_s ~ CN(0, noise_var).
struct MrcStatistics {
  double gain = 0.0;       // g = L P |h2|^2 |h3|^2 / s2
  double noise_var = 0.0;  // equal to gain under the MRC normalisation

  // Decouples the noise variance from the gain. Unit tests only.
  static MrcStatistics with_noise_override(double gain, double noise_var) {
    return {gain, noise_var};
  }
};

MrcStatistics mrc_statistics(const SystemParams& sys, const ChannelTriple& ch);

enum class MiMethod { quadrature, monte_carlo };

const char* to_string(MiMethod method);

struct MiEstimate {
  double value_bits = 0.0;
  double std_error_bits = 0.0;  // zero for quadrature
  MiMethod method = MiMethod::quadrature;
  int nodes = 0;                // per dimension, quadrature only
  std::int64_t samples = 0;     // Monte Carlo only
};

struct QuadratureConfig {
  int initial_nodes = 64;
  int max_nodes = 512;

  bool operator==(const QuadratureConfig&) const = default;
};

inline constexpr double kDefaultMiTolerance = 1e-9;

// I(Gamma; Y) for equiprobable symbols by per-symbol, noise-centred
// tensor-product Gauss-Hermite quadrature. The node count grows from
// config.initial_nodes until two successive estimates agree within tol;
// otherwise a PrecisionError carries the last estimate.
MiEstimate mi_quadrature(const Constellation& c, const MrcStatistics& stats,
                         double tol = kDefaultMiTolerance,
                         const QuadratureConfig& config = {});

// Same quantity estimated from `samples` draws (>= 1e4). Deterministic in
// (samples, seed) and independent of the worker count.
MiEstimate mi_monte_carlo(const Constellation& c, const MrcStatistics& stats,
                          std::int64_t samples, std::uint64_t seed);

// mrc_statistics followed by mi_quadrature.
MiEstimate bd_rate(const SystemParams& sys, const ChannelTriple& ch,
                   const Constellation& c, double tol = kDefaultMiTolerance,
                   const QuadratureConfig& config = {});

}  // namespace sbc
