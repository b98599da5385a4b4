#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sbc/bd_rate.hpp"
#include "sbc/channel.hpp"
#include "sbc/constellation.hpp"

namespace sbc {

// Identical (seed, stream) pairs reproduce identical sample sequences.
struct RngSpec {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

// One transmission block: n_bd BD symbols, each spread over L PT symbols.
struct SimulatedBlock {
  std::vector<Complex> pt_symbols;           // s(n), unit-variance CSCG
  std::vector<int> bd_symbol_indices;        // 0-based index into the alphabet
  std::vector<Complex> received;             // y(n)
  std::vector<Complex> residual;             // y(n) after SIC
  std::vector<Complex> mrc_outputs;          // y_MRC per BD symbol
  int spread = 0;
};

// y(n) = sqrt(P) (h1 + h2 h3 Gamma_m) s(n) + w(n), w ~ CN(0, s2).
SimulatedBlock simulate_block(const SystemParams& sys, const ChannelTriple& ch,
                              const Constellation& c, int n_bd_symbols,
                              RngSpec rng);

// Perfect SIC followed by MRC over each L-sample span:
//   r(n) = y(n) - sqrt(P) h1 s(n)
//   y_MRC = sum_n (sqrt(P) h2 h3 s(n))^* r(n) / s2
// Fills block.residual and block.mrc_outputs and returns the latter.
const std::vector<Complex>& sic_mrc_receiver(SimulatedBlock& block,
                                             const SystemParams& sys,
                                             const ChannelTriple& ch);

// Monte Carlo estimate of I(Gamma; Y_MRC) from simulated MRC outputs,
// scored with the Gaussian post-MRC model. n_bd_symbols >= 1e4.
MiEstimate empirical_bd_mi(const SystemParams& sys, const ChannelTriple& ch,
                           const Constellation& c, std::int64_t n_bd_symbols,
                           RngSpec rng);

// Per-symbol first and second moments of y_MRC - g Gamma_m.
struct MrcMoments {
  std::vector<std::int64_t> count;
  std::vector<Complex> mean;     // E[y_MRC | m]
  std::vector<double> variance;  // E|y_MRC - E[y_MRC|m]|^2
};

MrcMoments simulate_mrc_moments(const SystemParams& sys, const ChannelTriple& ch,
                                const Constellation& c, std::int64_t n_bd_symbols,
                                RngSpec rng);

inline constexpr int kMinRecommendedSpread = 16;

// Warning text when L is too small for the MRC model, otherwise empty.
std::optional<std::string> spread_warning(const SystemParams& sys);

}  // namespace sbc
