#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sbc/bd_rate.hpp"
#include "sbc/phase_opt.hpp"
#include "sbc/scenario.hpp"

namespace sbc {

// Knobs that come from the command line rather than the scenario.
struct RunOptions {
  std::optional<int> grid;  // sweep steps, or grid points for `optimize`
};

struct RateRow {
  Scheme scheme = Scheme::mask;
  int order = 2;
  double phase_rad = 0.0;
  double alpha0 = 1.0;  // 1 for MASK
  double pt_rate = 0.0;
  double no_bd_rate = 0.0;
  double gain = 0.0;
  double bd_rate = 0.0;
};

RateRow run_rate(const Scenario& s);

struct PhaseSweep {
  std::vector<double> phase_rad;
  std::vector<double> pt_rate;
  double no_bd_rate = 0.0;
  double theta0 = 0.0;
  double optimal_phase = 0.0;  // closed form
  double optimal_rate = 0.0;
};

// MASK sweeps [0, 2 pi), MPSK [0, 2 pi / M); default 360 points. A single
// step evaluates the scenario's own phase.
PhaseSweep run_phase_sweep(const Scenario& s, const RunOptions& opt = {});

struct RatioSweep {
  std::vector<double> ratio;
  std::vector<double> rate_ask;  // optimal phase
  std::vector<double> rate_psk;  // optimal phase, equal-power amplitude
  // Ratios where rate_ask - rate_psk changes sign, refined by bisection.
  std::vector<double> crossings;
};

// |h1| = ratio |h2||h3| with |h2|, |h3| and theta0 from the scenario.
// Default grid: 300 points on [0.01, 3], endpoints included.
RatioSweep run_ratio_sweep(const Scenario& s, const RunOptions& opt = {});

struct OrderSweep {
  std::vector<int> order;
  std::vector<double> ask_opt;
  std::vector<double> psk_opt;
  std::vector<double> psk_fixed;  // MPSK at Scenario::fixed_phase
  double ask_infinite = 0.0;      // optimal phase
  double psk_infinite = 0.0;
  double no_bd_rate = 0.0;
};

// Powers of two between sweep.lo and sweep.hi (default 2 and 256).
OrderSweep run_order_sweep(const Scenario& s);

PhaseSolution run_optimize(const Scenario& s, const RunOptions& opt = {});

struct MiReport {
  MiEstimate quadrature;
  MiEstimate monte_carlo;
  MrcStatistics stats;
};

MiReport run_mi(const Scenario& s);

// Renders a command's result as CSV with `#` metadata rows. Commands:
// rate, phase-sweep, ratio-sweep, order-sweep, optimize, mi.
std::string run_command(const Scenario& s, std::string_view command,
                        const RunOptions& opt = {});

bool is_known_command(std::string_view command);

// Alphabet for a scheme/order/amplitude at a base phase; MPSK phases are
// reduced into [0, 2 pi / M) and a zero amplitude gives the all-zero set.
Constellation make_constellation(Scheme scheme, int order, double alpha0,
                                 double phase);

}  // namespace sbc
