#pragma once

#include <functional>
#include <optional>

#include "sbc/bd_rate.hpp"
#include "sbc/channel.hpp"
#include "sbc/constellation.hpp"

namespace sbc {

enum class Scheme { mask, mpsk };

const char* to_string(Scheme scheme);

struct PhaseOptProblem {
  Scheme scheme = Scheme::mask;
  int order = 2;
  double alpha0 = 1.0;  // MPSK only
  double min_bd_rate_bits = 0.0;

  Constellation constellation(double base_phase) const;
};

// Result of a grid cross-check of a closed-form phase.
struct GridCheck {
  double phase = 0.0;
  double value = 0.0;
  bool agrees = true;  // closed form within one grid step / not worse
};

struct PhaseSolution {
  double phase_rad = 0.0;
  double achieved_pt_rate = 0.0;
  bool feasible = true;
  int wrap_index = 0;  // lambda (MASK) or eta (MPSK)
  std::optional<double> bd_rate_bits;
  // Present when the closed form was cross-checked against a grid search.
  std::optional<GridCheck> grid;
};

// argmax over lo + k (hi - lo) / points, k = 0 .. points-1. Ties resolve to
// the smaller phase.
struct GridResult {
  double phase;
  double value;
};

GridResult grid_search_phase(const std::function<double(double)>& objective,
                             double lo, double hi, int points);

// phi = (-theta0) mod 2 pi, i.e. 2 lambda pi - theta0.
PhaseSolution optimal_phase_ask(double theta0);

// phi = (pi/M - theta0) mod 2pi/M, i.e. pi/M + 2 eta pi / M - theta0.
PhaseSolution optimal_phase_psk(double theta0, int order);

inline constexpr int kVerificationGridPoints = 4096;

// True iff the BD rate (phase independent) reaches min_bd_rate_bits.
bool check_feasibility(const PhaseOptProblem& problem, const SystemParams& sys,
                       const ChannelTriple& ch);

// Maximises the PT rate subject to the BD rate floor. The BD constraint does
// not depend on the base phase, so feasibility is evaluated once and the
// phase is optimised without it. Infeasible problems still return the
// optimal phase with feasible = false. MPSK orders that are not powers of two
// are cross-checked against a grid search and the outcome is reported in
// PhaseSolution::grid.
PhaseSolution solve_phase_problem(const PhaseOptProblem& problem,
                                  const SystemParams& sys,
                                  const ChannelTriple& ch);

bool is_power_of_two(int n);

}  // namespace sbc
