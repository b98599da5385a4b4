#include "sbc/phase_opt.hpp"

#include <cmath>

#include "parallel.hpp"
#include "sbc/error.hpp"
#include "sbc/pt_rate.hpp"

namespace sbc {

namespace {

constexpr std::size_t kGridChunk = 1024;

double theta0_or_zero(const ChannelTriple& ch) {
  if (ch.amp1() > 0.0 && ch.has_backscatter()) return composite_phase(ch);
  return 0.0;
}

}  // namespace

const char* to_string(Scheme scheme) {
  return scheme == Scheme::mask ? "mask" : "mpsk";
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

Constellation PhaseOptProblem::constellation(double base_phase) const {
  if (scheme == Scheme::mask) return Constellation::mask(order, base_phase);
  return Constellation::mpsk(order, alpha0, wrap_phase(base_phase, kTwoPi / order));
}

GridResult grid_search_phase(const std::function<double(double)>& objective,
                             double lo, double hi, int points) {
  if (points < 3 || !(lo < hi)) {
    throw Error(ErrorCode::invalid_argument,
                "grid search needs lo < hi and at least 3 points");
  }
  const double step = (hi - lo) / points;
  const auto n = static_cast<std::size_t>(points);
  const std::size_t chunks = (n + kGridChunk - 1) / kGridChunk;
  auto best = detail::parallel_map<GridResult>(chunks, [&](std::size_t chunk) {
    GridResult r{lo, -INFINITY};
    const std::size_t end = std::min(n, (chunk + 1) * kGridChunk);
    for (std::size_t k = chunk * kGridChunk; k < end; ++k) {
      const double phase = lo + step * static_cast<double>(k);
      const double v = objective(phase);
      if (v > r.value) r = {phase, v};
    }
    return r;
  });
  GridResult out = best.front();
  for (std::size_t i = 1; i < best.size(); ++i) {
    if (best[i].value > out.value) out = best[i];
  }
  return out;
}

PhaseSolution optimal_phase_ask(double theta0) {
  PhaseSolution s;
  s.phase_rad = wrap_phase(-theta0);
  s.wrap_index = static_cast<int>(std::lround((s.phase_rad + theta0) / kTwoPi));
  return s;
}

PhaseSolution optimal_phase_psk(double theta0, int order) {
  if (order < 2) throw Error(ErrorCode::order, "modulation order must be >= 2");
  const double sector = kTwoPi / order;
  const double offset = kPi / order;
  PhaseSolution s;
  s.phase_rad = wrap_phase(offset - theta0, sector);
  s.wrap_index =
      static_cast<int>(std::lround((s.phase_rad + theta0 - offset) / sector));
  return s;
}

bool check_feasibility(const PhaseOptProblem& problem, const SystemParams& sys,
                       const ChannelTriple& ch) {
  if (!(problem.min_bd_rate_bits >= 0.0)) {
    throw Error(ErrorCode::invalid_argument, "minimum BD rate must be >= 0");
  }
  if (problem.min_bd_rate_bits == 0.0) return true;
  if (problem.min_bd_rate_bits > std::log2(static_cast<double>(problem.order))) {
    return false;
  }
  const MiEstimate mi = bd_rate(sys, ch, problem.constellation(0.0));
  return mi.value_bits >= problem.min_bd_rate_bits;
}

PhaseSolution solve_phase_problem(const PhaseOptProblem& problem,
                                  const SystemParams& sys,
                                  const ChannelTriple& ch) {
  const double theta0 = theta0_or_zero(ch);
  PhaseSolution s = problem.scheme == Scheme::mask
                        ? optimal_phase_ask(theta0)
                        : optimal_phase_psk(theta0, problem.order);
  s.achieved_pt_rate = pt_rate_finite(sys, ch, problem.constellation(s.phase_rad));
  if (!(problem.min_bd_rate_bits >= 0.0)) {
    throw Error(ErrorCode::invalid_argument, "minimum BD rate must be >= 0");
  }
  s.bd_rate_bits = bd_rate(sys, ch, problem.constellation(s.phase_rad)).value_bits;
  s.feasible = problem.min_bd_rate_bits == 0.0 ||
               *s.bd_rate_bits >= problem.min_bd_rate_bits;

  if (problem.scheme == Scheme::mpsk && !is_power_of_two(problem.order)) {
    const double sector = kTwoPi / problem.order;
    const GridResult g = grid_search_phase(
        [&](double phi) {
          return pt_rate_finite(sys, ch, problem.constellation(phi));
        },
        0.0, sector, kVerificationGridPoints);
    s.grid = GridCheck{g.phase, g.value, s.achieved_pt_rate >= g.value - 1e-10};
  }
  return s;
}

}  // namespace sbc
