#include "sbc/experiments.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "parallel.hpp"
#include "sbc/error.hpp"
#include "sbc/pt_rate.hpp"

namespace sbc {

namespace {

constexpr int kDefaultPhaseSteps = 360;
constexpr int kDefaultRatioSteps = 300;
constexpr double kDefaultRatioLo = 0.01;
constexpr double kDefaultRatioHi = 3.0;
constexpr int kDefaultOrderLo = 2;
constexpr int kDefaultOrderHi = 256;

double theta0_or_zero(const ChannelTriple& ch) {
  if (ch.amp1() > 0.0 && ch.has_backscatter()) return composite_phase(ch);
  return 0.0;
}

const SweepSpec* sweep_for(const Scenario& s, SweepVariable v) {
  return s.sweep && s.sweep->variable == v ? &*s.sweep : nullptr;
}

int resolve_steps(const SweepSpec* spec, const RunOptions& opt, int fallback) {
  int steps = fallback;
  if (spec && spec->steps) steps = *spec->steps;
  if (opt.grid) steps = *opt.grid;
  if (steps < 1) throw ScenarioError("sweep grid must have at least 1 point");
  return steps;
}

std::string num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// Accumulates `#` metadata rows, a header and data rows.
class Csv {
 public:
  Csv(const Scenario& s, std::string_view command) {
    meta("scenario_hash", scenario_hash(s));
    meta("command", std::string(command));
  }

  void meta(std::string_view key, const std::string& value) {
    out_ += "# ";
    out_ += key;
    out_ += '=';
    out_ += value;
    out_ += '\n';
  }
  void meta(std::string_view key, double value) { meta(key, num(value)); }

  void row(std::initializer_list<std::string> cells) {
    bool first = true;
    for (const auto& c : cells) {
      if (!first) out_ += ',';
      out_ += c;
      first = false;
    }
    out_ += '\n';
  }

  std::string str() && { return std::move(out_); }

 private:
  std::string out_;
};

double rate_difference(const SystemParams& sys, double ratio, double b2, double b3,
                       double theta0, int order, double alpha) {
  const auto ch = ChannelTriple::from_amplitudes(ratio * b2 * b3, b2, b3, theta0);
  return max_pt_rate_ask(sys, ch, order) - max_pt_rate_psk(sys, ch, order, alpha);
}

}  // namespace

Constellation make_constellation(Scheme scheme, int order, double alpha0,
                                 double phase) {
  if (scheme == Scheme::mask) return Constellation::mask(order, phase);
  if (alpha0 == 0.0) {
    if (order < 2) throw Error(ErrorCode::order, "modulation order must be >= 2");
    return Constellation::from_points(std::vector<Complex>(static_cast<std::size_t>(order)));
  }
  return Constellation::mpsk(order, alpha0, wrap_phase(phase, kTwoPi / order));
}

RateRow run_rate(const Scenario& s) {
  const ChannelTriple ch = s.channel();
  RateRow r;
  r.scheme = s.scheme;
  r.order = s.order;
  r.phase_rad = s.resolved_phase(ch);
  r.alpha0 = s.scheme == Scheme::mpsk ? s.psk_amplitude(s.order) : 1.0;
  const Constellation c = s.constellation(ch);
  const RateReport rep = rate_gain(s.system, ch, c);
  r.pt_rate = rep.pt_rate;
  r.no_bd_rate = rep.no_bd_rate;
  r.gain = rep.gain;
  r.bd_rate = bd_rate(s.system, ch, c, s.mi_tolerance, s.quadrature).value_bits;
  return r;
}

PhaseSweep run_phase_sweep(const Scenario& s, const RunOptions& opt) {
  const ChannelTriple ch = s.channel();
  const SweepSpec* spec = sweep_for(s, SweepVariable::phase);
  const int steps = resolve_steps(spec, opt, kDefaultPhaseSteps);
  const double alpha = s.psk_amplitude(s.order);
  const double lo = spec && spec->lo ? *spec->lo : 0.0;
  const double hi = spec && spec->hi ? *spec->hi
                    : s.scheme == Scheme::mask ? kTwoPi
                                               : kTwoPi / s.order;

  PhaseSweep out;
  out.theta0 = theta0_or_zero(ch);
  out.optimal_phase = s.scheme == Scheme::mask
                          ? optimal_phase_ask(out.theta0).phase_rad
                          : optimal_phase_psk(out.theta0, s.order).phase_rad;
  out.optimal_rate = pt_rate_finite(
      s.system, ch, make_constellation(s.scheme, s.order, alpha, out.optimal_phase));
  out.no_bd_rate = pt_rate_no_bd(s.system, ch);

  if (steps == 1) {
    out.phase_rad = {s.resolved_phase(ch)};
  } else {
    out.phase_rad.resize(static_cast<std::size_t>(steps));
    for (int k = 0; k < steps; ++k) {
      out.phase_rad[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / steps;
    }
  }
  out.pt_rate = detail::parallel_map<double>(out.phase_rad.size(), [&](std::size_t k) {
    return pt_rate_finite(s.system, ch,
                          make_constellation(s.scheme, s.order, alpha, out.phase_rad[k]));
  });
  return out;
}

RatioSweep run_ratio_sweep(const Scenario& s, const RunOptions& opt) {
  const ChannelTriple ch = s.channel();
  if (!ch.has_backscatter()) {
    throw ScenarioError("ratio sweep needs nonzero h2 and h3");
  }
  const SweepSpec* spec = sweep_for(s, SweepVariable::ratio);
  const int steps = resolve_steps(spec, opt, kDefaultRatioSteps);
  const double lo = spec && spec->lo ? *spec->lo : kDefaultRatioLo;
  const double hi = spec && spec->hi ? *spec->hi : kDefaultRatioHi;
  const double b2 = ch.amp2();
  const double b3 = ch.amp3();
  const double theta0 = ch.amp1() > 0.0 ? composite_phase(ch) : 0.0;
  const double alpha = equal_power_psk_amplitude(s.order);

  RatioSweep out;
  out.ratio.resize(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) {
    out.ratio[static_cast<std::size_t>(k)] =
        steps == 1 ? lo : lo + (hi - lo) * k / (steps - 1);
  }
  struct Pair {
    double ask, psk;
  };
  const auto rates = detail::parallel_map<Pair>(out.ratio.size(), [&](std::size_t k) {
    const auto c = ChannelTriple::from_amplitudes(out.ratio[k] * b2 * b3, b2, b3, theta0);
    return Pair{max_pt_rate_ask(s.system, c, s.order),
                max_pt_rate_psk(s.system, c, s.order, alpha)};
  });
  for (const auto& p : rates) {
    out.rate_ask.push_back(p.ask);
    out.rate_psk.push_back(p.psk);
  }

  // Sign changes of ask - psk, skipping exact zeros when bracketing.
  int prev = -1;
  for (std::size_t k = 0; k < rates.size(); ++k) {
    const double d = rates[k].ask - rates[k].psk;
    if (d == 0.0) continue;
    if (prev >= 0) {
      const double dp = rates[static_cast<std::size_t>(prev)].ask -
                        rates[static_cast<std::size_t>(prev)].psk;
      if ((dp < 0.0) != (d < 0.0)) {
        double a = out.ratio[static_cast<std::size_t>(prev)];
        double b = out.ratio[k];
        const bool a_negative = dp < 0.0;
        for (int it = 0; it < 200 && b - a > 1e-15 * b; ++it) {
          const double mid = 0.5 * (a + b);
          const double dm = rate_difference(s.system, mid, b2, b3, theta0, s.order, alpha);
          if (dm == 0.0) {
            a = b = mid;
            break;
          }
          if ((dm < 0.0) == a_negative) {
            a = mid;
          } else {
            b = mid;
          }
        }
        out.crossings.push_back(0.5 * (a + b));
      }
    }
    prev = static_cast<int>(k);
  }
  return out;
}

OrderSweep run_order_sweep(const Scenario& s) {
  const ChannelTriple ch = s.channel();
  const SweepSpec* spec = sweep_for(s, SweepVariable::order);
  const int lo = spec && spec->lo ? static_cast<int>(*spec->lo) : kDefaultOrderLo;
  const int hi = spec && spec->hi ? static_cast<int>(*spec->hi) : kDefaultOrderHi;

  OrderSweep out;
  if (lo == hi) {
    out.order = {lo};
  } else {
    for (int m = 2; m <= hi; m *= 2) {
      if (m >= lo) out.order.push_back(m);
    }
  }
  if (out.order.empty()) throw ScenarioError("order sweep range holds no power of two");

  const double theta0 = theta0_or_zero(ch);
  struct Row {
    double ask, psk, fixed;
  };
  const auto rows = detail::parallel_map<Row>(out.order.size(), [&](std::size_t i) {
    const int m = out.order[i];
    const double alpha = s.psk_amplitude(m);
    return Row{max_pt_rate_ask(s.system, ch, m), max_pt_rate_psk(s.system, ch, m, alpha),
               pt_rate_finite(s.system, ch,
                              make_constellation(Scheme::mpsk, m, alpha, s.fixed_phase))};
  });
  for (const auto& r : rows) {
    out.ask_opt.push_back(r.ask);
    out.psk_opt.push_back(r.psk);
    out.psk_fixed.push_back(r.fixed);
  }
  out.no_bd_rate = pt_rate_no_bd(s.system, ch);
  out.psk_infinite = pt_rate_psk_infinite(s.system, ch, s.psk_amplitude(out.order.back()));
  out.ask_infinite = ch.has_backscatter()
                         ? pt_rate_ask_infinite(s.system, ch,
                                                optimal_phase_ask(theta0).phase_rad)
                         : out.no_bd_rate;
  return out;
}

PhaseSolution run_optimize(const Scenario& s, const RunOptions& opt) {
  const ChannelTriple ch = s.channel();
  const PhaseOptProblem problem = s.problem();
  if (problem.scheme == Scheme::mpsk && problem.alpha0 == 0.0) {
    throw ScenarioError("'modulation.alpha0' must be > 0 for optimize");
  }
  PhaseSolution sol = solve_phase_problem(problem, s.system, ch);
  const int points = opt.grid.value_or(kVerificationGridPoints);
  if (points < 3) throw ScenarioError("optimize grid must have at least 3 points");
  const double hi = problem.scheme == Scheme::mask ? kTwoPi : kTwoPi / problem.order;
  const GridResult g = grid_search_phase(
      [&](double phi) { return pt_rate_finite(s.system, ch, problem.constellation(phi)); },
      0.0, hi, points);
  sol.grid = GridCheck{g.phase, g.value, sol.achieved_pt_rate >= g.value - 1e-10};
  return sol;
}

MiReport run_mi(const Scenario& s) {
  const ChannelTriple ch = s.channel();
  const Constellation c = s.constellation(ch);
  MiReport r;
  r.stats = mrc_statistics(s.system, ch);
  r.quadrature = mi_quadrature(c, r.stats, s.mi_tolerance, s.quadrature);
  r.monte_carlo = mi_monte_carlo(c, r.stats, s.mc_samples, s.seed);
  return r;
}

bool is_known_command(std::string_view command) {
  return command == "rate" || command == "phase-sweep" || command == "ratio-sweep" ||
         command == "order-sweep" || command == "optimize" || command == "mi";
}

std::string run_command(const Scenario& s, std::string_view command,
                        const RunOptions& opt) {
  if (!is_known_command(command)) {
    throw Error(ErrorCode::invalid_argument, "unknown command '" + std::string(command) + "'");
  }
  Csv csv(s, command);

  if (command == "rate") {
    const RateRow r = run_rate(s);
    csv.row({"scheme", "order", "phase_rad", "alpha0", "pt_rate", "no_bd_rate", "gain",
             "bd_rate"});
    csv.row({to_string(r.scheme), std::to_string(r.order), num(r.phase_rad), num(r.alpha0),
             num(r.pt_rate), num(r.no_bd_rate), num(r.gain), num(r.bd_rate)});
  } else if (command == "phase-sweep") {
    const PhaseSweep p = run_phase_sweep(s, opt);
    csv.meta("scheme", to_string(s.scheme));
    csv.meta("order", std::to_string(s.order));
    csv.meta("theta0_rad", p.theta0);
    csv.row({"phase_rad", "pt_rate", "no_bd_rate"});
    for (std::size_t k = 0; k < p.phase_rad.size(); ++k) {
      csv.row({num(p.phase_rad[k]), num(p.pt_rate[k]), num(p.no_bd_rate)});
    }
    csv.meta("optimum_phase_rad", p.optimal_phase);
    csv.meta("optimum_pt_rate", p.optimal_rate);
  } else if (command == "ratio-sweep") {
    const RatioSweep r = run_ratio_sweep(s, opt);
    csv.meta("order", std::to_string(s.order));
    csv.meta("psk_alpha0", equal_power_psk_amplitude(s.order));
    csv.row({"ratio", "rate_ask_opt", "rate_psk_opt"});
    for (std::size_t k = 0; k < r.ratio.size(); ++k) {
      csv.row({num(r.ratio[k]), num(r.rate_ask[k]), num(r.rate_psk[k])});
    }
    csv.meta("crossings", std::to_string(r.crossings.size()));
    for (double x : r.crossings) csv.meta("crossing_ratio", x);
  } else if (command == "order-sweep") {
    const OrderSweep o = run_order_sweep(s);
    csv.meta("fixed_phase_rad", s.fixed_phase);
    csv.meta("ask_infinite", o.ask_infinite);
    csv.row({"order", "ask_opt", "psk_opt", "psk_fixed", "psk_infinite", "no_bd_rate"});
    for (std::size_t i = 0; i < o.order.size(); ++i) {
      csv.row({std::to_string(o.order[i]), num(o.ask_opt[i]), num(o.psk_opt[i]),
               num(o.psk_fixed[i]), num(o.psk_infinite), num(o.no_bd_rate)});
    }
  } else if (command == "optimize") {
    const PhaseSolution p = run_optimize(s, opt);
    const ChannelTriple ch = s.channel();
    csv.row({"scheme", "order", "theta0_rad", "phase_rad", "wrap_index", "pt_rate",
             "bd_rate", "min_bd_rate", "feasible", "grid_phase_rad", "grid_pt_rate",
             "grid_agrees"});
    csv.row({to_string(s.scheme), std::to_string(s.order), num(theta0_or_zero(ch)),
             num(p.phase_rad), std::to_string(p.wrap_index), num(p.achieved_pt_rate),
             num(p.bd_rate_bits.value_or(0.0)), num(s.min_bd_rate_bits),
             p.feasible ? "true" : "false", num(p.grid->phase), num(p.grid->value),
             p.grid->agrees ? "true" : "false"});
  } else {
    const MiReport m = run_mi(s);
    csv.meta("gain", m.stats.gain);
    csv.meta("noise_var", m.stats.noise_var);
    csv.meta("seed", std::to_string(s.seed));
    csv.row({"method", "value_bits", "std_error_bits", "nodes", "samples"});
    for (const MiEstimate* e : {&m.quadrature, &m.monte_carlo}) {
      csv.row({to_string(e->method), num(e->value_bits), num(e->std_error_bits),
               std::to_string(e->nodes), std::to_string(e->samples)});
    }
  }
  return std::move(csv).str();
}

}  // namespace sbc
