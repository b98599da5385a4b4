#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sbc/channel.hpp"
#include "sbc/constellation.hpp"
#include "sbc/phase_opt.hpp"

namespace sbc {

struct FadingSet {
  Complex l1;
  Complex l2;
  Complex l3;

  bool operator==(const FadingSet&) const = default;
};

enum class SweepVariable { phase, ratio, order };

const char* to_string(SweepVariable v);

struct SweepSpec {
  SweepVariable variable = SweepVariable::phase;
  std::optional<double> lo;
  std::optional<double> hi;
  std::optional<int> steps;

  bool operator==(const SweepSpec&) const = default;
};

// Everything a CLI run needs. Gains and powers are stored linear; the loader
// converts `_db` / `_dbm` keys.
struct Scenario {
  PathLossModel path_loss;
  std::map<std::string, FadingSet> fading_sets;
  std::string fading_use = "primary";
  // Explicit h1, h2, h3; replaces path loss and fading when present.
  std::optional<std::array<Complex, 3>> channels;

  SystemParams system;

  Scheme scheme = Scheme::mask;
  int order = 2;
  std::optional<double> alpha0;  // empty: equal average power to MASK
  std::optional<double> phase;   // empty: closed-form optimum

  std::optional<SweepSpec> sweep;
  double fixed_phase = 0.0;  // suboptimal MPSK phase in order sweeps

  double min_bd_rate_bits = 0.0;
  double mi_tolerance = kDefaultMiTolerance;
  QuadratureConfig quadrature;
  std::int64_t mc_samples = 1000000;
  std::uint64_t seed = 1;

  ChannelTriple channel() const;
  // alpha0 for MPSK at the given order (resolves equal-power).
  double psk_amplitude(int order) const;
  // Base phase for the configured scheme/order on the given channel.
  double resolved_phase(const ChannelTriple& ch) const;
  Constellation constellation(const ChannelTriple& ch) const;
  PhaseOptProblem problem() const;

  // Throws ScenarioError naming the offending field.
  void validate() const;

  bool operator==(const Scenario&) const = default;
};

// The simulation setup shipped with the toolkit: P = 0.05 W,
// s2 = -100 dBm, lambda = 0.33 m, v = 3.5, 6 dB gains, d1 = d2 = 200 m,
// d3 = 0.36 m, alpha0 = 0.9 and two fading triples.
Scenario default_scenario();
std::string default_scenario_text();

Scenario parse_scenario(std::string_view json_text);
Scenario load_scenario_file(const std::string& path);

// Applies "a.b.c=value" to scenario text. The value is read as JSON when it
// parses, otherwise as a string.
std::string apply_override(std::string_view json_text, std::string_view assignment);

// Canonical text form; parse_scenario(to_text(s)) == s.
std::string to_text(const Scenario& s);

// FNV-1a of the canonical text, as 16 hex digits.
std::string scenario_hash(const Scenario& s);

}  // namespace sbc
