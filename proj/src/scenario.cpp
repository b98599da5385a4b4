#include "sbc/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "sbc/error.hpp"

namespace sbc {

using nlohmann::json;

namespace {

// Reads one JSON object, remembering which keys were consumed so that
// leftovers can be reported as unknown.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) fail("", "must be an object");
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  const json& raw(const std::string& key) {
    used_.insert(key);
    return node_.at(key);
  }

  double number(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number()) fail(key, "must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(key, "must be finite");
    return d;
  }

  std::int64_t integer(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number_integer()) fail(key, "must be an integer");
    return v.get<std::int64_t>();
  }

  std::string text(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_string()) fail(key, "must be a string");
    return v.get<std::string>();
  }

  Complex complex(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      fail(key, "must be a [re, im] pair");
    }
    return {v[0].get<double>(), v[1].get<double>()};
  }

  // Linear value from either `key` or `key_db` (or `key_dbm` for powers).
  double linear(const std::string& key, const char* db_suffix, double (*convert)(double)) {
    const std::string db_key = key + db_suffix;
    if (has(key) && has(db_key)) fail(key, std::string("conflicts with ") + db_key);
    if (has(db_key)) return convert(number(db_key));
    if (has(key)) return number(key);
    fail(key, std::string("is required (or ") + db_key + ")");
  }

  Section child(const std::string& key) {
    return Section(raw(key), qualified(key));
  }

  void finish() const {
    for (const auto& item : node_.items()) {
      if (!used_.contains(item.key())) {
        throw ScenarioError("unknown key '" + qualified(item.key()) + "'");
      }
    }
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ScenarioError("'" + qualified(key) + "' " + what);
  }

  std::string qualified(const std::string& key) const {
    if (path_.empty()) return key;
    if (key.empty()) return path_;
    return path_ + "." + key;
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> used_;
};

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

SweepVariable parse_variable(Section& sec, const std::string& key) {
  const std::string v = sec.text(key);
  if (v == "phase") return SweepVariable::phase;
  if (v == "ratio") return SweepVariable::ratio;
  if (v == "order") return SweepVariable::order;
  sec.fail(key, "must be one of phase, ratio, order");
}

Scenario from_json(const json& doc) {
  Scenario s;
  s.fading_sets.clear();
  Section root(doc, "");

  if (root.has("path_loss")) {
    Section pl = root.child("path_loss");
    s.path_loss.wavelength_m = pl.number("wavelength_m");
    s.path_loss.exponent = pl.number("exponent");
    s.path_loss.gain_pt = pl.linear("gain_pt", "_db", db_to_linear);
    s.path_loss.gain_rx = pl.linear("gain_rx", "_db", db_to_linear);
    s.path_loss.gain_bd = pl.linear("gain_bd", "_db", db_to_linear);
    s.path_loss.d1_m = pl.number("d1_m");
    s.path_loss.d2_m = pl.number("d2_m");
    s.path_loss.d3_m = pl.number("d3_m");
    pl.finish();
  }

  if (root.has("fading")) {
    Section fad = root.child("fading");
    if (fad.has("use")) s.fading_use = fad.text("use");
    Section sets = fad.child("sets");
    for (const auto& item : fad.raw("sets").items()) {
      Section one = sets.child(item.key());
      FadingSet f{one.complex("l1"), one.complex("l2"), one.complex("l3")};
      one.finish();
      s.fading_sets.emplace(item.key(), f);
    }
    sets.finish();
    fad.finish();
  }

  if (root.has("channels")) {
    Section chs = root.child("channels");
    s.channels = std::array<Complex, 3>{chs.complex("h1"), chs.complex("h2"),
                                        chs.complex("h3")};
    chs.finish();
  }

  {
    Section sys = root.child("system");
    s.system.power_w = sys.number("power_w");
    s.system.noise_w = sys.linear("noise_w", "_dbm", dbm_to_watts);
    const std::int64_t spread = sys.integer("spread");
    if (spread < 1 || spread > (1 << 24)) sys.fail("spread", "must lie in [1, 2^24]");
    s.system.spread = static_cast<int>(spread);
    sys.finish();
  }

  {
    Section mod = root.child("modulation");
    const std::string scheme = mod.text("scheme");
    if (scheme == "mask") {
      s.scheme = Scheme::mask;
    } else if (scheme == "mpsk") {
      s.scheme = Scheme::mpsk;
    } else {
      mod.fail("scheme", "must be 'mask' or 'mpsk'");
    }
    const std::int64_t order = mod.integer("order");
    if (order < 2 || order > 4096) mod.fail("order", "must lie in [2, 4096]");
    s.order = static_cast<int>(order);
    if (mod.has("alpha0")) {
      const json& a = mod.raw("alpha0");
      if (a.is_string() && a.get<std::string>() == "equal-power") {
        s.alpha0.reset();
      } else if (a.is_number()) {
        s.alpha0 = a.get<double>();
      } else {
        mod.fail("alpha0", "must be a number or \"equal-power\"");
      }
    }
    if (mod.has("phase")) {
      const json& p = mod.raw("phase");
      if (p.is_string() && p.get<std::string>() == "optimal") {
        s.phase.reset();
      } else if (p.is_number()) {
        s.phase = p.get<double>();
      } else {
        mod.fail("phase", "must be a number or \"optimal\"");
      }
    }
    mod.finish();
  }

  if (root.has("sweep")) {
    Section sw = root.child("sweep");
    if (sw.has("variable")) {
      SweepSpec spec;
      spec.variable = parse_variable(sw, "variable");
      if (sw.has("lo")) spec.lo = sw.number("lo");
      if (sw.has("hi")) spec.hi = sw.number("hi");
      if (sw.has("steps")) {
        const std::int64_t steps = sw.integer("steps");
        if (steps < 1 || steps > 10000000) sw.fail("steps", "must lie in [1, 1e7]");
        spec.steps = static_cast<int>(steps);
      }
      s.sweep = spec;
    }
    if (sw.has("fixed_phase")) s.fixed_phase = sw.number("fixed_phase");
    sw.finish();
  }

  if (root.has("constraint")) {
    Section con = root.child("constraint");
    s.min_bd_rate_bits = con.number("min_bd_rate_bits");
    con.finish();
  }

  if (root.has("quadrature")) {
    Section q = root.child("quadrature");
    if (q.has("tolerance")) s.mi_tolerance = q.number("tolerance");
    if (q.has("initial_nodes")) {
      s.quadrature.initial_nodes = static_cast<int>(std::clamp<std::int64_t>(
          q.integer("initial_nodes"), 0, 1 << 20));
    }
    if (q.has("max_nodes")) {
      s.quadrature.max_nodes =
          static_cast<int>(std::clamp<std::int64_t>(q.integer("max_nodes"), 0, 1 << 20));
    }
    q.finish();
  }

  if (root.has("monte_carlo")) {
    Section mc = root.child("monte_carlo");
    s.mc_samples = mc.integer("samples");
    mc.finish();
  }

  if (root.has("seed")) {
    const json& v = root.raw("seed");
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      root.fail("seed", "must be a non-negative integer");
    }
    s.seed = v.get<std::uint64_t>();
  }

  root.finish();
  s.validate();
  return s;
}

json to_json(const Scenario& s) {
  json doc = json::object();
  doc["path_loss"] = {
      {"wavelength_m", s.path_loss.wavelength_m}, {"exponent", s.path_loss.exponent},
      {"gain_pt", s.path_loss.gain_pt},           {"gain_rx", s.path_loss.gain_rx},
      {"gain_bd", s.path_loss.gain_bd},           {"d1_m", s.path_loss.d1_m},
      {"d2_m", s.path_loss.d2_m},                 {"d3_m", s.path_loss.d3_m}};
  json sets = json::object();
  for (const auto& [name, f] : s.fading_sets) {
    sets[name] = {{"l1", complex_json(f.l1)},
                  {"l2", complex_json(f.l2)},
                  {"l3", complex_json(f.l3)}};
  }
  doc["fading"] = {{"use", s.fading_use}, {"sets", sets}};
  if (s.channels) {
    doc["channels"] = {{"h1", complex_json((*s.channels)[0])},
                       {"h2", complex_json((*s.channels)[1])},
                       {"h3", complex_json((*s.channels)[2])}};
  }
  doc["system"] = {{"power_w", s.system.power_w},
                   {"noise_w", s.system.noise_w},
                   {"spread", s.system.spread}};
  json mod = {{"scheme", to_string(s.scheme)}, {"order", s.order}};
  mod["alpha0"] = s.alpha0 ? json(*s.alpha0) : json("equal-power");
  mod["phase"] = s.phase ? json(*s.phase) : json("optimal");
  doc["modulation"] = mod;
  json sweep = {{"fixed_phase", s.fixed_phase}};
  if (s.sweep) {
    sweep["variable"] = to_string(s.sweep->variable);
    if (s.sweep->lo) sweep["lo"] = *s.sweep->lo;
    if (s.sweep->hi) sweep["hi"] = *s.sweep->hi;
    if (s.sweep->steps) sweep["steps"] = *s.sweep->steps;
  }
  doc["sweep"] = sweep;
  doc["constraint"] = {{"min_bd_rate_bits", s.min_bd_rate_bits}};
  doc["quadrature"] = {{"tolerance", s.mi_tolerance},
                       {"initial_nodes", s.quadrature.initial_nodes},
                       {"max_nodes", s.quadrature.max_nodes}};
  doc["monte_carlo"] = {{"samples", s.mc_samples}};
  doc["seed"] = s.seed;
  return doc;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("malformed scenario text: ") + e.what());
  }
}

}  // namespace

const char* to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::phase:
      return "phase";
    case SweepVariable::ratio:
      return "ratio";
    case SweepVariable::order:
      return "order";
  }
  return "?";
}

ChannelTriple Scenario::channel() const {
  if (channels) return ChannelTriple((*channels)[0], (*channels)[1], (*channels)[2]);
  const auto it = fading_sets.find(fading_use);
  if (it == fading_sets.end()) {
    throw ScenarioError("'fading.use' names unknown set '" + fading_use + "'");
  }
  const FadingSet& f = it->second;
  return ChannelTriple(make_channel(sbc::path_loss(path_loss, Link::direct), f.l1),
                       make_channel(sbc::path_loss(path_loss, Link::pt_to_bd), f.l2),
                       make_channel(sbc::path_loss(path_loss, Link::bd_to_rx), f.l3));
}

double Scenario::psk_amplitude(int m) const {
  return alpha0 ? *alpha0 : equal_power_psk_amplitude(m);
}

double Scenario::resolved_phase(const ChannelTriple& ch) const {
  if (phase) return *phase;
  const double theta0 =
      ch.amp1() > 0.0 && ch.has_backscatter() ? composite_phase(ch) : 0.0;
  return scheme == Scheme::mask ? optimal_phase_ask(theta0).phase_rad
                                : optimal_phase_psk(theta0, order).phase_rad;
}

Constellation Scenario::constellation(const ChannelTriple& ch) const {
  const double phi = resolved_phase(ch);
  if (scheme == Scheme::mask) return Constellation::mask(order, phi);
  const double amp = psk_amplitude(order);
  // alpha0 = 0 switches the BD off; the all-zero alphabet is explicit.
  if (amp == 0.0) {
    return Constellation::from_points(std::vector<Complex>(static_cast<std::size_t>(order)));
  }
  return Constellation::mpsk(order, amp, phi);
}

PhaseOptProblem Scenario::problem() const {
  PhaseOptProblem p;
  p.scheme = scheme;
  p.order = order;
  p.alpha0 = scheme == Scheme::mpsk ? psk_amplitude(order) : 1.0;
  p.min_bd_rate_bits = min_bd_rate_bits;
  return p;
}

void Scenario::validate() const {
  auto wrap = [](const char* section, auto&& fn) {
    try {
      fn();
    } catch (const ScenarioError&) {
      throw;
    } catch (const Error& e) {
      throw ScenarioError(std::string("'") + section + "': " + e.what());
    }
  };
  if (!channels) {
    wrap("path_loss", [&] { path_loss.validate(); });
    if (!fading_sets.contains(fading_use)) {
      throw ScenarioError("'fading.use' names unknown set '" + fading_use + "'");
    }
  }
  wrap("system", [&] { system.validate(); });
  wrap("channels", [&] { (void)channel(); });
  if (order < 2) throw ScenarioError("'modulation.order' must be >= 2");
  if (alpha0 && !(*alpha0 >= 0.0 && *alpha0 <= 1.0)) {
    throw ScenarioError("'modulation.alpha0' must lie in [0, 1]");
  }
  if (phase) {
    if (!std::isfinite(*phase)) throw ScenarioError("'modulation.phase' must be finite");
    if (scheme == Scheme::mpsk && !(*phase >= 0.0 && *phase < kTwoPi / order)) {
      throw ScenarioError("'modulation.phase' must lie in [0, 2pi/M) for mpsk");
    }
  }
  if (!std::isfinite(fixed_phase)) throw ScenarioError("'sweep.fixed_phase' must be finite");
  if (!(min_bd_rate_bits >= 0.0)) {
    throw ScenarioError("'constraint.min_bd_rate_bits' must be >= 0");
  }
  if (!(mi_tolerance > 0.0)) throw ScenarioError("'quadrature.tolerance' must be > 0");
  if (quadrature.initial_nodes < 2 || quadrature.max_nodes < quadrature.initial_nodes ||
      quadrature.max_nodes > 4096) {
    throw ScenarioError(
        "'quadrature' needs 2 <= initial_nodes <= max_nodes <= 4096");
  }
  if (mc_samples < 10000) throw ScenarioError("'monte_carlo.samples' must be >= 1e4");
  if (sweep) {
    if (sweep->lo && sweep->hi && !(*sweep->lo < *sweep->hi) &&
        sweep->variable != SweepVariable::order) {
      throw ScenarioError("'sweep.lo' must be < 'sweep.hi'");
    }
    if (sweep->variable == SweepVariable::ratio && sweep->lo && !(*sweep->lo > 0.0)) {
      throw ScenarioError("'sweep.lo' must be > 0 for a ratio sweep");
    }
    if (sweep->variable == SweepVariable::order) {
      if ((sweep->lo && *sweep->lo < 2) || (sweep->hi && *sweep->hi > 4096) ||
          (sweep->lo && sweep->hi && *sweep->lo > *sweep->hi)) {
        throw ScenarioError("'sweep.lo'/'sweep.hi' must satisfy 2 <= lo <= hi <= 4096");
      }
    }
  }
}

std::string default_scenario_text() {
  return R"({
  "path_loss": {
    "wavelength_m": 0.33,
    "exponent": 3.5,
    "gain_pt_db": 6,
    "gain_rx_db": 6,
    "gain_bd_db": 6,
    "d1_m": 200,
    "d2_m": 200,
    "d3_m": 0.36
  },
  "fading": {
    "use": "primary",
    "sets": {
      "primary": {
        "l1": [0.3421, -0.4988],
        "l2": [-0.0139, -0.4378],
        "l3": [-0.5246, -1.0546]
      },
      "alternate": {
        "l1": [0.2651, 0.0031],
        "l2": [-1.2621, 0.0425],
        "l3": [-0.3110, -0.7787]
      }
    }
  },
  "system": {
    "power_w": 0.05,
    "noise_w_dbm": -100,
    "spread": 128
  },
  "modulation": {
    "scheme": "mask",
    "order": 2,
    "alpha0": 0.9,
    "phase": "optimal"
  },
  "seed": 1
}
)";
}

Scenario default_scenario() { return parse_scenario(default_scenario_text()); }

Scenario parse_scenario(std::string_view json_text) {
  const json doc = parse_json(json_text);
  try {
    return from_json(doc);
  } catch (const json::exception& e) {
    throw ScenarioError(std::string("invalid scenario: ") + e.what());
  }
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string apply_override(std::string_view json_text, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ScenarioError("override must look like key=value, got '" +
                        std::string(assignment) + "'");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string value_text(assignment.substr(eq + 1));
  json doc = parse_json(json_text);
  json value = json::parse(value_text, nullptr, false);
  if (value.is_discarded()) value = value_text;

  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? dot : dot - start);
    if (part.empty()) throw ScenarioError("override key '" + key + "' is malformed");
    if (!node->is_object()) {
      throw ScenarioError("override key '" + key + "' does not address an object");
    }
    if (dot == std::string::npos) {
      // A linear value replaces its dB spelling and the other way round.
      for (const char* suffix : {"_db", "_dbm"}) {
        node->erase(part + suffix);
        const std::string sfx(suffix);
        if (part.size() > sfx.size() && part.ends_with(sfx)) {
          node->erase(part.substr(0, part.size() - sfx.size()));
        }
      }
      (*node)[part] = value;
      break;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
  return doc.dump(2);
}

std::string to_text(const Scenario& s) { return to_json(s).dump(2) + "\n"; }

std::string scenario_hash(const Scenario& s) {
  const std::string text = to_json(s).dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace sbc
