#include "sbc/sbc.h"

#include <cstring>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "sbc/bd_rate.hpp"
#include "sbc/error.hpp"
#include "sbc/experiments.hpp"
#include "sbc/link_sim.hpp"
#include "sbc/phase_opt.hpp"
#include "sbc/pt_rate.hpp"
#include "sbc/scenario.hpp"

struct sbc_scenario {
  std::string text;
  sbc::Scenario scenario;
  sbc::RunOptions options;
  std::string warning;
};

namespace {

thread_local std::string g_last_error;

sbc_status fail(sbc_status st, const std::string& what) {
  g_last_error = what;
  return st;
}

template <typename Fn>
sbc_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return SBC_OK;
  } catch (const sbc::PrecisionError& e) {
    return fail(SBC_ERR_PRECISION, e.what());
  } catch (const sbc::ScenarioError& e) {
    return fail(SBC_ERR_SCENARIO, e.what());
  } catch (const sbc::Error& e) {
    return fail(e.code() == sbc::ErrorCode::invalid_argument ? SBC_ERR_INVALID_ARGUMENT
                                                             : SBC_ERR_DOMAIN,
                e.what());
  } catch (const std::exception& e) {
    return fail(SBC_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SBC_ERR_INTERNAL, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* p = new char[s.size() + 1];
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

sbc::Complex to_cpp(sbc_complex z) { return {z.re, z.im}; }

sbc::ChannelTriple to_cpp(const sbc_channel& ch) {
  return sbc::ChannelTriple(to_cpp(ch.h1), to_cpp(ch.h2), to_cpp(ch.h3));
}

sbc::SystemParams to_cpp(const sbc_system& sys) {
  sbc::SystemParams p{sys.power_w, sys.noise_w, sys.spread};
  p.validate();
  return p;
}

sbc::Scheme to_cpp(sbc_scheme scheme) {
  if (scheme == SBC_MASK) return sbc::Scheme::mask;
  if (scheme == SBC_MPSK) return sbc::Scheme::mpsk;
  throw sbc::Error(sbc::ErrorCode::invalid_argument, "unknown scheme");
}

void require(const void* p, const char* name) {
  if (p == nullptr) {
    throw sbc::Error(sbc::ErrorCode::invalid_argument, std::string(name) + " is NULL");
  }
}

void reload(sbc_scenario& h, std::string text) {
  sbc::Scenario parsed = sbc::parse_scenario(text);
  h.text = std::move(text);
  h.scenario = std::move(parsed);
  h.warning = sbc::spread_warning(h.scenario.system).value_or("");
}

sbc_status make_handle(std::string text, sbc_scenario** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    auto h = std::make_unique<sbc_scenario>();
    reload(*h, std::move(text));
    *out = h.release();
  });
}

}  // namespace

extern "C" {

const char* sbc_version(void) { return "0.1.0"; }

const char* sbc_last_error(void) { return g_last_error.c_str(); }

void sbc_string_free(char* s) { delete[] s; }

sbc_status sbc_scenario_default(sbc_scenario** out) {
  return make_handle(sbc::default_scenario_text(), out);
}

sbc_status sbc_scenario_load_file(const char* path, sbc_scenario** out) {
  if (path == nullptr) return fail(SBC_ERR_INVALID_ARGUMENT, "path is NULL");
  std::string text;
  const sbc_status st = guarded([&] {
    std::ifstream in(path);
    if (!in) throw sbc::ScenarioError(std::string("cannot open scenario file '") + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  });
  if (st != SBC_OK) return st;
  return make_handle(std::move(text), out);
}

sbc_status sbc_scenario_load_string(const char* text, sbc_scenario** out) {
  if (text == nullptr) return fail(SBC_ERR_INVALID_ARGUMENT, "text is NULL");
  return make_handle(text, out);
}

void sbc_scenario_free(sbc_scenario* s) { delete s; }

sbc_status sbc_scenario_override(sbc_scenario* s, const char* assignment) {
  return guarded([&] {
    require(s, "scenario");
    require(assignment, "assignment");
    reload(*s, sbc::apply_override(s->text, assignment));
  });
}

sbc_status sbc_scenario_set_seed(sbc_scenario* s, uint64_t seed) {
  return guarded([&] {
    require(s, "scenario");
    reload(*s, sbc::apply_override(s->text, "seed=" + std::to_string(seed)));
  });
}

sbc_status sbc_scenario_set_grid(sbc_scenario* s, int grid) {
  return guarded([&] {
    require(s, "scenario");
    if (grid < 0) throw sbc::Error(sbc::ErrorCode::invalid_argument, "grid must be >= 0");
    s->options.grid = grid == 0 ? std::nullopt : std::optional<int>(grid);
  });
}

sbc_status sbc_scenario_to_string(const sbc_scenario* s, char** out) {
  return guarded([&] {
    require(s, "scenario");
    require(out, "out");
    *out = dup_string(sbc::to_text(s->scenario));
  });
}

const char* sbc_scenario_warning(const sbc_scenario* s) {
  if (s == nullptr || s->warning.empty()) return nullptr;
  return s->warning.c_str();
}

sbc_status sbc_run(const sbc_scenario* s, const char* command, char** csv_out) {
  return guarded([&] {
    require(s, "scenario");
    require(command, "command");
    require(csv_out, "csv_out");
    *csv_out = nullptr;
    *csv_out = dup_string(sbc::run_command(s->scenario, command, s->options));
  });
}

sbc_status sbc_composite_phase(const sbc_channel* ch, double* out) {
  return guarded([&] {
    require(ch, "channel");
    require(out, "out");
    *out = sbc::composite_phase(to_cpp(*ch));
  });
}

sbc_status sbc_pt_rate_no_bd(const sbc_system* sys, const sbc_channel* ch, double* out) {
  return guarded([&] {
    require(sys, "system");
    require(ch, "channel");
    require(out, "out");
    *out = sbc::pt_rate_no_bd(to_cpp(*sys), to_cpp(*ch));
  });
}

sbc_status sbc_pt_rate(const sbc_system* sys, const sbc_channel* ch, sbc_scheme scheme,
                       int order, double alpha0, double phase, double* out) {
  return guarded([&] {
    require(sys, "system");
    require(ch, "channel");
    require(out, "out");
    const auto c = sbc::make_constellation(to_cpp(scheme), order, alpha0, phase);
    *out = sbc::pt_rate_finite(to_cpp(*sys), to_cpp(*ch), c);
  });
}

sbc_status sbc_pt_rate_ask_infinite(const sbc_system* sys, const sbc_channel* ch,
                                    double phase, double* out) {
  return guarded([&] {
    require(sys, "system");
    require(ch, "channel");
    require(out, "out");
    *out = sbc::pt_rate_ask_infinite(to_cpp(*sys), to_cpp(*ch), phase);
  });
}

sbc_status sbc_pt_rate_psk_infinite(const sbc_system* sys, const sbc_channel* ch,
                                    double alpha0, double* out) {
  return guarded([&] {
    require(sys, "system");
    require(ch, "channel");
    require(out, "out");
    *out = sbc::pt_rate_psk_infinite(to_cpp(*sys), to_cpp(*ch), alpha0);
  });
}

sbc_status sbc_bd_rate(const sbc_system* sys, const sbc_channel* ch, sbc_scheme scheme,
                       int order, double alpha0, double phase, double* out) {
  return guarded([&] {
    require(sys, "system");
    require(ch, "channel");
    require(out, "out");
    const auto c = sbc::make_constellation(to_cpp(scheme), order, alpha0, phase);
    *out = sbc::bd_rate(to_cpp(*sys), to_cpp(*ch), c).value_bits;
  });
}

sbc_status sbc_optimal_phase(sbc_scheme scheme, double theta0, int order, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = to_cpp(scheme) == sbc::Scheme::mask
               ? sbc::optimal_phase_ask(theta0).phase_rad
               : sbc::optimal_phase_psk(theta0, order).phase_rad;
  });
}

}  // extern "C"
