#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <string>

#include "precs/bosonic.hpp"
#include "precs/cli.hpp"
#include "precs/errors.hpp"

namespace precs::cli {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

const json& object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  return j;
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(where + " must be finite");
  return v;
}

int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ConfigError(where + " must be an integer");
  return j.get<int>();
}

Complex complex_value(const json& j, const std::string& where) {
  if (j.is_number()) return number(j, where);
  if (!j.is_array() || j.size() != 2) {
    throw ConfigError(where + " must be a number or [re, im]");
  }
  return {number(j[0], where), number(j[1], where)};
}

QubitVector parse_qubit(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "plus") return {1.0, 0.0};
    if (s == "minus") return {0.0, 1.0};
    if (s == "superposition") return QubitVector(1.0, 1.0) / std::sqrt(2.0);
    throw ConfigError("initial_state.qubit: unknown preset '" + s + "'");
  }
  if (!j.is_array() || j.size() != 2) {
    throw ConfigError("initial_state.qubit must be a preset or [[re,im],[re,im]]");
  }
  QubitVector q(complex_value(j[0], "initial_state.qubit[0]"),
                complex_value(j[1], "initial_state.qubit[1]"));
  if (std::abs(q.norm() - 1.0) > 1e-12) {
    throw ConfigError("initial_state.qubit must be normalized");
  }
  return q;
}

QubitMatrix parse_qubit_matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_array() || j[0].size() != 2 ||
      !j[1].is_array() || j[1].size() != 2) {
    throw ConfigError(where + " must be a 2x2 array of [re, im] entries");
  }
  QubitMatrix m;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) m(r, c) = complex_value(j[r][c], where);
  }
  return m;
}

void parse_tolerances(const json& j, Tolerances& tol) {
  object(j, "tolerances");
  const std::pair<const char*, double Tolerances::*> fields[] = {
      {"hermitian", &Tolerances::hermitian},
      {"trace", &Tolerances::trace},
      {"positivity", &Tolerances::positivity},
      {"unitary", &Tolerances::unitary},
      {"truncation", &Tolerances::truncation},
      {"coherent", &Tolerances::coherent},
      {"normalization", &Tolerances::normalization},
      {"null_region", &Tolerances::null_region}};
  std::set<std::string> names;
  for (const auto& [name, member] : fields) {
    names.insert(name);
    if (j.contains(name)) {
      const double v = number(j[name], std::string("tolerances.") + name);
      if (!(v > 0.0)) throw ConfigError(std::string("tolerances.") + name + " must be positive");
      tol.*member = v;
    }
  }
  reject_unknown(j, names, "tolerances");
}

}  // namespace

RunConfig parse_config(const json& j) {
  object(j, "config");
  reject_unknown(j,
                 {"model", "omega", "g", "n_max", "grid", "integrator", "initial_state",
                  "tolerances", "output", "jc", "pd", "decoupled", "gamma_curve"},
                 "config");
  RunConfig cfg;

  if (!j.contains("model") || !j["model"].is_string()) {
    throw ConfigError("model must be \"pure-dephasing\" or \"jaynes-cummings\"");
  }
  const auto model = j["model"].get<std::string>();
  if (model == "pure-dephasing") {
    cfg.model = ModelKind::pure_dephasing;
  } else if (model == "jaynes-cummings") {
    cfg.model = ModelKind::jaynes_cummings;
  } else {
    throw ConfigError("unknown model '" + model + "'");
  }

  if (j.contains("omega")) cfg.omega = number(j["omega"], "omega");
  if (j.contains("g")) cfg.g = number(j["g"], "g");
  if (j.contains("n_max")) cfg.n_max = integer(j["n_max"], "n_max");
  if (!(cfg.omega > 0.0)) throw ConfigError("omega must be positive");
  if (!(cfg.g >= 0.0)) throw ConfigError("g must be nonnegative");
  if (cfg.n_max < 2 || cfg.n_max > 400) throw ConfigError("n_max must be in [2, 400]");

  if (j.contains("grid")) {
    const json& grid = object(j["grid"], "grid");
    reject_unknown(grid, {"R", "h"}, "grid");
    if (grid.contains("R")) cfg.grid_R = number(grid["R"], "grid.R");
    if (grid.contains("h")) cfg.grid_h = number(grid["h"], "grid.h");
  }
  if (!(cfg.grid_h > 0.0) || !(cfg.grid_h < cfg.grid_R)) {
    throw ConfigError("grid needs 0 < h < R");
  }

  cfg.dt = 1e-3 / cfg.omega;
  if (j.contains("integrator")) {
    const json& integ = object(j["integrator"], "integrator");
    reject_unknown(integ, {"dt", "t_end", "samples"}, "integrator");
    if (integ.contains("dt")) cfg.dt = number(integ["dt"], "integrator.dt");
    if (integ.contains("t_end")) cfg.t_end = number(integ["t_end"], "integrator.t_end");
    if (integ.contains("samples")) cfg.samples = integer(integ["samples"], "integrator.samples");
  }
  if (!(cfg.dt > 0.0)) throw ConfigError("integrator.dt must be positive");
  if (!(cfg.t_end > 0.0)) throw ConfigError("integrator.t_end must be positive");
  if (cfg.samples < 2) throw ConfigError("integrator.samples must be at least 2");

  if (j.contains("initial_state")) {
    const json& init = object(j["initial_state"], "initial_state");
    reject_unknown(init, {"qubit", "env"}, "initial_state");
    if (init.contains("qubit")) cfg.qubit = parse_qubit(init["qubit"]);
    if (init.contains("env")) {
      const json& env = object(init["env"], "initial_state.env");
      reject_unknown(env, {"coherent", "fock"}, "initial_state.env");
      if (env.size() != 1) {
        throw ConfigError("initial_state.env needs exactly one of coherent, fock");
      }
      if (env.contains("coherent")) {
        cfg.env = EnvKind::coherent;
        cfg.alpha0 = complex_value(env["coherent"], "initial_state.env.coherent");
      } else {
        cfg.env = EnvKind::fock;
        cfg.fock = integer(env["fock"], "initial_state.env.fock");
        if (cfg.fock < 0 || cfg.fock >= cfg.n_max) {
          throw ConfigError("initial_state.env.fock must be in [0, n_max)");
        }
      }
    }
  }

  if (j.contains("tolerances")) parse_tolerances(j["tolerances"], cfg.tol);

  if (j.contains("output")) {
    if (!j["output"].is_string()) throw ConfigError("output must be a string");
    cfg.output = j["output"].get<std::string>();
  }

  if (j.contains("jc")) {
    const json& jc = object(j["jc"], "jc");
    reject_unknown(jc, {"T_tilde", "H_eff"}, "jc");
    if (jc.contains("T_tilde")) cfg.T_tilde = number(jc["T_tilde"], "jc.T_tilde");
    if (jc.contains("H_eff")) cfg.H_tilde_eff = parse_qubit_matrix(jc["H_eff"], "jc.H_eff");
  }
  if (!(cfg.T_tilde >= 0.0)) throw ConfigError("jc.T_tilde must be nonnegative");
  if (max_norm(Matrix(cfg.H_tilde_eff - cfg.H_tilde_eff.adjoint())) > cfg.tol.hermitian) {
    throw ConfigError("jc.H_eff must be Hermitian");
  }

  if (j.contains("pd")) {
    const json& pd = object(j["pd"], "pd");
    reject_unknown(pd, {"h"}, "pd");
    if (pd.contains("h")) cfg.pd_h = number(pd["h"], "pd.h");
  }

  if (j.contains("decoupled")) {
    const json& dec = object(j["decoupled"], "decoupled");
    reject_unknown(dec, {"label"}, "decoupled");
    if (dec.contains("label")) {
      const auto mode = dec["label"].is_string() ? dec["label"].get<std::string>() : "";
      if (mode == "flowing") {
        cfg.label = LabelMode::flowing;
      } else if (mode == "static") {
        cfg.label = LabelMode::fixed;
      } else {
        throw ConfigError("decoupled.label must be \"flowing\" or \"static\"");
      }
    }
  }

  if (j.contains("gamma_curve")) {
    const json& gc = object(j["gamma_curve"], "gamma_curve");
    reject_unknown(gc, {"g_list", "threshold", "samples"}, "gamma_curve");
    if (gc.contains("g_list")) {
      if (!gc["g_list"].is_array() || gc["g_list"].empty()) {
        throw ConfigError("gamma_curve.g_list must be a nonempty array");
      }
      for (const auto& v : gc["g_list"]) {
        const double g = number(v, "gamma_curve.g_list");
        if (!(g > 0.0)) throw ConfigError("gamma_curve.g_list entries must be positive");
        cfg.g_list.push_back(g);
      }
    }
    if (gc.contains("threshold")) cfg.threshold = number(gc["threshold"], "gamma_curve.threshold");
    if (gc.contains("samples")) cfg.curve_samples = integer(gc["samples"], "gamma_curve.samples");
  }
  if (!(cfg.threshold > 0.0 && cfg.threshold < 1.0)) {
    throw ConfigError("gamma_curve.threshold must be in (0, 1)");
  }
  if (cfg.curve_samples < 2) throw ConfigError("gamma_curve.samples must be at least 2");

  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON config: ") + e.what());
  }
  return parse_config(j);
}

std::filesystem::path output_dir(const RunConfig& cfg) {
  if (const char* env = std::getenv("PRECS_OUT"); env != nullptr && *env != '\0') {
    return env;
  }
  return cfg.output;
}

JointState initial_state(const RunConfig& cfg) {
  const FockSpace fs(cfg.n_max);
  Vector env = Vector::Zero(cfg.n_max);
  if (cfg.env == EnvKind::coherent) {
    require_faithful(fs, CoherentPoint{cfg.alpha0}, cfg.tol);
    env = coherent_vector(fs, CoherentPoint{cfg.alpha0}, cfg.tol);
    env.normalize();
  } else {
    env(cfg.fock) = 1.0;
  }
  return JointState::product(cfg.qubit, env, cfg.tol);
}

std::vector<double> default_g_ladder(double omega) {
  return {1.0 * omega, 1.5 * omega, 2.0 * omega, 3.0 * omega, 4.0 * omega, 8.0 * omega};
}

}  // namespace precs::cli
