#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "precs/operator.hpp"
#include "precs/precs.hpp"
#include "precs/tolerances.hpp"

namespace precs::cli {

enum class ModelKind { pure_dephasing, jaynes_cummings };
enum class EnvKind { coherent, fock };
enum class Engine { exact, gksl, decoupled };
enum class LabelMode { flowing, fixed };

struct RunConfig {
  ModelKind model = ModelKind::pure_dephasing;
  double omega = 1.0;
  double g = 0.2;
  int n_max = 40;
  double grid_R = 6.0;
  double grid_h = 0.05;
  double dt = 1e-3;
  double t_end = 6.283185307179586;
  int samples = 101;
  QubitVector qubit{QubitVector(1.0, 1.0) / std::sqrt(2.0)};
  EnvKind env = EnvKind::coherent;
  Complex alpha0{0.0, 0.0};
  int fock = 0;
  Tolerances tol;
  std::string output = ".";
  double T_tilde = 0.0;
  QubitMatrix H_tilde_eff = QubitMatrix::Zero();
  double pd_h = 0.0;
  LabelMode label = LabelMode::flowing;
  std::vector<double> g_list;  // empty: the default ladder in units of omega
  double threshold = 0.01;
  int curve_samples = 4096;
};

/// Parses and range-checks a configuration. Throws ConfigError.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

/// Output directory, with PRECS_OUT taking precedence over the config.
std::filesystem::path output_dir(const RunConfig& cfg);

/// Initial joint state. Throws TruncationError when a coherent label does
/// not fit in n_max.
JointState initial_state(const RunConfig& cfg);

std::vector<double> default_g_ladder(double omega);

/// Each command writes its files into output_dir(cfg) and returns the JSON
/// report it wrote.
nlohmann::json cmd_decompose(const RunConfig& cfg, double t = 0.0);
nlohmann::json cmd_lindblad_field(const RunConfig& cfg, double t);
nlohmann::json cmd_evolve(const RunConfig& cfg, Engine engine);
nlohmann::json cmd_gamma_curve(const RunConfig& cfg, std::vector<double> g_list);

/// Full front end. Returns the process exit code.
int run(int argc, char** argv);

}  // namespace precs::cli
