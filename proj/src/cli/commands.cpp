#include <omp.h>

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "precs/bosonic.hpp"
#include "precs/cli.hpp"
#include "precs/csv.hpp"
#include "precs/dynamics.hpp"
#include "precs/errors.hpp"
#include "precs/lindblad_field.hpp"
#include "precs/models.hpp"

namespace precs::cli {

using nlohmann::json;

namespace {

std::vector<InteractionTerm> terms_for(const RunConfig& cfg) {
  if (cfg.model == ModelKind::pure_dephasing) {
    return interaction_terms(PureDephasingModel(cfg.omega, cfg.g));
  }
  return interaction_terms(JaynesCummingsModel(cfg.omega, cfg.g));
}

const char* model_name(ModelKind m) {
  return m == ModelKind::pure_dephasing ? "pure-dephasing" : "jaynes-cummings";
}

const char* engine_name(Engine e) {
  switch (e) {
    case Engine::exact: return "exact";
    case Engine::gksl: return "gksl";
    case Engine::decoupled: return "decoupled";
  }
  return "";
}

std::filesystem::path prepare_output(const RunConfig& cfg) {
  const auto dir = output_dir(cfg);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string());
  return dir;
}

template <class Writer>
void write_file(const std::filesystem::path& path, Writer writer) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  writer(out);
  if (!out) throw ConfigError("failed writing " + path.string());
}

void write_json(const std::filesystem::path& path, const json& report) {
  write_file(path, [&](std::ostream& out) { out << report.dump(2) << '\n'; });
}

/// Fock mass in the top level; any appreciable amount means the evolution
/// has run into the truncation edge.
void require_inside_truncation(const JointState& psi, const Tolerances& tol) {
  const int n = psi.n_max();
  const double edge = std::norm(psi.amplitude(0, n - 1)) + std::norm(psi.amplitude(1, n - 1));
  if (edge > tol.truncation) {
    throw TruncationError("evolved state reaches the Fock truncation edge (mass " +
                              csv::number(edge) + "); increase n_max",
                          edge);
  }
}

JointState evolve_to(const RunConfig& cfg, const JointState& psi0, double t) {
  if (t == 0.0) return psi0;
  const FockSpace fs(cfg.n_max);
  const Operator H = assemble_hamiltonian(terms_for(cfg), fs);
  const std::vector<double> times{0.0, t};
  auto traj = evolve_exact(H, psi0, times, cfg.tol);
  require_inside_truncation(traj.states.back(), cfg.tol);
  return traj.states.back();
}

double max_entry_error(const Trajectory& a, const Trajectory& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.states.size(); ++i) {
    worst = std::max(worst, max_norm(Matrix(a.states[i].matrix() - b.states[i].matrix())));
  }
  return worst;
}

json trajectory_report(const Trajectory& traj) {
  return {{"max_trace_dev", traj.max_trace_dev()},
          {"min_eig", traj.min_eigenvalue()},
          {"max_hermiticity_residual", traj.max_hermiticity_residual()},
          {"positivity_breach", traj.positivity_breach},
          {"warnings", traj.warnings}};
}

std::vector<double> parse_g_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ConfigError("--g-list: cannot parse '" + item + "'");
    }
    if (used != item.size() || !(v > 0.0) || !std::isfinite(v)) {
      throw ConfigError("--g-list entries must be positive numbers");
    }
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("--g-list is empty");
  return out;
}

}  // namespace

json cmd_decompose(const RunConfig& cfg, double t) {
  const auto dir = prepare_output(cfg);
  const JointState psi = evolve_to(cfg, initial_state(cfg), t);
  const auto grid = std::make_shared<const PhaseSpaceGrid>(make_grid(cfg.grid_R, cfg.grid_h));
  const ParametricField field = decompose(psi, grid, cfg.tol);
  const DensityOperator rho = reconstruct(field, cfg.tol);
  const double err = max_norm(Matrix(rho.op().matrix() - psi.reduced().matrix()));

  write_file(dir / "precs_field.csv",
             [&](std::ostream& out) { write_field_csv(out, field); });
  std::size_t masked = 0;
  for (bool m : null_region_mask(field, cfg.tol.null_region)) masked += m ? 1 : 0;
  const json report = {{"command", "decompose"},
                       {"model", model_name(cfg.model)},
                       {"t", t},
                       {"grid_points", grid->size()},
                       {"null_points", masked},
                       {"chi2_norm_dev", std::abs(field.normalization() - 1.0)},
                       {"reconstruction_err", err}};
  write_json(dir / "decompose_report.json", report);
  return report;
}

json cmd_lindblad_field(const RunConfig& cfg, double t) {
  const auto dir = prepare_output(cfg);
  const JointState psi = evolve_to(cfg, initial_state(cfg), t);
  const auto grid = std::make_shared<const PhaseSpaceGrid>(make_grid(cfg.grid_R, cfg.grid_h));
  const ParametricField field = decompose(psi, grid, cfg.tol);
  const auto terms = terms_for(cfg);
  const LindbladField lfield = assemble_lindblad_field(field, terms);

  double span = 0.0;
  bool finite = true;
  for (const auto& p : lfield.points) {
    if (!p.active) continue;
    for (int k = 0; k < 2; ++k) {
      span = std::max(span, span_residual(p.F[k]));
      finite = finite && p.F[k].allFinite() && (!p.has_L[k] || p.L[k].allFinite());
    }
  }
  const Operator rhs = gksl_rhs(lfield);

  json report = {{"command", "lindblad-field"},
                 {"model", model_name(cfg.model)},
                 {"t", t},
                 {"active_points", lfield.active_count()},
                 {"max_span_residual", span},
                 {"all_finite", finite},
                 {"trace_gksl_rhs", std::abs(rhs.trace())},
                 {"gksl_rhs", {{"re_pp", rhs(0, 0).real()},
                               {"re_mm", rhs(1, 1).real()},
                               {"re_pm", rhs(0, 1).real()},
                               {"im_pm", rhs(0, 1).imag()}}}};
  if (cfg.model == ModelKind::pure_dephasing) {
    const FockSpace fs(cfg.n_max);
    const Operator H = assemble_hamiltonian(terms, fs);
    report["h_integral"] = pd_effective_field(field, lfield, coefficient_b_field(H, psi, *grid));
  } else {
    report["h_integral"] = nullptr;
  }

  write_file(dir / "lindblad_field.csv",
             [&](std::ostream& out) { write_lindblad_field_csv(out, lfield); });
  write_json(dir / "lindblad_report.json", report);
  return report;
}

json cmd_evolve(const RunConfig& cfg, Engine engine) {
  const auto dir = prepare_output(cfg);
  const JointState psi0 = initial_state(cfg);
  const std::vector<double> times = uniform_times(cfg.t_end, cfg.samples);
  const DensityOperator rho0(psi0.reduced(), cfg.tol);

  Trajectory traj;
  json report = {{"command", "evolve"},
                 {"engine", engine_name(engine)},
                 {"model", model_name(cfg.model)},
                 {"norm_drift", 0.0}};

  if (engine == Engine::exact) {
    const FockSpace fs(cfg.n_max);
    const Operator H = assemble_hamiltonian(terms_for(cfg), fs);
    const StateTrajectory states = evolve_exact(H, psi0, times, cfg.tol);
    for (const auto& s : states.states) require_inside_truncation(s, cfg.tol);
    traj = states.reduced(cfg.tol);
    report["norm_drift"] = states.max_norm_drift;
  } else if (engine == Engine::gksl) {
    ClassicalEquation eq;
    std::unique_ptr<PureDephasingModel> pd;
    if (cfg.model == ModelKind::pure_dephasing) {
      pd = std::make_unique<PureDephasingModel>(cfg.omega, cfg.g);
      eq = pd_classical_equation(*pd, [h = cfg.pd_h](double) { return h; });
    } else {
      Operator H_tilde(Signature::qubit(), cfg.H_tilde_eff);
      eq = jc_classical_equation(JaynesCummingsModel(cfg.omega, cfg.g, cfg.T_tilde, H_tilde));
    }
    const auto run_at = [&](double dt) {
      return evolve_gksl(eq.H_eff, eq.jumps, rho0, times, IntegratorOptions{dt}, cfg.tol);
    };
    traj = run_at(cfg.dt);
    const Trajectory half = run_at(0.5 * cfg.dt);
    double err_full = 0.0;
    double err_half = 0.0;
    if (pd) {
      Trajectory closed;
      for (double t : times) {
        Matrix rho = rho0.op().matrix();
        const Complex decay = std::exp(Complex(-2.0 * integrated_rate(*pd, t), -2.0 * cfg.pd_h * t));
        rho(0, 1) *= decay;
        rho(1, 0) = std::conj(rho(0, 1));
        closed.states.emplace_back(Signature::qubit(), rho);
      }
      err_full = max_entry_error(traj, closed);
      err_half = max_entry_error(half, closed);
      report["dt_halving_reference"] = "closed-form";
    } else {
      const Trajectory quarter = run_at(0.25 * cfg.dt);
      err_full = max_entry_error(traj, half);
      err_half = max_entry_error(half, quarter);
      report["dt_halving_reference"] = "richardson";
    }
    report["dt"] = cfg.dt;
    report["dt_halving"] = {{"err_dt", err_full},
                            {"err_half_dt", err_half},
                            {"ratio", err_half > 0.0 ? json(err_full / err_half) : json(nullptr)}};
  } else {
    OperatorFunction H_eff;
    Branch branch{1.0, {}, {}, Operator(Signature::qubit(), cfg.qubit * cfg.qubit.adjoint())};
    if (cfg.model == ModelKind::pure_dephasing) {
      const PureDephasingModel m(cfg.omega, cfg.g);
      H_eff = [h = cfg.pd_h](double) { return h * qubit::sigma_z(); };
      const Complex alpha0 = cfg.env == EnvKind::coherent ? cfg.alpha0 : Complex(0.0);
      if (cfg.label == LabelMode::flowing) {
        branch.label = [omega = cfg.omega, alpha0](double t) {
          return hamilton_flow(omega, alpha0, t);
        };
      } else {
        branch.label = [alpha0](double) { return alpha0; };
      }
      for (int k = 0; k < 2; ++k) {
        const double gamma = std::norm(cfg.qubit(k));
        branch.channels.push_back(
            {[gamma](Complex, double) { return gamma; },
             [m, k](Complex label, double t) {
               const auto c = classical_coefficients(m, label, t);
               return c.d[k] * qubit::identity() + c.b[k] * qubit::sigma_z();
             }});
      }
    } else {
      const JaynesCummingsModel m(cfg.omega, cfg.g, cfg.T_tilde,
                                  Operator(Signature::qubit(), cfg.H_tilde_eff));
      const ClassicalEquation eq = jc_classical_equation(m);
      H_eff = eq.H_eff;
      branch.label = [](double) { return Complex(0.0); };
      branch.channels.push_back({[rate = cfg.T_tilde](Complex, double) { return rate; },
                                 [](Complex, double) { return qubit::sigma_plus(); }});
    }
    traj = evolve_decoupled_markov(H_eff, {branch}, times, IntegratorOptions{cfg.dt}, cfg.tol);
    report["dt"] = cfg.dt;
  }

  report.update(trajectory_report(traj));
  const std::string stem = std::string("trajectory_") + engine_name(engine);
  write_file(dir / (stem + ".csv"), [&](std::ostream& out) { write_trajectory_csv(out, traj); });
  write_json(dir / (std::string("evolve_") + engine_name(engine) + "_report.json"), report);
  return report;
}

json cmd_gamma_curve(const RunConfig& cfg, std::vector<double> g_list) {
  const auto dir = prepare_output(cfg);
  if (g_list.empty()) g_list = cfg.g_list.empty() ? default_g_ladder(cfg.omega) : cfg.g_list;
  const auto rows = strong_coupling_report(cfg.omega, g_list, cfg.threshold, cfg.curve_samples);
  json table = json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    write_file(dir / ("gamma_curve_" + std::to_string(i) + ".csv"), [&](std::ostream& out) {
      csv::header(out, {"t", "T", "T_norm"});
      for (std::size_t s = 0; s < row.times.size(); ++s) {
        csv::row(out, std::array<double, 3>{row.times[s], row.T[s], row.T_normalized[s]});
      }
    });
    table.push_back({{"g", row.g}, {"max_T", row.max_T}, {"fraction_below", row.fraction_below}});
  }
  write_file(dir / "strong_coupling.csv", [&](std::ostream& out) {
    csv::header(out, {"g", "max_T", "fraction_below"});
    for (const auto& row : rows) {
      csv::row(out, std::array<double, 3>{row.g, row.max_T, row.fraction_below});
    }
  });
  const json report = {{"command", "gamma-curve"},
                       {"omega", cfg.omega},
                       {"threshold", cfg.threshold},
                       {"samples", cfg.curve_samples},
                       {"rows", table}};
  write_json(dir / "gamma_curve_report.json", report);
  return report;
}

int run(int argc, char** argv) {
  CLI::App app{"PRECS open-system toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  double t = 0.0;
  std::string engine = "exact";
  std::string g_list;
  int threads = 0;

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--threads", threads, "Maximum OpenMP threads");
  };
  auto* dec = app.add_subcommand("decompose", "PRECS field of the state at time t");
  common(dec);
  dec->add_option("--t", t, "Time of the exactly evolved state");
  auto* lf = app.add_subcommand("lindblad-field", "F and L operators at time t");
  common(lf);
  lf->add_option("--t", t, "Time of the exactly evolved state");
  auto* ev = app.add_subcommand("evolve", "Reduced qubit trajectory");
  common(ev);
  ev->add_option("--engine", engine, "exact, gksl or decoupled")
      ->check(CLI::IsMember({"exact", "gksl", "decoupled"}));
  auto* gc = app.add_subcommand("gamma-curve", "Normalized dephasing-rate curves");
  common(gc);
  gc->add_option("--g-list", g_list, "Comma-separated couplings");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (threads < 0) throw ConfigError("--threads must be positive");
    if (threads > 0) omp_set_num_threads(threads);
    if (!std::isfinite(t) || t < 0.0) throw ConfigError("--t must be a nonnegative number");
    const RunConfig cfg = load_config(config_path);
    json report;
    if (*dec) {
      report = cmd_decompose(cfg, t);
    } else if (*lf) {
      report = cmd_lindblad_field(cfg, t);
    } else if (*ev) {
      const Engine e = engine == "gksl" ? Engine::gksl
                       : engine == "decoupled" ? Engine::decoupled
                                               : Engine::exact;
      report = cmd_evolve(cfg, e);
    } else {
      report = cmd_gamma_curve(cfg, g_list.empty() ? std::vector<double>{}
                                                   : parse_g_list(g_list));
    }
    std::cout << report.dump(2) << '\n';
    return 0;
  } catch (const CoverageError& e) {
    std::cerr << "coverage error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const TruncationError& e) {
    std::cerr << "truncation error: " << e.what() << " (tail mass "
              << csv::number(e.tail_mass()) << ")\n";
    return e.exit_code();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
}

}  // namespace precs::cli
