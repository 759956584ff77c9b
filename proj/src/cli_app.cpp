#include "gsma/cli_app.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gsma/classical.hpp"
#include "gsma/composite.hpp"
#include "gsma/direct.hpp"
#include "gsma/errors.hpp"
#include "gsma/generalized.hpp"
#include "gsma/matrix_market.hpp"
#include "gsma/problems.hpp"
#include "gsma/selectors.hpp"
#include "gsma/serialization.hpp"
#include "gsma/verify.hpp"

namespace gsma {

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitSolver = 2;
constexpr int kExitInput = 3;
constexpr int kExitVerify = 4;

std::vector<Index> parse_index_list(const std::string& csv) {
  std::vector<Index> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoll(item));
  return out;
}

Vector parse_sign_pattern(const std::string& csv) {
  std::stringstream ss(csv);
  std::string item;
  std::vector<double> vals;
  while (std::getline(ss, item, ',')) vals.push_back(std::stod(item));
  Vector v(static_cast<Index>(vals.size()));
  for (size_t i = 0; i < vals.size(); ++i) v[static_cast<Index>(i)] = vals[i];
  return v;
}

Complex parse_complex(const std::string& s) {
  std::stringstream ss(s);
  std::string re, im;
  std::getline(ss, re, ',');
  std::getline(ss, im, ',');
  return {std::stod(re), im.empty() ? 0.0 : std::stod(im)};
}

json iterate_to_json(int iter, const IterateRecord& it) {
  json j{{"iter", iter},
         {"re_lambda", it.lambda.real()},
         {"im_lambda", it.lambda.imag()}};
  if (std::isfinite(it.delta_abs)) j["delta_abs"] = it.delta_abs;
  if (std::isfinite(it.residual)) j["residual"] = it.residual;
  const double rho = it.rho_infinite ? std::numeric_limits<double>::infinity() : std::abs(it.rho_est);
  if (std::isfinite(rho)) j["rho_est"] = rho;
  else j["rho_est"] = "inf";
  return j;
}

json report_to_json(const ConvergenceReport& report) {
  json j;
  switch (report.status) {
    case SolveStatus::converged: j["status"] = "converged"; break;
    case SolveStatus::diverged: j["status"] = "diverged"; break;
    case SolveStatus::max_iterations: j["status"] = "max-iterations"; break;
  }
  if (report.order_fit) j["order_fit"] = *report.order_fit;
  j["iterates"] = json::array();
  int iter = 0;
  for (const auto& it : report.iterates) j["iterates"].push_back(iterate_to_json(iter++, it));
  return j;
}

void write_iterates_csv(const std::string& path, const ConvergenceReport& report) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write CSV " + path);
  out << "iter,re_lambda,im_lambda,delta_abs,residual,rho_est\n";
  int iter = 0;
  for (const auto& it : report.iterates) {
    out << iter++ << "," << std::setprecision(17) << it.lambda.real() << "," << it.lambda.imag()
        << ",";
    if (std::isfinite(it.delta_abs)) out << it.delta_abs;
    out << ",";
    if (std::isfinite(it.residual)) out << it.residual;
    out << ",";
    const double rho =
        it.rho_infinite ? std::numeric_limits<double>::infinity() : std::abs(it.rho_est);
    if (std::isfinite(rho)) out << rho;
    else out << "inf";
    out << "\n";
  }
}

void write_mode_shape_csv(const std::string& path, const GridLayout& layout, const Vector& v) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write CSV " + path);
  out << "i,j,re_psi,im_psi\n";
  for (size_t p = 0; p < layout.points.size(); ++p) {
    out << layout.points[p].first << "," << layout.points[p].second << ","
        << std::setprecision(17) << v[static_cast<Index>(p)].real() << ","
        << v[static_cast<Index>(p)].imag() << "\n";
  }
}

struct SolveSetup {
  std::optional<ProjectionPencil> pencil;
  std::optional<SubspacePair> pair;
  std::optional<CompositeModel> model;          // composite path
  std::vector<SubspacePair> composite_pairs;
  std::optional<PartitionedSystem> partitioned; // algorithms 1-2
  std::optional<GridLayout> layout;             // plate problems
};

struct SolveConfig {
  std::string problem = "plate";
  int algorithm = 5;
  std::string selector = "overlap";
  std::string target;
  std::string objective;
  std::string pattern = "up-down";
  int k = 1;
  Index partition_n = 1;
  // plate geometry
  Index core = 6;
  std::string arms = "10,6,8,5";
  double h = 0.1;
  // composite
  std::uint64_t seed = 7;
  Index l = 10;
  Index states = 4;
  Index io = 1;
  Index alg = 10;
  // files
  std::string manifest;
  std::string basis_right_file, basis_left_file;
  // options
  double tol = 1e-10;
  int max_iter = 50;
  std::string h_form = "qa";
  std::string update = "full";
  bool use_oracle = false;
  bool composite_path = true;
  // outputs
  std::string out_json, out_csv, out_shape;
  std::string config_file;

  json echo() const {
    return json{{"problem", problem},     {"algorithm", algorithm}, {"selector", selector},
                {"target", target},       {"objective", objective}, {"pattern", pattern},
                {"k", k},                 {"core", core},           {"arms", arms},
                {"h", h},                 {"seed", seed},           {"l", l},
                {"states", states},       {"io", io},               {"alg", alg},
                {"manifest", manifest},   {"tol", tol},             {"max_iter", max_iter},
                {"h_form", h_form},       {"update", update},       {"oracle", use_oracle},
                {"partition_n", partition_n}};
  }
};

// Versioned JSON config: explicit command-line flags take precedence.
void apply_config_file(SolveConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file " + path);
  json j;
  in >> j;
  if (j.value("schema_version", 1) != 1)
    throw InvalidArgument("unsupported config schema_version in " + path);
  const json& s = j.contains("solve") ? j["solve"] : j;
  auto get_str = [&](const char* key, std::string& out) {
    if (s.contains(key)) out = s[key].get<std::string>();
  };
  get_str("problem", cfg.problem);
  if (s.contains("algorithm")) cfg.algorithm = s["algorithm"].get<int>();
  get_str("selector", cfg.selector);
  get_str("target", cfg.target);
  get_str("objective", cfg.objective);
  get_str("pattern", cfg.pattern);
  if (s.contains("k")) cfg.k = s["k"].get<int>();
  if (s.contains("partition")) cfg.partition_n = s["partition"].get<Index>();
  if (s.contains("core")) cfg.core = s["core"].get<Index>();
  get_str("arms", cfg.arms);
  if (s.contains("h")) cfg.h = s["h"].get<double>();
  if (s.contains("seed")) cfg.seed = s["seed"].get<std::uint64_t>();
  if (s.contains("l")) cfg.l = s["l"].get<Index>();
  if (s.contains("states")) cfg.states = s["states"].get<Index>();
  if (s.contains("io")) cfg.io = s["io"].get<Index>();
  if (s.contains("alg")) cfg.alg = s["alg"].get<Index>();
  get_str("manifest", cfg.manifest);
  get_str("basis_right", cfg.basis_right_file);
  get_str("basis_left", cfg.basis_left_file);
  if (s.contains("tol")) cfg.tol = s["tol"].get<double>();
  if (s.contains("max_iter")) cfg.max_iter = s["max_iter"].get<int>();
  get_str("h_form", cfg.h_form);
  get_str("update", cfg.update);
  if (s.contains("oracle")) cfg.use_oracle = s["oracle"].get<bool>();
}

CrossGeometry geometry_from(const SolveConfig& cfg) {
  const auto arm_list = parse_index_list(cfg.arms);
  if (arm_list.size() != 4) throw InvalidArgument("--arms needs four comma-separated lengths");
  CrossGeometry g;
  g.core = cfg.core;
  g.arm_up = arm_list[0];
  g.arm_down = arm_list[1];
  g.arm_left = arm_list[2];
  g.arm_right = arm_list[3];
  g.h = cfg.h;
  return g;
}

SolverOptions options_from(const SolveConfig& cfg) {
  SolverOptions opts;
  opts.tol = cfg.tol;
  opts.max_iter = cfg.max_iter;
  if (cfg.h_form == "anti") opts.h_form = HForm::anticommutator;
  else if (cfg.h_form == "qa") opts.h_form = HForm::qa_only;
  else if (cfg.h_form == "aq") opts.h_form = HForm::aq_only;
  else throw InvalidArgument("--h-form must be anti, qa or aq");
  if (cfg.update == "full") opts.subspace_update = SubspaceUpdate::full_eigenvector;
  else if (cfg.update == "zeroed") opts.subspace_update = SubspaceUpdate::zeroed_static;
  else if (cfg.update == "none") opts.subspace_update = SubspaceUpdate::none;
  else throw InvalidArgument("--update must be full, zeroed or none");
  return opts;
}

ModeSelector selector_from(const SolveConfig& cfg, Index basis_cols) {
  if (cfg.selector == "objective") {
    if (cfg.objective.empty()) throw InvalidArgument("objective selector needs --objective");
    return ModeSelector::by_objective(parse_sign_pattern(cfg.objective));
  }
  if (cfg.selector == "nearest") {
    if (cfg.target.empty()) throw InvalidArgument("nearest selector needs --target re,im");
    return ModeSelector::nearest_to(parse_complex(cfg.target));
  }
  if (cfg.selector == "overlap") {
    if (!cfg.target.empty())
      return ModeSelector::nearest_to(parse_complex(cfg.target), ModeSelector::Tracking::overlap);
    Vector pattern = Vector::Zero(basis_cols);
    pattern[0] = 1.0;
    return ModeSelector::by_pattern(pattern);
  }
  throw InvalidArgument("--selector must be nearest, overlap or objective");
}

SolveSetup build_setup(const SolveConfig& cfg) {
  SolveSetup setup;
  if (cfg.problem == "plate") {
    auto [pencil, layout] = cross_plate(geometry_from(cfg));
    SubspacePair pair;
    if (cfg.algorithm >= 7 || cfg.k > 1) {
      Matrix basis(pencil.dimension(), 2);
      basis.col(0) = cross_plate_initial_guess(geometry_from(cfg), layout, ArmPattern::up_vs_down);
      basis.col(1) =
          cross_plate_initial_guess(geometry_from(cfg), layout, ArmPattern::right_vs_left);
      setup.pair = normalize_pair(basis, basis, pencil);
    } else {
      const ArmPattern p =
          cfg.pattern == "right-left" ? ArmPattern::right_vs_left : ArmPattern::up_vs_down;
      const Vector guess = cross_plate_initial_guess(geometry_from(cfg), layout, p);
      setup.pair = normalize_pair(guess, guess, pencil);
    }
    setup.layout = std::move(layout);
    setup.pencil = std::move(pencil);
    if (cfg.algorithm <= 2)
      throw InvalidArgument("plate problems have no classical partition; use algorithms 3-8");
  } else if (cfg.problem == "composite-synthetic") {
    SyntheticCompositeParams params;
    params.seed = cfg.seed;
    params.subsystems = cfg.l;
    params.states_per = cfg.states;
    params.io_per = cfg.io;
    params.algebraic = cfg.alg;
    CompositeModel model = synthetic_composite(params);
    setup.composite_pairs = electromech_init(model);
    ProjectionPencil mono = assemble_monolithic(model);
    setup.pair = embed_pairs(model, setup.composite_pairs);
    setup.pencil = std::move(mono);
    setup.model = std::move(model);
  } else if (cfg.problem == "files") {
    if (cfg.manifest.empty()) throw InvalidArgument("--problem files needs --manifest");
    ProjectionPencil pencil = load_pencil(cfg.manifest);
    if (cfg.algorithm <= 2) {
      if (pencil.rank_E() != pencil.dimension())
        throw InvalidArgument("algorithms 1-2 need E = I (classical problem)");
      setup.partitioned = PartitionedSystem::split(pencil.dense_A(), cfg.partition_n);
    } else {
      if (cfg.basis_right_file.empty())
        throw InvalidArgument("--problem files needs --basis-right (and optionally --basis-left)");
      Matrix right = mm_read_dense(cfg.basis_right_file);
      Matrix left = cfg.basis_left_file.empty() ? right : mm_read_dense(cfg.basis_left_file);
      setup.pair = normalize_pair(right, left, pencil);
    }
    setup.pencil = std::move(pencil);
  } else {
    throw InvalidArgument("--problem must be plate, composite-synthetic or files");
  }
  return setup;
}

int cmd_solve(const SolveConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  SolveSetup setup = build_setup(cfg);
  const SolverOptions opts = options_from(cfg);

  std::vector<ModeEstimate> modes;
  std::vector<ConvergenceReport> reports;

  if (cfg.algorithm <= 2) {
    if (!setup.partitioned)
      throw InvalidArgument("algorithms 1-2 need a classical partition (--problem files with "
                            "--partition)");
    const ModeSelector sel = selector_from(cfg, setup.partitioned->n());
    if (cfg.algorithm == 1) {
      SolveResult r = algorithm1(*setup.partitioned, sel, opts);
      modes.push_back(std::move(r.mode));
      reports.push_back(std::move(r.report));
    } else {
      std::vector<ModeSelector> sels(static_cast<size_t>(cfg.k), sel);
      for (int i = 0; i < cfg.k; ++i)
        if (cfg.target.empty()) sels[static_cast<size_t>(i)] = ModeSelector::by_index(i);
      MultiSolveResult r = algorithm2(*setup.partitioned, sels, opts);
      modes = std::move(r.modes);
      reports = std::move(r.reports);
    }
  } else {
    const Index n = setup.pair->n();
    const ModeSelector sel = selector_from(cfg, n);
    const bool use_composite =
        setup.model.has_value() && cfg.composite_path && (cfg.algorithm == 3 || cfg.algorithm == 4);
    if (cfg.algorithm == 3 || cfg.algorithm == 4) {
      SolveResult r;
      if (use_composite) {
        r = cfg.algorithm == 3
                ? composite_algorithm3(*setup.model, setup.composite_pairs, sel, opts)
                : composite_algorithm4(*setup.model, setup.composite_pairs, sel, opts);
      } else {
        r = cfg.algorithm == 3 ? algorithm3(*setup.pencil, *setup.pair, sel, opts)
                               : algorithm4(*setup.pencil, *setup.pair, sel, opts);
      }
      modes.push_back(std::move(r.mode));
      reports.push_back(std::move(r.report));
    } else if (cfg.algorithm == 5 || cfg.algorithm == 6) {
      SolveResult r = cfg.algorithm == 5 ? algorithm5(*setup.pencil, *setup.pair, sel, opts)
                                         : algorithm6(*setup.pencil, *setup.pair, sel, opts);
      modes.push_back(std::move(r.mode));
      reports.push_back(std::move(r.report));
    } else if (cfg.algorithm == 7 || cfg.algorithm == 8) {
      std::vector<ModeSelector> sels;
      for (int i = 0; i < cfg.k; ++i) sels.push_back(ModeSelector::by_index(i));
      if (cfg.selector == "objective") sels[0] = sel;
      MultiSolveResult r = cfg.algorithm == 7 ? algorithm7(*setup.pencil, *setup.pair, sels, opts)
                                              : algorithm8(*setup.pencil, *setup.pair, sels, opts);
      modes = std::move(r.modes);
      reports = std::move(r.reports);
    } else {
      throw InvalidArgument("--algorithm must be 1..8");
    }
  }

  json out;
  out["schema_version"] = 1;
  out["config"] = cfg.echo();
  out["eigenvalues"] = json::array();
  out["residuals"] = json::array();
  out["reports"] = json::array();
  bool all_converged = true;
  for (size_t k = 0; k < modes.size(); ++k) {
    out["eigenvalues"].push_back(
        {{"re", modes[k].lambda.real()}, {"im", modes[k].lambda.imag()}});
    if (std::isfinite(modes[k].residual)) out["residuals"].push_back(modes[k].residual);
    out["reports"].push_back(report_to_json(reports[k]));
    all_converged = all_converged && reports[k].status == SolveStatus::converged;
  }

  // δ/ω eigenvector components per machine: the data behind the composite
  // experiment's eigenvector figures
  if (setup.model) {
    json comps = json::array();
    for (const auto& mode : modes) {
      if (mode.v.size() != setup.pencil->dimension()) continue;
      json one = json::array();
      Index so = 0;
      for (const auto& sub : setup.model->subsystems) {
        one.push_back({{"delta_re", mode.v[so].real()},
                       {"delta_im", mode.v[so].imag()},
                       {"omega_re", mode.v[so + 1].real()},
                       {"omega_im", mode.v[so + 1].imag()}});
        so += sub.states();
      }
      comps.push_back(std::move(one));
    }
    out["mode_components"] = std::move(comps);
  }

  if (cfg.use_oracle && setup.pencil && setup.pencil->dimension() <= dense_limit()) {
    OracleSpectrum oracle = oracle_full_spectrum(*setup.pencil);
    json oracle_json = json::array();
    for (const auto& mode : modes) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& om : oracle.modes) best = std::min(best, std::abs(mode.lambda - om.lambda));
      oracle_json.push_back({{"abs_error", best}});
    }
    out["oracle"] = oracle_json;
  }

  const auto t1 = std::chrono::steady_clock::now();
  out["timing_seconds"] = std::chrono::duration<double>(t1 - t0).count();

  if (!cfg.out_csv.empty() && !reports.empty()) {
    if (reports.size() == 1) {
      write_iterates_csv(cfg.out_csv, reports[0]);
    } else {
      for (size_t k = 0; k < reports.size(); ++k) {
        std::string path = cfg.out_csv;
        const auto dot = path.rfind('.');
        const std::string suffix = "_mode" + std::to_string(k);
        if (dot == std::string::npos) path += suffix;
        else path.insert(dot, suffix);
        write_iterates_csv(path, reports[k]);
      }
    }
  }
  if (!cfg.out_shape.empty() && setup.layout && !modes.empty() && modes[0].v.size() > 0)
    write_mode_shape_csv(cfg.out_shape, *setup.layout, modes[0].v);

  if (cfg.out_json.empty()) {
    std::cout << out.dump(2) << "\n";
  } else {
    std::ofstream f(cfg.out_json);
    if (!f) throw Error("cannot write report " + cfg.out_json);
    f << out.dump(2) << "\n";
  }
  return all_converged ? kExitOk : kExitSolver;
}

int cmd_verify(std::uint64_t seed, int seeds, double fault) {
  VerifyOptions opts;
  opts.seed = seed;
  opts.seed_count = seeds;
  opts.fault = fault;
  const VerifyReport report = run_identity_suite(opts);
  for (const auto& check : report.checks) {
    std::cout << (check.pass ? "[PASS] " : "[FAIL] ") << check.name
              << "  max deviation " << std::scientific << check.max_deviation << " (tolerance "
              << check.tolerance << ")\n";
  }
  return report.all_pass ? kExitOk : kExitVerify;
}

json error_json(const std::string& kind, const std::string& what) {
  return json{{"error", kind}, {"message", what}};
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Selective eigensolver for projection pencils λEv = Av"};
  app.set_help_flag("--help", "Print help");  // keep --h free for grid spacing
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate problem files");
  gen->require_subcommand(1);
  auto* gen_plate = gen->add_subcommand("plate", "Cross-shaped plate pencil");
  SolveConfig gcfg;
  std::string gen_out = ".", gen_name = "plate";
  gen_plate->add_option("--core", gcfg.core);
  gen_plate->add_option("--arms", gcfg.arms);
  gen_plate->add_option("--h", gcfg.h);
  gen_plate->add_option("--out", gen_out);
  gen_plate->add_option("--name", gen_name);

  auto* gen_comp = gen->add_subcommand("composite", "Synthetic composite model");
  gen_comp->add_option("--seed", gcfg.seed);
  gen_comp->add_option("--l", gcfg.l);
  gen_comp->add_option("--states", gcfg.states);
  gen_comp->add_option("--io", gcfg.io);
  gen_comp->add_option("--alg", gcfg.alg);
  gen_comp->add_option("--out", gen_out);
  std::string comp_name = "composite";
  gen_comp->add_option("--name", comp_name);

  // solve
  SolveConfig cfg;
  auto* solve = app.add_subcommand("solve", "Run one of the algorithms");
  solve->add_option("--problem", cfg.problem);
  solve->add_option("--algorithm", cfg.algorithm)->check(CLI::Range(1, 8));
  solve->add_option("--selector", cfg.selector);
  solve->add_option("--target", cfg.target);
  solve->add_option("--objective", cfg.objective);
  solve->add_option("--pattern", cfg.pattern);
  solve->add_option("--k", cfg.k);
  solve->add_option("--partition", cfg.partition_n);
  solve->add_option("--core", cfg.core);
  solve->add_option("--arms", cfg.arms);
  solve->add_option("--h", cfg.h);
  solve->add_option("--seed", cfg.seed);
  solve->add_option("--l", cfg.l);
  solve->add_option("--states", cfg.states);
  solve->add_option("--io", cfg.io);
  solve->add_option("--alg", cfg.alg);
  solve->add_option("--manifest", cfg.manifest);
  solve->add_option("--basis-right", cfg.basis_right_file);
  solve->add_option("--basis-left", cfg.basis_left_file);
  solve->add_option("--tol", cfg.tol);
  solve->add_option("--max-iter", cfg.max_iter);
  solve->add_option("--h-form", cfg.h_form);
  solve->add_option("--update", cfg.update);
  solve->add_flag("--oracle", cfg.use_oracle);
  bool monolithic_path = false;
  solve->add_flag("--monolithic", monolithic_path,
                  "Solve composite problems through the monolithic pencil instead of the "
                  "subsystem H assembly");
  solve->add_option("--config", cfg.config_file, "JSON config file (flags take precedence)");
  solve->add_option("--out", cfg.out_json);
  solve->add_option("--csv", cfg.out_csv);
  solve->add_option("--mode-shape", cfg.out_shape);

  // verify
  auto* verify = app.add_subcommand("verify", "Run the cross-module identity suites");
  std::uint64_t vseed = 12345;
  int vseeds = 1;
  double vfault = 0.0;
  verify->add_option("--seed", vseed);
  verify->add_option("--seeds", vseeds);
  verify->add_option("--fault", vfault, "Debug: perturb each identity by this amount");

  // config file values load first so that explicit flags override them
  try {
    for (int i = 1; i + 1 < argc; ++i)
      if (std::string(argv[i]) == "--config") apply_config_file(cfg, argv[i + 1]);
  } catch (const Error& e) {
    std::cerr << error_json("invalid-argument", e.what()).dump() << "\n";
    return kExitInput;
  } catch (const json::exception& e) {
    std::cerr << error_json("invalid-argument", e.what()).dump() << "\n";
    return kExitInput;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }
  if (monolithic_path) cfg.composite_path = false;

  try {
    if (gen_plate->parsed()) {
      auto [pencil, layout] = cross_plate(geometry_from(gcfg));
      const std::string path = save_pencil(gen_out, gen_name, pencil);
      // record the generator inputs for reproducibility
      std::ifstream in(path);
      json manifest;
      in >> manifest;
      in.close();
      manifest["generator"] = {{"kind", "plate"},
                               {"core", gcfg.core},
                               {"arms", gcfg.arms},
                               {"h", gcfg.h}};
      std::ofstream outp(path);
      outp << manifest.dump(2) << "\n";
      std::cout << path << "\n";
      return kExitOk;
    }
    if (gen_comp->parsed()) {
      SyntheticCompositeParams params;
      params.seed = gcfg.seed;
      params.subsystems = gcfg.l;
      params.states_per = gcfg.states;
      params.io_per = gcfg.io;
      params.algebraic = gcfg.alg;
      CompositeModel model = synthetic_composite(params);
      const std::string path = save_composite(gen_out, comp_name, model);
      std::ifstream in(path);
      json manifest;
      in >> manifest;
      in.close();
      manifest["generator"] = {{"kind", "composite-synthetic"},
                               {"seed", params.seed},
                               {"l", params.subsystems},
                               {"states", params.states_per},
                               {"io", params.io_per},
                               {"alg", params.algebraic}};
      std::ofstream outp(path);
      outp << manifest.dump(2) << "\n";
      std::cout << path << "\n";
      return kExitOk;
    }
    if (solve->parsed()) return cmd_solve(cfg);
    if (verify->parsed()) return cmd_verify(vseed, vseeds, vfault);
  } catch (const InvalidArgument& e) {
    std::cerr << error_json("invalid-argument", e.what()).dump() << "\n";
    return kExitInput;
  } catch (const ParseError& e) {
    std::cerr << error_json("parse-error", e.what()).dump() << "\n";
    return kExitInput;
  } catch (const UnsupportedFormat& e) {
    std::cerr << error_json("unsupported-format", e.what()).dump() << "\n";
    return kExitInput;
  } catch (const Error& e) {
    std::cerr << error_json("solver-error", e.what()).dump() << "\n";
    return kExitSolver;
  }
  return kExitInput;
}

}  // namespace gsma
