#include "jgl/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "jgl/errors.hpp"
#include "jgl/io.hpp"
#include "jgl/solver.hpp"
#include "jgl/validation.hpp"

namespace jgl::cli {

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

std::string class_file(const std::string& stem, Index k, const std::string& ext) {
  return stem + "_" + std::to_string(k) + "." + ext;
}

struct Inputs {
  std::vector<std::string> cov_files;
  std::vector<std::string> sample_files;

  void add_to(CLI::App* app) {
    app->add_option("--cov", cov_files, "Per-class covariance matrix files");
    app->add_option("--samples", sample_files, "Per-class sample files");
  }

  CovarianceSet load() const {
    if (cov_files.empty() == sample_files.empty())
      throw InputError("give exactly one of --cov or --samples");
    CovarianceSet s;
    for (const auto& f : cov_files) s.push_back(io::read_matrix(f));
    for (const auto& f : sample_files) s.push_back(empirical_covariance(io::read_samples(f)));
    common_dimension(s);
    return s;
  }

  Json echo() const {
    return Json{{"cov", cov_files}, {"samples", sample_files}};
  }
};

unsigned default_threads() {
  if (const char* env = std::getenv("JGL_THREADS")) {
    try {
      int v = std::stoi(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw InputError("cannot create output directory '" + dir.string() + "'");
}

Json args_echo(const std::vector<std::string>& args) { return Json(args); }

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

template <typename T>
std::vector<T> parse_list(const std::string& text, auto&& convert) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(convert(item));
  return out;
}

// ---- gen ------------------------------------------------------------------

int cmd_gen(const DatagenConfig& cfg, const fs::path& outdir, const Json& echo,
            std::ostream& out) {
  GroundTruth truth = gen_precisions(cfg);
  ensure_dir(outdir);
  for (Index k = 0; k < cfg.classes; ++k) {
    SampleMatrix x = sample_gaussian(truth.precisions[k], cfg.sample_count(),
                                     sample_seed(cfg.seed, k));
    io::write_samples(outdir / class_file("class", k, "samples"), x);
    io::write_matrix(outdir / class_file("class", k, "precision"), truth.precisions[k]);
  }
  Json doc = io::to_json(truth, cfg);
  doc["command"] = echo;
  io::write_json(outdir / "truth.json", doc);
  out << "wrote " << cfg.classes << " classes (p=" << cfg.p << ", type "
      << to_string(cfg.type) << ") to " << outdir.string() << "\n";
  return kOk;
}

// ---- cov ------------------------------------------------------------------

int cmd_cov(const std::vector<std::string>& sample_files, const fs::path& outdir,
            const Json& echo, std::ostream& out) {
  if (sample_files.empty()) throw InputError("cov: no sample files given");
  CovarianceSet s;
  for (const auto& f : sample_files) s.push_back(empirical_covariance(io::read_samples(f)));
  common_dimension(s);
  ensure_dir(outdir);
  for (Index k = 0; k < s.size(); ++k)
    io::write_matrix(outdir / class_file("class", k, "cov"), s[k]);
  io::write_json(outdir / "cov.json",
                 Json{{"command", echo}, {"inputs", sample_files}, {"classes", s.size()}});
  out << "wrote " << s.size() << " covariance matrices to " << outdir.string() << "\n";
  return kOk;
}

// ---- screen ---------------------------------------------------------------

Json partition_document(const PartitionFamily& family, ScreenMode mode, double l1,
                        double l2, const Json& echo) {
  std::uint64_t total = 0;
  for (const Partition& part : family) total += complexity_estimate(part);
  return Json{{"mode", to_string(mode)},
              {"lambda1", l1},
              {"lambda2", l2},
              {"p", family.front().dim()},
              {"K", family.size()},
              {"classes", io::to_json(family)},
              {"total_complexity", total},
              {"command", echo}};
}

void print_summary(const PartitionFamily& family, ScreenMode mode, std::ostream& out) {
  for (Index k = 0; k < family.size(); ++k)
    out << to_string(mode) << " class " << k << ": components=" << family[k].size()
        << " complexity=" << complexity_estimate(family[k]) << "\n";
}

int cmd_screen(const Inputs& inputs, double l1, double l2, ScreenMode mode,
               const fs::path& out_file, const Json& echo, std::ostream& out) {
  CovarianceSet s = inputs.load();
  PartitionFamily family = screen(s, l1, l2, mode);
  io::write_json(out_file, partition_document(family, mode, l1, l2, echo));
  print_summary(family, mode, out);
  return kOk;
}

// ---- solve ----------------------------------------------------------------

struct SolveFlags {
  double l1 = 0.0, l2 = 0.0, rho = 1.0;
  double tol_primal = 1e-6, tol_dual = 1e-6;
  Index max_iter = 10000;
  std::string screen = "hybrid";
  unsigned threads = 1;
  bool trace = false;
};

int cmd_solve(const Inputs& inputs, const SolveFlags& flags, const fs::path& outdir,
              const Json& echo, std::ostream& out, std::ostream& err) {
  const ScreenMode mode = parse_screen_mode(flags.screen);
  CovarianceSet s = inputs.load();
  PenaltyConfig penalty{flags.l1, flags.l2, flags.rho};
  penalty.validate();

  std::string phase = "screen";
  try {
    const auto screen_start = Clock::now();
    PartitionFamily family = screen(s, flags.l1, flags.l2, mode);
    const double screen_seconds =
        std::chrono::duration<double>(Clock::now() - screen_start).count();

    phase = "admm";
    SolveOptions opts;
    opts.tol_primal = flags.tol_primal;
    opts.tol_dual = flags.tol_dual;
    opts.max_iter = flags.max_iter;
    opts.partition = family;
    opts.record_objective = flags.trace;
    opts.threads = flags.threads;
    SolveResult result = admm_solve(s, penalty, opts);

    phase = "output";
    ensure_dir(outdir);
    for (Index k = 0; k < result.solution.size(); ++k)
      io::write_matrix(outdir / class_file("class", k, "solution"), result.solution[k]);
    Json report = io::to_json(result.report);
    report["wall_times"]["screen"] = screen_seconds;
    report["screen"] = to_string(mode);
    report["penalty"] = {{"lambda1", flags.l1}, {"lambda2", flags.l2}, {"rho", flags.rho}};
    report["command"] = echo;
    io::write_json(outdir / "report.json", report);
    io::write_json(outdir / "partition.json",
                   partition_document(family, mode, flags.l1, flags.l2, echo));
    out << "iterations=" << result.report.iterations
        << " converged=" << (result.report.converged ? "yes" : "no")
        << " objective=" << result.report.final_objective << "\n";
    return result.report.converged ? kOk : kNotConverged;
  } catch (const NumericError& e) {
    err << "solve: numeric failure during " << phase << ": " << e.what() << "\n";
    return kNumericError;
  }
}

// ---- validate -------------------------------------------------------------

int cmd_validate(const Inputs& inputs, const std::string& partition_file,
                 const std::vector<std::string>& solution_files, double l1, double l2,
                 double zero_tol, const std::string& out_file, const Json& echo,
                 std::ostream& out) {
  CovarianceSet s = inputs.load();
  const Index p = common_dimension(s);
  PartitionFamily family = io::family_from_json(io::read_json(partition_file), p);
  ConditionReport sufficient = check_sufficient(s, family, l1, l2);
  Json doc{{"sufficient", io::to_json(sufficient)},
           {"lambda1", l1},
           {"lambda2", l2},
           {"command", echo}};
  bool satisfied = sufficient.satisfied;
  if (!solution_files.empty()) {
    std::vector<SymMatrix> theta;
    for (const auto& f : solution_files) theta.push_back(io::read_matrix(f));
    ConditionReport necessary = check_necessary(s, theta, family, l1, l2, zero_tol);
    doc["necessary"] = io::to_json(necessary);
    satisfied = satisfied && necessary.satisfied;
  } else {
    doc["necessary"] = nullptr;
  }
  doc["satisfied"] = satisfied;
  if (out_file.empty()) out << doc.dump(2) << "\n";
  else io::write_json(out_file, doc);
  return satisfied ? kOk : kUnsatisfied;
}

}  // namespace

// ---- bench ----------------------------------------------------------------

void BenchSpec::validate() const {
  if (types.empty() || p_values.empty() || k_values.empty() || lambdas.empty() ||
      modes.empty())
    throw ConfigError("bench: every list must be non-empty");
  if (repetitions == 0) throw ConfigError("bench: repetitions must be at least 1");
}

Json run_bench(const BenchSpec& spec, std::ostream& log) {
  spec.validate();
  Json cells = Json::array();
  for (DatasetType type : spec.types)
    for (Index p : spec.p_values)
      for (Index classes : spec.k_values)
        for (auto [l1, l2] : spec.lambdas) {
          Json cell{{"type", to_string(type)}, {"p", p}, {"K", classes},
                    {"lambda1", l1},           {"lambda2", l2}, {"seed", spec.seed},
                    {"r", spec.r},             {"repetitions", spec.repetitions},
                    {"iteration_cap", spec.iteration_cap}, {"tol", spec.tol},
                    {"rho", spec.rho}};
          try {
            DatagenConfig cfg;
            cfg.type = type;
            cfg.p = p;
            cfg.classes = classes;
            cfg.r = spec.r;
            cfg.seed = spec.seed;
            GroundTruth truth = gen_precisions(cfg);
            CovarianceSet s;
            for (Index k = 0; k < classes; ++k)
              s.push_back(empirical_covariance(sample_gaussian(
                  truth.precisions[k], cfg.sample_count(), sample_seed(cfg.seed, k))));

            Json modes = Json::object();
            std::optional<PartitionFamily> hybrid, local, global;
            for (ScreenMode mode : spec.modes) {
              const auto t0 = Clock::now();
              PartitionFamily family = screen(s, l1, l2, mode);
              const double screen_seconds =
                  std::chrono::duration<double>(Clock::now() - t0).count();
              std::vector<std::uint64_t> cx;
              std::uint64_t total = 0;
              std::vector<Index> counts;
              for (const Partition& part : family) {
                cx.push_back(complexity_estimate(part));
                total += cx.back();
                counts.push_back(part.size());
              }
              Json m{{"screen_seconds", screen_seconds},
                     {"complexity", cx},
                     {"total_complexity", total},
                     {"components", counts}};
              if (spec.run_solver) {
                SolveOptions opts;
                opts.partition = family;
                opts.threads = spec.threads;
                opts.tol_primal = opts.tol_dual = spec.tol;
                opts.max_iter = spec.iteration_cap > 0 ? spec.iteration_cap : spec.max_iter;
                std::vector<double> times;
                SolveReport last;
                for (Index rep = 0; rep < spec.repetitions; ++rep) {
                  SolveResult res = admm_solve(s, PenaltyConfig{l1, l2, spec.rho}, opts);
                  const double t = res.report.wall_times.total;
                  times.push_back(spec.iteration_cap > 0
                                      ? t / static_cast<double>(res.report.iterations)
                                      : t);
                  last = std::move(res.report);
                }
                m["samples"] = times;
                m["wall_time"] = median(times);
                m["wall_time_kind"] =
                    spec.iteration_cap > 0 ? "seconds_per_iteration" : "seconds_to_tolerance";
                m["iterations"] = last.iterations;
                m["converged"] = last.converged;
                m["final_objective"] = last.final_objective;
              }
              modes[to_string(mode)] = std::move(m);
              if (mode == ScreenMode::hybrid) hybrid = std::move(family);
              else if (mode == ScreenMode::local) local = std::move(family);
              else if (mode == ScreenMode::global) global = std::move(family);
            }
            cell["modes"] = modes;

            Json ratios = Json::object();
            bool refinement_ok = true;
            auto compare = [&](const std::optional<PartitionFamily>& other,
                               const std::string& name) {
              if (!hybrid || !other) return;
              const Json& h = modes[to_string(ScreenMode::hybrid)];
              const Json& o = modes[name];
              ratios["complexity_hybrid_over_" + name] =
                  h["total_complexity"].get<double>() / o["total_complexity"].get<double>();
              if (h.contains("wall_time") && o["wall_time"].get<double>() > 0.0)
                ratios["time_hybrid_over_" + name] =
                    h["wall_time"].get<double>() / o["wall_time"].get<double>();
              for (Index k = 0; k < classes; ++k) {
                const bool fine = refines((*hybrid)[k], (*other)[k]);
                const bool cheaper = complexity_estimate((*hybrid)[k]) <=
                                     complexity_estimate((*other)[k]);
                refinement_ok = refinement_ok && fine && cheaper;
              }
            };
            compare(global, "global");
            compare(local, "local");
            cell["ratios"] = ratios;
            cell["refinement_check"] = refinement_ok;
            if (!refinement_ok) cell["error"] = "hybrid partition does not refine a baseline";
          } catch (const std::exception& e) {
            cell["error"] = e.what();
          }
          log << "bench cell type=" << to_string(type) << " p=" << p << " K=" << classes
              << " l1=" << l1 << " l2=" << l2
              << (cell.contains("error") ? " error" : " ok") << "\n";
          cells.push_back(std::move(cell));
        }
  return Json{{"cells", std::move(cells)}};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Joint graphical lasso with hybrid covariance screening"};
  app.require_subcommand(1);
  const Json echo = args_echo(args);

  // gen
  DatagenConfig gen_cfg;
  std::string gen_type = "A";
  Index gen_samples = 0;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Generate synthetic K-class data");
  gen->add_option("--type", gen_type, "Dataset type A, B or C")->required();
  gen->add_option("--p", gen_cfg.p, "Variable count")->required();
  gen->add_option("--K", gen_cfg.classes, "Class count")->required();
  gen->add_option("--r", gen_cfg.r, "Off-diagonal coefficient");
  gen->add_option("--samples", gen_samples, "Samples per class (default 5p)");
  gen->add_option("--seed", gen_cfg.seed, "Random seed");
  gen->add_option("--block-min", gen_cfg.block_min);
  gen->add_option("--block-max", gen_cfg.block_max);
  gen->add_option("--perturbation", gen_cfg.perturbation);
  gen->add_option("--density", gen_cfg.block_density, "Within-block fill probability");
  gen->add_option("--outdir", gen_out)->required();

  // cov
  std::vector<std::string> cov_samples;
  std::string cov_out;
  auto* cov = app.add_subcommand("cov", "Samples to covariance matrices");
  cov->add_option("--samples", cov_samples)->required();
  cov->add_option("--outdir", cov_out)->required();

  // screen
  Inputs screen_inputs;
  double screen_l1 = 0.0, screen_l2 = 0.0;
  std::string screen_mode = "hybrid", screen_out;
  auto* scr = app.add_subcommand("screen", "Covariance screening");
  screen_inputs.add_to(scr);
  scr->add_option("--lambda1", screen_l1)->required();
  scr->add_option("--lambda2", screen_l2)->required();
  scr->add_option("--mode", screen_mode, "none|global|local|hybrid");
  scr->add_option("--out", screen_out, "Partition document")->required();

  // solve
  Inputs solve_inputs;
  SolveFlags flags;
  flags.threads = default_threads();
  std::string solve_out;
  auto* solve = app.add_subcommand("solve", "Screen then solve with block ADMM");
  solve_inputs.add_to(solve);
  solve->add_option("--lambda1", flags.l1)->required();
  solve->add_option("--lambda2", flags.l2)->required();
  solve->add_option("--rho", flags.rho);
  solve->add_option("--tol-primal", flags.tol_primal);
  solve->add_option("--tol-dual", flags.tol_dual);
  solve->add_option("--max-iter", flags.max_iter);
  solve->add_option("--screen", flags.screen, "none|global|local|hybrid");
  solve->add_option("--threads", flags.threads);
  solve->add_flag("--trace-objective", flags.trace);
  solve->add_option("--outdir", solve_out)->required();

  // validate
  Inputs val_inputs;
  std::string val_partition, val_out;
  std::vector<std::string> val_solution;
  double val_l1 = 0.0, val_l2 = 0.0, val_zero_tol = kDefaultZeroTol;
  auto* val = app.add_subcommand("validate", "Check feasibility conditions");
  val_inputs.add_to(val);
  val->add_option("--partition", val_partition)->required();
  val->add_option("--solution", val_solution, "Per-class solution matrices");
  val->add_option("--lambda1", val_l1)->required();
  val->add_option("--lambda2", val_l2)->required();
  val->add_option("--zero-tol", val_zero_tol);
  val->add_option("--out", val_out);

  // bench
  BenchSpec spec;
  spec.threads = default_threads();
  std::string b_types = "C", b_p = "200", b_k = "2", b_lambdas = "0.009:0.0005",
              b_modes = "hybrid,local,global", b_out;
  bool b_screen_only = false;
  auto* bench = app.add_subcommand("bench", "Compare screening modes");
  bench->add_option("--types", b_types, "Comma list of A,B,C");
  bench->add_option("--p", b_p, "Comma list of variable counts");
  bench->add_option("--K", b_k, "Comma list of class counts");
  bench->add_option("--lambdas", b_lambdas, "Comma list of l1:l2 pairs");
  bench->add_option("--modes", b_modes);
  bench->add_option("--repetitions", spec.repetitions);
  bench->add_option("--seed", spec.seed);
  bench->add_option("--r", spec.r);
  bench->add_option("--iter-cap", spec.iteration_cap, "Fixed iteration count (0: to tolerance)");
  bench->add_option("--max-iter", spec.max_iter);
  bench->add_option("--tol", spec.tol);
  bench->add_option("--rho", spec.rho);
  bench->add_option("--threads", spec.threads);
  bench->add_flag("--screen-only", b_screen_only, "Skip the solver; complexities only");
  bench->add_option("--outdir", b_out)->required();

  std::vector<const char*> argv{"jgl"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kInputError;
  }

  try {
    if (*gen) {
      gen_cfg.type = parse_dataset_type(gen_type);
      if (gen_samples > 0) gen_cfg.samples_per_class = gen_samples;
      return cmd_gen(gen_cfg, gen_out, echo, out);
    }
    if (*cov) return cmd_cov(cov_samples, cov_out, echo, out);
    if (*scr)
      return cmd_screen(screen_inputs, screen_l1, screen_l2,
                        parse_screen_mode(screen_mode), screen_out, echo, out);
    if (*solve) return cmd_solve(solve_inputs, flags, solve_out, echo, out, err);
    if (*val)
      return cmd_validate(val_inputs, val_partition, val_solution, val_l1, val_l2,
                          val_zero_tol, val_out, echo, out);
    if (*bench) {
      auto to_index = [](const std::string& v) { return static_cast<Index>(std::stoull(v)); };
      spec.types = parse_list<DatasetType>(b_types, parse_dataset_type);
      spec.p_values = parse_list<Index>(b_p, to_index);
      spec.k_values = parse_list<Index>(b_k, to_index);
      spec.modes = parse_list<ScreenMode>(b_modes, parse_screen_mode);
      spec.lambdas = parse_list<std::pair<double, double>>(b_lambdas, [](const std::string& v) {
        auto colon = v.find(':');
        if (colon == std::string::npos) throw InputError("lambda pair '" + v + "' needs l1:l2");
        return std::make_pair(std::stod(v.substr(0, colon)), std::stod(v.substr(colon + 1)));
      });
      spec.run_solver = !b_screen_only;
      ensure_dir(b_out);
      Json report = run_bench(spec, out);
      report["command"] = echo;
      io::write_json(fs::path(b_out) / "bench.json", report);
      return kOk;
    }
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    return kNumericError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace jgl::cli
