// smscube: encode / prerun / cube / conquer / pipeline / sweep

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "smscube/conquer.hpp"
#include "smscube/cubing.hpp"
#include "smscube/encoders.hpp"

using namespace smscube;
namespace fs = std::filesystem;

namespace {

struct EncodeArgs {
  std::string problem = "all";
  int n = 4;
  int k = 3;
  std::optional<int> m;
  std::optional<bool> static_sb;
  bool not_maximal = false;
  std::uint64_t minimality_budget = 10000;

  EncodingSpec spec() const {
    EncodingSpec s;
    s.problem = parse_problem(problem);
    s.n = n;
    s.k = k;
    s.m = m;
    s.static_sb = static_sb;
    s.maximal = !not_maximal;
    return s;
  }
};

struct SolverArgs {
  int frequency = 1;
  bool no_restarts = false;
  bool chrono = false;
  bool seedless = true;  // there is no RNG anywhere; kept for scripts

  SolverConfig config() const {
    SolverConfig c;
    c.propagator_frequency = frequency;
    c.restarts_enabled = !no_restarts;
    c.chronological_backtracking_enabled = chrono;
    return c;
  }
};

struct CubeArgs {
  std::string cuber = "la-edge";
  std::string sigma = "default";
  std::optional<int> cutoff;
  std::optional<std::uint64_t> budget;
};

void add_encode(CLI::App* app, EncodeArgs& a) {
  app->add_option("--problem", a.problem, "all | tf | ks | d2")->capture_default_str();
  app->add_option("--n", a.n, "number of vertices")->capture_default_str();
  app->add_option("--k", a.k, "triangle-free: chromatic number to reach")->capture_default_str();
  app->add_option("--m", a.m, "diameter-2: number of edges (default floor(n^2/4))");
  app->add_option("--static-sb", a.static_sb, "static symmetry breaking clauses (true/false)");
  app->add_flag("--not-maximal", a.not_maximal, "triangle-free: drop the maximality clauses");
  app->add_option("--minimality-budget", a.minimality_budget, "node budget of the minimality check")->capture_default_str();
}

void add_solver(CLI::App* app, SolverArgs& a) {
  app->add_option("--frequency", a.frequency, "consult propagators at every k-th fixpoint")->capture_default_str();
  app->add_flag("--no-restarts", a.no_restarts);
  app->add_flag("--chrono", a.chrono, "chronological backtracking");
  app->add_flag("--seedless", a.seedless, "deterministic heuristics (always on)");
}

void add_cube(CLI::App* app, CubeArgs& a) {
  app->add_option("--cuber", a.cuber, "cdcl | la-all | la-edge | march")->capture_default_str();
  app->add_option("--sigma", a.sigma, "default | march | ks | tf | smc")->capture_default_str();
  app->add_option("--cutoff", a.cutoff, "edge variables (cdcl) or assigned variables (look-ahead)");
  app->add_option("--cube-budget", a.budget, "conflicts (cdcl) or tree nodes (look-ahead)");
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

EnrichedFormula load_formula(const std::string& path, const Encoding& enc) {
  if (path.empty()) {
    EnrichedFormula ef;
    ef.base = enc.formula;
    return ef;
  }
  EnrichedFormula ef = parse_enriched(slurp(path));
  if (ef.base.num_edge_vars() != enc.formula.num_edge_vars() || ef.base.num_vars() < enc.formula.num_vars())
    throw ConfigError({path + " does not match the encoding given on the command line"});
  return ef;
}

PipelineConfig pipeline_config(const EncodeArgs& e, const SolverArgs& s, const CubeArgs& c, std::uint64_t prerun) {
  PipelineConfig cfg;
  cfg.encoding = e.spec();
  cfg.cuber = parse_cuber(c.cuber);
  cfg.sigma = c.sigma;
  cfg.cutoff = c.cutoff;
  cfg.cube_budget = c.budget;
  cfg.prerun_conflicts = prerun;
  cfg.solver = s.config();
  cfg.minimality_budget = e.minimality_budget;
  cfg.validate();
  return cfg;
}

void print_summary(const PipelineReport& rep, std::size_t cubes) {
  std::cout << "cubes " << cubes << "\nmodels " << rep.models.size() << "\nsum_time_s " << static_cast<double>(rep.sum_ns) / 1e9
            << "\nmax_time_s " << static_cast<double>(rep.max_ns) / 1e9 << "\nsum_conflicts " << rep.sum_conflicts
            << "\nmax_conflicts " << rep.max_conflicts << "\ncomplete " << (rep.complete ? "yes" : "no") << '\n';
}

void write_outputs(const fs::path& dir, int n, const PipelineReport& rep, const std::string& report) {
  std::ostringstream models;
  for (const auto& line : model_lines(n, rep.models)) models << line << '\n';
  spit(dir / "graphs.models", models.str());
  spit(dir / "report.json", report + "\n");
  std::ostringstream csv;
  write_histogram_csv(csv, rep.buckets);
  spit(dir / "histogram.csv", csv.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cube-and-conquer graph search modulo isomorphism"};
  app.require_subcommand(1);

  EncodeArgs enc_args;
  SolverArgs solver_args;
  CubeArgs cube_args;
  std::uint64_t prerun_conflicts = 1000;
  std::string formula_path;
  std::string cubes_path;
  std::string out = "out";
  int workers = 1;
  std::vector<double> bucket_edges = kDefaultBucketEdgesMin;

  auto* encode_cmd = app.add_subcommand("encode", "write the CNF encoding and its variable map");
  add_encode(encode_cmd, enc_args);
  encode_cmd->add_option("-o,--out", out, "output .cnf (a .vars.json sidecar goes next to it)")->capture_default_str();

  auto* prerun_cmd = app.add_subcommand("prerun", "bounded enumeration; writes the enriched formula");
  add_encode(prerun_cmd, enc_args);
  add_solver(prerun_cmd, solver_args);
  prerun_cmd->add_option("--prerun-conflicts", prerun_conflicts)->capture_default_str();
  prerun_cmd->add_option("-o,--out", out, "output .cnf")->capture_default_str();

  auto* cube_cmd = app.add_subcommand("cube", "split the (enriched) formula into cubes");
  add_encode(cube_cmd, enc_args);
  add_solver(cube_cmd, solver_args);
  add_cube(cube_cmd, cube_args);
  cube_cmd->add_option("--formula", formula_path, "enriched formula from prerun (default: plain encoding)");
  cube_cmd->add_option("-o,--out", out, "output .icnf")->capture_default_str();

  auto* conquer_cmd = app.add_subcommand("conquer", "solve every cube and collect the models");
  add_encode(conquer_cmd, enc_args);
  add_solver(conquer_cmd, solver_args);
  conquer_cmd->add_option("--formula", formula_path, "enriched formula from prerun (default: plain encoding)");
  conquer_cmd->add_option("--cubes", cubes_path, "cubes in iCNF")->required();
  conquer_cmd->add_option("--workers", workers)->capture_default_str();
  conquer_cmd->add_option("--bucket-edges", bucket_edges, "histogram bucket edges in minutes");
  conquer_cmd->add_option("-o,--out", out, "output directory")->capture_default_str();

  std::string config_path;
  auto* pipeline_cmd = app.add_subcommand("pipeline", "encode, prerun, cube and conquer in one go");
  pipeline_cmd->add_option("--config", config_path, "JSON configuration (flags are ignored when given)");
  add_encode(pipeline_cmd, enc_args);
  add_solver(pipeline_cmd, solver_args);
  add_cube(pipeline_cmd, cube_args);
  pipeline_cmd->add_option("--prerun-conflicts", prerun_conflicts)->capture_default_str();
  pipeline_cmd->add_option("--workers", workers)->capture_default_str();
  pipeline_cmd->add_option("--bucket-edges", bucket_edges, "histogram bucket edges in minutes");
  pipeline_cmd->add_option("-o,--out", out, "output directory")->capture_default_str();

  std::string metric = "conflicts";
  std::optional<std::uint64_t> conflict_limit;
  std::optional<int> timeout_ms;
  std::vector<double> class_edges;
  auto* sweep_cmd = app.add_subcommand("sweep", "flip each solver parameter to an extreme and rank the effect");
  add_encode(sweep_cmd, enc_args);
  add_solver(sweep_cmd, solver_args);
  add_cube(sweep_cmd, cube_args);
  sweep_cmd->add_option("--prerun-conflicts", prerun_conflicts)->capture_default_str();
  sweep_cmd->add_option("--metric", metric, "conflicts | time")->capture_default_str();
  sweep_cmd->add_option("--conflict-limit", conflict_limit, "per-cube conflict cap (censored)");
  sweep_cmd->add_option("--timeout-ms", timeout_ms, "per-cube time cap (censored)");
  sweep_cmd->add_option("--class-edges", class_edges, "hardness class bounds in the metric's unit");
  sweep_cmd->add_option("--workers", workers)->capture_default_str();
  sweep_cmd->add_option("-o,--out", out, "output .json")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (encode_cmd->parsed()) {
      const auto spec = enc_args.spec();
      const Encoding enc = encode(spec);
      fs::path cnf(out);
      if (cnf.extension() != ".cnf") cnf += ".cnf";
      spit(cnf, serialize_dimacs(enc.formula));
      fs::path sidecar = cnf;
      sidecar.replace_extension(".vars.json");
      spit(sidecar, enc.vars.to_json(enc.formula.num_vars()) + "\n");
      std::cout << cnf.string() << ": " << enc.formula.num_vars() << " vars, " << enc.formula.num_clauses() << " clauses\n";
      return 0;
    }
    if (prerun_cmd->parsed()) {
      const Encoding enc = encode(enc_args.spec());
      CubingSession session(enc.formula, make_propagators(enc, enc_args.minimality_budget), solver_args.config());
      const auto ef = session.prerun(prerun_conflicts);
      spit(out, serialize_enriched(ef));
      std::cout << "sigma " << ef.sigma.size() << "\npi " << ef.pi.size() << "\nlambda " << ef.lambda.size()
                << "\nblocked " << ef.blocked_models.size() << "\ncomplete " << (ef.complete ? "yes" : "no") << '\n';
      return 0;
    }
    if (cube_cmd->parsed()) {
      const Encoding enc = encode(enc_args.spec());
      const auto ef = load_formula(formula_path, enc);
      PipelineConfig cfg = pipeline_config(enc_args, solver_args, cube_args, 0);
      // the CDCL cuber gets a fresh solver over the loaded formula
      CubingSession session(ef.flatten(), make_propagators(enc, enc_args.minimality_budget), cfg.solver);
      const auto cs = make_cubes(cfg, enc, session, ef);
      spit(out, write_icnf(cs));
      std::cout << "cubes " << cs.cubes.size() << "\nmodels_while_cubing " << cs.models.size() << "\ncomplete "
                << (cs.complete ? "yes" : "no") << '\n';
      if (!cs.models.empty()) {
        std::cout << "models found while cubing:\n";
        for (const auto& line : model_lines(enc.spec.n, cs.models)) std::cout << line << '\n';
      }
      return cs.complete ? 0 : 1;
    }
    if (conquer_cmd->parsed()) {
      const Encoding enc = encode(enc_args.spec());
      const auto ef = load_formula(formula_path, enc);
      const auto cs = parse_icnf(slurp(cubes_path));
      ConquerOptions opt;
      opt.workers = workers;
      opt.solver = solver_args.config();
      opt.bucket_edges_min = bucket_edges;
      const std::uint64_t mb = enc_args.minimality_budget;
      const auto rep = conquer(ef, cs, [&] { return make_propagators(enc, mb); }, opt);
      PipelineRun run;
      run.enriched = ef;
      run.cubes = cs;
      run.report = rep;
      PipelineConfig cfg;
      cfg.encoding = enc.spec;
      cfg.workers = workers;
      cfg.solver = opt.solver;
      write_outputs(out, enc.spec.n, rep, report_json(cfg, run));
      print_summary(rep, cs.cubes.size());
      return rep.complete ? 0 : 1;
    }
    if (pipeline_cmd->parsed()) {
      PipelineConfig cfg;
      if (!config_path.empty()) {
        cfg = PipelineConfig::from_json(slurp(config_path));
      } else {
        cfg = pipeline_config(enc_args, solver_args, cube_args, prerun_conflicts);
        cfg.workers = workers;
        cfg.bucket_edges_min = bucket_edges;
      }
      if (cfg.output_dir.empty()) cfg.output_dir = out;
      const auto run = run_pipeline(cfg);
      print_summary(run.report, run.cubes.cubes.size());
      std::cout << "output " << cfg.output_dir << '\n';
      return run.exit_code;
    }
    if (sweep_cmd->parsed()) {
      PipelineConfig cfg = pipeline_config(enc_args, solver_args, cube_args, prerun_conflicts);
      const Encoding enc = encode(cfg.encoding);
      CubingSession session(enc.formula, make_propagators(enc, cfg.minimality_budget), cfg.solver);
      const auto ef = session.prerun(cfg.prerun_conflicts);
      const auto cs = make_cubes(cfg, enc, session, ef);
      if (cs.cubes.empty()) {
        std::cerr << "nothing to sweep: the cuber produced no cubes (try a smaller --prerun-conflicts)\n";
        return 1;
      }
      SweepOptions opt;
      if (metric == "conflicts") opt.metric = SweepMetric::Conflicts;
      else if (metric == "time") opt.metric = SweepMetric::WallTime;
      else throw ConfigError({"unknown metric '" + metric + "' (expected conflicts or time)"});
      opt.conflict_limit = conflict_limit;
      if (timeout_ms) opt.timeout = std::chrono::milliseconds(*timeout_ms);
      opt.class_edges = class_edges;
      opt.workers = workers;
      const std::uint64_t mb = cfg.minimality_budget;
      const auto specs = default_sweep_specs(cfg.solver);
      const auto res = sensitivity_sweep(specs, ef, cs, [&] { return make_propagators(enc, mb); }, cfg.solver, opt);
      spit(out, res.to_json() + "\n");
      for (const auto& r : res.ranking) {
        std::cout << r.parameter;
        for (std::size_t c = 0; c < r.rank.size(); ++c)
          std::cout << "  " << res.classes[c] << " rank " << (r.rank[c] ? std::to_string(*r.rank[c]) : std::string("-"))
                    << " ratio " << r.best_ratio[c];
        std::cout << '\n';
      }
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
