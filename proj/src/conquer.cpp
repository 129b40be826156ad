#include "smscube/conquer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "smscube/graph.hpp"

namespace smscube {

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr double kNsPerMinute = 60e9;

std::vector<Cube> sorted_union(std::initializer_list<const std::vector<Cube>*> parts) {
  std::set<Cube> all;
  for (const auto* p : parts) all.insert(p->begin(), p->end());
  return {all.begin(), all.end()};
}

}  // namespace

// --- histogram ------------------------------------------------------------

std::vector<HistogramBucket> histogram(std::span<const std::int64_t> times_ns, std::span<const double> edges_min) {
  std::vector<std::string> problems;
  for (std::size_t i = 0; i < edges_min.size(); ++i) {
    if (!(edges_min[i] > 0)) problems.push_back("bucket edges must be positive");
    if (i > 0 && !(edges_min[i] > edges_min[i - 1])) problems.push_back("bucket edges must be strictly increasing");
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
  std::vector<HistogramBucket> out(edges_min.size() + 1);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].lo_min = i == 0 ? 0.0 : edges_min[i - 1];
    if (i < edges_min.size()) out[i].hi_min = edges_min[i];
  }
  // totals are summed in integer nanoseconds so they add up exactly
  std::vector<std::int64_t> ns(out.size(), 0);
  for (std::int64_t t : times_ns) {
    const double minutes = static_cast<double>(t) / kNsPerMinute;
    std::size_t b = 0;
    while (b < edges_min.size() && minutes >= edges_min[b]) ++b;
    ns[b] += t;
    ++out[b].cube_count;
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i].total_time_s = static_cast<double>(ns[i]) / 1e9;
  return out;
}

void write_histogram_csv(std::ostream& out, std::span<const HistogramBucket> buckets) {
  out << "bucket_lo_min,bucket_hi_min,total_time_s,cube_count\n";
  for (const auto& b : buckets) {
    out << b.lo_min << ',';
    if (b.hi_min) out << *b.hi_min;
    else out << "inf";
    out << ',' << std::setprecision(9) << b.total_time_s << std::setprecision(6) << ',' << b.cube_count << '\n';
  }
}

// --- conquer --------------------------------------------------------------

namespace {

CubeResult solve_cube(const CnfFormula& f, const Cube& cube, const PropagatorFactory& factory, const SolverConfig& cfg,
                      std::span<const Var> proj) {
  CubeResult r;
  PropagatorSet props = factory ? factory() : PropagatorSet{};
  const auto start = std::chrono::steady_clock::now();
  Solver s(f, cfg);
  for (ExternalPropagator* p : props.pointers()) s.attach(*p);
  auto e = s.enumerate(proj, cube);
  r.wall_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start).count();
  r.status = e.complete ? SolveStatus::Unsat : SolveStatus::BudgetExhausted;
  r.models = std::move(e.models);
  r.conflicts = e.stats.conflicts;
  r.decisions = e.stats.decisions;
  return r;
}

}  // namespace

PipelineReport conquer(const EnrichedFormula& ef, const CubeSet& cs, const PropagatorFactory& factory,
                       const ConquerOptions& opt) {
  if (opt.workers < 1) throw ConfigError({"workers must be >= 1"});
  const CnfFormula f = ef.flatten();
  const auto proj = first_vars(f.num_edge_vars() > 0 ? f.num_edge_vars() : f.num_vars());
  PipelineReport rep;
  rep.results.resize(cs.cubes.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cs.cubes.size()) return;
      CubeResult r;
      for (int attempt = 1; attempt <= 2; ++attempt) {
        try {
          r = solve_cube(f, cs.cubes[i], factory, opt.solver, proj);
          r.attempts = attempt;
          r.failed = false;
          r.error.clear();
          break;
        } catch (const std::exception& e) {
          r = CubeResult{};
          r.attempts = attempt;
          r.failed = true;
          r.error = e.what();
        }
      }
      r.id = i;
      rep.results[i] = std::move(r);
    }
  };
  {
    std::vector<std::jthread> pool;
    const int n = std::min<int>(opt.workers, std::max<int>(1, static_cast<int>(cs.cubes.size())));
    for (int w = 0; w < n; ++w) pool.emplace_back(worker);
  }

  rep.complete = ef.complete || cs.complete;
  std::vector<Cube> cube_models;
  std::vector<std::int64_t> times;
  for (const auto& r : rep.results) {
    rep.complete = rep.complete && !r.failed && r.status == SolveStatus::Unsat;
    cube_models.insert(cube_models.end(), r.models.begin(), r.models.end());
    times.push_back(r.wall_ns);
    rep.sum_ns += r.wall_ns;
    rep.max_ns = std::max(rep.max_ns, r.wall_ns);
    rep.sum_conflicts += r.conflicts;
    rep.max_conflicts = std::max(rep.max_conflicts, r.conflicts);
  }
  rep.prerun_models = ef.blocked_models;
  rep.cubing_models = cs.models;
  rep.models = sorted_union({&rep.prerun_models, &rep.cubing_models, &cube_models});
  rep.buckets = histogram(times, opt.bucket_edges_min);
  return rep;
}

Cube edges_to_cube(const PartialGraph& g) {
  std::vector<Lit> lits;
  const int n = g.num_vertices();
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      const EdgeState s = g.at(u, v);
      if (s == EdgeState::Unknown) continue;
      lits.push_back(Lit::make(edge_var(n, u, v), s == EdgeState::Absent));
    }
  std::sort(lits.begin(), lits.end());
  return Cube(std::move(lits));
}

std::vector<std::string> model_lines(int n, std::span<const Cube> models) {
  std::vector<std::string> out;
  for (const Cube& m : models) {
    PartialGraph g(n, EdgeState::Absent);
    for (Lit l : m) {
      if (l.var() > static_cast<Var>(num_pairs(n))) continue;
      const auto p = pair_of_var(n, l.var());
      if (!l.negated()) g.set(p.u, p.v, EdgeState::Present);
    }
    out.push_back(edge_list_string(g) + "\t" + to_graph6(g));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// --- pipeline -------------------------------------------------------------

std::string to_string(Cuber c) {
  switch (c) {
    case Cuber::Cdcl: return "cdcl";
    case Cuber::LookaheadAll: return "la-all";
    case Cuber::LookaheadEdge: return "la-edge";
    case Cuber::March: return "march";
  }
  return "?";
}

Cuber parse_cuber(const std::string& s) {
  for (Cuber c : {Cuber::Cdcl, Cuber::LookaheadAll, Cuber::LookaheadEdge, Cuber::March})
    if (to_string(c) == s) return c;
  throw ConfigError({"unknown cuber '" + s + "' (expected cdcl, la-all, la-edge or march)"});
}

void PipelineConfig::validate() const {
  std::vector<std::string> problems;
  try {
    encoding.validate();
  } catch (const ConfigError& e) {
    problems.insert(problems.end(), e.problems().begin(), e.problems().end());
  }
  try {
    solver.validate();
  } catch (const ConfigError& e) {
    problems.insert(problems.end(), e.problems().begin(), e.problems().end());
  }
  try {
    find_score(sigma);
  } catch (const ConfigError& e) {
    problems.insert(problems.end(), e.problems().begin(), e.problems().end());
  }
  if (cutoff && *cutoff < 1) problems.push_back("cutoff must be >= 1");
  if (workers < 1) problems.push_back("workers must be >= 1");
  if (cube_budget && *cube_budget == 0) problems.push_back("cube_budget must be positive");
  for (std::size_t i = 0; i < bucket_edges_min.size(); ++i) {
    if (!(bucket_edges_min[i] > 0) || (i > 0 && !(bucket_edges_min[i] > bucket_edges_min[i - 1]))) {
      problems.push_back("bucket_edges_min must be positive and strictly increasing");
      break;
    }
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
}

PipelineConfig PipelineConfig::from_json(std::string_view text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw ConfigError({std::string("malformed JSON: ") + e.what()});
  }
  if (!j.is_object()) throw ConfigError({"configuration must be a JSON object"});
  PipelineConfig c;
  std::vector<std::string> problems;
  auto field = [&](const char* key, auto&& apply) {
    if (!j.contains(key)) return;
    try {
      apply(j.at(key));
    } catch (const ConfigError& e) {
      problems.insert(problems.end(), e.problems().begin(), e.problems().end());
    } catch (const std::exception&) {
      problems.push_back(std::string("field '") + key + "' has the wrong type");
    }
  };
  static const std::set<std::string> known = {"problem", "n", "k", "m", "static_sb", "maximal", "cuber", "sigma",
                                              "cutoff", "prerun_conflicts", "cube_budget", "frequency", "restarts",
                                              "chrono", "default_phase", "harvest_limit", "conflict_budget",
                                              "minimality_budget", "workers", "bucket_edges_min", "output_dir"};
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) problems.push_back("unknown field '" + k + "'");
  if (!j.contains("problem")) problems.push_back("missing field 'problem'");
  if (!j.contains("n")) problems.push_back("missing field 'n'");
  field("problem", [&](const ordered_json& v) { c.encoding.problem = parse_problem(v.get<std::string>()); });
  field("n", [&](const ordered_json& v) { c.encoding.n = v.get<int>(); });
  field("k", [&](const ordered_json& v) { c.encoding.k = v.get<int>(); });
  field("m", [&](const ordered_json& v) { c.encoding.m = v.get<int>(); });
  field("static_sb", [&](const ordered_json& v) { c.encoding.static_sb = v.get<bool>(); });
  field("maximal", [&](const ordered_json& v) { c.encoding.maximal = v.get<bool>(); });
  field("cuber", [&](const ordered_json& v) { c.cuber = parse_cuber(v.get<std::string>()); });
  field("sigma", [&](const ordered_json& v) { c.sigma = v.get<std::string>(); });
  field("cutoff", [&](const ordered_json& v) { c.cutoff = v.get<int>(); });
  field("prerun_conflicts", [&](const ordered_json& v) { c.prerun_conflicts = v.get<std::uint64_t>(); });
  field("cube_budget", [&](const ordered_json& v) { c.cube_budget = v.get<std::uint64_t>(); });
  field("frequency", [&](const ordered_json& v) { c.solver.propagator_frequency = v.get<int>(); });
  field("restarts", [&](const ordered_json& v) { c.solver.restarts_enabled = v.get<bool>(); });
  field("chrono", [&](const ordered_json& v) { c.solver.chronological_backtracking_enabled = v.get<bool>(); });
  field("default_phase", [&](const ordered_json& v) { c.solver.default_phase = v.get<bool>(); });
  field("harvest_limit", [&](const ordered_json& v) { c.solver.learned_clause_size_harvest_limit = v.get<int>(); });
  field("conflict_budget", [&](const ordered_json& v) { c.solver.conflict_budget = v.get<std::uint64_t>(); });
  field("minimality_budget", [&](const ordered_json& v) { c.minimality_budget = v.get<std::uint64_t>(); });
  field("workers", [&](const ordered_json& v) { c.workers = v.get<int>(); });
  field("bucket_edges_min", [&](const ordered_json& v) { c.bucket_edges_min = v.get<std::vector<double>>(); });
  field("output_dir", [&](const ordered_json& v) { c.output_dir = v.get<std::string>(); });
  try {
    c.validate();
  } catch (const ConfigError& e) {
    problems.insert(problems.end(), e.problems().begin(), e.problems().end());
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return c;
}

std::string PipelineConfig::to_json() const {
  ordered_json j;
  j["problem"] = smscube::to_string(encoding.problem);
  j["n"] = encoding.n;
  j["k"] = encoding.k;
  j["m"] = encoding.edge_count();
  j["static_sb"] = encoding.use_static_sb();
  j["maximal"] = encoding.maximal;
  j["cuber"] = smscube::to_string(cuber);
  j["sigma"] = sigma;
  if (cutoff) j["cutoff"] = *cutoff;
  j["prerun_conflicts"] = prerun_conflicts;
  if (cube_budget) j["cube_budget"] = *cube_budget;
  j["frequency"] = solver.propagator_frequency;
  j["restarts"] = solver.restarts_enabled;
  j["chrono"] = solver.chronological_backtracking_enabled;
  j["default_phase"] = solver.default_phase;
  j["harvest_limit"] = solver.learned_clause_size_harvest_limit;
  if (solver.conflict_budget) j["conflict_budget"] = *solver.conflict_budget;
  j["minimality_budget"] = minimality_budget;
  j["workers"] = workers;
  j["bucket_edges_min"] = bucket_edges_min;
  if (!output_dir.empty()) j["output_dir"] = output_dir;
  return j.dump(2);
}

int default_cutoff(Cuber c, const CnfFormula& f) {
  const Var edges = f.num_edge_vars() > 0 ? f.num_edge_vars() : f.num_vars();
  if (c == Cuber::Cdcl) return std::max<int>(1, static_cast<int>(edges) / 3);
  return std::max<int>(1, static_cast<int>(f.num_vars()) / 2);
}

CubeSet make_cubes(const PipelineConfig& cfg, const Encoding& enc, CubingSession& session, const EnrichedFormula& ef) {
  const int cutoff = cfg.cutoff.value_or(default_cutoff(cfg.cuber, enc.formula));
  if (ef.complete) {
    CubeSet empty;
    empty.origin = "prerun complete";
    return empty;
  }
  switch (cfg.cuber) {
    case Cuber::Cdcl: return session.cube_cdcl(cutoff, cfg.cube_budget);
    case Cuber::March: return cube_march_style(ef, cutoff, cfg.cube_budget);
    case Cuber::LookaheadAll:
    case Cuber::LookaheadEdge: {
      LookaheadOptions opt;
      opt.scope = cfg.cuber == Cuber::LookaheadAll ? LookaheadScope::AllVars : LookaheadScope::EdgeVars;
      opt.cutoff = cutoff;
      opt.node_budget = cfg.cube_budget;
      PropagatorSet props = make_propagators(enc, cfg.minimality_budget);
      return cube_lookahead(ef, props.pointers(), find_score(cfg.sigma), opt, cfg.solver);
    }
  }
  throw ConfigError({"unknown cuber"});
}

std::string report_json(const PipelineConfig& cfg, const PipelineRun& run) {
  const auto& rep = run.report;
  ordered_json j;
  j["config"] = ordered_json::parse(cfg.to_json());
  j["complete"] = rep.complete;
  j["model_count"] = rep.models.size();
  j["prerun"] = {{"complete", run.enriched.complete},
                 {"sigma", run.enriched.sigma.size()},
                 {"pi", run.enriched.pi.size()},
                 {"lambda", run.enriched.lambda.size()},
                 {"blocked_models", run.enriched.blocked_models.size()}};
  j["cubing"] = {{"origin", run.cubes.origin},
                 {"cubes", run.cubes.cubes.size()},
                 {"complete", run.cubes.complete},
                 {"truncated", run.cubes.truncated},
                 {"models", run.cubes.models.size()},
                 {"conflicts", run.cubes.stats.conflicts},
                 {"nodes", run.cubes.stats.nodes},
                 {"refuted", run.cubes.stats.refuted},
                 {"failed_literals", run.cubes.stats.failed_literals}};
  j["sum_time_s"] = static_cast<double>(rep.sum_ns) / 1e9;
  j["max_time_s"] = static_cast<double>(rep.max_ns) / 1e9;
  j["sum_conflicts"] = rep.sum_conflicts;
  j["max_conflicts"] = rep.max_conflicts;
  auto hist = ordered_json::array();
  for (const auto& b : rep.buckets) {
    ordered_json x;
    x["lo_min"] = b.lo_min;
    x["hi_min"] = b.hi_min ? ordered_json(*b.hi_min) : ordered_json(nullptr);
    x["total_time_s"] = b.total_time_s;
    x["cube_count"] = b.cube_count;
    hist.push_back(x);
  }
  j["histogram"] = hist;
  auto cubes = ordered_json::array();
  for (const auto& r : rep.results) {
    ordered_json x;
    x["id"] = r.id;
    x["status"] = r.failed ? std::string("FAILED") : to_string(r.status);
    x["models"] = r.models.size();
    x["time_s"] = static_cast<double>(r.wall_ns) / 1e9;
    x["conflicts"] = r.conflicts;
    x["decisions"] = r.decisions;
    x["attempts"] = r.attempts;
    if (r.failed) x["error"] = r.error;
    cubes.push_back(x);
  }
  j["cubes"] = cubes;
  return j.dump(2);
}

PipelineRun run_pipeline(const PipelineConfig& cfg) {
  cfg.validate();
  PipelineRun run;
  const Encoding enc = encode(cfg.encoding);
  const std::uint64_t mb = cfg.minimality_budget;
  PropagatorFactory factory = [&enc, mb] { return make_propagators(enc, mb); };

  CubingSession session(enc.formula, factory(), cfg.solver);
  run.enriched = session.prerun(cfg.prerun_conflicts);
  run.cubes = make_cubes(cfg, enc, session, run.enriched);
  ConquerOptions opt;
  opt.workers = cfg.workers;
  opt.solver = cfg.solver;
  opt.bucket_edges_min = cfg.bucket_edges_min;
  run.report = conquer(run.enriched, run.cubes, factory, opt);
  run.exit_code = run.report.complete ? 0 : 1;

  if (!cfg.output_dir.empty()) {
    namespace fs = std::filesystem;
    const fs::path dir(cfg.output_dir);
    fs::create_directories(dir);
    std::ofstream(dir / "formula.cnf") << serialize_enriched(run.enriched);
    std::ofstream(dir / "cubes.icnf") << write_icnf(run.cubes);
    {
      std::ofstream out(dir / "graphs.models");
      for (const auto& line : model_lines(cfg.encoding.n, run.report.models)) out << line << '\n';
    }
    std::ofstream(dir / "report.json") << report_json(cfg, run) << '\n';
    std::ofstream csv(dir / "histogram.csv");
    write_histogram_csv(csv, run.report.buckets);
  }
  return run;
}

// --- sensitivity sweep ----------------------------------------------------

std::vector<SweepSpec> default_sweep_specs(const SolverConfig& base) {
  std::vector<SweepSpec> out;
  auto flag = [&](const char* name, bool SolverConfig::*member) {
    SweepSpec s{name, base.*member ? "true" : "false", {}};
    SolverConfig c = base;
    c.*member = !(base.*member);
    s.probes.push_back({c.*member ? "true" : "false", c});
    out.push_back(std::move(s));
  };
  flag("restarts_enabled", &SolverConfig::restarts_enabled);
  flag("chronological_backtracking_enabled", &SolverConfig::chronological_backtracking_enabled);
  flag("default_phase", &SolverConfig::default_phase);
  {
    SweepSpec s{"propagator_frequency", std::to_string(base.propagator_frequency), {}};
    for (int v : {1, 1 << 20}) {
      if (v == base.propagator_frequency) continue;
      SolverConfig c = base;
      c.propagator_frequency = v;
      s.probes.push_back({std::to_string(v), c});
    }
    out.push_back(std::move(s));
  }
  {
    SweepSpec s{"learned_clause_size_harvest_limit", std::to_string(base.learned_clause_size_harvest_limit), {}};
    for (int v : {1, 1000}) {
      if (v == base.learned_clause_size_harvest_limit) continue;
      SolverConfig c = base;
      c.learned_clause_size_harvest_limit = v;
      s.probes.push_back({std::to_string(v), c});
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<std::optional<int>> competition_rank(std::span<const double> ratios, int cap) {
  std::vector<std::optional<int>> out(ratios.size());
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    int better = 0;
    for (double r : ratios) better += r < ratios[i];
    const int rank = better + 1;
    if (rank <= cap) out[i] = rank;
  }
  return out;
}

namespace {

std::vector<double> cube_scores(const EnrichedFormula& ef, const CubeSet& cs, const PropagatorFactory& props,
                                SolverConfig cfg, const SweepOptions& opt) {
  if (opt.conflict_limit) cfg.conflict_budget = opt.conflict_limit;
  if (opt.timeout) cfg.time_budget = opt.timeout;
  ConquerOptions co;
  co.workers = opt.workers;
  co.solver = cfg;
  const auto rep = conquer(ef, cs, props, co);
  std::vector<double> out;
  for (const auto& r : rep.results) {
    const bool censored = r.status != SolveStatus::Unsat;
    if (opt.metric == SweepMetric::Conflicts) {
      out.push_back(censored && opt.conflict_limit ? static_cast<double>(*opt.conflict_limit) : static_cast<double>(r.conflicts));
    } else {
      const double t = static_cast<double>(r.wall_ns) / 1e9;
      out.push_back(censored && opt.timeout ? std::chrono::duration<double>(*opt.timeout).count() : t);
    }
  }
  return out;
}

double ratio(double probe, double base) {
  if (base == probe) return 1.0;
  if (base == 0) return std::numeric_limits<double>::infinity();
  return probe / base;
}

}  // namespace

SweepResult sensitivity_sweep(std::span<const SweepSpec> specs, const EnrichedFormula& ef, const CubeSet& cs,
                              const PropagatorFactory& props, const SolverConfig& baseline, const SweepOptions& opt) {
  if (cs.cubes.empty()) throw ConfigError({"sensitivity sweep needs a nonempty cube set"});
  for (std::size_t i = 1; i < opt.class_edges.size(); ++i)
    if (!(opt.class_edges[i] > opt.class_edges[i - 1])) throw ConfigError({"class edges must be strictly increasing"});
  SweepResult res;
  const auto base = cube_scores(ef, cs, props, baseline, opt);

  // hardness class of each cube under the baseline
  const std::size_t nclass = opt.class_edges.size() + 1;
  std::vector<std::size_t> cls(base.size());
  res.class_sizes.assign(nclass, 0);
  for (std::size_t i = 0; i < base.size(); ++i) {
    std::size_t c = 0;
    while (c < opt.class_edges.size() && base[i] >= opt.class_edges[c]) ++c;
    cls[i] = c;
    ++res.class_sizes[c];
  }
  const char* unit = opt.metric == SweepMetric::Conflicts ? "" : "s";
  for (std::size_t c = 0; c < nclass; ++c) {
    std::ostringstream name;
    name << '[' << (c == 0 ? 0.0 : opt.class_edges[c - 1]) << unit << ", ";
    if (c < opt.class_edges.size()) name << opt.class_edges[c] << unit << ')';
    else name << "inf)";
    res.classes.push_back(name.str());
  }
  auto totals = [&](const std::vector<double>& scores) {
    std::vector<double> t(nclass, 0.0);
    double all = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      t[cls[i]] += scores[i];
      all += scores[i];
    }
    t.push_back(all);
    return t;
  };
  const auto base_tot = totals(base);

  for (const auto& spec : specs) {
    SweepRanking rk;
    rk.parameter = spec.parameter;
    rk.best_ratio.assign(nclass, 1.0);
    for (const auto& probe : spec.probes) {
      const auto tot = totals(cube_scores(ef, cs, props, probe.config, opt));
      SweepRow row;
      row.parameter = spec.parameter;
      row.value = probe.value;
      for (std::size_t c = 0; c < nclass; ++c) {
        row.ratio.push_back(ratio(tot[c], base_tot[c]));
        rk.best_ratio[c] = std::min(rk.best_ratio[c], row.ratio.back());
      }
      row.overall = ratio(tot[nclass], base_tot[nclass]);
      res.rows.push_back(std::move(row));
    }
    res.ranking.push_back(std::move(rk));
  }
  for (auto& rk : res.ranking) rk.rank.assign(nclass, std::nullopt);
  for (std::size_t c = 0; c < nclass; ++c) {
    std::vector<double> col;
    for (const auto& rk : res.ranking) col.push_back(rk.best_ratio[c]);
    const auto ranks = competition_rank(col);
    for (std::size_t i = 0; i < ranks.size(); ++i) res.ranking[i].rank[c] = ranks[i];
  }
  return res;
}

std::string SweepResult::to_json() const {
  auto num = [](double x) { return std::isfinite(x) ? ordered_json(x) : ordered_json("inf"); };
  ordered_json j;
  j["classes"] = classes;
  j["class_sizes"] = class_sizes;
  auto rs = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json x;
    x["parameter"] = r.parameter;
    x["value"] = r.value;
    auto rat = ordered_json::array();
    for (double v : r.ratio) rat.push_back(num(v));
    x["ratio"] = rat;
    x["overall"] = num(r.overall);
    rs.push_back(x);
  }
  j["probes"] = rs;
  auto rk = ordered_json::array();
  for (const auto& r : ranking) {
    ordered_json x;
    x["parameter"] = r.parameter;
    auto br = ordered_json::array();
    for (double v : r.best_ratio) br.push_back(num(v));
    x["best_ratio"] = br;
    auto ranks = ordered_json::array();
    for (const auto& v : r.rank) ranks.push_back(v ? ordered_json(*v) : ordered_json(nullptr));
    x["rank"] = ranks;
    rk.push_back(x);
  }
  j["ranking"] = rk;
  return j.dump(2);
}

}  // namespace smscube
