// wfsched: generate instances, run schedulers, compare against the oracle,
// and run the verification suites.
//
// Exit codes: 0 ok, 1 violation, 2 usage or configuration error, 3 I/O error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "wfsched/harness.hpp"
#include "wfsched/oracle.hpp"
#include "wfsched/simulation.hpp"

namespace fs = std::filesystem;
using namespace wfsched;

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;
constexpr int kIo = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

fs::path output_dir() {
  const char* env = std::getenv("WFSCHED_OUT_DIR");
  return env && *env ? fs::path(env) : fs::path(".");
}

fs::path resolve_output(const std::string& given, const std::string& fallback) {
  if (!given.empty()) return given;
  fs::path dir = output_dir();
  fs::create_directories(dir);
  return dir / fallback;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::ios_base::failure("cannot write " + path.string());
  out << text;
  if (!out) throw std::ios_base::failure("write failed for " + path.string());
}

Rational parse_flag(const std::string& flag, const std::string& text) {
  try {
    return Rational::parse(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

std::string exact_and_decimal(const Rational& r) { return r.str() + " (" + r.decimal(6) + ")"; }

struct GenerateConfig {
  std::size_t n = 0;
  std::uint64_t seed = 1;
  std::string output;
  std::string proc_min = "1/8", proc_max = "8";
  std::string weight_min = "1/8", weight_max = "8";
  std::string release_min = "0", release_max = "10";
  std::int64_t max_den = 8;
};

struct RunConfig {
  std::string algo = "p";
  std::string mode = "exact";
  std::string delta;
  std::string input;
  std::string trace_out;
  std::string weight_out;
  bool decimal = false;
  std::size_t limit = OracleOptions{}.limit;
};

struct VerifyConfig {
  std::string suite = "all";
  std::string algo;
  std::string c;
  std::optional<std::size_t> instances;
  std::uint64_t trials = 10000;
  std::uint64_t seed = 1;
  std::optional<std::size_t> min_jobs;
  std::optional<std::size_t> max_jobs;
  std::optional<std::int64_t> max_den;
  std::string csv;
  int threads = 0;
  bool serial = false;
  std::size_t witnesses = 3;
};

int cmd_generate(const GenerateConfig& cfg) {
  if (cfg.n == 0) throw UsageError("--n must be at least 1");
  GeneratorParams g;
  g.proc = {parse_flag("--proc-min", cfg.proc_min), parse_flag("--proc-max", cfg.proc_max)};
  g.weight = {parse_flag("--weight-min", cfg.weight_min), parse_flag("--weight-max", cfg.weight_max)};
  g.release = {parse_flag("--release-min", cfg.release_min), parse_flag("--release-max", cfg.release_max)};
  g.max_den = cfg.max_den;
  try {
    validate(g);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const Instance inst = generate_instance(cfg.n, cfg.seed, g);
  const fs::path path = resolve_output(cfg.output, "instance_n" + std::to_string(cfg.n) + "_s" +
                                                       std::to_string(cfg.seed) + ".inst");
  write_file(path, "# seed=" + std::to_string(cfg.seed) + " n=" + std::to_string(cfg.n) + "\n" +
                       serialize_instance(inst));
  const InstanceStats s = instance_stats(inst);
  std::cout << "# seed=" << cfg.seed << " n=" << cfg.n << "\n"
            << "wrote " << path.string() << "\n"
            << "P = " << exact_and_decimal(s.p_ratio) << "\n"
            << "W = " << exact_and_decimal(s.w_ratio) << "\n"
            << "D = " << exact_and_decimal(s.d_ratio) << "\n";
  return kOk;
}

RunResult run_algorithm(const Instance& inst, const RunConfig& cfg, std::string& mode_label) {
  SimOptions sim;
  sim.record_snapshots = false;
  if (cfg.algo == "hdf") {
    mode_label = "exact";
    return hdf_baseline(inst);
  }
  SchedulerKind kind;
  try {
    kind = parse_scheduler_kind(cfg.algo);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (cfg.mode == "exact") {
    if (!cfg.delta.empty()) throw UsageError("--delta applies only to quantum mode");
    if (!supports_exact(kind)) {
      throw UsageError("exact mode is available for p and w only; use --mode quantum for " + cfg.algo);
    }
    mode_label = "exact";
    return simulate_exact(inst, kind, sim);
  }
  if (cfg.mode != "quantum") throw UsageError("--mode must be exact or quantum");
  const Rational delta = cfg.delta.empty() ? default_delta(inst) : parse_flag("--delta", cfg.delta);
  if (!delta.is_positive()) throw UsageError("--delta must be positive");
  mode_label = "quantum delta=" + delta.str();
  return simulate_quantum(inst, kind, delta, sim);
}

int cmd_run(const RunConfig& cfg) {
  const Instance inst = load_instance(cfg.input);
  if (inst.empty()) throw UsageError("instance has no jobs");
  std::string mode;
  const RunResult run = run_algorithm(inst, cfg, mode);
  const std::string stem = fs::path(cfg.input).stem().string() + "." + cfg.algo;
  const fs::path trace = resolve_output(cfg.trace_out, stem + ".trace.csv");
  const fs::path weights = resolve_output(cfg.weight_out, stem + ".weights.csv");
  write_file(trace, trace_csv(run.trace, cfg.decimal));
  write_file(weights, weight_csv(run.weight_fn, cfg.decimal));
  std::cout << "# input=" << cfg.input << " algo=" << cfg.algo << " mode=" << mode << "\n"
            << "cost = " << exact_and_decimal(run.cost) << "\n";
  if (cfg.algo != "hdf") std::cout << "opened bins = " << run.opened_bins << "\n";
  std::cout << "trace -> " << trace.string() << "\n"
            << "weights -> " << weights.string() << "\n";
  return kOk;
}

int cmd_compare(const RunConfig& cfg) {
  const Instance inst = load_instance(cfg.input);
  if (inst.empty()) throw UsageError("instance has no jobs");
  if (inst.size() > cfg.limit) {
    throw UsageError("instance has " + std::to_string(inst.size()) + " jobs, above the oracle limit of " +
                     std::to_string(cfg.limit) + " (raise --limit to force)");
  }
  if (cfg.algo == "hdf") throw UsageError("compare needs a bin scheduler (p, d, w or min)");
  std::string mode;
  const RunResult run = run_algorithm(inst, cfg, mode);
  const OracleOptions oo{cfg.limit, true};
  const OracleResult opt = brute_force_opt(inst, oo);
  const OracleResult opt_rounded = brute_force_opt(rounded_instance(run, inst), oo);

  const SchedulerKind kind = parse_scheduler_kind(cfg.algo);
  const InstanceStats s = instance_stats(inst);
  Rational R = s.min_ratio();
  Rational c(10);
  if (kind == SchedulerKind::ProcAlgo) {
    R = s.p_ratio;
    c = Rational(3);
  } else if (kind == SchedulerKind::DensAlgo) {
    R = s.d_ratio;
  } else if (kind == SchedulerKind::WeightAlgo) {
    R = s.w_ratio;
    c = Rational(1);
  }
  const Rational ratio = run.cost / opt.best.cost;
  const Rational bound = Rational(4) * c * Rational(ceil_log2(R) + 1);
  std::cout << "# input=" << cfg.input << " algo=" << cfg.algo << " mode=" << mode << "\n"
            << "ALG = " << exact_and_decimal(run.cost) << "\n"
            << "OPT (original) = " << exact_and_decimal(opt.best.cost) << "\n"
            << "OPT (rounded) = " << exact_and_decimal(opt_rounded.best.cost) << "\n"
            << "ratio = " << exact_and_decimal(ratio) << "\n"
            << "bound 2*2c*(ceil(log2 R)+1) = " << bound << " (c=" << c << ", R=" << R << ")\n"
            << "oracle schedules explored = " << opt.schedules_explored << "\n";
  return kOk;
}

int cmd_verify(const VerifyConfig& cfg) {
  std::vector<std::string> suites;
  if (cfg.suite == "all") {
    suites = suite_names();
  } else if (std::find(suite_names().begin(), suite_names().end(), cfg.suite) != suite_names().end()) {
    suites = {cfg.suite};
  } else {
    throw UsageError("unknown suite '" + cfg.suite + "'");
  }
  SuiteOptions base;
  if (!cfg.algo.empty()) {
    try {
      base.algo = parse_scheduler_kind(cfg.algo);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (!cfg.c.empty()) base.c = parse_flag("--c", cfg.c);
  base.trials = cfg.trials;
  base.exec = cfg.serial ? ExecPolicy::Serial : ExecPolicy::Parallel;
  set_thread_count(cfg.threads);

  std::vector<VerificationReport> all;
  for (const auto& name : suites) {
    SuiteOptions opts = base;
    opts.corpus = default_corpus(name);
    opts.corpus.seed = cfg.seed;
    if (cfg.instances) opts.corpus.instances = *cfg.instances;
    if (cfg.min_jobs) opts.corpus.min_jobs = *cfg.min_jobs;
    if (cfg.max_jobs) opts.corpus.max_jobs = *cfg.max_jobs;
    if (cfg.max_den) opts.corpus.max_den = *cfg.max_den;
    std::cout << "# suite=" << name << " seed=" << cfg.seed;
    if (name == "axioms") {
      std::cout << " trials=" << opts.trials;
    } else {
      std::cout << " instances=" << opts.corpus.instances << " jobs=" << opts.corpus.min_jobs << ".."
                << opts.corpus.max_jobs << " max_den=" << opts.corpus.max_den;
    }
    std::cout << "\n" << std::flush;
    std::vector<VerificationReport> reports;
    try {
      reports = run_suite(name, opts);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    std::cout << format_reports(reports, cfg.witnesses);
    all.insert(all.end(), reports.begin(), reports.end());
  }
  if (!cfg.csv.empty()) write_file(cfg.csv, reports_csv(all));
  const bool ok = std::all_of(all.begin(), all.end(), [](const VerificationReport& r) { return r.passed(); });
  std::cout << (ok ? "all checks passed" : "violations found") << "\n";
  return ok ? kOk : kViolation;
}

void add_run_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--algo", cfg.algo, "p, d, w, min (run also accepts hdf)")->capture_default_str();
  cmd->add_option("--mode", cfg.mode, "exact or quantum")->capture_default_str();
  cmd->add_option("--delta", cfg.delta, "quantum length (default: smallest processing time / 16)");
  cmd->add_option("--input,-i", cfg.input, "instance file")->required();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact simulator and verifier for online weighted flow time scheduling"};
  app.require_subcommand(1);

  GenerateConfig gen;
  auto* g = app.add_subcommand("generate", "write a seeded random instance");
  g->add_option("--n", gen.n, "number of jobs")->required();
  g->add_option("--seed", gen.seed)->capture_default_str();
  g->add_option("-o,--output", gen.output, "output file (default: $WFSCHED_OUT_DIR or .)");
  g->add_option("--proc-min", gen.proc_min)->capture_default_str();
  g->add_option("--proc-max", gen.proc_max)->capture_default_str();
  g->add_option("--weight-min", gen.weight_min)->capture_default_str();
  g->add_option("--weight-max", gen.weight_max)->capture_default_str();
  g->add_option("--release-min", gen.release_min)->capture_default_str();
  g->add_option("--release-max", gen.release_max)->capture_default_str();
  g->add_option("--max-den", gen.max_den, "largest denominator drawn")->capture_default_str();

  RunConfig run;
  auto* r = app.add_subcommand("run", "simulate one scheduler and write its traces");
  add_run_flags(r, run);
  r->add_option("--trace", run.trace_out, "segment CSV (default: output dir)");
  r->add_option("--weights", run.weight_out, "alive-weight CSV (default: output dir)");
  r->add_flag("--decimal", run.decimal, "add decimal columns to the CSVs");

  RunConfig cmp;
  auto* c = app.add_subcommand("compare", "compare a scheduler against the exact optimum");
  add_run_flags(c, cmp);
  c->add_option("--limit", cmp.limit, "largest instance the oracle accepts")->capture_default_str();

  VerifyConfig ver;
  auto* v = app.add_subcommand("verify", "run verification suites over seeded corpora");
  v->add_option("--suite", ver.suite, "axioms, goodness, structure, flow, competitive, convergence, bincount or all")
      ->capture_default_str();
  v->add_option("--algo", ver.algo, "restrict goodness/structure to one scheduler");
  v->add_option("--c", ver.c, "goodness or competitiveness constant override");
  v->add_option("--instances", ver.instances, "corpus size");
  v->add_option("--trials", ver.trials, "axiom fuzz cases per family")->capture_default_str();
  v->add_option("--seed", ver.seed)->capture_default_str();
  v->add_option("--min-jobs", ver.min_jobs);
  v->add_option("--max-jobs", ver.max_jobs);
  v->add_option("--max-den", ver.max_den);
  v->add_option("--csv", ver.csv, "write check,instances,violations,max_ratio");
  v->add_option("--threads", ver.threads, "OpenMP threads (default: runtime choice)");
  v->add_flag("--serial", ver.serial, "use the serial reference loop");
  v->add_option("--witnesses", ver.witnesses, "witnesses printed per failing check")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*g) return cmd_generate(gen);
    if (*r) return cmd_run(run);
    if (*c) return cmd_compare(cmp);
    if (*v) return cmd_verify(ver);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
