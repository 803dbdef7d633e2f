#include "latpois/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <new>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>

#include "latpois/io.hpp"
#include "latpois/verify.hpp"

namespace latpois {

namespace {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw UsageError("not a finite number: '" + s + "'");
  }
  return v;
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& p : split(s, ',')) out.push_back(parse_double(p));
  if (out.empty()) throw UsageError("empty number list");
  return out;
}

// Exact rational for a decimal literal such as "0.25" or "3".
Rational decimal_to_rational(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed);
  std::string s(buf, res.ptr);
  const auto dot = s.find('.');
  if (dot == std::string::npos) return Rational(parse_bigint(s));
  const std::string digits = s.substr(0, dot) + s.substr(dot + 1);
  BigInt den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, s.size() - dot - 1);
  Rational r(parse_bigint(digits), den);
  r.canonicalize();
  return r;
}

std::vector<Interval> parse_intervals(const std::string& s) {
  std::vector<Interval> out;
  for (const auto& p : split(s, ',')) {
    const auto colon = p.find(':', p.empty() || p[0] != '-' ? 0 : 1);
    if (colon == std::string::npos) throw UsageError("interval must be a:b, got '" + p + "'");
    out.push_back(Interval{parse_double(p.substr(0, colon)), parse_double(p.substr(colon + 1))});
  }
  return out;
}

std::uint64_t seed_from_env() {
  const char* env = std::getenv(kSeedEnvVar);
  if (env == nullptr || *env == '\0') return 0;
  std::uint64_t v = 0;
  const std::string s(env);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw UsageError(std::string(kSeedEnvVar) + " is not an unsigned 64-bit integer: '" + s + "'");
  }
  return v;
}

struct Common {
  std::uint64_t seed = 0;
  bool deterministic = false;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, std::string("Base seed (default: $") + kSeedEnvVar + " or 0)");
  sub->add_flag("--deterministic", c.deterministic, "Omit the timestamp from output metadata");
}

void check_writable(const std::string& path) {
  if (path.empty()) return;
  const auto parent = std::filesystem::absolute(path).parent_path();
  if (!std::filesystem::is_directory(parent)) throw UsageError("output directory does not exist: " + parent.string());
}

void emit(std::ostream& out, const json& j) { out << j.dump() << '\n'; }

json exact_json(const Rational& r) {
  return json{{"exact", rational_to_string(r)}, {"decimal", rational_to_decimal(r)}};
}

// --- sample ---

struct SampleArgs {
  Common common;
  std::string kind = "lattice";
  int dim = 0;
  std::string prime;
  std::uint64_t trials = 1;
  double horizon = 4.0;
  bool emit_raw = false;
};

int cmd_sample(const SampleArgs& a, std::ostream& out) {
  const SimulationKind kind = parse_simulation_kind(a.kind);
  if (a.trials == 0) throw UsageError("--trials must be positive");
  if (kind == SimulationKind::Lattice) {
    const BigInt prime = a.prime.empty() ? default_prime(a.common.seed) : parse_bigint(a.prime);
    const GMConfig cfg = GMConfig::make(a.dim, prime, a.common.seed);
    json meta = run_metadata(a.common.seed, &cfg.prime, a.common.deterministic);
    meta["config"] = json{{"kind", "lattice"}, {"dim", a.dim}, {"trials", a.trials}, {"emitRaw", a.emit_raw}};
    BigInt raw_det;
    mpz_pow_ui(raw_det.get_mpz_t(), prime.get_mpz_t(), static_cast<unsigned long>(a.dim - 1));
    emit(out, json{{"metadata", meta}, {"rawDet", raw_det.get_str()}});
    if (a.emit_raw) {
      for (std::uint64_t t = 0; t < a.trials; ++t) {
        json line = basis_to_json(sample_gm_lattice(cfg, t));
        line["trial"] = t;
        emit(out, line);
      }
    }
    return kExitOk;
  }
  if (!(a.horizon > 0.0)) throw UsageError("--horizon must be positive");
  json meta = run_metadata(a.common.seed, nullptr, a.common.deterministic);
  meta["config"] = json{{"kind", "poisson"}, {"horizon", a.horizon}, {"trials", a.trials}, {"emitRaw", a.emit_raw}};
  std::vector<double> sizes;
  std::vector<json> lines;
  for (std::uint64_t t = 0; t < a.trials; ++t) {
    const PoissonSample s = sample_poisson(a.horizon, a.common.seed, t);
    sizes.push_back(static_cast<double>(s.points.size()));
    if (a.emit_raw) lines.push_back(poisson_sample_to_json(s, t));
  }
  json head{{"metadata", meta}, {"meanPoints", std::accumulate(sizes.begin(), sizes.end(), 0.0) / sizes.size()}};
  emit(out, head);
  for (const auto& l : lines) emit(out, l);
  return kExitOk;
}

// --- shortvec ---

struct ShortvecArgs {
  Common common;
  std::string basis;
  double volume_max = 0.0;
  std::size_t first = 0;
  std::uint64_t node_budget = EnumerationOptions{}.node_budget;
  double delta = 0.99;
  bool dual = false;
};

int cmd_shortvec(const ShortvecArgs& a, bool have_volume, bool have_first, std::ostream& out) {
  if (have_volume == have_first) throw UsageError("give exactly one of --volume-max and --first");
  if (have_volume && !(a.volume_max > 0.0)) throw UsageError("--volume-max must be positive");
  if (have_first && a.first == 0) throw UsageError("--first must be positive");
  if (!(a.delta > 0.25 && a.delta < 1.0)) throw UsageError("--delta must lie in (1/4, 1)");
  LatticeBasis b = read_basis_file(a.basis);
  if (a.dual) b = dual_basis(b);
  const EnumerationOptions opts{EnumerationOptions{}.guard, a.node_budget, a.delta};
  const Enumerator e(b, opts);
  const VolumeSequence seq = have_volume ? e.up_to_volume(a.volume_max) : e.first(a.first);
  json meta = run_metadata(a.common.seed, nullptr, a.common.deterministic);
  meta["config"] = json{{"basis", a.basis}, {"dual", a.dual}, {"nodeBudget", a.node_budget}, {"delta", a.delta}};
  if (have_volume) meta["config"]["volumeMax"] = a.volume_max;
  else meta["config"]["first"] = a.first;
  json j = volume_sequence_to_json(seq);
  j["metadata"] = meta;
  j["dim"] = seq.dim;
  j["rawDet"] = seq.raw_det.get_str();
  j["completeUpTo"] = seq.complete_up_to();
  j["nodes"] = e.last_node_count();
  emit(out, j);
  return kExitOk;
}

// --- exact-moments ---

struct ExactArgs {
  Common common;
  std::string volumes;
  std::string form = "both";
  int k_max = kDefaultKMax;
};

int cmd_exact_moments(const ExactArgs& a, std::ostream& out, std::ostream& err) {
  if (a.k_max < 1 || a.k_max > kDefaultKMax) {
    throw UsageError("--k-max must lie in [1, " + std::to_string(kDefaultKMax) + "]");
  }
  if (a.form != "matrix" && a.form != "partition" && a.form != "both" && a.form != "pair") {
    throw UsageError("--form must be matrix, partition, both or pair");
  }
  std::vector<Rational> vols;
  for (const auto& p : split(a.volumes, ',')) vols.push_back(parse_rational(p));
  const MomentSpec spec = MomentSpec::make(vols);
  if (spec.k() > a.k_max) throw UsageError("more volumes than --k-max");

  json j;
  j["metadata"] = run_metadata(a.common.seed, nullptr, a.common.deterministic);
  j["metadata"]["config"] = json{{"form", a.form}, {"kMax", a.k_max}};
  json v = json::array();
  for (const auto& r : spec.volumes) v.push_back(rational_to_string(r));
  j["volumes"] = v;
  j["k"] = spec.k();
  int code = kExitOk;
  if (a.form == "matrix" || a.form == "both") j["matrixForm"] = exact_json(limit_moment_matrix_form(spec, a.k_max));
  if (a.form == "partition" || a.form == "both") {
    j["partitionForm"] = exact_json(limit_moment_partition_form(spec, a.k_max));
  }
  if (a.form == "pair" || a.form == "both") j["pairMoment"] = exact_json(pair_moment(spec, a.k_max));
  if (a.form == "both") {
    const bool holds = pair_moment(spec, a.k_max) == limit_moment_partition_form(spec, a.k_max);
    j["identityHolds"] = holds;
    if (!holds) {
      err << "error: 2^-k * matrix form differs from partition form\n";
      code = kExitVerifyFailed;
    }
  }
  emit(out, j);
  return code;
}

// --- verify ---

struct VerifyArgs {
  Common common;
  int k_max = 7;
  int samples = 100;
  int samples_large = 3;
  bool corrupt = false;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  if (a.k_max < 1 || a.k_max > kDefaultKMax) {
    throw UsageError("--k-max must lie in [1, " + std::to_string(kDefaultKMax) + "]");
  }
  if (a.samples < 1 || a.samples_large < 1) throw UsageError("sample counts must be positive");
  VerifyOptions opts{a.samples, a.samples_large, a.common.seed, a.corrupt};
  const VerifyReport r = verify_identities(a.k_max, opts);
  for (const auto& s : r.per_k) {
    emit(out, json{{"k", s.k},
                   {"divisions", s.divisions},
                   {"matrices", s.matrices},
                   {"nonnegativeClass", s.nonnegative_class},
                   {"bell", s.bell}});
  }
  json summary{{"ok", r.ok()}, {"checks", r.checks.size()}, {"kMax", a.k_max}};
  if (const IdentityCheck* f = r.first_failure()) {
    summary["failure"] = json{{"check", f->name}, {"k", f->k}, {"counterexample", f->counterexample}};
    err << "verification failed (" << f->name << ", k=" << f->k << "): " << f->counterexample << '\n';
  }
  emit(out, summary);
  return r.ok() ? kExitOk : kExitVerifyFailed;
}

// --- simulate ---

struct SimulateArgs {
  Common common;
  std::string kind = "poisson";
  int dim = 0;
  std::string prime;
  std::uint64_t trials = 0;
  std::string thresholds = "1,2";
  std::string output;
  std::string format = "json";
  unsigned workers = 0;
  std::uint64_t node_budget = EnumerationOptions{}.node_budget;
  bool first_volume = false;
  bool progress = false;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  if (a.format != "json" && a.format != "csv") throw UsageError("--format must be json or csv");
  SimulationConfig cfg;
  cfg.kind = parse_simulation_kind(a.kind);
  cfg.dim = a.dim;
  cfg.seed = a.common.seed;
  cfg.trials = a.trials;
  cfg.thresholds = parse_double_list(a.thresholds);
  cfg.record_first_volume = a.first_volume;
  cfg.enumeration.node_budget = a.node_budget;
  cfg.workers = a.workers;
  if (cfg.kind == SimulationKind::Lattice) {
    cfg.prime = a.prime.empty() ? default_prime(cfg.seed) : parse_bigint(a.prime);
  }
  cfg.validate();
  check_writable(a.output);

  std::function<void(std::uint64_t)> progress;
  if (a.progress) {
    const std::uint64_t step = std::max<std::uint64_t>(1, cfg.trials / 20);
    progress = [&err, step, total = cfg.trials](std::uint64_t done) {
      if (done % step == 0 || done == total) err << "simulate: " << done << "/" << total << " trials\n";
    };
  }
  const SimulationRun run = run_simulation(cfg, progress);
  std::string text;
  if (a.format == "csv") {
    text = simulation_to_csv(run);
  } else {
    json j = simulation_to_json(run, a.common.deterministic);
    if (cfg.record_first_volume) {
      const auto v = run.first_volumes();
      const double d = ks_statistic_exp2(v);
      j["ks"] = json{{"statistic", d}, {"pValue", kolmogorov_pvalue(std::sqrt(static_cast<double>(v.size())) * d)}};
    }
    text = j.dump() + '\n';
  }
  if (a.output.empty()) {
    out << text;
  } else {
    write_file_atomically(a.output, text);
  }
  return kExitOk;
}

// --- correlations ---

struct CorrelationArgs {
  Common common;
  std::string basis;
  bool poisson = false;
  int m = 2;
  std::string intervals = "-1:1";
  double cutoff = 0.0;
  std::uint64_t node_budget = EnumerationOptions{}.node_budget;
};

int cmd_correlations(const CorrelationArgs& a, std::ostream& out) {
  if (a.basis.empty() == !a.poisson) throw UsageError("give exactly one of --basis and --poisson");
  CorrelationQuery q{a.m, parse_intervals(a.intervals), a.cutoff};
  q.validate();
  const double census = q.required_census();
  double estimate = 0.0;
  json config{{"m", q.m}, {"N", q.cutoff}, {"intervals", a.intervals}};
  if (a.poisson) {
    const PoissonSample s = sample_poisson(census, a.common.seed, 0);
    estimate = level_correlation(s.points, census, q);
    config["source"] = "poisson";
  } else {
    const LatticeBasis b = read_basis_file(a.basis);
    const Enumerator e(b, EnumerationOptions{EnumerationOptions{}.guard, a.node_budget, 0.99});
    estimate = level_correlation(e.up_to_volume(census), q);
    config["source"] = a.basis;
  }
  json meta = run_metadata(a.common.seed, nullptr, a.common.deterministic);
  meta["config"] = config;
  emit(out, json{{"metadata", meta},
                 {"estimate", estimate},
                 {"poissonian", poissonian_correlation(q)},
                 {"census", census}});
  return kExitOk;
}

// --- compare ---

struct CompareArgs {
  Common common;
  std::string lattice;
  std::string poisson;
  std::string volumes;
};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

int cmd_compare(const CompareArgs& a, std::ostream& out) {
  const json lj = read_json_file(a.lattice);
  const json pj = read_json_file(a.poisson);
  CountRun lattice;
  CountRun poisson;
  try {
    lattice = count_run_from_json(lj);
    poisson = count_run_from_json(pj);
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed simulation report: ") + e.what());
  }
  std::vector<Rational> vols;
  if (a.volumes.empty()) {
    for (double t : lattice.thresholds) vols.push_back(decimal_to_rational(t));
  } else {
    for (const auto& p : split(a.volumes, ',')) vols.push_back(parse_rational(p));
  }
  const MomentSpec spec = MomentSpec::make(vols);
  if (lattice.samples.size() < 2 || poisson.samples.size() < 2) {
    throw UsageError("each run needs at least two successful trials");
  }
  const ComparisonReport report = compare_report(lattice, poisson, spec);
  int dim = 0;
  if (lj.at("metadata").at("config").contains("dim")) dim = lj["metadata"]["config"]["dim"].get<int>();
  json j = comparison_to_json(report, lattice.samples.size(), poisson.samples.size(), dim);
  j["metadata"] = run_metadata(a.common.seed, nullptr, a.common.deterministic);
  j["metadata"]["config"] = json{{"lattice", a.lattice}, {"poisson", a.poisson}};
  emit(out, j);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::uint64_t env_seed = 0;
  try {
    env_seed = seed_from_env();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  CLI::App app{"Short-vector volumes of random lattices versus a Poisson process", "latpois"};
  app.require_subcommand(1);
  app.set_version_flag("--version", LATPOIS_VERSION);

  SampleArgs sample;
  ShortvecArgs shortvec;
  ExactArgs exact;
  VerifyArgs verify;
  SimulateArgs simulate;
  CorrelationArgs corr;
  CompareArgs compare;
  for (Common* c : {&sample.common, &shortvec.common, &exact.common, &verify.common, &simulate.common,
                    &corr.common, &compare.common}) {
    c->seed = env_seed;
  }

  auto* s = app.add_subcommand("sample", "Draw random lattices or Poisson samples");
  add_common(s, sample.common);
  s->add_option("--kind", sample.kind, "lattice or poisson")->capture_default_str();
  s->add_option("--dim", sample.dim, "Lattice dimension");
  s->add_option("--prime", sample.prime, "Prime p (default: seed-dependent prime near 10^9)");
  s->add_option("--trials", sample.trials)->capture_default_str();
  s->add_option("--horizon", sample.horizon, "Poisson horizon")->capture_default_str();
  s->add_flag("--emit-raw", sample.emit_raw, "One JSON line per trial");

  auto* sv = app.add_subcommand("shortvec", "Enumerate short vectors of a basis");
  add_common(sv, shortvec.common);
  sv->add_option("--basis", shortvec.basis, "Basis JSON file")->required()->check(CLI::ExistingFile);
  auto* vm = sv->add_option("--volume-max", shortvec.volume_max, "All pairs with volume <= t");
  auto* fn = sv->add_option("--first", shortvec.first, "The N smallest pairs");
  sv->add_option("--node-budget", shortvec.node_budget)->capture_default_str();
  sv->add_option("--delta", shortvec.delta, "LLL parameter")->capture_default_str();
  sv->add_flag("--dual", shortvec.dual, "Enumerate the dual lattice");

  auto* em = app.add_subcommand("exact-moments", "Exact limiting joint moments");
  add_common(em, exact.common);
  em->add_option("--volumes", exact.volumes, "Sorted positive rationals r1,r2,...")->required();
  em->add_option("--form", exact.form, "matrix, partition, both or pair")->capture_default_str();
  em->add_option("--k-max", exact.k_max)->capture_default_str();

  auto* vf = app.add_subcommand("verify", "Run the exact identity suite");
  add_common(vf, verify.common);
  vf->add_option("--k-max", verify.k_max)->capture_default_str();
  vf->add_option("--samples", verify.samples, "Random volume vectors per k for k <= 7")->capture_default_str();
  vf->add_option("--samples-large", verify.samples_large, "Random volume vectors per k for k > 7")
      ->capture_default_str();
  vf->add_flag("--corrupt-closed-form", verify.corrupt)->group("");

  auto* sm = app.add_subcommand("simulate", "Monte Carlo counting experiment");
  add_common(sm, simulate.common);
  sm->add_option("--kind", simulate.kind, "lattice or poisson")->capture_default_str();
  sm->add_option("--dim", simulate.dim);
  sm->add_option("--prime", simulate.prime);
  sm->add_option("--trials", simulate.trials)->required();
  sm->add_option("--thresholds", simulate.thresholds, "Increasing volumes t1,t2,...")->capture_default_str();
  sm->add_option("--output", simulate.output, "Report file (default: stdout)");
  sm->add_option("--format", simulate.format, "json or csv")->capture_default_str();
  sm->add_option("--workers", simulate.workers, "Worker threads (0: all cores)")->capture_default_str();
  sm->add_option("--node-budget", simulate.node_budget)->capture_default_str();
  sm->add_flag("--first-volume", simulate.first_volume, "Record the first volume of each trial");
  sm->add_flag("--progress", simulate.progress, "Progress on stderr");

  auto* co = app.add_subcommand("correlations", "m-level correlation of a volume sequence");
  add_common(co, corr.common);
  co->add_option("--basis", corr.basis, "Basis JSON file")->check(CLI::ExistingFile);
  co->add_flag("--poisson", corr.poisson, "Use a Poisson sample drawn from --seed");
  co->add_option("--m", corr.m)->capture_default_str();
  co->add_option("--intervals", corr.intervals, "m-1 intervals a:b,c:d,...")->capture_default_str();
  co->add_option("--N", corr.cutoff, "Cutoff N")->required();
  co->add_option("--node-budget", corr.node_budget)->capture_default_str();

  auto* cp = app.add_subcommand("compare", "Compare lattice and Poisson runs with exact moments");
  add_common(cp, compare.common);
  cp->add_option("--lattice", compare.lattice, "Lattice simulation report")->required()->check(CLI::ExistingFile);
  cp->add_option("--poisson", compare.poisson, "Poisson simulation report")->required()->check(CLI::ExistingFile);
  cp->add_option("--volumes", compare.volumes, "Exact thresholds as rationals (default: from the reports)");

  std::vector<std::string> argv_storage{"latpois"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*s) return cmd_sample(sample, out);
    if (*sv) return cmd_shortvec(shortvec, vm->count() > 0, fn->count() > 0, out);
    if (*em) return cmd_exact_moments(exact, out, err);
    if (*vf) return cmd_verify(verify, out, err);
    if (*sm) return cmd_simulate(simulate, out, err);
    if (*co) return cmd_correlations(corr, out);
    if (*cp) return cmd_compare(compare, out);
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kExitBudget;
  } catch (const SimulationAborted& e) {
    err << "error: " << e.what() << '\n';
    return kExitBudget;
  } catch (const std::bad_alloc&) {
    err << "error: out of memory\n";
    return kExitBudget;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace latpois
