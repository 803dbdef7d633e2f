#include "latpois/io.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <mpfr.h>

#ifndef LATPOIS_VERSION
#define LATPOIS_VERSION "0.0.0"
#endif

namespace latpois {

namespace {

BigInt json_bigint(const json& j) {
  if (j.is_string()) return parse_bigint(j.get<std::string>());
  if (j.is_number_integer()) return BigInt(std::to_string(j.get<long long>()));
  throw std::invalid_argument("expected an integer string");
}

}  // namespace

json basis_to_json(const LatticeBasis& b) {
  json rows = json::array();
  for (const auto& row : b.rows()) {
    json r = json::array();
    for (const auto& v : row) r.push_back(v.get_str());
    rows.push_back(std::move(r));
  }
  return json{{"dim", b.dim()}, {"rows", std::move(rows)}, {"rawDet", b.raw_det().get_str()}};
}

LatticeBasis basis_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("rows")) {
    throw std::invalid_argument("basis JSON needs \"dim\" and \"rows\"");
  }
  const int dim = j.at("dim").get<int>();
  IntMatrix rows;
  for (const auto& r : j.at("rows")) {
    std::vector<BigInt> row;
    for (const auto& v : r) row.push_back(json_bigint(v));
    rows.push_back(std::move(row));
  }
  if (static_cast<int>(rows.size()) != dim) throw std::invalid_argument("basis JSON: dim does not match rows");
  if (j.contains("rawDet")) return LatticeBasis::from_rows(std::move(rows), json_bigint(j.at("rawDet")));
  return LatticeBasis::from_rows(std::move(rows));
}

LatticeBasis read_basis_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open basis file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("basis file " + path.string() + ": " + e.what());
  }
  return basis_from_json(j);
}

json volume_sequence_to_json(const VolumeSequence& seq) {
  json vols = json::array();
  json norms = json::array();
  json mults = json::array();
  for (const auto& e : seq.entries) {
    vols.push_back(e.volume);
    norms.push_back(e.raw_norm_sq.get_str());
    mults.push_back(e.multiplicity);
  }
  return json{{"volumes", std::move(vols)}, {"rawNormSq", std::move(norms)}, {"multiplicities", std::move(mults)}};
}

json poisson_sample_to_json(const PoissonSample& s, std::uint64_t trial) {
  return json{{"trial", trial}, {"horizon", s.horizon}, {"intensity", s.intensity}, {"points", s.points}};
}

std::string rational_to_string(const Rational& r) {
  Rational c = r;
  c.canonicalize();
  return c.get_str();
}

std::string rational_to_decimal(const Rational& r, int digits) {
  mpfr_t x;
  mpfr_init2(x, 256);
  mpfr_set_q(x, r.get_mpq_t(), MPFR_RNDN);
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Rg", digits, x);
  std::string out(buf);
  mpfr_free_str(buf);
  mpfr_clear(x);
  return out;
}

json run_metadata(std::uint64_t seed, const BigInt* prime, bool deterministic) {
  json m{{"version", LATPOIS_VERSION}, {"rng", std::string(kRngAlgorithm)}, {"seed", seed}};
  if (prime != nullptr) m["prime"] = prime->get_str();
  if (!deterministic) {
    const auto now = std::chrono::system_clock::now();
    m["timestamp"] = std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
  }
  return m;
}

json simulation_to_json(const SimulationRun& run, bool deterministic) {
  const auto& cfg = run.config;
  const bool lattice = cfg.kind == SimulationKind::Lattice;
  json config{{"kind", to_string(cfg.kind)},
              {"trials", cfg.trials},
              {"thresholds", cfg.thresholds},
              {"seed", cfg.seed}};
  if (lattice) {
    config["dim"] = cfg.dim;
    config["prime"] = cfg.prime.get_str();
    config["nodeBudget"] = cfg.enumeration.node_budget;
    config["delta"] = cfg.enumeration.delta;
  }
  json out;
  out["metadata"] = run_metadata(cfg.seed, lattice ? &cfg.prime : nullptr, deterministic);
  out["metadata"]["config"] = config;
  out["nTrials"] = cfg.trials - run.failed;
  out["failed"] = run.failed;
  out["thresholds"] = cfg.thresholds;

  const CountRun counts = run.count_run();
  json means = json::array();
  for (std::size_t j = 0; j < cfg.thresholds.size(); ++j) {
    std::vector<double> v;
    for (const auto& c : counts.samples) v.push_back(static_cast<double>(c[j]));
    json row{{"threshold", cfg.thresholds[j]}};
    if (v.size() >= 2) {
      const MomentEstimate e = estimate_mean(v);
      row["mean"] = e.value;
      row["stderr"] = e.std_error;
    }
    row["limitMean"] = cfg.thresholds[j] / 2.0;
    means.push_back(std::move(row));
  }
  out["means"] = std::move(means);
  if (cfg.record_first_volume) out["firstVolumes"] = run.first_volumes();
  json per_trial = json::array();
  for (const auto& t : run.trials) per_trial.push_back(t.ok ? json(t.counts) : json(nullptr));
  out["counts"] = std::move(per_trial);
  return out;
}

CountRun count_run_from_json(const json& j) {
  CountRun run;
  run.label = j.at("metadata").at("config").at("kind").get<std::string>();
  run.thresholds = j.at("thresholds").get<std::vector<double>>();
  for (const auto& c : j.at("counts")) {
    if (c.is_null()) continue;
    run.samples.push_back(c.get<CountVector>());
    if (run.samples.back().size() != run.thresholds.size()) {
      throw std::invalid_argument("simulation report: count vector length differs from thresholds");
    }
  }
  return run;
}

std::string simulation_to_csv(const SimulationRun& run) {
  std::ostringstream os;
  os.precision(17);
  os << "trial,ok";
  for (double t : run.config.thresholds) os << ",N(" << t << ")";
  os << '\n';
  for (const auto& t : run.trials) {
    os << t.trial << ',' << (t.ok ? 1 : 0);
    for (auto c : t.counts) os << ',' << c;
    os << '\n';
  }
  return os.str();
}

json comparison_to_json(const ComparisonReport& report, std::uint64_t lattice_trials, std::uint64_t poisson_trials,
                        int dim) {
  json spec = json::array();
  for (const auto& v : report.spec.volumes) spec.push_back(rational_to_string(v));
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back(json{{"name", r.name},
                        {"indices", r.indices},
                        {"exact", rational_to_string(r.exact)},
                        {"exactDecimal", r.exact.get_d()},
                        {"empiricalLattice", r.lattice.value},
                        {"empiricalPoisson", r.poisson.value},
                        {"stderr", {{"lattice", r.lattice.std_error}, {"poisson", r.poisson.std_error}}},
                        {"zScores", {{"lattice", r.z_lattice}, {"poisson", r.z_poisson}, {"pairwise", r.z_pairwise}}}});
  }
  return json{{"spec", std::move(spec)},
              {"nTrials", {{"lattice", lattice_trials}, {"poisson", poisson_trials}}},
              {"dims", dim},
              {"rows", std::move(rows)}};
}

void write_file_atomically(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << contents;
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace latpois
