#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "latpois/cli.hpp"
#include "latpois/io.hpp"
#include "latpois/sampler.hpp"
#include "latpois/shortvec.hpp"
#include "latpois/simulation.hpp"
#include "latpois/stats.hpp"
#include "latpois/verify.hpp"

namespace py = pybind11;
using namespace latpois;

// Big integers and rationals cross the boundary as decimal strings; the
// Python wrapper turns them into int and Fraction.

namespace {

LatticeBasis basis_from(const std::vector<std::vector<std::string>>& rows) {
  IntMatrix m;
  for (const auto& r : rows) {
    std::vector<BigInt> row;
    for (const auto& v : r) row.push_back(parse_bigint(v));
    m.push_back(std::move(row));
  }
  return LatticeBasis::from_rows(std::move(m));
}

std::vector<std::vector<std::string>> rows_to_strings(const IntMatrix& m) {
  std::vector<std::vector<std::string>> out;
  for (const auto& r : m) {
    std::vector<std::string> row;
    for (const auto& v : r) row.push_back(v.get_str());
    out.push_back(std::move(row));
  }
  return out;
}

MomentSpec spec_from(const std::vector<std::string>& volumes) {
  std::vector<Rational> v;
  for (const auto& s : volumes) v.push_back(parse_rational(s));
  return MomentSpec::make(std::move(v));
}

py::dict sequence_dict(const VolumeSequence& seq) {
  py::list vols;
  py::list norms;
  py::list reps;
  py::list mult;
  for (const auto& e : seq.entries) {
    vols.append(e.volume);
    norms.append(e.raw_norm_sq.get_str());
    mult.append(e.multiplicity);
    std::vector<std::string> rep;
    for (const auto& x : e.representative) rep.push_back(x.get_str());
    reps.append(rep);
  }
  py::dict d;
  d["volumes"] = vols;
  d["raw_norm_sq"] = norms;
  d["multiplicities"] = mult;
  d["representatives"] = reps;
  d["complete_up_to"] = seq.complete_up_to();
  return d;
}

}  // namespace

PYBIND11_MODULE(_latpois, m) {
  m.attr("__version__") = LATPOIS_VERSION;
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);

  m.def("ball_volume_coeff", &ball_volume_coeff);
  m.def("length_to_volume", [](int n, const std::string& raw_norm_sq, const std::string& raw_det) {
    return length_to_volume(n, parse_bigint(raw_norm_sq), parse_bigint(raw_det));
  });
  m.def("derive_seed", &derive_seed);
  m.def("default_prime", [](std::uint64_t seed) { return default_prime(seed).get_str(); });

  m.def("sample_gm_lattice", [](int dim, const std::string& prime, std::uint64_t seed, std::uint64_t trial) {
    const GMConfig cfg = GMConfig::make(dim, prime.empty() ? default_prime(seed) : parse_bigint(prime), seed);
    return rows_to_strings(sample_gm_lattice(cfg, trial).rows());
  });
  m.def("sample_poisson",
        [](double horizon, std::uint64_t seed, std::uint64_t trial) { return sample_poisson(horizon, seed, trial).points; });

  m.def("lll_reduce", [](const std::vector<std::vector<std::string>>& rows, double delta) {
    return rows_to_strings(lll_reduce(basis_from(rows), LllOptions{delta, true}).rows);
  });
  m.def("dual_basis",
        [](const std::vector<std::vector<std::string>>& rows) { return rows_to_strings(dual_basis(basis_from(rows)).rows()); });
  m.def("enumerate_up_to_volume", [](const std::vector<std::vector<std::string>>& rows, double t, std::uint64_t budget) {
    EnumerationOptions o;
    o.node_budget = budget;
    return sequence_dict(enumerate_up_to_volume(basis_from(rows), t, o));
  });
  m.def("first_volumes", [](const std::vector<std::vector<std::string>>& rows, std::size_t count, std::uint64_t budget) {
    EnumerationOptions o;
    o.node_budget = budget;
    return sequence_dict(first_volumes(basis_from(rows), count, o));
  });

  m.def("matrix_form", [](const std::vector<std::string>& v) { return rational_to_string(limit_moment_matrix_form(spec_from(v))); });
  m.def("partition_form",
        [](const std::vector<std::string>& v) { return rational_to_string(limit_moment_partition_form(spec_from(v))); });
  m.def("pair_moment", [](const std::vector<std::string>& v) { return rational_to_string(pair_moment(spec_from(v))); });
  m.def("touchard_poisson_moment", [](int k, const std::string& lambda) {
    return rational_to_string(touchard_poisson_moment(k, parse_rational(lambda)));
  });
  m.def("count_admissible", [](int k, std::vector<int> nu, std::vector<int> mu) {
    Division d{k, std::move(nu), std::move(mu)};
    d.validate();
    return count_admissible(d).get_str();
  });
  m.def("bell_number", [](int k) { return bell_number(k).get_str(); });
  m.def("verify", [](int k_max, std::uint64_t seed) {
    const VerifyReport r = verify_identities(k_max, VerifyOptions{20, 1, seed, false});
    py::list per_k;
    for (const auto& s : r.per_k) {
      py::dict d;
      d["k"] = s.k;
      d["divisions"] = s.divisions;
      d["matrices"] = s.matrices;
      d["bell"] = s.bell;
      per_k.append(d);
    }
    py::dict out;
    out["ok"] = r.ok();
    out["per_k"] = per_k;
    return out;
  });

  m.def("ks_statistic_exp2", [](const std::vector<double>& s) { return ks_statistic_exp2(s); });
  m.def("level_correlation", [](const std::vector<double>& values, double complete_up_to, int order,
                                const std::vector<std::pair<double, double>>& intervals, double cutoff) {
    CorrelationQuery q{order, {}, cutoff};
    for (const auto& [lo, hi] : intervals) q.intervals.push_back({lo, hi});
    return level_correlation(values, complete_up_to, q);
  });

  m.def(
      "simulate",
      [](const std::string& kind, int dim, std::uint64_t trials, const std::vector<double>& thresholds,
         std::uint64_t seed, const std::string& prime, bool first_volume, unsigned workers) {
        SimulationConfig c;
        c.kind = parse_simulation_kind(kind);
        c.dim = dim;
        c.trials = trials;
        c.thresholds = thresholds;
        c.seed = seed;
        c.record_first_volume = first_volume;
        c.workers = workers;
        if (c.kind == SimulationKind::Lattice) c.prime = prime.empty() ? default_prime(seed) : parse_bigint(prime);
        c.validate();
        SimulationRun run;
        {
          py::gil_scoped_release release;
          run = run_simulation(c);
        }
        return simulation_to_json(run, true).dump();
      });

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  });
}
