"""Short vectors of random unimodular lattices and their Poisson limit."""

import json
from fractions import Fraction

from . import _latpois
from ._latpois import (
    BudgetExceeded,
    ball_volume_coeff,
    derive_seed,
    ks_statistic_exp2,
    sample_poisson,
)

__version__ = _latpois.__version__

DEFAULT_NODE_BUDGET = 1_000_000_000


def _rows_in(rows):
    return [[str(int(v)) for v in row] for row in rows]


def _rows_out(rows):
    return [[int(v) for v in row] for row in rows]


def _volumes_in(volumes):
    out = []
    for v in volumes:
        f = Fraction(v)
        out.append(f"{f.numerator}/{f.denominator}")
    return out


def _census(d):
    return {
        "volumes": d["volumes"],
        "raw_norm_sq": [int(x) for x in d["raw_norm_sq"]],
        "multiplicities": d["multiplicities"],
        "representatives": _rows_out(d["representatives"]),
        "complete_up_to": d["complete_up_to"],
    }


def length_to_volume(n, raw_norm_sq, raw_det):
    return _latpois.length_to_volume(n, str(int(raw_norm_sq)), str(int(raw_det)))


def default_prime(seed):
    return int(_latpois.default_prime(seed))


def sample_gm_lattice(dim, seed, trial=0, prime=None):
    return _rows_out(_latpois.sample_gm_lattice(dim, "" if prime is None else str(int(prime)), seed, trial))


def lll_reduce(rows, delta=0.99):
    return _rows_out(_latpois.lll_reduce(_rows_in(rows), delta))


def dual_basis(rows):
    return _rows_out(_latpois.dual_basis(_rows_in(rows)))


def enumerate_up_to_volume(rows, t, node_budget=DEFAULT_NODE_BUDGET):
    return _census(_latpois.enumerate_up_to_volume(_rows_in(rows), t, node_budget))


def first_volumes(rows, count, node_budget=DEFAULT_NODE_BUDGET):
    return _census(_latpois.first_volumes(_rows_in(rows), count, node_budget))


def matrix_form(volumes):
    return Fraction(_latpois.matrix_form(_volumes_in(volumes)))


def partition_form(volumes):
    return Fraction(_latpois.partition_form(_volumes_in(volumes)))


def pair_moment(volumes):
    return Fraction(_latpois.pair_moment(_volumes_in(volumes)))


def touchard_poisson_moment(k, lam):
    return Fraction(_latpois.touchard_poisson_moment(k, _volumes_in([lam])[0]))


def count_admissible(k, nu, mu):
    return int(_latpois.count_admissible(k, list(nu), list(mu)))


def bell_number(k):
    return int(_latpois.bell_number(k))


def verify(k_max=7, seed=0):
    return _latpois.verify(k_max, seed)


def level_correlation(values, complete_up_to, m, intervals, cutoff):
    return _latpois.level_correlation(sorted(values), complete_up_to, m, list(intervals), cutoff)


def simulate(kind, trials, thresholds, seed=0, dim=0, prime=None, first_volume=False, workers=0):
    text = _latpois.simulate(
        kind, dim, trials, list(thresholds), seed, "" if prime is None else str(int(prime)), first_volume, workers
    )
    return json.loads(text)


def run_cli(args):
    return _latpois.run_cli([str(a) for a in args])
