"""Finite hidden-variable models, Bell-type inequality audits and Kochen-Specker searches.

Thin wrapper over the native core; models and tables are plain dicts in the
JSON file formats used by the ``hvlab`` command-line tool.
"""

import json as _json

from . import _core
from ._core import ConditioningError, InputError, RefusalError, f_theta, peres33, scan_f

__all__ = [
    "ConditioningError", "InputError", "RefusalError",
    "photon_stats", "born_oracle_photon", "spin1_joint", "born_oracle_spin1",
    "f_theta", "scan_f", "boole_check", "local_polytope",
    "predicted_table", "simulate", "reduce_raw", "check_bell_locality", "derandomize",
    "peres33", "search_coloring", "run_cli",
]


def _j(x):
    return x if isinstance(x, str) else _json.dumps(x)


def photon_stats(alpha, beta):
    return _json.loads(_core.photon_stats(alpha, beta))


def born_oracle_photon(alpha, beta):
    return _json.loads(_core.born_oracle_photon(alpha, beta))


def spin1_joint(frame_a, frame_b):
    return _json.loads(_core.spin1_joint(list(frame_a), list(frame_b)))


def born_oracle_spin1(frame_a, frame_b):
    return _json.loads(_core.born_oracle_spin1(list(frame_a), list(frame_b)))


def boole_check(pz, f1, f2, g1, g2):
    return _json.loads(_core.boole_check(pz, f1, f2, g1, g2))


def local_polytope(table, tol=1e-9):
    return _json.loads(_core.local_polytope(_j(table), tol))


def predicted_table(model):
    return _json.loads(_core.predicted_table(_j(model)))


def simulate(model, shots, seed):
    return _json.loads(_core.simulate(_j(model), shots, seed))


def reduce_raw(model):
    return _json.loads(_core.reduce_raw(_j(model)))


def check_bell_locality(model, tol=1e-9):
    return _json.loads(_core.check_bell_locality(_j(model), tol))


def derandomize(model):
    return _json.loads(_core.derandomize(_j(model)))


def search_coloring(rays, count=False):
    return _json.loads(_core.search_coloring([tuple(r) for r in rays], count))


def run_cli(*args):
    """Runs one command line in-process; returns (exit_code, stdout, stderr)."""
    return _core.run_cli([str(a) for a in args])
