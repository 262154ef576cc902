"""Python front end to the regemb C++ library.

Functions returning reports give plain dicts (decoded from the library's JSON).
"""

import json

from . import _core
from ._core import (
    Map,
    RegembError,
    complex_moment_curve,
    count_roots,
    moment_curve,
    parse_map,
    tensor_product,
    trig_curve,
    version,
)

__all__ = [
    "Map",
    "RegembError",
    "adversarial_search",
    "bounds",
    "check_configuration",
    "complex_moment_curve",
    "count_roots",
    "moment_curve",
    "parse_map",
    "reduce_dimension",
    "run_cli",
    "sample_verify",
    "tensor_product",
    "trig_curve",
    "vandermonde_certificate",
    "version",
]


def _spec(m):
    return parse_map(m) if isinstance(m, str) else m


def check_configuration(spec, through=(), tangency=(), directions=(), tol=1e-10, subspace=False):
    return json.loads(_core.check_configuration(_spec(spec), list(through), list(tangency), list(directions), tol, subspace))


def sample_verify(spec, k, l, samples=1000, delta_min=1e-3, seed=0, tol=1e-10, threads=0):
    return json.loads(_core.sample_verify(_spec(spec), k, l, samples, delta_min, seed, tol, threads))


def adversarial_search(spec, k, l, restarts=10, iters=1000, delta_min=1e-2, seed=0, tol=1e-10):
    return json.loads(_core.adversarial_search(_spec(spec), k, l, restarts, iters, delta_min, seed, tol))


def bounds(n, k, l, closed=False):
    return json.loads(_core.bounds(n, k, l, closed))


def vandermonde_certificate(simple=(), double=()):
    return json.loads(_core.vandermonde_certificate([str(x) for x in simple], [str(x) for x in double]))


def reduce_dimension(spec, k, l, target, budget=10000, retries=32, seed=0):
    return json.loads(_core.reduce_dimension(_spec(spec), k, l, target, budget, retries, seed))


def run_cli(args):
    """Runs the command-line tool in-process; returns (exit_code, report_dict_or_text, stderr)."""
    code, out, err = _core.run_cli([str(a) for a in args])
    try:
        return code, json.loads(out), err
    except ValueError:
        return code, out, err
