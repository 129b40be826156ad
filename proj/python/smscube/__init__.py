"""Cube-and-conquer search for graphs modulo isomorphism."""

import json

from . import _core
from ._core import (
    ConfigError,
    DomainError,
    Error,
    ParseError,
    count_models,
    edges_of_graph6,
    graph6,
    is_canonical,
    score,
    score_names,
    solve_dimacs,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "Error",
    "ParseError",
    "count_models",
    "edges_of_graph6",
    "encode",
    "graph6",
    "is_canonical",
    "pipeline",
    "score",
    "score_names",
    "solve_dimacs",
]


def encode(problem, n, k=3, m=None, static_sb=None):
    """DIMACS text and the variable map (as a dict)."""
    cnf, vars_json = _core.encode(problem, n, k, m, static_sb)
    return cnf, json.loads(vars_json)


def pipeline(problem, n, **options):
    """Run encode, prerun, cube and conquer; options mirror the JSON config keys.

    Returns a dict with the parsed report, model lines, cubes (iCNF) and the
    enriched formula text.
    """
    cfg = {"problem": problem, "n": n}
    cfg.update(options)
    out = _core.pipeline(json.dumps(cfg))
    out["report"] = json.loads(out["report"])
    return out
