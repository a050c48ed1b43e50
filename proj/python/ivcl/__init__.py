"""Integrable viscous conservation laws: symbolic classification, hierarchies,
quasi-Miura series, a periodic simulator and the Pearcey critical profile."""

import json

from . import _ivcl
from ._ivcl import AlgebraError, SchemaError, burgers_error, pearcey, pearcey_origin

__version__ = _ivcl.__version__

__all__ = [
    "AlgebraError",
    "SchemaError",
    "audit",
    "bracket",
    "burgers_error",
    "classify",
    "current",
    "general_solution",
    "hierarchy",
    "normal_form",
    "pearcey",
    "pearcey_origin",
    "quasi_miura",
    "simulate",
    "universality",
]


def classify(order=3, basis="normal", a=""):
    return json.loads(_ivcl.classify_json(order, basis, a))


def current(text, order):
    return json.loads(_ivcl.current_json(text, order))


def bracket(alpha, beta, order):
    return json.loads(_ivcl.bracket_json(alpha, beta, order))


def normal_form(text, order):
    return json.loads(_ivcl.normal_form_json(text, order))


def hierarchy(family, n, order=5, sign=-1):
    return json.loads(_ivcl.hierarchy_json(family, n, order, sign))


def quasi_miura(order=3, a="constant"):
    return json.loads(_ivcl.quasi_miura_json(order, a))


def simulate(config=None, **overrides):
    cfg = dict(config or {})
    cfg.update(overrides)
    return _ivcl.simulate(json.dumps(cfg))


def universality():
    return json.loads(_ivcl.universality_json())


def general_solution():
    return json.loads(_ivcl.general_solution_json())


def audit(samples=100, seed=20240601):
    return json.loads(_ivcl.audit_json(samples, seed))
