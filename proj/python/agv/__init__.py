"""Assume-guarantee verification of strategic abilities in multi-agent systems."""

from ._agv import (
    AutomatonTooLarge,
    FormulaSyntaxError,
    Model,
    ModelError,
    RuleShapeError,
    agverify,
    formula,
    gen_robots,
    gen_tgc,
    guarantees,
    load_model,
    parse_model,
    run_cli,
    verify,
)

__all__ = [
    "AutomatonTooLarge",
    "FormulaSyntaxError",
    "Model",
    "ModelError",
    "RuleShapeError",
    "agverify",
    "formula",
    "gen_robots",
    "gen_tgc",
    "guarantees",
    "load_model",
    "parse_model",
    "run_cli",
    "verify",
]
