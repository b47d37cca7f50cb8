"""Synchronized automata for factor counts of automatic sequences."""

from .automata import Dfa, Dfao, Nfa
from .errors import (
    BrokenInvariant,
    CapExceeded,
    DomainError,
    IterationCapExceeded,
    MalformedInput,
    OracleInstability,
    StateCapExceeded,
)
from .kernels import BACKEND
from .predicates import Relation
from .sequences import BUILTINS, load_dfao
from .synchro import (
    SyncFunction,
    build_appearance_sync,
    build_block_count_dfao,
    build_count_sync,
    build_power_count_sync,
    build_primitive_count_sync,
    build_rho_sync,
    eval_sync,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BUILTINS",
    "BrokenInvariant",
    "CapExceeded",
    "Dfa",
    "Dfao",
    "DomainError",
    "IterationCapExceeded",
    "MalformedInput",
    "Nfa",
    "OracleInstability",
    "Relation",
    "StateCapExceeded",
    "SyncFunction",
    "build_appearance_sync",
    "build_block_count_dfao",
    "build_count_sync",
    "build_power_count_sync",
    "build_primitive_count_sync",
    "build_rho_sync",
    "eval_sync",
    "load_dfao",
]
