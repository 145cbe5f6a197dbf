from __future__ import annotations

import os
import sys
import warnings
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parents[1]
SRC = ROOT / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

import pytest  # noqa: E402

from DropClause.booleanize.synthetic import xor_dataset  # noqa: E402
from DropClause.tm_core.models import BooleanDataset, ClauseBank, Hyperparams  # noqa: E402

os.environ.setdefault("MPLBACKEND", "Agg")

warnings.filterwarnings(
    "ignore",
    message="Importing 'parser.split_arg_string' is deprecated",
    category=DeprecationWarning,
)

XOR_CSV = ROOT / "data" / "xor.csv"

slow = pytest.mark.skipif(
    os.environ.get("RUN_SLOW_TM_TESTS") != "1",
    reason="set RUN_SLOW_TM_TESTS=1 to run convergence experiments",
)


def bank_with_includes(includes: list[list[int]], features: int, N: int = 128) -> ClauseBank:
    """Clause bank whose clause j includes exactly the literal indices in includes[j]."""

    bank = ClauseBank.initial(len(includes), features, N)
    for clause, literals in enumerate(includes):
        bank.matrix.states[clause, literals] = N + 1
    return bank


@pytest.fixture
def xor_repeated() -> BooleanDataset:
    base = xor_dataset()
    return BooleanDataset(features=np.tile(base.features, (25, 1)), labels=np.tile(base.labels, 25))


@pytest.fixture
def xor_hyperparams() -> Hyperparams:
    return Hyperparams(clauses=20, T=10, s=3.9, states=128, epochs=100, seed=0, weighted=False)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)
