"""Data models for the Tsetlin Machine core."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from enum import Enum
from hashlib import sha256
from typing import TYPE_CHECKING, Any, Dict, Hashable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .exceptions import DimensionError, InvariantViolation, ModelNotInitialisedError, UnknownClassError

if TYPE_CHECKING:  # pragma: no cover
    from DropClause.conv_tm.patches import PatchGeometry


class EvalMode(str, Enum):
    """Clause evaluation regime; only differs for clauses without included literals."""

    TRAIN = "train"
    INFER = "infer"


def state_dtype(states_per_action: int) -> np.dtype:
    """Smallest unsigned dtype that holds every state in [1, 2N]."""

    return np.dtype(np.uint16) if 2 * states_per_action <= np.iinfo(np.uint16).max else np.dtype(np.uint32)


def _as_bits(values: Any, name: str) -> np.ndarray:
    array = np.asarray(values)
    if array.ndim != 1:
        raise DimensionError(f"{name} must be one-dimensional, got shape {array.shape}")
    if array.size and not np.isin(array, (0, 1)).all():
        raise ValueError(f"{name} must contain only 0/1 values")
    return array.astype(np.uint8)


@dataclass(frozen=True)
class BooleanSample:
    """A fixed-width bit vector and its literal view (features followed by negations)."""

    bits: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "bits", _as_bits(self.bits, "bits"))

    @classmethod
    def from_iterable(cls, values: Sequence[int]) -> "BooleanSample":
        return cls(np.asarray(list(values), dtype=np.uint8))

    @property
    def width(self) -> int:
        return int(self.bits.size)

    @property
    def literals(self) -> np.ndarray:
        return np.concatenate([self.bits, 1 - self.bits]).astype(np.uint8)


@dataclass(slots=True)
class TAStateMatrix:
    """The n × 2o automaton states of one class; states 1..N exclude, N+1..2N include."""

    states: np.ndarray
    states_per_action: int

    @classmethod
    def initial(cls, clauses: int, features: int, states_per_action: int) -> "TAStateMatrix":
        """All automata start at N, the exclude side of the boundary, so clauses start empty."""

        matrix = cls(
            states=np.full((clauses, 2 * features), states_per_action, dtype=state_dtype(states_per_action)),
            states_per_action=states_per_action,
        )
        matrix.validate()
        return matrix

    @property
    def n_clauses(self) -> int:
        return int(self.states.shape[0])

    @property
    def n_literals(self) -> int:
        return int(self.states.shape[1])

    @property
    def n_features(self) -> int:
        return self.n_literals // 2

    @property
    def max_state(self) -> int:
        return 2 * self.states_per_action

    def include_actions(self) -> np.ndarray:
        return self.states > self.states_per_action

    def validate(self) -> None:
        if self.states_per_action < 1:
            raise ValueError("states_per_action must be at least 1")
        if self.states.ndim != 2 or self.states.shape[1] % 2:
            raise DimensionError(f"state matrix must be n × 2o, got shape {self.states.shape}")
        if self.n_clauses % 2:
            raise ValueError(f"clause count must be even, got {self.n_clauses}")
        if self.states.size and (self.states.min() < 1 or self.states.max() > self.max_state):
            raise InvariantViolation(
                f"automaton states must lie in [1, {self.max_state}], "
                f"found [{int(self.states.min())}, {int(self.states.max())}]"
            )

    def copy(self) -> "TAStateMatrix":
        return TAStateMatrix(states=self.states.copy(), states_per_action=self.states_per_action)


@dataclass(slots=True)
class ClauseBank:
    """Clauses of one class: the automaton states plus polarity and integer weights."""

    matrix: TAStateMatrix
    weights: np.ndarray

    @classmethod
    def initial(cls, clauses: int, features: int, states_per_action: int) -> "ClauseBank":
        return cls(
            matrix=TAStateMatrix.initial(clauses, features, states_per_action),
            weights=np.ones(clauses, dtype=np.uint32),
        )

    @property
    def n_clauses(self) -> int:
        return self.matrix.n_clauses

    @property
    def polarity(self) -> np.ndarray:
        # 0-based even index votes for y=1 (odd j in the 1-based vote equation).
        return np.where(np.arange(self.n_clauses) % 2 == 0, 1, -1).astype(np.int64)

    @property
    def signed_weights(self) -> np.ndarray:
        return self.polarity * self.weights.astype(np.int64)

    def include_actions(self) -> np.ndarray:
        return self.matrix.include_actions()

    def validate(self) -> None:
        self.matrix.validate()
        if self.weights.shape != (self.n_clauses,):
            raise DimensionError(
                f"weight vector must have length {self.n_clauses}, got {self.weights.shape}"
            )
        if self.weights.size and int(self.weights.min()) < 1:
            raise InvariantViolation("clause weights must be at least 1")

    def copy(self) -> "ClauseBank":
        return ClauseBank(matrix=self.matrix.copy(), weights=self.weights.copy())


@dataclass(frozen=True)
class Hyperparams:
    """Training hyperparameters; names follow the usual TM notation (T, s, N, p)."""

    clauses: int
    T: int
    s: float
    states: int = 128
    boost_true_positive: bool = False
    drop_clause: float = 0.0
    epochs: int = 1
    seed: int = 0
    weighted: bool = True

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        if self.clauses < 2 or self.clauses % 2:
            raise ValueError(f"clauses must be a positive even number, got {self.clauses}")
        if self.T < 1:
            raise ValueError("T must be at least 1")
        if not self.s > 1.0:
            raise ValueError("s must be greater than 1")
        if self.states < 1:
            raise ValueError("states must be at least 1")
        if not 0.0 <= self.drop_clause <= 1.0:
            raise ValueError("drop_clause probability must lie in [0, 1]")
        if self.epochs < 0:
            raise ValueError("epochs cannot be negative")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, payload: Mapping[str, Any]) -> "Hyperparams":
        return cls(**dict(payload))


@dataclass(frozen=True)
class BooleanDataset:
    """Booleanized samples with their labels; features are (m, o) or (m, d_x, d_y, d_z)."""

    features: np.ndarray
    labels: np.ndarray

    def __post_init__(self) -> None:
        features = np.asarray(self.features, dtype=np.uint8)
        labels = np.asarray(self.labels)
        if features.ndim < 2 and features.size:
            raise DimensionError("features must have a leading sample axis")
        if len(features) != len(labels):
            raise DimensionError(
                f"{len(features)} samples but {len(labels)} labels"
            )
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return int(len(self.labels))

    @property
    def sample_shape(self) -> Tuple[int, ...]:
        return tuple(int(dim) for dim in self.features.shape[1:])

    def sample(self, index: int) -> BooleanSample:
        return BooleanSample(self.features[index].reshape(-1))

    def subset(self, indices: Sequence[int]) -> "BooleanDataset":
        indices = np.asarray(indices, dtype=np.int64)
        return BooleanDataset(features=self.features[indices], labels=self.labels[indices])


@dataclass(frozen=True)
class EpochMetrics:
    """Per-epoch training telemetry."""

    epoch: int
    seconds: float
    active_fraction: float
    eval_accuracy: Optional[float] = None


@dataclass(slots=True)
class MulticlassModel:
    """One clause bank per class, or a single bank in binary mode."""

    labels: Tuple[Hashable, ...]
    banks: List[ClauseBank]
    hyperparams: Hyperparams
    binary: bool = False
    geometry: Optional["PatchGeometry"] = None
    preprocessing: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def initialise(
        cls,
        labels: Sequence[Hashable],
        n_features: int,
        hyperparams: Hyperparams,
        *,
        binary: bool = False,
        geometry: Optional["PatchGeometry"] = None,
        preprocessing: Optional[Mapping[str, Any]] = None,
    ) -> "MulticlassModel":
        labels = tuple(labels)
        if len(labels) < 2:
            raise ValueError("a model needs at least two class labels")
        if len(set(labels)) != len(labels):
            raise ValueError("class labels must be unique")
        if binary and len(labels) != 2:
            raise ValueError("binary mode requires exactly two labels")
        if geometry is not None:
            n_features = geometry.patch_width
        if n_features < 1:
            raise ValueError("n_features must be positive")
        bank_count = 1 if binary else len(labels)
        banks = [
            ClauseBank.initial(hyperparams.clauses, n_features, hyperparams.states)
            for _ in range(bank_count)
        ]
        model = cls(
            labels=labels,
            banks=banks,
            hyperparams=hyperparams,
            binary=binary,
            geometry=geometry,
            preprocessing=dict(preprocessing or {}),
        )
        model.validate()
        return model

    @property
    def is_initialised(self) -> bool:
        return bool(self.banks)

    @property
    def n_features(self) -> int:
        self._require_banks()
        return self.banks[0].matrix.n_features

    @property
    def n_classes(self) -> int:
        return len(self.labels)

    @property
    def is_convolutional(self) -> bool:
        return self.geometry is not None

    def _require_banks(self) -> None:
        if not self.banks:
            raise ModelNotInitialisedError("model has no clause banks; call MulticlassModel.initialise")

    def label_index(self, label: Hashable) -> int:
        try:
            return self.labels.index(label)
        except ValueError as exc:
            raise UnknownClassError(f"label {label!r} is not in the class table {self.labels}") from exc

    def bank_for(self, label: Hashable) -> ClauseBank:
        """Clause bank voting for `label`; in binary mode the single bank serves both labels."""

        self._require_banks()
        index = self.label_index(label)
        return self.banks[0] if self.binary else self.banks[index]

    def validate(self) -> None:
        self._require_banks()
        expected_banks = 1 if self.binary else len(self.labels)
        if len(self.banks) != expected_banks:
            raise DimensionError(f"expected {expected_banks} clause banks, found {len(self.banks)}")
        shape = self.banks[0].matrix.states.shape
        for bank in self.banks:
            if bank.matrix.states.shape != shape:
                raise DimensionError("all clause banks must share the same n × 2o shape")
            if bank.matrix.states_per_action != self.hyperparams.states:
                raise InvariantViolation("bank state count differs from hyperparams.states")
            bank.validate()
        if shape[0] != self.hyperparams.clauses:
            raise DimensionError(
                f"banks hold {shape[0]} clauses but hyperparams specify {self.hyperparams.clauses}"
            )
        if self.geometry is not None and shape[1] != 2 * self.geometry.patch_width:
            raise DimensionError("literal width does not match the patch geometry")

    def copy(self) -> "MulticlassModel":
        return MulticlassModel(
            labels=self.labels,
            banks=[bank.copy() for bank in self.banks],
            hyperparams=self.hyperparams,
            binary=self.binary,
            geometry=self.geometry,
            preprocessing=dict(self.preprocessing),
        )

    def fingerprint(self) -> str:
        """Deterministic digest over label table, states, and weights."""

        digest = sha256(repr(self.labels).encode("utf-8"))
        for bank in self.banks:
            digest.update(np.ascontiguousarray(bank.matrix.states).tobytes())
            digest.update(np.ascontiguousarray(bank.weights).tobytes())
        return digest.hexdigest()
