from dataclasses import dataclass
from typing import Any, Dict, Tuple, Union

import numpy as np


@dataclass(frozen=True)
class LinearHypothesis:
    """Linear classifier h(x) = +1 if w.x + b >= 0 else -1."""

    w: Tuple[float, ...]
    b: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "w", tuple(float(v) for v in self.w))
        object.__setattr__(self, "b", float(self.b))

    @classmethod
    def zeros(cls, dim: int) -> "LinearHypothesis":
        return cls(w=(0.0,) * dim, b=0.0)

    @classmethod
    def from_theta(cls, theta: np.ndarray) -> "LinearHypothesis":
        """Build from the stacked parameter vector (w_1, ..., w_d, b)."""
        return cls(w=tuple(theta[:-1].tolist()), b=float(theta[-1]))

    @property
    def theta(self) -> np.ndarray:
        return np.append(np.asarray(self.w, dtype=float), self.b)

    def decision(self, X: np.ndarray) -> np.ndarray:
        return np.atleast_2d(X) @ np.asarray(self.w) + self.b

    def predict(self, X: np.ndarray) -> np.ndarray:
        # ties resolve to +1
        return np.where(self.decision(X) >= 0.0, 1, -1)

    def scaled(self, alpha: float) -> "LinearHypothesis":
        return LinearHypothesis(w=tuple(alpha * v for v in self.w), b=alpha * self.b)

    def to_dict(self) -> Dict[str, Any]:
        return {"w": list(self.w), "b": self.b}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "LinearHypothesis":
        return cls(w=tuple(data["w"]), b=data["b"])


@dataclass(frozen=True)
class ChanceHypothesis:
    """Symbolic chance-level reference; its risk is 0.5 on every task by definition."""

    def to_dict(self) -> Dict[str, Any]:
        return {"chance": True}


Piece = Union[LinearHypothesis, ChanceHypothesis]


@dataclass(frozen=True)
class HypothesisSequence:
    """Total map u -> h_u described by a phase schedule and one hypothesis per phase.

    ``at(u)`` returns ``pieces[((u - offset) // period) % len(pieces)]``; a single
    piece gives a constant sequence.
    """

    pieces: Tuple[Piece, ...]
    period: int = 1
    offset: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "pieces", tuple(self.pieces))
        if not self.pieces:
            raise ValueError("a hypothesis sequence needs at least one piece")
        if self.period < 1:
            raise ValueError(f"period must be positive, got {self.period}")

    @classmethod
    def constant(cls, hypothesis: Piece) -> "HypothesisSequence":
        return cls(pieces=(hypothesis,))

    @property
    def is_constant(self) -> bool:
        return len(self.pieces) == 1

    def phase_of(self, u: int) -> int:
        return ((u - self.offset) // self.period) % len(self.pieces)

    def at(self, u: int) -> Piece:
        return self.pieces[self.phase_of(u)]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "period": self.period,
            "offset": self.offset,
            "pieces": [piece.to_dict() for piece in self.pieces],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "HypothesisSequence":
        return cls(
            pieces=tuple(piece_from_dict(p) for p in data["pieces"]),
            period=data["period"],
            offset=data["offset"],
        )


def piece_from_dict(data: Dict[str, Any]) -> Piece:
    if data.get("chance"):
        return ChanceHypothesis()
    return LinearHypothesis.from_dict(data)
