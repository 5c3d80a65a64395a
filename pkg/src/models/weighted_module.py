"""Multisets of T-weights (q = k~/k, V, and their graded pieces)."""

from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from src.errors import FrameMismatchError
from src.models.vector import FRAME_DUAL, RationalVector


class WeightedModule:
    """A finite T-module recorded as weight -> multiplicity."""

    def __init__(self, weights: Optional[Mapping[RationalVector, int]] = None, self_dual: bool = False):
        """
        Initialize a WeightedModule instance.

        Args:
            weights: Map from weight (t* vector) to positive multiplicity
            self_dual: Whether the module is closed under negation of weights
        """
        cleaned: Dict[RationalVector, int] = {}
        length = None
        for weight, mult in (weights or {}).items():
            if weight.frame != FRAME_DUAL:
                raise FrameMismatchError("module weights must live in t*")
            if length is None:
                length = len(weight)
            elif len(weight) != length:
                raise ValueError("all weights must have the same length")
            if int(mult) < 1:
                raise ValueError(f"multiplicity of {weight!r} must be at least 1")
            cleaned[weight] = cleaned.get(weight, 0) + int(mult)
        if self_dual:
            for weight, mult in cleaned.items():
                if cleaned.get(-weight) != mult:
                    raise ValueError("module flagged self-dual is not closed under negation")
        self._weights = cleaned
        self.self_dual = self_dual

    @classmethod
    def from_list(cls, weights: Iterable[RationalVector], self_dual: bool = False) -> 'WeightedModule':
        counts: Dict[RationalVector, int] = {}
        for w in weights:
            counts[w] = counts.get(w, 0) + 1
        return cls(counts, self_dual=self_dual)

    @property
    def dim(self) -> int:
        return sum(self._weights.values())

    def items(self) -> List[Tuple[RationalVector, int]]:
        """Weights with multiplicities in a deterministic order."""
        return sorted(self._weights.items(), key=lambda kv: kv[0].coords)

    def multiplicity(self, weight: RationalVector) -> int:
        return self._weights.get(weight, 0)

    def weights(self) -> List[RationalVector]:
        """Weights repeated by multiplicity."""
        return [w for w, m in self.items() for _ in range(m)]

    def nonzero(self) -> 'WeightedModule':
        return WeightedModule({w: m for w, m in self._weights.items() if not w.is_zero()})

    def direct_sum(self, other: 'WeightedModule') -> 'WeightedModule':
        merged = dict(self._weights)
        for w, m in other._weights.items():
            merged[w] = merged.get(w, 0) + m
        return WeightedModule(merged, self_dual=self.self_dual and other.self_dual)

    def filter(self, predicate) -> 'WeightedModule':
        return WeightedModule({w: m for w, m in self._weights.items() if predicate(w)})

    def total_weight(self) -> Optional[RationalVector]:
        """Sum of all weights with multiplicity (None for the zero module)."""
        total = None
        for w, m in self._weights.items():
            term = w.scale(m)
            total = term if total is None else total + term
        return total

    def is_empty(self) -> bool:
        return not self._weights

    def __repr__(self):
        return f"WeightedModule(dim={self.dim}, distinct={len(self._weights)})"

    def __eq__(self, other):
        if not isinstance(other, WeightedModule):
            return False
        return self._weights == other._weights

    def __hash__(self):
        return hash(tuple(self.items()))

    def to_dict(self):
        """Convert module to dictionary representation."""
        return {
            'dim': self.dim,
            'weights': [{'weight': w.to_dict(), 'multiplicity': m} for w, m in self.items()],
        }


class GradedPieces:
    """Decomposition M = M^{>0} + M^{=0} + M^{<0} with respect to an element of t."""

    def __init__(self, positive: WeightedModule, zero: WeightedModule, negative: WeightedModule):
        self.positive = positive
        self.zero = zero
        self.negative = negative

    @property
    def dims(self) -> Tuple[int, int, int]:
        return (self.positive.dim, self.zero.dim, self.negative.dim)

    def __repr__(self):
        return f"GradedPieces(dims={self.dims})"

    def to_dict(self):
        return {
            'dims': list(self.dims),
            'positive': self.positive.to_dict(),
            'zero': self.zero.to_dict(),
            'negative': self.negative.to_dict(),
        }
