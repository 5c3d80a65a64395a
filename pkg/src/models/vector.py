"""Exact rational vectors in the Cartan subalgebra t or its dual t*."""

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, List, Sequence, Tuple, Union

from src.errors import DomainError, FrameMismatchError

FRAME_T = 't'
FRAME_DUAL = 't*'

Scalar = Union[int, str, Fraction]


def to_fraction(value: Scalar) -> Fraction:
    """
    Convert an exact scalar to a Fraction.

    Args:
        value: int, Fraction or a "p/q" string

    Returns:
        Fraction

    Raises:
        ValueError: If the value is a float or cannot be parsed
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise ValueError(f"exact scalar required, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    # sympy Rational and friends
    if hasattr(value, 'p') and hasattr(value, 'q'):
        return Fraction(int(value.p), int(value.q))
    raise ValueError(f"cannot interpret {value!r} as a rational")


def fraction_str(value: Fraction) -> str:
    """Serialize a rational as "p/q" (or "p" for integers)."""
    return str(value)


class RationalVector:
    """An immutable vector with exact coordinates and a frame tag."""

    __slots__ = ('coords', 'frame')

    def __init__(self, coords: Iterable[Scalar], frame: str = FRAME_T):
        """
        Initialize a RationalVector instance.

        Args:
            coords: Exact coordinates
            frame: 't' for elements of t, 't*' for weights
        """
        if frame not in (FRAME_T, FRAME_DUAL):
            raise ValueError(f"frame must be 't' or 't*', got {frame!r}")
        object.__setattr__(self, 'coords', tuple(to_fraction(c) for c in coords))
        object.__setattr__(self, 'frame', frame)

    def __setattr__(self, name, value):
        raise AttributeError("RationalVector is immutable")

    def __repr__(self):
        body = ', '.join(str(c) for c in self.coords)
        return f"RationalVector(({body}), frame={self.frame})"

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, index):
        return self.coords[index]

    def __eq__(self, other):
        if not isinstance(other, RationalVector):
            return False
        return self.frame == other.frame and self.coords == other.coords

    def __hash__(self):
        return hash((self.frame, self.coords))

    def __lt__(self, other):
        return self.coords < other.coords

    def _check_same(self, other: 'RationalVector') -> None:
        if self.frame != other.frame:
            raise FrameMismatchError(f"cannot combine {self.frame} and {other.frame} vectors")
        if len(self) != len(other):
            raise FrameMismatchError(f"length mismatch: {len(self)} vs {len(other)}")

    def __add__(self, other: 'RationalVector') -> 'RationalVector':
        self._check_same(other)
        return RationalVector((a + b for a, b in zip(self.coords, other.coords)), self.frame)

    def __sub__(self, other: 'RationalVector') -> 'RationalVector':
        self._check_same(other)
        return RationalVector((a - b for a, b in zip(self.coords, other.coords)), self.frame)

    def __neg__(self) -> 'RationalVector':
        return RationalVector((-c for c in self.coords), self.frame)

    def scale(self, factor: Scalar) -> 'RationalVector':
        """Multiply every coordinate by an exact scalar."""
        q = to_fraction(factor)
        return RationalVector((q * c for c in self.coords), self.frame)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def pair(self, other: 'RationalVector') -> Fraction:
        """
        Canonical pairing between t* and t.

        Raises:
            FrameMismatchError: If both vectors live in the same frame
        """
        if self.frame == other.frame:
            raise FrameMismatchError(f"pairing needs one t and one t* vector, got two {self.frame}")
        if len(self) != len(other):
            raise FrameMismatchError(f"length mismatch: {len(self)} vs {len(other)}")
        return sum((a * b for a, b in zip(self.coords, other.coords)), Fraction(0))

    def as_frame(self, frame: str) -> 'RationalVector':
        """Same coordinates in another frame (identification through the coordinate form)."""
        return RationalVector(self.coords, frame)

    def primitive(self) -> 'RationalVector':
        """
        Primitive integer form: clear denominators and divide by the gcd.

        The orientation is kept, so v and -v stay distinct.

        Raises:
            DomainError: If the vector is zero
        """
        if self.is_zero():
            raise DomainError("the zero vector has no primitive form")
        return RationalVector(primitive_integers(self.coords), self.frame)

    def canonical_line(self) -> 'RationalVector':
        """Primitive form with the first nonzero entry positive (orientation forgotten)."""
        prim = self.primitive()
        first = next(c for c in prim.coords if c != 0)
        return prim if first > 0 else -prim

    def to_floats(self) -> List[float]:
        return [float(c) for c in self.coords]

    def to_dict(self):
        """Convert vector to a JSON-friendly list of "p/q" strings."""
        return [fraction_str(c) for c in self.coords]


def primitive_integers(values: Sequence[Fraction]) -> Tuple[int, ...]:
    """Scale a nonzero rational sequence to coprime integers, orientation kept."""
    denominator = reduce(lambda a, b: a * b // gcd(a, b), (v.denominator for v in values), 1)
    ints = [int(v * denominator) for v in values]
    divisor = reduce(gcd, (abs(i) for i in ints), 0)
    if divisor == 0:
        raise DomainError("cannot normalize a zero vector")
    return tuple(i // divisor for i in ints)
