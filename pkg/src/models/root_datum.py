"""Root data of type A groups and tori, and their Weyl group elements."""

from fractions import Fraction
from math import factorial
from typing import Iterable, List, Optional, Sequence, Tuple

from src.errors import ConfigurationError, DomainError, FrameMismatchError
from src.models.vector import FRAME_DUAL, FRAME_T, RationalVector, fraction_str, to_fraction

SUPPORTED_KINDS = ('su', 'u', 'torus')


class Factor:
    """One simple or abelian factor of K: su(n), u(n) or torus(r)."""

    def __init__(self, kind: str, size: int, offset: int = 0):
        """
        Initialize a Factor instance.

        Args:
            kind: 'su', 'u' or 'torus'
            size: n for su(n)/u(n), r for torus(r)
            offset: first ambient coordinate of this factor
        """
        if kind not in SUPPORTED_KINDS:
            raise ConfigurationError(f"unsupported group kind {kind!r}")
        if kind == 'su' and size < 2:
            raise ConfigurationError(f"su(n) needs n >= 2, got su({size})")
        if size < 1:
            raise ConfigurationError(f"{kind}({size}) must have size >= 1")
        self.kind = kind
        self.size = size
        self.offset = offset

    @property
    def has_roots(self) -> bool:
        return self.kind in ('su', 'u')

    @property
    def rank(self) -> int:
        return self.size - 1 if self.kind == 'su' else self.size

    @property
    def coordinates(self) -> range:
        return range(self.offset, self.offset + self.size)

    def __repr__(self):
        return f"{self.kind}({self.size})"

    def __eq__(self, other):
        if not isinstance(other, Factor):
            return False
        return (self.kind, self.size, self.offset) == (other.kind, other.size, other.offset)

    def __hash__(self):
        return hash((self.kind, self.size, self.offset))


class RootDatum:
    """
    Exact root datum for a product of su(n), u(n) and torus factors.

    Coordinates are the ambient R^N of u(n)-style diagonal matrices, with
    su(n) factors living on the trace-zero slice. Roots are e_i - e_j inside
    a factor; positive roots have i < j, so the dominant chamber consists of
    weakly decreasing blocks.
    """

    def __init__(self, factors: Sequence[Tuple[str, int]], form_scales: Optional[Sequence] = None):
        """
        Initialize a RootDatum instance.

        Args:
            factors: (kind, size) pairs in order
            form_scales: Positive rational scale of the invariant form per factor
                (defaults to the plain dot product)
        """
        if not factors:
            raise ConfigurationError("at least one factor is required")
        self.factors: Tuple[Factor, ...] = ()
        offset = 0
        built = []
        for kind, size in factors:
            factor = Factor(kind, int(size), offset)
            built.append(factor)
            offset += factor.size
        self.factors = tuple(built)
        self.ambient_dim = offset

        if form_scales is None:
            form_scales = [1] * len(self.factors)
        if len(form_scales) != len(self.factors):
            raise ConfigurationError("form_scales must give one scale per factor")
        self.form_scales = tuple(to_fraction(c) for c in form_scales)
        if any(c <= 0 for c in self.form_scales):
            raise ConfigurationError("form scales must be positive")

        self.rank = sum(f.rank for f in self.factors)
        self.root_factors: Tuple[Factor, ...] = tuple(f for f in self.factors if f.has_roots)
        self.positive_roots: Tuple[RationalVector, ...] = tuple(
            self._root(f, i, j)
            for f in self.root_factors
            for i in range(f.size) for j in range(i + 1, f.size)
        )
        self.simple_roots: Tuple[RationalVector, ...] = tuple(
            self._root(f, i, i + 1) for f in self.root_factors for i in range(f.size - 1)
        )
        self.simple_coroots: Tuple[RationalVector, ...] = tuple(
            r.as_frame(FRAME_T) for r in self.simple_roots
        )
        # (block index, position) of each simple reflection s_i
        self.simple_reflections: Tuple[Tuple[int, int], ...] = tuple(
            (b, i) for b, f in enumerate(self.root_factors) for i in range(f.size - 1)
        )

    def _root(self, factor: Factor, i: int, j: int) -> RationalVector:
        coords = [0] * self.ambient_dim
        coords[factor.offset + i] = 1
        coords[factor.offset + j] = -1
        return RationalVector(coords, FRAME_DUAL)

    @property
    def description(self) -> str:
        return 'x'.join(repr(f) for f in self.factors)

    @property
    def all_roots(self) -> Tuple[RationalVector, ...]:
        return self.positive_roots + tuple(-r for r in self.positive_roots)

    @property
    def block_sizes(self) -> Tuple[int, ...]:
        return tuple(f.size for f in self.root_factors)

    @property
    def weyl_order(self) -> int:
        order = 1
        for f in self.root_factors:
            order *= factorial(f.size)
        return order

    @property
    def has_center(self) -> bool:
        return any(f.kind in ('u', 'torus') for f in self.factors)

    def cartan_matrix(self) -> List[List[Fraction]]:
        """Matrix of pairings <alpha_i, H_j> of simple roots with simple coroots."""
        return [[a.pair(h) for h in self.simple_coroots] for a in self.simple_roots]

    def form_matrix(self) -> List[List[Fraction]]:
        """The invariant form on t as an ambient-coordinate matrix."""
        matrix = [[Fraction(0)] * self.ambient_dim for _ in range(self.ambient_dim)]
        for factor, scale in zip(self.factors, self.form_scales):
            for k in factor.coordinates:
                matrix[k][k] = scale
        return matrix

    def inner(self, a: RationalVector, b: RationalVector) -> Fraction:
        """Invariant form on two vectors of the same frame."""
        if a.frame != b.frame:
            raise FrameMismatchError("the invariant form takes two vectors of one frame")
        total = Fraction(0)
        for factor, scale in zip(self.factors, self.form_scales):
            total += scale * sum((a[k] * b[k] for k in factor.coordinates), Fraction(0))
        return total

    def vector(self, coords: Iterable, frame: str = FRAME_T) -> RationalVector:
        """Build a vector of this datum, checking length and su(n) trace conditions."""
        vec = RationalVector(coords, frame)
        self.validate(vec)
        return vec

    def validate(self, vec: RationalVector) -> None:
        """
        Check that a vector lies in t (or t*) of this group.

        Raises:
            DomainError: If the length is wrong or an su(n) block has nonzero trace
        """
        if len(vec) != self.ambient_dim:
            raise DomainError(f"expected {self.ambient_dim} coordinates, got {len(vec)}")
        for f in self.factors:
            if f.kind == 'su' and sum(vec[k] for k in f.coordinates) != 0:
                raise DomainError(f"coordinates of {f!r} must sum to zero")

    def is_dominant(self, vec: Sequence) -> bool:
        """True when every root block is weakly decreasing."""
        return self.first_non_dominant(vec) is None

    def first_non_dominant(self, vec: Sequence) -> Optional[int]:
        """Index (in root_factors) of the first block that is not weakly decreasing."""
        for b, f in enumerate(self.root_factors):
            block = [vec[k] for k in f.coordinates]
            if any(block[i] < block[i + 1] for i in range(len(block) - 1)):
                return b
        return None

    def __repr__(self):
        return f"RootDatum({self.description}, rank={self.rank})"

    def __eq__(self, other):
        if not isinstance(other, RootDatum):
            return False
        return self.description == other.description and self.form_scales == other.form_scales

    def __hash__(self):
        return hash((self.description, self.form_scales))

    def to_dict(self):
        """Convert root datum to dictionary representation."""
        return {
            'group': self.description,
            'rank': self.rank,
            'ambient_dim': self.ambient_dim,
            'form_scales': [fraction_str(c) for c in self.form_scales],
        }


class WeylElement:
    """
    Element of the Weyl group, one permutation per root factor.

    Permutations are 0-based one-line tuples; w acts by w e_i = e_{w(i)}.
    """

    def __init__(self, perms: Sequence[Sequence[int]], reduced_word: Optional[Sequence[Tuple[int, int]]] = None):
        """
        Initialize a WeylElement instance.

        Args:
            perms: One permutation of range(n) per root factor
            reduced_word: Optional sequence of (block, i) simple reflections,
                leftmost factor first
        """
        checked = []
        for perm in perms:
            perm = tuple(int(x) for x in perm)
            if sorted(perm) != list(range(len(perm))):
                raise ValueError(f"{perm} is not a permutation")
            checked.append(perm)
        self.perms: Tuple[Tuple[int, ...], ...] = tuple(checked)
        self.reduced_word = tuple(reduced_word) if reduced_word is not None else None
        self.length = sum(
            sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j])
            for p in self.perms
        )
        if self.reduced_word is not None and len(self.reduced_word) != self.length:
            raise ValueError("reduced word length does not match the inversion count")

    @classmethod
    def identity(cls, block_sizes: Sequence[int]) -> 'WeylElement':
        return cls([tuple(range(n)) for n in block_sizes], reduced_word=())

    @classmethod
    def longest(cls, block_sizes: Sequence[int]) -> 'WeylElement':
        return cls([tuple(range(n - 1, -1, -1)) for n in block_sizes])

    @classmethod
    def simple(cls, block_sizes: Sequence[int], block: int, i: int) -> 'WeylElement':
        """The simple reflection swapping positions i and i+1 of one block."""
        perms = [list(range(n)) for n in block_sizes]
        perms[block][i], perms[block][i + 1] = perms[block][i + 1], perms[block][i]
        return cls(perms, reduced_word=((block, i),))

    @property
    def block_sizes(self) -> Tuple[int, ...]:
        return tuple(len(p) for p in self.perms)

    def compose(self, other: 'WeylElement') -> 'WeylElement':
        """Product self * other (apply other first)."""
        if self.block_sizes != other.block_sizes:
            raise FrameMismatchError("Weyl elements of different groups")
        return WeylElement(
            [tuple(p[q[i]] for i in range(len(q))) for p, q in zip(self.perms, other.perms)]
        )

    def inverse(self) -> 'WeylElement':
        inv = []
        for p in self.perms:
            q = [0] * len(p)
            for i, pi in enumerate(p):
                q[pi] = i
            inv.append(tuple(q))
        return WeylElement(inv)

    def conjugate_by_longest(self) -> 'WeylElement':
        """w0 * w * w0."""
        return WeylElement(
            [tuple(len(p) - 1 - p[len(p) - 1 - i] for i in range(len(p))) for p in self.perms]
        )

    def apply(self, datum: RootDatum, vec: RationalVector) -> RationalVector:
        """Act on a vector of t or t*: (w v)_{w(i)} = v_i inside each block."""
        if datum.block_sizes != self.block_sizes:
            raise FrameMismatchError("Weyl element does not belong to this root datum")
        coords = list(vec.coords)
        for f, perm in zip(datum.root_factors, self.perms):
            for i, target in enumerate(perm):
                coords[f.offset + target] = vec[f.offset + i]
        return RationalVector(coords, vec.frame)

    def sort_key(self):
        return (self.length, self.perms)

    def __repr__(self):
        body = ' '.join(''.join(str(x + 1) for x in p) for p in self.perms)
        return f"WeylElement([{body}], length={self.length})"

    def __eq__(self, other):
        if not isinstance(other, WeylElement):
            return False
        return self.perms == other.perms

    def __hash__(self):
        return hash(self.perms)

    def to_dict(self):
        """Convert to dictionary representation with 1-based one-line notation."""
        data = {
            'one_line': [[x + 1 for x in p] for p in self.perms],
            'length': self.length,
        }
        if self.reduced_word is not None:
            data['reduced_word'] = [[b, i + 1] for b, i in self.reduced_word]
        return data

    @classmethod
    def from_one_line(cls, rows: Sequence[Sequence[int]]) -> 'WeylElement':
        """Parse 1-based one-line notation."""
        return cls([[int(x) - 1 for x in row] for row in rows])
