"""
Cohomology of partial flag varieties F_gamma = K_C / P_gamma in the Schubert basis.

Every computation happens in the Borel presentation of the full flag variety
of the root blocks: one variable per coordinate, Schubert polynomials built
from the longest element by divided differences, and Schubert coefficients
read off as (d_w f)(0). Non-dominant gamma is handled on F_{gamma+} through
the minimal conjugator v with v gamma = gamma+.
"""

import logging
import threading
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ
from sympy.polys.rings import ring

from src.errors import DomainError, FrameMismatchError
from src.models import (
    FRAME_DUAL,
    CohomologyClass,
    RationalVector,
    RootDatum,
    WeightedModule,
    WeylElement,
)
from src.root_system import (
    build_root_datum,
    dominant_conjugator,
    length_distribution,
    minimal_coset_reps,
    transport_element,
    weyl_group,
)

logger = logging.getLogger(__name__)


class BorelPresentation:
    """Polynomial ring Q[x_{b,i}] with Schubert polynomials and divided differences per root block."""

    def __init__(self, datum: RootDatum):
        """
        Initialize a BorelPresentation instance.

        Args:
            datum: Root datum whose root blocks get one variable per coordinate
        """
        self.datum = datum
        self.sizes = datum.block_sizes
        names = [f"x{b}_{i}" for b, n in enumerate(self.sizes) for i in range(n)] or ['x']
        self.ring, *gens = ring(','.join(names), QQ)
        self.gens = tuple(gens)
        self.nvars = len(self.gens)
        offsets = []
        start = 0
        for n in self.sizes:
            offsets.append(start)
            start += n
        self.offsets = tuple(offsets)
        self._schubert: Dict[Tuple[int, Tuple[int, ...]], object] = {}
        self._lock = threading.Lock()

    def variable(self, block: int, i: int):
        return self.gens[self.offsets[block] + i]

    def swap(self, f, block: int, i: int):
        """s_i acting on f: exchange x_{b,i} and x_{b,i+1}."""
        a = self.offsets[block] + i
        b = a + 1
        swapped = {}
        for monom, coeff in f.items():
            m = list(monom)
            m[a], m[b] = m[b], m[a]
            swapped[tuple(m)] = coeff
        return self.ring.from_dict(swapped)

    def divided_difference(self, f, block: int, i: int):
        """(f - s_i f) / (x_{b,i} - x_{b,i+1}), exact."""
        numerator = f - self.swap(f, block, i)
        if not numerator:
            return self.ring.zero
        return numerator.exquo(self.variable(block, i) - self.variable(block, i + 1))

    def _block_schubert(self, block: int, perm: Tuple[int, ...]):
        key = (block, perm)
        with self._lock:
            cached = self._schubert.get(key)
        if cached is not None:
            return cached
        n = len(perm)
        ascent = next((i for i in range(n - 1) if perm[i] < perm[i + 1]), None)
        if ascent is None:
            poly = self.ring.one
            for i in range(n):
                poly = poly * self.variable(block, i) ** (n - 1 - i)
        else:
            longer = list(perm)
            longer[ascent], longer[ascent + 1] = longer[ascent + 1], longer[ascent]
            poly = self.divided_difference(self._block_schubert(block, tuple(longer)), block, ascent)
        with self._lock:
            self._schubert[key] = poly
        return poly

    def schubert_polynomial(self, w: WeylElement):
        """Product over root blocks of the Schubert polynomials of the block permutations."""
        poly = self.ring.one
        for block, perm in enumerate(w.perms):
            poly = poly * self._block_schubert(block, perm)
        return poly

    def coefficient(self, f, w: WeylElement) -> Fraction:
        """Coefficient of the Schubert polynomial of w in f: (d_w f)(0)."""
        perms = [list(p) for p in w.perms]
        g = f
        while True:
            step = None
            for block, perm in enumerate(perms):
                descent = next((i for i in range(len(perm) - 1) if perm[i] > perm[i + 1]), None)
                if descent is not None:
                    step = (block, descent)
                    break
            if step is None:
                break
            block, i = step
            g = self.divided_difference(g, block, i)
            if not g:
                return Fraction(0)
            perms[block][i], perms[block][i + 1] = perms[block][i + 1], perms[block][i]
        constant = g.coeff(1) if g else 0
        return Fraction(int(constant.numerator), int(constant.denominator)) if constant else Fraction(0)

    def line_bundle_class(self, weight: RationalVector):
        """c_1 of the line bundle of a weight: -sum_k mu_k x_{b, n-1-k} per root block."""
        poly = self.ring.zero
        for block, f in enumerate(self.datum.root_factors):
            for k in range(f.size):
                mu = weight[f.offset + k]
                if mu:
                    poly = poly - QQ(mu.numerator, mu.denominator) * self.variable(block, f.size - 1 - k)
        return poly


@lru_cache(maxsize=None)
def presentation_for(datum: RootDatum) -> BorelPresentation:
    return BorelPresentation(datum)


class FlagVariety:
    """F_gamma, computed on F_{gamma+} with gamma+ = v gamma dominant."""

    def __init__(self, datum: RootDatum, gamma: RationalVector):
        """
        Initialize a FlagVariety instance.

        Args:
            datum: Root datum of K
            gamma: Nonzero element of t

        Raises:
            DomainError: If gamma is zero
        """
        if gamma.is_zero():
            raise DomainError("the flag variety of gamma = 0 is a point; gamma must be nonzero")
        datum.validate(gamma)
        self.datum = datum
        self.gamma = gamma
        self.gamma_plus, self.conjugator = dominant_conjugator(datum, gamma)
        plus = self.gamma_plus
        self.parabolic: Tuple[Tuple[int, int], ...] = tuple(
            (b, i) for b, i in datum.simple_reflections
            if plus[datum.root_factors[b].offset + i] == plus[datum.root_factors[b].offset + i + 1]
        )
        self.dimension = sum(1 for root in datum.positive_roots if root.pair(plus) != 0)
        self.basis: List[WeylElement] = minimal_coset_reps(datum, plus)
        self.top = next(u for u in self.basis if u.length == self.dimension)
        self.key = (datum.description, datum.form_scales, plus.coords)
        self.presentation = presentation_for(datum)
        self._members = set(self.basis)
        self._products: Dict[Tuple[WeylElement, WeylElement], CohomologyClass] = {}
        self._lock = threading.Lock()

    def __repr__(self):
        return (
            f"FlagVariety({self.datum.description}, gamma+={[str(c) for c in self.gamma_plus.coords]}, "
            f"dim={self.dimension})"
        )

    def _check(self, c: CohomologyClass) -> None:
        if c.flag_key != self.key:
            raise FrameMismatchError("class lives on a different flag variety")

    def schubert_class(self, u: WeylElement) -> CohomologyClass:
        if u not in self._members:
            raise DomainError(f"{u!r} is not a minimal coset representative of this flag variety")
        return CohomologyClass(self.key, {u: 1})

    def unit(self) -> CohomologyClass:
        return self.schubert_class(self.basis[0])

    def point(self) -> CohomologyClass:
        return self.schubert_class(self.top)

    def zero(self) -> CohomologyClass:
        return CohomologyClass(self.key, {})

    def class_of_orbit(self, y: RationalVector) -> CohomologyClass:
        """Class of the closure of B w P_gamma for the coset with w gamma = y."""
        return self.schubert_class(transport_element(self.datum, self.gamma_plus, y))

    def class_of_coset(self, w: WeylElement) -> CohomologyClass:
        return self.class_of_orbit(w.apply(self.datum, self.gamma))

    def polynomial(self, c: CohomologyClass):
        """A Borel polynomial representing a class."""
        self._check(c)
        poly = self.presentation.ring.zero
        for u, coeff in c.terms():
            poly = poly + coeff * self.presentation.schubert_polynomial(u.conjugate_by_longest())
        return poly

    def expand(self, poly, exact: bool = True) -> CohomologyClass:
        """
        Schubert expansion of a Borel polynomial coming from F_gamma.

        Args:
            poly: Borel polynomial
            exact: Check that the expansion loses nothing, i.e. poly minus the
                polynomial of the result has no full-flag Schubert component

        Raises:
            DomainError: If a coefficient is not an integer, or poly does not
                come from the cohomology of F_gamma
        """
        if not poly:
            return self.zero()
        top_degree = max(sum(m) for m in poly.monoms())
        coefficients = {}
        for u in self.basis:
            if u.length > top_degree:
                continue
            value = self.presentation.coefficient(poly, u.conjugate_by_longest())
            if value.denominator != 1:
                raise DomainError(f"non-integral Schubert coefficient {value} for {u!r}")
            if value:
                coefficients[u] = int(value)
        result = CohomologyClass(self.key, coefficients)
        if exact:
            remainder = poly - self.polynomial(result)
            if remainder:
                for w in weyl_group(self.datum):
                    if w.length > top_degree:
                        break
                    if self.presentation.coefficient(remainder, w):
                        raise DomainError(
                            f"polynomial is not a class of {self!r}: "
                            f"remainder has a Schubert component along {w!r}"
                        )
        return result
    def _basis_product(self, u: WeylElement, w: WeylElement) -> CohomologyClass:
        key = (u, w) if u.sort_key() <= w.sort_key() else (w, u)
        with self._lock:
            cached = self._products.get(key)
        if cached is not None:
            return cached
        if u.length + w.length > self.dimension:
            result = self.zero()
        else:
            p = self.presentation
            poly = (p.schubert_polynomial(u.conjugate_by_longest())
                    * p.schubert_polynomial(w.conjugate_by_longest()))
            # products of basis polynomials stay W_S-invariant
            result = self.expand(poly, exact=False)
        with self._lock:
            self._products[key] = result
        return result

    def cup(self, a: CohomologyClass, b: CohomologyClass) -> CohomologyClass:
        self._check(a)
        self._check(b)
        total = self.zero()
        for u, ca in a.terms():
            for w, cb in b.terms():
                total = total + self._basis_product(u, w).scaled(ca * cb)
        return total

    def line_bundle_class(self, weight: RationalVector):
        """c_1 of the line bundle of a weight given in the gamma picture, as a Borel polynomial."""
        if weight.frame != FRAME_DUAL or len(weight) != self.datum.ambient_dim:
            raise DomainError("line bundle weights must be t* vectors of this group")
        return self.presentation.line_bundle_class(self.conjugator.apply(self.datum, weight))

    def poincare_polynomial(self) -> List[int]:
        """Coefficients of sum_{u in W^S} q^length(u)."""
        return length_distribution(self.basis)

    def dual_element(self, u: WeylElement) -> Optional[WeylElement]:
        """The basis element pairing to [pt] with u, if exactly one does."""
        partners = [
            w for w in self.basis
            if w.length == self.dimension - u.length
            and self._basis_product(u, w).coefficient(self.top) == 1
        ]
        return partners[0] if len(partners) == 1 else None

    def pairing_matrix(self) -> List[List[int]]:
        """point_coefficient(sigma_u sigma_w) over the basis."""
        return [[self._basis_product(u, w).coefficient(self.top) for w in self.basis] for u in self.basis]


@lru_cache(maxsize=None)
def build_flag(datum: RootDatum, gamma: RationalVector) -> FlagVariety:
    """Flag variety of gamma (cached, shared between workers)."""
    flag = FlagVariety(datum, gamma)
    logger.debug(f"Built {flag!r} with {len(flag.basis)} Schubert classes")
    return flag


def cup_product(flag: FlagVariety, a: CohomologyClass, b: CohomologyClass) -> CohomologyClass:
    return flag.cup(a, b)


def class_of_x_gamma(flag: FlagVariety) -> CohomologyClass:
    """Class of the closure of B[e] in K_C / P_gamma."""
    return flag.class_of_orbit(flag.gamma)


def pullback_diagonal(flag: FlagVariety, classes: Sequence[CohomologyClass]) -> CohomologyClass:
    """Pullback along the diagonal F -> F^s: the product of the classes."""
    if not classes:
        return flag.unit()
    result = classes[0]
    flag._check(result)
    for c in classes[1:]:
        result = flag.cup(result, c)
    return result


def euler_class(flag: FlagVariety, positive_part: WeightedModule) -> CohomologyClass:
    """
    Euler class of the homogeneous bundle with fibre V^{gamma>0}.

    Args:
        flag: F_gamma
        positive_part: The gamma>0 graded piece of V, weights in the gamma picture
            (transported by the conjugator here)

    Raises:
        DomainError: If a weight does not belong to the t* frame of the group
    """
    poly = flag.presentation.ring.one
    for weight in positive_part.weights():
        poly = poly * flag.line_bundle_class(weight)
    return flag.expand(poly)


def point_coefficient(flag: FlagVariety, c: CohomologyClass) -> int:
    """Coefficient of [pt] in a class."""
    flag._check(c)
    return c.coefficient(flag.top)


def grassmannian(k: int, n: int) -> FlagVariety:
    """Gr(k, n) as the flag variety of ((n-k)^k, (-k)^(n-k)) for su(n)."""
    if not 0 < k < n:
        raise DomainError(f"Gr({k},{n}) needs 0 < k < n")
    datum = build_root_datum(f"su({n})")
    gamma = datum.vector([n - k] * k + [-k] * (n - k))
    return build_flag(datum, gamma)


def partition_of(flag: FlagVariety, u: WeylElement) -> Tuple[int, ...]:
    """Partition (k parts, each <= n-k) labelling a Grassmannian Schubert class."""
    image = u.apply(flag.datum, flag.gamma_plus)
    big = max(image.coords)
    positions = [j for j, c in enumerate(image.coords) if c == big]
    parts = sorted((a - t for t, a in enumerate(positions)), reverse=True)
    return tuple(parts)


def element_of_partition(flag: FlagVariety, partition: Iterable[int]) -> WeylElement:
    target = tuple(p for p in partition)
    for u in flag.basis:
        if tuple(p for p in partition_of(flag, u) if p) == tuple(p for p in target if p):
            return u
    raise DomainError(f"partition {target} does not label a Schubert class of {flag!r}")
