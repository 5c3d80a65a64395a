"""Root system helpers: parsing groups, graded pieces and Weyl orbit combinatorics."""

import logging
import re
from collections import deque
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx

from src.errors import ConfigurationError, FrameMismatchError
from src.models import (
    FRAME_DUAL,
    FRAME_T,
    GradedPieces,
    RationalVector,
    RootDatum,
    WeightedModule,
    WeylElement,
)
from src.models.root_datum import SUPPORTED_KINDS

logger = logging.getLogger(__name__)

_FACTOR = re.compile(r'^([A-Za-z]+)\s*\(\s*(\d+)\s*\)$')
_SEPARATORS = re.compile(r'\s*(?:\*|×|,|(?<=\))\s*x\s*(?=[A-Za-z]))\s*')


def build_root_datum(description: str, form_scales: Optional[Sequence] = None) -> RootDatum:
    """
    Build a root datum from a description such as "su(3)" or "su(2) x torus(1)".

    Args:
        description: Factors separated by 'x', '*', '×' or ','
        form_scales: Optional positive scale of the invariant form per factor

    Returns:
        RootDatum

    Raises:
        ConfigurationError: If a factor has an unsupported kind or cannot be parsed
    """
    if not description or not description.strip():
        raise ConfigurationError("group description is required")
    factors = []
    for token in _SEPARATORS.split(description.strip()):
        if not token:
            continue
        match = _FACTOR.match(token.strip())
        if not match:
            raise ConfigurationError(f"cannot parse group factor {token!r}")
        kind = match.group(1).lower()
        if kind not in SUPPORTED_KINDS:
            raise ConfigurationError(
                f"unsupported group kind {kind!r} (supported: {', '.join(SUPPORTED_KINDS)})"
            )
        factors.append((kind, int(match.group(2))))
    datum = RootDatum(factors, form_scales=form_scales)
    logger.debug(f"Built {datum!r} with {len(datum.positive_roots)} positive roots")
    return datum


def _check_coweight(gamma: RationalVector) -> None:
    if gamma.frame != FRAME_T:
        raise FrameMismatchError("graded pieces are taken with respect to an element of t")


def graded_pieces(module: WeightedModule, gamma: RationalVector) -> GradedPieces:
    """Split a module by the exact sign of <weight, gamma>."""
    _check_coweight(gamma)
    pos: Dict[RationalVector, int] = {}
    zero: Dict[RationalVector, int] = {}
    neg: Dict[RationalVector, int] = {}
    for weight, mult in module.items():
        value = weight.pair(gamma)
        target = pos if value > 0 else neg if value < 0 else zero
        target[weight] = mult
    return GradedPieces(WeightedModule(pos), WeightedModule(zero), WeightedModule(neg))


def trace_gamma_positive(module: WeightedModule, gamma: RationalVector) -> Fraction:
    """Sum of mult(lambda) <lambda, gamma> over weights pairing positively with gamma."""
    _check_coweight(gamma)
    total = Fraction(0)
    for weight, mult in module.items():
        value = weight.pair(gamma)
        if value > 0:
            total += mult * value
    return total


def adjoint_module(datum: RootDatum) -> WeightedModule:
    """T-weights of k_C: every root once, zero with multiplicity rank."""
    weights = {root: 1 for root in datum.all_roots}
    if datum.rank:
        weights[RationalVector([0] * datum.ambient_dim, FRAME_DUAL)] = datum.rank
    return WeightedModule(weights, self_dual=True)


def count_roots_positive(roots: Sequence[RationalVector], gamma: RationalVector) -> int:
    return sum(1 for root in roots if root.pair(gamma) > 0)


def rho_gamma_c(datum: RootDatum, gamma: RationalVector) -> RationalVector:
    """Sum of the positive roots pairing strictly negatively with gamma."""
    _check_coweight(gamma)
    total = RationalVector([0] * datum.ambient_dim, FRAME_DUAL)
    for root in datum.positive_roots:
        if root.pair(gamma) < 0:
            total = total + root
    return total


def dominant(datum: RootDatum, vec: RationalVector) -> RationalVector:
    """Weakly decreasing representative of the Weyl orbit."""
    coords = list(vec.coords)
    for f in datum.root_factors:
        block = sorted(coords[f.offset:f.offset + f.size], reverse=True)
        coords[f.offset:f.offset + f.size] = block
    return RationalVector(coords, vec.frame)


def stabilizer_order(datum: RootDatum, vec: RationalVector) -> int:
    """|W^vec|: product of factorials of repeated entries per block."""
    order = 1
    for f in datum.root_factors:
        counts: Dict[Fraction, int] = {}
        for k in f.coordinates:
            counts[vec[k]] = counts.get(vec[k], 0) + 1
        for c in counts.values():
            order *= factorial(c)
    return order


def _reflect(datum: RootDatum, coords: Tuple, block: int, i: int) -> Tuple:
    k = datum.root_factors[block].offset + i
    swapped = list(coords)
    swapped[k], swapped[k + 1] = swapped[k + 1], swapped[k]
    return tuple(swapped)


def weyl_orbit_graph(datum: RootDatum, vec: RationalVector) -> nx.Graph:
    """
    Orbit of a vector under W, as a graph whose edges are simple reflections.

    Nodes are coordinate tuples; each edge carries ``reflection=(block, i)``.
    Reflections fixing a node add no edge.
    """
    graph = nx.Graph()
    start = vec.coords
    graph.add_node(start)
    frontier = deque([start])
    while frontier:
        y = frontier.popleft()
        for block, i in datum.simple_reflections:
            k = datum.root_factors[block].offset + i
            if y[k] == y[k + 1]:
                continue
            z = _reflect(datum, y, block, i)
            if z not in graph:
                graph.add_node(z)
                frontier.append(z)
            graph.add_edge(y, z, reflection=(block, i))
    return graph


@lru_cache(maxsize=None)
def coset_rep_map(datum: RootDatum, vec: RationalVector) -> Dict[Tuple, WeylElement]:
    """
    Map every orbit point y of vec to the minimal-length w with w vec = y.

    Breadth-first distance from vec equals the minimal length, and the
    reflections along a shortest path give a reduced word.
    """
    graph = weyl_orbit_graph(datum, vec)
    paths = nx.single_source_shortest_path(graph, vec.coords)
    sizes = datum.block_sizes
    reps: Dict[Tuple, WeylElement] = {}
    for target, path in paths.items():
        applied = [graph.edges[a, b]['reflection'] for a, b in zip(path, path[1:])]
        element = WeylElement.identity(sizes)
        for block, i in applied:
            element = WeylElement.simple(sizes, block, i).compose(element)
        reps[target] = WeylElement(element.perms, reduced_word=tuple(reversed(applied)))
    return reps


def minimal_coset_reps(datum: RootDatum, gamma: RationalVector) -> List[WeylElement]:
    """
    One minimal-length representative per coset of W / W^gamma.

    Returns:
        Representatives ordered by (length, one-line form)
    """
    _check_coweight(gamma)
    return sorted(coset_rep_map(datum, gamma).values(), key=lambda w: w.sort_key())


def dominant_conjugator(datum: RootDatum, gamma: RationalVector) -> Tuple[RationalVector, WeylElement]:
    """Return (gamma+, v) with v of minimal length and v gamma = gamma+."""
    plus = dominant(datum, gamma)
    return plus, coset_rep_map(datum, gamma)[plus.coords]


def transport_element(datum: RootDatum, gamma_plus: RationalVector, target: RationalVector) -> WeylElement:
    """Minimal u with u gamma+ = target (target must lie in the orbit of gamma+)."""
    reps = coset_rep_map(datum, gamma_plus)
    try:
        return reps[target.coords]
    except KeyError:
        raise FrameMismatchError("target is not in the Weyl orbit of gamma+")


def length_distribution(elements: Sequence[WeylElement]) -> List[int]:
    """Coefficients of sum q^length(w), lowest degree first."""
    if not elements:
        return []
    counts = [0] * (max(w.length for w in elements) + 1)
    for w in elements:
        counts[w.length] += 1
    return counts


@lru_cache(maxsize=None)
def weyl_group(datum: RootDatum) -> Tuple[WeylElement, ...]:
    """All of W, as the coset representatives of a regular element, ordered by (length, one-line form)."""
    coords: List[int] = [0] * datum.ambient_dim
    for f in datum.root_factors:
        for k in range(f.size):
            coords[f.offset + k] = f.size - 1 - 2 * k
    return tuple(minimal_coset_reps(datum, datum.vector(coords, FRAME_T)))


def is_weyl_stable(datum: RootDatum, module: WeightedModule) -> bool:
    """True when every simple reflection maps the weight multiset onto itself."""
    counts = dict(module.items())
    for b, i in datum.simple_reflections:
        s = WeylElement.simple(datum.block_sizes, b, i)
        for weight, mult in counts.items():
            if counts.get(s.apply(datum, weight), 0) != mult:
                return False
    return True
