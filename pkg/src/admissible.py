"""Admissible elements gamma for K diagonal in K^s, acting on T*K~ (x V)."""

import logging
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy
from scipy.optimize import linprog

from src.errors import DomainError, HypothesisRefusal
from src.models import (
    FRAME_T,
    AdmissibleElement,
    GroupSetup,
    RationalVector,
    RootDatum,
    WeightedModule,
)

logger = logging.getLogger(__name__)

PROPER_NONE = 'no V'
PROPER_TORUS = 'torus-level (exact)'
PROPER_NUMERICAL = 'numerical evidence'

U_REFUSAL = "u(n) diagonal: shared central ideal; use su(n) + trace equality"

# Minimum of |Phi_V(v)|^2 on the unit sphere accepted as properness evidence
PROPER_PROBE_MIN = 1e-6


def q_module_weights(setup: GroupSetup) -> WeightedModule:
    """T-weights of q = k~/k: every root with multiplicity s-1, zero with (s-1) rank."""
    extra = setup.copies - 1
    if extra == 0:
        return WeightedModule()
    datum = setup.datum
    weights: Dict[RationalVector, int] = {root: extra for root in datum.all_roots}
    if datum.rank:
        weights[setup.zero_weight()] = extra * datum.rank
    return WeightedModule(weights, self_dual=True)


def ambient_weights(setup: GroupSetup) -> WeightedModule:
    """Weights of q + V."""
    module = q_module_weights(setup)
    if setup.v_module is not None:
        module = module.direct_sum(setup.v_module)
    return module


def trace_rows(datum: RootDatum) -> List[List[Fraction]]:
    """Linear forms cutting t out of the ambient coordinates (one per su(n) block)."""
    rows = []
    for f in datum.factors:
        if f.kind == 'su':
            rows.append([Fraction(1) if k in f.coordinates else Fraction(0) for k in range(datum.ambient_dim)])
    return rows


def restricted_rank(datum: RootDatum, weights: Sequence[RationalVector]) -> int:
    """Rank of a family of weights as linear forms on t."""
    base = trace_rows(datum)
    rows = [list(w.coords) for w in weights] + base
    if not rows:
        return 0
    return sympy.Matrix(rows).rank() - len(base)


def _normal_line(datum: RootDatum, subset: Tuple[RationalVector, ...]) -> Optional[RationalVector]:
    rows = [list(w.coords) for w in subset] + trace_rows(datum)
    if rows:
        null = sympy.Matrix(rows).nullspace()
    else:
        null = [sympy.eye(datum.ambient_dim)[:, k] for k in range(datum.ambient_dim)]
    if len(null) != 1:
        return None
    return RationalVector(list(null[0]), FRAME_T).canonical_line()


def _vanishing(setup: GroupSetup, gamma: RationalVector) -> WeightedModule:
    return ambient_weights(setup).nonzero().filter(lambda w: w.pair(gamma) == 0)


def _certify(setup: GroupSetup, gamma: RationalVector) -> Optional[AdmissibleElement]:
    certificate = _vanishing(setup, gamma)
    rank = restricted_rank(setup.datum, [w for w, _ in certificate.items()])
    if rank != setup.datum.rank - 1:
        return None
    return AdmissibleElement(gamma, certificate, rank)


def enumerate_admissible(setup: GroupSetup, threads: int = 1) -> List[AdmissibleElement]:
    """
    Every primitive gamma whose vanishing nonzero weights of q + V span gamma-perp.

    Hyperplanes are found from (r-1)-subsets of the distinct nonzero weights,
    deduplicated by canonical normal, then both orientations are verified
    against the full vanishing set.

    Args:
        setup: Group setup
        threads: Worker count for the subset scan

    Returns:
        Admissible elements, H before -H, in a deterministic order
    """
    datum = setup.datum
    r = datum.rank
    weights = [w for w, _ in ambient_weights(setup).nonzero().items()]
    if r == 0 or not weights:
        logger.info(f"No nonzero weights in q + V for {setup!r}; no admissible elements")
        return []

    subsets = list(combinations(weights, r - 1))
    logger.debug(f"Scanning {len(subsets)} weight subsets of size {r - 1}")
    if threads > 1 and len(subsets) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            lines = list(pool.map(lambda sub: _normal_line(datum, sub), subsets))
    else:
        lines = [_normal_line(datum, sub) for sub in subsets]

    result: Dict[RationalVector, AdmissibleElement] = {}
    for line in sorted({line for line in lines if line is not None}):
        for gamma in (line, -line):
            element = _certify(setup, gamma)
            if element is not None:
                result[gamma] = element
    ordered = sorted(result.values(), key=lambda e: tuple(-c for c in e.gamma.coords))
    logger.info(f"Found {len(ordered)} admissible elements for {setup!r}")
    return ordered


def is_admissible(setup: GroupSetup, gamma: RationalVector) -> Tuple[bool, Optional[AdmissibleElement]]:
    """
    Decide admissibility of a single gamma.

    Returns:
        (verdict, certificate) with the certificate for the primitive form of gamma

    Raises:
        DomainError: If gamma is zero or not an element of t
    """
    if gamma.frame != FRAME_T:
        raise DomainError("gamma must be an element of t")
    setup.datum.validate(gamma)
    if gamma.is_zero():
        raise DomainError("gamma = 0 is never admissible")
    if ambient_weights(setup).nonzero().is_empty():
        return False, None
    element = _certify(setup, gamma.primitive())
    return element is not None, element


def torus_level_proper(setup: GroupSetup) -> Optional[RationalVector]:
    """
    Exact check that 0 is not in the convex hull of the weights of V.

    Returns:
        A separating gamma with <lambda, gamma> > 0 for every weight, or None
    """
    if setup.v_module is None:
        return None
    datum = setup.datum
    weights = [w for w, _ in setup.v_module.items()]
    if any(w.is_zero() for w in weights):
        return None
    a_ub = -np.array([[float(c) for c in w.coords] for w in weights])
    b_ub = -np.ones(len(weights))
    eq = trace_rows(datum)
    result = linprog(
        c=np.zeros(datum.ambient_dim),
        A_ub=a_ub,
        b_ub=b_ub,
        A_eq=np.array([[float(c) for c in row] for row in eq]) if eq else None,
        b_eq=np.zeros(len(eq)) if eq else None,
        bounds=[(None, None)] * datum.ambient_dim,
        method='highs',
    )
    if not result.success:
        return None
    gamma = [Fraction(x).limit_denominator(10 ** 6) for x in result.x]
    # project back onto the trace-zero slice exactly
    for f in datum.factors:
        if f.kind == 'su':
            mean = sum(gamma[k] for k in f.coordinates) / f.size
            for k in f.coordinates:
                gamma[k] -= mean
    candidate = RationalVector(gamma, FRAME_T)
    if all(w.pair(candidate) > 0 for w in weights):
        return candidate
    return None


def _center_rank(datum: RootDatum, weights: Sequence[RationalVector]) -> Tuple[int, int]:
    """(rank of the weights restricted to the centre, dimension of the centre)."""
    columns = []
    for f in datum.factors:
        if f.kind == 'u':
            columns.append([1 if k in f.coordinates else 0 for k in range(datum.ambient_dim)])
        elif f.kind == 'torus':
            for k in f.coordinates:
                columns.append([1 if j == k else 0 for j in range(datum.ambient_dim)])
    if not columns or not weights:
        return 0, len(columns)
    matrix = sympy.Matrix([list(w.coords) for w in weights]) * sympy.Matrix(columns).T
    return matrix.rank(), len(columns)


def check_standing_hypothesis(setup: GroupSetup, seed: int = 0) -> str:
    """
    Check that no nonzero ideal of k is an ideal of k~ acting trivially, and properness of V.

    Returns:
        The properness level used ('no V', 'torus-level (exact)' or 'numerical evidence')

    Raises:
        HypothesisRefusal: With the reason the setup is not supported
    """
    # imported here: the oracle package depends on this module
    from src.oracle.moment import generic_stabilizer_dim, numerical_properness

    datum = setup.datum
    has_u = any(f.kind == 'u' for f in datum.factors)
    weights = [w for w, _ in setup.v_module.items()] if setup.has_v else []

    if setup.copies >= 2:
        if datum.has_center:
            rank, dim = _center_rank(datum, weights)
            if rank < dim:
                reason = U_REFUSAL if has_u else (
                    "torus factor diagonal: the centre acts with a nontrivial generic stabilizer on V"
                )
                logger.warning(f"Refusing {setup!r}: {reason}")
                raise HypothesisRefusal(reason)
    else:
        if not setup.has_v:
            raise HypothesisRefusal("s = 1 without V: k itself is a shared ideal with trivial action")
        if datum.root_factors:
            if setup.rep_matrices is None:
                raise HypothesisRefusal(
                    "s = 1: the generic stabilizer of k on V needs representation matrices "
                    "(give V as named representations or V_MATRICES)"
                )
            stabilizer = generic_stabilizer_dim(setup, seed=seed)
            if stabilizer > 0:
                raise HypothesisRefusal(f"s = 1: generic stabilizer of k on V has dimension {stabilizer}")
        elif restricted_rank(datum, weights) < datum.rank:
            raise HypothesisRefusal("s = 1: the torus acts on V with a nontrivial generic stabilizer")

    if not setup.has_v:
        return PROPER_NONE
    if torus_level_proper(setup) is not None:
        return PROPER_TORUS
    if setup.rep_matrices is None:
        raise HypothesisRefusal(
            "V is not proper at torus level (0 in the convex hull of its weights); "
            "representation matrices are needed for the numerical check"
        )
    minimum = numerical_properness(setup, seed=seed)
    if minimum <= PROPER_PROBE_MIN:
        raise HypothesisRefusal(
            f"V is not proper: |Phi_V| vanishes numerically on the unit sphere (min {minimum:.2e})"
        )
    logger.warning(f"Properness of V for {setup!r} rests on numerical evidence (min {minimum:.3e})")
    return PROPER_NUMERICAL
