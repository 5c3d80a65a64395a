"""
Ressayre pairs (gamma, w~) and the generated inequalities of the Kirwan polyhedron.

A candidate pair passes when the dimension identity holds, the two weighted
root sums agree and the Schubert product [X_gamma] . prod sigma(w_i) . Eul(V^{gamma>0})
is n[pt] with n = 1 (ressayre mode) or n >= 1 (infinitesimal mode). Each passing
pair gives <xi~, w~gamma> + <xi, gamma> >= 0.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from itertools import product
from typing import List, Sequence, Tuple

import numpy as np
from scipy.optimize import linprog

from src.admissible import check_standing_hypothesis, enumerate_admissible
from src.config import SCHEMA_VERSION
from src.errors import ConfigurationError, DomainError
from src.models import (
    AdmissibleElement,
    GroupSetup,
    Inequality,
    MembershipResult,
    PolytopeDescription,
    RationalVector,
    RessayrePairRecord,
    WeylElement,
)
from src.models.polytope import MODE_RESSAYRE, MODES
from src.models.vector import to_fraction
from src.root_system import (
    count_roots_positive,
    graded_pieces,
    minimal_coset_reps,
    rho_gamma_c,
    trace_gamma_positive,
)
from src.schubert import build_flag, class_of_x_gamma, euler_class, point_coefficient, pullback_diagonal

logger = logging.getLogger(__name__)

PRUNE_TOL = 1e-9


def _positive_part(setup: GroupSetup, gamma: RationalVector):
    if setup.v_module is None:
        return None
    return graded_pieces(setup.v_module, gamma).positive


def condition_a(setup: GroupSetup, gamma: RationalVector, w_tilde: Sequence[WeylElement]) -> Tuple[bool, Tuple[int, int, int]]:
    """
    Dimension identity dim n~^{w~gamma>0} + dim n^{gamma>0} = dim k~^{w~gamma>0} (+ dim V^{gamma>0}).

    Returns:
        (verdict, (left copies term, left diagonal term, right side))
    """
    datum = setup.datum
    copies_term = sum(count_roots_positive(datum.positive_roots, w.apply(datum, gamma)) for w in w_tilde)
    diagonal_term = count_roots_positive(datum.positive_roots, gamma)
    right = len(w_tilde) * count_roots_positive(datum.all_roots, gamma)
    positive = _positive_part(setup, gamma)
    if positive is not None:
        right += positive.dim
    return copies_term + diagonal_term == right, (copies_term, diagonal_term, right)


def condition_trace(setup: GroupSetup, gamma: RationalVector, w_tilde: Sequence[WeylElement]) -> Tuple[bool, Fraction, Fraction]:
    """Weighted root sums over n^{gamma>0} and over the negative roots of K~ positive on w~gamma (+ Tr_gamma V^{gamma>0})."""
    datum = setup.datum
    lhs = sum((root.pair(gamma) for root in datum.positive_roots if root.pair(gamma) > 0), Fraction(0))
    rhs = Fraction(0)
    for w in w_tilde:
        image = w.apply(datum, gamma)
        for root in datum.positive_roots:
            value = -root.pair(image)
            if value > 0:
                rhs += value
    if setup.v_module is not None:
        rhs += trace_gamma_positive(setup.v_module, gamma)
    return lhs == rhs, lhs, rhs


def condition_schubert(setup: GroupSetup, gamma: RationalVector, w_tilde: Sequence[WeylElement]) -> int:
    """Point coefficient of [X_gamma] . prod_i sigma(w_i) . Eul(V^{gamma>0}) on F_gamma."""
    flag = build_flag(setup.datum, gamma)
    total = class_of_x_gamma(flag)
    if total.is_zero():
        return 0
    total = flag.cup(total, pullback_diagonal(flag, [flag.class_of_coset(w) for w in w_tilde]))
    positive = _positive_part(setup, gamma)
    if positive is not None and not total.is_zero():
        total = flag.cup(total, euler_class(flag, positive))
    return point_coefficient(flag, total)


def evaluate_candidate(setup: GroupSetup, element: AdmissibleElement, w_tilde: Sequence[WeylElement]) -> RessayrePairRecord:
    """All three certificates of one candidate pair."""
    gamma = element.gamma
    passed_a, dims = condition_a(setup, gamma, w_tilde)
    _, lhs, rhs = condition_trace(setup, gamma, w_tilde)
    n = condition_schubert(setup, gamma, w_tilde)
    record = RessayrePairRecord(
        element, w_tilde, dims, passed_a, lhs, rhs, n, rho=rho_gamma_c(setup.datum, gamma),
    )
    logger.debug(f"Candidate {record!r}: dims={dims}, trace={lhs}/{rhs}")
    return record


def _scaled(elements: Sequence[AdmissibleElement], factor: int) -> List[AdmissibleElement]:
    if factor == 1:
        return list(elements)
    if factor < 1:
        raise ConfigurationError("gamma_scale must be a positive integer")
    return [AdmissibleElement(e.gamma.scale(factor), e.certificate, e.span_rank) for e in elements]


def generate_inequalities(
    setup: GroupSetup,
    mode: str = MODE_RESSAYRE,
    threads: int = 1,
    prune_lp: bool = False,
    gamma_scale: int = 1,
    seed: int = 0,
) -> PolytopeDescription:
    """
    Enumerate admissible gamma x (W/W^gamma)^s and emit the passing pairs as inequalities.

    Args:
        setup: Group setup
        mode: 'ressayre' (n = 1) or 'infinitesimal' (n >= 1)
        threads: Worker count; the output does not depend on it
        prune_lp: Drop inequalities implied by the others (heuristic LP pass)
        gamma_scale: Evaluate q gamma instead of gamma (the output is unchanged)
        seed: Seed of the numerical hypothesis probes

    Returns:
        PolytopeDescription

    Raises:
        ConfigurationError: For an unknown mode
        HypothesisRefusal: If the setup violates the standing hypothesis
    """
    if mode not in MODES:
        raise ConfigurationError(f"mode must be one of {', '.join(MODES)}, got {mode!r}")
    properness = check_standing_hypothesis(setup, seed=seed)
    datum = setup.datum
    elements = _scaled(enumerate_admissible(setup, threads=threads), gamma_scale)

    candidates = [
        (element, w_tilde)
        for element in elements
        for w_tilde in product(minimal_coset_reps(datum, element.gamma), repeat=setup.copies)
    ]
    logger.info(f"Evaluating {len(candidates)} candidate pairs over {len(elements)} admissible elements")

    def run(candidate):
        return evaluate_candidate(setup, *candidate)

    if threads > 1 and len(candidates) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(run, candidates))
    else:
        records = [run(c) for c in candidates]

    passing = [r for r in records if r.passes(mode)]
    inequalities = [Inequality.from_record(datum, r) for r in passing]
    metadata = {
        'schema_version': SCHEMA_VERSION,
        'properness': properness,
        'has_v': setup.has_v,
        'admissible': len(elements),
        'candidates': len(candidates),
        'passing_pairs': len(passing),
        'pruned': False,
    }
    polytope = PolytopeDescription(datum, setup.copies, setup.fingerprint, mode, inequalities, metadata)
    logger.info(f"Generated {len(polytope.inequalities)} inequalities ({mode}) for {setup!r}")
    if prune_lp:
        polytope = prune_redundant(polytope)
    return polytope


def _exact_point(datum, values: Sequence) -> List:
    out = []
    for v in values:
        if isinstance(v, float):
            out.append(v)
        else:
            out.append(to_fraction(v))
    if len(out) != datum.ambient_dim:
        raise DomainError(f"expected {datum.ambient_dim} coordinates, got {len(out)}")
    return out


def check_membership(
    polytope: PolytopeDescription,
    xi_tilde: Sequence[Sequence],
    xi: Sequence,
    tol: float = 0.0,
) -> MembershipResult:
    """
    Evaluate every inequality at a point given in dominant coordinates.

    Rational input is evaluated exactly; float input against tol.

    Raises:
        DomainError: If a factor is not dominant, breaks a trace equality or has the wrong size
    """
    datum = polytope.datum
    if len(xi_tilde) != polytope.copies:
        raise DomainError(f"expected {polytope.copies} spectra for xi~, got {len(xi_tilde)}")
    factors = [_exact_point(datum, v) for v in xi_tilde] + [_exact_point(datum, xi)]
    for index, values in enumerate(factors):
        block = datum.first_non_dominant(values)
        if block is not None:
            raise DomainError(
                f"{polytope.factor_name(index)} is not dominant on {datum.root_factors[block]!r}"
            )
    for constraint in polytope.trace_equalities:
        if abs(constraint.evaluate(factors[constraint.factor])) > tol:
            raise DomainError(f"{polytope.factor_name(constraint.factor)} violates a trace equality")

    violated = []
    tight = []
    for ineq in polytope.inequalities:
        value = ineq.evaluate(factors[:-1], factors[-1])
        if value < -tol:
            violated.append((ineq, value))
        elif abs(value) <= tol:
            tight.append(ineq)
    return MembershipResult(not violated, violated, tight)


def _system(polytope: PolytopeDescription):
    """Rows (A_ub, A_eq) of the chamber and trace constraints on the stacked variables."""
    n = polytope.datum.ambient_dim
    nvar = n * (polytope.copies + 1)

    def row(factor: int, coeffs: RationalVector) -> np.ndarray:
        r = np.zeros(nvar)
        r[factor * n:(factor + 1) * n] = coeffs.to_floats()
        return r

    ub = [-row(c.factor, c.coeffs) for c in polytope.chamber_constraints]
    eq = [row(c.factor, c.coeffs) for c in polytope.trace_equalities]
    return nvar, ub, eq


def _inequality_row(polytope: PolytopeDescription, ineq: Inequality) -> np.ndarray:
    return np.concatenate([np.array(v.to_floats()) for v in ineq.xi_tilde] + [np.array(ineq.xi.to_floats())])


def prune_redundant(polytope: PolytopeDescription, tol: float = PRUNE_TOL) -> PolytopeDescription:
    """
    Drop inequalities implied by the remaining ones on the chamber (heuristic).

    An inequality is dropped when minimizing it over the box [-1, 1] subject
    to every other kept constraint cannot make it negative.
    """
    nvar, ub, eq = _system(polytope)
    kept = list(polytope.inequalities)
    for ineq in list(polytope.inequalities):
        others = [-_inequality_row(polytope, other) for other in kept if other is not ineq]
        rows = ub + others
        result = linprog(
            c=_inequality_row(polytope, ineq),
            A_ub=np.array(rows) if rows else None,
            b_ub=np.zeros(len(rows)) if rows else None,
            A_eq=np.array(eq) if eq else None,
            b_eq=np.zeros(len(eq)) if eq else None,
            bounds=[(-1.0, 1.0)] * nvar,
            method='highs',
        )
        if result.success and result.fun >= -tol:
            kept = [other for other in kept if other is not ineq]
            logger.debug(f"Pruned {ineq.render()}")
    logger.info(f"LP pruning kept {len(kept)} of {len(polytope.inequalities)} inequalities (heuristic)")
    return polytope.with_inequalities(kept, pruned=True, pruning='heuristic LP')
