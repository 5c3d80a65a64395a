"""Monte Carlo validation and facet tightness of a generated polytope."""

import logging
from concurrent.futures import ThreadPoolExecutor
from itertools import permutations, product
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from scipy.optimize import linprog, minimize
from scipy.linalg import expm

from src.config import MEMBERSHIP_TOL, TIGHTNESS_TOL
from src.errors import ConfigurationError, FingerprintMismatch
from src.models import GroupSetup, Inequality, PolytopeDescription, SpectraSample
from src.oracle.linalg import hermitian_spectrum
from src.oracle.sampling import draw_rng, sample_orbit_sum, sample_point

logger = logging.getLogger(__name__)

# Exhaustive LP search over permutation configurations stays below this many LPs
MAX_LP_CONFIGURATIONS = 5000


def _check_pair(polytope: PolytopeDescription, setup: GroupSetup) -> None:
    if polytope.fingerprint != setup.fingerprint:
        raise FingerprintMismatch(
            f"polytope was generated for {polytope.fingerprint[:12]}, setup is {setup.fingerprint[:12]}"
        )
    if setup.has_v and setup.rep_matrices is None:
        raise ConfigurationError("validating a polytope with V needs representation matrices")


def normalized_values(polytope: PolytopeDescription, sample: SpectraSample) -> Optional[List[float]]:
    """Inequality values divided by the sample scale (None for the zero sample)."""
    scale = sample.scale
    if scale == 0.0:
        return None
    return [float(ineq.evaluate(sample.spectra, sample.xi)) / scale for ineq in polytope.inequalities]


def monte_carlo_validate(
    polytope: PolytopeDescription,
    setup: GroupSetup,
    trials: int,
    seed: int,
    threads: int = 1,
    tol: float = MEMBERSHIP_TOL,
) -> Dict[str, Any]:
    """
    Draw random points of the projected orbits and evaluate every inequality.

    Args:
        polytope: Generated polytope
        setup: The setup it was generated for
        trials: Number of draws
        seed: Root seed; draw k uses the stream (seed, k)
        threads: Worker count (the report does not depend on it)
        tol: Violation threshold relative to the sample scale

    Returns:
        {trials, seed, maxViolation, perInequalityMinSlack, pass, violations, violationRate, nonFinite};
        draws with non-finite values count as violations and fail the run

    Raises:
        FingerprintMismatch: If the polytope belongs to another setup
    """
    _check_pair(polytope, setup)
    labels = [ineq.render() for ineq in polytope.inequalities]
    if trials == 0:
        logger.warning("Monte Carlo validation ran with 0 trials; the report is vacuous")
        return {
            'trials': 0, 'seed': seed, 'maxViolation': 0.0,
            'perInequalityMinSlack': {label: None for label in labels},
            'pass': True, 'violations': 0, 'violationRate': 0.0, 'nonFinite': 0,
        }

    def run(draw: int) -> Tuple[bool, Optional[List[float]]]:
        sample = sample_point(setup, seed, draw)
        return bool(np.all(np.isfinite(sample.xi))), normalized_values(polytope, sample)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(run, range(trials)))
    else:
        rows = [run(draw) for draw in range(trials)]

    min_slack = [np.inf] * len(labels)
    violations = 0
    non_finite = 0
    for finite, row in rows:
        if not finite or (row is not None and not all(np.isfinite(value) for value in row)):
            non_finite += 1
            violations += 1
            continue
        if row is None:
            continue
        if row and min(row) < -tol:
            violations += 1
        for i, value in enumerate(row):
            min_slack[i] = min(min_slack[i], value)
    finite = [v for v in min_slack if np.isfinite(v)]
    max_violation = max([0.0] + [-v for v in finite])
    passed = max_violation <= tol and non_finite == 0
    if non_finite:
        logger.error(f"Monte Carlo: {non_finite} draws gave non-finite values")
    logger.info(
        f"Monte Carlo: {trials} trials, max violation {max_violation:.3e}, "
        f"{violations} violating draws -> {'PASS' if passed else 'FAIL'}"
    )
    return {
        'trials': trials,
        'seed': seed,
        'maxViolation': max_violation,
        'perInequalityMinSlack': {
            label: (float(v) if np.isfinite(v) else None) for label, v in zip(labels, min_slack)
        },
        'pass': passed,
        'violations': violations,
        'violationRate': violations / trials,
        'nonFinite': non_finite,
    }


def membership_agreement(
    first: PolytopeDescription,
    second: PolytopeDescription,
    setup: GroupSetup,
    trials: int,
    seed: int,
    tol: float = MEMBERSHIP_TOL,
) -> Dict[str, Any]:
    """Compare the membership verdicts of two polytopes of one setup on the same draws."""
    _check_pair(first, setup)
    _check_pair(second, setup)
    disagreements = 0
    for draw in range(trials):
        sample = sample_point(setup, seed, draw)
        if not np.all(np.isfinite(sample.xi)):
            disagreements += 1
            continue
        a = normalized_values(first, sample)
        b = normalized_values(second, sample)
        if a is None:
            continue
        if (min(a, default=0.0) >= -tol) != (min(b, default=0.0) >= -tol):
            disagreements += 1
    return {'trials': trials, 'seed': seed, 'disagreements': disagreements, 'agree': disagreements == 0}


def _lp_search(polytope: PolytopeDescription, setup: GroupSetup, inequality: Inequality) -> Optional[Tuple[float, List[np.ndarray], np.ndarray]]:
    """
    Minimize the inequality over commuting (permutation) configurations.

    With U_i permutation matrices the projected sum is diagonal, so for a
    fixed configuration and output ordering every constraint is linear in
    the input spectra. Only used for one root block and no V.
    """
    datum = polytope.datum
    if len(datum.factors) != 1 or not datum.root_factors or setup.has_v:
        return None
    n = datum.ambient_dim
    s = polytope.copies
    perms = list(permutations(range(n)))
    configurations = len(perms) ** s
    if configurations > MAX_LP_CONFIGURATIONS:
        logger.debug(f"Skipping LP tightness search ({configurations} configurations)")
        return None
    traceless = datum.factors[0].kind == 'su'
    nvar = n * s
    cost_in = np.concatenate([np.array(c.to_floats()) for c in inequality.xi_tilde])
    cost_out = np.array(inequality.xi.to_floats())

    base_ub: List[np.ndarray] = []
    for i in range(s):
        for j in range(n - 1):
            row = np.zeros(nvar)
            row[i * n + j + 1] = 1.0
            row[i * n + j] = -1.0
            base_ub.append(row)
    base_eq: List[np.ndarray] = []
    if traceless:
        for i in range(s):
            row = np.zeros(nvar)
            row[i * n:(i + 1) * n] = 1.0
            base_eq.append(row)
    spread = np.zeros(nvar)
    for i in range(s):
        spread[i * n] += 1.0
        spread[i * n + n - 1] -= 1.0
    base_eq.append(spread)

    best = None
    for config in product(perms, repeat=s - 1):
        pis = [tuple(range(n))] + list(config)
        # out_k = -sum_i x_i[pi_i(k)] as a linear map of the variables
        out_map = np.zeros((n, nvar))
        for k in range(n):
            for i, pi in enumerate(pis):
                out_map[k, i * n + pi[k]] -= 1.0
        for order in perms:
            dominant_map = out_map[list(order), :]
            ub = list(base_ub)
            for j in range(n - 1):
                ub.append(dominant_map[j + 1] - dominant_map[j])
            cost = cost_in + cost_out @ dominant_map
            result = linprog(
                c=cost,
                A_ub=np.array(ub),
                b_ub=np.zeros(len(ub)),
                A_eq=np.array(base_eq),
                b_eq=np.array([0.0] * (len(base_eq) - 1) + [1.0]),
                bounds=[(-1.0, 1.0)] * nvar,
                method='highs',
            )
            if not result.success:
                continue
            x = result.x
            spectra = [x[i * n:(i + 1) * n] for i in range(s)]
            diag_sum = np.zeros(n)
            for spectrum, pi in zip(spectra, pis):
                for k in range(n):
                    diag_sum[k] += spectrum[pi[k]]
            # re-evaluate through the eigen oracle rather than trusting the LP objective
            xi = hermitian_spectrum(-np.diag(diag_sum).astype(complex))
            scale = float(np.max(np.abs(x)))
            if scale == 0.0:
                continue
            value = float(inequality.evaluate(spectra, xi)) / scale
            if best is None or value < best[0]:
                best = (value, spectra, xi)
    return best


def _refine(
    polytope: PolytopeDescription,
    setup: GroupSetup,
    inequality: Inequality,
    sample: SpectraSample,
    seed: int,
    max_iterations: int,
) -> float:
    """Nelder-Mead over Hermitian generators of the unitaries (and the V point), spectra fixed."""
    datum = setup.datum
    size = datum.ambient_dim
    s = setup.copies
    has_v = sample.v_point is not None
    vdim = sample.v_point.shape[0] if has_v else 0
    rng = draw_rng(seed, 0)
    base = [np.eye(size, dtype=complex) for _ in range(s)]
    block_mask = np.zeros((size, size), dtype=bool)
    for f in datum.root_factors:
        block_mask[f.offset:f.offset + f.size, f.offset:f.offset + f.size] = True
    iu = np.triu_indices(size)
    m = len(iu[0])
    per = 2 * m

    def unpack(params):
        unitaries = []
        for i in range(s):
            chunk = params[i * per:(i + 1) * per]
            h = np.zeros((size, size), dtype=complex)
            h[iu] = chunk[:m] + 1j * chunk[m:] * (iu[0] != iu[1])
            h = (h + h.conj().T) / 2.0
            h = np.where(block_mask, h, 0.0)
            unitaries.append(expm(1j * h) @ base[i])
        v = None
        if has_v:
            tail = params[s * per:]
            v = tail[:vdim] + 1j * tail[vdim:]
        return unitaries, v

    def objective(params):
        unitaries, v = unpack(params)
        candidate = sample_orbit_sum(
            datum, sample.spectra, rng, setup=setup, v_point=v, unitaries=unitaries,
        )
        scale = candidate.scale
        if scale == 0.0:
            return 0.0
        return float(inequality.evaluate(candidate.spectra, candidate.xi)) / scale

    start = rng.standard_normal(s * per) * 0.5
    if has_v:
        start = np.concatenate([start, sample.v_point.real, sample.v_point.imag])
    result = minimize(objective, start, method='Nelder-Mead', options={'maxiter': max_iterations, 'xatol': 1e-10, 'fatol': 1e-12})
    return float(result.fun)


def facet_tightness(
    polytope: PolytopeDescription,
    setup: GroupSetup,
    inequality: Inequality,
    trials: int,
    seed: int = 0,
    tol: float = TIGHTNESS_TOL,
    max_iterations: int = 2000,
) -> Dict[str, Any]:
    """
    Smallest normalized slack of one inequality found by sampling, LP search and refinement.

    The inequality is facet-confirmed when the slack drops to tol; a valid
    but non-facet inequality keeps its slack bounded away from zero.
    """
    _check_pair(polytope, setup)
    best_random = np.inf
    best_sample = None
    for draw in range(trials):
        sample = sample_point(setup, seed, draw)
        scale = sample.scale
        if scale == 0.0:
            continue
        value = float(inequality.evaluate(sample.spectra, sample.xi)) / scale
        if value < best_random:
            best_random, best_sample = value, sample

    lp = _lp_search(polytope, setup, inequality)
    lp_slack = lp[0] if lp is not None else None

    refined = None
    if best_sample is not None and max_iterations > 0:
        refined = _refine(polytope, setup, inequality, best_sample, seed, max_iterations)

    candidates = [v for v in (best_random, lp_slack, refined) if v is not None and np.isfinite(v)]
    min_slack = min(candidates) if candidates else None
    facet = min_slack is not None and min_slack <= tol
    logger.debug(f"Tightness of {inequality.render()}: {min_slack}")
    return {
        'inequality': inequality.render(),
        'randomMinSlack': float(best_random) if np.isfinite(best_random) else None,
        'lpMinSlack': lp_slack,
        'refinedMinSlack': refined,
        'minSlack': min_slack,
        'facet': facet,
    }


def facet_report(
    polytope: PolytopeDescription,
    setup: GroupSetup,
    trials: int,
    seed: int = 0,
    tol: float = TIGHTNESS_TOL,
    max_iterations: int = 2000,
) -> List[Dict[str, Any]]:
    """Tightness of every inequality of a polytope."""
    return [
        facet_tightness(polytope, setup, ineq, trials, seed=seed, tol=tol, max_iterations=max_iterations)
        for ineq in polytope.inequalities
    ]
