"""Norm-square gradient flow on V, Kempf-Ness line integrals and the gamma-limit check."""

import logging
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from scipy.integrate import quad
from scipy.linalg import expm
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt

from src.config import FLOW_MAX_HALVINGS, FLOW_MAX_STEPS, FLOW_TOL, SEMISTABLE_TOL
from src.errors import ConfigurationError
from src.models import AdmissibleElement, FlowState, GroupSetup
from src.oracle.moment import element_coordinates, moment_map_v, random_vector, rho_of

logger = logging.getLogger(__name__)

ARMIJO = 1e-4
GROWTH = 1.5
MAX_STEP = 10.0
MONOTONE_TOL = 1e-9


class StepRejected(Exception):
    """A trial step did not decrease 1/2 |Phi|^2 enough."""


def _objective(setup: GroupSetup, x: np.ndarray):
    phi = moment_map_v(setup, x)
    kappa = rho_of(setup, phi) @ x
    return phi, kappa, 0.5 * float(phi @ phi)


def gradient_flow(
    setup: GroupSetup,
    v0: np.ndarray,
    tolerance: float = FLOW_TOL,
    max_steps: int = FLOW_MAX_STEPS,
    initial_step: float = 0.1,
) -> FlowState:
    """
    Integrate x' = -i rho(Phi(x)) x, the downward gradient flow of 1/2 |Phi|^2.

    Explicit Euler steps with Armijo backtracking: a rejected step halves h
    and is retried up to FLOW_MAX_HALVINGS times; accepted steps grow h.

    Args:
        setup: Setup carrying representation matrices
        v0: Starting point in V
        tolerance: Stop once |kappa| = |rho(Phi(x)) x| is below this
        max_steps: Accepted step budget
        initial_step: First step size

    Returns:
        FlowState; converged is False when the budget ran out or backtracking stalled
    """
    x = np.asarray(v0, dtype=complex).copy()
    phi, kappa, f = _objective(setup, x)
    history = [f]
    h = initial_step
    time = 0.0
    steps = 0
    converged = False

    while True:
        k2 = float(np.real(np.vdot(kappa, kappa)))
        if np.sqrt(k2) <= tolerance:
            converged = True
            break
        if steps >= max_steps:
            logger.warning(f"Gradient flow hit the step budget ({max_steps}) with |kappa|={np.sqrt(k2):.3e}")
            break

        def attempt():
            nonlocal h
            candidate = x - 1j * h * kappa
            phi_c, kappa_c, f_c = _objective(setup, candidate)
            if not f_c <= f - ARMIJO * h * k2:
                h *= 0.5
                raise StepRejected()
            return candidate, phi_c, kappa_c, f_c

        retrying = Retrying(
            stop=stop_after_attempt(FLOW_MAX_HALVINGS),
            retry=retry_if_exception_type(StepRejected),
            reraise=True,
        )
        try:
            x, phi, kappa, f = retrying(attempt)
        except StepRejected:
            logger.warning(f"Gradient flow stalled after {steps} steps (f={f:.3e})")
            break
        time += h
        steps += 1
        history.append(f)
        h = min(h * GROWTH, MAX_STEP)

    return FlowState(x, time, phi, converged, steps, history)


def kempf_ness_along_ray(
    setup: GroupSetup,
    x: np.ndarray,
    direction: Sequence[float],
    horizon: float,
    samples: int = 51,
) -> Dict[str, Any]:
    """
    Sample Psi_x(exp(-itX)) = int_0^t <Phi(exp(isX) x), X> ds on [0, horizon].

    The integrand is non-decreasing in s; a decrease beyond rounding raises.

    Args:
        setup: Setup carrying representation matrices
        x: Point of V
        direction: X as coordinates in the orthonormal basis of k
        horizon: Final time T
        samples: Number of grid points in [0, T]

    Returns:
        {'times', 'values', 'integrand', 'bounded_below'}
    """
    coef = np.asarray(direction, dtype=float)
    x = np.asarray(x, dtype=complex)
    generator = 1j * rho_of(setup, coef)

    def integrand(s: float) -> float:
        y = expm(s * generator) @ x
        return float(moment_map_v(setup, y) @ coef)

    times = np.linspace(0.0, float(horizon), samples)
    g = np.array([integrand(t) for t in times])
    scale = max(1.0, float(np.max(np.abs(g))))
    if np.any(np.diff(g) < -MONOTONE_TOL * scale):
        raise RuntimeError("Kempf-Ness integrand decreased along the ray")

    values = [0.0]
    for a, b in zip(times, times[1:]):
        piece, _ = quad(integrand, a, b)
        values.append(values[-1] + piece)
    return {
        'times': times.tolist(),
        'values': values,
        'integrand': g.tolist(),
        'bounded_below': bool(g[-1] >= -SEMISTABLE_TOL * scale),
    }


def gamma_pairings(setup: GroupSetup, gamma: Sequence) -> np.ndarray:
    """
    <lambda_j, gamma> for the basis vectors of V.

    Raises:
        ConfigurationError: If rho(X_gamma) is not diagonal (V not given in a weight basis)
    """
    coef = element_coordinates(setup.datum, gamma)
    matrix = rho_of(setup, coef)
    off = matrix - np.diag(np.diag(matrix))
    if np.max(np.abs(off), initial=0.0) > 1e-12:
        raise ConfigurationError("the gamma-limit check needs V in a weight basis")
    return np.imag(np.diag(matrix))


def gamma_limit(setup: GroupSetup, x: np.ndarray, gamma: Sequence) -> Optional[np.ndarray]:
    """lim exp(-it gamma) x as t -> infinity, or None when it does not exist."""
    pairing = gamma_pairings(setup, gamma)
    x = np.asarray(x, dtype=complex)
    support = np.abs(x) > 0
    if np.any(support & (pairing > 0)):
        return None
    limit = x.copy()
    limit[pairing < 0] = 0.0
    return limit


def random_sparse_point(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Complex Gaussian point with each coordinate dropped with probability 1/2."""
    v = random_vector(dim, rng)
    v[rng.random(dim) < 0.5] = 0.0
    return v


def check_limit_proposition(
    setup: GroupSetup,
    admissible: Sequence[AdmissibleElement],
    samples: int,
    seed: int = 0,
    tol: float = SEMISTABLE_TOL,
    kempf_ness_horizon: Optional[float] = None,
    max_draws: Optional[int] = None,
    flow_max_steps: int = FLOW_MAX_STEPS,
) -> Dict[str, Any]:
    """
    Check <Phi(x_gamma), gamma> <= 0 for numerically semistable x whose gamma-limit exists.

    Semistability is numerical evidence: the gradient flow from x reaches
    |Phi| <= tol. Points are drawn until `samples` semistable points with at
    least one existing gamma-limit were checked, or the draw budget runs out;
    unstable draws and elements without a limit are counted.

    Args:
        setup: Setup carrying representation matrices in a weight basis
        admissible: Elements gamma to test
        samples: Number of semistable points with a gamma-limit to reach
        seed: Random seed
        tol: Semistability and margin tolerance
        kempf_ness_horizon: Also sample the Kempf-Ness function along -gamma up to this time
        max_draws: Draw budget (default 50 * samples)
        flow_max_steps: Step budget of each gradient flow

    Returns:
        Report with per-sample margins and PASS flag; the run fails when fewer
        than `samples` semistable points with a limit were checked
    """
    if setup.rep_matrices is None:
        raise ConfigurationError("the gamma-limit check needs representation matrices")
    dim = setup.rep_matrices[0].shape[0]
    budget = max_draws if max_draws is not None else 50 * samples
    rng = np.random.default_rng(seed)
    margins: List[Dict[str, Any]] = []
    semistable = 0
    with_limit = 0
    skipped_unstable = 0
    skipped_no_limit = 0
    rays_bounded = True
    draws = 0

    while with_limit < samples and draws < budget:
        draw = draws
        draws += 1
        x = random_sparse_point(dim, rng)
        if not np.any(x):
            skipped_unstable += 1
            continue
        state = gradient_flow(setup, x, max_steps=flow_max_steps)
        if not state.norm <= tol:
            skipped_unstable += 1
            continue
        semistable += 1
        before = len(margins)
        for element in admissible:
            gamma = element.gamma.to_floats()
            limit = gamma_limit(setup, x, gamma)
            if limit is None:
                skipped_no_limit += 1
                continue
            coef = element_coordinates(setup.datum, gamma)
            scale = max(1.0, float(np.max(np.abs(gamma))))
            margin = float(moment_map_v(setup, limit) @ coef) / scale
            entry = {'draw': draw, 'gamma': element.gamma.to_dict(), 'margin': margin}
            if kempf_ness_horizon is not None:
                ray = kempf_ness_along_ray(setup, x, -coef, kempf_ness_horizon)
                entry['kempfNessBoundedBelow'] = ray['bounded_below']
                rays_bounded = rays_bounded and ray['bounded_below']
            margins.append(entry)
        if len(margins) > before:
            with_limit += 1

    if with_limit < samples:
        logger.error(f"Limit check reached {with_limit}/{samples} semistable points with a limit in {draws} draws")
    worst = max((m['margin'] for m in margins), default=0.0)
    passed = worst <= tol and rays_bounded and with_limit >= samples
    logger.info(
        f"Limit check: {semistable} semistable of {draws} draws, {len(margins)} margins, worst {worst:.3e}, "
        f"{skipped_no_limit} without limit -> {'PASS' if passed else 'FAIL'}"
    )
    return {
        'samples': samples,
        'seed': seed,
        'draws': draws,
        'semistable': semistable,
        'semistableWithLimit': with_limit,
        'checked': len(margins),
        'skippedUnstable': skipped_unstable,
        'skippedNoLimit': skipped_no_limit,
        'maxMargin': worst,
        'margins': margins,
        'pass': passed,
        'evidence': 'numerical',
    }
