"""
Orthonormal bases of k, representation matrices and the moment map of V.

k is realized inside block-diagonal skew-Hermitian matrices; its basis is
X_a = i H_a with H_a Hermitian and orthonormal for tr(H_a H_b). An element
of k* is recorded by its coordinates phi_a = <Phi, X_a>, equivalently by the
Hermitian matrix sum_a phi_a H_a.
"""

import logging
import re
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize

from src.errors import ConfigurationError
from src.models import FRAME_DUAL, GroupSetup, RationalVector, RootDatum, WeightedModule

logger = logging.getLogger(__name__)

_REP = re.compile(r'^(standard|dual|trivial|character)\s*(?:[:(]\s*([^)]*?)\s*\)?)?\s*(?:@\s*(\d+))?$')


def k_basis(datum: RootDatum) -> List[np.ndarray]:
    """Hermitian matrices H_a with X_a = i H_a an orthonormal basis of k."""
    size = datum.ambient_dim
    basis = []
    for f in datum.factors:
        o = f.offset
        if f.kind == 'torus':
            for k in f.coordinates:
                h = np.zeros((size, size), dtype=complex)
                h[k, k] = 1.0
                basis.append(h)
            continue
        n = f.size
        for j in range(n):
            for k in range(j + 1, n):
                sym = np.zeros((size, size), dtype=complex)
                sym[o + j, o + k] = sym[o + k, o + j] = 1.0 / np.sqrt(2.0)
                basis.append(sym)
                anti = np.zeros((size, size), dtype=complex)
                anti[o + j, o + k] = -1j / np.sqrt(2.0)
                anti[o + k, o + j] = 1j / np.sqrt(2.0)
                basis.append(anti)
        for m in range(1, n):
            h = np.zeros((size, size), dtype=complex)
            for j in range(m):
                h[o + j, o + j] = 1.0
            h[o + m, o + m] = -float(m)
            basis.append(h / np.sqrt(m * (m + 1)))
        if f.kind == 'u':
            h = np.zeros((size, size), dtype=complex)
            for k in f.coordinates:
                h[k, k] = 1.0
            basis.append(h / np.sqrt(n))
    return basis


def element_coordinates(datum: RootDatum, gamma: Sequence) -> np.ndarray:
    """Coordinates c_a of X_gamma = i diag(gamma) in the basis X_a."""
    diag = np.diag(np.array([float(c) for c in gamma], dtype=complex))
    return np.array([np.real(np.trace(h @ diag)) for h in k_basis(datum)])


def hermitian_of(datum: RootDatum, phi: np.ndarray) -> np.ndarray:
    """Hermitian matrix sum_a phi_a H_a of an element of k*."""
    basis = k_basis(datum)
    out = np.zeros_like(basis[0])
    for coef, h in zip(phi, basis):
        out = out + coef * h
    return out


def parse_rep_name(name: str) -> Tuple[str, Optional[str], int]:
    """Split "standard@1", "dual", "character:1,-1@2" into (kind, argument, factor)."""
    match = _REP.match(name.strip().lower())
    if not match:
        raise ConfigurationError(f"unknown representation {name!r}")
    return match.group(1), match.group(2), int(match.group(3) or 0)


def build_representation(datum: RootDatum, names: Sequence[str]) -> Tuple[WeightedModule, List[np.ndarray]]:
    """
    Direct sum of named representations, in a weight basis.

    Args:
        datum: Root datum of K
        names: "standard", "dual", "trivial" (optionally "@factor") or
            "character:<coords>@factor" for torus factors

    Returns:
        (weights of V, skew-Hermitian rho(X_a) for every basis element of k)

    Raises:
        ConfigurationError: For unknown names or factors
    """
    basis = k_basis(datum)
    weights: List[RationalVector] = []
    blocks: List[List[np.ndarray]] = []
    for name in names:
        kind, arg, index = parse_rep_name(name)
        if index >= len(datum.factors):
            raise ConfigurationError(f"{name!r}: factor {index} does not exist in {datum.description}")
        f = datum.factors[index]
        coords = list(f.coordinates)
        if kind in ('standard', 'dual'):
            if f.kind == 'torus':
                raise ConfigurationError(f"{name!r}: use character:<weights> for torus factors")
            sign = 1 if kind == 'standard' else -1
            for j in range(f.size):
                w = [0] * datum.ambient_dim
                w[f.offset + j] = 1
                vec = RationalVector(w, FRAME_DUAL)
                if f.kind == 'su':
                    shift = [0] * datum.ambient_dim
                    for k in coords:
                        shift[k] = 1
                    vec = vec - RationalVector(shift, FRAME_DUAL).scale(f"1/{f.size}")
                weights.append(vec.scale(sign))
            mats = []
            for h in basis:
                x = 1j * h[np.ix_(coords, coords)]
                mats.append(x if kind == 'standard' else np.conj(x))
            blocks.append(mats)
        elif kind == 'trivial':
            weights.append(RationalVector([0] * datum.ambient_dim, FRAME_DUAL))
            blocks.append([np.zeros((1, 1), dtype=complex) for _ in basis])
        else:
            if f.kind != 'torus':
                raise ConfigurationError(f"{name!r}: characters are only supported on torus factors")
            if not arg:
                raise ConfigurationError(f"{name!r}: character needs weights, e.g. character:1,0")
            values = [c.strip() for c in arg.split(',')]
            if len(values) != f.size:
                raise ConfigurationError(f"{name!r}: expected {f.size} character weights")
            w = [0] * datum.ambient_dim
            for k, c in zip(coords, values):
                w[k] = c
            vec = RationalVector(w, FRAME_DUAL)
            weights.append(vec)
            floats = np.array([float(c) for c in vec.coords])
            blocks.append([np.array([[1j * float(np.real(np.diag(h)) @ floats)]]) for h in basis])
    matrices = []
    for a in range(len(basis)):
        parts = [block[a] for block in blocks]
        size = sum(p.shape[0] for p in parts)
        m = np.zeros((size, size), dtype=complex)
        start = 0
        for p in parts:
            m[start:start + p.shape[0], start:start + p.shape[0]] = p
            start += p.shape[0]
        matrices.append(m)
    return WeightedModule.from_list(weights), matrices


def _require_matrices(setup: GroupSetup) -> List[np.ndarray]:
    if setup.rep_matrices is None:
        raise ConfigurationError("representation matrices of V are required for the moment map")
    return setup.rep_matrices


def shift_coordinates(setup: GroupSetup) -> np.ndarray:
    basis = k_basis(setup.datum)
    if setup.moment_shift is None:
        return np.zeros(len(basis))
    return element_coordinates(setup.datum, setup.moment_shift.coords)


def moment_map_v(setup: GroupSetup, v: np.ndarray, include_shift: bool = True) -> np.ndarray:
    """
    Coordinates of Phi_V(v) (+ the central shift): phi_a = -1/2 Im(v^H rho(X_a) v).

    Raises:
        ConfigurationError: If the setup carries no representation matrices
    """
    matrices = _require_matrices(setup)
    v = np.asarray(v, dtype=complex)
    phi = np.array([-0.5 * np.imag(np.vdot(v, m @ v)) for m in matrices])
    if include_shift:
        phi = phi + shift_coordinates(setup)
    return phi


def rho_of(setup: GroupSetup, coefficients: np.ndarray) -> np.ndarray:
    """rho(sum_a c_a X_a)."""
    matrices = _require_matrices(setup)
    out = np.zeros_like(matrices[0])
    for c, m in zip(coefficients, matrices):
        out = out + c * m
    return out


def random_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    return (rng.standard_normal(dim) + 1j * rng.standard_normal(dim)) / np.sqrt(2.0)


def generic_stabilizer_dim(setup: GroupSetup, seed: int = 0) -> int:
    """dim k - rank of X -> rho(X) v at a random v."""
    matrices = _require_matrices(setup)
    rng = np.random.default_rng(seed)
    v = random_vector(matrices[0].shape[0], rng)
    columns = np.array([m @ v for m in matrices]).T
    real = np.vstack([columns.real, columns.imag])
    rank = np.linalg.matrix_rank(real, tol=1e-8 * max(1.0, float(np.abs(real).max())))
    return len(matrices) - int(rank)


def numerical_properness(setup: GroupSetup, seed: int = 0, starts: int = 8) -> float:
    """Minimum of |Phi_V(v)|^2 over the unit sphere of V, by local searches from random starts."""
    matrices = _require_matrices(setup)
    dim = matrices[0].shape[0]
    rng = np.random.default_rng(seed)

    def objective(x):
        v = x[:dim] + 1j * x[dim:]
        norm = np.linalg.norm(v)
        if norm == 0.0:
            return 1.0
        phi = moment_map_v(setup, v / norm, include_shift=False)
        return float(phi @ phi)

    best = np.inf
    for _ in range(starts):
        x0 = rng.standard_normal(2 * dim)
        result = minimize(objective, x0, method='BFGS')
        best = min(best, float(result.fun))
    logger.debug(f"Properness probe for {setup!r}: min |Phi_V|^2 = {best:.3e}")
    return best
