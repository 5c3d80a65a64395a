"""Random points of the coadjoint orbit projection (and of V) for the diagonal embedding."""

import logging
from typing import List, Optional, Sequence

import numpy as np

from src.config import MAX_ORACLE_N
from src.errors import DomainError
from src.models import GroupSetup, RootDatum, SpectraSample
from src.oracle.linalg import haar_unitary, hermitian_spectrum
from src.oracle.moment import hermitian_of, moment_map_v, random_vector

logger = logging.getLogger(__name__)

DEGENERATE_PROBABILITY = 0.2
SPECTRUM_TOL = 1e-12


def draw_rng(seed: int, draw: int) -> np.random.Generator:
    """Independent stream per (seed, draw), whatever worker handles the draw."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(draw)]))


def _check_spectra(datum: RootDatum, spectra: Sequence[np.ndarray]) -> None:
    for f in datum.factors:
        if f.size > MAX_ORACLE_N and f.has_roots:
            raise DomainError(f"{f!r} exceeds the eigen oracle limit n <= {MAX_ORACLE_N}")
    for spectrum in spectra:
        if spectrum.shape != (datum.ambient_dim,):
            raise DomainError(f"spectra must have {datum.ambient_dim} entries")
        for f in datum.root_factors:
            block = spectrum[f.offset:f.offset + f.size]
            if np.any(np.diff(block) > SPECTRUM_TOL):
                raise DomainError(f"spectrum block of {f!r} is not weakly decreasing")
        for f in datum.factors:
            if f.kind == 'su' and abs(float(np.sum(spectrum[f.offset:f.offset + f.size]))) > SPECTRUM_TOL:
                raise DomainError(f"spectrum block of {f!r} must be trace-zero")


def diagonal_output(datum: RootDatum, hermitian: np.ndarray) -> np.ndarray:
    """Dominant spectrum of a block-diagonal Hermitian matrix, torus entries read off the diagonal."""
    out = np.real(np.diag(hermitian)).copy()
    for f in datum.root_factors:
        idx = slice(f.offset, f.offset + f.size)
        out[idx] = hermitian_spectrum(hermitian[idx, idx])
    return out


def sample_orbit_sum(
    datum: RootDatum,
    spectra: Sequence[Sequence[float]],
    rng: np.random.Generator,
    seed: int = 0,
    draw: int = 0,
    setup: Optional[GroupSetup] = None,
    v_point: Optional[np.ndarray] = None,
    unitaries: Optional[List[np.ndarray]] = None,
) -> SpectraSample:
    """
    Project a point of the product of coadjoint orbits to the diagonal factor.

    The output is the dominant representative of Phi_V(v) - sum_i U_i diag(xi_i) U_i^*,
    with U_i Haar-random per root block (or the given unitaries). The central
    moment shift is left out: it only enters the gradient flow and the limit check.

    Raises:
        DomainError: For malformed spectra or blocks larger than the oracle limit
    """
    arrays = [np.asarray(x, dtype=float) for x in spectra]
    _check_spectra(datum, arrays)
    size = datum.ambient_dim
    total = np.zeros((size, size), dtype=complex)
    for i, spectrum in enumerate(arrays):
        u = unitaries[i] if unitaries is not None else _block_unitary(datum, rng)
        total = total + u @ np.diag(spectrum) @ u.conj().T
    hermitian = -total
    if setup is not None and v_point is not None:
        hermitian = hermitian + hermitian_of(datum, moment_map_v(setup, v_point, include_shift=False))
    xi = diagonal_output(datum, (hermitian + hermitian.conj().T) / 2.0)
    return SpectraSample(arrays, xi, seed, draw, v_point=v_point)


def _block_unitary(datum: RootDatum, rng: np.random.Generator) -> np.ndarray:
    u = np.eye(datum.ambient_dim, dtype=complex)
    for f in datum.root_factors:
        idx = slice(f.offset, f.offset + f.size)
        u[idx, idx] = haar_unitary(f.size, rng)
    return u


def random_spectrum(datum: RootDatum, rng: np.random.Generator) -> np.ndarray:
    """Gaussian spectrum, occasionally degenerate, sorted per block and rescaled into (0.1, 1]."""
    x = rng.standard_normal(datum.ambient_dim)
    for f in datum.factors:
        idx = slice(f.offset, f.offset + f.size)
        block = x[idx]
        if f.has_roots and f.size > 1 and rng.random() < DEGENERATE_PROBABILITY:
            j = int(rng.integers(0, f.size - 1))
            block = np.sort(block)[::-1].copy()
            block[j + 1] = block[j]
        if f.kind == 'su':
            block = block - block.mean()
        if f.has_roots:
            block = np.sort(block)[::-1]
        x[idx] = block
    peak = float(np.max(np.abs(x)))
    if peak == 0.0:
        return x
    x = x * (rng.uniform(0.1, 1.0) / peak)
    # rescaling amplifies the centring residue; a constant shift keeps the order
    for f in datum.factors:
        if f.kind == 'su':
            idx = slice(f.offset, f.offset + f.size)
            x[idx] = x[idx] - x[idx].mean()
    return x


def sample_point(setup: GroupSetup, seed: int, draw: int) -> SpectraSample:
    """One Monte Carlo draw for a setup: s random spectra and, with V, a random point of V."""
    rng = draw_rng(seed, draw)
    datum = setup.datum
    spectra = [random_spectrum(datum, rng) for _ in range(setup.copies)]
    v_point = None
    if setup.has_v and setup.rep_matrices is not None:
        dim = setup.rep_matrices[0].shape[0]
        v_point = random_vector(dim, rng) * rng.uniform(0.0, 1.5)
    return sample_orbit_sum(datum, spectra, rng, seed=seed, draw=draw, setup=setup, v_point=v_point)
