"""Floating point states produced by the numerical oracles."""

from typing import List, Optional, Sequence

import numpy as np


class SpectraSample:
    """One draw of the coadjoint orbit projection: input spectra and the dominant output."""

    def __init__(
        self,
        spectra: Sequence[Sequence[float]],
        xi: Sequence[float],
        seed: int,
        draw: int,
        v_point: Optional[np.ndarray] = None,
    ):
        """
        Initialize a SpectraSample instance.

        Args:
            spectra: Weakly decreasing spectra xi_1..xi_s of the copies of K
            xi: Dominant representative attached to the diagonal factor
            seed: Root seed of the run
            draw: Draw index inside the run
            v_point: Point of V used for the sample (optional)
        """
        self.spectra: List[np.ndarray] = [np.asarray(x, dtype=float) for x in spectra]
        self.xi = np.asarray(xi, dtype=float)
        for spectrum in self.spectra:
            if spectrum.shape != self.xi.shape:
                raise ValueError("all spectra must have the length of xi")
        self.seed = seed
        self.draw = draw
        self.v_point = v_point

    @property
    def scale(self) -> float:
        """max |entry| over the input spectra (and the output when V contributes)."""
        values = [np.max(np.abs(x)) for x in self.spectra if x.size]
        if self.v_point is not None and self.xi.size:
            values.append(float(np.max(np.abs(self.xi))))
        return float(max(values)) if values else 0.0

    def __repr__(self):
        return f"SpectraSample(draw={self.draw}, xi={np.round(self.xi, 6).tolist()})"

    def to_dict(self):
        """Convert sample to dictionary representation."""
        return {
            'seed': self.seed,
            'draw': self.draw,
            'spectra': [x.tolist() for x in self.spectra],
            'xi': self.xi.tolist(),
        }


class FlowState:
    """Point reached by the norm-square gradient flow."""

    def __init__(
        self,
        point: np.ndarray,
        time: float,
        phi: np.ndarray,
        converged: bool,
        steps: int,
        f_history: Optional[List[float]] = None,
    ):
        """
        Initialize a FlowState instance.

        Args:
            point: Current point of V (complex coordinates)
            time: Integrated flow time
            phi: Moment map value in the orthonormal basis of k
            converged: Whether the stop tolerance was reached
            steps: Number of accepted steps
            f_history: Values of 1/2 |Phi|^2 at each accepted step
        """
        self.point = np.asarray(point, dtype=complex)
        self.time = float(time)
        self.phi = np.asarray(phi, dtype=float)
        self.converged = bool(converged)
        self.steps = int(steps)
        self.f_history: List[float] = list(f_history or [])

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.phi))

    @property
    def monotone(self) -> bool:
        """f never increased between accepted steps."""
        return all(b <= a for a, b in zip(self.f_history, self.f_history[1:]))

    def __repr__(self):
        return f"FlowState(norm={self.norm:.3e}, steps={self.steps}, converged={self.converged})"

    def to_dict(self):
        """Convert state to dictionary representation."""
        return {
            'time': self.time,
            'norm': self.norm,
            'converged': self.converged,
            'steps': self.steps,
            'phi': self.phi.tolist(),
        }
