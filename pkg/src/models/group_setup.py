"""Group setups K = diagonal in K~ = K^s, optionally times a K-module V."""

import hashlib
import json
from typing import List, Optional, Sequence

import numpy as np

from src.errors import ConfigurationError
from src.models.root_datum import RootDatum
from src.models.vector import FRAME_DUAL, FRAME_T, RationalVector
from src.models.weighted_module import WeightedModule


class GroupSetup:
    """K embedded diagonally in K^s, acting on T*K~ (and on V when present)."""

    def __init__(
        self,
        datum: RootDatum,
        copies: int,
        v_module: Optional[WeightedModule] = None,
        rep_matrices: Optional[Sequence[np.ndarray]] = None,
        moment_shift: Optional[RationalVector] = None,
        v_description: Optional[str] = None,
    ):
        """
        Initialize a GroupSetup instance.

        Args:
            datum: Root datum of K
            copies: s >= 1, number of factors of K~
            v_module: T-weights of V (optional)
            rep_matrices: Skew-Hermitian matrices rho(X_a) for the orthonormal
                basis X_a of k (optional, used by the numerical oracles)
            moment_shift: Central constant added to the moment map of V (optional)
            v_description: Human-readable origin of V (optional)
        """
        if datum is None:
            raise ConfigurationError("datum is required")
        if int(copies) < 1:
            raise ConfigurationError(f"copies must be at least 1, got {copies}")
        if v_module is not None and v_module.is_empty():
            v_module = None
        if v_module is not None:
            for weight in v_module.weights():
                datum.validate(weight)
        if moment_shift is not None:
            if moment_shift.frame != FRAME_DUAL:
                raise ConfigurationError("moment_shift must be a t* vector")
            datum.validate(moment_shift)
            self._check_central(datum, moment_shift)
            if moment_shift.is_zero():
                moment_shift = None
        if rep_matrices is not None:
            rep_matrices = [np.asarray(m, dtype=complex) for m in rep_matrices]
            size = v_module.dim if v_module is not None else None
            for m in rep_matrices:
                if m.ndim != 2 or m.shape[0] != m.shape[1]:
                    raise ConfigurationError("representation matrices must be square")
                if size is not None and m.shape[0] != size:
                    raise ConfigurationError(
                        f"representation matrices have size {m.shape[0]}, V has dimension {size}"
                    )
                if not np.allclose(m.conj().T, -m, atol=1e-12):
                    raise ConfigurationError("representation matrices must be skew-Hermitian")

        self.datum = datum
        self.copies = int(copies)
        self.v_module = v_module
        self.rep_matrices: Optional[List[np.ndarray]] = list(rep_matrices) if rep_matrices is not None else None
        self.moment_shift = moment_shift
        self.v_description = v_description

    @staticmethod
    def _check_central(datum: RootDatum, shift: RationalVector) -> None:
        for f in datum.factors:
            block = [shift[k] for k in f.coordinates]
            if f.kind == 'su' and any(c != 0 for c in block):
                raise ConfigurationError("moment_shift must vanish on su(n) factors")
            if f.kind == 'u' and len(set(block)) > 1:
                raise ConfigurationError("moment_shift must be central on u(n) factors")

    @property
    def has_v(self) -> bool:
        return self.v_module is not None

    def zero_weight(self) -> RationalVector:
        return RationalVector([0] * self.datum.ambient_dim, FRAME_DUAL)

    def zero_coweight(self) -> RationalVector:
        return RationalVector([0] * self.datum.ambient_dim, FRAME_T)

    def canonical(self) -> dict:
        """Canonical description of everything the generated inequalities depend on."""
        return {
            'datum': self.datum.to_dict(),
            'copies': self.copies,
            'V': self.v_module.to_dict() if self.v_module is not None else None,
            'moment_shift': self.moment_shift.to_dict() if self.moment_shift is not None else None,
        }

    @property
    def fingerprint(self) -> str:
        payload = json.dumps(self.canonical(), sort_keys=True, separators=(',', ':'))
        return hashlib.sha256(payload.encode('utf-8')).hexdigest()

    def __repr__(self):
        v = f", V dim={self.v_module.dim}" if self.v_module is not None else ""
        return f"GroupSetup({self.datum.description}, s={self.copies}{v})"

    def __eq__(self, other):
        if not isinstance(other, GroupSetup):
            return False
        return self.fingerprint == other.fingerprint

    def __hash__(self):
        return hash(self.fingerprint)

    def to_dict(self):
        """Convert setup to dictionary representation."""
        data = self.canonical()
        data['fingerprint'] = self.fingerprint
        data['has_matrices'] = self.rep_matrices is not None
        if self.v_description:
            data['V_description'] = self.v_description
        return data


class AdmissibleElement:
    """A primitive admissible gamma with the weights certifying it."""

    def __init__(self, gamma: RationalVector, certificate: WeightedModule, span_rank: int):
        """
        Initialize an AdmissibleElement instance.

        Args:
            gamma: Primitive integer element of t
            certificate: Nonzero weights of q + V vanishing on gamma
            span_rank: Rank of the certificate weights restricted to t
        """
        if gamma.frame != FRAME_T:
            raise ConfigurationError("gamma must be an element of t")
        for weight in certificate.weights():
            if weight.pair(gamma) != 0:
                raise ValueError(f"certificate weight {weight!r} does not vanish on gamma")
        self.gamma = gamma
        self.certificate = certificate
        self.span_rank = span_rank

    def __repr__(self):
        return f"AdmissibleElement(gamma={list(map(str, self.gamma.coords))}, span_rank={self.span_rank})"

    def __eq__(self, other):
        if not isinstance(other, AdmissibleElement):
            return False
        return self.gamma == other.gamma

    def __hash__(self):
        return hash(self.gamma)

    def to_dict(self):
        """Convert admissible element to dictionary representation."""
        return {
            'gamma': self.gamma.to_dict(),
            'span_rank': self.span_rank,
            'certificate': self.certificate.to_dict(),
        }
