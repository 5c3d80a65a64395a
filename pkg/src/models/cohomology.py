"""Integer cohomology classes in the Schubert basis of a flag variety."""

from typing import Dict, Hashable, List, Mapping, Tuple

from src.errors import FrameMismatchError
from src.models.root_datum import WeylElement


class CohomologyClass:
    """Finite integer combination of Schubert classes sigma_u, u in W^S."""

    def __init__(self, flag_key: Hashable, coefficients: Mapping[WeylElement, int]):
        """
        Initialize a CohomologyClass instance.

        Args:
            flag_key: Identity of the flag variety the class lives on
            coefficients: Map from minimal coset representative to coefficient
        """
        self.flag_key = flag_key
        self.coefficients: Dict[WeylElement, int] = {
            u: int(c) for u, c in coefficients.items() if int(c) != 0
        }

    def coefficient(self, u: WeylElement) -> int:
        return self.coefficients.get(u, 0)

    def terms(self) -> List[Tuple[WeylElement, int]]:
        """Nonzero terms ordered by (codimension, representative)."""
        return sorted(self.coefficients.items(), key=lambda kv: kv[0].sort_key())

    def degrees(self) -> List[int]:
        return sorted({u.length for u in self.coefficients})

    def homogeneous_part(self, degree: int) -> 'CohomologyClass':
        return CohomologyClass(
            self.flag_key, {u: c for u, c in self.coefficients.items() if u.length == degree}
        )

    def is_zero(self) -> bool:
        return not self.coefficients

    def _check(self, other: 'CohomologyClass') -> None:
        if self.flag_key != other.flag_key:
            raise FrameMismatchError("classes live on different flag varieties")

    def __add__(self, other: 'CohomologyClass') -> 'CohomologyClass':
        self._check(other)
        merged = dict(self.coefficients)
        for u, c in other.coefficients.items():
            merged[u] = merged.get(u, 0) + c
        return CohomologyClass(self.flag_key, merged)

    def scaled(self, factor: int) -> 'CohomologyClass':
        return CohomologyClass(self.flag_key, {u: factor * c for u, c in self.coefficients.items()})

    def __repr__(self):
        body = ' + '.join(f"{c}*s{u.perms}" for u, c in self.terms()) or '0'
        return f"CohomologyClass({body})"

    def __eq__(self, other):
        if not isinstance(other, CohomologyClass):
            return False
        return self.flag_key == other.flag_key and self.coefficients == other.coefficients

    def __hash__(self):
        return hash((self.flag_key, tuple(self.terms())))

    def to_dict(self):
        """Convert class to dictionary representation."""
        return {
            'terms': [
                {'schubert': u.to_dict()['one_line'], 'codim': u.length, 'coefficient': c}
                for u, c in self.terms()
            ],
        }
