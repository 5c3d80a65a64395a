"""Ressayre pair records, inequalities and the generated H-representation."""

from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from src.models.group_setup import AdmissibleElement
from src.models.root_datum import RootDatum, WeylElement
from src.models.vector import FRAME_T, RationalVector, fraction_str, primitive_integers

MODE_RESSAYRE = 'ressayre'
MODE_INFINITESIMAL = 'infinitesimal'
MODES = (MODE_RESSAYRE, MODE_INFINITESIMAL)

CLASS_FAILS = 'fails'
CLASS_INFINITESIMAL = 'infinitesimal'
CLASS_RESSAYRE = 'ressayre'


def one_line(w: WeylElement):
    """1-based one-line notation, flattened when K has a single root block."""
    rows = w.to_dict()['one_line']
    return rows[0] if len(rows) == 1 else rows


class RessayrePairRecord:
    """A candidate (gamma, w~) with its certificates."""

    def __init__(
        self,
        admissible: AdmissibleElement,
        w_tilde: Sequence[WeylElement],
        dims: Tuple[int, int, int],
        condition_a: bool,
        trace_lhs: Fraction,
        trace_rhs: Fraction,
        schubert_n: int,
        rho: Optional[RationalVector] = None,
    ):
        """
        Initialize a RessayrePairRecord instance.

        Args:
            admissible: The admissible element gamma
            w_tilde: One minimal coset representative per copy
            dims: (dim n~^{w~gamma>0}, dim n^{gamma>0}, dim k~^{w~gamma>0} [+ dim V^{gamma>0}])
            condition_a: Whether the dimension identity holds
            trace_lhs: Left side of the trace identity
            trace_rhs: Right side of the trace identity
            schubert_n: Point coefficient of the Schubert product
            rho: Weight of the line bundle attached to the pair
        """
        if not w_tilde:
            raise ValueError("w_tilde is required")
        self.admissible = admissible
        self.w_tilde: Tuple[WeylElement, ...] = tuple(w_tilde)
        self.dims = tuple(int(d) for d in dims)
        self.condition_a = bool(condition_a)
        self.trace_lhs = Fraction(trace_lhs)
        self.trace_rhs = Fraction(trace_rhs)
        self.schubert_n = int(schubert_n)
        self.rho = rho

    @property
    def gamma(self) -> RationalVector:
        return self.admissible.gamma

    @property
    def condition_trace(self) -> bool:
        return self.trace_lhs == self.trace_rhs

    @property
    def classification(self) -> str:
        if not (self.condition_a and self.condition_trace) or self.schubert_n < 1:
            return CLASS_FAILS
        if self.schubert_n == 1:
            return CLASS_RESSAYRE
        return CLASS_INFINITESIMAL

    def passes(self, mode: str) -> bool:
        """Whether the pair contributes an inequality in the given mode."""
        cls = self.classification
        if mode == MODE_RESSAYRE:
            return cls == CLASS_RESSAYRE
        return cls in (CLASS_RESSAYRE, CLASS_INFINITESIMAL)

    def certificates(self) -> Dict[str, Any]:
        return {
            'dimA': list(self.dims),
            'traceLHS': fraction_str(self.trace_lhs),
            'traceRHS': fraction_str(self.trace_rhs),
            'schubertN': self.schubert_n,
        }

    def __repr__(self):
        return (
            f"RessayrePairRecord(gamma={[str(c) for c in self.gamma.coords]}, "
            f"w={[w.perms for w in self.w_tilde]}, n={self.schubert_n}, {self.classification})"
        )

    def to_dict(self):
        """Convert record to dictionary representation."""
        data = {
            'gamma': self.gamma.to_dict(),
            'w': [one_line(w) for w in self.w_tilde],
            'certificates': self.certificates(),
            'classification': self.classification,
        }
        if self.rho is not None:
            data['rho'] = self.rho.to_dict()
        return data


class Inequality:
    """<xi~, w~gamma> + <xi, gamma> >= 0, primitive-normalized as a whole."""

    def __init__(
        self,
        xi_tilde: Sequence[RationalVector],
        xi: RationalVector,
        provenance: Optional[Sequence[RessayrePairRecord]] = None,
    ):
        """
        Initialize an Inequality instance.

        Args:
            xi_tilde: Coefficient vector for each copy of K
            xi: Coefficient vector for the diagonal K factor
            provenance: Records that produced this inequality
        """
        if not xi_tilde:
            raise ValueError("xi_tilde coefficients are required")
        flat = [c for v in xi_tilde for c in v.coords] + list(xi.coords)
        if all(c == 0 for c in flat):
            raise ValueError("inequality coefficients cannot all vanish")
        ints = primitive_integers(flat)
        n = len(xi)
        self.xi_tilde: Tuple[RationalVector, ...] = tuple(
            RationalVector(ints[i * n:(i + 1) * n], FRAME_T) for i in range(len(xi_tilde))
        )
        self.xi = RationalVector(ints[len(xi_tilde) * n:], FRAME_T)
        self.provenance: List[RessayrePairRecord] = list(provenance or [])

    @classmethod
    def from_record(cls, datum: RootDatum, record: RessayrePairRecord) -> 'Inequality':
        gamma = record.gamma
        return cls([w.apply(datum, gamma) for w in record.w_tilde], gamma, [record])

    @property
    def key(self) -> Tuple[Fraction, ...]:
        return tuple(c for v in self.xi_tilde for c in v.coords) + self.xi.coords

    def evaluate(self, xi_tilde: Sequence[Sequence], xi: Sequence):
        """Value of the left-hand side at a point (exact for rationals, float otherwise)."""
        total = 0
        for coeffs, values in zip(self.xi_tilde, xi_tilde):
            total += sum(c * v for c, v in zip(coeffs.coords, values))
        total += sum(c * v for c, v in zip(self.xi.coords, xi))
        return total

    def negated(self) -> 'Inequality':
        return Inequality([-v for v in self.xi_tilde], -self.xi, self.provenance)

    def render(self) -> str:
        def vec(v: RationalVector) -> str:
            return '(' + ','.join(str(c) for c in v.coords) + ')'
        parts = [f"<xi~{i + 1},{vec(v)}>" for i, v in enumerate(self.xi_tilde)]
        parts.append(f"<xi,{vec(self.xi)}>")
        return ' + '.join(parts) + ' >= 0'

    def __repr__(self):
        return f"Inequality({self.render()})"

    def __eq__(self, other):
        if not isinstance(other, Inequality):
            return False
        return self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def to_dict(self):
        """Convert inequality to dictionary representation."""
        data: Dict[str, Any] = {
            'coeffs': {
                'xi_tilde': [v.to_dict() for v in self.xi_tilde],
                'xi': self.xi.to_dict(),
            },
            'text': self.render(),
        }
        if self.provenance:
            first = self.provenance[0].to_dict()
            data['gamma'] = first['gamma']
            data['w'] = first['w']
            data['certificates'] = first['certificates']
            data['provenance'] = [r.to_dict() for r in self.provenance]
        return data


class LinearConstraint:
    """A chamber inequality (>= 0) or trace equality (== 0) on one factor."""

    CHAMBER = 'chamber'
    TRACE = 'trace'

    def __init__(self, kind: str, factor: int, coeffs: RationalVector):
        """
        Initialize a LinearConstraint instance.

        Args:
            kind: 'chamber' or 'trace'
            factor: 0..s-1 for the copies of K, s for the diagonal K factor
            coeffs: Coefficients on that factor's coordinates
        """
        if kind not in (self.CHAMBER, self.TRACE):
            raise ValueError(f"unknown constraint kind {kind!r}")
        self.kind = kind
        self.factor = factor
        self.coeffs = coeffs

    def evaluate(self, values: Sequence):
        return sum(c * v for c, v in zip(self.coeffs.coords, values))

    def __repr__(self):
        return f"LinearConstraint({self.kind}, factor={self.factor}, {self.coeffs.to_dict()})"

    def to_dict(self):
        return {'kind': self.kind, 'factor': self.factor, 'coeffs': self.coeffs.to_dict()}


class MembershipResult:
    """Verdict of a membership check."""

    def __init__(self, member: bool, violated: List[Tuple[Inequality, Any]], tight: List[Inequality]):
        self.member = member
        self.violated = violated
        self.tight = tight

    def __repr__(self):
        return f"MembershipResult(member={self.member}, violated={len(self.violated)}, tight={len(self.tight)})"

    def to_dict(self):
        return {
            'member': self.member,
            'violated': [
                {'inequality': ineq.render(), 'value': _scalar(value),
                 'provenance': [r.to_dict() for r in ineq.provenance]}
                for ineq, value in self.violated
            ],
            'tight': [ineq.render() for ineq in self.tight],
        }


def _scalar(value):
    if isinstance(value, Fraction):
        return fraction_str(value)
    if isinstance(value, int):
        return str(value)
    return float(value)


class PolytopeDescription:
    """The generated H-representation of a Kirwan polyhedron."""

    def __init__(
        self,
        datum: RootDatum,
        copies: int,
        fingerprint: str,
        mode: str,
        inequalities: Sequence[Inequality],
        metadata: Optional[Dict[str, Any]] = None,
    ):
        """
        Initialize a PolytopeDescription instance.

        Args:
            datum: Root datum of K
            copies: s, number of copies in K~
            fingerprint: Fingerprint of the generating GroupSetup
            mode: 'ressayre' or 'infinitesimal'
            inequalities: Emitted inequalities (duplicates merged here)
            metadata: Extra information recorded in the output
        """
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
        if not fingerprint:
            raise ValueError("fingerprint is required")
        merged: Dict[Tuple, Inequality] = {}
        for ineq in inequalities:
            if ineq.key in merged:
                merged[ineq.key].provenance.extend(ineq.provenance)
            else:
                merged[ineq.key] = Inequality(ineq.xi_tilde, ineq.xi, ineq.provenance)
        self.datum = datum
        self.copies = int(copies)
        self.fingerprint = fingerprint
        self.mode = mode
        self.inequalities: List[Inequality] = [merged[k] for k in sorted(merged)]
        self.metadata: Dict[str, Any] = dict(metadata or {})
        self.chamber_constraints = self._chamber()
        self.trace_equalities = self._traces()

    def _chamber(self) -> List[LinearConstraint]:
        constraints = []
        for factor in range(self.copies + 1):
            for f in self.datum.root_factors:
                for i in range(f.size - 1):
                    coeffs = [0] * self.datum.ambient_dim
                    coeffs[f.offset + i] = 1
                    coeffs[f.offset + i + 1] = -1
                    constraints.append(
                        LinearConstraint(LinearConstraint.CHAMBER, factor, RationalVector(coeffs, FRAME_T))
                    )
        return constraints

    def _traces(self) -> List[LinearConstraint]:
        constraints = []
        for factor in range(self.copies + 1):
            for f in self.datum.factors:
                if f.kind != 'su':
                    continue
                coeffs = [0] * self.datum.ambient_dim
                for k in f.coordinates:
                    coeffs[k] = 1
                constraints.append(
                    LinearConstraint(LinearConstraint.TRACE, factor, RationalVector(coeffs, FRAME_T))
                )
        return constraints

    def factor_name(self, factor: int) -> str:
        return 'xi' if factor == self.copies else f"xi~{factor + 1}"

    def with_inequalities(self, inequalities: Sequence[Inequality], **metadata) -> 'PolytopeDescription':
        meta = dict(self.metadata)
        meta.update(metadata)
        return PolytopeDescription(self.datum, self.copies, self.fingerprint, self.mode, inequalities, meta)

    def __repr__(self):
        return (
            f"PolytopeDescription({self.datum.description}, s={self.copies}, mode={self.mode}, "
            f"inequalities={len(self.inequalities)})"
        )

    def to_dict(self):
        """Convert polytope to dictionary representation."""
        return {
            'fingerprint': self.fingerprint,
            'mode': self.mode,
            'group': self.datum.to_dict(),
            'copies': self.copies,
            'inequalities': [ineq.to_dict() for ineq in self.inequalities],
            'chamber_constraints': [c.to_dict() for c in self.chamber_constraints],
            'trace_equalities': [c.to_dict() for c in self.trace_equalities],
            'metadata': self.metadata,
        }
