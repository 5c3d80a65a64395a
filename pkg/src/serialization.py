"""JSON reading and writing of polytopes, points and reports."""

import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Sequence, Tuple, Union

from src.errors import ConfigurationError, DomainError
from src.models import (
    FRAME_DUAL,
    FRAME_T,
    AdmissibleElement,
    Inequality,
    PolytopeDescription,
    RationalVector,
    RessayrePairRecord,
    WeightedModule,
    WeylElement,
)
from src.models.vector import to_fraction
from src.root_system import build_root_datum

logger = logging.getLogger(__name__)

Number = Union[Fraction, float]


def dumps(data: Any) -> str:
    """Stable JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(data, sort_keys=True, indent=2) + '\n'


def polytope_to_json(polytope: PolytopeDescription) -> str:
    return dumps(polytope.to_dict())


def _record_from_dict(datum, data: Dict[str, Any]) -> RessayrePairRecord:
    gamma = RationalVector(data['gamma'], FRAME_T)
    rows = data['w']
    if len(datum.root_factors) == 1:
        rows = [[row] for row in rows]
    else:
        rows = [list(row) for row in rows]
    w_tilde = [WeylElement.from_one_line(r) for r in rows]
    certificates = data['certificates']
    dims = tuple(certificates['dimA'])
    element = AdmissibleElement(gamma, WeightedModule(), datum.rank - 1)
    rho = RationalVector(data['rho'], FRAME_DUAL) if 'rho' in data else None
    return RessayrePairRecord(
        element, w_tilde, dims, dims[0] + dims[1] == dims[2],
        Fraction(certificates['traceLHS']), Fraction(certificates['traceRHS']),
        certificates['schubertN'], rho=rho,
    )


def polytope_from_dict(data: Dict[str, Any]) -> PolytopeDescription:
    """
    Rebuild a polytope (with provenance) from its JSON form.

    Raises:
        ConfigurationError: If required fields are missing or malformed
    """
    try:
        group = data['group']
        datum = build_root_datum(group['group'], group.get('form_scales'))
        inequalities = []
        for entry in data['inequalities']:
            coeffs = entry['coeffs']
            provenance = [_record_from_dict(datum, r) for r in entry.get('provenance', [])]
            inequalities.append(Inequality(
                [RationalVector(v, FRAME_T) for v in coeffs['xi_tilde']],
                RationalVector(coeffs['xi'], FRAME_T),
                provenance,
            ))
        return PolytopeDescription(
            datum, data['copies'], data['fingerprint'], data['mode'], inequalities, data.get('metadata'),
        )
    except (KeyError, TypeError, IndexError) as e:
        raise ConfigurationError(f"malformed polytope JSON: missing or invalid field {e}")


def polytope_from_json(text: str) -> PolytopeDescription:
    try:
        data = json.loads(text)
    except ValueError as e:
        raise ConfigurationError(f"polytope file is not JSON: {e}")
    return polytope_from_dict(data)


def read_polytope(path) -> PolytopeDescription:
    try:
        text = Path(path).read_text(encoding='utf-8')
    except OSError as e:
        raise ConfigurationError(f"cannot read polytope {path}: {e}")
    return polytope_from_json(text)


def write_text(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding='utf-8')
    logger.info(f"Wrote {path}")


def _number(value) -> Number:
    if isinstance(value, float):
        return value
    try:
        return to_fraction(value)
    except (ValueError, ZeroDivisionError) as e:
        raise DomainError(f"cannot read coordinate {value!r}: {e}")


def point_from_dict(data: Dict[str, Any]) -> Tuple[List[List[Number]], List[Number]]:
    """
    Parse {"xi_tilde": [[...], ...], "xi": [...]}; entries are ints, "p/q" strings or floats.

    Raises:
        DomainError: If fields are missing or entries unreadable
    """
    if not isinstance(data, dict) or 'xi_tilde' not in data or 'xi' not in data:
        raise DomainError("a point needs 'xi_tilde' (one spectrum per copy) and 'xi'")
    xi_tilde = [[_number(c) for c in row] for row in data['xi_tilde']]
    xi = [_number(c) for c in data['xi']]
    return xi_tilde, xi


def read_point(path) -> Tuple[List[List[Number]], List[Number]]:
    try:
        data = json.loads(Path(path).read_text(encoding='utf-8'))
    except (OSError, ValueError) as e:
        raise ConfigurationError(f"cannot read point {path}: {e}")
    return point_from_dict(data)


def has_floats(point: Tuple[Sequence[Sequence[Number]], Sequence[Number]]) -> bool:
    xi_tilde, xi = point
    return any(isinstance(c, float) for row in list(xi_tilde) + [xi] for c in row)
