"""Service object shared by the command-line tool and the HTTP API."""

import hashlib
import logging
import threading
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from src.admissible import enumerate_admissible, is_admissible
from src.config import CACHE_DIR, MEMBERSHIP_TOL, SCHEMA_VERSION, THREADS, TIGHTNESS_TOL
from src.errors import ConfigurationError
from src.models import (
    FRAME_T,
    CohomologyClass,
    GroupSetup,
    MembershipResult,
    PolytopeDescription,
    WeylElement,
)
from src.models.polytope import MODE_RESSAYRE
from src.oracle.flow import check_limit_proposition
from src.oracle.validation import facet_report, monte_carlo_validate
from src.ressayre import check_membership, generate_inequalities
from src.root_system import build_root_datum
from src.schubert import build_flag, class_of_x_gamma, pullback_diagonal
from src.serialization import has_floats, polytope_from_json, polytope_to_json

logger = logging.getLogger(__name__)

VERSION = '0.1.0'


class PolytopeService:
    """Generation with an on-disk cache, verification, membership and Schubert queries."""

    def __init__(self, cache_dir: Optional[str] = None, threads: Optional[int] = None):
        """
        Initialize PolytopeService.

        Args:
            cache_dir: Generation cache directory (None disables the cache)
            threads: Worker count (defaults to KIRWAN_THREADS)
        """
        self.cache_dir = Path(cache_dir) if cache_dir else None
        self.threads = threads or THREADS
        self._lock = threading.Lock()

        # Status tracking
        self.cache_hits = 0
        self.cache_misses = 0
        self.last_fingerprint: Optional[str] = None

    @classmethod
    def default(cls) -> 'PolytopeService':
        return cls(cache_dir=CACHE_DIR, threads=THREADS)

    @staticmethod
    def cache_key(setup: GroupSetup, mode: str, prune_lp: bool) -> str:
        payload = f"{setup.fingerprint}|{mode}|{int(bool(prune_lp))}|{SCHEMA_VERSION}"
        return hashlib.sha256(payload.encode('utf-8')).hexdigest()

    def _cache_path(self, key: str) -> Optional[Path]:
        if self.cache_dir is None:
            return None
        return self.cache_dir / f"{key}.json"

    def admissible(self, setup: GroupSetup) -> List[Dict[str, Any]]:
        return [e.to_dict() for e in enumerate_admissible(setup, threads=self.threads)]

    def check_admissible(self, setup: GroupSetup, gamma: Sequence) -> Dict[str, Any]:
        verdict, element = is_admissible(setup, setup.datum.vector(gamma, FRAME_T))
        return {'admissible': verdict, 'certificate': element.to_dict() if element is not None else None}

    def generate(
        self,
        setup: GroupSetup,
        mode: str = MODE_RESSAYRE,
        prune_lp: bool = False,
        use_cache: bool = True,
    ) -> Tuple[PolytopeDescription, str, bool]:
        """
        Generate (or load from the cache) the polytope of a setup.

        Returns:
            (polytope, JSON text, whether it came from the cache)

        Raises:
            HypothesisRefusal: If the setup violates the standing hypothesis
        """
        key = self.cache_key(setup, mode, prune_lp)
        path = self._cache_path(key) if use_cache else None
        if path is not None and path.exists():
            text = path.read_text(encoding='utf-8')
            with self._lock:
                self.cache_hits += 1
            logger.info(f"Cache hit for {setup!r} ({mode}): {path.name}")
            return polytope_from_json(text), text, True

        polytope = generate_inequalities(setup, mode=mode, threads=self.threads, prune_lp=prune_lp)
        text = polytope_to_json(polytope)
        with self._lock:
            self.cache_misses += 1
            self.last_fingerprint = setup.fingerprint
        if path is not None:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding='utf-8')
            logger.info(f"Cached {setup!r} ({mode}) as {path.name}")
        return polytope, text, False

    def verify(
        self,
        polytope: PolytopeDescription,
        setup: GroupSetup,
        trials: int,
        seed: int = 0,
        tightness_trials: int = 0,
        limit_samples: int = 0,
    ) -> Dict[str, Any]:
        """
        Monte Carlo validation, optionally with the facet report and the gamma-limit check.

        PASS follows the Monte Carlo verdict (and the limit check when it ran);
        the facet report is informational.

        Raises:
            FingerprintMismatch: If the polytope belongs to another setup
        """
        report: Dict[str, Any] = {
            'fingerprint': polytope.fingerprint,
            'mode': polytope.mode,
            'schema_version': SCHEMA_VERSION,
        }
        monte_carlo = monte_carlo_validate(polytope, setup, trials, seed, threads=self.threads, tol=MEMBERSHIP_TOL)
        report.update(monte_carlo)
        passed = monte_carlo['pass']
        if tightness_trials > 0:
            facets = facet_report(polytope, setup, tightness_trials, seed=seed, tol=TIGHTNESS_TOL)
            report['tightness'] = facets
            report['facetsConfirmed'] = sum(1 for f in facets if f['facet'])
        if limit_samples > 0:
            limit = check_limit_proposition(setup, enumerate_admissible(setup), limit_samples, seed=seed)
            report['limitCheck'] = limit
            passed = passed and limit['pass']
        report['pass'] = passed
        return report

    def check(self, polytope: PolytopeDescription, point: Tuple[Sequence, Sequence]) -> MembershipResult:
        xi_tilde, xi = point
        tol = MEMBERSHIP_TOL if has_floats(point) else 0.0
        return check_membership(polytope, xi_tilde, xi, tol=tol)

    def schubert_query(
        self,
        group: str,
        gamma: Sequence,
        classes: Sequence[Any] = (),
        duality: bool = False,
    ) -> Dict[str, Any]:
        """
        Product of classes on F_gamma.

        Args:
            group: Group description
            gamma: Nonzero element of t
            classes: Entries "x_gamma", "unit", "point", {"coset": one-line w}
                or {"schubert": one-line u}
            duality: Include the Poincare pairing matrix

        Raises:
            ConfigurationError: For unreadable class entries
        """
        datum = build_root_datum(group)
        flag = build_flag(datum, datum.vector(gamma, FRAME_T))
        parsed = [self._parse_class(flag, entry) for entry in classes]
        product = pullback_diagonal(flag, parsed)
        result: Dict[str, Any] = {
            'group': datum.description,
            'gamma': flag.gamma.to_dict(),
            'gamma_plus': flag.gamma_plus.to_dict(),
            'conjugator': flag.conjugator.to_dict(),
            'dimension': flag.dimension,
            'parabolic': [[b, i + 1] for b, i in flag.parabolic],
            'poincare': flag.poincare_polynomial(),
            'product': product.to_dict(),
            'pointCoefficient': product.coefficient(flag.top),
        }
        if duality:
            result['basis'] = [u.to_dict()['one_line'] for u in flag.basis]
            result['pairing'] = flag.pairing_matrix()
        return result

    @staticmethod
    def _parse_class(flag, entry) -> CohomologyClass:
        if entry == 'x_gamma':
            return class_of_x_gamma(flag)
        if entry == 'unit':
            return flag.unit()
        if entry == 'point':
            return flag.point()
        if isinstance(entry, dict) and len(entry) == 1:
            kind, rows = next(iter(entry.items()))
            if rows and not isinstance(rows[0], (list, tuple)):
                rows = [rows]
            try:
                w = WeylElement.from_one_line(rows)
            except (TypeError, ValueError) as e:
                raise ConfigurationError(f"cannot read Weyl element {rows!r}: {e}")
            if kind == 'coset':
                return flag.class_of_coset(w)
            if kind == 'schubert':
                return flag.schubert_class(w)
        raise ConfigurationError(
            f"class entries are 'x_gamma', 'unit', 'point', {{'coset': w}} or {{'schubert': u}}, got {entry!r}"
        )

    def get_status(self) -> Dict[str, Any]:
        """Get service status."""
        return {
            'version': VERSION,
            'schema_version': SCHEMA_VERSION,
            'cache_dir': str(self.cache_dir) if self.cache_dir is not None else None,
            'threads': self.threads,
            'cache_hits': self.cache_hits,
            'cache_misses': self.cache_misses,
            'last_fingerprint': self.last_fingerprint,
        }
