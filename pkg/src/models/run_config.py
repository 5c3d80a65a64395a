"""Run configuration files: ``key = value`` lines grouped under ``[section]`` headers."""

import io
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional

from dotenv import dotenv_values

from src.errors import ConfigurationError
from src.models.vector import fraction_str, to_fraction

SECTIONS = ('group', 'v', 'run', 'output')

KNOWN_KEYS = {
    'GROUP_KIND', 'GROUP_COPIES', 'GROUP_FORM_SCALES',
    'V_WEIGHTS', 'V_REPS', 'V_MATRICES', 'V_MOMENT_SHIFT',
    'RUN_MODE', 'RUN_SEED', 'RUN_TRIALS', 'RUN_TIGHTNESS_TRIALS', 'RUN_THREADS', 'RUN_PRUNE_LP',
    'OUTPUT_POLYTOPE', 'OUTPUT_REPORT', 'OUTPUT_CACHE_DIR',
}

_TRUE = ('1', 'true', 'yes', 'on')
_FALSE = ('0', 'false', 'no', 'off', '')


def _flatten_sections(text: str) -> str:
    """Rewrite ``[section]`` + ``key = value`` into dotenv ``SECTION_KEY="value"`` lines."""
    prefix = ''
    lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith('#') or line.startswith(';'):
            continue
        if line.startswith('[') and line.endswith(']'):
            section = line[1:-1].strip().lower()
            if section not in SECTIONS:
                raise ConfigurationError(f"line {number}: unknown section [{section}]")
            prefix = section.upper() + '_'
            continue
        if '=' not in line:
            raise ConfigurationError(f"line {number}: expected 'key = value', got {line!r}")
        key, value = line.split('=', 1)
        key = key.strip().upper().replace('-', '_')
        if prefix and not key.startswith(prefix):
            key = prefix + key
        value = value.strip()
        if len(value) >= 2 and value[0] == value[-1] and value[0] in ('"', "'"):
            value = value[1:-1]
        escaped = value.replace('\\', '\\\\').replace('"', '\\"')
        lines.append(f'{key}="{escaped}"')
    return '\n'.join(lines) + '\n'


def _parse_rational_rows(text: str) -> List[List[Fraction]]:
    rows = []
    for chunk in text.split(';'):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            rows.append([to_fraction(c) for c in chunk.split(',')])
        except (ValueError, ZeroDivisionError) as e:
            raise ConfigurationError(f"cannot parse rational vector {chunk!r}: {e}")
    return rows


def _parse_int(key: str, value: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ConfigurationError(f"{key} must be an integer, got {value!r}")


def _parse_bool(key: str, value: str) -> bool:
    lowered = value.strip().lower()
    if lowered in _TRUE:
        return True
    if lowered in _FALSE:
        return False
    raise ConfigurationError(f"{key} must be a boolean, got {value!r}")


class RunConfig:
    """Everything a run of the generator or the verifier needs."""

    def __init__(
        self,
        group_kind: str,
        copies: int = 2,
        form_scales: Optional[List[Fraction]] = None,
        v_weights: Optional[List[List[Fraction]]] = None,
        v_reps: Optional[List[str]] = None,
        v_matrices: Optional[str] = None,
        moment_shift: Optional[List[Fraction]] = None,
        mode: str = 'ressayre',
        seed: int = 0,
        trials: int = 1000,
        tightness_trials: int = 200,
        threads: Optional[int] = None,
        prune_lp: bool = False,
        output_polytope: Optional[str] = None,
        output_report: Optional[str] = None,
        cache_dir: Optional[str] = None,
        base_dir: Optional[Path] = None,
    ):
        """
        Initialize a RunConfig instance.

        Args:
            group_kind: Group description such as "su(3)" or "su(2)xtorus(1)"
            copies: Number s of copies of K in K~
            form_scales: Optional invariant form scale per factor
            v_weights: Explicit T-weights of V
            v_reps: Named representations making up V ("standard", "dual@1", ...)
            v_matrices: Path to a JSON file with rho(X_a) matrices
            moment_shift: Central shift added to the moment map of V
            mode: 'ressayre' or 'infinitesimal'
            seed: Root seed of the oracles
            trials: Monte Carlo draws
            tightness_trials: Samples per inequality in the facet report
            threads: Worker count (None: process default)
            prune_lp: Run the heuristic LP redundancy pass
            output_polytope: Where to write the polytope JSON
            output_report: Where to write the verification report
            cache_dir: Generation cache directory
            base_dir: Directory relative paths are resolved against
        """
        if not group_kind or not str(group_kind).strip():
            raise ConfigurationError("group kind is required")
        if copies < 1:
            raise ConfigurationError(f"copies must be at least 1, got {copies}")
        if mode not in ('ressayre', 'infinitesimal'):
            raise ConfigurationError(f"mode must be 'ressayre' or 'infinitesimal', got {mode!r}")
        if trials < 0 or tightness_trials < 0:
            raise ConfigurationError("trial counts must be non-negative")
        if threads is not None and threads < 1:
            raise ConfigurationError(f"threads must be at least 1, got {threads}")
        if v_weights is not None and v_reps is not None:
            raise ConfigurationError("give V either as weights or as representations, not both")

        self.group_kind = str(group_kind).strip()
        self.copies = int(copies)
        self.form_scales = list(form_scales) if form_scales is not None else None
        self.v_weights = [list(row) for row in v_weights] if v_weights else None
        self.v_reps = list(v_reps) if v_reps else None
        self.v_matrices = v_matrices
        self.moment_shift = list(moment_shift) if moment_shift is not None else None
        self.mode = mode
        self.seed = int(seed)
        self.trials = int(trials)
        self.tightness_trials = int(tightness_trials)
        self.threads = threads
        self.prune_lp = bool(prune_lp)
        self.output_polytope = output_polytope
        self.output_report = output_report
        self.cache_dir = cache_dir
        self.base_dir = Path(base_dir) if base_dir is not None else None

    @classmethod
    def from_text(cls, text: str, base_dir: Optional[Path] = None) -> 'RunConfig':
        """
        Parse configuration text.

        Raises:
            ConfigurationError: On unknown sections or keys and malformed values
        """
        values = dotenv_values(stream=io.StringIO(_flatten_sections(text)))
        return cls.from_flat({k: v for k, v in values.items() if v is not None}, base_dir=base_dir)

    @classmethod
    def from_file(cls, path) -> 'RunConfig':
        path = Path(path)
        try:
            text = path.read_text(encoding='utf-8')
        except OSError as e:
            raise ConfigurationError(f"cannot read configuration {path}: {e}")
        return cls.from_text(text, base_dir=path.parent)

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> 'RunConfig':
        """Build from JSON: either {"group": {"kind": ...}, ...} or flat SECTION_KEY keys."""
        flat: Dict[str, str] = {}
        for key, value in data.items():
            if isinstance(value, Mapping):
                for sub, inner in value.items():
                    flat[f"{key}_{sub}".upper()] = cls._stringify(inner)
            else:
                flat[str(key).upper()] = cls._stringify(value)
        return cls.from_flat(flat)

    @staticmethod
    def _stringify(value: Any) -> str:
        if isinstance(value, bool):
            return 'true' if value else 'false'
        if isinstance(value, (list, tuple)):
            if value and isinstance(value[0], (list, tuple)):
                return '; '.join(','.join(str(c) for c in row) for row in value)
            return ','.join(str(c) for c in value)
        return str(value)

    @classmethod
    def from_flat(cls, values: Mapping[str, str], base_dir: Optional[Path] = None) -> 'RunConfig':
        unknown = sorted(set(values) - KNOWN_KEYS)
        if unknown:
            raise ConfigurationError(f"unknown configuration keys: {', '.join(unknown)}")
        if 'GROUP_KIND' not in values:
            raise ConfigurationError("group kind is required ([group] kind = ...)")

        def get(key):
            value = values.get(key)
            return value.strip() if value is not None and value.strip() != '' else None

        form_scales = get('GROUP_FORM_SCALES')
        weights = get('V_WEIGHTS')
        reps = get('V_REPS')
        shift = get('V_MOMENT_SHIFT')
        threads = get('RUN_THREADS')
        try:
            scales = [to_fraction(c) for c in form_scales.split(',')] if form_scales else None
            shift_vec = [to_fraction(c) for c in shift.split(',')] if shift else None
        except (ValueError, ZeroDivisionError) as e:
            raise ConfigurationError(f"cannot parse rational list: {e}")
        return cls(
            group_kind=values['GROUP_KIND'],
            copies=_parse_int('GROUP_COPIES', get('GROUP_COPIES') or '2'),
            form_scales=scales,
            v_weights=_parse_rational_rows(weights) if weights else None,
            v_reps=[r.strip() for r in reps.split(';') if r.strip()] if reps else None,
            v_matrices=get('V_MATRICES'),
            moment_shift=shift_vec,
            mode=(get('RUN_MODE') or 'ressayre').lower(),
            seed=_parse_int('RUN_SEED', get('RUN_SEED') or '0'),
            trials=_parse_int('RUN_TRIALS', get('RUN_TRIALS') or '1000'),
            tightness_trials=_parse_int('RUN_TIGHTNESS_TRIALS', get('RUN_TIGHTNESS_TRIALS') or '200'),
            threads=_parse_int('RUN_THREADS', threads) if threads else None,
            prune_lp=_parse_bool('RUN_PRUNE_LP', get('RUN_PRUNE_LP') or 'false'),
            output_polytope=get('OUTPUT_POLYTOPE'),
            output_report=get('OUTPUT_REPORT'),
            cache_dir=get('OUTPUT_CACHE_DIR'),
            base_dir=base_dir,
        )

    def resolve(self, path: Optional[str]) -> Optional[Path]:
        """Resolve a configured path against the configuration file's directory."""
        if path is None:
            return None
        candidate = Path(path)
        if not candidate.is_absolute() and self.base_dir is not None:
            candidate = self.base_dir / candidate
        return candidate

    def to_flat(self) -> Dict[str, str]:
        def rationals(values):
            return ','.join(fraction_str(c) for c in values)

        flat = {
            'GROUP_KIND': self.group_kind,
            'GROUP_COPIES': str(self.copies),
            'RUN_MODE': self.mode,
            'RUN_SEED': str(self.seed),
            'RUN_TRIALS': str(self.trials),
            'RUN_TIGHTNESS_TRIALS': str(self.tightness_trials),
            'RUN_PRUNE_LP': 'true' if self.prune_lp else 'false',
        }
        if self.form_scales is not None:
            flat['GROUP_FORM_SCALES'] = rationals(self.form_scales)
        if self.v_weights:
            flat['V_WEIGHTS'] = '; '.join(rationals(row) for row in self.v_weights)
        if self.v_reps:
            flat['V_REPS'] = '; '.join(self.v_reps)
        if self.v_matrices:
            flat['V_MATRICES'] = self.v_matrices
        if self.moment_shift is not None:
            flat['V_MOMENT_SHIFT'] = rationals(self.moment_shift)
        if self.threads is not None:
            flat['RUN_THREADS'] = str(self.threads)
        if self.output_polytope:
            flat['OUTPUT_POLYTOPE'] = self.output_polytope
        if self.output_report:
            flat['OUTPUT_REPORT'] = self.output_report
        if self.cache_dir:
            flat['OUTPUT_CACHE_DIR'] = self.cache_dir
        return flat

    def to_text(self) -> str:
        """Serialize with one [section] block per prefix, in a fixed order."""
        flat = self.to_flat()
        out = []
        for section in SECTIONS:
            prefix = section.upper() + '_'
            keys = sorted(k for k in flat if k.startswith(prefix))
            if not keys:
                continue
            out.append(f"[{section}]")
            for key in keys:
                out.append(f"{key[len(prefix):].lower()} = {flat[key]}")
            out.append('')
        return '\n'.join(out)

    def __repr__(self):
        return f"RunConfig({self.group_kind}, s={self.copies}, mode={self.mode}, seed={self.seed})"

    def __eq__(self, other):
        if not isinstance(other, RunConfig):
            return False
        return self.to_flat() == other.to_flat()

    def __hash__(self):
        return hash(tuple(sorted(self.to_flat().items())))

    def to_dict(self):
        """Convert configuration to dictionary representation."""
        return dict(sorted(self.to_flat().items()))
