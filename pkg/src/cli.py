"""
Command-line tool: admissible | gen | verify | check | schubert-query.

Exit codes: 0 success / PASS, 1 verification failed (or point outside),
2 usage or configuration error, 3 standing-hypothesis refusal.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

# Add the project root to sys.path so `python src/cli.py` works
project_root = Path(__file__).parent.parent
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

from src.config import CACHE_DIR, LOG_LEVEL, THREADS
from src.errors import (
    EXIT_OK,
    EXIT_REFUSED,
    EXIT_USAGE,
    EXIT_VERIFY_FAILED,
    ConfigurationError,
    DomainError,
    FingerprintMismatch,
    FrameMismatchError,
    HypothesisRefusal,
)
from src.models import RunConfig
from src.models.polytope import MODES
from src.polytope_service import PolytopeService
from src.serialization import dumps, read_point, read_polytope, write_text
from src.setup_builder import build_setup

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='kirwan',
        description="Facet inequalities of Kirwan polyhedra for K diagonal in K^s (x V).",
    )
    sub = parser.add_subparsers(dest='command', required=True)

    admissible = sub.add_parser('admissible', help="list admissible elements")
    admissible.add_argument('--config', required=True, help="run configuration file")
    admissible.add_argument('--threads', type=int, help="worker count")

    gen = sub.add_parser('gen', help="generate the polytope JSON")
    gen.add_argument('--config', required=True, help="run configuration file")
    gen.add_argument('--mode', choices=MODES, help="pair classification required for an inequality")
    gen.add_argument('--out', help="output path (default: [output] polytope, else stdout)")
    gen.add_argument('--threads', type=int, help="worker count (output does not depend on it)")
    gen.add_argument('--prune-lp', action='store_true', help="heuristic LP redundancy pruning")
    gen.add_argument('--cache-dir', help="generation cache directory")
    gen.add_argument('--no-cache', action='store_true', help="bypass the generation cache")

    verify = sub.add_parser('verify', help="Monte Carlo validation of a polytope")
    verify.add_argument('--config', required=True, help="run configuration file")
    verify.add_argument('--polytope', required=True, help="polytope JSON")
    verify.add_argument('--samples', type=int, help="Monte Carlo draws")
    verify.add_argument('--seed', type=int, help="root seed")
    verify.add_argument('--threads', type=int, help="worker count")
    verify.add_argument('--tightness', type=int, default=0, metavar='N',
                        help="facet report with N samples per inequality")
    verify.add_argument('--limit-samples', type=int, default=0, metavar='N',
                        help="also check the gamma-limit inequality on N semistable points of V")
    verify.add_argument('--out', help="report path (default: [output] report, else stdout)")

    check = sub.add_parser('check', help="membership of a point")
    check.add_argument('--polytope', required=True, help="polytope JSON")
    check.add_argument('--point', required=True, help='point JSON {"xi_tilde": [...], "xi": [...]}')

    query = sub.add_parser('schubert-query', help="products of Schubert classes on F_gamma")
    query.add_argument('--group', required=True, help='group description, e.g. "su(3)"')
    query.add_argument('--gamma', required=True, help='comma-separated coordinates, e.g. "1,0,-1"')
    query.add_argument('--class', dest='classes', action='append', default=[],
                       help="x_gamma | unit | point | coset:<one-line> | schubert:<one-line> "
                            "(blocks separated by '/'); repeat to multiply")
    query.add_argument('--duality', action='store_true', help="print the Poincare pairing matrix")
    return parser


def _load_config(path: str) -> RunConfig:
    return RunConfig.from_file(path)


def _threads(args, config: Optional[RunConfig] = None) -> int:
    if getattr(args, 'threads', None):
        if args.threads < 1:
            raise ConfigurationError("--threads must be at least 1")
        return args.threads
    if config is not None and config.threads:
        return config.threads
    return THREADS


def _emit(text: str, path: Optional[Path]) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        write_text(path, text)


def parse_class(entry: str):
    """'x_gamma', 'unit', 'point' or 'coset:2,1' / 'schubert:2,1/1,2' -> service class entry."""
    entry = entry.strip()
    if entry in ('x_gamma', 'unit', 'point'):
        return entry
    kind, sep, body = entry.partition(':')
    if not sep or kind not in ('coset', 'schubert'):
        raise ConfigurationError(f"cannot read class {entry!r}")
    try:
        rows = [[int(x) for x in block.split(',')] for block in body.split('/')]
    except ValueError:
        raise ConfigurationError(f"cannot read one-line notation {body!r}")
    return {kind: rows}


def cmd_admissible(args) -> int:
    config = _load_config(args.config)
    setup = build_setup(config)
    service = PolytopeService(cache_dir=None, threads=_threads(args, config))
    elements = service.admissible(setup)
    if not elements:
        print("empty: no admissible elements")
        return EXIT_OK
    sys.stdout.write(dumps({'fingerprint': setup.fingerprint, 'admissible': elements}))
    return EXIT_OK


def cmd_generate(args) -> int:
    config = _load_config(args.config)
    setup = build_setup(config)
    cache_dir = args.cache_dir or (str(config.resolve(config.cache_dir)) if config.cache_dir else CACHE_DIR)
    service = PolytopeService(cache_dir=cache_dir, threads=_threads(args, config))
    mode = args.mode or config.mode
    polytope, text, cached = service.generate(
        setup, mode=mode, prune_lp=args.prune_lp or config.prune_lp, use_cache=not args.no_cache,
    )
    out = Path(args.out) if args.out else config.resolve(config.output_polytope)
    _emit(text, out)
    logger.info(
        f"{len(polytope.inequalities)} inequalities ({mode}){' from cache' if cached else ''}"
    )
    return EXIT_OK


def cmd_verify(args) -> int:
    config = _load_config(args.config)
    setup = build_setup(config)
    polytope = read_polytope(args.polytope)
    service = PolytopeService(cache_dir=None, threads=_threads(args, config))
    trials = args.samples if args.samples is not None else config.trials
    seed = args.seed if args.seed is not None else config.seed
    if trials < 0:
        raise ConfigurationError("--samples must be non-negative")
    report = service.verify(
        polytope, setup, trials, seed=seed,
        tightness_trials=args.tightness, limit_samples=args.limit_samples,
    )
    out = Path(args.out) if args.out else config.resolve(config.output_report)
    _emit(dumps(report), out)
    logger.info(f"Verification {'PASS' if report['pass'] else 'FAIL'}")
    return EXIT_OK if report['pass'] else EXIT_VERIFY_FAILED


def cmd_check(args) -> int:
    polytope = read_polytope(args.polytope)
    point = read_point(args.point)
    result = PolytopeService(cache_dir=None).check(polytope, point)
    sys.stdout.write(dumps(result.to_dict()))
    return EXIT_OK if result.member else EXIT_VERIFY_FAILED


def cmd_schubert_query(args) -> int:
    gamma = [c.strip() for c in args.gamma.split(',')]
    classes = [parse_class(c) for c in args.classes]
    result = PolytopeService(cache_dir=None).schubert_query(args.group, gamma, classes, duality=args.duality)
    sys.stdout.write(dumps(result))
    return EXIT_OK


COMMANDS = {
    'admissible': cmd_admissible,
    'gen': cmd_generate,
    'verify': cmd_verify,
    'check': cmd_check,
    'schubert-query': cmd_schubert_query,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command and return its exit code."""
    logging.basicConfig(level=LOG_LEVEL, stream=sys.stderr)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except HypothesisRefusal as e:
        print(f"refused: {e}", file=sys.stderr)
        return EXIT_REFUSED
    except (ConfigurationError, DomainError, FrameMismatchError, FingerprintMismatch) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())
