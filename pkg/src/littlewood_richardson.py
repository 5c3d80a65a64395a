"""Littlewood-Richardson coefficients by counting LR tableaux (independent of the Borel presentation)."""

import logging
from functools import lru_cache
from typing import Dict, Iterable, List, Sequence, Tuple

from src.errors import DomainError

logger = logging.getLogger(__name__)

Partition = Tuple[int, ...]


def normalize(partition: Iterable[int]) -> Partition:
    """Drop trailing zeros; reject negative or increasing parts."""
    parts = tuple(int(p) for p in partition)
    if any(p < 0 for p in parts):
        raise DomainError(f"partition {parts} has negative parts")
    if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
        raise DomainError(f"partition {parts} is not weakly decreasing")
    while parts and parts[-1] == 0:
        parts = parts[:-1]
    return parts


def fits(partition: Partition, rows: int, cols: int) -> bool:
    return len(partition) <= rows and all(p <= cols for p in partition)


def _contains(outer: Partition, inner: Partition) -> bool:
    return len(inner) <= len(outer) and all(i <= o for i, o in zip(inner, outer))


@lru_cache(maxsize=None)
def lr_coefficient(lam: Partition, mu: Partition, nu: Partition) -> int:
    """
    c^nu_{lam,mu}: semistandard fillings of nu/lam with content mu whose
    reverse reading word is a lattice word.
    """
    lam, mu, nu = normalize(lam), normalize(mu), normalize(nu)
    if sum(nu) != sum(lam) + sum(mu) or not _contains(nu, lam):
        return 0
    if not mu:
        return 1
    inner = lam + (0,) * (len(nu) - len(lam))
    # reading order: rows top to bottom, each row right to left
    cells = [(r, c) for r in range(len(nu)) for c in range(nu[r] - 1, inner[r] - 1, -1)]
    filling: Dict[Tuple[int, int], int] = {}
    counts = [0] * len(mu)

    def place(index: int) -> int:
        if index == len(cells):
            return 1
        r, c = cells[index]
        total = 0
        upper = len(mu)
        right = filling.get((r, c + 1))
        if right is not None:
            upper = min(upper, right)
        lower = 1
        above = filling.get((r - 1, c))
        if above is not None:
            lower = above + 1
        for value in range(lower, upper + 1):
            k = value - 1
            if counts[k] >= mu[k]:
                continue
            if k > 0 and counts[k] + 1 > counts[k - 1]:
                continue
            counts[k] += 1
            filling[(r, c)] = value
            total += place(index + 1)
            del filling[(r, c)]
            counts[k] -= 1
        return total

    return place(0)


def partitions_in_box(size: int, rows: int, cols: int) -> List[Partition]:
    """All partitions of size fitting in a rows x cols rectangle."""
    out: List[Partition] = []

    def build(remaining: int, max_part: int, prefix: Tuple[int, ...]):
        if remaining == 0:
            out.append(prefix)
            return
        if len(prefix) == rows:
            return
        for part in range(min(remaining, max_part), 0, -1):
            build(remaining - part, part, prefix + (part,))

    build(size, cols, ())
    return out


def lr_expand(lam: Sequence[int], mu: Sequence[int], rows: int, cols: int) -> Dict[Partition, int]:
    """sigma_lam * sigma_mu in H*(Gr(rows, rows + cols)) as {nu: c^nu_{lam,mu}}."""
    lam, mu = normalize(lam), normalize(mu)
    result = {}
    for nu in partitions_in_box(sum(lam) + sum(mu), rows, cols):
        if not (_contains(nu, lam) and _contains(nu, mu)):
            continue
        c = lr_coefficient(lam, mu, nu)
        if c:
            result[nu] = c
    return result


def lr_oracle(shapes: Sequence[Sequence[int]], rows: int, cols: int) -> int:
    """
    Multiplicity of [pt] in the product of Grassmannian Schubert classes.

    Args:
        shapes: Partitions, each fitting in the rows x cols rectangle
        rows: k for Gr(k, n)
        cols: n - k

    Raises:
        DomainError: If a shape is not a partition or does not fit
    """
    normalized = [normalize(s) for s in shapes]
    for shape in normalized:
        if not fits(shape, rows, cols):
            raise DomainError(f"partition {shape} does not fit in a {rows}x{cols} rectangle")
    if sum(sum(s) for s in normalized) != rows * cols:
        return 0
    current: Dict[Partition, int] = {(): 1}
    for shape in normalized:
        nxt: Dict[Partition, int] = {}
        for nu, c in current.items():
            for rho, d in lr_expand(nu, shape, rows, cols).items():
                nxt[rho] = nxt.get(rho, 0) + c * d
        current = nxt
    return current.get((cols,) * rows, 0)
