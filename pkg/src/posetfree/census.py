"""Exhaustive ground truth at tiny n: exact counts, extremal sizes, probes.

Everything here trades time for certainty: families over [n] are enumerated
or maximized outright, with caps (:mod:`posetfree.caps`) guarding the
exponential blowup.  The experiment table ties the exact counts to the
container bookkeeping: for each n it reports the count alongside a
layer-union lower bound and the inspection quantity
``distinct pairs * 2^(max residual size)`` from sampled container runs.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import comb, log2

import numpy as np

from .caps import get_caps
from .containers import two_phase
from .embedding import contains_poset_through, is_p_free
from .errors import DomainError, TooLargeError
from .lattice import SetFamily, layer_family
from .poset import Poset, height

__all__ = [
    "CensusResult",
    "ExperimentRow",
    "census_result",
    "count_p_free",
    "la",
    "e_lower",
    "random_p_free_family",
    "layer_lower_bound",
    "experiment_table",
    "experiment_csv",
]


@dataclass(frozen=True)
class CensusResult:
    """Count and extremum for one (poset, n), with the count normalized by
    the middle binomial coefficient on a log scale."""

    label: str
    n: int
    count: int
    la: int
    normalized: float


def _free_with(members: tuple[int, ...], poset: Poset, n: int, mask: int) -> bool:
    """Whether a family known to avoid ``poset`` stays free after ``mask``.

    ``members`` must already include ``mask``; any new copy passes through it.
    """
    fam = SetFamily(n, members)
    return contains_poset_through(fam, poset, mask) is None


def _count_extensions(
    n: int, poset: Poset, chosen: list[int], masks: range, idx: int
) -> int:
    """Number of poset-free families extending ``chosen`` with masks[idx:]."""
    total = 1
    for i in range(idx, len(masks)):
        mask = masks[i]
        chosen.append(mask)
        if _free_with(tuple(chosen), poset, n, mask):
            total += _count_extensions(n, poset, chosen, masks, i + 1)
        chosen.pop()
    return total


def _count_task(args) -> int:
    n, poset, prefix, idx = args
    return _count_extensions(n, poset, list(prefix), range(1 << n), idx)


def count_p_free(n: int, poset: Poset, processes: int = 1) -> int:
    """Exact number of families over [n] containing no copy of ``poset``.

    Depth-first over masks in ascending order; a branch is abandoned as soon
    as the partial family contains the poset, which is sound because freeness
    is preserved by taking subfamilies.  Runtime is only guaranteed up to the
    exhaustive cap; larger n up to the search cap are accepted best-effort.
    """
    if n < 0:
        raise DomainError("n must be nonnegative")
    caps = get_caps()
    if n > caps.census_dfs_n:
        raise TooLargeError(
            f"counting over 2^[{n}] exceeds the cap of {caps.census_dfs_n}"
        )
    if processes < 1:
        raise DomainError("processes must be positive")
    masks = range(1 << n)
    if processes == 1 or len(masks) < 2:
        return _count_extensions(n, poset, [], masks, 0)
    # Split on the include/exclude decisions for the first few masks; each
    # compatible prefix is counted independently and the counts added.
    depth = min(max(1, processes - 1).bit_length(), len(masks))
    tasks = []
    for picks in product((False, True), repeat=depth):
        prefix = []
        viable = True
        for mask, take in zip(masks, picks):
            if not take:
                continue
            prefix.append(mask)
            if not _free_with(tuple(prefix), poset, n, mask):
                viable = False
                break
        if viable:
            tasks.append((n, poset, tuple(prefix), depth))
    with ProcessPoolExecutor(max_workers=processes) as pool:
        return sum(pool.map(_count_task, tasks))


def _chain_budget_bound(
    k: int, remaining_costs: list[Fraction], spent: Fraction
) -> int:
    """Max number of remaining masks addable without the budget overflowing.

    Every family with no k nested members satisfies
    ``sum 1/C(n,|F|) <= k-1`` (each of the n! maximal chains of the cube
    meets at most k-1 members), so packing the cheapest remaining masks
    first bounds any completion's size.
    """
    left = Fraction(k - 1) - spent
    extra = 0
    for cost in remaining_costs:
        if cost > left:
            break
        left -= cost
        extra += 1
    return extra


def la(n: int, poset: Poset) -> int:
    """Exact maximum size of a ``poset``-free family over [n].

    Branch and bound over masks ordered middle-out, including each mask
    first so large families appear early.  Chain posets prune with the exact
    chain-budget bound; other posets fall back to counting what is left.
    """
    if n < 0:
        raise DomainError("n must be nonnegative")
    caps = get_caps()
    if n > caps.la_n:
        raise TooLargeError(
            f"maximum-size search over 2^[{n}] exceeds the cap of {caps.la_n}"
        )
    masks = sorted(
        range(1 << n),
        key=lambda m: (abs(2 * m.bit_count() - n), m.bit_count(), m),
    )
    total = len(masks)
    is_chain = height(poset) == poset.m
    k = poset.m
    cost_of = [Fraction(1, comb(n, m.bit_count())) for m in masks]
    # per start index, the costs of the remaining masks sorted cheap-first
    suffix_costs = [sorted(cost_of[i:]) for i in range(total + 1)]

    best = 0
    chosen: list[int] = []

    def run(idx: int, spent: Fraction) -> None:
        nonlocal best
        best = max(best, len(chosen))
        if idx == total:
            return
        if is_chain:
            room = _chain_budget_bound(k, suffix_costs[idx], spent)
        else:
            room = total - idx
        if len(chosen) + room <= best:
            return
        mask = masks[idx]
        chosen.append(mask)
        if _free_with(tuple(sorted(chosen)), poset, n, mask):
            run(idx + 1, spent + cost_of[idx])
        chosen.pop()
        run(idx + 1, spent)

    run(0, Fraction(0))
    return best


def e_lower(poset: Poset, n_max: int) -> int:
    """Largest width with every consecutive-layer union poset-free.

    Checks all windows of ``width`` consecutive layer sizes inside every
    cube up to ``n_max`` and returns the largest width where all of them
    avoid the poset.  This certifies a lower bound for the poset's
    layer-union threshold; it cannot certify the value itself.
    """
    if n_max < 0:
        raise DomainError("n_max must be nonnegative")
    caps = get_caps()
    if n_max > caps.e_lower_n:
        raise TooLargeError(
            f"layer probe up to n={n_max} exceeds the cap of {caps.e_lower_n}"
        )
    for width in range(1, n_max + 2):
        for n in range(n_max + 1):
            for start in range(n - width + 2):
                if not is_p_free(layer_family(n, range(start, start + width)), poset):
                    return width - 1
    return n_max + 1


def random_p_free_family(
    poset: Poset, n: int, seed: int, density: float = 1.0
) -> SetFamily:
    """A seeded poset-free family: greedy over a shuffled mask order.

    Masks are visited in a seed-determined order and kept whenever the
    family stays poset-free, producing a maximal free family; ``density``
    then keeps each member independently, which preserves freeness.
    """
    if n < 0:
        raise DomainError("n must be nonnegative")
    if not 0.0 <= density <= 1.0:
        raise DomainError("density must lie in [0, 1]")
    rng = np.random.Generator(np.random.Philox(seed))
    members: list[int] = []
    for mask in rng.permutation(1 << n):
        mask = int(mask)
        trial = tuple(sorted(members + [mask]))
        if _free_with(trial, poset, n, mask):
            members.append(mask)
    members.sort()
    if density < 1.0:
        keep = rng.random(len(members)) < density
        members = [m for m, k in zip(members, keep) if k]
    return SetFamily(n, tuple(members))


def layer_lower_bound(poset: Poset, n: int) -> tuple[int, SetFamily]:
    """The subfamily-count lower bound from the best height-1 layer block.

    For a poset of height k, any union of k-1 consecutive layers is free,
    and so is each of its ``2^size`` subfamilies.  Returns the bound and the
    witness union (the heaviest window, capped at the whole cube).
    """
    width = min(height(poset) - 1, n + 1)
    starts = range(n - width + 2) if width else (0,)
    start = max(
        starts, key=lambda s: (sum(comb(n, i) for i in range(s, s + width)), -s)
    )
    witness = layer_family(n, range(start, start + width))
    return 1 << witness.size, witness


def census_result(poset: Poset, n: int, label: str) -> CensusResult:
    """Bundle the exact count and maximum size for one poset and cube."""
    count = count_p_free(n, poset)
    best = la(n, poset)
    result = CensusResult(
        label=label,
        n=n,
        count=count,
        la=best,
        normalized=log2(count) / comb(n, n // 2),
    )
    assert result.count >= 1 << result.la
    assert result.la <= 1 << n
    return result


@dataclass(frozen=True)
class ExperimentRow:
    """One line of the count-versus-containers bookkeeping table."""

    n: int
    count: int | None
    la: int | None
    lower_bound: int
    distinct_pairs: int
    max_residual_size: int
    max_residual_normalized: float
    upper_expression: int


def experiment_table(
    poset: Poset,
    n_values,
    t1: int | None = None,
    t2: int | None = None,
    seed: int = 0,
    samples: int = 20,
    root: int = 0,
) -> list[ExperimentRow]:
    """Count exactly where feasible and run sampled two-phase containers.

    Per n the row carries the exact count and maximum size (when under the
    caps), the layer-union lower bound (asserted against the count), and
    container bookkeeping over ``samples`` seeded free families: the number
    of distinct pairs, the largest residual (absolute and normalized by the
    middle binomial), and ``distinct * 2^(max residual)`` for inspection —
    that expression is reported, never asserted, against the count.
    """
    if samples < 1:
        raise DomainError("samples must be positive")
    caps = get_caps()
    rows = []
    for n in n_values:
        bound, witness = layer_lower_bound(poset, n)
        assert is_p_free(witness, poset)
        count = count_p_free(n, poset) if n <= caps.census_dfs_n else None
        if count is not None:
            assert count >= bound
        best = la(n, poset) if n <= caps.la_n else None
        pairs = set()
        max_residual = 0
        for i in range(samples):
            family = random_p_free_family(
                poset, n, seed=seed * 1_000_003 + n * 1_009 + i
            )
            pair = two_phase(poset, root, n, family, t1, t2)
            pairs.add((pair.certificate.members, pair.residual.members))
            max_residual = max(max_residual, pair.residual.size)
        rows.append(
            ExperimentRow(
                n=n,
                count=count,
                la=best,
                lower_bound=bound,
                distinct_pairs=len(pairs),
                max_residual_size=max_residual,
                max_residual_normalized=max_residual / comb(n, n // 2),
                upper_expression=len(pairs) << max_residual,
            )
        )
    return rows


def experiment_csv(rows: list[ExperimentRow]) -> str:
    """Render experiment rows as CSV with a fixed header, blanks for n/a."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(
        [
            "n",
            "count",
            "la",
            "lower_bound",
            "distinct_pairs",
            "max_residual_size",
            "max_residual_normalized",
            "upper_expression",
        ]
    )
    for row in rows:
        writer.writerow(
            [
                row.n,
                "" if row.count is None else row.count,
                "" if row.la is None else row.la,
                row.lower_bound,
                row.distinct_pairs,
                row.max_residual_size,
                repr(row.max_residual_normalized),
                row.upper_expression,
            ]
        )
    return out.getvalue()
