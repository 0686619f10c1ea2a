"""Brute-force oracles for the test suite.

Everything here recomputes quantities from first principles with plain
set arithmetic over explicit powersets, deliberately sharing no code with
the library's bitmask enumeration, flow, or BFS engines.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence


def powerset(universe: Iterable[int]):
    items = sorted(universe)
    for r in range(len(items) + 1):
        yield from (frozenset(c) for c in itertools.combinations(items, r))


def image(succ: Sequence[frozenset[int]], xs: frozenset[int]) -> frozenset[int]:
    out: set[int] = set()
    for v in xs:
        out |= succ[v]
    return frozenset(out)


def boundary(succ: Sequence[frozenset[int]], xs: frozenset[int]) -> frozenset[int]:
    return image(succ, xs) - xs


def predecessors(succ: Sequence[frozenset[int]], v: int) -> frozenset[int]:
    return frozenset(u for u in range(len(succ)) if v in succ[u])


def moser_fragments(
    succ: Sequence[frozenset[int]], v: int
) -> tuple[int, frozenset[int], list[frozenset[int]]]:
    """(kappa, intersection of all minimizers, every minimizer) over all
    sets meeting the in-neighborhood of v exactly in {v}."""
    n = len(succ)
    preds_v = predecessors(succ, v)
    best: int | None = None
    minimizers: list[frozenset[int]] = []
    for xs in powerset(range(n)):
        if xs & preds_v != {v}:
            continue
        size = len(boundary(succ, xs))
        if best is None or size < best:
            best = size
            minimizers = [xs]
        elif size == best:
            minimizers.append(xs)
    assert best is not None
    core = minimizers[0]
    for frag in minimizers[1:]:
        core &= frag
    return best, core, minimizers


def weak_fragments(
    succ: Sequence[frozenset[int]], proper: bool
) -> tuple[int, list[frozenset[int]], list[frozenset[int]]]:
    """(kappa, every fragment, every atom) over nonempty sets, proper or
    not according to the flag."""
    n = len(succ)
    best: int | None = None
    fragments: list[frozenset[int]] = []
    for xs in powerset(range(n)):
        if not xs or (proper and len(xs) == n):
            continue
        size = len(boundary(succ, xs))
        if best is None or size < best:
            best = size
            fragments = [xs]
        elif size == best:
            fragments.append(xs)
    assert best is not None
    smallest = min(len(f) for f in fragments)
    atoms = [f for f in fragments if len(f) == smallest]
    return best, fragments, atoms


def max_matching_brute(neighbors: Sequence[Iterable[int]], right_size: int) -> int:
    """Maximum matching size by exhaustive assignment search."""
    rows = [sorted(set(nb)) for nb in neighbors]

    def extend(i: int, used: frozenset[int]) -> int:
        if i == len(rows):
            return 0
        best = extend(i + 1, used)
        for y in rows[i]:
            if y not in used:
                best = max(best, 1 + extend(i + 1, used | {y}))
        return best

    return extend(0, frozenset())


def min_product_length_sets(
    product: Sequence[Sequence[int]], s: frozenset[int], identity: int = 0
) -> int:
    """Smallest k with the identity in the k-fold product set."""
    current = frozenset(s)
    k = 1
    while identity not in current:
        current = frozenset(product[x][y] for x in current for y in s)
        k += 1
        assert k <= len(product) + 1, "no zero product; not a group"
    return k
