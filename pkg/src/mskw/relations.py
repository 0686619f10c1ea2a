"""Finite directed relations with image, boundary, and exterior operators.

A relation is a digraph on vertices 0..n-1.  For a vertex set X the image
is the union of successor sets, the boundary is image(X) minus X, and the
exterior is everything the image misses.  On a reflexive relation the
triple (X, boundary, exterior) partitions the vertex set, which is what
makes boundary counting an isoperimetric quantity.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from ._bitset import mask_of
from .errors import CapacityError, UsageError
from .groups import GroupSubset, GroupTable, same_group

VERTEX_CAP = 100_000

VertexSet = frozenset


@dataclass(frozen=True, eq=False)
class Relation:
    """Dense adjacency for a digraph; predecessors are materialized because
    the reverse operators are used as often as the forward ones."""

    vertex_count: int
    successors: tuple[frozenset[int], ...]
    predecessors: tuple[frozenset[int], ...]
    reflexive: bool


def relation_from_successors(successors: Sequence[Iterable[int]]) -> Relation:
    n = len(successors)
    if n == 0:
        raise UsageError("a relation needs at least one vertex")
    if n > VERTEX_CAP:
        raise CapacityError(f"vertex count {n} exceeds the cap {VERTEX_CAP}")
    succ: list[frozenset[int]] = []
    preds: list[set[int]] = [set() for _ in range(n)]
    for v, out in enumerate(successors):
        fs = frozenset(out)
        for w in fs:
            if not 0 <= w < n:
                raise UsageError(f"edge target {w} outside 0..{n - 1}")
            preds[w].add(v)
        succ.append(fs)
    reflexive = all(v in succ[v] for v in range(n))
    return Relation(
        vertex_count=n,
        successors=tuple(succ),
        predecessors=tuple(frozenset(p) for p in preds),
        reflexive=reflexive,
    )


def cayley(group: GroupTable, s: GroupSubset | Iterable[int]) -> Relation:
    """The relation on the group with an edge (x, y) iff x^-1 y lies in s;
    equivalently the successors of x are the left translate x*s."""
    if isinstance(s, GroupSubset):
        if not same_group(s.group, group):
            raise UsageError("generator subset belongs to a different group")
        members = s.members
    else:
        members = frozenset(s)
        for m in members:
            if not 0 <= m < group.order:
                raise UsageError(f"generator {m} outside 0..{group.order - 1}")
    rows = group.product
    return relation_from_successors(
        [frozenset(rows[x][g] for g in members) for x in range(group.order)]
    )


def _check_vertices(rel: Relation, xs: Iterable[int]) -> frozenset[int]:
    fs = frozenset(xs)
    for v in fs:
        if not 0 <= v < rel.vertex_count:
            raise UsageError(f"vertex {v} outside 0..{rel.vertex_count - 1}")
    return fs


def image(rel: Relation, xs: Iterable[int]) -> frozenset[int]:
    members = _check_vertices(rel, xs)
    out: set[int] = set()
    for v in members:
        out |= rel.successors[v]
    return frozenset(out)


def preimage(rel: Relation, xs: Iterable[int]) -> frozenset[int]:
    members = _check_vertices(rel, xs)
    out: set[int] = set()
    for v in members:
        out |= rel.predecessors[v]
    return frozenset(out)


def boundary(rel: Relation, xs: Iterable[int]) -> frozenset[int]:
    """Vertices newly reached from xs: image(xs) minus xs."""
    members = _check_vertices(rel, xs)
    return image(rel, members) - members


def exterior(rel: Relation, xs: Iterable[int]) -> frozenset[int]:
    """Vertices the image of xs does not reach."""
    members = _check_vertices(rel, xs)
    return frozenset(range(rel.vertex_count)) - image(rel, members)


def coboundary(rel: Relation, xs: Iterable[int]) -> frozenset[int]:
    """Reverse-direction boundary: preimage(xs) minus xs."""
    members = _check_vertices(rel, xs)
    return preimage(rel, members) - members


def iterated_image(rel: Relation, v: int, j: int) -> frozenset[int]:
    """The j-step image of a single vertex; j = 0 gives {v}."""
    _check_vertices(rel, [v])
    if j < 0:
        raise UsageError(f"step count must be nonnegative, got {j}")
    current = frozenset([v])
    for _ in range(j):
        current = image(rel, current)
    return current


def induced(rel: Relation, xs: Iterable[int]) -> tuple[Relation, dict[int, int]]:
    """The subrelation on xs, re-indexed densely; also returns the
    old-to-new index map so certificates can be lifted back."""
    members = _check_vertices(rel, xs)
    if not members:
        raise UsageError("cannot induce on an empty vertex set")
    order = sorted(members)
    index = {old: new for new, old in enumerate(order)}
    succ = [
        frozenset(index[w] for w in rel.successors[old] if w in members)
        for old in order
    ]
    return relation_from_successors(succ), index


def reflexive_closure(rel: Relation) -> Relation:
    if rel.reflexive:
        return rel
    return relation_from_successors(
        [rel.successors[v] | {v} for v in range(rel.vertex_count)]
    )


def is_loopless(rel: Relation) -> bool:
    return all(v not in rel.successors[v] for v in range(rel.vertex_count))


def successor_masks(rel: Relation) -> list[int]:
    return [mask_of(rel.successors[v]) for v in range(rel.vertex_count)]


def predecessor_masks(rel: Relation) -> list[int]:
    return [mask_of(rel.predecessors[v]) for v in range(rel.vertex_count)]


# -- JSON graph format -------------------------------------------------------


def relation_to_json(rel: Relation) -> dict:
    edges = sorted(
        (u, v) for u in range(rel.vertex_count) for v in rel.successors[u]
    )
    return {
        "n": rel.vertex_count,
        "edges": [[u, v] for u, v in edges],
        "reflexive_closure": False,
    }


def relation_from_json(doc: Mapping) -> Relation:
    if not isinstance(doc, Mapping):
        raise UsageError("graph document must be a JSON object")
    n = doc.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise UsageError('graph document needs a positive integer "n"')
    succ: list[set[int]] = [set() for _ in range(n)]
    for e in doc.get("edges", []):
        if not isinstance(e, Sequence) or len(e) != 2:
            raise UsageError(f"malformed edge {e!r}")
        u, v = int(e[0]), int(e[1])
        if not (0 <= u < n and 0 <= v < n):
            raise UsageError(f"edge ({u},{v}) outside 0..{n - 1}")
        succ[u].add(v)
    if doc.get("reflexive_closure", False):
        for v in range(n):
            succ[v].add(v)
    return relation_from_successors(succ)


def relation_from_json_text(text: str) -> Relation:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid graph JSON: {exc}") from exc
    return relation_from_json(doc)
