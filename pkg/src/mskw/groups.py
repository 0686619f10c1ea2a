"""Finite groups materialized as dense multiplication tables.

Every constructor returns a table whose element 0 is the identity, so
membership tests against the identity never need per-group bookkeeping.
Explicit tables are validated axiom by axiom and re-indexed if their
identity is not already element 0.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import CapacityError, UsageError, ValidationError

GROUP_ORDER_CAP = 5040

_ASSOC_EXHAUSTIVE_LIMIT = 64
_ASSOC_SAMPLE_COUNT = 20000


@dataclass(frozen=True, eq=False)
class GroupTable:
    """A finite group on elements 0..order-1 with element 0 as identity."""

    order: int
    product: tuple[tuple[int, ...], ...]
    inverse: tuple[int, ...]
    labels: tuple[str, ...] | None = None
    identity: int = 0

    def mul(self, a: int, b: int) -> int:
        return self.product[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def elements(self) -> range:
        return range(self.order)

    def label(self, a: int) -> str:
        return self.labels[a] if self.labels is not None else str(a)


@dataclass(frozen=True)
class GroupSubset:
    """A subset of a group's elements, tied to its parent table."""

    group: GroupTable
    members: frozenset[int]

    def __post_init__(self) -> None:
        for m in self.members:
            if not 0 <= m < self.group.order:
                raise UsageError(f"subset member {m} outside 0..{self.group.order - 1}")

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, item: int) -> bool:
        return item in self.members


def subset(group: GroupTable, members: Iterable[int]) -> GroupSubset:
    return GroupSubset(group, frozenset(members))


def same_group(g1: GroupTable, g2: GroupTable) -> bool:
    return g1 is g2 or (g1.order == g2.order and g1.product == g2.product)


def _require_same_group(a: GroupSubset, b: GroupSubset) -> None:
    if not same_group(a.group, b.group):
        raise UsageError("subsets belong to different parent groups")


def product_set(a: GroupSubset, b: GroupSubset) -> GroupSubset:
    """All products xy with x in a and y in b."""
    _require_same_group(a, b)
    rows = a.group.product
    out = {rows[x][y] for x in a.members for y in b.members}
    return GroupSubset(a.group, frozenset(out))


def inverse_set(a: GroupSubset) -> GroupSubset:
    inv = a.group.inverse
    return GroupSubset(a.group, frozenset(inv[x] for x in a.members))


def complement_set(a: GroupSubset) -> GroupSubset:
    return GroupSubset(a.group, frozenset(range(a.group.order)) - a.members)


def translate_left(g: int, a: GroupSubset) -> GroupSubset:
    """The left translate g*a; translation by a fixed element is a bijection."""
    if not 0 <= g < a.group.order:
        raise UsageError(f"element {g} outside 0..{a.group.order - 1}")
    row = a.group.product[g]
    return GroupSubset(a.group, frozenset(row[x] for x in a.members))


# -- constructors -----------------------------------------------------------


def _check_order_cap(order: int) -> None:
    if order > GROUP_ORDER_CAP:
        raise CapacityError(
            f"group order {order} exceeds the materialization cap {GROUP_ORDER_CAP}"
        )


def _finish(product: list[list[int]], labels: Sequence[str] | None) -> GroupTable:
    n = len(product)
    inverse = _inverse_table(product)
    return GroupTable(
        order=n,
        product=tuple(tuple(row) for row in product),
        inverse=tuple(inverse),
        labels=tuple(labels) if labels is not None else None,
    )


def _inverse_table(product: Sequence[Sequence[int]], identity: int = 0) -> list[int]:
    n = len(product)
    inv = [-1] * n
    for x in range(n):
        for y in range(n):
            if product[x][y] == identity and product[y][x] == identity:
                inv[x] = y
                break
        if inv[x] < 0:
            raise ValidationError(f"no inverse for element {x}")
    return inv


def cyclic(n: int) -> GroupTable:
    if n < 1:
        raise UsageError(f"cyclic group needs n >= 1, got {n}")
    _check_order_cap(n)
    product = [[(i + j) % n for j in range(n)] for i in range(n)]
    return _finish(product, [str(i) for i in range(n)])


def dihedral(n: int) -> GroupTable:
    """Symmetries of a regular n-gon, order 2n; indices 0..n-1 are the
    rotations r^i, indices n..2n-1 the reflections r^i s."""
    if n < 3:
        raise UsageError(f"dihedral group needs n >= 3, got {n}")
    _check_order_cap(2 * n)
    product = [[0] * (2 * n) for _ in range(2 * n)]
    for a in range(n):
        for b in range(n):
            product[a][b] = (a + b) % n
            product[a][n + b] = n + (a + b) % n
            product[n + a][b] = n + (a - b) % n
            product[n + a][n + b] = (a - b) % n
    labels = [f"r{i}" for i in range(n)] + [f"r{i}s" for i in range(n)]
    return _finish(product, labels)


def symmetric(n: int) -> GroupTable:
    """Permutations of n letters in lexicographic order; identity first."""
    if not 1 <= n <= 5:
        raise UsageError(f"symmetric group supported for 1 <= n <= 5, got {n}")
    perms = sorted(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    order = len(perms)
    _check_order_cap(order)
    product = [
        [index[tuple(p[q[i]] for i in range(n))] for q in perms] for p in perms
    ]
    labels = ["".join(str(x) for x in p) for p in perms]
    return _finish(product, labels)


_QUATERNION_UNITS = (
    # unit product table: (a, b) -> (sign, unit) for units 1, i, j, k
    ((0, 0), (0, 1), (0, 2), (0, 3)),
    ((0, 1), (1, 0), (0, 3), (1, 2)),
    ((0, 2), (1, 3), (1, 0), (0, 1)),
    ((0, 3), (0, 2), (1, 1), (1, 0)),
)


def quaternion() -> GroupTable:
    """The quaternion group of order 8: +-1, +-i, +-j, +-k."""

    def idx(sign: int, unit: int) -> int:
        return 2 * unit + sign

    product = [[0] * 8 for _ in range(8)]
    for s1 in range(2):
        for u1 in range(4):
            for s2 in range(2):
                for u2 in range(4):
                    s3, u3 = _QUATERNION_UNITS[u1][u2]
                    product[idx(s1, u1)][idx(s2, u2)] = idx(s1 ^ s2 ^ s3, u3)
    labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    return _finish(product, labels)


def direct_product(factors: Sequence[GroupTable]) -> GroupTable:
    """Componentwise product; elements indexed in mixed-radix order so the
    identity tuple lands at index 0."""
    if not factors:
        raise UsageError("direct product needs at least one factor")
    order = 1
    for g in factors:
        order *= g.order
    _check_order_cap(order)
    radices = [g.order for g in factors]

    def decode(x: int) -> list[int]:
        parts = []
        for r in reversed(radices):
            x, p = divmod(x, r)
            parts.append(p)
        return parts[::-1]

    def encode(parts: Sequence[int]) -> int:
        x = 0
        for r, p in zip(radices, parts):
            x = x * r + p
        return x

    product = [[0] * order for _ in range(order)]
    for x in range(order):
        xs = decode(x)
        for y in range(order):
            ys = decode(y)
            product[x][y] = encode([g.mul(a, b) for g, a, b in zip(factors, xs, ys)])
    labels = [
        "(" + ",".join(g.label(p) for g, p in zip(factors, decode(x))) + ")"
        for x in range(order)
    ]
    return _finish(product, labels)


# -- explicit tables --------------------------------------------------------


def _find_identity(product: Sequence[Sequence[int]]) -> int:
    n = len(product)
    for e in range(n):
        if all(product[e][x] == x and product[x][e] == x for x in range(n)):
            return e
    raise ValidationError("no two-sided identity element")


def _check_associativity(product: Sequence[Sequence[int]]) -> None:
    n = len(product)
    if n <= _ASSOC_EXHAUSTIVE_LIMIT:
        triples = itertools.product(range(n), repeat=3)
    else:
        rng = random.Random(0)
        triples = (
            (rng.randrange(n), rng.randrange(n), rng.randrange(n))
            for _ in range(_ASSOC_SAMPLE_COUNT)
        )
    for x, y, z in triples:
        if product[product[x][y]][z] != product[x][product[y][z]]:
            raise ValidationError(f"associativity fails at ({x},{y},{z})")


def from_table(
    table: Sequence[Sequence[int]], labels: Sequence[str] | None = None
) -> GroupTable:
    """Validate an explicit multiplication table and normalize it so the
    identity sits at index 0.  Raises ValidationError naming the first
    failed axiom."""
    n = len(table)
    if n == 0:
        raise ValidationError("empty table")
    _check_order_cap(n)
    rows: list[list[int]] = []
    for i, row in enumerate(table):
        if len(row) != n:
            raise ValidationError(f"row {i} has length {len(row)}, expected {n}")
        vals = [int(v) for v in row]
        for v in vals:
            if not 0 <= v < n:
                raise ValidationError(f"entry {v} outside 0..{n - 1}")
        rows.append(vals)
    e = _find_identity(rows)
    _inverse_table(rows, e)  # axiom check only, in the caller's indexing
    _check_associativity(rows)
    if e != 0:
        rows = _reindexed(rows, e)
        if labels is not None:
            labels = list(labels)
            labels[0], labels[e] = labels[e], labels[0]
    return _finish(rows, labels)


def _reindexed(product: Sequence[Sequence[int]], e: int) -> list[list[int]]:
    # swap indices 0 and e so the identity becomes element 0
    n = len(product)
    pi = list(range(n))
    pi[0], pi[e] = e, 0
    return [[pi[product[pi[x]][pi[y]]] for y in range(n)] for x in range(n)]


# -- JSON group specifications ----------------------------------------------


def build_group(spec: Mapping) -> GroupTable:
    """Build a group from a specification mapping, e.g. {"type":"cyclic","n":12}.

    Supported types: cyclic, dihedral, symmetric, quaternion, product
    (with "factors": [...]), and table (with "table": [[...]]).
    """
    if not isinstance(spec, Mapping):
        raise UsageError("group specification must be a JSON object")
    kind = spec.get("type")
    if kind == "cyclic":
        return cyclic(_spec_int(spec, "n"))
    if kind == "dihedral":
        return dihedral(_spec_int(spec, "n"))
    if kind == "symmetric":
        return symmetric(_spec_int(spec, "n"))
    if kind == "quaternion":
        return quaternion()
    if kind == "product":
        factors = spec.get("factors")
        if not isinstance(factors, Sequence) or not factors:
            raise UsageError('product spec needs a nonempty "factors" list')
        return direct_product([build_group(f) for f in factors])
    if kind == "table":
        table = spec.get("table")
        if not isinstance(table, Sequence):
            raise UsageError('table spec needs a "table" entry')
        return from_table(table, spec.get("labels"))
    raise UsageError(f"unknown group type {kind!r}")


def _spec_int(spec: Mapping, key: str) -> int:
    value = spec.get(key)
    if not isinstance(value, int) or isinstance(value, bool):
        raise UsageError(f'group spec field "{key}" must be an integer')
    return value
