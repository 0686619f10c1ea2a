"""Constructive certificates: matchings, disjoint paths, cycle systems
through a vertex, and short zero-product sequences.

Every construction returns a self-describing certificate object, and each
has a matching ``verify_*`` predicate that re-checks the certificate's
invariants from scratch; the verifiers share no state with the builders.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Collection, Iterable, Sequence

from ._flow import FlowNetwork
from .errors import InternalConsistencyError, UsageError
from .groups import GroupSubset, GroupTable, same_group
from .relations import Relation, is_loopless


def _group_members(group: GroupTable, a: GroupSubset | Iterable[int]) -> frozenset[int]:
    if isinstance(a, GroupSubset):
        if not same_group(a.group, group):
            raise UsageError("subset belongs to a different group")
        return a.members
    members = frozenset(a)
    for m in members:
        if not 0 <= m < group.order:
            raise UsageError(f"element {m} outside 0..{group.order - 1}")
    return members


# -- bipartite matching ------------------------------------------------------


@dataclass(frozen=True)
class HallResult:
    """Exactly one field is set: a bijection respecting the relation, or a
    left set with strictly fewer neighbors than members."""

    bijection: tuple[int, ...] | None
    violator: frozenset[int] | None


def _kuhn(
    adj: Sequence[Sequence[int]], right_size: int
) -> tuple[list[int | None], list[int | None], int]:
    match_left: list[int | None] = [None] * len(adj)
    match_right: list[int | None] = [None] * right_size

    def try_augment(x: int, seen: set[int]) -> bool:
        # take the first free neighbor before displacing anyone, so a
        # complete relation matches x with the least free index
        for y in adj[x]:
            if y not in seen and match_right[y] is None:
                seen.add(y)
                match_left[x] = y
                match_right[y] = x
                return True
        for y in adj[x]:
            if y in seen:
                continue
            seen.add(y)
            partner = match_right[y]
            if partner is not None and try_augment(partner, seen):
                match_left[x] = y
                match_right[y] = x
                return True
        return False

    size = 0
    for x in range(len(adj)):
        if try_augment(x, set()):
            size += 1
    return match_left, match_right, size


def _checked_adjacency(
    neighbors: Sequence[Collection[int]], right_size: int
) -> list[list[int]]:
    adj: list[list[int]] = []
    for nb in neighbors:
        row = sorted(set(nb))
        for y in row:
            if not 0 <= y < right_size:
                raise UsageError(f"neighbor {y} outside 0..{right_size - 1}")
        adj.append(row)
    return adj


def hall_matching(neighbors: Sequence[Collection[int]], right_size: int) -> HallResult:
    """Perfect matching in a bipartite relation with equal finite sides,
    or a deficiency witness.  Augmenting paths are explored in
    lexicographic order, so the bijection is deterministic."""
    n = len(neighbors)
    if n != right_size:
        raise UsageError(f"sides must have equal size, got {n} and {right_size}")
    adj = _checked_adjacency(neighbors, right_size)
    match_left, match_right, size = _kuhn(adj, right_size)
    if size == n:
        return HallResult(bijection=tuple(match_left), violator=None)  # type: ignore[arg-type]

    # alternating reachability from an unmatched left vertex reaches only
    # matched right vertices, so the collected left set is one short
    start = next(x for x in range(n) if match_left[x] is None)
    left_seen = {start}
    right_seen: set[int] = set()
    frontier = [start]
    while frontier:
        nxt = []
        for x in frontier:
            for y in adj[x]:
                if y in right_seen:
                    continue
                right_seen.add(y)
                partner = match_right[y]
                if partner is not None and partner not in left_seen:
                    left_seen.add(partner)
                    nxt.append(partner)
        frontier = nxt
    return HallResult(bijection=None, violator=frozenset(left_seen))


def max_matching_size(neighbors: Sequence[Collection[int]], right_size: int) -> int:
    """Maximum matching cardinality by augmenting paths."""
    return _kuhn(_checked_adjacency(neighbors, right_size), right_size)[2]


# -- fixed-point displacement permutation -------------------------------------


@dataclass(frozen=True)
class SigmaPermutation:
    """A permutation of a group subset A with every product x*sigma(x)
    landing outside A; stored as sorted (x, sigma(x)) pairs."""

    domain: frozenset[int]
    mapping: tuple[tuple[int, int], ...]

    def apply(self, x: int) -> int:
        for a, b in self.mapping:
            if a == x:
                return b
        raise KeyError(x)


def sigma_permutation(group: GroupTable, a: GroupSubset | Iterable[int]) -> SigmaPermutation:
    """Permutation through a perfect matching of the bipartite relation
    pairing x with each y whose product x*y leaves the set.

    Requires a nonempty set avoiding the identity.  A deficiency witness
    from the matcher is escalated as an internal error: for finite groups
    the matching provably exists."""
    members = _group_members(group, a)
    if not members:
        raise UsageError("the set must be nonempty")
    if group.identity in members:
        raise UsageError("the set must not contain the identity")
    elems = sorted(members)
    index = {e: i for i, e in enumerate(elems)}
    neighbors = [
        [index[y] for y in elems if group.mul(x, y) not in members] for x in elems
    ]
    result = hall_matching(neighbors, len(elems))
    if result.bijection is None:
        witness = sorted(elems[i] for i in result.violator or ())
        raise InternalConsistencyError(
            f"matching deficiency at {witness}; this contradicts the "
            "existence theorem and indicates a bug"
        )
    mapping = tuple((x, elems[result.bijection[i]]) for i, x in enumerate(elems))
    return SigmaPermutation(domain=members, mapping=mapping)


def verify_sigma(
    group: GroupTable, cert: SigmaPermutation
) -> tuple[bool, str | None]:
    sources = [x for x, _ in cert.mapping]
    targets = [y for _, y in cert.mapping]
    if sorted(sources) != sorted(cert.domain):
        return False, "mapping keys do not cover the domain"
    if sorted(targets) != sorted(cert.domain):
        return False, "mapping values are not a permutation of the domain"
    for x, y in cert.mapping:
        if group.mul(x, y) in cert.domain:
            return False, f"product of {x} and {y} stays inside the set"
    return True, None


# -- vertex-disjoint directed paths -------------------------------------------


@dataclass(frozen=True)
class PathsResult:
    """Either k pairwise vertex-disjoint paths or a small separating cut."""

    paths: tuple[tuple[int, ...], ...] | None
    cut: frozenset[int] | None


def disjoint_paths(
    rel: Relation,
    sources: Iterable[int],
    sinks: Iterable[int],
    k: int,
    forbidden: Iterable[int] = (),
) -> PathsResult:
    """k pairwise vertex-disjoint directed paths from sources to sinks
    avoiding forbidden vertices, or a vertex cut of size below k.

    Uses unit-capacity vertex splitting with breadth-first augmenting
    paths; a path may be a single vertex that is both source and sink.
    """
    n = rel.vertex_count
    src = frozenset(sources)
    dst = frozenset(sinks)
    bad = frozenset(forbidden)
    for v in src | dst | bad:
        if not 0 <= v < n:
            raise UsageError(f"vertex {v} outside 0..{n - 1}")
    if k < 1:
        raise UsageError(f"k must be positive, got {k}")
    if bad & (src | dst):
        raise UsageError("forbidden vertices overlap sources or sinks")

    inf = n + 1
    super_source = 2 * n
    super_sink = 2 * n + 1
    net = FlowNetwork(2 * n + 2)
    for w in range(n):
        if w not in bad:
            net.add_edge(2 * w, 2 * w + 1, 1)
    edge_heads: dict[int, int] = {}
    for u in range(n):
        for w in sorted(rel.successors[u]):
            eid = net.add_edge(2 * u + 1, 2 * w, inf)
            edge_heads[eid] = w
    for s in sorted(src):
        net.add_edge(super_source, 2 * s, inf)
    for t in sorted(dst):
        net.add_edge(2 * t + 1, super_sink, inf)

    value = net.max_flow(super_source, super_sink, limit=k)
    if value < k:
        reachable = net.residual_reachable(super_source)
        cut = frozenset(
            w
            for w in range(n)
            if w not in bad and reachable[2 * w] and not reachable[2 * w + 1]
        )
        return PathsResult(paths=None, cut=cut)

    # decompose the k flow units greedily from sources in index order;
    # unit split capacities mean every vertex carries at most one unit, so
    # each walk below is simple and the walks are pairwise disjoint
    out_flow: dict[int, list[int]] = {}
    for eid, w in sorted(edge_heads.items()):
        if net.flow_on(eid) > 0:
            out_flow.setdefault(net.to[eid ^ 1], []).append(eid)
    flowing_sources = [
        s
        for s in sorted(src)
        if any(
            net.to[eid] == 2 * s and net.flow_on(eid) > 0
            for eid in net.adj[super_source]
            if eid % 2 == 0
        )
    ]
    paths: list[tuple[int, ...]] = []
    for s in flowing_sources:
        path = [s]
        cur = s
        while True:
            eids = out_flow.get(2 * cur + 1)
            if not eids:
                break  # the unit left for the super sink here, so cur is a sink
            cur = edge_heads[eids.pop(0)]
            path.append(cur)
        paths.append(tuple(path))
    return PathsResult(paths=tuple(paths), cut=None)


def verify_disjoint_paths(
    rel: Relation,
    result: PathsResult,
    sources: Iterable[int],
    sinks: Iterable[int],
    k: int,
    forbidden: Iterable[int] = (),
) -> tuple[bool, str | None]:
    src = frozenset(sources)
    dst = frozenset(sinks)
    bad = frozenset(forbidden)
    if result.paths is not None:
        if len(result.paths) != k:
            return False, f"expected {k} paths, got {len(result.paths)}"
        seen: set[int] = set()
        for path in result.paths:
            if not path:
                return False, "empty path"
            if path[0] not in src:
                return False, f"path {path} does not start at a source"
            if path[-1] not in dst:
                return False, f"path {path} does not end at a sink"
            for u, w in zip(path, path[1:]):
                if w not in rel.successors[u]:
                    return False, f"missing edge ({u},{w})"
            for v in path:
                if v in bad:
                    return False, f"path {path} visits forbidden vertex {v}"
                if v in seen:
                    return False, f"vertex {v} reused across paths"
                seen.add(v)
        return True, None
    if result.cut is None:
        return False, "result carries neither paths nor a cut"
    if len(result.cut) >= k:
        return False, f"cut size {len(result.cut)} is not below {k}"
    # removing the cut and the forbidden vertices must kill every
    # source-to-sink path; check by forward reachability
    removed = result.cut | bad
    frontier = sorted(src - removed)
    reached = set(frontier)
    while frontier:
        nxt = []
        for u in frontier:
            for w in rel.successors[u]:
                if w not in removed and w not in reached:
                    reached.add(w)
                    nxt.append(w)
        frontier = nxt
    if reached & dst:
        return False, "cut does not separate sources from sinks"
    return True, None


# -- cycle systems through a vertex -------------------------------------------


@dataclass(frozen=True)
class CycleSystem:
    """Directed cycles through a hub vertex, pairwise meeting only there.

    Each cycle is stored as (hub, x1, ..., xm) with the closing edge
    xm -> hub implied; a 2-cycle (hub, x) is a legitimate cycle when the
    relation has edges both ways."""

    hub: int
    cycles: tuple[tuple[int, ...], ...]


def mader_cycles(rel: Relation, v: int) -> CycleSystem:
    """As many cycles through v as v has successors, pairwise meeting only
    in v.  The relation must be loopless; on point-transitive input (any
    Cayley relation of an identity-free generator set) the packing
    provably exists, so a cut witness is escalated as an internal error."""
    if not 0 <= v < rel.vertex_count:
        raise UsageError(f"vertex {v} outside 0..{rel.vertex_count - 1}")
    if not is_loopless(rel):
        raise UsageError("relation has loops; use an identity-free generator set")
    degree = len(rel.successors[v])
    if degree == 0:
        return CycleSystem(hub=v, cycles=())
    result = disjoint_paths(
        rel,
        sources=rel.successors[v],
        sinks=rel.predecessors[v],
        k=degree,
        forbidden={v},
    )
    if result.paths is None:
        raise InternalConsistencyError(
            f"only a cut of size {len(result.cut or ())} exists at vertex {v}; "
            "either the input is not point-transitive or this is a bug"
        )
    cycles = tuple((v,) + path for path in result.paths)
    return CycleSystem(hub=v, cycles=cycles)


def verify_cycle_system(rel: Relation, cert: CycleSystem) -> tuple[bool, str | None]:
    if not is_loopless(rel):
        return False, "host relation has loops"
    v = cert.hub
    if len(cert.cycles) != len(rel.successors[v]):
        return False, (
            f"expected {len(rel.successors[v])} cycles, got {len(cert.cycles)}"
        )
    for cycle in cert.cycles:
        if len(cycle) < 2:
            return False, f"cycle {cycle} is shorter than two vertices"
        if cycle[0] != v:
            return False, f"cycle {cycle} does not start at the hub"
        if len(set(cycle)) != len(cycle):
            return False, f"cycle {cycle} repeats a vertex"
        closed = cycle + (v,)
        for u, w in zip(closed, closed[1:]):
            if w not in rel.successors[u]:
                return False, f"missing edge ({u},{w}) in cycle {cycle}"
    for i in range(len(cert.cycles)):
        for j in range(i + 1, len(cert.cycles)):
            common = set(cert.cycles[i]) & set(cert.cycles[j])
            if common != {v}:
                return False, (
                    f"cycles {i} and {j} share {sorted(common)} instead of the hub"
                )
    return True, None


# -- short zero-product sequences ---------------------------------------------


@dataclass(frozen=True)
class ZeroProductCertificate:
    """An ordered sequence over a generating set whose product is the
    identity; its length meets the ceiling bound |G|/|S|."""

    sequence: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.sequence)


def shepherdson_sequence(
    group: GroupTable, s: GroupSubset | Iterable[int]
) -> ZeroProductCertificate:
    """Shortest ordered product from the generating set equal to the
    identity, by breadth-first search over left products; its length is
    the girth through the identity of the associated Cayley relation."""
    members = _group_members(group, s)
    if not members:
        raise UsageError("the generating set must be nonempty")
    gens = sorted(members)
    identity = group.identity
    if identity in members:
        return ZeroProductCertificate(sequence=(identity,))
    parent: dict[int, tuple[int, int]] = {}
    queue = deque([identity])
    seen = {identity}
    while queue:
        g = queue.popleft()
        for gen in gens:
            h = group.mul(g, gen)
            if h == identity:
                seq = [gen]
                cur = g
                while cur != identity:
                    prev, via = parent[cur]
                    seq.append(via)
                    cur = prev
                seq.reverse()
                cert = ZeroProductCertificate(sequence=tuple(seq))
                bound = math.ceil(group.order / len(members))
                if cert.k > bound:
                    raise InternalConsistencyError(
                        f"sequence length {cert.k} exceeds the ceiling bound "
                        f"{bound}; this contradicts the theorem"
                    )
                return cert
            if h not in seen:
                seen.add(h)
                parent[h] = (g, gen)
                queue.append(h)
    raise InternalConsistencyError(
        "no product returns to the identity; impossible in a finite group"
    )


def verify_zero_product(
    group: GroupTable, s_members: Iterable[int], cert: ZeroProductCertificate
) -> tuple[bool, str | None]:
    members = frozenset(s_members)
    if not cert.sequence:
        return False, "empty sequence"
    acc = group.identity
    for x in cert.sequence:
        if x not in members:
            return False, f"element {x} is not in the generating set"
        acc = group.mul(acc, x)
    if acc != group.identity:
        return False, f"product is {acc}, not the identity"
    bound = math.ceil(group.order / len(members))
    if cert.k > bound:
        return False, f"length {cert.k} exceeds the ceiling bound {bound}"
    return True, None
