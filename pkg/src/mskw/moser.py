"""Per-vertex boundary minimization over Moser sets.

For a reflexive relation and a vertex v, a v-Moser set is a vertex set F
whose intersection with the in-neighborhood of v is exactly {v}; in other
words F contains v and excludes every other in-neighbor.  The quantity of
interest is the minimum boundary size over all v-Moser sets.  A minimizer
is a v-fragment; the intersection of all v-fragments is itself a fragment
(the sub-modularity of the boundary makes fragments a lattice), and that
unique minimal fragment drives the auxiliary subgraph used by the main
equality check on point-transitive inputs.

Two engines compute the minimum: exhaustive subset enumeration (the
oracle of record, capped by vertex count) and a min-cut engine on the
vertex-split network.  "both-agree" runs the two and insists they match.
"""

from __future__ import annotations

from dataclasses import dataclass

from ._bitset import mask_of, set_of
from ._flow import FlowNetwork
from .errors import CapacityError, InternalConsistencyError, UsageError
from .relations import (
    Relation,
    boundary,
    image,
    relation_from_successors,
    successor_masks,
)

METHOD_ENUMERATION = "enumeration"
METHOD_FLOW = "flow"
METHOD_BOTH = "both-agree"
_METHODS = (METHOD_ENUMERATION, METHOD_FLOW, METHOD_BOTH)

DEFAULT_ENUMERATION_CAP = 22

_SAMPLE_CAP = 32


@dataclass(frozen=True)
class MoserReport:
    vertex: int
    kappa_v: int
    minimal_fragment: frozenset[int]
    fragments_sample: tuple[frozenset[int], ...]
    method: str


@dataclass(frozen=True)
class ThetaPsi:
    """The fragment subgraph and its nested-fragment neighborhoods.

    theta keeps an edge (x, y) exactly when y lies in the minimal
    x-fragment; psi[x] collects the theta-in-neighbors of x whose minimal
    fragment contains x's own.  On a reflexive relation x always lies in
    psi[x].  minimal_fragments[x] is the minimal x-fragment the
    construction was built from.
    """

    theta: Relation
    psi: tuple[frozenset[int], ...]
    minimal_fragments: tuple[frozenset[int], ...]


def _require_reflexive(rel: Relation) -> None:
    if not rel.reflexive:
        raise UsageError("this operation requires a reflexive relation")


def _check_vertex(rel: Relation, v: int) -> None:
    if not 0 <= v < rel.vertex_count:
        raise UsageError(f"vertex {v} outside 0..{rel.vertex_count - 1}")


def is_moser_set(rel: Relation, v: int, members) -> bool:
    """True iff the set meets the in-neighborhood of v exactly in {v}."""
    _require_reflexive(rel)
    _check_vertex(rel, v)
    return rel.predecessors[v] & frozenset(members) == {v}


def _set_key(fs: frozenset[int]) -> tuple[int, ...]:
    return tuple(sorted(fs))


# -- enumeration engine ------------------------------------------------------


def _kappa_enumeration(rel: Relation, v: int) -> tuple[int, int, list[int]]:
    """Exhaustive scan over admissible sets, as bitmasks.

    Returns (kappa, intersection-of-all-minimizers, first minimizer masks
    capped at the sample bound).  Admissible sets are {v} plus any subset
    of the vertices outside the in-neighborhood of v.
    """
    n = rel.vertex_count
    succ = successor_masks(rel)
    blocked = mask_of(rel.predecessors[v]) & ~(1 << v)
    free = [u for u in range(n) if u != v and not (blocked >> u) & 1]
    f = len(free)
    base_mask = 1 << v
    base_img = succ[v]

    lo = min(f, 16)
    low_img = [0] * (1 << lo)
    low_mask = [0] * (1 << lo)
    for i in range(lo):
        bit = 1 << i
        si = succ[free[i]]
        vi = 1 << free[i]
        for m in range(bit):
            low_img[bit | m] = low_img[m] | si
            low_mask[bit | m] = low_mask[m] | vi

    best = n + 1
    inter = (1 << n) - 1
    samples: list[int] = []
    for hm in range(1 << (f - lo)):
        himg = base_img
        hmask = base_mask
        mm = hm
        while mm:
            low_bit = mm & -mm
            u = free[lo + low_bit.bit_length() - 1]
            himg |= succ[u]
            hmask |= 1 << u
            mm ^= low_bit
        for lm in range(1 << lo):
            x = hmask | low_mask[lm]
            bnd = ((himg | low_img[lm]) & ~x).bit_count()
            if bnd < best:
                best = bnd
                inter = x
                samples = [x]
            elif bnd == best:
                inter &= x
                if len(samples) < _SAMPLE_CAP:
                    samples.append(x)
    return best, inter, samples


# -- flow engine -------------------------------------------------------------


def _kappa_flow(rel: Relation, v: int) -> tuple[int, int, list[int]]:
    """Minimum over two candidate families: vertex cuts toward each vertex
    outside the image of v, and the no-exterior set avoiding the other
    in-neighbors of v.  Exact, and polynomial in the relation size."""
    n = rel.vertex_count
    inf = n + 1
    w_set = rel.predecessors[v] - {v}
    sinks = sorted(frozenset(range(n)) - rel.successors[v])

    candidates: list[tuple[int, int]] = []  # (cut value, minimal source-side mask)
    for t in sinks:
        net = FlowNetwork(2 * n)
        split_edge = [-1] * n
        for w in range(n):
            if w != v:
                split_edge[w] = net.add_edge(2 * w, 2 * w + 1, 1)
        for u in range(n):
            for w in sorted(rel.successors[u]):
                net.add_edge(2 * u + 1, 2 * w, inf)
        for w in sorted(w_set):
            net.add_edge(2 * w + 1, 2 * t, inf)
        value = net.max_flow(2 * v + 1, 2 * t)
        reachable = net.residual_reachable(2 * v + 1)
        x_mask = 0
        for w in range(n):
            if reachable[2 * w + 1]:
                x_mask |= 1 << w
        candidates.append((value, x_mask))

    no_exterior = frozenset(range(n)) - w_set
    if image(rel, no_exterior) == frozenset(range(n)):
        candidates.append((len(w_set), mask_of(no_exterior)))

    if not candidates:
        raise InternalConsistencyError(
            "no candidate family applies; the relation cannot be reflexive"
        )
    kappa = min(value for value, _ in candidates)
    inter = (1 << n) - 1
    masks: list[int] = []
    for value, x_mask in candidates:
        if value == kappa:
            inter &= x_mask
            if x_mask not in masks:
                masks.append(x_mask)
    return kappa, inter, masks[:_SAMPLE_CAP]


# -- public operations -------------------------------------------------------


def kappa_v(
    rel: Relation,
    v: int,
    method: str = METHOD_ENUMERATION,
    *,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> MoserReport:
    """Exact minimum boundary size over v-Moser sets, with the unique
    minimal fragment.

    The minimal fragment is accumulated as the running intersection of
    every minimizer and then re-verified to be a minimizer itself; a
    failure there (or an engine mismatch under "both-agree") raises
    InternalConsistencyError because it can only come from a bug.
    """
    _require_reflexive(rel)
    _check_vertex(rel, v)
    if method not in _METHODS:
        raise UsageError(f"unknown method {method!r}; expected one of {_METHODS}")
    if method in (METHOD_ENUMERATION, METHOD_BOTH) and rel.vertex_count > cap:
        raise CapacityError(
            f"{rel.vertex_count} vertices exceed the enumeration cap {cap}; "
            "use the flow method or raise the cap"
        )

    if method == METHOD_FLOW:
        kappa, inter, sample_masks = _kappa_flow(rel, v)
    else:
        kappa, inter, sample_masks = _kappa_enumeration(rel, v)
        if method == METHOD_BOTH:
            f_kappa, f_inter, _ = _kappa_flow(rel, v)
            if (f_kappa, f_inter) != (kappa, inter):
                raise InternalConsistencyError(
                    f"engines disagree at vertex {v}: enumeration gives "
                    f"({kappa}, {sorted(set_of(inter))}), flow gives "
                    f"({f_kappa}, {sorted(set_of(f_inter))})"
                )

    minimal = set_of(inter)
    if not is_moser_set(rel, v, minimal) or len(boundary(rel, minimal)) != kappa:
        raise InternalConsistencyError(
            f"minimizer intersection at vertex {v} is not itself a minimizer"
        )
    sample = sorted((set_of(m) for m in sample_masks), key=_set_key)
    return MoserReport(
        vertex=v,
        kappa_v=kappa,
        minimal_fragment=minimal,
        fragments_sample=tuple(sample),
        method=method,
    )


def build_theta_psi(
    rel: Relation,
    *,
    method: str = METHOD_ENUMERATION,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> ThetaPsi:
    """Minimal fragments for every vertex, the subgraph they induce, and
    the nested-fragment neighborhoods."""
    _require_reflexive(rel)
    n = rel.vertex_count
    fragments = [
        kappa_v(rel, x, method, cap=cap).minimal_fragment for x in range(n)
    ]
    theta = relation_from_successors(
        [rel.successors[x] & fragments[x] for x in range(n)]
    )
    # psi[x] holds the theta-in-neighbors whose fragment contains K_x; the
    # sub-modular lattice argument makes that automatic for every theta-in-
    # neighbor outside the image of K_x, which is exactly what the
    # inclusion check below relies on
    psi = [
        frozenset(y for y in theta.predecessors[x] if fragments[x] <= fragments[y])
        for x in range(n)
    ]
    return ThetaPsi(
        theta=theta,
        psi=tuple(psi),
        minimal_fragments=tuple(fragments),
    )


def mader_lemma_check(
    rel: Relation,
    *,
    theta_psi: ThetaPsi | None = None,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> tuple[bool, tuple[int, int] | None]:
    """Verify, for every vertex x, that each theta-in-neighbor outside
    psi[x] lies on the boundary of the minimal x-fragment yet outside the
    image of x.  Returns the first violating pair, which would signal an
    implementation bug rather than a property of the input."""
    tp = theta_psi if theta_psi is not None else build_theta_psi(rel, cap=cap)
    for x in range(rel.vertex_count):
        allowed = boundary(rel, tp.minimal_fragments[x]) - rel.successors[x]
        for y in sorted(tp.theta.predecessors[x] - tp.psi[x]):
            if y not in allowed:
                return False, (x, y)
    return True, None


def theta_counting_witness(tp: ThetaPsi) -> int | None:
    """A vertex whose theta-out-degree is at most its theta-in-degree.
    One always exists because the two degree sums agree edge for edge."""
    theta = tp.theta
    for u in range(theta.vertex_count):
        if len(theta.successors[u]) <= len(theta.predecessors[u]):
            return u
    return None


SIDE_FINITE = "finite"
SIDE_COFINITE = "cofinite"


def theorem_main_check(
    rel: Relation,
    v: int,
    members,
    side: str = SIDE_FINITE,
) -> tuple[bool, int]:
    """Boundary lower bound for admissible sets on a point-transitive
    reflexive relation, reported with its margin.

    side="finite": ``members`` is the set F itself, required to be a
    v-Moser set; the bound is out-degree(v) - 1.

    side="cofinite": ``members`` describes F by its complement (the
    finite description of a cofinite set); F must again meet the
    in-neighborhood of v exactly in {v}, and the bound is
    in-degree(v) - 1.

    Point-transitivity is the caller's responsibility (e.g. build the
    relation as a Cayley relation); without it the bound may simply fail.
    """
    _require_reflexive(rel)
    _check_vertex(rel, v)
    if side == SIDE_FINITE:
        fset = frozenset(members)
        if not is_moser_set(rel, v, fset):
            raise UsageError(
                f"F is not admissible: F must meet the in-neighborhood of {v} "
                "exactly in {" + str(v) + "}"
            )
        bound = len(rel.successors[v]) - 1
    elif side == SIDE_COFINITE:
        complement = frozenset(members)
        fset = frozenset(range(rel.vertex_count)) - complement
        if rel.predecessors[v] & fset != {v}:
            raise UsageError(
                f"the complement-described set must meet the in-neighborhood "
                f"of {v} exactly in {{{v}}}"
            )
        bound = len(rel.predecessors[v]) - 1
    else:
        raise UsageError(f"unknown side {side!r}; expected finite or cofinite")
    value = len(boundary(rel, fset))
    return value >= bound, value - bound
