"""Weak connectivity, weak fragments, and weak atoms of a reflexive relation.

The weak connectivity of a relation is the minimum boundary size over a
range of vertex sets; a minimizer is a weak fragment and a fragment of
minimum cardinality is a weak atom.  On a finite vertex set the minimum
taken over *all* nonempty sets is always 0 (the full vertex set has empty
boundary), so two variants of the range are exposed:

* "paper-definition": nonempty X, including X = V;
* "proper-subset":    nonempty X strictly contained in V.

Both are exact; reports carry the variant used.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from ._bitset import mask_of, set_of
from .errors import CapacityError, UsageError
from .relations import Relation, successor_masks

PAPER_DEFINITION = "paper-definition"
PROPER_SUBSET = "proper-subset"

DEFAULT_ENUMERATION_CAP = 22

_FRAGMENT_SAMPLE_CAP = 32


@dataclass(frozen=True)
class WeakFragmentReport:
    """Exact weak connectivity plus witnesses.

    ``fragments`` holds the first minimizer found at each cardinality that
    attains kappa (enumeration order: cardinality, then lexicographic);
    ``atoms`` holds every minimum-cardinality minimizer.
    """

    kappa: int
    variant: str
    fragments: tuple[frozenset[int], ...]
    atoms: tuple[frozenset[int], ...]


@dataclass(frozen=True)
class AtomPartition:
    holds: bool
    atoms: tuple[frozenset[int], ...]
    atom_of: tuple[int | None, ...]


def _require_reflexive(rel: Relation) -> None:
    if not rel.reflexive:
        raise UsageError("this operation requires a reflexive relation")


def _set_key(fs: frozenset[int]) -> tuple[int, ...]:
    return tuple(sorted(fs))


def weak_connectivity(
    rel: Relation,
    variant: str = PROPER_SUBSET,
    *,
    cap: int = DEFAULT_ENUMERATION_CAP,
    flow_fallback: bool = False,
) -> WeakFragmentReport:
    """Exact minimum boundary size over the variant's subset range.

    Below ``cap`` vertices every admissible subset is enumerated.  Above
    the cap a closure-based engine is used instead when ``flow_fallback``
    is set; it returns the same kappa and atoms but samples witnesses from
    minimal closures rather than scanning every cardinality.
    """
    _require_reflexive(rel)
    if variant not in (PAPER_DEFINITION, PROPER_SUBSET):
        raise UsageError(f"unknown weak-connectivity variant {variant!r}")
    n = rel.vertex_count
    max_k = n if variant == PAPER_DEFINITION else n - 1
    if max_k < 1:
        raise UsageError(
            "the proper-subset variant has no admissible subsets on a "
            "single-vertex relation"
        )
    if n > cap:
        if not flow_fallback:
            raise CapacityError(
                f"{n} vertices exceed the enumeration cap {cap}; "
                "enable flow_fallback for the closure engine"
            )
        return _weak_connectivity_closure(rel, variant)

    succ = successor_masks(rel)
    minval: list[int | None] = [None] * (max_k + 1)
    first_mask: list[int | None] = [None] * (max_k + 1)
    best = n + 1
    for k in range(1, max_k + 1):
        k_min: int | None = None
        k_first: int | None = None
        for combo in itertools.combinations(range(n), k):
            x = mask_of(combo)
            img = 0
            pruned = False
            for v in combo:
                img |= succ[v]
                # partial boundary only grows, so this prune is safe
                if (img & ~x).bit_count() > best:
                    pruned = True
                    break
            if pruned:
                continue
            val = (img & ~x).bit_count()
            if k_min is None or val < k_min:
                k_min, k_first = val, x
            if val < best:
                best = val
        minval[k] = k_min
        first_mask[k] = k_first
    kappa = best

    fragments = tuple(
        set_of(first_mask[k])
        for k in range(1, max_k + 1)
        if minval[k] == kappa and first_mask[k] is not None
    )
    k_star = min(k for k in range(1, max_k + 1) if minval[k] == kappa)
    atoms = []
    for combo in itertools.combinations(range(n), k_star):
        x = mask_of(combo)
        img = 0
        for v in combo:
            img |= succ[v]
        if (img & ~x).bit_count() == kappa:
            atoms.append(frozenset(combo))
    return WeakFragmentReport(
        kappa=kappa,
        variant=variant,
        fragments=fragments,
        atoms=tuple(sorted(atoms, key=_set_key)),
    )


def _closure_avoiding(rel: Relation, start: int, avoid: int | None) -> frozenset[int]:
    # smallest set containing start whose successors stay inside, except
    # that `avoid` may be left outside (it then forms the whole boundary)
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in rel.successors[v]:
            if w != avoid and w not in seen:
                seen.add(w)
                stack.append(w)
    return frozenset(seen)


def _weak_connectivity_closure(rel: Relation, variant: str) -> WeakFragmentReport:
    n = rel.vertex_count
    full = frozenset(range(n))
    closures = {_closure_avoiding(rel, s, None) for s in range(n)}
    proper_closed = {c for c in closures if c != full}

    if variant == PAPER_DEFINITION:
        witnesses = closures | {full}
        kappa = 0
    elif proper_closed:
        witnesses = proper_closed
        kappa = 0
    else:
        # no proper closed set: kappa is 1 and every minimum-cardinality
        # fragment is a closure of a single vertex avoiding one other vertex
        kappa = 1
        witnesses = {
            _closure_avoiding(rel, s, c)
            for s in range(n)
            for c in range(n)
            if c != s
        }
    min_size = min(len(w) for w in witnesses)
    atoms = tuple(sorted((w for w in witnesses if len(w) == min_size), key=_set_key))
    sample = tuple(
        sorted(witnesses, key=lambda w: (len(w), _set_key(w)))[:_FRAGMENT_SAMPLE_CAP]
    )
    return WeakFragmentReport(kappa=kappa, variant=variant, fragments=sample, atoms=atoms)


def atoms_partition_check(
    rel: Relation,
    *,
    cap: int = DEFAULT_ENUMERATION_CAP,
    flow_fallback: bool = False,
) -> AtomPartition:
    """Whether the weak atoms cover every vertex exactly once.

    The proper-subset variant is used (on a single vertex there is no
    proper subset, so the full-range variant applies there).  True is
    expected whenever the caller supplies a point-transitive relation,
    e.g. any Cayley relation.
    """
    _require_reflexive(rel)
    variant = PROPER_SUBSET if rel.vertex_count > 1 else PAPER_DEFINITION
    report = weak_connectivity(rel, variant, cap=cap, flow_fallback=flow_fallback)
    atom_of: list[int | None] = [None] * rel.vertex_count
    holds = True
    for i, atom in enumerate(report.atoms):
        for v in atom:
            if atom_of[v] is not None:
                holds = False
            else:
                atom_of[v] = i
    if any(slot is None for slot in atom_of):
        holds = False
    return AtomPartition(holds=holds, atoms=report.atoms, atom_of=tuple(atom_of))
