"""Per-vertex Moser sets: connectivity values, minimal fragments, the
fragment subgraph, and the boundary lower-bound checks."""

from __future__ import annotations

import random

import pytest

import oracles
from mskw import (
    CapacityError,
    InternalConsistencyError,
    UsageError,
    METHOD_BOTH,
    METHOD_ENUMERATION,
    METHOD_FLOW,
    boundary,
    build_theta_psi,
    cayley,
    cyclic,
    dihedral,
    is_moser_set,
    kappa_v,
    mader_lemma_check,
    quaternion,
    random_reflexive_relation,
    relation_from_successors,
    subset,
    symmetric,
    theorem_main_check,
    theta_counting_witness,
    translate_left,
)

# fixed 5-vertex reflexive digraph whose fragment subgraph keeps more
# than the loops but fewer than all edges (found by seeded search)
FIVE_VERTEX = relation_from_successors(
    [(0, 2, 3), (0, 1, 4), (0, 1, 2, 3), (0, 3), (1, 3, 4)]
)


def test_is_moser_set_examples():
    rel = cayley(cyclic(5), {0, 1, 2})
    assert is_moser_set(rel, 0, {0})
    assert not is_moser_set(rel, 0, {0, 3})  # 3 is an in-neighbor of 0
    assert not is_moser_set(rel, 0, ())


def test_kappa_v_on_three_generator_cycle():
    rel = cayley(cyclic(5), {0, 1, 2})
    kappa, core, fragments = oracles.moser_fragments(rel.successors, 0)
    assert (kappa, core) == (2, frozenset({0}))
    report = kappa_v(rel, 0, METHOD_BOTH)
    assert report.kappa_v == 2
    assert report.minimal_fragment == frozenset({0})
    assert set(report.fragments_sample) <= set(fragments)


@pytest.mark.parametrize("n", [3, 5, 8])
def test_kappa_v_on_shift_cycles(n):
    rel = cayley(cyclic(n), {0, 1})
    for v in range(n):
        report = kappa_v(rel, v, METHOD_BOTH)
        assert report.kappa_v == 1
        assert report.minimal_fragment == frozenset({v})


def test_kappa_v_identity_only_generators():
    rel = cayley(cyclic(6), {0})
    report = kappa_v(rel, 2, METHOD_BOTH)
    assert report.kappa_v == 0
    assert report.minimal_fragment == frozenset({2})


@pytest.mark.parametrize(
    "group,gens",
    [
        (cyclic(9), {0, 1}),
        (cyclic(12), {0, 2, 5}),
        (dihedral(4), {0, 1, 4}),
        (dihedral(5), {0, 1, 2, 5}),
        (symmetric(3), {0, 1, 3}),
        (quaternion(), {0, 2, 4}),
    ],
    ids=["z9", "z12", "d4", "d5", "s3", "q8"],
)
def test_point_transitive_equality(group, gens):
    rel = cayley(group, gens)
    for v in (0, group.order - 1):
        report = kappa_v(rel, v, METHOD_BOTH)
        assert report.kappa_v == len(rel.successors[v]) - 1
        assert report.minimal_fragment == frozenset({v})


@pytest.mark.parametrize("seed", range(15))
def test_kappa_v_matches_brute_force_oracle(seed):
    rng = random.Random(seed)
    rel = random_reflexive_relation(rng.randint(2, 8), 0.45, rng)
    v = rng.randrange(rel.vertex_count)
    kappa, core, fragments = oracles.moser_fragments(rel.successors, v)
    for method in (METHOD_ENUMERATION, METHOD_FLOW, METHOD_BOTH):
        report = kappa_v(rel, v, method)
        assert report.kappa_v == kappa, method
        assert report.minimal_fragment == core, method
    # minimality: the core sits inside every fragment
    for fragment in fragments:
        assert core <= fragment


@pytest.mark.parametrize("seed", range(10))
def test_moser_lattice_property(seed):
    rng = random.Random(300 + seed)
    rel = random_reflexive_relation(rng.randint(2, 7), 0.5, rng)
    v = 0
    kappa, _, fragments = oracles.moser_fragments(rel.successors, v)
    preds_v = rel.predecessors[v]
    for f1 in fragments:
        for f2 in fragments:
            for combined in (f1 | f2, f1 & f2):
                assert combined & preds_v == {v}
                assert len(boundary(rel, combined)) == kappa


def test_kappa_v_validation():
    rel = cayley(cyclic(5), {0, 1})
    with pytest.raises(UsageError):
        kappa_v(rel, 9)
    with pytest.raises(UsageError):
        kappa_v(rel, 0, "guess")
    with pytest.raises(UsageError):
        kappa_v(cayley(cyclic(5), {1}), 0)
    with pytest.raises(CapacityError):
        kappa_v(cayley(cyclic(9), {0, 1}), 0, cap=8)
    # the flow engine has no enumeration cap
    assert kappa_v(cayley(cyclic(9), {0, 1}), 0, METHOD_FLOW, cap=8).kappa_v == 1


def test_theta_psi_on_point_transitive_input_keeps_only_loops():
    rel = cayley(cyclic(6), {0, 1, 3})
    tp = build_theta_psi(rel)
    for x in range(6):
        assert tp.minimal_fragments[x] == frozenset({x})
        assert tp.theta.successors[x] == frozenset({x})
        assert tp.psi[x] == frozenset({x})


def test_theta_psi_single_vertex():
    tp = build_theta_psi(relation_from_successors([{0}]))
    assert tp.theta.successors == (frozenset({0}),)
    assert tp.psi == (frozenset({0}),)


def test_theta_psi_on_fixed_five_vertex_fixture():
    # independent recomputation of every minimal fragment
    expected = [
        oracles.moser_fragments(FIVE_VERTEX.successors, v)[1] for v in range(5)
    ]
    tp = build_theta_psi(FIVE_VERTEX)
    assert list(tp.minimal_fragments) == expected
    theta_edges = sum(len(s) for s in tp.theta.successors)
    total_edges = sum(len(s) for s in FIVE_VERTEX.successors)
    assert 5 < theta_edges < total_edges
    for x in range(5):
        assert tp.theta.successors[x] == FIVE_VERTEX.successors[x] & expected[x]
        assert x in tp.psi[x]
    ok, pair = mader_lemma_check(FIVE_VERTEX, theta_psi=tp)
    assert ok and pair is None


def test_theta_edges_are_host_edges_and_psi_contains_self():
    rng = random.Random(77)
    for _ in range(8):
        rel = random_reflexive_relation(rng.randint(2, 7), 0.4, rng)
        tp = build_theta_psi(rel)
        for x in range(rel.vertex_count):
            assert tp.theta.successors[x] <= rel.successors[x]
            assert x in tp.psi[x]


def test_mader_lemma_on_loops_only_relation():
    loops = relation_from_successors([{0}, {1}, {2}])
    ok, pair = mader_lemma_check(loops)
    assert ok and pair is None


@pytest.mark.parametrize("seed", range(20))
def test_mader_lemma_on_random_fixtures(seed):
    rng = random.Random(8000 + seed)
    rel = random_reflexive_relation(rng.randint(2, 8), 0.45, rng)
    ok, pair = mader_lemma_check(rel)
    assert ok, (rel.successors, pair)
    # the inclusion, recomputed directly from the definitions
    tp = build_theta_psi(rel)
    for x in range(rel.vertex_count):
        allowed = boundary(rel, tp.minimal_fragments[x]) - rel.successors[x]
        assert tp.theta.predecessors[x] - tp.psi[x] <= allowed


def test_theta_counting_witness_exists():
    rng = random.Random(4)
    fixtures = [cayley(cyclic(7), {0, 1, 5}), FIVE_VERTEX]
    fixtures += [random_reflexive_relation(rng.randint(2, 7), 0.4, rng) for _ in range(6)]
    for rel in fixtures:
        tp = build_theta_psi(rel)
        u = theta_counting_witness(tp)
        assert u is not None
        assert len(tp.theta.successors[u]) <= len(tp.theta.predecessors[u])


def test_theorem_main_check_finite_examples():
    rel = cayley(cyclic(7), {0, 1, 2})
    ok, margin = theorem_main_check(rel, 0, {0}, "finite")
    assert ok and margin == 0
    ok, margin = theorem_main_check(rel, 0, {0, 1, 2}, "finite")
    assert ok and margin == 0  # FS covers {0..4}, boundary 2 vs bound 2

    rel6 = cayley(cyclic(6), {0, 1})
    ok, margin = theorem_main_check(rel6, 0, {0, 2, 4}, "finite")
    assert ok and margin == 2  # boundary {1,3,5} against bound 1


def test_theorem_main_check_cofinite_side():
    rel6 = cayley(cyclic(6), {0, 1})
    # F described by its complement {1,3,5}; the actual set is {0,2,4}
    ok, margin = theorem_main_check(rel6, 0, {1, 3, 5}, "cofinite")
    assert ok and margin == 2
    with pytest.raises(UsageError):
        theorem_main_check(rel6, 0, {1, 3}, "cofinite")  # 5 stays in F


def test_theorem_main_check_precondition_errors():
    rel = cayley(cyclic(5), {0, 1, 2})
    with pytest.raises(UsageError, match="admissible"):
        theorem_main_check(rel, 0, {0, 3}, "finite")
    with pytest.raises(UsageError):
        theorem_main_check(rel, 0, {0}, "sideways")


def test_minimal_fragment_translation_equivariance():
    for group, gens in ((cyclic(8), {0, 1, 3}), (symmetric(3), {0, 2, 3})):
        rel = cayley(group, gens)
        base = kappa_v(rel, 0).minimal_fragment
        for g in range(group.order):
            translated = translate_left(g, subset(group, base)).members
            assert kappa_v(rel, g).minimal_fragment == translated
