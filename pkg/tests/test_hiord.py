from fractions import Fraction

import pytest

from blowupforms.flagcomb import Flag, enumerate_flags
from blowupforms.hiord import (
    enumerate_experiments,
    face_vanishing_check,
    independence_rank,
    pr_containment,
    r1_reduction_check,
)
from blowupforms.symexpr import Poly, RationalFn


def l(*ids):
    return frozenset(ids)


def by_sequence(candidates):
    return {c.sequence.compact(): c for c in candidates}


def test_census_n2_r3_is_19():
    cands = enumerate_experiments((0, 1, 2), 3)
    assert len(cands) == 19
    by_flag = {}
    for c in cands:
        by_flag.setdefault(c.flag, []).append(c)
    # one per vertex, two per edge, one per face of the blown-up triangle
    sizes = sorted(len(v) for v in by_flag.values())
    full = [F for F in by_flag if len(F.blocks) == 3]
    edges = [F for F in by_flag if len(F.blocks) == 2]
    assert len(full) == 6 and all(len(by_flag[F]) == 1 for F in full)
    assert len(edges) == 6 and all(len(by_flag[F]) == 2 for F in edges)
    assert len(by_flag[Flag.parse("0,1,2")]) == 1


def test_reference_rows_n2_r3():
    cands = by_sequence(enumerate_experiments((0, 1, 2), 3))
    V3 = {l(0, 1, 2): 3}
    rows = {
        "000|111|222": RationalFn(Poly.var(0, 3) * Poly.var(1, 3),
                                  {l(0, 1, 2): 3, l(1, 2): 3}),
        "001|222": RationalFn(Poly.var(0, 2) * Poly.var(1) * 3, V3),
        "011|222": RationalFn(Poly.var(0) * Poly.var(1, 2) * 3, V3),
        "000|112": RationalFn(Poly.var(0, 3) * Poly.var(1, 2) * Poly.var(2) * 3,
                              {l(0, 1, 2): 3, l(1, 2): 3}),
        "000|122": RationalFn(Poly.var(0, 3) * Poly.var(1) * Poly.var(2, 2) * 3,
                              {l(0, 1, 2): 3, l(1, 2): 3}),
        "012": RationalFn(Poly.var(0) * Poly.var(1) * Poly.var(2) * 6, V3),
    }
    for seq, expected in rows.items():
        assert cands[seq].probability == expected, seq


def test_round_factor_coefficients_match_multinomials():
    cands = by_sequence(enumerate_experiments((0, 1, 2), 3))
    # 3 = 3!/2! and 6 = 3!
    assert cands["001|222"].probability.num.terms
    coeff = next(iter(cands["012"].probability.num.terms.values()))
    assert coeff == 6


@pytest.mark.parametrize("nv,r", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3), (4, 1), (4, 2), (4, 3)])
def test_probabilities_sum_to_one(nv, r):
    total = RationalFn.zero()
    for c in enumerate_experiments(tuple(range(nv)), r):
        total = total + c.probability
    assert total == RationalFn.one()


@pytest.mark.parametrize("nv,r", [(2, 2), (3, 3), (4, 2)])
def test_probabilities_positive_at_barycenter(nv, r):
    point = {i: Fraction(1, nv) for i in range(nv)}
    for c in enumerate_experiments(tuple(range(nv)), r):
        val = c.probability.evaluate(point)
        assert 0 < val <= 1
        assert c.probability.is_homogeneous(0)


@pytest.mark.parametrize("nv", [2, 3, 4])
def test_r1_reduces_to_shadow_scalars(nv):
    assert r1_reduction_check(tuple(range(nv)))


def test_independence_ranks():
    assert independence_rank(enumerate_experiments((0, 1, 2), 1)) == 6
    assert independence_rank(enumerate_experiments((0, 1, 2), 3)) == 19
    cands = enumerate_experiments((0, 1), 2)
    assert independence_rank(cands) == len(cands) == 3


@pytest.mark.parametrize("nv,r", [(1, 1), (2, 1), (2, 2), (2, 3), (3, 2)])
def test_pr_containment(nv, r):
    assert pr_containment(tuple(range(nv + 1)), r)


def test_containment_recovers_affine_identity():
    # grouping r=1 candidates on the triangle by first receipt gives lambda_i/l_V
    cands = enumerate_experiments((0, 1, 2), 1)
    groups = {}
    for c in cands:
        first = c.sequence.silenced[0][0]
        groups[first] = groups.get(first, RationalFn.zero()) + c.probability
    for i in range(3):
        assert groups[i] == RationalFn(Poly.var(i), {l(0, 1, 2): 1})


def test_face_vanishing_all_pairs_n2():
    faces = [F for k in range(3) for F in enumerate_flags((0, 1, 2), k)]
    for r in (1, 2, 3):
        for c in enumerate_experiments((0, 1, 2), r):
            for F in faces:
                assert face_vanishing_check(c, F)


def test_face_vanishing_examples():
    cands = by_sequence(enumerate_experiments((0, 1, 2), 3))
    c = cands["001|222"]  # flag {01}2
    assert c.flag == Flag.parse("0,1|2")
    # nonzero on its own face, zero on a non-coarsening
    assert face_vanishing_check(c, Flag.parse("0,1|2"))
    full_round = cands["012"]  # flag {012}
    assert full_round.flag == Flag.parse("0,1,2")
    assert face_vanishing_check(full_round, Flag.parse("0,1|2"))
    # any candidate survives on the all-of-V face
    for c in cands.values():
        assert face_vanishing_check(c, Flag.parse("0,1,2"))
