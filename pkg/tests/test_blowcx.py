import pytest

from blowupforms.blowcx import betti_numbers, build_blowup_complex
from blowupforms.flagcomb import Flag


@pytest.mark.parametrize("nv,fvec", [(2, (2, 1)), (3, (6, 6, 1)), (4, (24, 36, 14, 1))])
def test_f_vectors(nv, fvec):
    cx = build_blowup_complex(tuple(range(nv)))
    assert cx.f_vector == fvec


@pytest.mark.parametrize("nv", [2, 3, 4, 5])
def test_euler_characteristic_is_one(nv):
    import math

    def stirling2(n, m):
        if n == m == 0:
            return 1
        if n == 0 or m == 0:
            return 0
        return m * stirling2(n - 1, m) + stirling2(n - 1, m - 1)

    total = 0
    for k in range(nv):
        m = nv - k
        total += (-1) ** k * stirling2(nv, m) * math.factorial(m)
    assert total == 1


@pytest.mark.parametrize("nv,betti", [(2, (1, 0)), (3, (1, 0, 0)), (4, (1, 0, 0, 0))])
def test_betti_numbers(nv, betti):
    cx = build_blowup_complex(tuple(range(nv)))
    assert betti_numbers(cx) == betti


def test_coboundary_support_is_the_coarsening_relation():
    cx = build_blowup_complex((0, 1, 2, 3))
    for k in range(3):
        rows = cx.cells[k + 1]
        cols = cx.cells[k]
        for ri, row in enumerate(cx.coboundary[k]):
            for ci, val in enumerate(row):
                F, Fp = cols[ci], rows[ri]
                merges = {F.coarsen(j) for j in range(1, len(F.blocks))}
                if val:
                    assert val in (1, -1)
                    assert Fp in merges
                else:
                    assert Fp not in merges


def test_coboundary_squares_to_zero():
    cx = build_blowup_complex((0, 1, 2, 3))
    for k in range(2):
        A, B = cx.coboundary[k + 1], cx.coboundary[k]
        for i in range(len(A)):
            for j in range(len(B[0])):
                assert sum(A[i][m] * B[m][j] for m in range(len(B))) == 0


def test_vertex_set_cap():
    with pytest.raises(ValueError):
        build_blowup_complex(tuple(range(7)))
