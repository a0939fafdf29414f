"""Frozen expected values for the reference basis tables.

Each entry is rebuilt from its displayed closed form: explicit probability
prefactors times wedges of the normalized Whitney forms, with homogenizing
subset-sum powers exactly as printed.  These serve as the oracles for the
basis constructors; any discrepancy beyond a single global sign per entry
is a failure.
"""

from blowupforms.shadow import whitney_form
from blowupforms.symexpr import Poly, RationalFn, RationalForm


def l(*ids):
    return frozenset(ids)


def v(i, e=1):
    return Poly.var(i, e)


def table_n2():
    phi01 = whitney_form((0, 1))
    phi12 = whitney_form((1, 2))
    phi012 = whitney_form((0, 1, 2))
    inv = RationalFn.one()
    return {
        "0|1|2": RationalForm.function(RationalFn(v(0) * v(1), {l(0, 1, 2): 1, l(1, 2): 1})),
        "0,1|2": phi01 * inv.over_subset_sum((0, 1, 2), 2),
        "0|1,2": (phi12 * RationalFn(v(0), {l(0, 1, 2): 1, l(1, 2): 1})
                  * (inv.over_subset_sum((0, 1, 2)) + inv.over_subset_sum((1, 2)))),
        "0,1,2": phi012 * inv.over_subset_sum((0, 1, 2), 3),
    }


def table_n3():
    phi01 = whitney_form((0, 1))
    phi12 = whitney_form((1, 2))
    phi23 = whitney_form((2, 3))
    phi012 = whitney_form((0, 1, 2))
    phi123 = whitney_form((1, 2, 3))
    phi0123 = whitney_form((0, 1, 2, 3))
    inv = RationalFn.one()
    V = (0, 1, 2, 3)
    return {
        "0|1|2|3": RationalForm.function(
            RationalFn(v(0) * v(1) * v(2), {l(*V): 1, l(1, 2, 3): 1, l(2, 3): 1})
        ),
        "0,1|2|3": phi01 * RationalFn(v(2), {l(*V): 2, l(2, 3): 1}),
        "0|1,2|3": phi12 * (RationalFn(v(0), {l(*V): 1, l(1, 2, 3): 1})
                            * (inv.over_subset_sum(V) + inv.over_subset_sum((1, 2, 3)))),
        "0|1|2,3": phi23 * (RationalFn(v(0) * v(1), {l(*V): 1, l(1, 2, 3): 1, l(2, 3): 1})
                            * (inv.over_subset_sum(V) + inv.over_subset_sum((1, 2, 3))
                               + inv.over_subset_sum((2, 3)))),
        "0,1|2,3": phi01.wedge(phi23) * (RationalFn(Poly.const(1), {l(*V): 2, l(2, 3): 1})
                                         * (inv.over_subset_sum(V) * 2
                                            + inv.over_subset_sum((2, 3)))),
        "0,1,2|3": phi012 * inv.over_subset_sum(V, 3),
        "0|1,2,3": phi123 * (RationalFn(v(0), {l(*V): 1, l(1, 2, 3): 1})
                             * (inv.over_subset_sum(V, 2)
                                + inv.over_subset_sum(V).over_subset_sum((1, 2, 3))
                                + inv.over_subset_sum((1, 2, 3), 2))),
        "0,1,2,3": phi0123 * inv.over_subset_sum(V, 4),
    }


def table_r3_scalars():
    """The six displayed degree-3 arrival rows on the triangle."""
    V3 = {l(0, 1, 2): 3}
    both = {l(0, 1, 2): 3, l(1, 2): 3}
    return {
        "000|111|222": RationalFn(v(0, 3) * v(1, 3), both),
        "001|222": RationalFn(v(0, 2) * v(1) * 3, V3),
        "011|222": RationalFn(v(0) * v(1, 2) * 3, V3),
        "000|112": RationalFn(v(0, 3) * v(1, 2) * v(2) * 3, both),
        "000|122": RationalFn(v(0, 3) * v(1) * v(2, 2) * 3, both),
        "012": RationalFn(v(0) * v(1) * v(2) * 6, V3),
    }
