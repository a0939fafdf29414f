"""Blow-up Whitney (shadow) forms on a simplex.

Construction path: the classical Whitney form of a vertex set, its
dilation-invariant homogenization, arrival-order probabilities computed by
enumerating admissible particle interleavings, and the basis forms

    psi_F = p_F * omega_F,   omega_F = wedge_j omega_{V_j}  (block order).

All identities asserted here are exact; anything that only holds on the
simplex is compared after tangential restriction to the slice l_V = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations

from .flagcomb import Flag, enumerate_arrival_sequences, enumerate_flags, vertex_set
from .symexpr import (
    Poly,
    RationalFn,
    RationalForm,
    flag_limit,
    forms_equal_on_simplex,
)


class DecompositionFailed(ArithmeticError):
    """The exterior derivative could not be written with unit coefficients."""


class IdentityFailed(ArithmeticError):
    """A symbolic identity that must hold exactly failed to verify."""


def whitney_form(W) -> RationalForm:
    """The Whitney form of a vertex set, normalized to unit simplex integral.

    phi_W = n! * i_X(dlambda_W) with n = |W| - 1, the wedge taken in
    ascending index order and X the tautological field on the W variables.
    """
    W = vertex_set(W)
    n = len(W) - 1
    top = RationalForm(len(W), {frozenset(W): RationalFn.const(math.factorial(n))})
    return top.contract_tautological(W)


def omega_form(W) -> RationalForm:
    """Homogenized Whitney form: phi_W / l_W^{|W|}, dilation-invariant."""
    W = vertex_set(W)
    scale = RationalFn.one().over_subset_sum(W, len(W))
    return whitney_form(W) * scale


def poisson_probability(flag: Flag) -> RationalFn:
    """Probability that the blocks complete in flag order.

    Sums, over admissible interleavings of block-labeled particles, the
    product of per-receipt odds: a particle of block j arrives next with
    relative rate l_{V_j} out of the total rate of all not-yet-completed
    blocks.  Completed blocks stop contributing to the denominator.
    """
    blocks = flag.blocks
    total = RationalFn.zero()
    for word in enumerate_arrival_sequences(flag):
        remaining = list(flag.block_sizes)
        num = Poly.const(1)
        den: dict[frozenset, int] = {}
        for label in word:
            active = frozenset(v for j, b in enumerate(blocks) if remaining[j] for v in b)
            num = num * Poly.subset_sum(blocks[label])
            den[active] = den.get(active, 0) + 1
            remaining[label] -= 1
        total = total + RationalFn(num, den)
    return total


@dataclass(frozen=True)
class ShadowBasisElement:
    flag: Flag
    form: RationalForm
    probability: RationalFn
    omega: RationalForm


def basis_element(flag: Flag) -> ShadowBasisElement:
    p = poisson_probability(flag)
    omega = RationalForm.function(RationalFn.one())
    for b in flag.blocks:
        omega = omega.wedge(omega_form(b))
    return ShadowBasisElement(flag=flag, form=omega * p, probability=p, omega=omega)


def shadow_basis(V, k: int) -> list[ShadowBasisElement]:
    """The psi_F basis for all flags on V with the given k, canonical order."""
    return [basis_element(F) for F in enumerate_flags(V, k)]


def d_decomposition(flag: Flag) -> list[tuple[int, Flag]]:
    """Write d(psi_F) as a signed sum of psi over one-merge coarsenings.

    The coefficients are solved for by applying the dual degrees of freedom,
    then the full identity is verified symbolically on the simplex; each
    coefficient must be +1 or -1.  Top-degree flags return the empty list.
    """
    from .dof import dof_evaluate  # deferred: dof depends on this module's basis

    V = flag.vertices
    if flag.k == flag.n:
        return []
    dpsi = basis_element(flag).form.exterior_derivative()
    out: list[tuple[int, Flag]] = []
    recon = RationalForm.zero(flag.k + 1)
    for j in range(1, len(flag.blocks)):
        Fj = flag.coarsen(j)
        c = dof_evaluate(Fj, dpsi)
        if c not in (1, -1):
            raise DecompositionFailed(f"coefficient {c} for {Fj} in d(psi_{flag})")
        out.append((int(c), Fj))
        recon = recon + basis_element(Fj).form * c
    if not forms_equal_on_simplex(dpsi, recon, V):
        raise DecompositionFailed(f"d(psi_{flag}) != signed sum of coarsenings")
    return out


def whitney_containment(W, V) -> list[Flag]:
    """Flags whose psi sum reproduces the classical Whitney form phi_W on T_V.

    These are the flags with first block W followed by the singletons of
    V - W in every order; the identity is verified before returning.
    """
    W = vertex_set(W)
    V = vertex_set(V)
    if not set(W) <= set(V):
        raise ValueError("W must be a subset of V")
    others = tuple(v for v in V if v not in set(W))
    flags = [Flag((W,) + tuple((v,) for v in order)) for order in permutations(others)]
    flags.sort()
    total = RationalForm.zero(len(W) - 1)
    for F in flags:
        total = total + basis_element(F).form
    if not forms_equal_on_simplex(total, whitney_form(W), V):
        raise IdentityFailed(f"sum of psi over {len(flags)} flags != phi_{W}")
    return flags


def reduce_dimension(flag: Flag) -> tuple[Flag, bool]:
    """Drop the last block; verify p_{F'} is the limit of p_F at that block."""
    if len(flag.blocks) < 2:
        raise ValueError("need at least two blocks to reduce")
    reduced = Flag(flag.blocks[:-1])
    limit = flag_limit(poisson_probability(flag), flag, len(flag.blocks) - 1)
    verified = limit == poisson_probability(reduced)
    return reduced, verified
