"""Degrees of freedom: sequential flag limits plus exact integration.

The functional attached to a flag F restricts a k-form to the product of
block simplices Theta_F = prod_j T_{V_j}, takes the sequential dilation
limits toward the corresponding blow-up face (last block first), and
integrates exactly.  Orientation conventions: each block simplex carries
the ascending-vertex orientation with the block-maximal coordinate
eliminated, and Theta_F is oriented as the product in block order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .flagcomb import Flag, enumerate_flags, vertex_set
from .symexpr import Poly, RationalFn, RationalForm, flag_limit


class NonPolynomialResidue(ArithmeticError):
    """The restricted integrand kept a denominator no block can absorb."""


class UnisolvenceError(ArithmeticError):
    """The DOF/basis pairing failed to be the identity matrix."""


@dataclass(frozen=True)
class ThetaFace:
    """The face of the blow-up attached to a flag: a product of simplices."""

    flag: Flag

    @property
    def factors(self) -> tuple[tuple[int, ...], ...]:
        return self.flag.blocks

    @property
    def dimension(self) -> int:
        return self.flag.k


def integrate_monomial_simplex(W, exponents: dict[int, int]) -> Fraction:
    """Integral of a barycentric monomial against the normalized volume form.

    For W of size n+1:  int_{T_W} prod theta_i^{a_i} omega_W
    = n! * (prod a_i!) / (n + sum a_i)!.
    """
    W = vertex_set(W)
    if any(v not in W for v in exponents):
        raise ValueError("exponents must be supported on W")
    n = len(W) - 1
    num = math.factorial(n)
    total = 0
    for a in exponents.values():
        if a < 0:
            raise ValueError("exponents must be non-negative")
        num *= math.factorial(a)
        total += a
    return Fraction(num, math.factorial(n + total))


def _eta_integral(block: tuple[int, ...], exponents: dict[int, int]) -> Fraction:
    """Integral of a monomial against the reduced coordinate wedge on T_block.

    The reduced wedge is the ascending product of dtheta_i over the
    non-maximal block vertices; relative to the ascending orientation it is
    (-1)^{n_j} / n_j! times the normalized volume form.
    """
    nj = len(block) - 1
    val = integrate_monomial_simplex(block, exponents) / math.factorial(nj)
    return -val if nj % 2 else val


def restrict_to_theta(form: RationalForm, flag: Flag) -> RationalForm:
    """Pull a k-form back to Theta_F and take the sequential limits.

    Steps: (1) keep only components tangential to Theta by rewriting each
    block-maximal dlambda modulo the block radius differential and dropping
    radial directions, (2) rescale each surviving dlambda by its block
    radius so coefficients are taken against dtheta, (3) apply the dilation
    limits for j = n-k down to 1, (4) restrict each block to its simplex
    (full-block subset sums drop; singleton-block variables pin to 1).

    The returned form reuses the lambda indices as coordinates theta_i on
    Theta_F.  DivergentLimit propagates from step (3).
    """
    if form.degree != flag.k:
        raise ValueError(f"form degree {form.degree} != flag k {flag.k}")
    foreign = form.variables() - set(flag.vertices)
    if foreign:
        raise ValueError(f"form uses variables {sorted(foreign)} outside the flag's vertex set")
    blocks = flag.blocks
    # images of each dlambda under the tangential reduction
    images: dict[int, list[tuple[int, int]]] = {}
    radius: dict[int, frozenset] = {}
    for b in blocks:
        S = frozenset(b)
        if len(b) == 1:
            images[b[0]] = []  # pure radial direction
            radius[b[0]] = S
            continue
        m = max(b)
        images[m] = [(-1, i) for i in b if i != m]
        for i in b:
            radius[i] = S

    reduced: dict[frozenset, RationalFn] = {}
    for W, f in form.terms.items():
        sw = tuple(sorted(W))
        choices: list[list[tuple[int, int]]] = []
        for w in sw:
            choices.append(images.get(w, [(1, w)]))
        # multilinear expansion of the substituted wedge
        stack = [(0, 1, ())]
        while stack:
            idx, sign, picked = stack.pop()
            if idx == len(choices):
                psign, key = _perm_sign(picked)
                if psign == 0:
                    continue
                g = f * (sign * psign)
                for i in key:
                    g = g * Poly.subset_sum(radius[i])
                K = frozenset(key)
                s = reduced.get(K)
                reduced[K] = g if s is None else s + g
                continue
            for csign, var in choices[idx]:
                if var in picked:
                    continue
                stack.append((idx + 1, sign * csign, picked + (var,)))

    out = RationalForm(flag.k, reduced)
    for j in range(len(blocks) - 1, 0, -1):
        out = flag_limit(out, flag, j)
    # per-block simplex restriction
    final: dict[frozenset, RationalFn] = {}
    for W, f in out.terms.items():
        den = {S: e for S, e in f.den.items() if S not in {frozenset(b) for b in blocks}}
        g = RationalFn(f.num, den)
        for b in blocks:
            if len(b) == 1:
                g = g.substitute_one(b[0])
        if not g.is_zero():
            final[W] = g
    return RationalForm(flag.k, final)


def _perm_sign(seq: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    if len(set(seq)) != len(seq):
        return 0, ()
    inv = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return (-1 if inv % 2 else 1), tuple(sorted(seq))


def dof_evaluate(flag: Flag, form: RationalForm) -> Fraction:
    """The degree of freedom: restrict to Theta_F, then integrate exactly.

    Requires the restricted coefficients to be polynomial (the class covered
    by blow-up basis forms, classical Whitney forms, and the higher-order
    scalar candidates); otherwise NonPolynomialResidue is raised.
    """
    restricted = restrict_to_theta(form, flag)
    blocks = flag.blocks
    sizes = {frozenset(b): len(b) - 1 for b in blocks}
    total = Fraction(0)
    for W, f in restricted.terms.items():
        if f.den:
            raise NonPolynomialResidue(
                f"restriction to {flag} left denominator factors {sorted(map(sorted, f.den))}"
            )
        # only terms of pure multidegree (n_j dtheta's per block) integrate
        per_block = [tuple(sorted(W & frozenset(b))) for b in blocks]
        if any(len(p) != sizes[frozenset(b)] for p, b in zip(per_block, blocks)):
            continue
        target = tuple(v for p in per_block for v in p)
        sign = _perm_sign_between(tuple(sorted(W)), target)
        for mono, coeff in f.num.terms.items():
            exps = dict(mono)
            val = Fraction(1)
            for b in blocks:
                val *= _eta_integral(b, {i: exps.get(i, 0) for i in b})
            total += sign * coeff * val
    return total


def _perm_sign_between(frm: tuple[int, ...], to: tuple[int, ...]) -> int:
    """Sign of the permutation mapping tuple `frm` onto tuple `to`."""
    pos = {v: i for i, v in enumerate(frm)}
    perm = [pos[v] for v in to]
    inv = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
    return -1 if inv % 2 else 1


@dataclass(frozen=True)
class DofMatrix:
    """Pairing matrix: rows are functionals, columns are basis forms."""

    row_flags: tuple[Flag, ...]
    col_flags: tuple[Flag, ...]
    entries: tuple[tuple[Fraction, ...], ...]

    @property
    def is_identity(self) -> bool:
        for i, row in enumerate(self.entries):
            for j, x in enumerate(row):
                if x != (1 if i == j else 0):
                    return False
        return True


def gram_matrix(V, k: int, check: bool = True) -> DofMatrix:
    """Evaluate every DOF against every basis form for fixed (V, k).

    Unisolvence makes this the identity; by default a failure raises
    UnisolvenceError since it signals an implementation bug.
    """
    from .shadow import shadow_basis  # deferred import; shadow uses dof_evaluate

    flags = enumerate_flags(V, k)
    basis = shadow_basis(V, k)
    entries = tuple(
        tuple(dof_evaluate(F_row, elem.form) for elem in basis) for F_row in flags
    )
    m = DofMatrix(tuple(flags), tuple(flags), entries)
    if check and not m.is_identity:
        raise UnisolvenceError(f"DOF pairing for |V|={len(vertex_set(V))}, k={k} is not the identity")
    return m
