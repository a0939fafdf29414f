"""Higher-order blow-up scalar spaces from repeated Poisson arrival rounds.

A degree-r experiment receives r particles, silences the sources that were
hit, and repeats until every source is silent.  Each outcome (arrival
sequence) contributes a probability that is a product of multinomial round
factors; the span of these functions is the candidate higher-order scalar
space.  The r = 1 case reproduces the blow-up Whitney 0-form basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .flagcomb import ArrivalSequence, Flag, vertex_set
from .shadow import IdentityFailed, shadow_basis
from .symexpr import Poly, RationalFn, dilation_limit


@dataclass(frozen=True)
class HigherBasisCandidate:
    sequence: ArrivalSequence
    flag: Flag
    probability: RationalFn


def enumerate_experiments(V, r: int) -> list[HigherBasisCandidate]:
    """All degree-r arrival sequences on V with their exact probabilities.

    Per round with active set A and counts (r_i) summing to r, the factor is
    the multinomial law  (r! / prod r_i!) * prod (lambda_i / l_A)^{r_i}.
    """
    V = vertex_set(V)
    if r < 1:
        raise ValueError("degree r must be positive")
    out: list[HigherBasisCandidate] = []

    def compositions(active: tuple[int, ...], total: int):
        if len(active) == 1:
            yield (total,)
            return
        for c in range(total, -1, -1):
            for rest in compositions(active[1:], total - c):
                yield (c,) + rest

    def rec(active: tuple[int, ...], rounds, silenced, num: Poly, den):
        if not active:
            seq = ArrivalSequence(r=r, rounds=tuple(rounds), silenced=tuple(silenced))
            prob = RationalFn(num, den)
            out.append(HigherBasisCandidate(sequence=seq, flag=seq.flag, probability=prob))
            return
        A = frozenset(active)
        for counts in compositions(active, r):
            hit = tuple(v for v, c in zip(active, counts) if c >= 1)
            coeff = math.factorial(r)
            mono = Poly.const(1)
            for v, c in zip(active, counts):
                coeff //= math.factorial(c)
                if c:
                    mono = mono * Poly.var(v, c)
            new_num = num * mono * coeff
            new_den = dict(den)
            new_den[A] = new_den.get(A, 0) + r
            rec(
                tuple(v for v in active if v not in hit),
                rounds + [tuple(zip(active, counts))],
                silenced + [hit],
                new_num,
                new_den,
            )

    rec(V, [], [], Poly.const(1), {})
    out.sort(key=lambda c: c.sequence.rounds)
    return out


def r1_reduction_check(V) -> bool:
    """True iff the r=1 candidates coincide with the blow-up 0-form basis."""
    V = vertex_set(V)
    candidates = {c.flag: c.probability for c in enumerate_experiments(V, 1)}
    basis = {e.flag: e.form.coefficient(()) for e in shadow_basis(V, 0)}
    if set(candidates) != set(basis):
        return False
    return all(candidates[F] == basis[F] for F in basis)


def independence_rank(candidates: list[HigherBasisCandidate]) -> int:
    """Exact rank of the candidate probabilities over the rationals.

    Clears to the common subset-sum denominator and row-reduces the
    numerator coefficient vectors.
    """
    if not candidates:
        return 0
    common: dict[frozenset, int] = {}
    for c in candidates:
        for S, e in c.probability.den.items():
            common[S] = max(common.get(S, 0), e)
    numerators = []
    monomials: set = set()
    for c in candidates:
        scale = Poly.const(1)
        for S, e in common.items():
            gap = e - c.probability.den.get(S, 0)
            if gap:
                scale = scale * Poly.subset_sum(S) ** gap
        p = c.probability.num * scale
        numerators.append(p)
        monomials.update(p.terms)
    cols = sorted(monomials)
    matrix = [[p.terms.get(m, Fraction(0)) for m in cols] for p in numerators]
    return linalg.rank(matrix)


def pr_containment(V, r: int) -> bool:
    """Check the polynomial-containment identity by first-round grouping.

    Candidates sharing a first-round count vector must sum to the
    homogeneous Bernstein monomial  r!/(prod r_i!) * prod lambda_i^{r_i} / l_V^r.
    Raises IdentityFailed on any mismatch.
    """
    V = vertex_set(V)
    groups: dict[tuple, RationalFn] = {}
    for c in enumerate_experiments(V, r):
        key = c.sequence.rounds[0]
        acc = groups.get(key)
        groups[key] = c.probability if acc is None else acc + c.probability
    for key, total in groups.items():
        coeff = math.factorial(r)
        mono = Poly.const(1)
        for v, cnt in key:
            coeff //= math.factorial(cnt)
            if cnt:
                mono = mono * Poly.var(v, cnt)
        bernstein = RationalFn(mono * coeff, {frozenset(V): r})
        if not total == bernstein:
            raise IdentityFailed(f"first-round group {key} does not sum to its Bernstein monomial")
    return True


def face_vanishing_check(candidate: HigherBasisCandidate, face: Flag) -> bool:
    """Sequential limit of the candidate's probability toward a blow-up face.

    Returns True when the check passes: the limit is identically zero
    exactly when the candidate's flag does not subdivide the face's flag.
    """
    p = candidate.probability
    for j in range(len(face.blocks) - 1, 0, -1):
        scaled = frozenset(v for b in face.blocks[j:] for v in b)
        p = dilation_limit(p, scaled)
    vanishes = p.is_zero()
    return vanishes == (not candidate.flag.refines(face))
