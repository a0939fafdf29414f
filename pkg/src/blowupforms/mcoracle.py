"""Monte Carlo oracle for the exact probabilities and face integrals.

Simulates the Poisson ensembles directly in 64-bit floats, firewalled from
the exact core: exact rationals cross the boundary only as float rates and
expected values.  The generator is numpy's counter-based Philox, seeded per
run, so every estimate is reproducible from (seed, samples).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

import numpy as np

from .flagcomb import ArrivalSequence, Flag
from .shadow import omega_form
from .symexpr import RationalFn, RationalForm

RNG_ALGORITHM = "numpy.random.Philox"


class ExtrapolationUnstable(ArithmeticError):
    """Two-epsilon estimates of a limiting face integral disagree."""


@dataclass(frozen=True)
class SimulationConfig:
    """Rates per vertex id (positive rationals), sample count, and seed."""

    rates: dict[int, Fraction]
    samples: int
    seed: int

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if any(r <= 0 for r in self.rates.values()):
            raise ValueError("rates must be positive")

    def rng(self) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(self.seed))


@dataclass(frozen=True)
class Estimate:
    mean: float
    stderr: float
    samples: int


def _indicator_estimate(hits: np.ndarray) -> Estimate:
    n = hits.shape[0]
    mean = float(hits.mean())
    stderr = float(np.sqrt(mean * (1.0 - mean) / n))
    return Estimate(mean=mean, stderr=stderr, samples=n)


def estimate_pF(flag: Flag, cfg: SimulationConfig, gamma_mode: str = "gamma") -> Estimate:
    """Estimate the probability that blocks complete in flag order.

    Draws the |V_j|-th arrival time of each block's merged process: either a
    single Gamma(|V_j|) variate scaled by the block rate, or the equivalent
    sum of exponentials (``gamma_mode="sum"``, kept as a consistency
    cross-check).  Ties count as satisfied.
    """
    rng = cfg.rng()
    n = cfg.samples
    times = np.empty((n, len(flag.blocks)))
    for j, block in enumerate(flag.blocks):
        rate = float(sum(cfg.rates[v] for v in block))
        if gamma_mode == "sum":
            times[:, j] = rng.standard_exponential((n, len(block))).sum(axis=1) / rate
        else:
            times[:, j] = rng.standard_gamma(len(block), size=n) / rate
    if times.shape[1] > 1:
        hits = np.all(times[:, :-1] <= times[:, 1:], axis=1)
    else:
        hits = np.ones(n, dtype=bool)
    return _indicator_estimate(hits)


def estimate_higher(seq: ArrivalSequence, cfg: SimulationConfig) -> Estimate:
    """Estimate the probability of one degree-r arrival sequence.

    Runs the experiment with competing exponential clocks: each active
    source emits a rate-lambda_i stream, the first r arrivals of a round are
    counted by source, and matching is checked round by round.  Sequences
    whose rounds reference already-silenced sources get estimate 0.
    """
    rng = cfg.rng()
    n = cfg.samples
    r = seq.r
    alive = np.ones(n, dtype=bool)
    active = sorted(cfg.rates)
    for rnd, silenced in zip(seq.rounds, seq.silenced):
        target = {v: c for v, c in rnd if c}
        if not set(target) <= set(active):
            return Estimate(mean=0.0, stderr=0.0, samples=n)
        m = len(active)
        # per active source, the times of its first r particles
        gaps = rng.standard_exponential((n, m, r))
        rates = np.array([float(cfg.rates[v]) for v in active])
        arrivals = np.cumsum(gaps, axis=2) / rates[None, :, None]
        flat = arrivals.reshape(n, m * r)
        first = np.argpartition(flat, r - 1, axis=1)[:, :r]
        sources = first // r
        counts = np.zeros((n, m), dtype=np.int64)
        np.add.at(counts, (np.repeat(np.arange(n), r), sources.ravel()), 1)
        want = np.array([target.get(v, 0) for v in active])
        alive &= np.all(counts == want[None, :], axis=1)
        active = [v for v in active if v not in set(silenced)]
    return _indicator_estimate(alive)


# ---------------------------------------------------------------------------
# face integrals with small-epsilon extrapolation
# ---------------------------------------------------------------------------

def _fn_values(f: RationalFn, point: dict[int, np.ndarray]) -> np.ndarray:
    n = next(iter(point.values())).shape[0]
    num = np.zeros(n)
    for mono, c in f.num.terms.items():
        term = np.full(n, float(c))
        for v, e in mono:
            term = term * point[v] ** e
        num = num + term
    for S, e in f.den.items():
        d = np.zeros(n)
        for i in S:
            d = d + point[i]
        num = num / d ** e
    return num


def _form_values(form: RationalForm, point: dict[int, np.ndarray], vectors) -> np.ndarray:
    """Evaluate a k-form on a fixed tuple of lambda-space vectors, vectorized.

    ``vectors`` is a list of sparse columns {var: coefficient array or float}.
    """
    k = form.degree
    n = next(iter(point.values())).shape[0]
    total = np.zeros(n)
    for W, f in form.terms.items():
        sw = tuple(sorted(W))
        coeff = _fn_values(f, point)
        det = np.zeros(n)
        for perm in permutations(range(k)):
            inv = sum(1 for i in range(k) for j in range(i + 1, k) if perm[i] > perm[j])
            prod = np.full(n, -1.0 if inv % 2 else 1.0)
            for row, col in enumerate(perm):
                prod = prod * vectors[col].get(sw[row], 0.0)
            det = det + prod
        total = total + coeff * det
    return total


def estimate_face_integral(
    flag: Flag,
    form: RationalForm,
    cfg: SimulationConfig,
    eps_pair: tuple[float, float] = (1e-3, 1e-4),
    rtol: float = 1e-2,
) -> Estimate:
    """Monte Carlo value of the degree of freedom attached to ``flag``.

    Samples Theta_F uniformly (per-block Dirichlet), embeds each sample at a
    point of T whose block radii follow the ladder rho_j ~ eps^j (a path
    realizing the sequential limits), evaluates the form on a tangential
    frame, and divides by the reference volume form.  Two epsilon values are
    compared; relative disagreement beyond ``rtol`` (plus sampling noise)
    raises ExtrapolationUnstable.
    """
    if form.degree != flag.k:
        raise ValueError("form degree must match the flag")
    rng = cfg.rng()
    n = cfg.samples
    theta: dict[int, np.ndarray] = {}
    for block in flag.blocks:
        draws = rng.dirichlet(np.ones(len(block)), size=n)
        for idx, v in enumerate(block):
            theta[v] = draws[:, idx]
    omega = RationalForm.function(RationalFn.one())
    for b in flag.blocks:
        omega = omega.wedge(omega_form(b))

    per_eps = []
    means = []
    for eps in eps_pair:
        radii = [eps ** j for j in range(len(flag.blocks))]
        total_r = sum(radii)
        point = {
            v: theta[v] * (radii[j] / total_r)
            for j, block in enumerate(flag.blocks)
            for v in block
        }
        vectors = []
        for j, block in enumerate(flag.blocks):
            if len(block) == 1:
                continue
            vmax = max(block)
            scale = radii[j] / total_r
            for v in block:
                if v != vmax:
                    vectors.append({v: scale, vmax: -scale})
        num = _form_values(form, point, vectors)
        den = _form_values(omega, point, vectors)
        per_eps.append(num / den)
        means.append(float(per_eps[-1].mean()))
    spread = abs(means[0] - means[1])
    scale = max(1.0, abs(means[0]), abs(means[1]))
    errs = [float(v.std(ddof=1) / np.sqrt(n)) if n > 1 else 0.0 for v in per_eps]
    if spread > rtol * scale + 3.0 * (errs[0] + errs[1]):
        raise ExtrapolationUnstable(
            f"estimates {means[0]:.6g} and {means[1]:.6g} disagree beyond tolerance"
        )
    # first-order Richardson in eps, applied per sample for an honest stderr
    e1, e2 = eps_pair
    vals = (e1 * per_eps[1] - e2 * per_eps[0]) / (e1 - e2)
    mean = float(vals.mean())
    stderr = float(vals.std(ddof=1) / np.sqrt(n)) if n > 1 else 0.0
    return Estimate(mean=mean, stderr=stderr, samples=n)
