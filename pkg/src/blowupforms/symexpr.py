"""Exact symbolic arithmetic for barycentric rational differential forms.

Everything here is built from three layers:

* ``Poly`` -- multivariate polynomials in the variables ``lambda_i`` with
  exact ``Fraction`` coefficients.
* ``RationalFn`` -- a polynomial numerator over a denominator that is a
  product of powers of subset sums ``l_S = sum_{i in S} lambda_i``.  This
  restricted class is closed under sums, products, partial derivatives and
  dilation limits, which keeps equality tests and limits exact and cheap.
* ``RationalForm`` -- differential k-forms whose coefficients are
  ``RationalFn``s, keyed by sorted index sets for the wedge monomials
  ``dlambda_{w_1} ^ ... ^ dlambda_{w_k}``.

No floating point is used anywhere in this module.
"""

from __future__ import annotations

from fractions import Fraction

from .flagcomb import Flag


class DivergentLimit(ArithmeticError):
    """A dilation limit diverges (denominator vanishes faster than numerator)."""


# ---------------------------------------------------------------------------
# monomials: sorted tuples of (variable, exponent) pairs
# ---------------------------------------------------------------------------

Mono = tuple  # tuple[tuple[int, int], ...]

_ONE: Mono = ()


def _mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def _mono_degree(m: Mono) -> int:
    return sum(e for _, e in m)


class Poly:
    """Multivariate polynomial over exact rationals."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        t: dict[Mono, Fraction] = {}
        if terms:
            for m, c in terms.items():
                c = Fraction(c)
                if c:
                    t[m] = c
        self.terms = t

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero() -> "Poly":
        return Poly()

    @staticmethod
    def const(c) -> "Poly":
        return Poly({_ONE: Fraction(c)})

    @staticmethod
    def var(i: int, exp: int = 1) -> "Poly":
        return Poly({((i, exp),): Fraction(1)})

    @staticmethod
    def subset_sum(S) -> "Poly":
        """The linear form l_S = sum_{i in S} lambda_i."""
        return Poly({((i, 1),): Fraction(1) for i in S})

    # -- ring operations ----------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        t = dict(self.terms)
        for m, c in other.terms.items():
            s = t.get(m, 0) + c
            if s:
                t[m] = s
            else:
                t.pop(m, None)
        out = Poly.__new__(Poly)
        out.terms = t
        return out

    def __neg__(self) -> "Poly":
        out = Poly.__new__(Poly)
        out.terms = {m: -c for m, c in self.terms.items()}
        return out

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Poly.zero()
            out = Poly.__new__(Poly)
            out.terms = {m: c * other for m, c in self.terms.items()}
            return out
        t: dict[Mono, Fraction] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = _mono_mul(ma, mb)
                s = t.get(m, 0) + ca * cb
                if s:
                    t[m] = s
                else:
                    t.pop(m, None)
        out = Poly.__new__(Poly)
        out.terms = t
        return out

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Poly":
        if e < 0:
            raise ValueError("negative power of a polynomial")
        out = Poly.const(1)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    # -- structure ----------------------------------------------------------

    def variables(self) -> frozenset[int]:
        return frozenset(v for m in self.terms for v, _ in m)

    def total_degree(self) -> int:
        if not self.terms:
            return 0
        return max(_mono_degree(m) for m in self.terms)

    def homogeneous_components(self) -> dict[int, "Poly"]:
        comps: dict[int, dict] = {}
        for m, c in self.terms.items():
            comps.setdefault(_mono_degree(m), {})[m] = c
        return {d: Poly(t) for d, t in comps.items()}

    def derivative(self, v: int) -> "Poly":
        t: dict[Mono, Fraction] = {}
        for m, c in self.terms.items():
            d = dict(m)
            e = d.get(v, 0)
            if not e:
                continue
            if e == 1:
                del d[v]
            else:
                d[v] = e - 1
            key = tuple(sorted(d.items()))
            s = t.get(key, 0) + c * e
            if s:
                t[key] = s
            else:
                t.pop(key, None)
        return Poly(t)

    def evaluate(self, point: dict[int, object]):
        """Evaluate at a point; works for Fraction or float values."""
        total = None
        for m, c in self.terms.items():
            val = c
            for v, e in m:
                val = val * point[v] ** e
            total = val if total is None else total + val
        return 0 if total is None else total

    def substitute_one(self, v: int) -> "Poly":
        """Substitute lambda_v -> 1."""
        t: dict[Mono, Fraction] = {}
        for m, c in self.terms.items():
            key = tuple((w, e) for w, e in m if w != v)
            s = t.get(key, 0) + c
            if s:
                t[key] = s
            else:
                t.pop(key, None)
        return Poly(t)

    def relabel(self, perm: dict[int, int]) -> "Poly":
        return Poly({
            tuple(sorted((perm.get(v, v), e) for v, e in m)): c
            for m, c in self.terms.items()
        })

    def epsilon_split(self, scaled: frozenset[int]) -> dict[int, "Poly"]:
        """Group terms by their order in eps under lambda_i -> eps*lambda_i, i in scaled."""
        comps: dict[int, dict] = {}
        for m, c in self.terms.items():
            order = sum(e for v, e in m if v in scaled)
            comps.setdefault(order, {})[m] = c
        return {d: Poly(t) for d, t in comps.items()}

    def divide_by_subset_sum(self, S) -> "Poly | None":
        """Exact quotient by l_S, or None when the division has a remainder."""
        S = frozenset(S)
        if self.is_zero():
            return Poly.zero()
        v = min(S)
        rest = S - {v}
        by_deg: dict[int, dict] = {}
        top = 0
        for m, c in self.terms.items():
            d = dict(m)
            e = d.pop(v, 0)
            top = max(top, e)
            key = tuple(sorted(d.items()))
            by_deg.setdefault(e, {})[key] = c
        if top == 0:
            return None
        R = Poly.subset_sum(rest) if rest else Poly.zero()
        quotient = Poly.zero()
        prev = Poly.zero()  # q_d, descending
        for d in range(top, 0, -1):
            qd = Poly(by_deg.get(d, {})) - R * prev
            if not qd.is_zero():
                vpow = Poly.var(v, d - 1) if d > 1 else Poly.const(1)
                quotient = quotient + qd * vpow
            prev = qd
        remainder = Poly(by_deg.get(0, {})) - R * prev
        if not remainder.is_zero():
            return None
        return quotient

    # -- display -------------------------------------------------------------

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for m, c in sorted(self.terms.items()):
            mono = "*".join(f"x{v}^{e}" if e > 1 else f"x{v}" for v, e in m)
            bits.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(bits)


# ---------------------------------------------------------------------------
# rational functions with subset-sum denominators
# ---------------------------------------------------------------------------

def _den_scale(target: dict, own: dict) -> Poly:
    out = Poly.const(1)
    for S, e in target.items():
        gap = e - own.get(S, 0)
        if gap:
            out = out * Poly.subset_sum(S) ** gap
    return out


def den_poly(den: dict) -> Poly:
    out = Poly.const(1)
    for S, e in den.items():
        out = out * Poly.subset_sum(S) ** e
    return out


class RationalFn:
    """Numerator polynomial over a product of subset-sum powers.

    The canonical form shares no subset-sum factor between numerator and
    denominator: construction attempts exact division by every factor.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den=None):
        den = {frozenset(S): e for S, e in (den or {}).items() if e}
        if any(e < 0 for e in den.values()):
            raise ValueError("denominator exponents must be positive")
        if num.is_zero():
            den = {}
        else:
            for S in list(den):
                while den[S] > 0:
                    q = num.divide_by_subset_sum(S)
                    if q is None:
                        break
                    num = q
                    den[S] -= 1
                if not den[S]:
                    del den[S]
        self.num = num
        self.den = den

    # -- constructors --------------------------------------------------------

    @staticmethod
    def zero() -> "RationalFn":
        return RationalFn(Poly.zero())

    @staticmethod
    def one() -> "RationalFn":
        return RationalFn(Poly.const(1))

    @staticmethod
    def const(c) -> "RationalFn":
        return RationalFn(Poly.const(c))

    @staticmethod
    def var(i: int) -> "RationalFn":
        return RationalFn(Poly.var(i))

    # -- field-ish operations --------------------------------------------------

    def __add__(self, other: "RationalFn") -> "RationalFn":
        den = dict(self.den)
        for S, e in other.den.items():
            den[S] = max(den.get(S, 0), e)
        num = self.num * _den_scale(den, self.den) + other.num * _den_scale(den, other.den)
        return RationalFn(num, den)

    def __neg__(self) -> "RationalFn":
        out = RationalFn.__new__(RationalFn)
        out.num = -self.num
        out.den = dict(self.den)
        return out

    def __sub__(self, other: "RationalFn") -> "RationalFn":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RationalFn(self.num * other, self.den)
        if isinstance(other, Poly):
            return RationalFn(self.num * other, self.den)
        den = dict(self.den)
        for S, e in other.den.items():
            den[S] = den.get(S, 0) + e
        return RationalFn(self.num * other.num, den)

    __rmul__ = __mul__

    def over_subset_sum(self, S, e: int = 1) -> "RationalFn":
        """Divide by l_S^e."""
        den = dict(self.den)
        key = frozenset(S)
        den[key] = den.get(key, 0) + e
        return RationalFn(self.num, den)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalFn):
            return NotImplemented
        return (self - other).is_zero()

    def variables(self) -> frozenset[int]:
        out = self.num.variables()
        for S in self.den:
            out |= S
        return out

    def derivative(self, v: int) -> "RationalFn":
        out = RationalFn(self.num.derivative(v), self.den)
        for S, e in self.den.items():
            if v in S:
                den = dict(self.den)
                den[S] = e + 1
                out = out + RationalFn(self.num * Fraction(-e), den)
        return out

    def evaluate(self, point: dict[int, object]):
        val = self.num.evaluate(point)
        for S, e in self.den.items():
            d = sum(point[i] for i in S)
            val = val / d ** e
        return val

    def substitute_one(self, v: int) -> "RationalFn":
        """Substitute lambda_v -> 1 (drops singleton denominator factors {v})."""
        den = {S: e for S, e in self.den.items() if S != frozenset((v,))}
        return RationalFn(self.num.substitute_one(v), den)

    def relabel(self, perm: dict[int, int]) -> "RationalFn":
        return RationalFn(
            self.num.relabel(perm),
            {frozenset(perm.get(i, i) for i in S): e for S, e in self.den.items()},
        )

    def den_degree(self) -> int:
        return sum(self.den.values())

    def is_homogeneous(self, d: int) -> bool:
        """True iff f(t*lambda) = t^d f(lambda) identically."""
        if self.num.is_zero():
            return True
        comps = self.num.homogeneous_components()
        if len(comps) != 1:
            return False
        (deg,) = comps
        return deg - sum(self.den.values()) == d

    def dilation_degrees(self) -> list[int]:
        dden = sum(self.den.values())
        return sorted(d - dden for d in self.num.homogeneous_components())

    # -- display / serialization ----------------------------------------------

    def __repr__(self) -> str:
        if not self.den:
            return repr(self.num)
        dbits = []
        for S, e in sorted(self.den.items(), key=lambda kv: (len(kv[0]), sorted(kv[0]))):
            name = "l" + "".join(str(i) for i in sorted(S))
            dbits.append(f"{name}^{e}" if e > 1 else name)
        return f"({self.num!r}) / ({' '.join(dbits)})"


def dilation_limit(f: RationalFn, scaled) -> RationalFn:
    """Pointwise limit of f under lambda_i -> eps*lambda_i (i in scaled), eps -> 0+.

    The scaled variables survive in the result as angular coordinates: the
    limit is taken along paths with their mutual ratios fixed.  Raises
    DivergentLimit when the denominator degenerates faster than the numerator.
    """
    scaled = frozenset(scaled)
    if f.num.is_zero():
        return RationalFn.zero()
    orders = f.num.epsilon_split(scaled)
    a = min(orders)
    b = 0
    den: dict[frozenset, int] = {}
    for S, e in f.den.items():
        if S <= scaled:
            b += e
            den[S] = den.get(S, 0) + e
        else:
            S2 = S - scaled  # straddling factors truncate; disjoint ones persist
            den[S2] = den.get(S2, 0) + e
    if a > b:
        return RationalFn.zero()
    if a < b:
        raise DivergentLimit(
            f"limit diverges: numerator order {a} < denominator order {b} "
            f"under scaling of {sorted(scaled)}"
        )
    return RationalFn(orders[a], den)


# ---------------------------------------------------------------------------
# differential forms
# ---------------------------------------------------------------------------

def _merge_sign(a: tuple[int, ...], b: tuple[int, ...]) -> int:
    """Sign of sorting the concatenation of two sorted disjoint tuples."""
    inversions = 0
    for x in a:
        for y in b:
            if y < x:
                inversions += 1
    return -1 if inversions % 2 else 1


def _sort_sign(seq) -> tuple[int, tuple[int, ...]]:
    """Sign of the permutation sorting seq ascending; 0 sign on repeats."""
    seq = tuple(seq)
    if len(set(seq)) != len(seq):
        return 0, ()
    inversions = sum(
        1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j]
    )
    return (-1 if inversions % 2 else 1), tuple(sorted(seq))


class RationalForm:
    """A differential k-form with RationalFn coefficients.

    Terms are keyed by sorted index subsets W, representing the ascending
    wedge of the dlambda_w; the coefficient sign absorbs any reordering.
    """

    __slots__ = ("degree", "terms")

    def __init__(self, degree: int, terms=None):
        self.degree = degree
        t: dict[frozenset, RationalFn] = {}
        for W, f in (terms or {}).items():
            W = frozenset(W)
            if len(W) != degree:
                raise ValueError(f"term {sorted(W)} has wrong degree (expected {degree})")
            if not f.is_zero():
                t[W] = f
        self.terms = t

    @staticmethod
    def zero(degree: int = 0) -> "RationalForm":
        return RationalForm(degree)

    @staticmethod
    def function(f: RationalFn) -> "RationalForm":
        return RationalForm(0, {frozenset(): f})

    @staticmethod
    def d_lambda(i: int) -> "RationalForm":
        return RationalForm(1, {frozenset((i,)): RationalFn.one()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalForm):
            return NotImplemented
        return (self - other).is_zero()

    def __add__(self, other: "RationalForm") -> "RationalForm":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.degree != other.degree:
            raise ValueError("cannot add forms of different degree")
        t = dict(self.terms)
        for W, f in other.terms.items():
            s = t.get(W)
            t[W] = f if s is None else s + f
        return RationalForm(self.degree, t)

    def __neg__(self) -> "RationalForm":
        return RationalForm(self.degree, {W: -f for W, f in self.terms.items()})

    def __sub__(self, other: "RationalForm") -> "RationalForm":
        return self + (-other)

    def __mul__(self, other):
        """Multiply by a scalar, Poly, or RationalFn (function times form)."""
        return RationalForm(self.degree, {W: f * other for W, f in self.terms.items()})

    __rmul__ = __mul__

    def wedge(self, other: "RationalForm") -> "RationalForm":
        out: dict[frozenset, RationalFn] = {}
        for Wa, fa in self.terms.items():
            sa = tuple(sorted(Wa))
            for Wb, fb in other.terms.items():
                if Wa & Wb:
                    continue
                sign = _merge_sign(sa, tuple(sorted(Wb)))
                W = Wa | Wb
                contrib = fa * fb * sign
                s = out.get(W)
                out[W] = contrib if s is None else s + contrib
        return RationalForm(self.degree + other.degree, out)

    def exterior_derivative(self) -> "RationalForm":
        out: dict[frozenset, RationalFn] = {}
        for W, f in self.terms.items():
            sw = tuple(sorted(W))
            for v in f.variables():
                if v in W:
                    continue
                df = f.derivative(v)
                if df.is_zero():
                    continue
                pos = sum(1 for w in sw if w < v)
                sign = -1 if pos % 2 else 1
                key = W | {v}
                contrib = df * sign
                s = out.get(key)
                out[key] = contrib if s is None else s + contrib
        return RationalForm(self.degree + 1, out)

    def contract_tautological(self, S) -> "RationalForm":
        """Interior product with sum_{i in S} lambda_i d/dlambda_i."""
        S = frozenset(S)
        if self.degree == 0:
            return RationalForm.zero(0)
        out: dict[frozenset, RationalFn] = {}
        for W, f in self.terms.items():
            sw = tuple(sorted(W))
            for pos, v in enumerate(sw):
                if v not in S:
                    continue
                sign = -1 if pos % 2 else 1
                key = W - {v}
                contrib = f * Poly.var(v) * sign
                s = out.get(key)
                out[key] = contrib if s is None else s + contrib
        return RationalForm(self.degree - 1, out)

    def dilation_limit(self, scaled) -> "RationalForm":
        return RationalForm(
            self.degree, {W: dilation_limit(f, scaled) for W, f in self.terms.items()}
        )

    def relabel(self, perm: dict[int, int]) -> "RationalForm":
        out: dict[frozenset, RationalFn] = {}
        for W, f in self.terms.items():
            sign, _ = _sort_sign(tuple(perm.get(w, w) for w in sorted(W)))
            key = frozenset(perm.get(w, w) for w in W)
            contrib = f.relabel(perm) * sign
            s = out.get(key)
            out[key] = contrib if s is None else s + contrib
        return RationalForm(self.degree, out)

    def variables(self) -> frozenset[int]:
        out = frozenset()
        for W, f in self.terms.items():
            out |= W | f.variables()
        return out

    def coefficient(self, W) -> RationalFn:
        return self.terms.get(frozenset(W), RationalFn.zero())

    def __repr__(self) -> str:
        if not self.terms:
            return f"0 (degree {self.degree})"
        bits = []
        for W, f in sorted(self.terms.items(), key=lambda kv: sorted(kv[0])):
            wedge = "^".join(f"dx{w}" for w in sorted(W)) or "1"
            bits.append(f"[{f!r}] {wedge}")
        return " + ".join(bits)


def wedge(a: RationalForm, b: RationalForm) -> RationalForm:
    return a.wedge(b)


def exterior_derivative(a: RationalForm) -> RationalForm:
    return a.exterior_derivative()


def contract_tautological(a: RationalForm, S) -> RationalForm:
    return a.contract_tautological(S)


def flag_limit(x, flag: Flag, j: int):
    """One sequential degeneration step toward the blow-up face of ``flag``.

    Scales every variable in blocks j, j+1, ..., by a common factor and takes
    the exact limit as the factor tends to zero.  Applying steps for
    j = n-k down to 1 realizes the full multi-scale degeneration in which
    each block becomes infinitesimal relative to its predecessor.
    """
    if j < 1 or j >= len(flag.blocks):
        raise ValueError(f"limit step {j} out of range for {flag}")
    scaled = frozenset(v for b in flag.blocks[j:] for v in b)
    if isinstance(x, RationalFn):
        return dilation_limit(x, scaled)
    if isinstance(x, RationalForm):
        return x.dilation_limit(scaled)
    raise TypeError(f"flag_limit expects RationalFn or RationalForm, got {type(x)!r}")


def is_homogeneous(f: RationalFn, d: int) -> bool:
    return f.is_homogeneous(d)


# ---------------------------------------------------------------------------
# equality on the simplex slice l_V = 1
# ---------------------------------------------------------------------------

def vanishes_on_slice(f: RationalFn, V) -> bool:
    """True iff f is identically zero on the slice l_V = 1.

    Splits the numerator into dilation-homogeneous components and
    rehomogenizes with powers of l_V; the result is zero as a rational
    function iff the restriction to the slice vanishes.
    """
    if f.num.is_zero():
        return True
    comps = f.num.homogeneous_components()
    top = max(comps)
    lv = Poly.subset_sum(V)
    total = Poly.zero()
    for d, p in comps.items():
        total = total + p * lv ** (top - d)
    return total.is_zero()


def functions_equal_on_slice(f: RationalFn, g: RationalFn, V) -> bool:
    return vanishes_on_slice(f - g, V)


def reduce_mod_dlv(form: RationalForm, V) -> RationalForm:
    """Rewrite modulo d(l_V): substitute dlambda_max -> -sum of the others.

    The result involves only the dlambda_i for i != max(V) and represents
    the same form on vectors tangent to the slice l_V = 1.
    """
    V = tuple(sorted(V))
    vmax = V[-1]
    rest = V[:-1]
    out: dict[frozenset, RationalFn] = {}
    for W, f in form.terms.items():
        if vmax not in W:
            s = out.get(W)
            out[W] = f if s is None else s + f
            continue
        W0 = tuple(sorted(W - {vmax}))  # vmax sits last in sorted W
        for i in rest:
            if i in W0:
                continue
            bigger = sum(1 for w in W0 if w > i)
            sign = -1 if (bigger + 1) % 2 else 1  # -1 from the substitution itself
            key = frozenset(W0) | {i}
            contrib = f * sign
            s = out.get(key)
            out[key] = contrib if s is None else s + contrib
    return RationalForm(form.degree, out)


def forms_equal_on_simplex(a: RationalForm, b: RationalForm, V) -> bool:
    """Exact equality of two forms as forms on the simplex T_V.

    Both sides are restricted to vectors tangent to the slice l_V = 1 and
    the coefficients are compared after rehomogenization.
    """
    diff = reduce_mod_dlv(a - b, V)
    return all(vanishes_on_slice(f, V) for f in diff.terms.values())


# ---------------------------------------------------------------------------
# display and serialization
# ---------------------------------------------------------------------------

def _subset_latex(S) -> str:
    ids = sorted(S)
    if all(i <= 9 for i in ids):
        return r"\lambda_{" + "".join(str(i) for i in ids) + "}"
    return r"\lambda_{\{" + ",".join(str(i) for i in ids) + r"\}}"


def _mono_latex(m: Mono) -> str:
    if not m:
        return "1"
    bits = []
    for v, e in m:
        base = rf"\lambda_{{{v}}}"
        bits.append(base if e == 1 else base + f"^{{{e}}}")
    return " ".join(bits)


def rational_fn_latex(f: RationalFn) -> str:
    if f.num.is_zero():
        return "0"
    parts = []
    for m, c in sorted(f.num.terms.items()):
        coeff = "" if c == 1 and m else str(c)
        if c == -1 and m:
            coeff = "-"
        body = _mono_latex(m) if m else ("" if coeff else "1")
        parts.append((coeff + (r"\," if coeff and body else "") + body) or "1")
    num = " + ".join(parts).replace("+ -", "- ")
    if not f.den:
        return num
    dbits = []
    for S, e in sorted(f.den.items(), key=lambda kv: (len(kv[0]), sorted(kv[0]))):
        b = _subset_latex(S)
        dbits.append(b if e == 1 else b + f"^{{{e}}}")
    return rf"\frac{{{num}}}{{{' '.join(dbits)}}}"


def form_latex(form: RationalForm) -> str:
    if form.is_zero():
        return "0"
    bits = []
    for W, f in sorted(form.terms.items(), key=lambda kv: sorted(kv[0])):
        wedge_txt = r" \wedge ".join(rf"d\lambda_{{{w}}}" for w in sorted(W))
        coeff = rational_fn_latex(f)
        bits.append(rf"\left({coeff}\right) {wedge_txt}".strip())
    return " + ".join(bits)


def rational_fn_to_json(f: RationalFn) -> dict:
    return {
        "num": {
            " ".join(f"{v}:{e}" for v, e in m): str(c)
            for m, c in sorted(f.num.terms.items())
        },
        "den": [
            {"S": sorted(S), "e": e}
            for S, e in sorted(f.den.items(), key=lambda kv: (len(kv[0]), sorted(kv[0])))
        ],
    }


def form_to_json(form: RationalForm) -> dict:
    return {
        "degree": form.degree,
        "terms": [
            {"dlambda": sorted(W), **rational_fn_to_json(f)}
            for W, f in sorted(form.terms.items(), key=lambda kv: sorted(kv[0]))
        ],
    }
