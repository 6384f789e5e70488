"""Symbolic engine for the term class  c * x^theta * log^k x.

Expressions are finite sums of such terms with exact rational exponents and
declared coefficient rationality.  Everything downstream (growth
classification, the equidistribution decision procedure, derivative-driven
bound estimates) relies on this class being closed under differentiation and
on rationality being *declared*, never sniffed from floating-point bits:
whether a polynomial coefficient is irrational is undecidable from a double,
and two of the decision procedures hinge on exactly that distinction.

Coefficients are finite Q-linear combinations of basis symbols
(1, sqrt(n), phi, pi, e, irr(<digits>)), so sums and rational rescalings of
coefficients stay exact and rationality queries stay decidable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .ddarith import DD, dd_ipow, dd_log, dd_pow_frac, dd_sqrt

# Key for the rational unit in a coefficient's basis expansion.
RATIONAL_UNIT = ""

# Tie-break tolerance for floors near integer boundaries: values within
# BOUNDARY_TOL of an integer m floor to m (deterministic, auditable).
BOUNDARY_TOL = 1e-9

# Above this magnitude a plain double starts losing fractional-part bits
# fast; callers predicting larger values must use compensated evaluation.
COMPENSATION_THRESHOLD = float(2**45)

# Beyond this magnitude even a double-double cannot hold the fractional
# part to useful accuracy.
COMPENSATED_LIMIT = float(2**90)


class ExprDomainError(ValueError):
    """Raised when an expression is evaluated outside its domain."""


def _square_free_split(n: int):
    """n = s^2 * f with f square-free; returns (s, f). Trial division."""
    s, f = 1, 1
    d = 2
    m = n
    while d * d <= m:
        if m % d == 0:
            e = 0
            while m % d == 0:
                m //= d
                e += 1
            s *= d ** (e // 2)
            if e % 2:
                f *= d
        d += 1
    f *= m
    return s, f


def _symbol_dd(symbol: str) -> DD:
    if symbol.startswith("sqrt(") and symbol.endswith(")"):
        return dd_sqrt(float(int(symbol[5:-1])))
    if symbol == "phi":
        return (dd_sqrt(5.0) + 1.0) * 0.5
    if symbol == "pi":
        from .ddarith import PI

        return PI
    if symbol == "e":
        from .ddarith import E

        return E
    if symbol.startswith("irr(") and symbol.endswith(")"):
        return DD.from_decimal(symbol[4:-1])
    raise ValueError(f"unknown irrational symbol {symbol!r}")


@dataclass(frozen=True)
class Coefficient:
    """Q-linear combination of basis symbols; () is the zero coefficient.

    parts is a sorted tuple of (symbol, Fraction) with nonzero fractions;
    the empty-string symbol is the rational unit.
    """

    parts: tuple[tuple[str, Fraction], ...]

    @staticmethod
    def rational(value) -> "Coefficient":
        fr = Fraction(value)
        if fr == 0:
            return Coefficient(())
        return Coefficient(((RATIONAL_UNIT, fr),))

    @staticmethod
    def irrational(symbol: str, mult=1) -> "Coefficient":
        fr = Fraction(mult)
        if fr == 0:
            return Coefficient(())
        if symbol.startswith("sqrt(") and symbol.endswith(")"):
            n = int(symbol[5:-1])
            if n <= 0:
                raise ValueError("sqrt argument must be positive")
            s, f = _square_free_split(n)
            if f == 1:
                return Coefficient.rational(fr * s)
            symbol = f"sqrt({f})"
            fr = fr * s
        _symbol_dd(symbol)  # validates the symbol
        return Coefficient(((symbol, fr),))

    @staticmethod
    def from_parts(parts: dict) -> "Coefficient":
        items = tuple(sorted((s, f) for s, f in parts.items() if f != 0))
        return Coefficient(items)

    # -- queries -------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.parts

    @property
    def is_rational(self) -> bool:
        return all(s == RATIONAL_UNIT for s, _ in self.parts)

    @property
    def rational_value(self) -> Fraction:
        if not self.is_rational:
            raise ValueError("coefficient is not rational")
        return self.parts[0][1] if self.parts else Fraction(0)

    @property
    def value(self) -> float:
        return float(self.dd())

    def dd(self) -> DD:
        total = DD(0.0)
        for sym, fr in self.parts:
            if sym == RATIONAL_UNIT:
                total = total + DD.from_fraction(fr)
            else:
                total = total + _symbol_dd(sym) * DD.from_fraction(fr)
        return total

    def basis(self) -> dict:
        return dict(self.parts)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "Coefficient") -> "Coefficient":
        acc = dict(self.parts)
        for s, f in other.parts:
            acc[s] = acc.get(s, Fraction(0)) + f
        return Coefficient.from_parts(acc)

    def __neg__(self) -> "Coefficient":
        return Coefficient(tuple((s, -f) for s, f in self.parts))

    def __sub__(self, other: "Coefficient") -> "Coefficient":
        return self + (-other)

    def scale(self, q) -> "Coefficient":
        fr = Fraction(q)
        if fr == 0:
            return Coefficient(())
        return Coefficient(tuple((s, f * fr) for s, f in self.parts))

    def mul(self, other: "Coefficient") -> "Coefficient":
        """Product, defined only when one factor is rational (the basis has
        no multiplication table for symbol*symbol)."""
        if self.is_rational:
            return other.scale(self.rational_value)
        if other.is_rational:
            return self.scale(other.rational_value)
        raise ValueError("product of two irrational coefficients is undefined")


ZERO_COEFF = Coefficient(())
ONE_COEFF = Coefficient.rational(1)


@dataclass(frozen=True)
class Term:
    coeff: Coefficient
    theta: Fraction
    logpow: int

    @property
    def signature(self) -> tuple[Fraction, int]:
        return (self.theta, self.logpow)

    def parts_for_printing(self):
        """(symbol, multiplier) pairs; the rational unit prints symbol-less."""
        return [(s, f) for s, f in self.coeff.parts]


@dataclass(frozen=True)
class HardyExpr:
    """Normalized sum of terms, sorted by growth order (descending)."""

    terms: tuple[Term, ...]

    @staticmethod
    def build(terms: Iterable[Term]) -> "HardyExpr":
        merged: dict[tuple[Fraction, int], Coefficient] = {}
        for t in terms:
            if t.logpow < 0:
                raise ValueError("log exponent must be >= 0")
            key = (Fraction(t.theta), int(t.logpow))
            merged[key] = merged.get(key, ZERO_COEFF) + t.coeff
        kept = [
            Term(c, th, lp)
            for (th, lp), c in merged.items()
            if not c.is_zero
        ]
        kept.sort(key=lambda t: (t.theta, t.logpow), reverse=True)
        return HardyExpr(tuple(kept))

    @staticmethod
    def zero() -> "HardyExpr":
        return HardyExpr(())

    @staticmethod
    def monomial(coeff, theta=Fraction(0), logpow=0) -> "HardyExpr":
        if not isinstance(coeff, Coefficient):
            coeff = Coefficient.rational(coeff)
        return HardyExpr.build([Term(coeff, Fraction(theta), logpow)])

    # -- structure -----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def leading(self) -> Term:
        if self.is_zero:
            raise ValueError("zero expression has no leading term")
        return self.terms[0]

    @property
    def has_log(self) -> bool:
        return any(t.logpow > 0 for t in self.terms)

    @property
    def min_theta(self) -> Fraction:
        if self.is_zero:
            return Fraction(0)
        return min(t.theta for t in self.terms)

    def __add__(self, other: "HardyExpr") -> "HardyExpr":
        return HardyExpr.build(self.terms + other.terms)

    def __neg__(self) -> "HardyExpr":
        return HardyExpr(tuple(Term(-t.coeff, t.theta, t.logpow) for t in self.terms))

    def __sub__(self, other: "HardyExpr") -> "HardyExpr":
        return self + (-other)

    def scale(self, q) -> "HardyExpr":
        fr = Fraction(q)
        if fr == 0:
            return HardyExpr.zero()
        return HardyExpr(
            tuple(Term(t.coeff.scale(fr), t.theta, t.logpow) for t in self.terms)
        )

    def __mul__(self, other: "HardyExpr") -> "HardyExpr":
        """Term-by-term product; requires coefficient products to stay in
        the declared basis (one factor rational per pair)."""
        out = []
        for a in self.terms:
            for b in other.terms:
                out.append(Term(a.coeff.mul(b.coeff), a.theta + b.theta, a.logpow + b.logpow))
        return HardyExpr.build(out)

    def poly_and_residual(self) -> tuple["HardyExpr", "HardyExpr"]:
        """Split into the polynomial part (integer theta >= 0, no log) and
        the rest."""
        poly, rest = [], []
        for t in self.terms:
            if t.logpow == 0 and t.theta.denominator == 1 and t.theta >= 0:
                poly.append(t)
            else:
                rest.append(t)
        return HardyExpr(tuple(poly)), HardyExpr(tuple(rest))

    def __str__(self):
        from .literals import format_expr

        return format_expr(self)


# -- evaluation ----------------------------------------------------------------


def magnitude_bound(expr: HardyExpr, x_max: float, q: int = 1) -> float:
    """Cheap upper estimate of |q * expr| on (1, x_max]."""
    if expr.is_zero:
        return 0.0
    lx = max(math.log(x_max), 1.0)
    total = 0.0
    for t in expr.terms:
        total += abs(t.coeff.value) * x_max ** float(t.theta) * lx ** t.logpow
    return abs(q) * total


def evaluate_array(expr: HardyExpr, xs, precision: str = "compensated"):
    """Evaluate on an array of exact-double points.

    Returns a float64 array in ``standard`` mode and a DD in ``compensated``
    mode (the dd result keeps the fractional part of large values intact).
    Points must be > 1 when the expression carries log factors, >= 1
    otherwise.
    """
    xs = np.asarray(xs, dtype=np.float64)
    lo = 1.0 if expr.has_log else 1.0 - 1e-12
    if xs.size and float(np.min(xs)) <= lo:
        raise ExprDomainError("evaluation points must be > 1 (log domain)")
    if precision == "standard":
        with np.errstate(over="ignore", invalid="ignore"):
            out = np.zeros_like(xs)
            logs = np.log(xs) if expr.has_log else None
            for t in expr.terms:
                piece = t.coeff.value * xs ** float(t.theta)
                if t.logpow:
                    piece = piece * logs ** t.logpow
                out += piece
        if not np.all(np.isfinite(out)):
            raise OverflowError("non-finite intermediate value")
        return out
    if precision != "compensated":
        raise ValueError("precision must be 'standard' or 'compensated'")
    total = DD(np.zeros_like(xs))
    logs = dd_log(xs) if expr.has_log else None
    for t in expr.terms:
        piece = dd_pow_frac(xs, t.theta)
        if t.logpow:
            piece = piece * dd_ipow(logs, t.logpow)
        total = total + piece * t.coeff.dd()
    if not np.all(np.isfinite(total.hi)):
        raise OverflowError("non-finite intermediate value")
    return total


def evaluate(expr: HardyExpr, x: float, precision: str = "standard"):
    """Scalar evaluation; x > 1.  Compensated mode returns a DD whose
    fractional part is good to < 1e-9 absolute for |values| up to ~2^90."""
    if not (x > 1.0):
        raise ExprDomainError("x must be > 1")
    if not math.isfinite(x):
        raise ExprDomainError("x must be finite")
    result = evaluate_array(expr, np.asarray([x]), precision)
    if precision == "standard":
        return float(result[0])
    return DD(result.hi[0], result.lo[0])


def differentiate(expr: HardyExpr) -> HardyExpr:
    """d/dx [c x^t log^k] = c*t x^(t-1) log^k + c*k x^(t-1) log^(k-1)."""
    out = []
    for t in expr.terms:
        if t.theta != 0:
            out.append(Term(t.coeff.scale(t.theta), t.theta - 1, t.logpow))
        if t.logpow > 0:
            out.append(Term(t.coeff.scale(t.logpow), t.theta - 1, t.logpow - 1))
    return HardyExpr.build(out)


def nth_derivative(expr: HardyExpr, n: int) -> HardyExpr:
    for _ in range(n):
        expr = differentiate(expr)
    return expr


# -- growth classification ------------------------------------------------------


@dataclass(frozen=True)
class GrowthType:
    """One of: constant limit, pure log power, strictly-between window
    x^l << f << x^(l+1), or an exact monomial."""

    kind: str  # "constant" | "log-power" | "type-l-plus" | "monomial"
    l: int | None = None
    logpow: int = 0
    degree: int | None = None
    leading: Coefficient | None = None
    limit: float | None = None

    @property
    def is_type_l_plus(self) -> bool:
        return self.kind == "type-l-plus"


def classify_growth(expr: HardyExpr) -> GrowthType:
    if expr.is_zero:
        raise ValueError("cannot classify the zero expression")
    lead = expr.leading
    th, lp = lead.theta, lead.logpow
    if th < 0:
        return GrowthType(kind="constant", limit=0.0)
    if th == 0:
        if lp == 0:
            return GrowthType(kind="constant", limit=lead.coeff.value)
        return GrowthType(kind="log-power", logpow=lp)
    if th.denominator == 1 and lp == 0:
        return GrowthType(kind="monomial", degree=int(th), leading=lead.coeff)
    return GrowthType(kind="type-l-plus", l=int(math.floor(th)), logpow=lp)


def growth_exponent(expr: HardyExpr) -> float:
    """beta = lim log|f| / log x (the leading power)."""
    return float(expr.leading.theta)


def _signature_in_window(theta: Fraction, logpow: int) -> bool:
    """Would a function with this leading signature lie in the admissible
    growth window (strictly between x^l and x^(l+1) for some l >= 1, or
    strictly between log x and x)?"""
    if theta == 0:
        return logpow >= 2
    if theta < 0:
        return False
    if theta < 1:
        return True
    if theta.denominator == 1:  # integer exponent
        return logpow >= 1
    return True  # non-integer theta > 1


def boshernitzan_condition(expr: HardyExpr) -> bool:
    """Decide whether (f - P)/log x diverges for every rational polynomial P.

    Split f = poly + g.  Any irrational non-constant polynomial coefficient
    settles it; otherwise the divergence is governed by the residual's
    leading term (x^theta with theta > 0 beats log; log^k needs k >= 2; a
    plain log or anything smaller fails).
    """
    if expr.is_zero:
        return False
    poly, g = expr.poly_and_residual()
    for t in poly.terms:
        if t.theta >= 1 and not t.coeff.is_rational:
            return True
    if g.is_zero:
        return False
    lead = g.leading
    if lead.theta > 0:
        return True
    return lead.theta == 0 and lead.logpow >= 2


def is_in_bold_H(expr: HardyExpr) -> bool:
    """Admissible growth window: type x^(l+) with l >= 1, or sublinear but
    outgrowing log x."""
    if expr.is_zero:
        raise ValueError("zero expression")
    lead = expr.leading
    return _signature_in_window(lead.theta, lead.logpow)


# -- family cancellation analysis ----------------------------------------------


def _prefix_ranks_real(rows: list[list[float]]) -> list[int]:
    """rank of the first j rows for each j, over the reals (float pivoting)."""
    ranks = []
    basis: list[tuple[np.ndarray, int]] = []
    for row in rows:
        v = np.asarray(row, dtype=np.float64).copy()
        scale = max(1.0, float(np.max(np.abs(v)))) if v.size else 1.0
        for b, p in basis:
            v = v - b * (v[p] / b[p])
        if v.size and float(np.max(np.abs(v))) > 1e-9 * scale:
            basis.append((v, int(np.argmax(np.abs(v)))))
        ranks.append(len(basis))
    return ranks


def _prefix_ranks_rational(rows: list[list[Fraction]]) -> list[int]:
    """Exact prefix ranks over Q via fraction-free elimination."""
    ranks = []
    basis: list[list[Fraction]] = []
    pivots: list[int] = []
    for row in rows:
        v = list(row)
        for b, p in zip(basis, pivots):
            if v[p] != 0:
                f = v[p] / b[p]
                v = [vi - f * bi for vi, bi in zip(v, b)]
        nz = [i for i, vi in enumerate(v) if vi != 0]
        if nz:
            basis.append(v)
            pivots.append(nz[0])
        ranks.append(len(basis))
    return ranks


def family_combination_check(
    family: Sequence[HardyExpr], coefficient_domain: str = "reals"
) -> bool:
    """Decide whether every nonzero coefficient combination of the family
    stays in the admissible growth window.

    Enumerates cancellation patterns by prefix-rank analysis of the
    signature-coefficient matrix: a combination can survive first at
    signature j exactly when row j is independent of rows above it, and the
    zero function is reachable iff the full matrix has a nontrivial
    nullspace.  Over the integers the analysis runs exactly on the declared
    symbol basis; over the reals on the numeric matrix (declared symbolic
    identities are the only source of rational dependence).
    """
    if not family:
        raise ValueError("family must be nonempty")
    for f in family:
        if f.is_zero:
            raise ValueError("family members must be nonzero")
    if coefficient_domain not in ("integers", "reals"):
        raise ValueError("coefficient_domain must be 'integers' or 'reals'")

    k = len(family)
    signatures = sorted(
        {t.signature for f in family for t in f.terms}, reverse=True
    )
    coeff_rows = []
    for sig in signatures:
        row = []
        for f in family:
            c = ZERO_COEFF
            for t in f.terms:
                if t.signature == sig:
                    c = t.coeff
                    break
            row.append(c)
        coeff_rows.append(row)

    if coefficient_domain == "reals":
        ranks = _prefix_ranks_real([[c.value for c in row] for row in coeff_rows])
    else:
        symbols = sorted({s for row in coeff_rows for c in row for s, _ in c.parts})
        if not symbols:
            symbols = [RATIONAL_UNIT]
        expanded: list[list[Fraction]] = []
        for row in coeff_rows:
            for sym in symbols:
                expanded.append([c.basis().get(sym, Fraction(0)) for c in row])
        per_row = _prefix_ranks_rational(expanded)
        ranks = [per_row[(j + 1) * len(symbols) - 1] for j in range(len(coeff_rows))]

    prev = 0
    for sig, r in zip(signatures, ranks):
        if r > prev and not _signature_in_window(*sig):
            return False
        prev = r
    return prev >= k  # full column rank: the zero function is unreachable


# -- differential inequality verification ---------------------------------------


@dataclass(frozen=True)
class ConstantWindow:
    """Multiplicative slack applied to both ends of each asymptotic bound."""

    lo: float = 1.0 / 64.0
    hi: float = 64.0


@dataclass(frozen=True)
class RatioRow:
    eq: str
    x: float
    j: int
    value: float | None
    lower: float | None
    upper: float | None
    ok: bool | None
    note: str = ""


@dataclass(frozen=True)
class InequalityReport:
    rows: tuple[RatioRow, ...]
    window: ConstantWindow
    eps: float

    @property
    def all_ok(self) -> bool:
        return all(r.ok for r in self.rows if r.ok is not None)

    @property
    def flagged(self) -> tuple[RatioRow, ...]:
        return tuple(r for r in self.rows if r.ok is None)


def _ratio_row(eq, x, j, value, lower, upper, window) -> RatioRow:
    ok = True
    if lower is not None and value < window.lo * lower:
        ok = False
    if upper is not None and value > window.hi * upper:
        ok = False
    return RatioRow(eq, x, j, value, lower, upper, ok)


def verify_differential_inequalities(
    expr: HardyExpr,
    x_samples: Sequence[float],
    j_max: int = 2,
    window: ConstantWindow = ConstantWindow(),
    eps: float = 0.1,
) -> InequalityReport:
    """Evaluate the derivative-ratio inequalities appropriate to the
    expression's growth class at each sample and report whether each ratio
    sits inside its constant window.

    Sublinear window (and log-power) expressions get the x f'/f bounds and
    the shifted j-th ratio bounds; expressions in a higher window get the
    order-one shifted ratio and the power-law envelope for |f^(j)| with a
    configurable epsilon.  Samples where a derivative vanishes are flagged
    rather than fatal.
    """
    if expr.is_zero:
        raise ValueError("zero expression")
    xs = [float(x) for x in x_samples]
    if any(x <= math.e for x in xs):
        raise ValueError("samples must exceed e")
    if sorted(xs) != xs:
        raise ValueError("samples must be increasing")

    g = classify_growth(expr)
    sublinear = g.kind == "log-power" or (g.kind == "type-l-plus" and g.l == 0)
    upper_window = g.kind == "type-l-plus" and (g.l or 0) >= 1
    beta = growth_exponent(expr)

    derivs = [expr]
    for _ in range(j_max + 1):
        derivs.append(differentiate(derivs[-1]))

    def val(j, x):
        d = derivs[j]
        if d.is_zero:
            return 0.0
        return evaluate(d, x, "standard")

    rows: list[RatioRow] = []
    for x in xs:
        lg = math.log(x)
        for j in range(0, j_max + 1):
            fj = val(j, x)
            fj1 = val(j + 1, x)
            if fj == 0.0:
                rows.append(RatioRow("e0", x, j, None, None, None, None, "zero denominator"))
                continue
            base = x * fj1 / fj
            rows.append(_ratio_row("e0", x, j, abs(base), 1.0 / lg**2, None, window))
            if sublinear and j >= 1:
                rows.append(_ratio_row("e3", x, j, abs(base + j), 1.0 / lg**2, 1.0, window))
                rows.append(_ratio_row("e4", x, j, abs(base), 1.0 / lg**2, 1.0, window))
            if upper_window:
                rows.append(_ratio_row("e5", x, j, abs(base + j), 1.0, 1.0, window))
                rows.append(
                    _ratio_row(
                        "e6", x, j, abs(fj), x ** (beta - j - eps), x ** (beta - j + eps), window
                    )
                )
        if sublinear:
            f0, f1 = val(0, x), val(1, x)
            if f0 != 0.0:
                rows.append(_ratio_row("e2", x, 0, x * f1 / f0, 1.0 / (2 * lg), 1.0, window))
            f1_2x = val(1, 2 * x)
            if f1_2x != 0.0:
                rows.append(_ratio_row("e1", x, 0, f1 / f1_2x, 1.0, lg, window))
            else:
                rows.append(RatioRow("e1", x, 0, None, None, None, None, "zero denominator"))
    return InequalityReport(tuple(rows), window, eps)
