"""Exact arithmetic in K = Q[theta]/(g) over the power basis.

Elements are integer coordinate vectors with a positive common denominator.
Embedding-dependent operations (unit reduction, regulators) take a certified
``EmbeddingSet`` for g.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import floor, gcd, lcm
from typing import Sequence

import numpy as np

from . import exact
from . import intervals as ivs
from .embeddings import CertificationError, EmbeddingSet, cabs, conjugates, isolate_roots, log_height
from .exact import Poly
from .intervals import IV


class FieldMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class NumberField:
    g: Poly

    def __post_init__(self):
        g = self.g
        if not g.is_integral() or not g.is_monic():
            raise ValueError("defining polynomial must be monic with integer coefficients")
        if g.degree < 2:
            raise ValueError("defining polynomial must have degree >= 2")
        if not exact.squarefree_check(g):
            raise ValueError("defining polynomial is not squarefree")
        if exact.rational_roots(g):
            raise ValueError("defining polynomial has a rational root")

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[int]) -> "NumberField":
        return cls(Poly(int(c) for c in coeffs))

    @property
    def d(self) -> int:
        return self.g.degree

    @cached_property
    def theta(self) -> "FieldElement":
        return self.element([0, 1])

    @cached_property
    def one(self) -> "FieldElement":
        return self.element([1])

    def element(self, coords: Sequence, den: int = 1) -> "FieldElement":
        """Element sum coords[k] theta^k / den; coords may be rationals or longer than d."""
        p = Poly(Fraction(c) / den for c in coords)
        return FieldElement.from_poly(self, p)

    def rational(self, q) -> "FieldElement":
        return self.element([Fraction(q)])

    def embeddings(self, bits: int = 128, max_bits: int = 4096) -> EmbeddingSet:
        return isolate_roots(self.g, bits, max_bits)

    def signature(self, emb: EmbeddingSet) -> tuple[int, int]:
        r1 = sum(emb.real_flags)
        return r1, (self.d - r1) // 2

    def unit_rank(self, emb: EmbeddingSet) -> int:
        r1, r2 = self.signature(emb)
        return r1 + r2 - 1

    def to_json(self) -> dict:
        return {"g": [str(c) for c in self.g.coeffs]}


class FieldElement:
    __slots__ = ("field", "coords", "den")

    def __init__(self, field: NumberField, coords: Sequence[int], den: int = 1):
        coords = [int(c) for c in coords]
        if len(coords) > field.d:
            raise ValueError("too many coordinates; use NumberField.element to reduce")
        coords += [0] * (field.d - len(coords))
        den = int(den)
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            coords, den = [-c for c in coords], -den
        g = gcd(den, *coords)
        if g > 1:
            coords, den = [c // g for c in coords], den // g
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coords", tuple(coords))
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    @classmethod
    def from_poly(cls, field: NumberField, p: Poly) -> "FieldElement":
        r = p % field.g if p.degree >= field.d else p
        fs = [Fraction(c) for c in r.coeffs]
        den = lcm(1, *(f.denominator for f in fs))
        return cls(field, [int(f * den) for f in fs], den)

    def as_poly(self) -> Poly:
        return Poly(Fraction(c, self.den) for c in self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def _check(self, other: "FieldElement"):
        if not isinstance(other, FieldElement):
            raise TypeError("expected a FieldElement")
        if other.field.g != self.field.g:
            raise FieldMismatchError("elements belong to different fields")

    def _lift(self, other) -> "FieldElement":
        if isinstance(other, (int, Fraction)):
            return self.field.rational(other)
        self._check(other)
        return other

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.field.rational(other)
        return (isinstance(other, FieldElement) and other.field.g == self.field.g
                and self.coords == other.coords and self.den == other.den)

    def __hash__(self):
        return hash((self.field.g, self.coords, self.den))

    def __repr__(self) -> str:
        return f"FieldElement({list(self.coords)}, den={self.den})"

    def __str__(self) -> str:
        s = exact.format_poly(Poly(self.coords), "t")
        return s if self.den == 1 else f"({s})/{self.den}"

    def __add__(self, other) -> "FieldElement":
        other = self._lift(other)
        den = lcm(self.den, other.den)
        a, b = den // self.den, den // other.den
        return FieldElement(self.field, [a * x + b * y for x, y in zip(self.coords, other.coords)], den)

    __radd__ = __add__

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.field, [-c for c in self.coords], self.den)

    def __sub__(self, other) -> "FieldElement":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "FieldElement":
        return self._lift(other) - self

    def __mul__(self, other) -> "FieldElement":
        other = self._lift(other)
        prod = _mulmod(self.coords, other.coords, self.field.g.coeffs)
        return FieldElement(self.field, prod, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        e0 = [1] + [0] * (self.field.d - 1)
        sol = exact.solve(self.mult_matrix(), e0)
        return self.field.element(sol)

    def __truediv__(self, other) -> "FieldElement":
        return self * self._lift(other).inverse()

    def __pow__(self, k: int) -> "FieldElement":
        if k < 0:
            return self.inverse() ** (-k)
        result, base = self.field.one, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def mult_matrix(self) -> list[list[Fraction]]:
        """Matrix of y -> self * y on the power basis (column j = self * theta^j)."""
        d = self.field.d
        cols = []
        col = list(self.coords)
        gc = self.field.g.coeffs
        for _ in range(d):
            cols.append([Fraction(c, self.den) for c in col])
            # multiply by theta, reduce by monic g
            top = col[-1]
            col = [0] + col[:-1]
            col = [c - top * gc[k] for k, c in enumerate(col)]
        return [[cols[j][i] for j in range(d)] for i in range(d)]

    def charpoly(self) -> Poly:
        """Monic characteristic polynomial over Q."""
        if not any(self.coords[1:]):
            c = Fraction(self.coords[0], self.den)
            return Poly((-c, 1)) ** self.field.d
        return exact.charpoly(self.mult_matrix())

    def norm(self) -> Fraction:
        return Fraction((-1) ** self.field.d) * Fraction(self.charpoly()[0])

    def trace(self) -> Fraction:
        return -Fraction(self.charpoly()[self.field.d - 1])

    def is_integral(self) -> bool:
        return self.charpoly().is_integral()

    def is_unit(self) -> bool:
        cp = self.charpoly()
        return cp.is_integral() and cp.is_monic() and abs(cp[0]) == 1

    def generates_field(self) -> bool:
        d = self.field.d
        rows = []
        p = self.field.one
        for _ in range(d):
            rows.append([Fraction(c, p.den) for c in p.coords])
            p = p * self
        return exact.rank(rows) == d

    def to_json(self) -> dict:
        return {"coords": [str(c) for c in self.coords], "den": str(self.den)}


def _mulmod(a: Sequence[int], b: Sequence[int], g: Sequence[int]) -> list[int]:
    d = len(g) - 1
    prod = [0] * (2 * d - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    prod[i + j] += x * y
    for k in range(len(prod) - 1, d - 1, -1):
        top = prod[k]
        if top:
            for j in range(d):
                prod[k - d + j] -= top * g[j]
    return prod[:d]


def element_arith(x: FieldElement, y: FieldElement | None, op: str, k: int = 1) -> FieldElement:
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    if op == "inv":
        return x.inverse()
    if op == "pow":
        return x ** k
    raise ValueError(f"unknown operation {op!r}")


def charpoly_of(x: FieldElement) -> Poly:
    return x.charpoly()


def norm(x: FieldElement) -> Fraction:
    return x.norm()


def is_unit(x: FieldElement) -> bool:
    return x.is_unit()


def generates_field(x: FieldElement) -> bool:
    return x.generates_field()


# --- units -----------------------------------------------------------------

@dataclass(frozen=True)
class UnitSystem:
    field: NumberField
    units: tuple[FieldElement, ...]

    def __post_init__(self):
        for u in self.units:
            if u.field.g != self.field.g:
                raise FieldMismatchError("unit from another field")
            if not u.is_unit():
                raise ValueError(f"{u} is not a unit")

    @property
    def r(self) -> int:
        return len(self.units)


def log_embedding_indices(emb: EmbeddingSet) -> list[int]:
    """Ball indices of r1 + r2 - 1 embeddings: real ones first, one per complex pair, last dropped."""
    reals = [i for i in range(emb.degree) if emb.real_flags[i]]
    pairs = [i for i in range(emb.degree) if not emb.real_flags[i] and i < emb.conj_partner[i]]
    return (reals + pairs)[:-1]


def _log_matrix(sys: UnitSystem, emb: EmbeddingSet, weighted: bool):
    idx = log_embedding_indices(emb)
    if len(idx) != sys.r:
        raise ValueError(f"unit system has {sys.r} units but the unit rank is {len(idx)}")
    rows = []
    for u in sys.units:
        conj = conjugates(u, emb)
        row = []
        for j in idx:
            v = IV.log(cabs(conj[j]))
            if weighted and not emb.real_flags[j]:
                v = 2 * v
            row.append(v)
        rows.append(row)
    return rows


def _interval_det(m) -> object:
    n = len(m)
    if n == 0:
        return IV.mpf(1)
    a = [row[:] for row in m]
    det = IV.mpf(1)
    for col in range(n):
        piv = max(range(col, n), key=lambda i: abs(ivs.mid(a[i][col])))
        if 0 in a[piv][col]:
            raise CertificationError("log-embedding matrix is singular to working precision")
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det = det * a[col][col]
        for i in range(col + 1, n):
            f = a[i][col] / a[col][col]
            a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return det


def _interval_inverse(m) -> list:
    n = len(m)
    a = [row[:] + [IV.mpf(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = max(range(col, n), key=lambda i: abs(ivs.mid(a[i][col])))
        if 0 in a[piv][col]:
            raise CertificationError("log-embedding matrix is singular to working precision")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for i in range(n):
            if i != col:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return [row[n:] for row in a]


def regulator_from_units(sys: UnitSystem, emb: EmbeddingSet):
    """Certified |det(n_j log|phi_j(eps_i)|)|; equals the regulator for a fundamental system."""
    det = _interval_det(_log_matrix(sys, emb, weighted=True))
    if 0 in det:
        raise CertificationError("units are dependent (regulator interval contains 0)")
    return abs(det)


def check_siegel_properties(sys: UnitSystem, emb: EmbeddingSet,
                            kappa7: float, kappa8: float, kappa9: float) -> dict:
    if sys.r == 0:
        return {"i": True, "ii": True, "iii": True, "vacuous": True, "pass": True}
    R = regulator_from_units(sys, emb)
    heights = [log_height(u, emb) for u in sys.units]
    prod = IV.mpf(1)
    for h in heights:
        prod = prod * h
    hmax_lo = max(ivs.endpoints(h)[0] for h in heights)
    hmax_hi = max(ivs.endpoints(h)[1] for h in heights)
    hmax = ivs.span(hmax_lo, hmax_hi)
    inv = _interval_inverse(_log_matrix(sys, emb, weighted=False))
    entry_max = max(ivs.endpoints(abs(x))[1] for row in inv for x in row)
    ok_i = ivs.certainly_le(prod, IV.mpf(kappa7) * R)
    ok_ii = ivs.certainly_le(hmax, IV.mpf(kappa8) * R)
    ok_iii = entry_max <= Fraction(kappa9)
    return {
        "i": ok_i, "ii": ok_ii, "iii": ok_iii, "vacuous": False,
        "pass": ok_i and ok_ii and ok_iii,
        "regulator": R, "heights": heights, "max_inverse_entry": float(entry_max),
    }


def _round_half_away(x: float) -> int:
    return int(floor(abs(x) + 0.5)) * (1 if x >= 0 else -1)


def reduce_by_units(beta: FieldElement, sys: UnitSystem, emb: EmbeddingSet):
    """Write beta = beta_tilde * prod eps_i^b_i with beta_tilde of balanced conjugates.

    Returns (b, beta_tilde, log_deviation) where log_deviation is an interval
    enclosing max_j |log(|m|^(-1/d) |beta_tilde_j|)|.
    """
    if beta.is_zero():
        raise ValueError("beta must be nonzero")
    m = beta.norm()
    if m == 0:
        raise ValueError("beta must have nonzero norm")
    d = beta.field.d
    if sys.r == 0:
        return [], beta, _log_deviation(beta, m, emb)
    rows = _log_matrix(sys, emb, weighted=False)
    A = np.array([[ivs.mid(v) for v in row] for row in rows], dtype=float).T
    if abs(np.linalg.det(A)) < 1e-12:
        raise CertificationError("log-embedding matrix of the unit system is singular")
    # least squares over all embeddings: log|sigma_j(beta)| - log|m|/d = sum_i b_i log|sigma_j(eps_i)|
    full = np.array([[ivs.mid(IV.log(cabs(z))) for z in conjugates(u, emb)] for u in sys.units], dtype=float).T
    target = np.array([ivs.mid(IV.log(cabs(z))) for z in conjugates(beta, emb)], dtype=float)
    target -= float(np.log(abs(float(m)))) / d
    b_real, *_ = np.linalg.lstsq(full, target, rcond=None)
    b = [_round_half_away(v) for v in b_real]
    beta_tilde = beta
    for u, k in zip(sys.units, b):
        if k:
            beta_tilde = beta_tilde * u ** (-k)
    return b, beta_tilde, _log_deviation(beta_tilde, m, emb)


def _log_deviation(x: FieldElement, m: Fraction, emb: EmbeddingSet):
    shift = IV.log(ivs.iv(abs(m))) / x.field.d
    devs = [abs(IV.log(cabs(z)) - shift) for z in conjugates(x, emb)]
    hi = max(ivs.endpoints(v)[1] for v in devs)
    lo = max(ivs.endpoints(v)[0] for v in devs)
    return ivs.span(lo, hi)
