"""Exact univariate polynomials over Z and Q, and exact rational linear algebra.

Integers are plain Python ints and rationals are ``fractions.Fraction``.
Polynomials store coefficients lowest degree first.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence, Union

Number = Union[int, Fraction]


def _norm(c: Number) -> Number:
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


class Poly:
    """Immutable univariate polynomial with int or Fraction coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Number] = ()):
        cs = [_norm(Fraction(c) if isinstance(c, float) else c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def x(cls) -> "Poly":
        return cls((0, 1))

    @classmethod
    def const(cls, c: Number) -> "Poly":
        return cls((c,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> Number:
        return self.coeffs[-1] if self.coeffs else 0

    def __getitem__(self, k: int) -> Number:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly((other,))
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Poly({list(self.coeffs)!r})"

    def __str__(self) -> str:
        return format_poly(self)

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.coeffs)

    def is_monic(self) -> bool:
        return self.lc == 1

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self.coeffs)

    def __add__(self, other) -> "Poly":
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self[k] + other[k] for k in range(n))

    __radd__ = __add__

    def __sub__(self, other) -> "Poly":
        return self + (-_as_poly(other))

    def __rsub__(self, other) -> "Poly":
        return _as_poly(other) - self

    def __mul__(self, other) -> "Poly":
        other = _as_poly(other)
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result, base = Poly((1,)), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other) -> tuple["Poly", "Poly"]:
        other = _as_poly(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = [Fraction(c) for c in self.coeffs]
        dq = other.degree
        lc = Fraction(other.lc)
        if len(rem) - 1 < dq:
            return Poly(), self
        quo = [Fraction(0)] * (len(rem) - dq)
        for k in range(len(rem) - 1 - dq, -1, -1):
            c = rem[k + dq] / lc
            quo[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return Poly(quo), Poly(rem[:dq])

    def __floordiv__(self, other) -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "Poly":
        return divmod(self, other)[1]

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Poly":
        return Poly(k * c for k, c in enumerate(self.coeffs) if k)

    def compose(self, inner: "Poly") -> "Poly":
        """Return ``self(inner(X))``."""
        acc = Poly()
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        lc = Fraction(self.lc)
        return Poly(Fraction(c) / lc for c in self.coeffs)

    def reversed(self) -> "Poly":
        """Reciprocal polynomial X^deg * p(1/X)."""
        return Poly(reversed(self.coeffs))

    def content(self) -> Fraction:
        if self.is_zero():
            return Fraction(0)
        fs = [Fraction(c) for c in self.coeffs]
        num = 0
        den = 1
        for f in fs:
            num = gcd(num, f.numerator)
            den = lcm(den, f.denominator)
        return Fraction(num, den)

    def primitive(self) -> "Poly":
        """Primitive integer polynomial with positive leading coefficient."""
        if self.is_zero():
            return self
        c = self.content()
        if self.lc < 0:
            c = -c
        return Poly(Fraction(v) / c for v in self.coeffs)

    def height(self) -> int:
        if not self.is_integral():
            raise ValueError("naive height is defined for integer polynomials")
        return max((abs(c) for c in self.coeffs), default=0)


def _as_poly(p) -> Poly:
    if isinstance(p, Poly):
        return p
    if isinstance(p, (int, Fraction)):
        return Poly((p,))
    raise TypeError(f"cannot treat {type(p).__name__} as a polynomial")


def poly_arith(p: Poly, q: Poly, op: str) -> Poly:
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown polynomial operation {op!r}")


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Monic gcd over Q (zero if both inputs are zero)."""
    a, b = p, q
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def squarefree_check(g: Poly) -> bool:
    if g.is_zero():
        raise ValueError("squarefree_check needs a nonzero polynomial")
    return poly_gcd(g, g.derivative()).degree == 0


def squarefree_part(g: Poly) -> Poly:
    """Monic squarefree part g / gcd(g, g')."""
    return (g // poly_gcd(g, g.derivative())).monic()


def rational_roots(g: Poly) -> list[Fraction]:
    """Rational roots of an integer polynomial by the rational root test."""
    g = g.primitive()
    if g.is_zero():
        raise ValueError("zero polynomial")
    roots = []
    cs = list(g.coeffs)
    if cs[0] == 0:
        roots.append(Fraction(0))
        k = next(i for i, c in enumerate(cs) if c)
        cs = cs[k:]
    if len(cs) == 1:
        return roots
    p = Poly(cs)
    for num in _divisors(abs(int(cs[0]))):
        for den in _divisors(abs(int(cs[-1]))):
            for s in (1, -1):
                r = Fraction(s * num, den)
                if r not in roots and p(r) == 0:
                    roots.append(r)
    return sorted(roots)


def _divisors(n: int) -> list[int]:
    small, large = [], []
    k = 1
    while k * k <= n:
        if n % k == 0:
            small.append(k)
            if k * k != n:
                large.append(n // k)
        k += 1
    return small + large[::-1]


def cyclotomic(n: int) -> Poly:
    """Phi_n by exact division of X^n - 1 by Phi_k for the proper divisors k."""
    if n < 1:
        raise ValueError("cyclotomic index must be positive")
    p = Poly((-1,) + (0,) * (n - 1) + (1,))
    for k in _divisors(n):
        if k < n:
            q, r = divmod(p, cyclotomic(k))
            assert r.is_zero()
            p = q
    return p


def format_poly(p: Poly, var: str = "X") -> str:
    if p.is_zero():
        return "0"
    terms = []
    for k in range(p.degree, -1, -1):
        c = p[k]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if k == 0:
            body = str(a)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if a == 1 else f"{a}{mono}"
        terms.append((sign, body))
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        out += sign + body
    return out


# --- matrices --------------------------------------------------------------

Matrix = list[list[Fraction]]


def as_matrix(rows: Sequence[Sequence[Number]]) -> Matrix:
    m = [[Fraction(c) for c in row] for row in rows]
    if m and any(len(row) != len(m[0]) for row in m):
        raise ValueError("matrix rows have unequal lengths")
    return m


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    cols = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in cols] for row in a]


def trace(m: Matrix) -> Fraction:
    return sum((m[i][i] for i in range(len(m))), Fraction(0))


def charpoly(m: Sequence[Sequence[Number]]) -> Poly:
    """Characteristic polynomial det(X I - M) by exact Faddeev-LeVerrier."""
    m = as_matrix(m)
    n = len(m)
    if n == 0 or any(len(row) != n for row in m):
        raise ValueError("charpoly needs a nonempty square matrix")
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    aux = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # aux_k = M (aux_{k-1} + c_{n-k+1} I); c_{n-k} = -tr(aux_k)/k
        prev = [row[:] for row in aux]
        for i in range(n):
            prev[i][i] += coeffs[n - k + 1]
        aux = mat_mul(m, prev)
        coeffs[n - k] = -trace(aux) / k
    return Poly(coeffs)


def rank(m: Sequence[Sequence[Number]]) -> int:
    rows = as_matrix(m)
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(r + 1, len(rows)):
            f = rows[i][col] / rows[r][col]
            if f:
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def det(m: Sequence[Sequence[Number]]) -> Fraction:
    """Determinant by fraction-free Bareiss elimination on a scaled integer matrix."""
    rows = as_matrix(m)
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise ValueError("det needs a square matrix")
    if n == 0:
        return Fraction(1)
    scale = 1
    for row in rows:
        scale = lcm(scale, *(c.denominator for c in row))
    a = [[int(c * scale) for c in row] for row in rows]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return Fraction(sign * a[n - 1][n - 1], scale ** n)


def solve(m: Sequence[Sequence[Number]], rhs: Sequence[Number]) -> list[Fraction]:
    """Solve M v = rhs exactly for square nonsingular M."""
    n = len(m)
    aug = [list(row) + [Fraction(b)] for row, b in zip(as_matrix(m), rhs)]
    for col in range(n):
        piv = next((i for i in range(col, n) if aug[i][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [c / p for c in aug[col]]
        for i in range(n):
            if i != col and aug[i][col]:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[col])]
    return [row[n] for row in aug]
