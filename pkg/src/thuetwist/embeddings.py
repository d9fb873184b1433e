"""Certified complex roots of integer polynomials, moduli ordering and heights.

Roots are approximated with Aberth iterations and then enclosed in discs
z_i + d|W_i| where W_i = p(z_i) / (lc prod_{j != i}(z_i - z_j)) is the
Weierstrass correction.  The union of these discs contains every root and a
connected component of k discs holds exactly k roots, so pairwise disjoint
discs isolate the roots.  All enclosure arithmetic is done on exact dyadic
rationals.

Equal moduli are proven in two ways: structurally (complex conjugate pairs,
and +/- pairs when p(-X) = +/- p(X)), or by the Gourdon-Salvy separation
bound: once two overlapping modulus intervals are both narrower than a
quarter of the guaranteed gap between distinct moduli, the moduli are equal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, lcm
from typing import Optional, Sequence

import mpmath
import numpy as np

from . import intervals as ivs
from .bounds import gs_gap
from .exact import Poly, squarefree_check
from .intervals import IV, log_star

DEFAULT_BITS = 128
MAX_BITS = 4096


class CertificationError(RuntimeError):
    """Raised when a certificate cannot be produced within the precision cap."""


def _sqrt_bounds(q: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    if q < 0:
        raise ValueError("negative square")
    s = isqrt(q.numerator * 4 ** bits // q.denominator)
    return Fraction(s, 2 ** bits), Fraction(s + 1, 2 ** bits)


@dataclass(frozen=True)
class ComplexBall:
    re: Fraction
    im: Fraction
    rad: Fraction

    @property
    def center(self) -> complex:
        return complex(float(self.re), float(self.im))

    def conj(self) -> "ComplexBall":
        return ComplexBall(self.re, -self.im, self.rad)

    def __neg__(self) -> "ComplexBall":
        return ComplexBall(-self.re, -self.im, self.rad)

    def intersects(self, other: "ComplexBall") -> bool:
        dr, di = self.re - other.re, self.im - other.im
        return dr * dr + di * di <= (self.rad + other.rad) ** 2

    def contains_point(self, re: Fraction, im: Fraction = Fraction(0)) -> bool:
        dr, di = self.re - re, self.im - im
        return dr * dr + di * di <= self.rad ** 2

    def modulus_bounds(self, bits: int = 300) -> tuple[Fraction, Fraction]:
        if self.im == 0:
            c_lo = c_hi = abs(self.re)
        else:
            c_lo, c_hi = _sqrt_bounds(self.re * self.re + self.im * self.im, bits)
        return max(Fraction(0), c_lo - self.rad), c_hi + self.rad

    def to_iv(self):
        re = ivs.span(self.re - self.rad, self.re + self.rad)
        im = ivs.span(self.im - self.rad, self.im + self.rad)
        return IV.mpc(re, im)

    def to_json(self) -> dict:
        return {
            "re": mpmath.nstr(mpmath.mpf(self.re.numerator) / self.re.denominator, 25),
            "im": mpmath.nstr(mpmath.mpf(self.im.numerator) / self.im.denominator, 25),
            "rad": mpmath.nstr(mpmath.mpf(self.rad.numerator) / self.rad.denominator, 5),
        }


@dataclass(frozen=True)
class EmbeddingSet:
    """Certified roots of ``poly`` with modulus ordering and proven ties.

    ``balls`` keep the order in which roots were computed; ``order`` lists
    indices by ascending modulus and ``tie_groups`` partitions ``order`` into
    runs of proven-equal modulus.
    """

    poly: Poly
    balls: tuple[ComplexBall, ...]
    order: tuple[int, ...]
    tie_groups: tuple[tuple[int, ...], ...]
    real_flags: tuple[bool, ...]
    conj_partner: tuple[int, ...]
    modulus_bounds: tuple[tuple[Fraction, Fraction], ...]
    bits: int
    gs_gap: Optional[Fraction] = None
    tie_certificates: tuple[str, ...] = ()

    @property
    def degree(self) -> int:
        return self.poly.degree

    def modulus(self, i: int):
        lo, hi = self.modulus_bounds[i]
        return ivs.span(lo, hi)

    def group_of(self, i: int) -> int:
        for k, grp in enumerate(self.tie_groups):
            if i in grp:
                return k
        raise IndexError(i)

    def group_moduli(self) -> list:
        """One modulus interval per tie group, ascending."""
        out = []
        for grp in self.tie_groups:
            lo = max(self.modulus_bounds[i][0] for i in grp)
            hi = min(self.modulus_bounds[i][1] for i in grp)
            out.append(ivs.span(lo, hi))
        return out

    def sorted_moduli(self) -> list[tuple[object, int]]:
        """(modulus interval, group index) for each root by ascending modulus."""
        gm = self.group_moduli()
        return [(gm[k], k) for k, grp in enumerate(self.tie_groups) for _ in grp]

    def to_json(self) -> dict:
        return {
            "poly": [str(c) for c in self.poly.coeffs],
            "balls": [b.to_json() for b in self.balls],
            "order": list(self.order),
            "tie_groups": [list(g) for g in self.tie_groups],
            "real": list(self.real_flags),
            "bits": self.bits,
        }


# --- root approximation ----------------------------------------------------

def _initial_roots(poly: Poly) -> list[complex]:
    cs = [float(c) for c in reversed(poly.coeffs)]
    if not all(math.isfinite(c) for c in cs):
        raise CertificationError("coefficients too large for initial estimates")
    roots = list(np.roots(cs)) if poly.degree > 0 else []
    seen = []
    out = []
    for k, z in enumerate(roots):
        z = complex(z)
        while any(abs(z - w) < 1e-12 for w in seen):
            z += complex(1e-6 * (k + 1), 1e-6 * (k + 2))
        seen.append(z)
        out.append(z)
    return out


def _aberth(poly: Poly, approx: Sequence, prec: int) -> list:
    ctx = mpmath.MPContext()
    ctx.prec = prec + 32
    cs = [ctx.mpf(int(c)) for c in poly.coeffs]
    dcs = [ctx.mpf(int(c)) for c in poly.derivative().coeffs]
    z = [ctx.mpc(w) if isinstance(w, complex) else ctx.mpc(*w) for w in approx]
    n = len(z)
    tol = ctx.ldexp(1, -(prec + 8))
    for _ in range(400):
        biggest = ctx.zero
        for i in range(n):
            zi = z[i]
            p = ctx.zero
            for c in reversed(cs):
                p = p * zi + c
            if p == 0:
                continue
            dp = ctx.zero
            for c in reversed(dcs):
                dp = dp * zi + c
            s = ctx.zero
            for j in range(n):
                if j != i:
                    diff = zi - z[j]
                    if diff == 0:
                        diff = ctx.ldexp(1, -prec)
                    s += 1 / diff
            w = p / dp if dp != 0 else ctx.mpc(ctx.ldexp(1, -prec // 2))
            denom = 1 - w * s
            corr = w / denom if denom != 0 else w
            z[i] = zi - corr
            rel = abs(corr) / max(ctx.one, abs(z[i]))
            if rel > biggest:
                biggest = rel
        if biggest < tol:
            break
    return [(ctx.mpf(v.real), ctx.mpf(v.imag)) for v in z]


def _dyadic(v, k: int) -> int:
    sign, man, exp, _ = v._mpf_
    man = -int(man) if sign else int(man)
    # round man * 2^exp to an integer multiple of 2^-k
    shift = exp + k
    if shift >= 0:
        return int(man) << shift
    q, r = divmod(int(man), 1 << -shift)
    return q + (1 if 2 * r >= (1 << -shift) else 0)


def _weierstrass_balls(poly: Poly, approx, prec: int) -> Optional[list[ComplexBall]]:
    """Certified discs, or None when they are not pairwise disjoint."""
    d = poly.degree
    k = prec + 16
    Z = [(_dyadic(re, k), _dyadic(im, k)) for re, im in approx]
    scale = 1 << k
    lc = int(poly.lc)
    balls = []
    for i, (A, B) in enumerate(Z):
        # H = p(z) * 2^(k d) as a Gaussian integer, by scaled Horner
        hr, hi = int(poly.coeffs[-1]), 0
        for j in range(d - 1, -1, -1):
            hr, hi = hr * A - hi * B, hr * B + hi * A
            hr += int(poly.coeffs[j]) << (k * (d - j))
        pr, pi = 1, 0
        for j, (C, D) in enumerate(Z):
            if j == i:
                continue
            er, ei = A - C, B - D
            if er == 0 and ei == 0:
                return None
            pr, pi = pr * er - pi * ei, pr * ei + pi * er
        num = hr * hr + hi * hi
        den = lc * lc * (pr * pr + pi * pi) * scale * scale
        # |W_i|^2 = num / den; radius d |W_i| rounded up
        t = k + 8
        s = isqrt(num * 4 ** t // den) + 1 if num else 0
        rad = Fraction(d * s, 1 << t)
        balls.append(ComplexBall(Fraction(A, scale), Fraction(B, scale), rad))
    for i in range(d):
        for j in range(i + 1, d):
            if balls[i].intersects(balls[j]):
                return None
    return balls


class _Unresolved(Exception):
    pass


class _DSU:
    def __init__(self, n):
        self.p = list(range(n))

    def find(self, x):
        while self.p[x] != x:
            self.p[x] = self.p[self.p[x]]
            x = self.p[x]
        return x

    def union(self, a, b):
        self.p[self.find(a)] = self.find(b)


def _classify(poly: Poly, balls: list[ComplexBall]):
    d = len(balls)
    real = [False] * d
    conj = list(range(d))
    for i, b in enumerate(balls):
        hits = [j for j in range(d) if b.conj().intersects(balls[j])]
        if hits == [i]:
            real[i] = True
        elif len(hits) == 1:
            conj[i] = hits[0]
        else:
            raise _Unresolved
    for i in range(d):
        if conj[conj[i]] != i:
            raise _Unresolved
    balls = list(balls)
    for i in range(d):
        if real[i]:
            balls[i] = ComplexBall(balls[i].re, Fraction(0), balls[i].rad)
        elif i < conj[i]:
            j = conj[i]
            if balls[i].rad <= balls[j].rad:
                balls[j] = balls[i].conj()
            else:
                balls[i] = balls[j].conj()
    neg = [None] * d
    sym = Poly(c * (-1) ** k for k, c in enumerate(poly.coeffs))
    if sym == poly or sym == -poly:
        for i, b in enumerate(balls):
            hits = [j for j in range(d) if (-b).intersects(balls[j])]
            if len(hits) != 1:
                raise _Unresolved
            neg[i] = hits[0]
    return balls, real, conj, neg


def _tie_structure(poly, balls, real, conj, neg, prec):
    d = len(balls)
    bits = prec + 40
    mods = [b.modulus_bounds(bits) for b in balls]
    dsu = _DSU(d)
    why = []
    for i in range(d):
        if conj[i] != i:
            dsu.union(i, conj[i])
        if neg[i] is not None and neg[i] != i:
            dsu.union(i, neg[i])
    classes: dict[int, list[int]] = {}
    for i in range(d):
        classes.setdefault(dsu.find(i), []).append(i)
    cls = []
    for members in classes.values():
        lo = max(mods[i][0] for i in members)
        hi = min(mods[i][1] for i in members)
        if lo > hi:
            raise _Unresolved
        cls.append([lo, hi, sorted(members), "symmetry" if len(members) > 1 else "simple"])
    cls.sort(key=lambda c: (c[0], c[1]))
    gap = None
    merged = []
    cluster = [cls[0]]
    for c in cls[1:]:
        if c[0] <= max(x[1] for x in cluster):
            cluster.append(c)
        else:
            merged.append(cluster)
            cluster = [c]
    merged.append(cluster)
    groups = []
    for cluster in merged:
        if len(cluster) == 1:
            groups.append(cluster[0])
            continue
        if gap is None:
            M_hi = Fraction(abs(int(poly.lc)))
            for lo_hi in mods:
                M_hi *= max(Fraction(1), lo_hi[1])
            gap = ivs.raw_to_fraction(gs_gap(d, M_hi)._mpf_)
        if all(c[1] - c[0] < gap / 4 for c in cluster):
            lo = max(c[0] for c in cluster)
            hi = min(c[1] for c in cluster)
            if lo > hi:
                raise _Unresolved
            members = sorted(i for c in cluster for i in c[2])
            groups.append([lo, hi, members, "separation-bound"])
        else:
            raise _Unresolved
    return groups, mods, gap


def isolate_roots(g: Poly, bits: int = DEFAULT_BITS, max_bits: int = MAX_BITS) -> EmbeddingSet:
    if g.is_zero() or g.degree < 1:
        raise ValueError("isolate_roots needs a polynomial of degree >= 1")
    if not g.is_integral():
        g = g.primitive()
    if not squarefree_check(g):
        raise ValueError("polynomial is not squarefree")
    if g.degree == 1:
        root = Fraction(-g.coeffs[0], g.coeffs[1])
        ball = ComplexBall(root, Fraction(0), Fraction(0))
        m = abs(root)
        return EmbeddingSet(g, (ball,), (0,), ((0,),), (True,), (0,), ((m, m),), bits, None, ("simple",))
    approx = _initial_roots(g)
    prec = bits
    while True:
        approx = _aberth(g, approx, prec)
        balls = _weierstrass_balls(g, approx, prec)
        if balls is not None:
            try:
                balls, real, conj, neg = _classify(g, balls)
                groups, mods, gap = _tie_structure(g, balls, real, conj, neg, prec)
            except _Unresolved:
                pass
            else:
                order = tuple(i for grp in groups for i in grp[2])
                return EmbeddingSet(
                    poly=g,
                    balls=tuple(balls),
                    order=order,
                    tie_groups=tuple(tuple(grp[2]) for grp in groups),
                    real_flags=tuple(real),
                    conj_partner=tuple(conj),
                    modulus_bounds=tuple(mods),
                    bits=prec,
                    gs_gap=gap,
                    tie_certificates=tuple(grp[3] for grp in groups),
                )
        prec *= 2
        if prec > max_bits:
            raise CertificationError(
                f"could not isolate roots / certify modulus ties of {g} within {max_bits} bits")


# --- evaluations on embeddings ---------------------------------------------

def eval_at(p: Poly, ball: ComplexBall):
    """Enclosure of p(z) for every z in the ball (complex interval)."""
    z = ball.to_iv()
    acc = IV.mpc(0)
    for c in reversed(p.coeffs):
        acc = acc * z + ivs.iv(Fraction(c))
    return acc


def cabs(z):
    return IV.sqrt(z.real * z.real + z.imag * z.imag)


def mahler_measure(f: Poly, emb: EmbeddingSet):
    """Certified interval for lc(f) * prod max{1, |root|}."""
    if not f.is_integral():
        raise ValueError("Mahler measure expects an integer polynomial")
    if f.lc <= 0:
        raise ValueError("leading coefficient must be positive")
    if emb.poly.primitive() != f.primitive():
        raise ValueError("embedding set belongs to a different polynomial")
    lo = hi = Fraction(f.lc)
    for k, grp in enumerate(emb.tie_groups):
        g_lo = max(emb.modulus_bounds[i][0] for i in grp)
        g_hi = min(emb.modulus_bounds[i][1] for i in grp)
        lo *= max(Fraction(1), g_lo) ** len(grp)
        hi *= max(Fraction(1), g_hi) ** len(grp)
    return ivs.span(lo, hi)


def naive_height(f: Poly) -> int:
    if f.is_zero():
        raise ValueError("height of the zero polynomial")
    return f.height()


def conjugates(x, emb: EmbeddingSet) -> list:
    """Complex intervals for sigma_j(x) over the roots of the field polynomial, in ball order."""
    p = x.as_poly()
    return [eval_at(p, b) for b in emb.balls]


def log_height(x, emb: EmbeddingSet):
    """(1/d) log M(charpoly(x)) where emb embeds the field of x."""
    if x.is_zero():
        raise ValueError("height of zero")
    cp = x.charpoly()
    c = lcm(*(Fraction(v).denominator for v in cp.coeffs))
    total = IV.log(IV.mpf(c))
    for z in conjugates(x, emb):
        total = total + IV.log(ivs.max1(cabs(z)))
    return total / emb.degree


def house(x, emb: EmbeddingSet):
    vals = [cabs(z) for z in conjugates(x, emb)]
    lo = max(ivs.endpoints(v)[0] for v in vals)
    hi = max(ivs.endpoints(v)[1] for v in vals)
    return ivs.span(lo, hi)


def check_two_conjugates_real(emb: EmbeddingSet) -> dict:
    """Evaluate both implications on certified moduli data.

    (a) |g1| < |g2| with g2 real forces |g2| < |g3|;
    (b) |g_{d-1}| < |g_d| with g_{d-1} real forces |g_{d-2}| < |g_{d-1}|.
    With ties the roots inside a group can be listed in any order, so a
    witness exists exactly when an outer singleton group is followed by a
    group of size >= 2 that contains a real root.
    """
    d = emb.degree
    if d < 3:
        raise ValueError("needs degree >= 3")
    groups = emb.tie_groups
    out = {"pass": True, "witness": None}
    for part, first, second in (("a", groups[0], groups[1] if len(groups) > 1 else None),
                                ("b", groups[-1], groups[-2] if len(groups) > 1 else None)):
        if second is None or len(first) != 1:
            out[part] = "vacuous"
            continue
        if not any(emb.real_flags[i] for i in second):
            out[part] = "vacuous"
            continue
        if len(second) == 1:
            out[part] = "holds"
        else:
            out[part] = "violated"
            out["pass"] = False
            out["witness"] = {"part": part, "outer": list(first), "tied": list(second)}
    return out


__all__ = [
    "CertificationError", "ComplexBall", "EmbeddingSet", "isolate_roots", "mahler_measure",
    "naive_height", "log_height", "log_star", "house", "conjugates", "eval_at", "cabs",
    "check_two_conjugates_real", "DEFAULT_BITS", "MAX_BITS",
]
