"""Exhaustive search for solutions of 0 < |F_a(x, y)| <= m inside a box."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

from . import intervals as ivs
from .bounds import KappaConfig, theorem2_bound
from .embeddings import conjugates
from .family import (
    SolutionTriple, TwistFamily, evaluate_form, form_at, invariants_of, psi_values,
)

# A window whose centre is known less precisely than this triggers a full scan.
WINDOW_SLACK_LIMIT = 1e6


@dataclass(frozen=True)
class SearchBox:
    a_min: int
    a_max: int
    xy_max: int
    m: int

    def __post_init__(self):
        if self.a_min > self.a_max:
            raise ValueError("a_min must not exceed a_max")
        if self.xy_max < 1:
            raise ValueError("xy_max must be >= 1")
        if self.m < 1:
            raise ValueError("m must be >= 1")


@dataclass
class SolutionSet:
    box: SearchBox
    solutions: list[SolutionTriple]
    skipped_a: list[int] = field(default_factory=list)
    full_scan_a: list[int] = field(default_factory=list)
    diagnostics: list[dict] = field(default_factory=list)

    def pairs(self) -> list[tuple[int, int, int, int]]:
        return [(s.x, s.y, s.a, s.value) for s in self.solutions]

    def to_json(self) -> dict:
        out = {
            "box": {"a_min": self.box.a_min, "a_max": self.box.a_max,
                    "xy_max": self.box.xy_max, "m": self.box.m},
            "count": len(self.solutions),
            "solutions": [s.to_json() for s in self.solutions],
            "skipped_a": self.skipped_a,
            "full_scan_a": self.full_scan_a,
        }
        if self.diagnostics:
            out["diagnostics"] = self.diagnostics
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["a", "x", "y", "value"])
        for s in self.solutions:
            w.writerow([s.a, s.x, s.y, s.value])
        return buf.getvalue()


def _windows(gammas, y: int, radius: float, xy_max: int):
    """Integer x-ranges that can satisfy min_j |x - gamma_j y| <= radius, or None if too imprecise."""
    ranges = []
    for g in gammas:
        im_lo, im_hi = ivs.endpoints(g.imag)
        min_abs_im = 0 if im_lo <= 0 <= im_hi else min(abs(im_lo), abs(im_hi))
        if min_abs_im * y > radius:
            continue
        re_lo, re_hi = ivs.endpoints(g.real)
        if re_hi - re_lo > WINDOW_SLACK_LIMIT:
            return None
        lo = math.floor(re_lo * y - radius) - 1
        hi = math.ceil(re_hi * y + radius) + 1
        lo, hi = max(lo, -xy_max), min(hi, xy_max)
        if lo <= hi:
            ranges.append((lo, hi))
    return ranges


def _radius(m: int, a0: int, d: int) -> float:
    # upper bound for (m / a0)^(1/d) with a safety margin
    return (m / a0) ** (1.0 / d) * (1 + 1e-9) + 1e-9


def enumerate_solutions(fam: TwistFamily, box: SearchBox, require_degree: bool = True,
                        with_diagnostics: bool = False) -> SolutionSet:
    """All (x, y, a) in the box with xy != 0 and 0 < |F_a(x, y)| <= m.

    For each y > 0 only x within (m/a0)^(1/d) of the real part of some
    gamma_j y can work, since a0 prod |x - gamma_j y| <= m forces the nearest
    factor below that radius.  (x, y) and (-x, -y) are solutions together.
    """
    d = fam.d
    radius = _radius(box.m, fam.a0, d)
    found: dict[tuple[int, int, int], SolutionTriple] = {}
    skipped, fallback = [], []
    for a in range(box.a_min, box.a_max + 1):
        gamma = fam.gamma(a)
        if require_degree and not gamma.generates_field():
            skipped.append(a)
            continue
        F = form_at(fam, a)
        gammas = conjugates(gamma, fam.emb)
        used_full = False
        for y in range(1, box.xy_max + 1):
            ranges = _windows(gammas, y, radius, box.xy_max)
            if ranges is None:
                ranges = [(-box.xy_max, box.xy_max)]
                used_full = True
            xs = sorted({x for lo, hi in ranges for x in range(lo, hi + 1)})
            for x in xs:
                if x == 0:
                    continue
                v = evaluate_form(F, x, y)
                if 0 < abs(v) <= box.m:
                    found[(a, y, x)] = SolutionTriple(x, y, a, v)
                    found[(a, -y, -x)] = SolutionTriple(-x, -y, a, v * (-1) ** d)
        if used_full:
            fallback.append(a)
    sols = [found[k] for k in sorted(found)]
    out = SolutionSet(box, sols, skipped, fallback)
    if with_diagnostics:
        out.diagnostics = [verify_solution(fam, s, box.m, psi=True) for s in sols]
    return out


def full_scan(fam: TwistFamily, box: SearchBox, require_degree: bool = True) -> list[SolutionTriple]:
    """Unconditional double loop over the box; the reference for enumerate_solutions."""
    out = []
    for a in range(box.a_min, box.a_max + 1):
        if require_degree and not fam.gamma(a).generates_field():
            continue
        F = form_at(fam, a)
        for y in range(-box.xy_max, box.xy_max + 1):
            for x in range(-box.xy_max, box.xy_max + 1):
                if x * y == 0:
                    continue
                v = evaluate_form(F, x, y)
                if 0 < abs(v) <= box.m:
                    out.append(SolutionTriple(x, y, a, v))
    return sorted(out, key=SolutionTriple.key)


def verify_solution(fam: TwistFamily, sol: SolutionTriple, m: int, psi: bool = True) -> dict:
    F = form_at(fam, sol.a)
    value = evaluate_form(F, sol.x, sol.y)
    reasons = []
    if sol.x * sol.y == 0:
        reasons.append("xy = 0")
    if not 0 < abs(value) <= m:
        reasons.append(f"|F_a(x, y)| = {abs(value)} is not in (0, {m}]")
    degree_ok = fam.gamma(sol.a).generates_field()
    if not degree_ok:
        reasons.append("Q(alpha upsilon^a) != K")
    out = {
        "x": sol.x, "y": sol.y, "a": sol.a, "value": value,
        "degree_condition": degree_ok,
        "pass": not reasons,
        "reasons": reasons,
    }
    if psi and sol.x * sol.y != 0 and value != 0:
        trip = SolutionTriple(sol.x, sol.y, sol.a, value)
        p = psi_values(fam, trip)
        out["i0"] = p["i0"]
        out["i0_certified"] = p["i0_certified"]
        out["psi_moduli"] = [ivs.mid(v) for v in p["psi_moduli"]]
        out["psi_consistent"] = p["consistent"]
        if not p["consistent"]:
            out["pass"] = False
            reasons.append("conjugate product does not reproduce F_a(x, y)")
    return out


def empirical_kappa(fam: TwistFamily, box: SearchBox, m: int, R, solutions: SolutionSet | None = None,
                    require_degree: bool = True) -> dict:
    """Largest |a| / rhs(kappa = 1) over the found solutions: the smallest kappa they are consistent with."""
    if solutions is None:
        box = SearchBox(box.a_min, box.a_max, box.xy_max, m)
        solutions = enumerate_solutions(fam, box, require_degree)
    inv = invariants_of(fam)
    lam0, lam, mu = ivs.mid(inv.lambda0), ivs.mid(inv.lambda_), ivs.mid(inv.mu)
    Rv = ivs.mid(ivs.iv(R))
    ratios = []
    for s in solutions.solutions:
        rhs = theorem2_bound(Rv, m, lam0, lam, mu, KappaConfig())
        ratios.append({"x": s.x, "y": s.y, "a": s.a, "rhs": rhs, "ratio": abs(s.a) / rhs})
    fitted = max((r["ratio"] for r in ratios), default=0.0)
    return {
        "solutions": len(solutions.solutions),
        "max_abs_a": max((abs(s.a) for s in solutions.solutions), default=0),
        "fitted_kappa": fitted,
        "vacuous": not ratios,
        "mu": mu, "mu_case": inv.mu_case, "lambda": lam, "lambda0": lam0, "R": Rv, "m": m,
        "ratios": ratios,
    }
