"""Property suites for the inequalities used along the way to the bounds.

Each suite draws its cases from a seeded ``random.Random`` and returns a plain
dict: ``cases``, ``violations`` (certified counterexamples), ``uncertified``
(interval overlap, neither proven nor refuted) and ``pass``.
"""

from __future__ import annotations

import itertools
import math
import random
from functools import lru_cache

from . import intervals as ivs
from .bounds import (
    friedman_check, gs_separation, lemma_elementary, ratio_lower_bound, voutier_bound,
)
from .embeddings import check_two_conjugates_real, isolate_roots, log_height, mahler_measure
from .exact import Poly, squarefree_check
from .family import TwistFamily, hauteurunite_check
from .intervals import IV
from .numfield import FieldElement, NumberField, UnitSystem, regulator_from_units

# Irreducible monic field polynomials, coefficients lowest degree first.
SAMPLE_FIELDS = {
    "X^2-2": (-2, 0, 1),
    "X^2-X-1": (-1, -1, 1),
    "X^2-3": (-3, 0, 1),
    "X^3-2": (-2, 0, 0, 1),
    "X^3-X-1": (-1, -1, 0, 1),
    "X^3-3X-1": (-1, -3, 0, 1),
    "X^3-X^2-2X+1": (1, -2, -1, 1),
    "X^4-4X^2+1": (1, 0, -4, 0, 1),
    "X^4-X-1": (-1, -1, 0, 0, 1),
    "X^4-2": (-2, 0, 0, 0, 1),
    "X^5-X-1": (-1, -1, 0, 0, 0, 1),
    "X^5-2": (-2, 0, 0, 0, 0, 1),
    "X^6-X-1": (-1, -1, 0, 0, 0, 0, 1),
    "X^6-2": (-2, 0, 0, 0, 0, 0, 1),
}

# (name, field polynomial, coordinates of the unit in the power basis)
UNIT_CORPUS = (
    ("golden", (-1, -1, 1), (0, 1)),
    ("1+sqrt2", (-2, 0, 1), (1, 1)),
    ("plastic", (-1, -1, 0, 1), (0, 1)),
    ("cuberoot2-1", (-2, 0, 0, 1), (-1, 1)),
    ("quartic", (1, 0, -4, 0, 1), (0, 1)),
)

# Fundamental units of fields with unit rank one, with their regulators.
REGULATOR_CORPUS = (
    ("Q(sqrt2)", (-2, 0, 1), (1, 1)),
    ("Q(sqrt5)", (-1, -1, 1), (0, 1)),
    ("plastic", (-1, -1, 0, 1), (0, 1)),
    ("Q(cuberoot2)", (-2, 0, 0, 1), (-1, 1)),
)


def corpus_units() -> list[tuple[str, FieldElement]]:
    return [(name, NumberField.from_coeffs(g).element(c)) for name, g, c in UNIT_CORPUS]


def _field(coeffs) -> NumberField:
    return NumberField.from_coeffs(coeffs)


@lru_cache(maxsize=None)
def unit_pool(coeffs: tuple[int, ...]) -> tuple[FieldElement, ...]:
    """Units of Z[theta] with small coordinates that generate the field and are not roots of unity."""
    K = _field(coeffs)
    bound = 2 if K.d <= 3 else 1
    out = []
    for c in itertools.product(range(-bound, bound + 1), repeat=K.d):
        x = K.element(c)
        if x.is_zero() or not x.is_unit() or not x.generates_field():
            continue
        cp = x.charpoly()
        emb = isolate_roots(cp)
        if ivs.certainly_lt(IV.mpf(1), mahler_measure(cp, emb)):
            out.append(x)
    return tuple(out)


def random_units(rng: random.Random, count: int, degrees=(2, 3, 4, 5)) -> list[FieldElement]:
    fields = [c for c in SAMPLE_FIELDS.values() if len(c) - 1 in degrees]
    out = []
    while len(out) < count:
        pool = unit_pool(rng.choice(fields))
        if pool:
            out.append(rng.choice(pool))
    return out


def random_generator(rng: random.Random, degrees=(3, 4, 5, 6), coord_bound: int = 3) -> FieldElement:
    """A random element of a sample field that generates it."""
    fields = [c for c in SAMPLE_FIELDS.values() if len(c) - 1 in degrees]
    while True:
        K = _field(rng.choice(fields))
        x = K.element([rng.randint(-coord_bound, coord_bound) for _ in range(K.d)])
        if not x.is_zero() and x.generates_field():
            return x


def random_family(rng: random.Random, degrees=(3, 4)) -> TwistFamily:
    """alpha a random small generator, upsilon a random unit, both in the same sample field."""
    fields = [c for c in SAMPLE_FIELDS.values() if len(c) - 1 in degrees]
    while True:
        coeffs = rng.choice(fields)
        pool = unit_pool(coeffs)
        if not pool:
            continue
        K = _field(coeffs)
        alpha = K.element([rng.randint(-2, 2) for _ in range(K.d)])
        if alpha.is_zero() or not alpha.generates_field():
            continue
        return TwistFamily(K, alpha, rng.choice(pool))


def random_squarefree(rng: random.Random, degrees=(2, 8), height: int = 50) -> Poly:
    """Random squarefree integer polynomial with positive leading coefficient."""
    while True:
        d = rng.randint(*degrees)
        c = [rng.randint(-height, height) for _ in range(d)] + [rng.randint(1, height)]
        p = Poly(c)
        if squarefree_check(p):
            return p


def _minpoly_embeddings(x: FieldElement):
    cp = x.charpoly()
    return cp, isolate_roots(cp)


def _summary(name: str, cases: int, violations: list, uncertified: int = 0, **extra) -> dict:
    out = {
        "name": name,
        "cases": cases,
        "violations": len(violations),
        "uncertified": uncertified,
        "pass": not violations,
    }
    if violations:
        out["counterexamples"] = violations[:5]
    out.update(extra)
    return out


# --- suites ------------------------------------------------------------------

def heights_suite(n: int = 200, seed: int = 0) -> dict:
    """M(f) <= sqrt(d+1) H(f) and H(f) <= 2^d M(f)."""
    rng = random.Random(seed)
    bad, unsure = [], 0
    for _ in range(n):
        f = random_squarefree(rng, (2, 8), 50)
        d = f.degree
        M = mahler_measure(f, isolate_roots(f))
        H = IV.mpf(f.height())
        for lhs, rhs, label in ((M, IV.sqrt(IV.mpf(d + 1)) * H, "M <= sqrt(d+1) H"),
                                (H, IV.mpf(2) ** d * M, "H <= 2^d M")):
            if ivs.certainly_le(lhs, rhs):
                continue
            if ivs.possibly_le(lhs, rhs):
                unsure += 1
            else:
                bad.append({"poly": str(f), "inequality": label})
    return _summary("heights", n, bad, unsure)


def hauteurunite_suite(n_random: int = 50, seed: int = 0) -> dict:
    """Corpus units plus random units: the four modulus bounds in terms of lambda."""
    rng = random.Random(seed)
    units = [u for _, u in corpus_units()] + random_units(rng, n_random)
    bad, unsure = [], 0
    for u in units:
        cp, emb = _minpoly_embeddings(u)
        rep = hauteurunite_check(emb, mahler_measure(cp, emb))
        if not rep["pass"]:
            bad.append({"unit_charpoly": str(cp), "report": rep})
        unsure += sum(1 for k, v in rep.items() if v == "consistent")
    return _summary("hauteurunite", len(units), bad, unsure)


def ratio_suite(n: int = 50, seed: int = 0) -> dict:
    """Observed min log-ratio of distinct unit conjugate moduli stays above the explicit floor."""
    rng = random.Random(seed)
    units = random_units(rng, n, degrees=(3, 4, 5))
    bad, vacuous = [], 0
    for u in units:
        cp, emb = _minpoly_embeddings(u)
        rep = ratio_lower_bound(emb, mahler_measure(cp, emb))
        vacuous += rep["vacuous"]
        if not rep["holds"]:
            bad.append({"unit_charpoly": str(cp)})
    return _summary("ratio_lower_bound", n, bad, vacuous=vacuous)


def gs_suite(n: int = 100, seed: int = 0) -> dict:
    """Distinct root moduli of squarefree integer polynomials are separated by the explicit gap."""
    rng = random.Random(seed)
    bad, unsure, pairs = [], 0, 0
    for _ in range(n):
        f = random_squarefree(rng, (2, 6), 20)
        emb = isolate_roots(f)
        gap = ivs.iv(gs_separation(f, emb))
        gm = emb.group_moduli()
        for lo_g, hi_g in zip(gm, gm[1:]):
            pairs += 1
            diff = hi_g - lo_g
            if ivs.certainly_le(gap, diff):
                continue
            if ivs.possibly_le(gap, diff):
                unsure += 1
            else:
                bad.append({"poly": str(f), "gap": float(ivs.mid(gap)), "diff": ivs.mid(diff)})
    return _summary("gourdon_salvy", n, bad, unsure, pairs=pairs)


def two_conjugates_suite(n: int = 100, seed: int = 0) -> dict:
    """No outer singleton modulus is followed by a tied group containing a real conjugate."""
    rng = random.Random(seed)
    nums = [u for _, u in corpus_units() if u.field.d >= 3]
    nums += [random_generator(rng) for _ in range(n)]
    bad = []
    for x in nums:
        cp, emb = _minpoly_embeddings(x)
        rep = check_two_conjugates_real(emb)
        if not rep["pass"]:
            bad.append({"charpoly": str(cp), "witness": rep["witness"]})
    return _summary("two_conjugates_real", len(nums), bad)


def lemma_elementary_suite(side: int = 200, lo: float = 1e-3, hi: float = 1e6) -> dict:
    """U <= V log*U implies U < 2 V log*V on a log-spaced grid."""
    step = (math.log(hi) - math.log(lo)) / (side - 1)
    grid = [math.exp(math.log(lo) + k * step) for k in range(side)]
    bad, active = [], 0
    for U in grid:
        for V in grid:
            rep = lemma_elementary(U, V)
            active += rep["hypothesis"]
            if not rep["holds"]:
                bad.append({"U": U, "V": V})
    return _summary("lemma_elementary", side * side, bad, hypothesis_true=active)


def voutier_suite() -> dict:
    """h(unit) >= voutier_bound(d) for the corpus units."""
    bad, unsure = [], 0
    for name, u in corpus_units():
        emb = isolate_roots(u.field.g)
        h = log_height(u, emb)
        floor = voutier_bound(u.field.d)
        if ivs.certainly_le(floor, h):
            continue
        if ivs.possibly_le(floor, h):
            unsure += 1
        else:
            bad.append({"unit": name, "height": ivs.mid(h), "floor": floor})
    return _summary("voutier", len(UNIT_CORPUS), bad, unsure)


def friedman_suite() -> dict:
    """Regulators of the corpus fields exceed 0.2052."""
    bad, values = [], {}
    for name, g, c in REGULATOR_CORPUS:
        K = _field(g)
        emb = K.embeddings()
        R = regulator_from_units(UnitSystem(K, (K.element(c),)), emb)
        values[name] = ivs.mid(R)
        if not friedman_check(R):
            bad.append({"field": name, "regulator": ivs.mid(R)})
    return _summary("friedman", len(REGULATOR_CORPUS), bad, regulators=values)


def run_all(seed: int = 0, quick: bool = False) -> dict:
    """Every suite at its acceptance size (or a reduced size with quick=True)."""
    k = 5 if quick else 1
    suites = [
        heights_suite(200 // k, seed),
        hauteurunite_suite(50 // k, seed),
        ratio_suite(50 // k, seed),
        gs_suite(100 // k, seed),
        two_conjugates_suite(100 // k, seed),
        lemma_elementary_suite(200 // k),
        voutier_suite(),
        friedman_suite(),
    ]
    return {"seed": seed, "suites": suites, "pass": all(s["pass"] for s in suites)}
