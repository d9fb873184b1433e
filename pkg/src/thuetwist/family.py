"""Binary forms twisted by powers of a unit, and their family invariants."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import lcm
from typing import Optional

from . import exact
from . import intervals as ivs
from .embeddings import (
    EmbeddingSet, cabs, conjugates, isolate_roots,
)
from .exact import Poly
from .intervals import IV, log_star
from .numfield import FieldElement, NumberField


@dataclass(frozen=True)
class BinaryForm:
    """coeffs[k] is the coefficient of X^(d-k) Y^k."""

    coeffs: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def from_poly(cls, f: Poly, degree: Optional[int] = None) -> "BinaryForm":
        d = f.degree if degree is None else degree
        if not f.is_integral():
            raise ValueError("binary form needs integer coefficients")
        return cls(tuple(int(f[d - k]) for k in range(d + 1)))

    def to_poly(self) -> Poly:
        """Dehomogenized polynomial f(X) = F(X, 1)."""
        return Poly(reversed(self.coeffs))

    def __call__(self, x: int, y: int) -> int:
        return evaluate_form(self, x, y)

    def __str__(self) -> str:
        d = self.degree
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = ""
            if d - k:
                mono += "X" if d - k == 1 else f"X^{d - k}"
            if k:
                mono += "Y" if k == 1 else f"Y^{k}"
            a = abs(c)
            body = mono if (a == 1 and mono) else f"{a}{mono}"
            terms.append(("-" if c < 0 else "+", body))
        if not terms:
            return "0"
        out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for s, b in terms[1:]:
            out += s + b
        return out

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]


def evaluate_form(F: BinaryForm, x: int, y: int) -> int:
    acc = F.coeffs[0]
    ypow = 1
    for c in F.coeffs[1:]:
        ypow *= y
        acc = acc * x + c * ypow
    return acc


@dataclass(frozen=True)
class SolutionTriple:
    x: int
    y: int
    a: int
    value: int

    def key(self):
        return (self.a, self.y, self.x)

    def to_json(self) -> dict:
        return {"x": self.x, "y": self.y, "a": self.a, "value": self.value}


@dataclass(frozen=True)
class FamilyInvariants:
    lambda0: object
    lambda_: object
    mu: object
    mu_case: str
    lambda0_rescaled: object = None

    def to_json(self) -> dict:
        out = {
            "lambda0": ivs.interval_json(self.lambda0),
            "lambda": ivs.interval_json(self.lambda_),
            "mu": ivs.interval_json(self.mu),
            "mu_case": self.mu_case,
        }
        if self.lambda0_rescaled is not None:
            out["lambda0_rescaled"] = ivs.interval_json(self.lambda0_rescaled)
        return out


def minimal_a0(alpha: FieldElement) -> int:
    """Smallest positive a0 with a0 * charpoly(alpha) integral."""
    cp = alpha.charpoly()
    return lcm(1, *(Fraction(c).denominator for c in cp.coeffs))


class TwistFamily:
    """F_a(X, Y) = a0 prod_i (X - sigma_i(alpha upsilon^a) Y).

    ``unchecked=True`` skips the unit / not-a-root-of-unity checks so that the
    cyclotomic counterexample can be built; such families are outside the
    hypotheses of the bounds.
    """

    def __init__(self, field: NumberField, alpha: FieldElement, upsilon: FieldElement,
                 a0: int = 1, bits: int = 128, max_bits: int = 4096,
                 unchecked: bool = False, name: str = ""):
        if alpha.field.g != field.g or upsilon.field.g != field.g:
            raise ValueError("alpha and upsilon must lie in the family's field")
        if alpha.is_zero():
            raise ValueError("alpha must be nonzero")
        a0 = int(a0)
        if a0 < 1:
            raise ValueError("a0 must be a positive integer")
        self.field = field
        self.alpha = alpha
        self.upsilon = upsilon
        self.a0 = a0
        self.bits = bits
        self.max_bits = max_bits
        self.unchecked = unchecked
        self.name = name
        self.emb = isolate_roots(field.g, bits, max_bits)
        if not (alpha.charpoly() * a0).is_integral():
            raise ValueError("a0 * charpoly(alpha) is not integral")
        if not unchecked:
            if not upsilon.is_unit():
                raise ValueError("upsilon is not a unit")
            if not ivs.certainly_lt(IV.mpf(1), self.lambda_):
                raise ValueError("upsilon is a root of unity (Mahler measure 1)")

    @property
    def d(self) -> int:
        return self.field.d

    @cached_property
    def lambda_(self):
        out = IV.mpf(1)
        for z in conjugates(self.upsilon, self.emb):
            out = out * ivs.max1(cabs(z))
        return out

    @cached_property
    def lambda0(self):
        out = IV.mpf(self.a0)
        for z in conjugates(self.alpha, self.emb):
            out = out * ivs.max1(cabs(z))
        return out

    def gamma(self, a: int) -> FieldElement:
        return self.alpha * self.upsilon ** a

    @cached_property
    def upsilon_embeddings(self) -> EmbeddingSet:
        """Certified roots of the minimal polynomial of upsilon (squarefree part of its charpoly)."""
        cp = self.upsilon.charpoly()
        return isolate_roots(exact.squarefree_part(cp).primitive(), self.bits, self.max_bits)

    def upsilon_moduli(self) -> list[tuple[object, int]]:
        """Sorted moduli |u_1| <= ... <= |u_d| with tie-group labels (multiplicity included)."""
        emb = self.upsilon_embeddings
        mult = self.d // emb.degree
        return [(m, k) for m, k in emb.sorted_moduli() for _ in range(mult)]

    def embedding_order(self) -> list[int]:
        """Field-embedding indices sorted by |sigma_j(upsilon)|, ties by index."""
        mods = [cabs(z) for z in conjugates(self.upsilon, self.emb)]
        return sorted(range(self.d), key=lambda j: (ivs.mid(mods[j]), j))

    def to_json(self) -> dict:
        out = {
            "g": [str(c) for c in self.field.g.coeffs],
            "alpha": self.alpha.to_json(),
            "upsilon": self.upsilon.to_json(),
            "a0": str(self.a0),
        }
        if self.name:
            out["name"] = self.name
        return out


def form_at(fam: TwistFamily, a: int) -> BinaryForm:
    """a0 * charpoly(alpha upsilon^a), homogenized; coefficients are exact."""
    cp = fam.gamma(a).charpoly() * fam.a0
    if not cp.is_integral():
        raise ValueError(f"a0 * charpoly(alpha upsilon^{a}) is not integral")
    return BinaryForm.from_poly(cp, fam.d)


def invariants_of(fam: TwistFamily) -> FamilyInvariants:
    mods = fam.upsilon_moduli()
    d = fam.d
    m = [x for x, _ in mods]
    grp = [k for _, k in mods]
    # indices below are 0-based: u_1 -> 0, u_2 -> 1, u_{d-1} -> d-2, u_d -> d-1
    if grp[0] == grp[d - 2] or grp[1] == grp[d - 1]:
        mu, case = fam.lambda_, "case1_tie"
    elif grp[1] == grp[d - 2]:
        mu = m[d - 2] / m[0]
        other = m[d - 1] / m[1]
        lo = min(ivs.endpoints(mu)[0], ivs.endpoints(other)[0])
        hi = min(ivs.endpoints(mu)[1], ivs.endpoints(other)[1])
        mu, case = ivs.span(lo, hi), "case2_middle_tie"
    else:
        mu, case = m[d - 2] / m[1], "case3_generic"
    rescaled = None
    if fam.a0 > 1:
        # lambda0 of a0^(d-1) F_a viewed as the monic form in a0 X
        out = IV.mpf(1)
        for z in conjugates(fam.alpha, fam.emb):
            out = out * ivs.max1(cabs(z) * fam.a0)
        rescaled = out
    return FamilyInvariants(fam.lambda0, fam.lambda_, mu, case, rescaled)


def chi(lambda0, lambda_, a: int):
    """(log* lam0)(log* lam) log*(|a| min{1, log* lam / log* lam0})."""
    if a == 0:
        raise ValueError("a must be nonzero")
    l0 = log_star(ivs.iv(lambda0))
    l1 = log_star(ivs.iv(lambda_))
    ratio = l1 / l0
    r_lo, r_hi = ivs.endpoints(ratio)
    clamp = ivs.span(min(Fraction(1), r_lo), min(Fraction(1), r_hi))
    return l0 * l1 * log_star(IV.mpf(abs(a)) * clamp)


def _log_gap_terms(logs, sizes, lower_tail_below_one: bool):
    """Nonnegative-term decompositions of the two upper-side inequalities.

    With L_k the log-modulus of tie group k (ascending) and n_k its size:
      log lam - L_top          = (n_top - 1) L_top + sum_{k<top} n_k log+ M_k
      (d-1) L_top - log lam    = (n_0 - 1) L_top + sum_{0<k<top} n_k (L_top - log+ L_k)
    the second needs M_0 < 1.  Tied roots contribute an exact 0, so equality
    cases are certified.  Returns (upper_ok, lower_ok) as booleans.
    """
    top = len(logs) - 1
    Lt = logs[top]
    zero = IV.mpf(0)
    if not Lt.a > 0:
        return False, False
    plus = [IV.mpf([max(zero.a, x.a), max(zero.b, x.b)]) for x in logs]
    upper = [(sizes[top] - 1) * Lt] + [sizes[k] * plus[k] for k in range(top)]
    ok_upper = all(t.a >= 0 for t in upper)
    ok_lower = False
    if lower_tail_below_one and top > 0:
        lower = [(sizes[0] - 1) * Lt] + [sizes[k] * (Lt - plus[k]) for k in range(1, top)]
        ok_lower = all(t.a >= 0 for t in lower)
    return ok_upper, ok_lower


def hauteurunite_check(upsilon_emb: EmbeddingSet, lambda_) -> dict:
    """lam^(1/(d-1)) <= |u_d| <= lam and lam^-1 <= |u_1| <= lam^(-1/(d-1)).

    Each inequality is reported as 'certified' (proven, either by strict
    interval separation or as a sum of provably nonnegative log terms, which
    covers equality cases), 'consistent' (intervals touch without proof) or
    'violated' (certified counterexample).
    """
    d = upsilon_emb.degree
    if d < 2:
        raise ValueError("needs degree >= 2")
    lam = ivs.iv(lambda_)
    gm = upsilon_emb.group_moduli()
    sizes = [len(g) for g in upsilon_emb.tie_groups]
    top, bottom = gm[-1], gm[0]
    e = IV.mpf(1) / (d - 1)
    checks = {
        "lambda^(1/(d-1)) <= |u_d|": (lam ** e, top),
        "|u_d| <= lambda": (top, lam),
        "lambda^-1 <= |u_1|": (1 / lam, bottom),
        "|u_1| <= lambda^(-1/(d-1))": (bottom, lam ** (-e)),
    }
    proven = dict.fromkeys(checks, False)
    logs = [IV.log(m) for m in gm]
    log_lam = sum((n * IV.log(ivs.max1(m)) for n, m in zip(sizes, gm)), IV.mpf(0))
    P = upsilon_emb.poly
    is_unit_poly = P.lc == 1 and abs(P.coeffs[0]) == 1
    if ivs.overlaps(log_lam, IV.log(lam)):
        below = bottom.b < 1
        up, low = _log_gap_terms(logs, sizes, below)
        proven["|u_d| <= lambda"] = up
        proven["lambda^(1/(d-1)) <= |u_d|"] = low
        if is_unit_poly:
            # 1/u has the same Mahler measure and the mirrored moduli
            mirrored = [-x for x in reversed(logs)]
            up, low = _log_gap_terms(mirrored, sizes[::-1], top.a > 1)
            proven["lambda^-1 <= |u_1|"] = up
            proven["|u_1| <= lambda^(-1/(d-1))"] = low
    out = {}
    ok = True
    for name, (lhs, rhs) in checks.items():
        if proven[name] or ivs.certainly_le(lhs, rhs):
            status = "certified"
        elif ivs.possibly_le(lhs, rhs):
            status = "consistent"
        else:
            status = "violated"
            ok = False
        out[name] = status
    out["pass"] = ok
    return out


def normalize_solution(fam: TwistFamily, sol: SolutionTriple):
    """Return (upsilon, a, x, y, value) with a >= 0 and y > 0 as in the reduction of the proof."""
    ups, a = fam.upsilon, sol.a
    if a < 0:
        ups, a = ups.inverse(), -a
    x, y, value = sol.x, sol.y, sol.value
    if y < 0:
        x, y = -x, -y
        value = value * (-1) ** fam.d
    return ups, a, x, y, value


def psi_values(fam: TwistFamily, sol: SolutionTriple, m: int | None = None) -> dict:
    """beta_j = x - gamma_j y, the minimizing index i0 and Psi_1..Psi_d.

    Indices follow |u_1| <= ... <= |u_d|.  When a0 > 1 the monic rescaling
    x -> a0 x, value -> a0^(d-1) value is applied first.
    """
    if sol.y == 0:
        raise ValueError("psi values need y != 0")
    ups, a, x, y, value = normalize_solution(fam, sol)
    d = fam.d
    gamma_el = fam.alpha * ups ** a
    a0 = fam.a0
    if a0 > 1:
        gamma_el = gamma_el * a0
        x = a0 * x
        value = value * a0 ** (d - 1)
    if m is not None and not 0 < abs(sol.value) <= m:
        raise ValueError("solution does not satisfy 0 < |F_a(x, y)| <= m")
    conj_all = conjugates(gamma_el, fam.emb)
    ups_mods = [cabs(z) for z in conjugates(ups, fam.emb)]
    order = sorted(range(d), key=lambda j: (ivs.mid(ups_mods[j]), j))
    gam = [conj_all[j] for j in order]
    beta = [IV.mpc(x) - g * y for g in gam]
    absb = [cabs(b) for b in beta]
    # argmin; lowest index among moduli that cannot be separated from the minimum
    best_hi = min(ivs.endpoints(v)[1] for v in absb)
    candidates = [i for i, v in enumerate(absb) if ivs.endpoints(v)[0] <= best_hi]
    i0 = candidates[0]
    certified = len(candidates) == 1 or all(_conjugate_pair(gam, i0, j) for j in candidates[1:])
    psi = []
    for i in range(d):
        if i < i0:
            psi.append(beta[i] / (gam[i0] * y))
        elif i > i0:
            psi.append(beta[i] / (gam[i] * y))
        else:
            num = IV.mpc(y) ** (d - 1) * _cpow(gam[i0], i0 - 1)
            den = IV.mpc(value)
            for k in range(i0):
                den = den * gam[k]
            psi.append(beta[i0] * num / den)
    prod = IV.mpc(1)
    for b in beta:
        prod = prod * b
    product_ok = (value in prod.real) and (0 in prod.imag)
    # independent route: Psi_i0 = 1 / (N(gamma) prod_{i != i0} Psi_i)
    normg = gamma_el.norm()
    rest = IV.mpc(ivs.iv(normg))
    for i in range(d):
        if i != i0:
            rest = rest * psi[i]
    psi_i0_alt = 1 / rest
    beta_i0_alt = IV.mpc(value) / IV.mpc(y) ** (d - 1) * psi_i0_alt
    for k in range(i0):
        beta_i0_alt = beta_i0_alt * gam[k]
    beta_i0_alt = beta_i0_alt / _cpow(gam[i0], i0 - 1)
    recompute_ok = (ivs.overlaps(beta_i0_alt.real, beta[i0].real)
                    and ivs.overlaps(beta_i0_alt.imag, beta[i0].imag))
    return {
        "i0": i0 + 1,
        "i0_certified": certified,
        "embedding_order": order,
        "beta": beta,
        "psi": psi,
        "psi_moduli": [cabs(p) for p in psi],
        "product": prod,
        "value": value,
        "product_contains_value": product_ok,
        "recompute_consistent": recompute_ok,
        "consistent": product_ok and recompute_ok,
    }


def _cpow(z, k: int):
    if k < 0:
        return 1 / _cpow(z, -k)
    out = IV.mpc(1)
    for _ in range(k):
        out = out * z
    return out


def _conjugate_pair(gam, i, j) -> bool:
    a, b = gam[i], gam[j]
    return (ivs.overlaps(a.real, b.real) and ivs.overlaps(a.imag, -b.imag)
            and not (0 in a.imag and 0 in b.imag))


def corollary_family(epsilon_minpoly: Poly, h: int, a: int) -> BinaryForm:
    """prod_i (X^h - eps_i^a Y^h) for the conjugates eps_i of a unit eps."""
    if h < 2:
        raise ValueError("h must be >= 2")
    K = NumberField(epsilon_minpoly)
    eps = K.theta
    if not eps.is_unit():
        raise ValueError("epsilon is not a unit")
    cp = (eps ** a).charpoly()
    ell = K.d
    coeffs = [0] * (ell * h + 1)
    # cp = sum c_k T^k -> sum c_k X^(hk) Y^(h(ell-k)); index by the power of Y
    for k in range(ell + 1):
        coeffs[h * (ell - k)] = int(cp[k])
    return BinaryForm(tuple(coeffs))


def corollary_field(epsilon_minpoly: Poly, h: int) -> NumberField:
    """Q(eps^(1/h)) = Q[X]/(minpoly(X^h)); raises when that polynomial is not a valid field modulus."""
    g = epsilon_minpoly.compose(Poly((0,) * h + (1,)))
    return NumberField(g)


def cyclotomic_demo(n: int, box: int = 10) -> dict:
    """F_a against Phi_n for zeta_n-twists, plus the solution scan of F_0 = 1 when n = 12."""
    if n < 3:
        raise ValueError("n must be >= 3")
    from math import gcd

    phi = exact.cyclotomic(n)
    K = NumberField(phi)
    fam = TwistFamily(K, K.one, K.theta, 1, unchecked=True, name=f"cyclotomic-{n}")
    F0 = BinaryForm.from_poly(phi)
    coprime = [a for a in range(1, n + 1) if gcd(a, n) == 1]
    equal = {a: form_at(fam, a) == F0 for a in coprime}
    out = {
        "n": n,
        "phi": str(phi),
        "F0": str(F0),
        "coprime_a": coprime,
        "F_a_equals_F0": equal,
        "all_equal": all(equal.values()),
        "outside_hypotheses": True,
    }
    if n == 12:
        sols = sorted(
            (x, y) for x in range(-box, box + 1) for y in range(-box, box + 1)
            if x * y != 0 and evaluate_form(F0, x, y) == 1
        )
        out["solutions"] = sols
    return out


def load_family(data: dict | str, bits: int = 128, max_bits: int = 4096,
                unchecked: bool = False) -> TwistFamily:
    if isinstance(data, str):
        data = json.loads(data)
    K = NumberField.from_coeffs([int(c) for c in data["g"]])
    alpha = element_from_json(K, data.get("alpha", {"coords": ["1"]}))
    ups = element_from_json(K, data["upsilon"])
    return TwistFamily(K, alpha, ups, int(data.get("a0", 1)), bits, max_bits,
                       unchecked=unchecked, name=data.get("name", ""))


def element_from_json(K: NumberField, data: dict) -> FieldElement:
    return K.element([int(c) for c in data["coords"]], int(data.get("den", 1)))
