"""Explicit constants and the bound formulas for twisted Thue inequalities.

Every bound is evaluated in log scale first.  The theorem constants
``kappa_thm1`` and ``kappa_thm2`` are only known to exist and be effectively
computable in terms of the degree; they default to 1 and should be read as
shape parameters, not as proven values.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import mpmath

from . import intervals as ivs
from .intervals import IV, log_star

FRIEDMAN_REGULATOR_FLOOR = 0.2052

KAPPA_CAVEAT = (
    "kappa_thm1 and kappa_thm2 are effective but unspecified constants depending "
    "only on d; the values used here are user-chosen, so these bounds are shapes, "
    "not certified limits."
)


@dataclass(frozen=True)
class KappaConfig:
    kappa_thm1: float = 1.0
    kappa_thm2: float = 1.0
    # Linear-forms-in-logarithms constants kappa(s, D); carried for reporting, never computed.
    kappa_baker: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kappa_thm1 <= 0 or self.kappa_thm2 <= 0:
            raise ValueError("kappa values must be positive")
        if any(v <= 0 for v in self.kappa_baker.values()):
            raise ValueError("kappa values must be positive")

    @classmethod
    def from_json(cls, text: str) -> "KappaConfig":
        data = json.loads(text)
        return cls(
            kappa_thm1=float(data.get("kappa_thm1", 1.0)),
            kappa_thm2=float(data.get("kappa_thm2", 1.0)),
            kappa_baker={str(k): float(v) for k, v in data.get("kappa_baker", {}).items()},
        )


@dataclass(frozen=True)
class BoundReport:
    log_a_bound_thm1: float
    log_a_bound_thm2: float
    log_xy_bound: float
    R: float
    m: float
    lambda0: float
    lambda_: float
    mu: float
    d: int
    r: int
    a: int
    kappa_thm1: float
    kappa_thm2: float
    caveat: str = KAPPA_CAVEAT

    def to_dict(self) -> dict:
        out = asdict(self)
        out["lambda"] = out.pop("lambda_")
        return out


# --- separation constants --------------------------------------------------

def gs_constant(d: int) -> float:
    """(sqrt(3)/2) * (d(d+1)/2)^(-d(d+1)/4 - 1)."""
    if d < 2:
        raise ValueError("the separation constant needs d >= 2")
    n = d * (d + 1) / 2
    return math.sqrt(3) / 2 * n ** (-(d * (d + 1) / 4) - 1)


def _gs_constant_iv(d: int):
    n = IV.mpf(d * (d + 1)) / 2
    return IV.sqrt(IV.mpf(3)) / 2 * n ** (-(IV.mpf(d * (d + 1)) / 4) - 1)


def gs_exponent(d: int) -> float:
    return d * (d * d + 2 * d - 1) / 2


def gs_gap(d: int, mahler_upper) -> mpmath.mpf:
    """Certified lower bound for |a''| - |a'| over roots with distinct moduli."""
    if d < 2:
        raise ValueError("the separation bound needs d >= 2")
    M = ivs.iv(mahler_upper)
    gap = _gs_constant_iv(d) * IV.exp(-IV.mpf(d * (d * d + 2 * d - 1)) / 2 * IV.log(M))
    return ivs.lower(gap)


def gs_separation(P, emb) -> mpmath.mpf:
    """Minimum gap between distinct root moduli of the integer polynomial P."""
    d = P.degree
    if d < 2:
        raise ValueError("the separation bound needs deg P >= 2")
    from .embeddings import mahler_measure

    return gs_gap(d, ivs.upper(mahler_measure(P, emb)))


def ratio_exponent(d: int) -> float:
    return (d ** 3 + 2 * d * d - d + 2) / 2


def ratio_lower_bound(upsilon_emb, lambda_) -> dict:
    """Floor for log(|u''|/|u'|) over conjugates of a unit with distinct moduli.

    The constant is half the separation constant: the separation bound divided
    by |u'| <= lambda, then log(1 + x) >= x/2.
    """
    d = upsilon_emb.poly.degree
    if d < 2:
        raise ValueError("ratio bound needs degree >= 2")
    lam = ivs.iv(lambda_)
    floor = _gs_constant_iv(d) / 2 * IV.exp(-IV.mpf(d ** 3 + 2 * d * d - d + 2) / 2 * IV.log(lam))
    groups = upsilon_emb.group_moduli()
    observed = None
    for lo_g, hi_g in zip(groups, groups[1:]):
        r = IV.log(hi_g) - IV.log(lo_g)
        if observed is None or ivs.lower(r) < ivs.lower(observed):
            observed = r
    return {
        "floor": ivs.lower(floor),
        "min_log_ratio": observed,
        "vacuous": observed is None,
        "holds": observed is None or ivs.possibly_le(floor, observed),
    }


# --- height and regulator constants ----------------------------------------

def voutier_bound(d: int) -> float:
    """Height below which an algebraic integer of degree d is a root of unity."""
    if d < 1:
        raise ValueError("degree must be >= 1")
    if d == 1:
        return math.log(2)
    return 2 / (d * math.log(3 * d) ** 3)


def friedman_check(R) -> bool:
    """True when the regulator interval lies strictly above 0.2052."""
    return ivs.certainly_lt(ivs.iv(FRIEDMAN_REGULATOR_FLOOR), ivs.iv(R))


def lemma_elementary(U: float, V: float) -> dict:
    if U <= 0 or V <= 0:
        raise ValueError("U and V must be positive")
    hypothesis = U <= V * log_star(U)
    conclusion = U < 2 * V * log_star(V)
    return {"hypothesis": hypothesis, "conclusion": conclusion, "holds": (not hypothesis) or conclusion}


# --- theorem bounds ----------------------------------------------------------

def _exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def _check_common(R, m, lambda0, lambda_):
    if R <= 0:
        raise ValueError("regulator must be positive")
    if m < 1:
        raise ValueError("m must be >= 1")
    if lambda0 < 1:
        raise ValueError("lambda0 must be >= 1")
    if lambda_ <= 1:
        raise ValueError("lambda must exceed 1")


def log_theorem2_bound(R, m, lambda0, lambda_, mu, cfg: KappaConfig = KappaConfig()) -> float:
    R, m, lambda0, lambda_, mu = map(float, (R, m, lambda0, lambda_, mu))
    _check_common(R, m, lambda0, lambda_)
    if mu <= 1:
        raise ValueError("mu must exceed 1")
    ll, lm = math.log(lambda_), math.log(mu)
    total = R + math.log(m) + math.log(lambda0) + ll
    inner = log_star(R * ll * ll / lm)
    return (math.log(cfg.kappa_thm2) + math.log(ll / lm) + math.log(total)
            + math.log(R) + math.log(inner))


def theorem2_bound(R, m, lambda0, lambda_, mu, cfg: KappaConfig = KappaConfig()) -> float:
    """kappa (log lam / log mu)(R + log m + log lam0 + log lam) R log*(R (log lam)^2 / log mu)."""
    return _exp(log_theorem2_bound(R, m, lambda0, lambda_, mu, cfg))


def thm1_exponent(d: int) -> float:
    return d * d * (d + 2) / 2


def log_theorem1_bound(R, m, lambda0, lambda_, d: int, cfg: KappaConfig = KappaConfig()) -> float:
    R, m, lambda0, lambda_ = map(float, (R, m, lambda0, lambda_))
    _check_common(R, m, lambda0, lambda_)
    total = R + math.log(m) + math.log(lambda0)
    return (math.log(cfg.kappa_thm1) + thm1_exponent(d) * math.log(lambda_)
            + math.log(total) + math.log(R) + math.log(log_star(R)))


def theorem1_bound(R, m, lambda0, lambda_, d: int, cfg: KappaConfig = KappaConfig()) -> float:
    """kappa lam^(d^2(d+2)/2) (R + log m + log lam0) R log*R."""
    return _exp(log_theorem1_bound(R, m, lambda0, lambda_, d, cfg))


def mu_floor(lambda_, d: int, kappa: float = 1.0) -> float:
    """Lower bound kappa lam^(-d^2(d+2)/2) (log lam)^2 for log mu used to pass between the bounds."""
    lam = float(lambda_)
    if lam <= 1:
        raise ValueError("lambda must exceed 1")
    return kappa * _exp(-thm1_exponent(d) * math.log(lam)) * math.log(lam) ** 2


def log_xy_kappa(d: int, r: int) -> float:
    """log of 3^(r+27) (r+1)^(7r+19) d^(2d+6r+15)."""
    if r < 0:
        raise ValueError("unit rank must be >= 0")
    return (r + 27) * math.log(3) + (7 * r + 19) * math.log(r + 1) + (2 * d + 6 * r + 15) * math.log(d)


def xy_bound(R, m, lambda0, lambda_, a: int, d: int, r: int) -> float:
    """Log of the bound kappa (R + log*m + |a| log lam + log lam0) R log*R for max(|x|, |y|)."""
    R, m, lambda0, lambda_ = map(float, (R, m, lambda0, lambda_))
    _check_common(R, m, lambda0, lambda_)
    total = R + log_star(m) + abs(a) * math.log(lambda_) + math.log(lambda0)
    return log_xy_kappa(d, r) + math.log(total) + math.log(R) + math.log(log_star(R))


def bound_report(R, m, lambda0, lambda_, mu, d: int, r: int, a: int = 0,
                 cfg: KappaConfig = KappaConfig()) -> BoundReport:
    return BoundReport(
        log_a_bound_thm1=log_theorem1_bound(R, m, lambda0, lambda_, d, cfg),
        log_a_bound_thm2=log_theorem2_bound(R, m, lambda0, lambda_, mu, cfg),
        log_xy_bound=xy_bound(R, m, lambda0, lambda_, a, d, r),
        R=float(R), m=float(m), lambda0=float(lambda0), lambda_=float(lambda_), mu=float(mu),
        d=d, r=r, a=a, kappa_thm1=cfg.kappa_thm1, kappa_thm2=cfg.kappa_thm2,
    )
