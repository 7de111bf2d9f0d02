"""Closed-form capacity and counting bounds.

Counting bounds are evaluated with :mod:`mpmath` at 60 significant digits
so that expressions like (d!)^(n/d) never overflow.  Capacity bounds come
back as :class:`BoundReport`; a bound at or above 1 says nothing and is
flagged ``vacuous`` rather than hidden.

Conventions: in the regular and average-degree bounds ``n`` is the number
of vertices per side.  In the expander bounds ``n`` is the total vertex
count, and callers pass the per-side count explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .errors import DomainError

PRECISION = 60

IN_REGIME = "in-regime"
CLAMPED = "clamped"
VACUOUS = "vacuous"


@dataclass(frozen=True)
class BoundReport:
    tag: str
    inputs: dict
    value: float
    raw: float
    applicability: str
    constants: dict = field(default_factory=dict)
    log_base: str | None = None
    notes: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "tag": self.tag,
            "inputs": {k: _jsonable(v) for k, v in self.inputs.items()},
            "value": _jsonable(self.value),
            "raw": _jsonable(self.raw),
            "applicability": self.applicability,
            "constants": {k: _jsonable(v) for k, v in self.constants.items()},
            "log_base": self.log_base,
            "notes": {k: _jsonable(v) for k, v in self.notes.items()},
        }


def _jsonable(x):
    if isinstance(x, Fraction):
        return {"num": x.numerator, "den": x.denominator}
    if isinstance(x, (mpmath.mpf,)):
        return float(x)
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    return x


def _clamp(raw, hypotheses_ok=True):
    if raw >= 1:
        return 1.0, VACUOUS
    return float(raw), IN_REGIME if hypotheses_ok else CLAMPED


# ----------------------------------------------------- matching counts


@dataclass(frozen=True)
class PerfectMatchingBounds:
    schrijver: mpmath.mpf
    bregman: mpmath.mpf
    van_der_waerden: mpmath.mpf  # (d/e)^n, weaker than schrijver


def pm_count_bounds(n: int, d: int) -> PerfectMatchingBounds:
    """Bounds on the number of perfect matchings of a d-regular bipartite
    graph with n vertices per side:
    ((d-1)^(d-1)/d^(d-2))^n <= M(G) <= (d!)^(n/d)."""
    if not 1 <= d <= n:
        raise DomainError(f"need 1 <= d <= n, got d={d}, n={n}")
    with mpmath.workdps(PRECISION):
        d_ = mpmath.mpf(d)
        base = (d_ - 1) ** (d_ - 1) / d_ ** (d_ - 2) if d > 1 else mpmath.mpf(1)
        return PerfectMatchingBounds(
            schrijver=base**n,
            bregman=mpmath.factorial(d) ** (mpmath.mpf(n) / d),
            van_der_waerden=(d_ / mpmath.e) ** n,
        )


@dataclass(frozen=True)
class KMatchingBounds:
    lmc: mpmath.mpf
    corollary: mpmath.mpf | None  # None when k >= n/2


def lmc_bounds(n: int, d: int, k: int) -> KMatchingBounds:
    """Lower bounds on the number of k-matchings of a d-regular bipartite
    graph: C(n,k)^2 (1-k/nd)^(nd-k) (kd/n)^k, and for k < n/2 the
    simplified (end/k)^k (1/2e)^(4k^2/n) / (2 pi k)."""
    if not 1 <= k <= n:
        raise DomainError(f"need 1 <= k <= n, got k={k}, n={n}")
    with mpmath.workdps(PRECISION):
        n_, d_, k_ = mpmath.mpf(n), mpmath.mpf(d), mpmath.mpf(k)
        nd = n_ * d_
        lmc = mpmath.binomial(n, k) ** 2 * (1 - k_ / nd) ** (nd - k_) * (k_ * d_ / n_) ** k_
        cor = None
        if 2 * k < n:
            e = mpmath.e
            cor = (e * nd / k_) ** k_ * (1 / (2 * e)) ** (4 * k_**2 / n_) / (2 * mpmath.pi * k_)
        return KMatchingBounds(lmc=lmc, corollary=cor)


def matching_count_greedy_lower(n: int, d, alpha, max_degree: int) -> tuple[int, Fraction]:
    """(q, ((1-alpha) n d)^q / q!) with q = ceil(alpha n d / (2 Delta)):
    a lower bound on the number of q-matchings of a graph with n vertices
    per side, average degree d and maximum degree Delta."""
    d, alpha = Fraction(d), Fraction(alpha)
    q = math.ceil(alpha * n * d / (2 * max_degree))
    if q < 1:
        raise DomainError("q = ceil(alpha n d / 2 Delta) must be at least 1")
    return q, ((1 - alpha) * n * d) ** q / math.factorial(q)


# --------------------------------------------------- capacity bounds


def alpha_upper_regular(n: int, d: int, k: int) -> BoundReport:
    """Explicit-constant upper bound on alpha(k) for d-regular graphs.

    min of 9n/(k sqrt d) (valid for k >= n/sqrt d, a perfect-matching
    bound rescaled to k) and max{4k/n, 9 sqrt(n/(kd))} (valid for k < n/2).
    """
    if not 1 <= k <= n:
        raise DomainError(f"need 1 <= k <= n, got k={k}, n={n}")
    cands = {}
    sd = math.sqrt(d)
    if k >= n / sd:
        cands["perfect_rescaled"] = 9 * n / (k * sd)
    if 2 * k < n:
        cands["k_matching"] = max(4 * k / n, 9 * math.sqrt(n / (k * d)))
    raw = min(cands.values()) if cands else math.inf
    if k >= n / d**0.25:
        regime = 1
    elif k >= n / d ** (1 / 3):
        regime = 2
    else:
        regime = 3
    value, flag = _clamp(raw)
    return BoundReport(
        tag="alpha_upper_regular",
        inputs={"n": n, "d": d, "k": k},
        value=value,
        raw=raw,
        applicability=flag,
        constants={"perfect": 9, "linear": 4, "sqrt": 9},
        notes={
            "regime": regime,
            "candidates": cands,
            "binding": min(cands, key=cands.get) if cands else None,
        },
    )


def alpha_upper_layered(r: int, d: int) -> BoundReport:
    """e (e r / d)^(1 - 1/r) for depth-r networks of degree d, k = n."""
    if r < 2 or d < 1:
        raise DomainError("need r >= 2 and d >= 1")
    raw = math.e * (math.e * r / d) ** (1 - 1 / r)
    value, flag = _clamp(raw)
    return BoundReport(
        tag="alpha_upper_layered",
        inputs={"r": r, "d": d},
        value=value,
        raw=raw,
        applicability=flag,
        constants={"e": math.e},
    )


def _avgdeg_log_expression(alpha: float, n: int, d: float, delta: float) -> float:
    """log of sqrt(2 pi q) (4 e^4 Delta / (alpha^3 d^2))^(alpha q),
    q = ceil(alpha n d / (2 Delta))."""
    q = math.ceil(alpha * n * d / (2 * delta))
    if q < 1:
        return math.inf
    return 0.5 * math.log(2 * math.pi * q) + alpha * q * (
        math.log(4 * delta / d**2) + 4 - 3 * math.log(alpha)
    )


def avgdeg_threshold(n: int, d: float, delta: float, tol: float = 1e-9) -> float:
    """Smallest alpha at which the average-degree expression drops below 1.

    The expression is positive while 4e^4 Delta/(alpha^3 d^2) >= 1, so the
    search starts at that point and steps geometrically until the
    expression is negative, then bisects.
    """
    start = (4 * math.exp(4) * delta / d**2) ** (1 / 3)
    lo = start
    hi = start * 1.01
    while _avgdeg_log_expression(hi, n, d, delta) >= 0:
        lo, hi = hi, hi * 1.5
        if hi > 1e12:
            return math.inf
    while hi - lo > tol * max(1.0, hi):
        mid = (lo + hi) / 2
        if _avgdeg_log_expression(mid, n, d, delta) < 0:
            hi = mid
        else:
            lo = mid
    return hi


def alpha_upper_avgdeg(n: int, d, max_degree) -> BoundReport:
    """Threshold-solver instantiation of alpha = O(Delta^(1/3) / d^(2/3)).

    ``raw`` is the solver threshold for any alpha; the derivation only
    holds for alpha < 1/2, so larger thresholds are flagged vacuous.
    """
    d, delta = float(d), float(max_degree)
    if not delta >= d >= 1:
        raise DomainError(f"need Delta >= d >= 1, got d={d}, Delta={delta}")
    raw = avgdeg_threshold(n, d, delta)
    if raw < 0.5:
        value, flag = raw, IN_REGIME
    else:
        value, flag = min(1.0, raw), VACUOUS
    q = math.ceil(raw * n * d / (2 * delta)) if math.isfinite(raw) else None
    return BoundReport(
        tag="alpha_upper_avgdeg",
        inputs={"n": n, "d": d, "Delta": delta},
        value=value,
        raw=raw,
        applicability=flag,
        constants={"4e^4": 4 * math.exp(4), "alpha_max": 0.5},
        notes={"q": q},
    )


def alpha_upper_logn(n: int, d) -> BoundReport:
    """Average-degree bound applied to a subgraph of average degree
    b = d/(4 log2 n) and maximum degree 2b."""
    d = float(d)
    logn = math.log2(n)
    if d <= 4 * logn:
        return BoundReport(
            tag="alpha_upper_logn",
            inputs={"n": n, "d": d},
            value=1.0,
            raw=math.inf,
            applicability=VACUOUS,
            log_base="2",
            notes={"reason": "d <= 4 log2 n"},
        )
    b = d / (4 * logn)
    inner = alpha_upper_avgdeg(n, max(b, 1.0), max(2 * b, 1.0))
    return BoundReport(
        tag="alpha_upper_logn",
        inputs={"n": n, "d": d},
        value=inner.value,
        raw=inner.raw,
        applicability=inner.applicability,
        constants=inner.constants,
        log_base="2",
        notes={"b": b, "Delta": 2 * b, **inner.notes},
    )


def perturb_scale(k: int, alpha, beta) -> tuple[Fraction, Fraction]:
    """A (k, alpha)-multitasker is a (beta k, alpha/beta)-multitasker."""
    beta = Fraction(beta)
    return beta * k, Fraction(alpha) / beta


# ------------------------------------------------------- probability


def chernoff_tails(p: float, n: int, eta: float) -> dict:
    if not (0 < p < 1 and 0 < eta < 1):
        raise DomainError("need 0 < p < 1 and 0 < eta < 1")
    return {
        "lower_tail": math.exp(-(eta**2) * p * n / 2),
        "upper_tail": math.exp(-(eta**2) * p * n / (2 + eta)),
    }


def approx1e_check(x) -> dict:
    """Both sides of (1 - 1/x)^x >= 1/e - 7/(6 e x), for x >= 2."""
    if x < 2:
        raise DomainError("x must be at least 2")
    with mpmath.workdps(PRECISION):
        x = mpmath.mpf(x)
        lhs = (1 - 1 / x) ** x
        rhs = 1 / mpmath.e - 7 / (6 * mpmath.e * x)
        return {"lhs": lhs, "rhs": rhs, "holds": bool(lhs >= rhs)}


# --------------------------------------------------------- expanders


def expander_alpha_lower(n_per_side: int, d: int, lam: float, m: int) -> BoundReport:
    """Induced-matching guarantee inside a matching of size m in an
    (n, d, lambda)-expander, n = 2 * n_per_side total vertices.

    ``value`` is (n/4d) ln(1 + m d / (n (lambda/2 + 1/4))), natural log;
    ``notes['final']`` is the coarser m ln(d) / (16 d).
    """
    if lam >= d:
        raise DomainError(f"need lambda < d, got lambda={lam}, d={d}")
    n = 2 * n_per_side
    iteration = n / (4 * d) * math.log(1 + m * d / (n * (lam / 2 + 0.25)))
    final = m * math.log(d) / (16 * d)
    hyp = lam <= d**0.9
    return BoundReport(
        tag="expander_alpha_lower",
        inputs={"n_per_side": n_per_side, "n_total": n, "d": d, "lambda": lam, "m": m},
        value=iteration,
        raw=iteration,
        applicability=IN_REGIME if hyp and final >= 1 else CLAMPED,
        log_base="e",
        notes={
            "floor_iteration": math.floor(iteration),
            "final": final,
            "floor_final": math.floor(final),
            "lambda_le_d^0.9": hyp,
        },
    )
