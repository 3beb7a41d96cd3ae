"""Deficit lower bounds, the sharp perimeter bound and the minimizing sets.

For ``0 < x <= 1/2`` (the smaller of the two masses) and an asymmetry ``y``:

* ``K(x, y)`` is the exact lower bound on the deficit ``P - J(mu)``;
* ``L(x, y)`` is a weaker bound, linear in ``J(x)``, with ``0 <= L <= K``;
* ``K_inverse(x, d)`` turns a deficit into an upper bound on the asymmetry.

``y -> K(x, y)`` jumps upward at ``y = x``; the first branch owns the seam.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import OutOfDomain, PostconditionFailed
from .intervals import (
    IntervalSet,
    asymmetry,
    mu_measure,
    normalize,
    perimeter,
)
from .measure import Gaussian, MeasureModel

__all__ = [
    "Domain",
    "DomainClass",
    "DeficitReport",
    "K",
    "L",
    "K_inverse",
    "lambda_max",
    "snap_lambda",
    "classify_domain",
    "lower_bound_perimeter",
    "optimal_set",
    "deficit",
    "gaussian_asymptotic_ratio",
    "ScanRow",
    "scan",
]

DOMAIN_TOL = 1e-12
# K is a difference of O(1) profile values; anything below this is round-off.
_K_ROUNDOFF = 1e-15


class Domain(str, enum.Enum):
    D1 = "D1"
    D2 = "D2"
    D3 = "D3"
    D4 = "D4"


_CONSTRAINTS = {
    Domain.D1: "mu <= 1/2 and mu < lambda <= 1 - mu",
    Domain.D2: "mu <= 1/2 and 0 <= lambda <= mu",
    Domain.D3: "mu > 1/2 and 0 <= lambda <= 1 - mu",
    Domain.D4: "mu > 1/2 and 1 - mu < lambda <= mu",
}


@dataclass(frozen=True)
class DomainClass:
    id: Domain
    constraints: str


def lambda_max(x: float) -> float:
    """Largest feasible asymmetry for a set whose smaller mass is ``x``."""
    return min(2.0 * x, 1.0 - x)


def snap_lambda(mu: float, lam: float, tol: float = DOMAIN_TOL) -> float:
    """Clean up an asymmetry measured on a set of measure ``mu``.

    Clamps to ``[0, lambda_max]`` and moves values within ``tol`` of the seam
    ``lambda = m`` onto it.  Symmetric sets sit exactly on the seam, where the
    sharp bound jumps, so round-off must not pick the upper branch.
    """
    x = min(mu, 1.0 - mu)
    lam = min(max(float(lam), 0.0), lambda_max(x))
    if abs(lam - x) <= tol:
        lam = x
    return lam


def _reduce_args(x: float, y: float) -> tuple[float, float]:
    x, y = float(x), float(y)
    if x > 0.5:
        x = 1.0 - x
    if not 0.0 < x <= 0.5:
        raise OutOfDomain(f"x = {x!r} outside (0, 1/2]")
    top = lambda_max(x)
    if y < 0.0 or y > top + DOMAIN_TOL:
        raise OutOfDomain(f"y = {y!r} outside [0, {top!r}] for x = {x!r}")
    return x, min(y, top)


def K(m: MeasureModel, x: float, y: float) -> float:
    x, y = _reduce_args(x, y)
    J = m.profile
    a = J(x - y / 2) if y <= x else J(x + y / 2)
    b, c = J(y / 2), J(x)
    k = (a + b) - c
    # a few ulps of cancellation are noise, not deficit
    if abs(k) <= 4 * np.finfo(float).eps * (a + b + c):
        return 0.0
    return k


def L(m: MeasureModel, x: float, y: float) -> float:
    x, y = _reduce_args(x, y)
    J = m.profile
    if y <= x:
        return J(y / 2) - y / (2 * x) * J(x)
    return J(y / 2) - y / (2 * (1 - x)) * J(x)


def K_inverse(m: MeasureModel, x: float, d: float, tol: float = 1e-13) -> float:
    """``sup{y in [0, lambda_max(x)] : K(x, y) <= d}``.

    ``K`` is nondecreasing in ``y`` and continuous except for an upward jump
    just after ``y = x``, so the seam is resolved explicitly and the
    remaining branch is bisected.  The returned value is the upper end of
    the final bracket, hence never below the true supremum.
    """
    x = float(x)
    if x > 0.5:
        x = 1.0 - x
    if not 0.0 < x <= 0.5:
        raise OutOfDomain(f"x = {x!r} outside (0, 1/2]")
    if d < 0:
        raise ValueError("deficit must be nonnegative")
    top = lambda_max(x)

    def ok(y):
        return K(m, x, y) <= d + _K_ROUNDOFF

    if ok(top):
        return top
    if x < top and ok(x):
        J = m.profile
        right_limit = J(1.5 * x) - J(x) + J(0.5 * x)
        if right_limit > d + _K_ROUNDOFF:
            return x
        lo, hi = x, top
    else:
        lo, hi = 0.0, min(x, top)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return hi


def _check_feasible(mu: float, lam: float, tol: float = DOMAIN_TOL) -> tuple[float, float, float]:
    mu, lam = float(mu), float(lam)
    if not 0.0 < mu < 1.0:
        raise OutOfDomain(f"mu = {mu!r} outside (0, 1)")
    x = min(mu, 1.0 - mu)
    top = lambda_max(x)
    if lam < 0.0 or lam > top + tol:
        raise OutOfDomain(
            f"lambda = {lam!r} infeasible for mu = {mu!r} (must lie in [0, {top!r}])")
    return mu, min(lam, top), x


def classify_domain(mu: float, lam: float) -> DomainClass:
    mu, lam, _ = _check_feasible(mu, lam)
    if mu <= 0.5:
        dom = Domain.D2 if lam <= mu else Domain.D1
    else:
        dom = Domain.D3 if lam <= 1.0 - mu else Domain.D4
    return DomainClass(dom, _CONSTRAINTS[dom])


def lower_bound_perimeter(m: MeasureModel, mu: float, lam: float) -> float:
    """Least perimeter among sets of measure ``mu`` and asymmetry ``lam``."""
    mu, lam, x = _check_feasible(mu, lam)
    J = m.profile
    if lam <= x:
        return J(x - lam / 2) + J(lam / 2)
    return J(x + lam / 2) + J(lam / 2)


def optimal_set(m: MeasureModel, mu: float, lam: float, verify: bool = True,
                tol: float = 1e-9) -> IntervalSet:
    """The interval or two-tail set attaining :func:`lower_bound_perimeter`.

    With ``verify`` the measure, asymmetry and perimeter of the result are
    recomputed and compared with the request at ``tol``.
    """
    mu, lam, _ = _check_feasible(mu, lam)
    if lam <= 0.0:
        raise OutOfDomain("optimal_set requires lambda > 0; use a half-line")
    Q = m.quantile
    inf = math.inf
    dom = classify_domain(mu, lam).id
    if dom is Domain.D1:
        raw = [(Q(lam / 2), Q(mu + lam / 2))]
    elif dom is Domain.D2:
        raw = [(-inf, Q(mu - lam / 2)), (Q(1 - lam / 2), inf)]
    elif dom is Domain.D3:
        raw = [(Q(1 - mu - lam / 2), Q(1 - lam / 2))]
    else:
        raw = [(-inf, Q(lam / 2)), (Q(1 - mu + lam / 2), inf)]
    s = normalize(raw)
    if verify:
        got_mu = mu_measure(s, m)
        got_lam = asymmetry(s, m, got_mu).lambda_
        got_p = perimeter(s, m)
        bound = lower_bound_perimeter(m, mu, lam)
        if (abs(got_mu - mu) > tol or abs(got_lam - lam) > tol
                or abs(got_p - bound) > tol):
            raise PostconditionFailed(
                f"optimal set {s} for (mu={mu}, lambda={lam}) has measure {got_mu}, "
                f"asymmetry {got_lam}, perimeter {got_p} (bound {bound})")
    return s


@dataclass(frozen=True)
class DeficitReport:
    mu: float
    m: float
    lambda_: float
    perimeter: float
    j_at_mu: float
    delta: float
    k_bound: float
    l_bound: float
    domain: Domain


def deficit(s: IntervalSet, m: MeasureModel) -> DeficitReport:
    mu = mu_measure(s, m)
    rep = asymmetry(s, m, mu)
    x = min(mu, 1.0 - mu)
    lam = snap_lambda(mu, rep.lambda_)
    p = perimeter(s, m)
    j = m.profile(mu)
    return DeficitReport(
        mu=mu, m=x, lambda_=lam, perimeter=p, j_at_mu=j, delta=p - j,
        k_bound=K(m, x, lam), l_bound=L(m, x, lam),
        domain=classify_domain(mu, lam).id)


def gaussian_asymptotic_ratio(y: float, m: MeasureModel | None = None) -> float:
    """``K(1/4, y) / ((y/2) sqrt(2 log(2/y)))`` for the standard Gaussian."""
    if not 0.0 < y < 0.1:
        raise ValueError("y must lie in (0, 0.1)")
    m = m or Gaussian()
    return K(m, 0.25, y) / (0.5 * y * math.sqrt(2.0 * math.log(2.0 / y)))


@dataclass(frozen=True)
class ScanRow:
    mu: float
    lambda_: float
    domain: Domain
    J_m: float
    K: float
    L: float
    bound: float
    optimal_perimeter: float


def scan(m: MeasureModel, n: int | None = None, mus=None, lambdas=None):
    """Tabulate bounds and optimal perimeters over a (mu, lambda) grid.

    With ``n`` the grid is ``mu_i = i/(n+1)`` and ``lambda_j = j/n`` times the
    largest feasible asymmetry at ``mu_i``, so every cell is feasible.  With
    explicit ``mus``/``lambdas`` the rectangle is used as given and
    infeasible cells are skipped.  Returns ``(rows, n_skipped)``.
    """
    cells = []
    if n is not None:
        for i in range(1, n + 1):
            mu = i / (n + 1)
            top = lambda_max(min(mu, 1 - mu))
            cells.extend((mu, j / n * top) for j in range(1, n + 1))
    else:
        cells = [(float(a), float(b)) for a in mus for b in lambdas]
    rows, skipped = [], 0
    for mu, lam in cells:
        if not 0 < mu < 1 or not 0 < lam <= lambda_max(min(mu, 1 - mu)):
            skipped += 1
            continue
        x = min(mu, 1 - mu)
        s = optimal_set(m, mu, lam)
        rows.append(ScanRow(
            mu=mu, lambda_=lam, domain=classify_domain(mu, lam).id,
            J_m=m.profile(x), K=K(m, x, lam), L=L(m, x, lam),
            bound=lower_bound_perimeter(m, mu, lam),
            optimal_perimeter=perimeter(s, m)))
    return rows, skipped


def _as_array(rows) -> np.ndarray:
    return np.array([[r.mu, r.lambda_, r.bound, r.optimal_perimeter] for r in rows])
