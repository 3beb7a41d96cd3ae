"""Seeded property checks and brute-force oracles.

Every randomized suite seeds trial ``k`` with ``default_rng([seed, k])`` so a
report does not depend on execution order and any failing trial can be
replayed alone.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .deficit import (
    K_inverse,
    lambda_max,
    lower_bound_perimeter,
    optimal_set,
    scan,
    snap_lambda,
)
from .errors import EmptyBin, ZeroAsymmetry
from .intervals import (
    IntervalSet,
    asymmetry,
    format_set,
    mu_measure,
    normalize,
    perimeter,
)
from .measure import MeasureModel, satisfies_H
from .reducer import reduce

__all__ = [
    "VerificationReport",
    "check_shifting_property",
    "enumerate_sets",
    "brute_force_min_perimeter",
    "verify_theorem_main",
    "verify_reducer",
    "verify_continuity",
    "verify_exp_equivalence",
    "verify_uniqueness",
    "random_set",
    "bin_slack",
    "SUITES",
    "run_suite",
]

SHIFT_TOL = 1e-10
BOUND_TOL = 1e-7
SHARP_TOL = 1e-9
TRACE_TOL = 1e-9
TERMINAL_TOL = 1e-8
BIN_HALF_WIDTH = 0.01
MAX_DETAILS = 20

PASS, FAIL, NOT_APPLICABLE = "pass", "fail", "NotApplicable"


@dataclass
class VerificationReport:
    suite: str
    trials: int
    failures: int
    worst_violation: float
    seed: int | None = None
    details: list = field(default_factory=list)
    status: str = PASS
    extra: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status != FAIL

    def to_json(self, **kw) -> str:
        return json.dumps(asdict(self), default=_json_default, **kw)

    def _add(self, violation: float, detail: dict) -> None:
        self.failures += 1
        self.worst_violation = max(self.worst_violation, violation)
        if len(self.details) < MAX_DETAILS:
            self.details.append(detail)

    def _close(self) -> "VerificationReport":
        if self.status != NOT_APPLICABLE:
            self.status = FAIL if self.failures else PASS
        return self


def _json_default(x):
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, np.bool_):
        return bool(x)
    return str(x)


def _enc(x: float):
    return x if math.isfinite(x) else ("inf" if x > 0 else "-inf")


def _serialize(s: IntervalSet) -> list:
    return [[_enc(lo), _enc(hi)] for lo, hi in s.intervals]


# -- shifting property -----------------------------------------------------

def check_shifting_property(m: MeasureModel, trials: int = 10_000, seed: int = 42) -> VerificationReport:
    """Random same-mass shifts away from the origin must not raise the perimeter.

    Even trials move an interval ``(a, b)``; odd trials move a hole ``(a, b)``
    inside a larger interval.  The direction follows the sign of ``a + b``
    (ties move right).  Work is done in quantile coordinates, where ``a + b >= 0``
    reads ``F(a) + F(b) >= 1`` and the perimeter of an endpoint ``t`` is ``J(t)``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    J = m.profile
    eps = m.quantile_eps
    rep = VerificationReport("shifting", trials, 0, 0.0, seed)
    for k in range(trials):
        rng = np.random.default_rng([seed, k])
        hole = bool(k % 2)
        if hole:
            outer = np.sort(rng.uniform(eps, 1 - eps, 2))
            lo_lim, hi_lim = float(outer[0]), float(outer[1])
        else:
            lo_lim, hi_lim = eps, 1 - eps
        p, q = np.sort(rng.uniform(lo_lim, hi_lim, 2))
        p, q = float(p), float(q)
        r = q - p
        if r <= 0:
            continue
        if p + q >= 1.0:
            p_new = float(rng.uniform(p, hi_lim - r))
        else:
            p_new = float(rng.uniform(lo_lim, p))
        q_new = p_new + r
        before = J(p) + J(q)
        after = J(p_new) + J(q_new)
        if hole:
            frame = J(lo_lim) + J(hi_lim)
            before += frame
            after += frame
        excess = after - before
        if excess > SHIFT_TOL:
            rep._add(excess, {
                "trial": k, "seed": seed, "form": "hole" if hole else "interval",
                "quantiles_before": [p, q], "quantiles_after": [p_new, q_new],
                "enclosing_quantiles": [lo_lim, hi_lim] if hole else None,
                "perimeter_before": before, "perimeter_after": after,
            })
    return rep._close()


# -- brute-force enumeration -----------------------------------------------

@dataclass(frozen=True)
class EnumeratedSets:
    """Every union of at most ``k_max`` intervals with grid endpoints."""

    sets: tuple[IntervalSet, ...]
    mu: np.ndarray
    lam: np.ndarray
    perimeter: np.ndarray

    @property
    def m(self) -> np.ndarray:
        return np.minimum(self.mu, 1.0 - self.mu)


_ENUM_CACHE: dict = {}


def enumerate_sets(m: MeasureModel, k_max: int = 2, grid_n: int = 40) -> EnumeratedSets:
    """Enumerate sets on the quantile grid ``i/(grid_n+1)`` plus both infinities.

    Measure, asymmetry and perimeter come from the interval-set primitives
    only.  Results are cached per measure object.
    """
    if not 1 <= k_max <= 3:
        raise ValueError("k_max must lie in 1..3")
    if not 1 <= grid_n <= 60:
        raise ValueError("grid_n must lie in 1..60")
    key = (id(m), k_max, grid_n)
    hit = _ENUM_CACHE.get(key)
    if hit is not None and hit[0] is m:
        return hit[1]
    pts = [-math.inf] + [m.quantile(i / (grid_n + 1)) for i in range(1, grid_n + 1)] + [math.inf]
    sets, mus, lams, pers = [], [], [], []
    for k in range(1, k_max + 1):
        for idx in itertools.combinations(range(len(pts)), 2 * k):
            s = IntervalSet(tuple((pts[idx[2 * i]], pts[idx[2 * i + 1]]) for i in range(k)))
            mu = mu_measure(s, m)
            if mu <= m.prob_tol or mu >= 1.0 - m.prob_tol:
                continue
            sets.append(s)
            mus.append(mu)
            lams.append(asymmetry(s, m, mu).lambda_)
            pers.append(perimeter(s, m))
    out = EnumeratedSets(tuple(sets), np.array(mus), np.array(lams), np.array(pers))
    _ENUM_CACHE[key] = (m, out)
    return out


def _bin_mask(e: EnumeratedSets, mu_bin: float, lambda_bin: float,
              half_width: float = BIN_HALF_WIDTH) -> np.ndarray:
    return (np.abs(e.m - mu_bin) <= half_width) & (np.abs(e.lam - lambda_bin) <= half_width)


def brute_force_min_perimeter(m: MeasureModel, mu_bin: float, lambda_bin: float,
                              k_max: int = 2, grid_n: int = 40) -> float:
    """Least enumerated perimeter among sets with ``(m, lambda)`` in the given bin.

    ``mu_bin`` is a value of ``m = min(mu, 1 - mu)``.  Raises :class:`EmptyBin`
    if no enumerated set falls in the bin.
    """
    e = enumerate_sets(m, k_max, grid_n)
    mask = _bin_mask(e, mu_bin, lambda_bin)
    if not mask.any():
        raise EmptyBin(f"no enumerated set with m ~ {mu_bin}, lambda ~ {lambda_bin}")
    return float(e.perimeter[mask].min())


def bin_slack(m: MeasureModel, mu_bin: float, lambda_bin: float,
              half_width: float = BIN_HALF_WIDTH, h: float = 1e-4) -> float:
    """``max |d bound| * half_width`` over the bin corners, by central differences."""
    def bound(x, y):
        x = min(max(x, h), 0.5)
        y = min(max(y, 0.0), lambda_max(x))
        return lower_bound_perimeter(m, x, y)

    worst = 0.0
    for dx in (-half_width, 0.0, half_width):
        for dy in (-half_width, 0.0, half_width):
            x, y = mu_bin + dx, lambda_bin + dy
            gx = (bound(x + h, y) - bound(x - h, y)) / (2 * h)
            gy = (bound(x, y + h) - bound(x, y - h)) / (2 * h)
            worst = max(worst, abs(gx) + abs(gy))
    return worst * half_width


def verify_theorem_main(m: MeasureModel, grid: int = 40, k_max: int = 2,
                        sharp_n: int = 50) -> VerificationReport:
    """Lower bound on every enumerated set, and sharpness on a (mu, lambda) grid."""
    e = enumerate_sets(m, k_max, grid)
    rep = VerificationReport("theorem-main", len(e.sets), 0, 0.0)
    J = m.profile
    hits = zero_deficit = 0
    for s, mu, lam, per in zip(e.sets, e.mu, e.lam, e.perimeter):
        bound = lower_bound_perimeter(m, mu, snap_lambda(mu, lam))
        gap = bound - per
        if gap > BOUND_TOL:
            rep._add(gap, {"set": _serialize(s), "mu": mu, "lambda": lam,
                           "perimeter": per, "bound": bound})
        if abs(gap) <= 1e-12:
            hits += 1
        if lam > 1e-6 and per - J(mu) <= 1e-12:
            zero_deficit += 1
    rows, _ = scan(m, n=sharp_n)
    sharp_worst = 0.0
    for row in rows:
        err = abs(row.optimal_perimeter - row.bound)
        sharp_worst = max(sharp_worst, err)
        if err > SHARP_TOL:
            rep._add(err, {"sharpness": True, "mu": row.mu, "lambda": row.lambda_,
                           "bound": row.bound, "perimeter": row.optimal_perimeter})
    rep.extra = {"equality_hits": hits, "zero_deficit_positive_lambda": zero_deficit,
                 "sharpness_cells": len(rows), "sharpness_worst": sharp_worst,
                 "grid_n": grid, "k_max": k_max}
    return rep._close()


def verify_uniqueness(m: MeasureModel, grid: int = 40, k_max: int = 2,
                      tol: float = 1e-9) -> VerificationReport:
    """Finite-grid surrogate: under (H) only half-lines attain ``J(mu)``.

    Exact uniqueness up to null sets cannot be checked numerically; this
    only looks at the enumerated sets.
    """
    e = enumerate_sets(m, k_max, grid)
    rep = VerificationReport("uniqueness", len(e.sets), 0, 0.0)
    if not satisfies_H(m):
        rep.status = NOT_APPLICABLE
        rep.extra = {"reason": "hypothesis (H) fails"}
        return rep
    J = m.profile
    for s, mu, lam, per in zip(e.sets, e.mu, e.lam, e.perimeter):
        if lam > tol and per - J(mu) <= tol:
            rep._add(lam, {"set": _serialize(s), "mu": mu, "lambda": lam, "perimeter": per})
    return rep._close()


# -- reducer ---------------------------------------------------------------

def random_set(m: MeasureModel, rng: np.random.Generator, max_intervals: int = 5) -> IntervalSet:
    """1..max_intervals intervals with endpoint quantiles uniform in the band."""
    n = int(rng.integers(1, max_intervals + 1))
    eps = m.quantile_eps
    qs = np.sort(rng.uniform(eps, 1 - eps, 2 * n))
    return normalize((m.quantile(float(qs[2 * i])), m.quantile(float(qs[2 * i + 1])))
                     for i in range(n))


def _endpoint_error(a: IntervalSet, b: IntervalSet) -> float:
    if len(a) != len(b):
        return math.inf
    err = 0.0
    for x, y in zip(a.endpoints, b.endpoints):
        if x != y:
            err = max(err, abs(x - y))
    return err


def verify_reducer(m: MeasureModel, trials: int = 1000, seed: int = 42) -> VerificationReport:
    """Reduce random sets; check the trace invariants and the terminal set."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rep = VerificationReport("reducer", trials, 0, 0.0, seed)
    worst_terminal = worst_trace = 0.0
    skipped = 0
    for k in range(trials):
        rng = np.random.default_rng([seed, k])
        s = random_set(m, rng)
        detail = {"trial": k, "seed": seed, "set": _serialize(s)}
        try:
            out, trace = reduce(s, m)
        except ZeroAsymmetry:
            skipped += 1
            continue
        except Exception as exc:  # any crash is a failure with its input
            rep._add(math.inf, {**detail, "error": repr(exc)})
            continue
        problems = trace.violations(TRACE_TOL)
        prev = trace.initial_perimeter
        for st in trace.steps:
            worst_trace = max(worst_trace, st.perimeter_after - prev,
                              abs(st.mu_after - trace.initial_mu),
                              abs(st.lambda_after - trace.initial_lambda))
            prev = st.perimeter_after
        mu, lam = trace.initial_mu, trace.initial_lambda
        target = optimal_set(m, mu, snap_lambda(mu, lam), verify=False)
        err = min(_endpoint_error(out, target), _endpoint_error(out, target.reflect()))
        worst_terminal = max(worst_terminal, err)
        if err > TERMINAL_TOL:
            problems.append(f"terminal set {format_set(out)} differs from "
                            f"{format_set(target)} by {err!r}")
        if problems:
            rep._add(max(err, worst_trace), {**detail, "problems": problems})
    rep.worst_violation = max(rep.worst_violation, worst_trace, worst_terminal)
    rep.extra = {"worst_terminal_error": worst_terminal, "worst_trace_drift": worst_trace,
                 "zero_asymmetry_skipped": skipped}
    return rep._close()


# -- continuity and the exponential case ------------------------------------

def verify_continuity(m: MeasureModel, x: float = 0.25, depth: int = 30) -> VerificationReport:
    """``K_inverse(x, 2^-k)`` for ``k = 1..depth`` must be nonincreasing.

    At ``depth >= 30`` the last value must also be below 0.01.  Without
    hypothesis (H) the report is NotApplicable: the asymmetry then need not
    vanish with the deficit.
    """
    rep = VerificationReport("continuity", depth, 0, 0.0)
    if not satisfies_H(m):
        rep.status = NOT_APPLICABLE
        rep.extra = {"reason": "hypothesis (H) fails", "K_inverse_at_0": K_inverse(m, x, 0.0)}
        return rep
    seq = [K_inverse(m, x, 2.0 ** -k) for k in range(1, depth + 1)]
    for k in range(1, depth):
        if seq[k] > seq[k - 1]:
            rep._add(seq[k] - seq[k - 1], {"k": k + 1, "previous": seq[k - 1], "value": seq[k]})
    if depth >= 30 and seq[-1] >= 0.01:
        rep._add(seq[-1] - 0.01, {"k": depth, "value": seq[-1], "limit": 0.01})
    rep.extra = {"x": x, "sequence": seq}
    return rep._close()


def verify_exp_equivalence(m: MeasureModel, eps: float = 0.1, n: int = 50,
                           linear_tol: float = 1e-10, fit_tol: float = 1e-8) -> VerificationReport:
    """Check that a linear profile near 0 and an exponential left tail go together.

    The linear side tests ``J(t) = c t`` on ``(0, eps]``.  The exponential
    side fits ``f(x) = c' exp(c x)`` on ``x < F^-1(eps)`` from two points and
    checks the fit at relative tolerance ``fit_tol``.  The two verdicts must
    agree, and when both hold so must the two rates.
    """
    J = m.profile
    ts = np.linspace(eps / n, eps, n)
    c_lin = J(eps) / eps
    lin_err = max(abs(J(float(t)) - c_lin * t) for t in ts)
    linear = lin_err <= linear_tol

    lo_q = max(1e-6, 10 * m.quantile_eps)
    qs = np.geomspace(lo_q, eps, n)
    xs = np.array([m.quantile(float(q)) for q in qs])
    fs = np.array([m.density(float(x)) for x in xs])
    x1, x2 = xs[0], xs[-1]
    c_exp = (math.log(fs[-1]) - math.log(fs[0])) / (x2 - x1)
    c_pre = fs[0] / math.exp(c_exp * x1)
    fit_err = float(np.max(np.abs(fs / (c_pre * np.exp(c_exp * xs)) - 1.0)))
    exponential = fit_err <= fit_tol

    rep = VerificationReport("exp-equivalence", 1, 0, 0.0)
    rep.extra = {"linear_profile": linear, "exponential_tail": exponential,
                 "c_linear": c_lin, "c_exponential": c_exp, "c_prefactor": c_pre,
                 "linear_error": lin_err, "fit_error": fit_err, "eps": eps}
    if linear != exponential:
        rep._add(abs(lin_err - fit_err), {"linear_profile": linear,
                                         "exponential_tail": exponential})
    elif linear and abs(c_lin - c_exp) > fit_tol * max(1.0, abs(c_lin)):
        rep._add(abs(c_lin - c_exp), {"c_linear": c_lin, "c_exponential": c_exp})
    elif not linear:
        rep.status = NOT_APPLICABLE
    return rep._close()


# -- suite dispatch --------------------------------------------------------

SUITES = ("shifting", "theorem-main", "reducer", "continuity", "exp-equivalence",
          "uniqueness")


def run_suite(name: str, m: MeasureModel, trials: int | None = None, seed: int = 42,
              grid: int | None = None) -> VerificationReport:
    if name == "shifting":
        return check_shifting_property(m, trials or 10_000, seed)
    if name == "theorem-main":
        return verify_theorem_main(m, grid or 40)
    if name == "reducer":
        return verify_reducer(m, trials or 1000, seed)
    if name == "continuity":
        return verify_continuity(m)
    if name == "exp-equivalence":
        return verify_exp_equivalence(m)
    if name == "uniqueness":
        return verify_uniqueness(m, grid or 40)
    raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
