"""Finite unions of disjoint open intervals with extended-real endpoints.

Sets are kept in a canonical form: intervals sorted, non-degenerate, and
separated by gaps of positive length.  Abutting intervals are merged, since
the shared endpoint has density one and carries no perimeter.
"""
from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import DegenerateMeasure, InvalidInterval
from .measure import MeasureModel

__all__ = [
    "IntervalSet",
    "Projection",
    "AsymmetryReport",
    "normalize",
    "mu_measure",
    "perimeter",
    "complement",
    "symmetric_difference",
    "intersection",
    "asymmetry",
    "m_of",
    "parse_set",
    "format_set",
]

Interval = tuple[float, float]


@dataclass(frozen=True)
class IntervalSet:
    intervals: tuple[Interval, ...] = ()

    def __iter__(self):
        return iter(self.intervals)

    def __len__(self):
        return len(self.intervals)

    def __bool__(self):
        return bool(self.intervals)

    @property
    def endpoints(self) -> list[float]:
        return [e for iv in self.intervals for e in iv]

    def reflect(self) -> "IntervalSet":
        """Image under ``x -> -x``."""
        return IntervalSet(tuple((-hi, -lo) for lo, hi in reversed(self.intervals)))

    def complement(self) -> "IntervalSet":
        return complement(self)

    def __str__(self):
        return format_set(self)


def normalize(raw: Iterable[Interval]) -> IntervalSet:
    """Canonical form: drop empty intervals, sort, merge overlaps and contacts."""
    items = []
    for lo, hi in raw:
        lo, hi = float(lo), float(hi)
        if math.isnan(lo) or math.isnan(hi):
            raise InvalidInterval(f"NaN endpoint in ({lo}, {hi})")
        if lo > hi:
            raise InvalidInterval(f"interval ({lo}, {hi}) has lo > hi")
        if lo < hi:
            items.append((lo, hi))
    items.sort()
    out: list[list[float]] = []
    for lo, hi in items:
        if out and lo <= out[-1][1]:
            out[-1][1] = max(out[-1][1], hi)
        else:
            out.append([lo, hi])
    return IntervalSet(tuple((lo, hi) for lo, hi in out))


def complement(s: IntervalSet) -> IntervalSet:
    out = []
    prev = -math.inf
    for lo, hi in s.intervals:
        if lo > prev:
            out.append((prev, lo))
        prev = hi
    if prev < math.inf:
        out.append((prev, math.inf))
    return IntervalSet(tuple(out))


def intersection(a: IntervalSet, b: IntervalSet) -> IntervalSet:
    out = []
    i = j = 0
    ai, bi = a.intervals, b.intervals
    while i < len(ai) and j < len(bi):
        lo = max(ai[i][0], bi[j][0])
        hi = min(ai[i][1], bi[j][1])
        if lo < hi:
            out.append((lo, hi))
        if ai[i][1] < bi[j][1]:
            i += 1
        else:
            j += 1
    return IntervalSet(tuple(out))


def symmetric_difference(a: IntervalSet, b: IntervalSet) -> IntervalSet:
    left = intersection(a, complement(b))
    right = intersection(b, complement(a))
    return normalize(left.intervals + right.intervals)


def mu_measure(s: IntervalSet, m: MeasureModel) -> float:
    total = sum(m.mass(lo, hi) for lo, hi in s.intervals)
    return min(max(total, 0.0), 1.0)


def perimeter(s: IntervalSet, m: MeasureModel) -> float:
    """Sum of the density over the finite boundary points of ``s``."""
    return sum(m.boundary_density(x) for x in s.endpoints if math.isfinite(x))


def m_of(s: IntervalSet, m: MeasureModel) -> float:
    """``min(mu(s), mu(s^c))``.

    Both masses are summed directly, so the value is bitwise invariant under
    complementation.
    """
    return min(mu_measure(s, m), mu_measure(complement(s), m))


def _canonical(s: IntervalSet, m: MeasureModel) -> tuple[IntervalSet, bool]:
    """The member of ``{s, s^c}`` used for complement-invariant quantities.

    Returns the chosen set and whether it is the complement.  The smaller
    measure wins; on a tie, the set not containing the left end of the line.
    """
    c = complement(s)
    mu_s, mu_c = mu_measure(s, m), mu_measure(c, m)
    if mu_s != mu_c:
        return (s, False) if mu_s < mu_c else (c, True)
    left_s = bool(s.intervals) and s.intervals[0][0] == -math.inf
    return (c, True) if left_s else (s, False)


class Projection(str, enum.Enum):
    LEFT = "LeftHalfLine"
    RIGHT = "RightHalfLine"


@dataclass(frozen=True)
class AsymmetryReport:
    lambda_: float
    sigma_minus: float
    sigma_plus: float
    projection: Projection
    left_value: float
    right_value: float


def asymmetry(s: IntervalSet, m: MeasureModel, mu: float | None = None) -> AsymmetryReport:
    """Distance (in measure) from ``s`` to the nearer half-line of equal mass.

    Ties, judged at ``m.prob_tol``, select the left half-line.  The two
    distances are evaluated on a fixed member of ``{s, s^c}`` (complementing
    swaps them), so ``lambda_`` is bitwise invariant under complementation.
    """
    if mu is None:
        mu = mu_measure(s, m)
    if mu <= m.prob_tol or mu >= 1.0 - m.prob_tol:
        raise DegenerateMeasure(f"asymmetry undefined for mu(s) = {mu!r}")
    sig_minus = m.quantile(mu)
    sig_plus = m.quantile(1.0 - mu)
    t, flipped = _canonical(s, m)
    mu_t = mu_measure(t, m)
    a = mu_measure(symmetric_difference(t, IntervalSet(((-math.inf, m.quantile(mu_t)),))), m)
    b = mu_measure(symmetric_difference(t, IntervalSet(((m.quantile(1.0 - mu_t), math.inf),))), m)
    left, right = (b, a) if flipped else (a, b)
    proj = Projection.LEFT if left <= right + m.prob_tol else Projection.RIGHT
    return AsymmetryReport(min(left, right), sig_minus, sig_plus, proj, left, right)


_NUM = r"[+-]?(?:inf|\d+(?:\.\d*)?(?:[eE][+-]?\d+)?(?:/\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
_INTERVAL = re.compile(rf"\(\s*({_NUM})\s*,\s*({_NUM})\s*\)")


def _parse_number(tok: str) -> float:
    tok = tok.strip().lower()
    if tok.lstrip("+-") == "inf":
        return -math.inf if tok.startswith("-") else math.inf
    if "/" in tok:
        return float(Fraction(tok))
    return float(tok)


def parse_set(text: str) -> IntervalSet:
    """Parse a literal such as ``"(-inf,-1)u(1,inf)"``.

    Endpoints are decimals, rationals (``1/3``) or ``inf``/``-inf``.  ``"{}"``
    or an empty string is the empty set.  Degenerate intervals are rejected.
    """
    text = text.strip().replace("−", "-").replace("∪", "u")
    if text in ("", "{}", "()"):
        return IntervalSet()
    parts = re.split(r"\s*[uU]\s*", text)
    raw = []
    for part in parts:
        match = _INTERVAL.fullmatch(part.strip())
        if match is None:
            raise InvalidInterval(f"cannot parse interval {part!r}")
        lo, hi = _parse_number(match.group(1)), _parse_number(match.group(2))
        if not lo < hi:
            raise InvalidInterval(f"interval {part!r} is empty or reversed")
        raw.append((lo, hi))
    return normalize(raw)


def _fmt(x: float) -> str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.15g}"


def format_set(s: IntervalSet) -> str:
    if not s.intervals:
        return "{}"
    return "u".join(f"({_fmt(lo)},{_fmt(hi)})" for lo, hi in s.intervals)
