"""Symmetric log-concave probability measures on the real line.

Every measure exposes its density ``f``, distribution function ``F``, quantile
``F^{-1}`` and isoperimetric profile ``J(r) = f(F^{-1}(r))``.  Three families
have closed forms (Gaussian, logistic, Laplace).  :class:`CustomProfile`
describes a measure through its profile alone and rebuilds the quantile from
``F^{-1}(r) = int_{1/2}^{r} dt / J(t)``.
"""
from __future__ import annotations

import enum
import json
import math
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
from scipy import integrate, optimize, special

from .errors import AsymmetricMeasure, QuantileOutOfBand

__all__ = [
    "Kind",
    "MeasureModel",
    "Gaussian",
    "Logistic",
    "Laplace",
    "CustomProfile",
    "ConcavityReport",
    "check_profile_concavity",
    "satisfies_H",
    "profile_from_knots",
    "perturbed_profile",
    "measure_from_config",
    "load_measure",
]

_SQRT_2PI = math.sqrt(2.0 * math.pi)
_EPS = np.finfo(float).eps


class Kind(str, enum.Enum):
    GAUSSIAN = "gaussian"
    LOGISTIC = "logistic"
    LAPLACE = "laplace"
    CUSTOM = "custom"


class MeasureModel:
    """Common interface of the supported measures.

    Subclasses provide ``density``, ``cdf``, ``sf`` and ``_quantile_left``
    (the quantile on ``(0, 1/2]``); everything else is derived here using the
    symmetry ``F^{-1}(1 - p) = -F^{-1}(p)``.
    """

    kind: Kind
    prob_tol: float = 1e-12
    quantile_eps: float = 1e-9

    @property
    def support(self) -> tuple[float, float]:
        return (-math.inf, math.inf)

    @property
    def params(self) -> dict:
        return {}

    def density(self, x: float) -> float:
        raise NotImplementedError

    def cdf(self, x: float) -> float:
        raise NotImplementedError

    def sf(self, x: float) -> float:
        """Survival function ``1 - F(x)``, computed as ``F(-x)``."""
        return self.cdf(-x)

    def _quantile_left(self, p: float) -> float:
        raise NotImplementedError

    def _check_band(self, p: float) -> None:
        pass

    def quantile(self, p: float) -> float:
        p = float(p)
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"probability out of range: {p!r}")
        if p == 0.0:
            return self.support[0]
        if p == 1.0:
            return self.support[1]
        self._check_band(p)
        if p == 0.5:
            return 0.0
        if p < 0.5:
            return self._quantile_left(p)
        return -self._quantile_left(1.0 - p)

    def profile(self, r: float) -> float:
        """Isoperimetric profile ``J(r) = f(F^{-1}(r))``, zero at 0 and 1."""
        r = float(r)
        if r <= 0.0 or r >= 1.0:
            return 0.0
        t = min(r, 1.0 - r)
        return self.density(self.quantile(t))

    def mass(self, lo: float, hi: float) -> float:
        """Measure of the interval ``(lo, hi)``."""
        if hi <= lo:
            return 0.0
        if lo >= 0.0:
            return max(self.sf(lo) - self.sf(hi), 0.0)
        return max(self.cdf(hi) - self.cdf(lo), 0.0)

    def boundary_density(self, x: float) -> float:
        """Density used for perimeters: one-sided limit at finite support ends."""
        return self.density(x)

    def to_config(self) -> dict:
        return {"kind": self.kind.value, "params": self.params}

    def _polish(self, x: float, p: float) -> float:
        # Closed-form inverse, refined by bracketed root finding if needed.
        if p <= 0.5:
            resid = lambda z: self.cdf(z) - p
        else:
            resid = lambda z: (1.0 - p) - self.sf(z)
        if abs(resid(x)) <= self.prob_tol or not math.isfinite(x):
            return x
        step = max(1e-8, 1e-8 * abs(x))
        lo, hi = x - step, x + step
        while resid(lo) > 0:
            step *= 2
            lo = x - step
        while resid(hi) < 0:
            step *= 2
            hi = x + step
        return optimize.brentq(resid, lo, hi, xtol=1e-300, rtol=4 * _EPS)


@dataclass(frozen=True)
class Gaussian(MeasureModel):
    """Standard normal distribution."""

    prob_tol: float = 1e-12
    quantile_eps: float = 1e-9
    kind = Kind.GAUSSIAN

    def density(self, x):
        x = float(x)
        if math.isinf(x):
            return 0.0
        return math.exp(-0.5 * x * x) / _SQRT_2PI

    def cdf(self, x):
        return float(special.ndtr(float(x)))

    def _quantile_left(self, p):
        return self._polish(float(special.ndtri(p)), p)


@dataclass(frozen=True)
class Logistic(MeasureModel):
    """Logistic distribution with scale ``s``; ``J(r) = r (1 - r) / s``."""

    scale: float = 1.0
    prob_tol: float = 1e-12
    quantile_eps: float = 1e-9
    kind = Kind.LOGISTIC

    def __post_init__(self):
        if not self.scale > 0:
            raise ValueError("logistic scale must be positive")

    @property
    def params(self):
        return {"scale": self.scale}

    def density(self, x):
        x = float(x)
        if math.isinf(x):
            return 0.0
        e = math.exp(-abs(x) / self.scale)
        return e / (self.scale * (1.0 + e) ** 2)

    def cdf(self, x):
        return float(special.expit(float(x) / self.scale))

    def _quantile_left(self, p):
        return self._polish(self.scale * (math.log(p) - math.log1p(-p)), p)


@dataclass(frozen=True)
class Laplace(MeasureModel):
    """Two-sided exponential with rate ``c``; ``J(r) = c min(r, 1 - r)``."""

    rate: float = 1.0
    prob_tol: float = 1e-12
    quantile_eps: float = 1e-9
    kind = Kind.LAPLACE

    def __post_init__(self):
        if not self.rate > 0:
            raise ValueError("laplace rate must be positive")

    @property
    def params(self):
        return {"rate": self.rate}

    def density(self, x):
        x = float(x)
        if math.isinf(x):
            return 0.0
        return 0.5 * self.rate * math.exp(-self.rate * abs(x))

    def cdf(self, x):
        x = float(x)
        if x <= 0:
            return 0.5 * math.exp(self.rate * x)
        return 1.0 - 0.5 * math.exp(-self.rate * x)

    def _quantile_left(self, p):
        return self._polish(math.log(2.0 * p) / self.rate, p)


# Dyadic panels (b_{k+1}, b_k] with b_k = 2^{-k-1} partition (0, 1/2].
_MAX_PANELS = 1000


@dataclass(frozen=True, eq=False)
class CustomProfile(MeasureModel):
    """Measure defined only by a concave symmetric profile ``J`` on (0, 1).

    The quantile is reconstructed as ``int_{1/2}^{p} dt / J(t)``, integrated
    with adaptive Gauss-Kronrod on dyadic panels accumulating toward the
    endpoint singularity; ``F`` is obtained by bracketed inversion.

    Parameters
    ----------
    profile_fn : callable
        ``J`` on (0, 1); must be positive and satisfy ``J(t) = J(1 - t)``.
    name : str
        Label used in reports.
    support_half_width : float, optional
        ``b_f`` if known.  By default it is detected from the panel sums:
        finite when the tail integral of ``1/J`` converges.
    """

    profile_fn: Callable[[float], float]
    name: str = "custom"
    support_half_width: float | None = None
    prob_tol: float = 1e-12
    quantile_eps: float = 1e-9
    config: dict | None = None
    _panels: list = field(default_factory=lambda: [0.0], repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)
    kind = Kind.CUSTOM

    def __post_init__(self):
        t = np.linspace(0.001, 0.499, 499)
        j = np.array([self.profile_fn(float(s)) for s in t])
        jr = np.array([self.profile_fn(float(1.0 - s)) for s in t])
        if np.any(~np.isfinite(j)) or np.any(j <= 0):
            raise ValueError("profile must be positive and finite on (0, 1)")
        if np.max(np.abs(j - jr)) > 1e-9 * max(1.0, np.max(j)):
            raise AsymmetricMeasure("profile is not symmetric about 1/2")
        if self.support_half_width is None:
            object.__setattr__(self, "support_half_width", self._detect_support())

    @property
    def support(self):
        return (-self.support_half_width, self.support_half_width)

    @property
    def params(self):
        return {"name": self.name}

    def to_config(self):
        if self.config is not None:
            return dict(self.config)
        return {"kind": "custom", "params": self.params}

    def _j(self, t: float) -> float:
        return float(self.profile_fn(min(t, 1.0 - t)))

    def _panel_integral(self, k: int) -> float:
        lo, hi = 0.5 * 2.0 ** (-k - 1), 0.5 * 2.0 ** (-k)
        val, _ = integrate.quad(lambda t: 1.0 / self._j(t), lo, hi,
                                epsabs=0.0, epsrel=1e-13, limit=200)
        return val

    def _extend(self, k: int) -> None:
        # _panels[k] = int_{b_k}^{1/2} dt / J
        with self._lock:
            while len(self._panels) <= k:
                n = len(self._panels) - 1
                self._panels.append(self._panels[-1] + self._panel_integral(n))

    def _detect_support(self) -> float:
        quiet = 0
        for k in range(1, _MAX_PANELS):
            self._extend(k)
            inc = self._panels[k] - self._panels[k - 1]
            quiet = quiet + 1 if inc <= 1e-16 * self._panels[k] else 0
            if quiet >= 8:
                return self._panels[k]
        return math.inf

    def _quantile_left(self, p):
        if p <= 0.0:
            return -self.support_half_width
        k = max(0, int(math.floor(math.log2(0.5 / p))))
        # guard against log2 rounding: need b_{k+1} < p <= b_k
        while k > 0 and p > 0.5 * 2.0 ** (-k):
            k -= 1
        while p <= 0.5 * 2.0 ** (-k - 1):
            k += 1
        if k >= _MAX_PANELS:
            return -self.support_half_width
        self._extend(k)
        b = 0.5 * 2.0 ** (-k)
        rest = 0.0
        if p < b:
            rest, _ = integrate.quad(lambda t: 1.0 / self._j(t), p, b,
                                     epsabs=0.0, epsrel=1e-13, limit=200)
        return -(self._panels[k] + rest)

    def _check_band(self, p):
        eps = self.quantile_eps
        if 0.0 < p < eps or 1.0 - eps < p < 1.0:
            raise QuantileOutOfBand(
                f"p={p!r} lies within {eps} of 0 or 1; the profile quadrature "
                "would approach the singularity of 1/J")

    def _cdf_left(self, x: float) -> float:
        """``F(x)`` for ``x <= 0`` by inverting the panel quadrature."""
        if x >= 0.0:
            return 0.5
        if x <= -self.support_half_width:
            return 0.0
        k = 0
        while True:
            self._extend(k + 1)
            if -self._panels[k + 1] <= x:
                break
            k += 1
            if k + 1 >= _MAX_PANELS:
                return 0.0
        lo, hi = 0.5 * 2.0 ** (-k - 1), 0.5 * 2.0 ** (-k)
        if k + 1 == len(self._panels) - 1 and x == -self._panels[k + 1]:
            return lo
        return optimize.brentq(lambda p: self._quantile_left(p) - x, lo, hi,
                               xtol=1e-300, rtol=4 * _EPS)

    def cdf(self, x):
        x = float(x)
        if x <= 0:
            return self._cdf_left(x)
        return 1.0 - self._cdf_left(-x)

    def sf(self, x):
        x = float(x)
        if x >= 0:
            return self._cdf_left(-x)
        return 1.0 - self._cdf_left(x)

    def density(self, x):
        x = float(x)
        a = self.support_half_width
        if math.isinf(x) or abs(x) > a:
            return 0.0
        if abs(x) == a:
            return self._j(5e-324)
        p = self._cdf_left(-abs(x))
        if p <= 0.0:
            return 0.0
        return self._j(p)

    def profile(self, r):
        r = float(r)
        if r <= 0.0 or r >= 1.0:
            return 0.0
        return self._j(r)


@dataclass(frozen=True)
class ConcavityReport:
    passed: bool
    worst_violation: float
    at: tuple[float, float] | None

    def __bool__(self):
        return self.passed


def check_profile_concavity(m: MeasureModel, grid_n: int = 1001,
                            tol: float = 1e-12) -> ConcavityReport:
    """Midpoint-concavity test of the profile on a uniform interior grid.

    Every pair ``(t_{i-d}, t_{i+d})`` with ``2d <= grid_n / 4`` steps is
    compared against the value at its midpoint ``t_i``.
    """
    if grid_n < 3:
        raise ValueError("grid_n must be at least 3")
    t = np.arange(1, grid_n + 1) / (grid_n + 1)
    j = np.array([m.profile(s) for s in t])
    worst, where = 0.0, None
    for d in range(1, max(1, grid_n // 8) + 1):
        if 2 * d >= grid_n:
            break
        gap = 0.5 * (j[:-2 * d] + j[2 * d:]) - j[d:-d]
        i = int(np.argmax(gap))
        if gap[i] > worst:
            worst, where = float(gap[i]), (float(t[i]), float(t[i + 2 * d]))
    return ConcavityReport(worst <= tol, worst, where)


def satisfies_H(m: MeasureModel, eps: float = 0.1, decades: float = 6.0,
                n: int = 40, tol: float = 1e-10) -> bool:
    """Whether ``J(t)/t`` is strictly decreasing on a geometric grid of (0, eps]."""
    if not 0 < eps <= 0.25:
        raise ValueError("eps must lie in (0, 1/4]")
    t = eps * np.logspace(-decades, 0, n)
    ratio = np.array([m.profile(s) / s for s in t])
    return bool(np.all(ratio[:-1] - ratio[1:] > tol))


def _upper_hull(points: Sequence[tuple[float, float]]) -> list[tuple[float, float]]:
    hull: list[tuple[float, float]] = []
    for p in sorted(points):
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) >= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def profile_from_knots(knots, concave: bool = True) -> Callable[[float], float]:
    """Piecewise-linear profile through ``(t, J(t))`` knots.

    Knots may cover ``[0, 1/2]`` or ``[0, 1]``; they are mirrored about 1/2.
    With ``concave=True`` the least concave majorant of the knots is used.
    """
    pts = [(float(t), float(v)) for t, v in knots]
    if not pts or min(t for t, _ in pts) != 0.0:
        raise ValueError("knots must include t = 0")
    if any(not 0.0 <= t <= 1.0 for t, _ in pts):
        raise ValueError("knot abscissae must lie in [0, 1]")
    both = {}
    for t, v in pts:
        both.setdefault(t, v)
        both.setdefault(1.0 - t, v)
    pts = sorted(both.items())
    if concave:
        pts = _upper_hull(pts)
    xs = np.array([p[0] for p in pts])
    ys = np.array([p[1] for p in pts])

    def j(t):
        return float(np.interp(t, xs, ys))

    return j


def perturbed_profile(t: float) -> float:
    """A deliberately non-concave symmetric profile.

    ``t (1 - t) (1 + 0.5 sin(20 min(t, 1 - t)))``; positive on (0, 1).
    """
    s = min(t, 1.0 - t)
    return s * (1.0 - s) * (1.0 + 0.5 * math.sin(20.0 * s))


_PRESETS = {"perturbed": perturbed_profile}


def measure_from_config(cfg: dict) -> MeasureModel:
    """Build a measure from a configuration mapping.

    ``{"kind": "gaussian" | "logistic" | "laplace" | "custom", "params": {...},
    "custom_profile": ...}``.  ``custom_profile`` is either a list of
    ``[t, J]`` knots or ``{"knots": [...], "fit": "concave" | "linear"}`` or
    ``{"preset": "perturbed"}``.
    """
    extra = set(cfg) - {"kind", "params", "custom_profile"}
    if extra:
        raise ValueError(f"unknown measure config keys {sorted(extra)}; "
                         "parameters belong under 'params'")
    kind = Kind(str(cfg.get("kind", "")).lower())
    params = dict(cfg.get("params") or {})
    allowed = {Kind.GAUSSIAN: set(), Kind.LOGISTIC: {"scale"}, Kind.LAPLACE: {"rate"}}.get(
        kind, {"name", "support"}) | {"prob_tol", "quantile_eps"}
    if set(params) - allowed:
        raise ValueError(f"unknown params {sorted(set(params) - allowed)} for {kind.value}")
    tol = {k: float(params.pop(k)) for k in ("prob_tol", "quantile_eps") if k in params}
    if kind is Kind.GAUSSIAN:
        return Gaussian(**tol)
    if kind is Kind.LOGISTIC:
        return Logistic(scale=float(params.get("scale", 1.0)), **tol)
    if kind is Kind.LAPLACE:
        return Laplace(rate=float(params.get("rate", 1.0)), **tol)
    prof = cfg.get("custom_profile")
    if prof is None:
        raise ValueError("custom measure requires 'custom_profile'")
    if isinstance(prof, dict) and "preset" in prof:
        fn = _PRESETS[prof["preset"]]
        name = prof["preset"]
    else:
        knots = prof["knots"] if isinstance(prof, dict) else prof
        fit = prof.get("fit", "concave") if isinstance(prof, dict) else "concave"
        if fit not in ("concave", "linear"):
            raise ValueError(f"unknown fit {fit!r}")
        fn = profile_from_knots(knots, concave=(fit == "concave"))
        name = params.get("name", "knots")
    support = params.get("support")
    if support is not None:
        support = float(support)
    return CustomProfile(fn, name=name, support_half_width=support, config=dict(cfg), **tol)


def load_measure(path: str | Path) -> MeasureModel:
    with open(path) as fh:
        return measure_from_config(json.load(fh))
