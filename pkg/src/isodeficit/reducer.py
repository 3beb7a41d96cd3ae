"""Perimeter-lowering reduction of an interval set to an extremal set.

The reduction works in quantile coordinates ``t = F(x)``: an interval is a
pair of endpoint quantiles, its mass is their gap and its perimeter is
``J(t_lo) + J(t_hi)``.  Translating an interval (or a hole) at fixed mass
away from the centre ``t = 1/2`` never increases the perimeter when ``J`` is
concave, and ``a + b >= 0`` in real coordinates is ``t_a + t_b >= 1`` here.

Working frame: ``mu <= 1/2`` (complement first if needed) and the left
half-line as isoperimetric projection (reflect first if needed).  With
``u = mu`` the quantile of ``-sigma`` and ``w = 1 - u`` that of ``sigma``,
the left mass ``mass(set & (0, u)) = mu - lambda/2`` is held fixed by every
step, which keeps both the measure and the asymmetry unchanged.

Every recorded step stores the set mapped back to the caller's frame.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field

from .deficit import snap_lambda
from .errors import DegenerateMeasure, ReductionError, ZeroAsymmetry
from .intervals import (
    IntervalSet,
    Projection,
    asymmetry,
    format_set,
    mu_measure,
    normalize,
    perimeter,
)
from .measure import MeasureModel

__all__ = [
    "Rule",
    "Case",
    "TraceStep",
    "ReductionTrace",
    "StructuralDecomposition",
    "decompose",
    "collapse_tails",
    "shift_inner",
    "resolve_cases",
    "reduce",
    "to_quantiles",
    "from_quantiles",
]

QInterval = tuple[float, float]


class Rule(str, enum.Enum):
    COLLAPSE_LEFT_TAIL = "CollapseLeftTail"
    COLLAPSE_RIGHT_TAIL = "CollapseRightTail"
    SHIFT_INNER_LEFT = "ShiftInnerLeft"
    SHIFT_INNER_RIGHT = "ShiftInnerRight"
    SHIFT_HOLE_LEFT = "ShiftHoleLeft"
    SHIFT_HOLE_RIGHT = "ShiftHoleRight"
    SHIFT_HOLE_TO_INFINITY = "ShiftHoleToInfinity"
    REFLECT = "Reflect"
    COMPLEMENT = "Complement"
    FINALIZE = "Finalize"


class Case(str, enum.Enum):
    BOTH_NONEMPTY = "BothNonempty"
    I_ONLY = "IOnly"
    J_ONLY = "JOnly"
    BOTH_EMPTY = "BothEmpty"


# -- quantile-coordinate helpers -------------------------------------------

def to_quantiles(s: IntervalSet, m: MeasureModel) -> list[QInterval]:
    out = []
    for lo, hi in s.intervals:
        p = 0.0 if lo == -math.inf else m.cdf(lo)
        q = 1.0 if hi == math.inf else m.cdf(hi)
        out.append((p, q))
    return _qnorm(out)


def from_quantiles(ivs, m: MeasureModel) -> IntervalSet:
    """Real-coordinate set; quantiles 0 and 1 map to half-lines."""
    raw = []
    for p, q in ivs:
        lo = -math.inf if p <= 0.0 else m.quantile(p)
        hi = math.inf if q >= 1.0 else m.quantile(q)
        raw.append((lo, hi))
    return normalize(raw)


def _qnorm(ivs) -> list[QInterval]:
    out: list[list[float]] = []
    for p, q in sorted((float(p), float(q)) for p, q in ivs):
        if q <= p:
            continue
        if out and p <= out[-1][1]:
            out[-1][1] = max(out[-1][1], q)
        else:
            out.append([p, q])
    return [(p, q) for p, q in out]


def _qcomplement(ivs) -> list[QInterval]:
    out, prev = [], 0.0
    for p, q in ivs:
        if p > prev:
            out.append((prev, p))
        prev = q
    if prev < 1.0:
        out.append((prev, 1.0))
    return out


def _qreflect(ivs) -> list[QInterval]:
    return [(1.0 - q, 1.0 - p) for p, q in reversed(ivs)]


def _qmass(ivs) -> float:
    return sum(q - p for p, q in ivs)


def _mass_below(ivs, t: float) -> float:
    return sum(max(0.0, min(q, t) - p) for p, q in ivs)


def _mass_above(ivs, t: float) -> float:
    return sum(max(0.0, q - max(p, t)) for p, q in ivs)


# -- trace -----------------------------------------------------------------

@dataclass(frozen=True)
class TraceStep:
    rule: Rule
    set_after: IntervalSet
    quantiles_after: tuple[QInterval, ...]
    perimeter_after: float
    lambda_after: float
    mu_after: float

    def to_dict(self) -> dict:
        def enc(x):
            return x if math.isfinite(x) else ("inf" if x > 0 else "-inf")

        return {
            "rule": self.rule.value,
            "set": format_set(self.set_after),
            "intervals": [[enc(lo), enc(hi)] for lo, hi in self.set_after.intervals],
            "quantiles": [list(iv) for iv in self.quantiles_after],
            "perimeter": self.perimeter_after,
            "lambda": self.lambda_after,
            "mu": self.mu_after,
        }


@dataclass
class ReductionTrace:
    steps: list[TraceStep] = field(default_factory=list)
    initial_perimeter: float = math.nan
    initial_mu: float = math.nan
    initial_lambda: float = math.nan
    case: Case | None = None

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    @property
    def rules(self) -> list[Rule]:
        return [s.rule for s in self.steps]

    def to_jsonl(self) -> str:
        return "".join(json.dumps(s.to_dict()) + "\n" for s in self.steps)

    def violations(self, tol: float = 1e-9) -> list[str]:
        """Broken trace invariants, as messages; empty when all hold."""
        out = []
        prev = self.initial_perimeter
        for k, st in enumerate(self.steps):
            if st.perimeter_after > prev + tol:
                out.append(f"step {k} ({st.rule.value}) raised perimeter "
                           f"{prev!r} -> {st.perimeter_after!r}")
            if abs(st.mu_after - self.initial_mu) > tol:
                out.append(f"step {k} ({st.rule.value}) changed mu to {st.mu_after!r}")
            if abs(st.lambda_after - self.initial_lambda) > tol:
                out.append(f"step {k} ({st.rule.value}) changed lambda to "
                           f"{st.lambda_after!r}")
            prev = st.perimeter_after
        return out


class _Frame:
    """Tracks the complement/reflection applied to reach the working frame."""

    def __init__(self, m: MeasureModel):
        self.m = m
        self.complemented = False
        self.reflected = False

    def to_original(self, ivs) -> list[QInterval]:
        out = list(ivs)
        if self.reflected:
            out = _qreflect(out)
        if self.complemented:
            out = _qcomplement(out)
        return out


_MOVES = frozenset({Rule.COLLAPSE_LEFT_TAIL, Rule.COLLAPSE_RIGHT_TAIL, Rule.SHIFT_INNER_LEFT,
                    Rule.SHIFT_INNER_RIGHT, Rule.SHIFT_HOLE_LEFT, Rule.SHIFT_HOLE_RIGHT,
                    Rule.SHIFT_HOLE_TO_INFINITY})


class _Recorder:
    def __init__(self, m: MeasureModel, frame: _Frame, trace: ReductionTrace | None):
        self.m = m
        self.frame = frame
        self.trace = trace
        self.last = None

    def __call__(self, rule: Rule, ivs) -> None:
        if self.trace is None:
            return
        orig = self.frame.to_original(_qnorm(ivs))
        # a move that left the set in place is not a step
        if rule in _MOVES and self.last is not None and tuple(orig) == self.last:
            return
        self.last = tuple(orig)
        real = from_quantiles(orig, self.m)
        mu = mu_measure(real, self.m)
        lam = asymmetry(real, self.m, mu).lambda_
        self.trace.steps.append(TraceStep(
            rule, real, tuple(orig), perimeter(real, self.m), lam, mu))


# -- decomposition ---------------------------------------------------------

@dataclass(frozen=True)
class StructuralDecomposition:
    """Parts of a working-frame set, as quantile pairs.

    ``u`` is the quantile of ``-sigma`` (equal to the set's measure) and
    ``1 - u`` that of ``sigma``.
    """

    left_tail_parts: tuple[QInterval, ...]
    straddle_left: QInterval | None
    inner_left: tuple[QInterval, ...]
    inner_right: tuple[QInterval, ...]
    straddle_right: QInterval | None
    right_tail_parts: tuple[QInterval, ...]
    sigma: float
    u: float
    reflected: bool = False

    def intervals(self) -> list[QInterval]:
        parts = list(self.left_tail_parts) + list(self.inner_left)
        parts += list(self.inner_right) + list(self.right_tail_parts)
        parts += [iv for iv in (self.straddle_left, self.straddle_right) if iv]
        return _qnorm(parts)

    def to_set(self, m: MeasureModel) -> IntervalSet:
        ivs = self.intervals()
        if self.reflected:
            ivs = _qreflect(ivs)
        return from_quantiles(ivs, m)


def _split(ivs, u: float, sigma: float, reflected: bool = False) -> StructuralDecomposition:
    w = 1.0 - u
    A, B, Ai, Bi = [], [], [], []
    I = J = None
    for p, q in ivs:
        if q <= u:
            A.append((p, q))
        elif p <= u:
            I = (p, q)
        elif p >= w:
            B.append((p, q))
        elif q >= w:
            J = (p, q)
        elif p + q < 1.0:
            Ai.append((p, q))
        else:
            Bi.append((p, q))
    return StructuralDecomposition(tuple(A), I, tuple(Ai), tuple(Bi), J, tuple(B),
                                   sigma, u, reflected)


def _left_projection(ivs, u: float, tol: float) -> bool:
    return _mass_below(ivs, u) >= _mass_above(ivs, 1.0 - u) - tol


def decompose(s: IntervalSet, m: MeasureModel) -> StructuralDecomposition:
    """Split a set of measure at most 1/2 around ``-sigma`` and ``sigma``.

    If the right half-line is the projection the set is reflected first and
    ``reflected`` is set on the result.
    """
    mu = mu_measure(s, m)
    if mu <= m.prob_tol or mu >= 1.0 - m.prob_tol:
        raise DegenerateMeasure(f"mu(s) = {mu!r}")
    if mu > 0.5:
        raise ValueError("decompose requires mu(s) <= 1/2; complement first")
    ivs = to_quantiles(s, m)
    u = _qmass(ivs)
    reflected = not _left_projection(ivs, u, m.prob_tol)
    if reflected:
        ivs = _qreflect(ivs)
    return _split(ivs, u, -m.quantile(mu), reflected)


def _collapse(d: StructuralDecomposition, record) -> StructuralDecomposition:
    left = d.left_tail_parts
    a = _qmass(left)
    if left and left != ((0.0, a),):
        left = ((0.0, a),)
        d = _replace(d, left_tail_parts=left)
        record(Rule.COLLAPSE_LEFT_TAIL, d.intervals())
    right = d.right_tail_parts
    b = _qmass(right)
    if right and right != ((1.0 - b, 1.0),):
        right = ((1.0 - b, 1.0),)
        d = _replace(d, right_tail_parts=right)
        record(Rule.COLLAPSE_RIGHT_TAIL, d.intervals())
    return d


def _replace(d: StructuralDecomposition, **kw) -> StructuralDecomposition:
    from dataclasses import replace
    return replace(d, **kw)


def collapse_tails(d: StructuralDecomposition, m: MeasureModel) -> StructuralDecomposition:
    """Replace the parts beyond ``-sigma`` (and beyond ``sigma``) by one half-line each."""
    return _collapse(d, lambda *a: None)


def _shift_inner(d: StructuralDecomposition, record) -> StructuralDecomposition:
    u = d.u
    w = 1.0 - u
    I = d.straddle_left
    inner_left = list(d.inner_left)
    while inner_left:
        p, q = inner_left.pop(0)
        anchor = I[1] if I else u
        # slides left over empty space and merges with the block at anchor
        I = (I[0] if I else u, anchor + (q - p))
        d = _replace(d, straddle_left=I, inner_left=tuple(inner_left))
        record(Rule.SHIFT_INNER_LEFT, d.intervals())
    J = d.straddle_right
    inner_right = list(d.inner_right)
    while inner_right:
        p, q = inner_right.pop()
        anchor = J[0] if J else w
        J = (anchor - (q - p), J[1] if J else w)
        d = _replace(d, straddle_right=J, inner_right=tuple(inner_right))
        record(Rule.SHIFT_INNER_RIGHT, d.intervals())
    if I and J and I[1] >= J[0]:
        d = _replace(d, straddle_left=(I[0], max(I[1], J[1])), straddle_right=None)
    return d


def shift_inner(d: StructuralDecomposition, m: MeasureModel) -> StructuralDecomposition:
    """Slide inner intervals outward until they meet the straddling blocks or +-sigma."""
    return _shift_inner(d, lambda *a: None)


# -- case analysis ---------------------------------------------------------

def _pieces(ivs, u: float):
    w = 1.0 - u
    A = I = J = B = None
    for p, q in ivs:
        if q <= u and p == 0.0 and A is None:
            A = (p, q)
        elif p <= u < q and I is None:
            I = (p, q)
        elif u < p < w <= q and J is None:
            J = (p, q)
        elif p >= w and q == 1.0 and B is None:
            B = (p, q)
        else:
            raise ReductionError(f"set {ivs} is not of the form A0 u I0 u J0 u B0 (u={u})")
    return A, I, J, B


def _assemble(*parts) -> list[QInterval]:
    return _qnorm([p for p in parts if p is not None and p[1] > p[0]])


def _check_center(p: float, q: float, right: bool, what: str) -> None:
    ok = (p + q >= 1.0) if right else (p + q <= 1.0)
    if not ok:
        raise ReductionError(
            f"{what} ({p!r}, {q!r}) has its centre on the wrong side for this shift")


def _resolve(ivs, u: float, record, frame: _Frame | None, prefer_d: bool):
    """Case analysis on the straddling blocks; returns (set, case, frame_flip)."""
    w = 1.0 - u
    A, I, J, B = _pieces(ivs, u)
    case = (Case.BOTH_NONEMPTY if I and J else Case.I_ONLY if I
            else Case.J_ONLY if J else Case.BOTH_EMPTY)

    if I and J:
        p1, q1 = I
        p2, q2 = J
        if q1 + p2 >= 1.0:
            # hole slides right until its right end sits on sigma
            h = p2 - q1
            I = (p1, w - h)
            rest = (w, q2)
            record(Rule.SHIFT_HOLE_RIGHT, _assemble(A, I, rest, B))
            b = _qmass([iv for iv in (rest, B) if iv and iv[1] > iv[0]])
            J = None
            newB = (1.0 - b, 1.0) if b > 0 else None
            if newB != B:
                B = newB
                record(Rule.COLLAPSE_RIGHT_TAIL, _assemble(A, I, B))
        else:
            # hole slides left until its left end sits on -sigma
            h = p2 - q1
            tail = (p1, u)
            J = (u + h, q2)
            record(Rule.SHIFT_HOLE_LEFT, _assemble(A, tail, J, B))
            a = _qmass([iv for iv in (A, tail) if iv and iv[1] > iv[0]])
            newA = (0.0, a) if a > 0 else None
            I = None
            if newA != A:
                A = newA
                record(Rule.COLLAPSE_LEFT_TAIL, _assemble(A, J, B))

    flip = False
    if J and not I:
        p2, q2 = J
        if B:
            _check_center(q2, B[0], True, "hole")
            J = (p2, q2 + (1.0 - B[0]))
            B = None
            record(Rule.SHIFT_HOLE_TO_INFINITY, _assemble(A, J))
        a = _qmass([A]) if A else 0.0
        r = J[1] - J[0]
        if r > a and not prefer_d:
            _check_center(J[0], J[1], True, "block")
            J = (w + a - r, w + a)
            record(Rule.SHIFT_INNER_RIGHT, _assemble(A, J))
            # mirror image, built exactly so the block still straddles u
            I = (u - a, u - a + r)
            B = (1.0 - a, 1.0) if A else None
            A = J = None
            flip = True
            if frame is not None:
                frame.reflected = not frame.reflected
            record(Rule.REFLECT, _assemble(I, B))
        else:
            _check_center(J[0], J[1], True, "block")
            B = (1.0 - r, 1.0)
            J = None
            record(Rule.SHIFT_INNER_RIGHT, _assemble(A, B))

    if I and not J:
        p1, q1 = I
        if A:
            _check_center(A[1], p1, False, "hole")
            p1 = p1 - A[1]
            A = None
            I = (p1, q1)
            record(Rule.SHIFT_HOLE_TO_INFINITY, _assemble(I, B))
        if B:
            _check_center(q1, B[0], True, "hole")
            q1 = q1 + (1.0 - B[0])
            B = None
            I = (p1, q1)
            record(Rule.SHIFT_HOLE_TO_INFINITY, _assemble(I))
        if prefer_d:
            half = I[0]
            out = _assemble((0.0, u - half), (1.0 - half, 1.0))
        else:
            out = [I]
        record(Rule.FINALIZE, out)
        return out, case, flip

    out = _assemble(A, B)
    record(Rule.FINALIZE, out)
    return out, case, flip


def resolve_cases(omega0: IntervalSet, m: MeasureModel):
    """Case analysis on a set of the form ``A0 u I0 u J0 u B0``.

    The set must have measure at most 1/2 and the left half-line as its
    projection.  Returns the extremal set and the case that applied.
    """
    mu = mu_measure(omega0, m)
    rep = asymmetry(omega0, m, mu)
    ivs = to_quantiles(omega0, m)
    u = _qmass(ivs)
    if mu > 0.5 or rep.projection is not Projection.LEFT:
        raise ValueError("resolve_cases needs mu <= 1/2 and a left projection")
    frame = _Frame(m)
    out, case, flip = _resolve(ivs, u, lambda *a: None, frame,
                               prefer_d=rep.lambda_ <= mu)
    if flip:
        out = _qreflect(out)
    return from_quantiles(out, m), case


def reduce(s: IntervalSet, m: MeasureModel) -> tuple[IntervalSet, ReductionTrace]:
    """Lower the perimeter of ``s`` to that of the extremal set with its measure and asymmetry.

    Returns the final set in the caller's frame (the extremal set or its
    mirror image) and the step-by-step trace.

    Raises
    ------
    DegenerateMeasure
        If ``mu(s)`` is 0 or 1.
    ZeroAsymmetry
        If ``s`` is already a half-line up to ``prob_tol``; the half-line is
        attached to the exception.
    """
    mu = mu_measure(s, m)
    rep = asymmetry(s, m, mu)
    if rep.lambda_ <= m.prob_tol:
        half = (IntervalSet(((-math.inf, rep.sigma_minus),))
                if rep.projection is Projection.LEFT
                else IntervalSet(((rep.sigma_plus, math.inf),)))
        raise ZeroAsymmetry("set is a half-line up to prob_tol", half_line=half)
    x = min(mu, 1.0 - mu)
    lam = snap_lambda(mu, rep.lambda_)

    trace = ReductionTrace(initial_perimeter=perimeter(s, m), initial_mu=mu,
                           initial_lambda=rep.lambda_)
    frame = _Frame(m)
    record = _Recorder(m, frame, trace)
    record.last = tuple(_qnorm(to_quantiles(s, m)))

    ivs = to_quantiles(s, m)
    if mu > 0.5:
        ivs = _qcomplement(ivs)
        frame.complemented = True
        record(Rule.COMPLEMENT, ivs)
    u = _qmass(ivs)
    if not _left_projection(ivs, u, m.prob_tol):
        ivs = _qreflect(ivs)
        frame.reflected = True
        record(Rule.REFLECT, ivs)

    d = _split(ivs, u, -m.quantile(min(mu, 1.0 - mu)))
    d = _collapse(d, record)
    d = _shift_inner(d, record)
    out, case, _ = _resolve(d.intervals(), u, record, frame, prefer_d=lam <= x)
    trace.case = case
    return from_quantiles(frame.to_original(out), m), trace
