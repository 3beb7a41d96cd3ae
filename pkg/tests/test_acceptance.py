"""Acceptance criteria, one test each, at their stated tolerances.

Each test prints a single ``[ACCEPT n] PASS|FAIL`` line (shown even
without ``-s``).  Run just this file with ``pytest tests/test_acceptance.py -v``.
"""
import math
import time

import numpy as np
import pytest

from isodeficit import (
    CustomProfile,
    Domain,
    Gaussian,
    K,
    K_inverse,
    Laplace,
    Logistic,
    asymmetry,
    gaussian_asymptotic_ratio,
    lower_bound_perimeter,
    m_of,
    perimeter,
    perturbed_profile,
    scan,
    snap_lambda,
)
from isodeficit.verifier import check_shifting_property, enumerate_sets, random_set, verify_reducer


@pytest.fixture
def report(capsys):
    def emit(n, title, ok, detail=""):
        with capsys.disabled():
            print(f"\n[ACCEPT {n}] {'PASS' if ok else 'FAIL'}  {title}  {detail}")
    return emit


def builtins():
    return {"gaussian": Gaussian(), "logistic": Logistic(), "laplace": Laplace()}


def test_1_sharpness(report):
    t0 = time.perf_counter()
    worst, domains = 0.0, set()
    for m in builtins().values():
        rows, skipped = scan(m, n=50)
        assert skipped == 0 and len(rows) == 2500
        for r in rows:
            worst = max(worst, abs(r.optimal_perimeter - r.bound))
            domains.add(r.domain)
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-9 and domains == set(Domain) and elapsed < 30
    report(1, "sharpness on 50x50 grids", ok, f"worst={worst:.2e} time={elapsed:.1f}s")
    assert ok


def test_2_brute_force_bound(report):
    m = Gaussian()
    t0 = time.perf_counter()
    e = enumerate_sets(m, k_max=2, grid_n=40)
    worst = -math.inf
    violations = 0
    for mu, lam, per in zip(e.mu, e.lam, e.perimeter):
        gap = lower_bound_perimeter(m, mu, snap_lambda(mu, lam)) - per
        worst = max(worst, gap)
        violations += gap > 1e-7
    elapsed = time.perf_counter() - t0
    ok = violations == 0 and elapsed < 120
    report(2, "brute-force lower bound", ok,
           f"sets={len(e.sets)} violations={violations} worst_gap={worst:.2e} time={elapsed:.1f}s")
    assert ok


def test_3_exponential_degeneracy(report):
    m = Laplace()
    rows, _ = scan(m, n=50)
    first = [r for r in rows if r.lambda_ <= min(r.mu, 1 - r.mu)]
    worst_k = max(abs(K(m, min(r.mu, 1 - r.mu), r.lambda_)) for r in first)
    e = enumerate_sets(m, k_max=2, grid_n=40)
    J = m.profile
    zero = sum(1 for mu, lam, per in zip(e.mu, e.lam, e.perimeter)
               if lam > 1e-6 and abs(per - J(mu)) <= 1e-12)
    ok = worst_k <= 1e-12 and zero > 0 and len(first) > 0
    report(3, "Laplace K vanishes on the first branch", ok,
           f"cells={len(first)} max|K|={worst_k:.1e} zero_deficit_sets={zero}")
    assert ok


def test_4_shifting_both_directions(report):
    failures = {name: check_shifting_property(m, 10_000, 42).failures
                for name, m in builtins().items()}
    bad = check_shifting_property(CustomProfile(perturbed_profile, name="perturbed"), 10_000, 42)
    ok = all(v == 0 for v in failures.values()) and bad.failures >= 1
    report(4, "shifting property", ok, f"builtins={failures} non-concave={bad.failures}")
    assert ok


def test_5_reducer_conservation(report):
    m = Gaussian()
    t0 = time.perf_counter()
    reps = [verify_reducer(m, trials=1000, seed=s) for s in (1, 2, 3)]
    elapsed = time.perf_counter() - t0
    fails = sum(r.failures for r in reps)
    drift = max(r.extra["worst_trace_drift"] for r in reps)
    term = max(r.extra["worst_terminal_error"] for r in reps)
    ok = fails == 0 and drift <= 1e-9 and term <= 1e-8 and elapsed < 60
    report(5, "reducer conservation", ok,
           f"failures={fails} drift={drift:.1e} terminal={term:.1e} time={elapsed:.1f}s")
    assert ok


def test_6_continuity(report):
    g = Gaussian()
    seq = [K_inverse(g, 0.25, 2.0 ** -k) for k in range(1, 31)]
    mono = all(b <= a for a, b in zip(seq, seq[1:]))
    lap = K_inverse(Laplace(), 0.3, 0.0)
    ok = mono and seq[-1] < 0.01 and lap == 0.3
    report(6, "continuity and the exponential counterexample", ok,
           f"K_inv(2^-30)={seq[-1]:.3e} laplace={lap!r}")
    assert ok


def test_7_gaussian_asymptotic(report):
    ys = [10.0 ** -k for k in range(3, 9)]
    ratios = [gaussian_asymptotic_ratio(y) for y in ys]
    dist = [abs(r - 1) for r in ratios]
    toward = all(b < a for a, b in zip(dist, dist[1:]))
    ok = 0.8 < ratios[-1] < 1.25 and toward
    report(7, "Gaussian small-asymmetry ratio", ok,
           "ratios=" + ",".join(f"{r:.4f}" for r in ratios))
    assert ok


def test_8_reconstruction(report):
    lap = Laplace()
    custom = CustomProfile(lambda t: min(t, 1.0 - t), name="laplace-profile")
    ps = np.linspace(0.01, 0.99, 197)
    recon = max(abs(custom.quantile(float(p)) - lap.quantile(float(p))) for p in ps)
    grid = np.concatenate([np.geomspace(1e-8, 0.5, 200), 1 - np.geomspace(1e-8, 0.5, 200)])
    trip = max(abs(m.cdf(m.quantile(float(p))) - p)
               for m in builtins().values() for p in grid)
    ok = recon <= 1e-8 and trip <= 1e-10
    report(8, "quantile reconstruction from a profile", ok,
           f"recon={recon:.1e} roundtrip={trip:.1e}")
    assert ok


def test_9_complement_invariance(report):
    bad = 0
    for m in builtins().values():
        for k in range(10_000 // 3 + 1):
            s = random_set(m, np.random.default_rng([2024, k]))
            c = s.complement()
            if (perimeter(s, m) != perimeter(c, m) or m_of(s, m) != m_of(c, m)
                    or asymmetry(s, m).lambda_ != asymmetry(c, m).lambda_):
                bad += 1
    ok = bad == 0
    report(9, "complement invariance (exact)", ok, f"sets={3 * (10_000 // 3 + 1)} mismatches={bad}")
    assert ok
