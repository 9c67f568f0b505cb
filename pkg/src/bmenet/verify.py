"""Reproducible verification suites behind ``bmenet verify``.

Each suite returns a list of check records ``{"check", "passed", ...}``.
Randomised suites draw from ``random.Random(seed)`` so reruns are identical.
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import comb, factorial

import numpy as np

from .enumeration import double_factorial, vertex_set
from .formats import face_report_to_dict, format_rational, network_to_dict
from .metrics import metric_from_splits, total_weight, unit_weights, weighted_split_system
from .optimizer import minimize
from .polytope import (
    _matrix_affine_dimension,
    bme51_facets,
    bme_tree_facets,
    nesting_violations,
    refinement_face,
)
from .splits import (
    CircularOrdering,
    Network,
    Split,
    SplitSystem,
    arc_splits,
    refines,
    sigma_splits,
    split_system,
)

SUITES = ("equalities", "facets51", "table1", "nesting", "faces", "recovery")


# ---------------------------------------------------------------------------
# random inputs
# ---------------------------------------------------------------------------


def random_network(n: int, k: int, rng: random.Random) -> Network:
    nets, _ = vertex_set(n, k)
    return nets[rng.randrange(len(nets))]


def random_weight(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(1, 40), rng.randint(1, 9))


def random_weighting(system: SplitSystem, rng: random.Random, zero_trivial: float = 0.0):
    """Positive random weights on every split; trivial splits are zeroed with probability ``zero_trivial``."""
    weights = {}
    for s in sorted(system.splits):
        if s.is_trivial and rng.random() < zero_trivial:
            weights[s] = Fraction(0)
        else:
            weights[s] = random_weight(rng)
    return weighted_split_system(system.n, weights, system.ordering)


def random_circular_system(n: int, rng: random.Random, density: float = 0.4) -> SplitSystem:
    perm = list(range(1, n + 1))
    rng.shuffle(perm)
    c = CircularOrdering(tuple(perm))
    chosen = [s for s in arc_splits(c) if not s.is_trivial and rng.random() < density]
    return split_system(n, chosen, c)


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------


def suite_equalities(max_n: int = 7) -> list[dict]:
    out = []
    for n in range(3, max_n + 1):
        for k in range(n - 2):
            nets, mat = vertex_set(n, k)
            degree = np.zeros((len(nets), n), dtype=np.int64)
            for t, (i, j) in enumerate((i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)):
                degree[:, i - 1] += mat[:, t]
                degree[:, j - 1] += mat[:, t]
            out.append({
                "check": f"degree sums n={n} k={k}",
                "passed": bool((degree == 2 ** (k + 1)).all()),
                "vertices": len(nets),
            })
            out.append({
                "check": f"component sums n={n} k={k}",
                "passed": bool((mat.sum(axis=1) == n * 2 ** k).all()),
            })
            if n in (5, 6):
                dim = _matrix_affine_dimension(mat)
                out.append({
                    "check": f"dimension n={n} k={k}",
                    "passed": dim == comb(n, 2) - n,
                    "dimension": dim,
                })
    return out


FACETS51_EXPECTED = {"split": (10, 9), "lower": (10, 9), "excluded": (30, 8), "cyclic": (12, 5)}


def suite_facets51() -> tuple[list[dict], list[dict]]:
    reports = bme51_facets()
    out = []
    for family, (count, tight) in FACETS51_EXPECTED.items():
        fam = [r for r in reports if r.family == family]
        out.append({
            "check": f"BME(5,1) {family} facets",
            "passed": len(fam) == count
            and all(r.valid and r.tight_count == tight and r.tight_affine_dim == 4 for r in fam),
            "count": len(fam),
        })
    distinct = len({tuple(r.tight_vertices) for r in reports})
    out.append({"check": "62 distinct tight sets", "passed": len(reports) == 62 and distinct == 62})
    return out, [face_report_to_dict(r) for r in reports]


def table1_expected(n: int, family: str, report) -> int:
    if family == "caterpillar":
        return factorial(n - 2)
    if family == "cherry":
        return 2 * double_factorial(2 * n - 7)
    m = len(report.split.part)
    p = n - m
    return double_factorial(2 * m - 3) * double_factorial(2 * p - 3)


def suite_table1(ns=(5, 6)) -> tuple[list[dict], list[dict]]:
    out, dumped = [], []
    for n in ns:
        reports = bme_tree_facets(n)
        for family in ("caterpillar", "cherry", "split"):
            fam = [r for r in reports if r.family == family]
            if not fam:
                continue
            ok = all(r.valid and r.tight_count == table1_expected(n, family, r) for r in fam)
            out.append({"check": f"BME({n}) {family} facets", "passed": ok, "count": len(fam)})
        dumped.extend(face_report_to_dict(r) for r in reports)
    return out, dumped


def suite_nesting(max_n: int = 6) -> list[dict]:
    out = []
    for n in range(4, max_n + 1):
        for k in range(1, n - 2):
            nets, _ = vertex_set(n, k)
            problems = [p for net in nets for p in nesting_violations(net)]
            out.append({
                "check": f"twist midpoint and barycenter n={n} k={k}",
                "passed": not problems,
                "vertices": len(nets),
                "failures": problems[:5],
            })
    return out


def faces_trial(s: SplitSystem) -> list[dict]:
    """Refinement face, minimiser, and refining networks agree for every admissible ``k``."""
    out = []
    ws = unit_weights(s)
    d = metric_from_splits(ws)
    w = total_weight(ws)
    for k in range(len(s.bridges()) + 1):
        rep = refinement_face(s, k)
        opt = minimize(d, s.n, k)
        nets, _ = vertex_set(s.n, k)
        refining = [net.key for net in nets if refines(net, s)]
        bound = 2 ** (k + 1) * w
        out.append({
            "check": f"refinement face n={s.n} k={k} [{rep.label}]",
            "passed": rep.valid
            and rep.functional.bound == bound
            and opt.minimum == bound
            and rep.tight_vertices == [net.key for net in opt.argmin] == refining,
            "bound": format_rational(bound),
            "tight_count": rep.tight_count,
        })
    return out


def suite_faces(max_n: int = 6, trials: int = 10, seed: int = 0) -> list[dict]:
    rng = random.Random(seed)
    out = []
    for n in range(4, max_n + 1):
        for _ in range(trials):
            out.extend(faces_trial(random_circular_system(n, rng)))
    return out


def recovery_trial(net: Network, rng: random.Random) -> dict:
    ws = random_weighting(sigma_splits(net), rng)
    d = metric_from_splits(ws)
    res = minimize(d, net.n, net.k)
    expected = 2 ** (net.k + 1) * total_weight(ws)
    return {
        "check": f"recovery n={net.n} k={net.k}",
        "passed": res.argmin == [net] and res.minimum == expected,
        "network": network_to_dict(net),
        "minimum": format_rational(res.minimum),
    }


def suite_recovery(max_n: int = 7, trials: int = 25, seed: int = 0) -> list[dict]:
    rng = random.Random(seed)
    out = []
    for n in range(3, max_n + 1):
        for k in range(n - 2):
            for _ in range(trials):
                out.append(recovery_trial(random_network(n, k, rng), rng))
    return out


def run_suite(name: str, seed: int = 0, quick: bool = False) -> dict:
    """Run one suite and return a JSON-ready summary."""
    reports = None
    if name == "equalities":
        checks = suite_equalities(6 if quick else 7)
    elif name == "facets51":
        checks, reports = suite_facets51()
    elif name == "table1":
        checks, reports = suite_table1()
    elif name == "nesting":
        checks = suite_nesting(5 if quick else 6)
    elif name == "faces":
        checks = suite_faces(5 if quick else 6, 3 if quick else 10, seed)
    elif name == "recovery":
        checks = suite_recovery(6 if quick else 7, 5 if quick else 25, seed)
    else:
        raise ValueError(f"unknown suite {name!r}")
    summary = {
        "suite": name,
        "passed": all(c["passed"] for c in checks),
        "checks": checks,
    }
    if reports is not None:
        summary["reports"] = reports
    return summary
