"""Built-in acceptance suites, run by ``cube-om selftest``.

Each suite checks the engine against an oracle from :mod:`cube_om.oracles`
or against a second engine path, for every n from 2 up to the requested cap.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable

from .core import check_dimension, members, num_vertices
from .errors import CubeError
from .geometry import (
    SubcubeDescriptor,
    TripleKind,
    classify_triple,
    enumerate_rectangles,
    generate_subcube,
    recognize_subcube,
    recover_descriptor,
    rectangle_count,
)
from .matroid import HyperplaneCatalog, Kind, classify_hyperplane, enumerate_hyperplanes
from .normalize import normalize, uniqueness_check
from .orientation import (
    aff_orientation,
    family_R,
    is_acyclic,
    orthogonality_violations,
    radon_signature,
)
from . import oracles
from .reconstruct import Verdict, verify_conjecture

SELFTEST_MAX_N = 4
DEFAULT_SEED = 20240601
RANDOM_SAMPLES = 100


@dataclass
class SuiteResult:
    name: str
    passed: bool
    checked: int
    failures: list[str] = field(default_factory=list)

    def record(self) -> dict:
        return {"suite": self.name, "passed": self.passed, "checked": self.checked, "failures": self.failures[:5]}


class _Suite:
    def __init__(self, name: str):
        self.result = SuiteResult(name, True, 0)

    def check(self, ok: bool, what: str) -> None:
        self.result.checked += 1
        if not ok:
            self.result.passed = False
            self.result.failures.append(what)


def _dims(max_n: int) -> range:
    return range(2, max_n + 1)


def suite_structure(max_n: int, catalogs: dict[int, HyperplaneCatalog]) -> SuiteResult:
    s = _Suite("structure_counts")
    for n in _dims(max_n):
        cat = catalogs[n]
        scan = enumerate_hyperplanes(n, method="scan")
        s.check(scan == cat, f"n={n}: scan and translate catalogs differ")
        ref = oracles.hyperplanes_by_closure(n)
        s.check(ref == {frozenset(members(H.points)) for H in cat}, f"n={n}: catalog differs from closure oracle")
        rects = {frozenset(members(r.points)) for r in enumerate_rectangles(n)}
        s.check(rects == oracles.rectangles_by_rank(n), f"n={n}: rectangles differ from rank oracle")
        s.check(len(rects) == rectangle_count(n), f"n={n}: rectangle count formula")
        kinds = [classify_hyperplane(H).kind for H in cat]
        s.check(kinds.count(Kind.FACET) == 2 * n, f"n={n}: facet count")
        s.check(kinds.count(Kind.SKEW_FACET) == n * (n - 1), f"n={n}: skew-facet count")
    return s.result


def suite_classification(max_n: int, catalogs: dict[int, HyperplaneCatalog]) -> SuiteResult:
    s = _Suite("hyperplane_classification")
    for n in _dims(max_n):
        half = 1 << (n - 1)
        for H in catalogs[n]:
            other = classify_hyperplane(H).kind is Kind.OTHER
            s.check(H.size <= half, f"n={n}: {H.key} exceeds half the cube")
            s.check((H.size == half) == (not other), f"n={n}: {H.key} size/kind mismatch")
    return s.result


def _all_descriptors(n: int):
    coords = list(range(n))
    for labels in itertools.product(range(n + 1), repeat=n):
        # label 0 = residual, label j = block j; keep only labelings using 1..k contiguously
        k = max(labels)
        if set(labels) - {0} != set(range(1, k + 1)):
            continue
        blocks = [sum(1 << c for c in coords if labels[c] == j) for j in range(1, k + 1)]
        if [b & -b for b in blocks] != sorted(b & -b for b in blocks):
            continue
        for base in range(num_vertices(n)):
            yield SubcubeDescriptor(n, base, tuple(blocks))


def suite_subcubes(max_n: int, catalogs: dict[int, HyperplaneCatalog]) -> SuiteResult:
    s = _Suite("subcube_roundtrip")
    for n in _dims(max_n):
        seen = set()
        for d in _all_descriptors(n):
            S = generate_subcube(d)
            seen.add(S)
            back = recover_descriptor(S, n)
            s.check(back == d.canonical(), f"n={n}: {d} recovered as {back}")
            s.check(recognize_subcube(S, n) == d.k, f"n={n}: {d} not recognized")
        for F in oracles.subcube_sets(n):
            S = sum(1 << v for v in F)
            s.check(S in seen and recognize_subcube(S, n) is not None, f"n={n}: flat {sorted(F)} not recognized")
        for H in catalogs[n]:
            k = recognize_subcube(H.points, n)
            s.check((k == n - 1) == (H.size == 1 << (n - 1)), f"n={n}: hyperplane {H.key} subcube status")
    return s.result


def suite_triples(max_n: int) -> SuiteResult:
    s = _Suite("triple_classification")
    for n in _dims(max_n):
        for v, v1, v2 in itertools.combinations(range(num_vertices(n)), 3):
            got = classify_triple(v, v1, v2)
            ref = oracles.plane_fourth_points(v, v1, v2, n)
            if got.kind is TripleKind.NO_FOURTH_POINT:
                s.check(not ref, f"n={n}: {(v, v1, v2)} has fourth points {sorted(ref)}")
            else:
                s.check(ref == {got.fourth}, f"n={n}: {(v, v1, v2)} -> {got}, oracle {sorted(ref)}")
    return s.result


def suite_orthogonality(max_n: int, catalogs: dict[int, HyperplaneCatalog]) -> SuiteResult:
    s = _Suite("orthogonality")
    for n in _dims(max_n):
        cat = catalogs[n]
        aff = aff_orientation(n, cat)
        for Y, H in zip(aff.cocircuits, cat):
            s.check(Y == oracles.side_signs(H.normal, H.offset, n), f"n={n}: cocircuit of {H.key}")
        bad = orthogonality_violations(aff.sign_matrix(), family_R(n))
        s.check(not bad.any(), f"n={n}: {int(bad.sum())} rectangle/cocircuit pairs violate orthogonality")
        if n <= 3:
            for C in oracles.circuits(n):
                supp = sum(1 << v for v in C)
                X = radon_signature(supp, n)
                s.check(X == oracles.signed_circuit(C, n), f"n={n}: Radon signs of {sorted(C)}")
                for Y in aff.cocircuits:
                    s.check((supp & Y.support).bit_count() != 1, f"n={n}: circuit meets cocircuit once")
                    s.check(oracles._orth(X, Y), f"n={n}: circuit {sorted(C)} not orthogonal")
            s.check(is_acyclic(aff) and not oracles.has_positive_circuit(aff.cocircuits, n), f"n={n}: acyclicity")
    return s.result


def suite_normalization(max_n: int, catalogs: dict[int, HyperplaneCatalog], seed: int) -> SuiteResult:
    s = _Suite("normalization_roundtrip")
    rng = random.Random(seed)
    for n in _dims(max_n):
        cat = catalogs[n]
        aff = aff_orientation(n, cat)
        res = normalize(aff, cat)
        s.check(res.A == 0 and res.normalized == aff, f"n={n}: Aff itself not fixed")
        N = num_vertices(n)
        sets = range(1 << N) if n == 2 else (rng.getrandbits(N) for _ in range(RANDOM_SAMPLES))
        for A in sets:
            res = normalize(aff.reorient(A), cat)
            s.check(res.verified and res.normalized == aff, f"n={n}: A={A:#x} not recovered")
        s.check(uniqueness_check(aff, cat), f"n={n}: uniqueness")
    return s.result


def suite_uniqueness_exhaustive(max_n: int, catalogs: dict[int, HyperplaneCatalog]) -> SuiteResult:
    s = _Suite("uniqueness_exhaustive")
    for n in _dims(max_n):
        cat = catalogs[n]
        s.check(uniqueness_check(aff_orientation(n, cat), cat, exhaustive=True), f"n={n}: exhaustive uniqueness")
    return s.result


def suite_reconstruction(max_n: int, catalogs: dict[int, HyperplaneCatalog]) -> SuiteResult:
    s = _Suite("reconstruction")
    for n in _dims(max_n):
        report = verify_conjecture(n, catalogs[n])
        s.check(report.verdict is Verdict.VERIFIED, f"n={n}: {report.record()}")
    return s.result


def run_selftest(max_n: int = SELFTEST_MAX_N, seed: int = DEFAULT_SEED, exhaustive: bool = False,
                 catalogs: dict[int, HyperplaneCatalog] | None = None) -> list[SuiteResult]:
    check_dimension(max_n, 2, SELFTEST_MAX_N)
    catalogs = dict(catalogs or {})
    for n in _dims(max_n):
        if n not in catalogs:
            catalogs[n] = enumerate_hyperplanes(n)
    suites: list[tuple[str, Callable[[], SuiteResult]]] = [
        ("structure_counts", lambda: suite_structure(max_n, catalogs)),
        ("hyperplane_classification", lambda: suite_classification(max_n, catalogs)),
        ("subcube_roundtrip", lambda: suite_subcubes(max_n, catalogs)),
        ("triple_classification", lambda: suite_triples(max_n)),
        ("orthogonality", lambda: suite_orthogonality(max_n, catalogs)),
        ("normalization_roundtrip", lambda: suite_normalization(max_n, catalogs, seed)),
        ("reconstruction", lambda: suite_reconstruction(max_n, catalogs)),
    ]
    if exhaustive:
        suites.append(("uniqueness_exhaustive", lambda: suite_uniqueness_exhaustive(max_n, catalogs)))
    results = []
    for name, run in suites:
        try:
            results.append(run())
        except CubeError as exc:
            results.append(SuiteResult(name, False, 0, [f"raised {type(exc).__name__}: {exc}"]))
    return results
