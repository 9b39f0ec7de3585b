"""Oracle suites behind ``affine-klein verify``."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .affine import grid, hirsch_consistency_scan
from .classify import (
    REJECT_A2_B1,
    REJECT_A3_B2,
    FamilyId,
    audit_certificate,
    family_template,
    freeness_certificate,
    rejected_template,
)
from .cohomology import expected_h2, full_cohomology, h2_twisted, rho
from .intlinalg import IntMatrix, smith_normal_form
from .kleingroup import is_free_bounded

SUITES = ("hirsch", "snf", "freeness", "table")


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'}  {self.name}" + (f"  ({self.detail})" if self.detail else "")


def hirsch_suite(bound: int = 3, steps: int = 4) -> list[Check]:
    # 2*steps + 1 points per axis in [-1, 1]
    pts = [Fraction(k, steps) for k in range(-steps, steps + 1)]
    bad = hirsch_consistency_scan(bound, grid(pts))
    return [Check(f"hirsch bound={bound} grid={len(pts)}x{len(pts)}", not bad, f"{len(bad)} counterexamples")]


def random_int_matrix(rng: random.Random, max_size: int = 4, entry: int = 20) -> IntMatrix:
    m, n = rng.randint(1, max_size), rng.randint(1, max_size)
    return IntMatrix([[rng.randint(-entry, entry) for _ in range(n)] for _ in range(m)], ncols=n)


def snf_failures(m: IntMatrix) -> list[str]:
    d = smith_normal_form(m)
    out = []
    if d.U @ m @ d.V != d.S:
        out.append("U M V != S")
    if not (d.U.is_unimodular() and d.V.is_unimodular()):
        out.append("transform not unimodular")
    for i in range(d.S.nrows):
        for j in range(d.S.ncols):
            if i != j and d.S[i, j]:
                out.append("S not diagonal")
    f = list(d.factors)
    if any(x < 0 for x in f):
        out.append("negative factor")
    nz = [x for x in f if x]
    if f[: len(nz)] != nz:
        out.append("zeros before nonzero factors")
    if any(nz[i + 1] % nz[i] for i in range(len(nz) - 1)):
        out.append("divisibility chain broken")
    return out


def snf_suite(count: int = 1000, seed: int = 0) -> list[Check]:
    rng = random.Random(seed)
    failures = 0
    for _ in range(count):
        if snf_failures(random_int_matrix(rng)):
            failures += 1
    return [Check(f"snf random matrices n={count}", failures == 0, f"{failures} failures")]


def random_assignment(rng: random.Random, family: FamilyId) -> dict[str, Fraction]:
    while True:
        sigma = {"x": Fraction(rng.randint(1, 30), rng.randint(1, 7)), "y": Fraction(rng.randint(1, 30), rng.randint(1, 7))}
        if freeness_certificate(family).holds(sigma):
            return sigma


SUITE_FAMILIES = (FamilyId("F1"), FamilyId("F2", 1), FamilyId("F2", 3), FamilyId("F3"), FamilyId("F4", 2), FamilyId("F4", 4))


def freeness_suite(bound: int = 8, samples: int = 5, seed: int = 0) -> list[Check]:
    rng = random.Random(seed)
    checks = []
    for fam in SUITE_FAMILIES:
        h = family_template(fam)
        results = [is_free_bounded(h, random_assignment(rng, fam), bound) for _ in range(samples)]
        checks.append(Check(f"free {fam} bound={bound}", all(results), f"{sum(map(bool, results))}/{samples} free"))
        problems = audit_certificate(h, freeness_certificate(fam), min(bound, 4))
        checks.append(Check(f"certificate {fam}", not problems, "; ".join(problems[:3])))
    for rej in (REJECT_A2_B1, REJECT_A3_B2):
        res = is_free_bounded(rejected_template(rej, 2), {"x": Fraction(1), "y": Fraction(1)}, 2)
        ok = not res and res.witness.length <= 2
        checks.append(Check(f"not free {rej.tag}", ok, f"witness {res.witness}"))
    return checks


def table_suite(n_max: int = 10) -> list[Check]:
    checks = []
    for i in (1, 2, 3, 4):
        bad = []
        euler = []
        for n in range(1, n_max + 1):
            r = rho(i, n)
            if h2_twisted(r) != expected_h2(i, n):
                bad.append(n)
            if full_cohomology(r).euler_rank_sum != 0:
                euler.append(n)
        checks.append(Check(f"H2 rho{i} n=1..{n_max}", not bad, f"mismatch at n={bad}" if bad else str(expected_h2(i, 1 if i != 2 else 3))))
        checks.append(Check(f"euler rho{i} n=1..{n_max}", not euler, ""))
    return checks


def run_suite(name: str, bound: int | None = None) -> list[Check]:
    if name == "hirsch":
        return hirsch_suite(bound or 3)
    if name == "snf":
        return snf_suite()
    if name == "freeness":
        return freeness_suite(bound or 8)
    if name == "table":
        return table_suite()
    raise ValueError(f"unknown suite {name!r}")
