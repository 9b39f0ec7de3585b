"""End-to-end acceptance checks, one per criterion, each timed.

Run under pytest, or directly with ``python tests/test_acceptance.py`` for the PASS/FAIL summary alone.
"""

import random
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

from affine_klein.affine import grid, hirsch_consistency_scan, trace_constraint
from affine_klein.classify import (
    B1,
    B2,
    REJECT_A2_B1,
    REJECT_A3_B2,
    FamilyId,
    enumerate_families,
    family_template,
    rejected_template,
    solve_linear_relation,
)
from affine_klein.cli import execute
from affine_klein.cohomology import full_cohomology, h2_twisted, rho
from affine_klein.fibration import chern_from_surgery_pair, surgery_coverage
from affine_klein.intlinalg import FGAbelianGroup, IntMatrix
from affine_klein.kleingroup import evaluate, is_free_bounded, normal_form, random_word
from affine_klein.suites import random_int_matrix, snf_failures

GOLDEN = Path(__file__).parent / "golden" / "families.txt"
FAMILIES = [FamilyId("F1"), FamilyId("F2", 1), FamilyId("F2", 3), FamilyId("F3"), FamilyId("F4", 2), FamilyId("F4", 6)]


def classification_table():
    code, out, _ = execute(["families"])
    rows = enumerate_families()
    admissible = [r.label for r in rows if r.kind == "admissible"]
    rejected = {r.label: r.certificate for r in rows if r.kind == "rejected"}
    ok = (
        code == 0
        and out == GOLDEN.read_text()
        and admissible == ["F1", "F2", "F3", "F4"]
        and set(rejected) == {"A2/B1", "A3/B2"}
        and all(v.startswith("translation of b^2 vanishes") for v in rejected.values())
    )
    return ok, f"{len(admissible)} admissible, {len(rejected)} rejected, golden match={out == GOLDEN.read_text()}"


def closed_form_h2(i, n):
    if i == 1:
        return FGAbelianGroup(1, (2,))
    if i == 2:
        # Z/2 + Z/n in invariant factors: Z/2 + Z/n for even n, Z/2n for odd n, Z/2 when n = 1
        if n == 1:
            return FGAbelianGroup(0, (2,))
        return FGAbelianGroup(0, (2, n) if n % 2 == 0 else (2 * n,))
    if i == 3:
        return FGAbelianGroup(1)
    return FGAbelianGroup(0, (4 * n,))


def cohomology_table():
    bad = [(i, n) for i in (1, 2, 3, 4) for n in range(1, 11) if h2_twisted(rho(i, n)) != closed_form_h2(i, n)]
    return not bad, f"40 cases, mismatches={bad}"


def brute_force_relation(B, bound):
    b = B.tolist()
    r = range(-bound, bound + 1)
    out = set()
    for p in r:
        for q in r:
            for s in r:
                for t in r:
                    if p * t - q * s != 1 or p + t != 2:
                        continue
                    a = [[p, q], [s, t]]
                    ab = [[sum(a[i][k] * b[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
                    if [[sum(ab[i][k] * a[k][j] for k in range(2)) for j in range(2)] for i in range(2)] == b:
                        out.add(IntMatrix(a))
    return out


def linear_relation_solver():
    details = []
    ok = True
    for name, B in (("B1", B1), ("B2", B2)):
        sol = solve_linear_relation(B, 4)
        found, symbolic, brute = set(sol.matrices), sol.instantiated(), brute_force_relation(B, 4)
        extras, misses = found - symbolic, symbolic - found
        ok &= not extras and not misses and found == brute
        details.append(f"{name}: {len(found)} solutions, extras={len(extras)}, misses={len(misses)}")
    return ok, "; ".join(details)


def hirsch_property():
    pts = [Fraction(k, 4) for k in range(-4, 5)]
    bad = hirsch_consistency_scan(3, grid(pts))
    return not bad, f"grid 9x9, counterexamples={len(bad)}"


def trace_constraint_scan():
    violations = checked = 0
    r = range(-5, 6)
    for a in r:
        for b in r:
            for c in r:
                for d in r:
                    det = a * d - b * c
                    if abs(det) != 1 or 1 - (a + d) + det != 0:
                        continue
                    checked += 1
                    tc = trace_constraint(IntMatrix([[a, b], [c, d]]))
                    want = 2 if det == 1 else 0
                    if not tc.applicable or tc.expected_trace != want or a + d != want:
                        violations += 1
    return violations == 0 and checked > 0, f"{checked} matrices, violations={violations}"


def freeness():
    rng = random.Random(2024)
    fails = []
    for fam in FAMILIES:
        h = family_template(fam)
        for _ in range(5):
            sigma = {"x": Fraction(rng.randint(1, 40), rng.randint(1, 9)), "y": Fraction(rng.randint(1, 40), rng.randint(1, 9))}
            if not is_free_bounded(h, sigma, 8):
                fails.append((str(fam), sigma))
    witnesses = []
    for rej in (REJECT_A2_B1, REJECT_A3_B2):
        res = is_free_bounded(rejected_template(rej, 2), {"x": 1, "y": 1}, 8)
        witnesses.append(res.witness)
        if res or res.witness.length > 2:
            fails.append(rej.tag)
    return not fails, f"{len(FAMILIES)} templates x 5 assignments, rejected witnesses={[str(w) for w in witnesses]}, failures={fails}"


def snf_oracle():
    rng = random.Random(0)
    fails = sum(1 for _ in range(1000) if snf_failures(random_int_matrix(rng, 4, 20)))
    return fails == 0, f"1000 matrices, failures={fails}"


def chern_realization():
    rng = random.Random(11)
    problems = []
    for i in (1, 2, 3, 4):
        for n in range(1, 6):
            r = rho(i, n)
            cov = surgery_coverage(r)
            if not (cov.covers_torsion and cov.generates_free):
                problems.append(f"rho{i}({n}) coverage")
            if not chern_from_surgery_pair(r, 0, 0).is_zero:
                problems.append(f"rho{i}({n}) zero")
            for _ in range(100):
                m1, n1, m2, n2 = (rng.randint(-50, 50) for _ in range(4))
                lhs = chern_from_surgery_pair(r, m1 + m2, n1 + n2)
                if lhs != chern_from_surgery_pair(r, m1, n1) + chern_from_surgery_pair(r, m2, n2):
                    problems.append(f"rho{i}({n}) additivity")
                    break
    return not problems, f"20 representations, problems={problems}"


def word_normal_form():
    rng = random.Random(5)
    bad = 0
    for fam in FAMILIES:
        h = family_template(fam)
        for _ in range(1000):
            w = random_word(rng, 12)
            if evaluate(h, w) != evaluate(h, normal_form(w)):
                bad += 1
    return bad == 0, f"{1000 * len(FAMILIES)} words, mismatches={bad}"


def euler_check():
    bad = [(i, n) for i in (1, 2, 3, 4) for n in range(1, 11) if full_cohomology(rho(i, n)).euler_rank_sum != 0]
    return not bad, f"40 cases, nonzero={bad}"


CRITERIA = [
    (1, "classification table", 1.0, classification_table),
    (2, "cohomology table", 1.0, cohomology_table),
    (3, "linear-relation solver", 10.0, linear_relation_solver),
    (4, "Hirsch property scan", 10.0, hirsch_property),
    (5, "trace constraint", None, trace_constraint_scan),
    (6, "freeness", None, freeness),
    (7, "SNF oracle", None, snf_oracle),
    (8, "Chern realization", None, chern_realization),
    (9, "word normal form", None, word_normal_form),
    (10, "Euler characteristic", None, euler_check),
]


def run(criterion):
    num, name, limit, fn = criterion
    start = time.perf_counter()
    ok, detail = fn()
    elapsed = time.perf_counter() - start
    timely = limit is None or elapsed < limit
    budget = f" (limit {limit:g}s)" if limit else ""
    line = f"{'PASS' if ok and timely else 'FAIL'} criterion {num:>2} {name}: {detail}; {elapsed:.2f}s{budget}"
    return ok, timely, line


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda c: f"criterion{c[0]}")
def test_criterion(criterion, capsys):
    ok, timely, line = run(criterion)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line
    assert timely, line


if __name__ == "__main__":
    results = [run(c) for c in CRITERIA]
    for _, _, line in results:
        print(line)
    sys.exit(0 if all(ok and t for ok, t, _ in results) else 1)
