"""Scramble family templates by random moves and check that normalisation recovers them."""

import argparse
import random
from fractions import Fraction

from affine_klein.affine import ParamAffineMap, vec
from affine_klein.classify import FamilyId, Move, family_template, identify_family, normalize, replay
from affine_klein.intlinalg import IntMatrix

SHEARS = [IntMatrix([[1, 1], [0, 1]]), IntMatrix([[1, 0], [1, 1]]), IntMatrix([[0, 1], [1, 0]]), IntMatrix([[-1, 0], [0, -1]])]


def random_move(rng):
    kind = rng.choice(["conjugate", "invert_a", "invert_b", "replace_b"])
    if kind == "conjugate":
        m = IntMatrix.identity(2)
        for _ in range(rng.randint(0, 3)):
            m = m @ rng.choice(SHEARS)
        t = vec(Fraction(rng.randint(-4, 4), rng.randint(1, 3)), Fraction(rng.randint(-4, 4), rng.randint(1, 3)))
        return Move("conjugate", ParamAffineMap(m, t))
    if kind == "replace_b":
        return Move("replace_b", k=rng.randint(-2, 2))
    return Move(kind)


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    rng = random.Random(args.seed)
    families = [FamilyId("F1"), FamilyId("F2", 1), FamilyId("F2", 5), FamilyId("F3"), FamilyId("F4", 2), FamilyId("F4", 4)]
    counts = {"ok": 0, "unresolved": 0, "wrong": 0}
    for _ in range(args.trials):
        fam = rng.choice(families)
        sigma = {"x": Fraction(rng.randint(1, 9), rng.randint(1, 3)), "y": Fraction(rng.randint(1, 9), rng.randint(1, 3))}
        h = replay(family_template(fam), [random_move(rng) for _ in range(rng.randint(1, 4))])
        rep = normalize(h, sigma)
        if rep.status != "admissible":
            counts["unresolved"] += 1
        elif rep.family == identify_family(h) and rep.replay() == rep.canonical_hom:
            counts["ok"] += 1
        else:
            counts["wrong"] += 1
    print(counts)
    raise SystemExit(0 if counts["wrong"] == 0 and counts["unresolved"] == 0 else 1)


if __name__ == "__main__":
    main()
