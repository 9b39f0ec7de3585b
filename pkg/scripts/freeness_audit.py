"""Compare the closed-form freeness certificates with bounded fixed-point search.

Samples parameter values on and off each certificate's zero set and reports
any disagreement between the certificate verdict and is_free_bounded.
"""

import argparse
import random
from fractions import Fraction

from affine_klein.classify import FamilyId, audit_certificate, family_template, freeness_certificate
from affine_klein.kleingroup import is_free_bounded


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--bound", type=int, default=5)
    p.add_argument("--samples", type=int, default=40)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    rng = random.Random(args.seed)
    families = [FamilyId("F1"), FamilyId("F3")] + [FamilyId("F2", n) for n in (1, 2, 3, -2)] + [FamilyId("F4", n) for n in (2, 4, -2)]
    total_bad = 0
    for fam in families:
        h = family_template(fam)
        cert = freeness_certificate(fam)
        symbolic = audit_certificate(h, cert, min(args.bound, 4))
        bad = 0
        for i in range(args.samples):
            xv = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
            yv = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
            if i % 4 == 0 and fam.label == "F4":
                # land on the w = 0 locus
                yv = -cert.nonvanishing[1].substitute({"y": 0}).evaluate({"x": xv}) / 2
            sigma = {"x": xv, "y": yv}
            if cert.holds(sigma) != bool(is_free_bounded(h, sigma, args.bound)):
                bad += 1
        total_bad += bad + len(symbolic)
        print(f"{str(fam):<10} sampled disagreements={bad:<3} symbolic audit issues={len(symbolic)}")
        for line in symbolic:
            print(f"    {line}")
    raise SystemExit(1 if total_bad else 0)


if __name__ == "__main__":
    main()
