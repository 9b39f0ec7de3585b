"""Print the family table and the twisted H^2 table for n = 1..N."""

import argparse

from affine_klein.classify import format_families_table
from affine_klein.cohomology import full_cohomology, rho


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n-max", type=int, default=10)
    args = p.parse_args()
    print(format_families_table())
    print(f"{'n':>3}  {'rho1':<10}{'rho2':<12}{'rho3':<6}{'rho4':<8}")
    for n in range(1, args.n_max + 1):
        cells = [str(full_cohomology(rho(i, n)).H2) for i in (1, 2, 3, 4)]
        print(f"{n:>3}  {cells[0]:<10}{cells[1]:<12}{cells[2]:<6}{cells[3]:<8}")


if __name__ == "__main__":
    main()
